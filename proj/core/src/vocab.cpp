#include "salieval/vocab.hpp"

#include <cctype>

namespace salieval {

namespace {
const char* kSpecialNames[Vocab::kNumSpecials] = {"<pad>", "<bos>", "<eos>", "<unk>", "<mask>"};
}

Vocab::Vocab() {
  for (const char* s : kSpecialNames) {
    index_.emplace(s, static_cast<int>(tokens_.size()));
    tokens_.emplace_back(s);
  }
}

int Vocab::add(std::string_view token) {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), id);
  return id;
}

std::optional<int> Vocab::lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocab::lookup_or_unk(std::string_view token) const {
  auto id = lookup(token);
  return id ? *id : kUnk;
}

int Vocab::require(std::string_view token) const {
  auto id = lookup(token);
  if (!id) throw VocabError("token not in vocabulary: " + std::string(token));
  return *id;
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || id >= size()) throw VocabError("token id out of range: " + std::to_string(id));
  return tokens_[static_cast<size_t>(id)];
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace salieval
