#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "salieval/error.hpp"

namespace salieval {

// Ordered token table. Ids 0..4 are reserved specials, created up front and
// never produced by the tokenizer from raw text.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kMask = 4;
  static constexpr int kNumSpecials = 5;

  Vocab();

  // Returns the id, inserting the token if new. Special strings map to their
  // reserved ids instead of being re-added.
  int add(std::string_view token);
  std::optional<int> lookup(std::string_view token) const;
  int lookup_or_unk(std::string_view token) const;
  // Lookup that must succeed.
  int require(std::string_view token) const;

  bool contains(std::string_view token) const { return lookup(token).has_value(); }
  const std::string& token(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }
  static bool is_special(int id) { return id >= 0 && id < kNumSpecials; }
  // Positions carrying text: everything except PAD/BOS/EOS. UNK and MASK can
  // occur inside content (OOV words, LIME replacements) and stay rankable.
  static bool is_content(int id) { return id != kPad && id != kBos && id != kEos; }

  const std::vector<std::string>& tokens() const { return tokens_; }
  bool operator==(const Vocab& o) const { return tokens_ == o.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Whitespace-split, ASCII-lowercased tokens of a text line.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace salieval
