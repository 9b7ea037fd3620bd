#include "salieval/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace salieval {

namespace {

using nlohmann::json;

struct RawRecord {
  std::string text;
  int label = 0;
  Provenance provenance = Provenance::kOriginal;
  std::vector<int> gt_content_positions;
};

std::string loc(const std::filesystem::path& file, size_t line_no) {
  return file.string() + ":" + std::to_string(line_no);
}

RawRecord parse_jsonl_line(const std::string& line, const std::filesystem::path& file,
                           size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(loc(file, line_no) + ": invalid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("text") || !j.contains("label"))
    throw ParseError(loc(file, line_no) + ": record must be an object with text and label");
  RawRecord r;
  if (!j["text"].is_string())
    throw ParseError(loc(file, line_no) + ": text must be a string");
  r.text = j["text"].get<std::string>();
  if (!j["label"].is_number_integer())
    throw ParseError(loc(file, line_no) + ": label must be an integer");
  r.label = j["label"].get<int>();
  if (r.label != 0 && r.label != 1)
    throw ParseError(loc(file, line_no) + ": label must be 0 or 1, got " +
                     std::to_string(r.label));
  if (j.contains("provenance")) {
    try {
      r.provenance = provenance_from_name(j["provenance"].get<std::string>());
    } catch (const Error& e) {
      throw ParseError(loc(file, line_no) + ": " + e.what());
    }
  }
  if (j.contains("gt_positions")) {
    if (!j["gt_positions"].is_array())
      throw ParseError(loc(file, line_no) + ": gt_positions must be an array");
    for (const auto& v : j["gt_positions"]) r.gt_content_positions.push_back(v.get<int>());
  }
  return r;
}

RawRecord parse_tsv_line(const std::string& line, const std::filesystem::path& file,
                         size_t line_no) {
  const size_t tab = line.rfind('\t');
  if (tab == std::string::npos)
    throw ParseError(loc(file, line_no) + ": expected text<TAB>label");
  RawRecord r;
  r.text = line.substr(0, tab);
  const std::string label_str = line.substr(tab + 1);
  if (label_str == "0")
    r.label = 0;
  else if (label_str == "1")
    r.label = 1;
  else
    throw ParseError(loc(file, line_no) + ": label must be 0 or 1, got '" + label_str + "'");
  return r;
}

std::vector<RawRecord> read_records(const std::filesystem::path& file, CorpusFormat format) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::vector<RawRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    records.push_back(format == CorpusFormat::kJsonl ? parse_jsonl_line(line, file, line_no)
                                                     : parse_tsv_line(line, file, line_no));
  }
  return records;
}

Example frame_record(const RawRecord& r, int id, const std::vector<int>& ids) {
  Example ex;
  ex.id = id;
  ex.label = r.label;
  ex.provenance = r.provenance;
  ex.tokens.reserve(ids.size() + 2);
  ex.tokens.push_back(Vocab::kBos);
  ex.tokens.insert(ex.tokens.end(), ids.begin(), ids.end());
  ex.tokens.push_back(Vocab::kEos);
  for (int p : r.gt_content_positions) ex.gt_positions.push_back(p + 1);
  return ex;
}

std::filesystem::path split_file(const std::filesystem::path& dir, Split s, CorpusFormat format) {
  const char* stem = s == Split::kTrain ? "train" : s == Split::kValidation ? "validation" : "test";
  const char* ext = format == CorpusFormat::kJsonl ? ".jsonl" : ".tsv";
  return dir / (std::string(stem) + ext);
}

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kOriginal: return "original";
    case Provenance::kSyntheticShortcut: return "synthetic-shortcut";
    case Provenance::kDistractor: return "distractor";
  }
  throw ContractError("unknown provenance");
}

Provenance provenance_from_name(std::string_view name) {
  if (name == "original") return Provenance::kOriginal;
  if (name == "synthetic-shortcut") return Provenance::kSyntheticShortcut;
  if (name == "distractor") return Provenance::kDistractor;
  throw ValidationError("unknown provenance: " + std::string(name));
}

std::vector<Example>& Corpus::split(Split s) {
  switch (s) {
    case Split::kTrain: return train;
    case Split::kValidation: return validation;
    case Split::kTest: return test;
  }
  throw ContractError("unknown split");
}

const std::vector<Example>& Corpus::split(Split s) const {
  return const_cast<Corpus*>(this)->split(s);
}

void Corpus::validate() const {
  if (train.empty()) throw ValidationError("corpus has an empty train split");
  auto check = [&](const std::vector<Example>& exs, const char* name) {
    for (const Example& ex : exs) {
      if (ex.label != 0 && ex.label != 1)
        throw ValidationError(std::string(name) + ": label outside {0,1}");
      if (ex.tokens.size() < 2 || ex.tokens.front() != Vocab::kBos || ex.tokens.back() != Vocab::kEos)
        throw ValidationError(std::string(name) + ": example not framed with BOS/EOS");
      for (int t : ex.tokens)
        if (t < 0 || t >= vocab.size())
          throw ValidationError(std::string(name) + ": token id out of vocab range");
      for (int p : ex.gt_positions)
        if (p < 0 || p >= static_cast<int>(ex.tokens.size()))
          throw ValidationError(std::string(name) + ": gt position out of range");
      if (ex.provenance != Provenance::kSyntheticShortcut && !ex.gt_positions.empty())
        throw ValidationError(std::string(name) +
                              ": gt positions on a non-synthetic example");
    }
  };
  check(train, "train");
  check(validation, "validation");
  check(test, "test");
  std::set<std::vector<int>> train_seqs;
  for (const Example& ex : train) train_seqs.insert(ex.tokens);
  for (const Example& ex : test)
    if (train_seqs.count(ex.tokens))
      throw ValidationError("test split shares an example with the train split");
}

CorpusFormat corpus_format_from_name(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "tsv") return CorpusFormat::kTsv;
  throw ConfigError("unknown corpus format: " + std::string(name));
}

Corpus load_corpus(const std::filesystem::path& dir, CorpusFormat format) {
  Corpus corpus;
  const auto train_path = split_file(dir, Split::kTrain, format);
  if (!std::filesystem::exists(train_path))
    throw IoError("missing train split: " + train_path.string());
  const auto train_records = read_records(train_path, format);
  if (train_records.empty()) throw ValidationError("empty corpus: " + train_path.string());

  // Vocabulary from the train split only, first-occurrence order.
  std::vector<std::vector<int>> train_ids;
  train_ids.reserve(train_records.size());
  for (const RawRecord& r : train_records) {
    std::vector<int> ids;
    for (const std::string& tok : tokenize(r.text)) ids.push_back(corpus.vocab.add(tok));
    train_ids.push_back(std::move(ids));
  }
  for (size_t i = 0; i < train_records.size(); ++i)
    corpus.train.push_back(frame_record(train_records[i], static_cast<int>(i), train_ids[i]));

  for (Split s : {Split::kValidation, Split::kTest}) {
    const auto path = split_file(dir, s, format);
    if (!std::filesystem::exists(path)) continue;
    const auto records = read_records(path, format);
    auto& out = corpus.split(s);
    for (size_t i = 0; i < records.size(); ++i) {
      std::vector<int> ids;
      for (const std::string& tok : tokenize(records[i].text))
        ids.push_back(corpus.vocab.lookup_or_unk(tok));
      out.push_back(frame_record(records[i], static_cast<int>(i), ids));
    }
  }
  corpus.validate();
  return corpus;
}

std::vector<Example> load_examples(const std::filesystem::path& file, CorpusFormat format,
                                   const Vocab& vocab) {
  const auto records = read_records(file, format);
  std::vector<Example> out;
  out.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    std::vector<int> ids;
    for (const std::string& tok : tokenize(records[i].text)) ids.push_back(vocab.lookup_or_unk(tok));
    out.push_back(frame_record(records[i], static_cast<int>(i), ids));
  }
  return out;
}

std::string example_text(const Example& ex, const Vocab& vocab) {
  std::string text;
  for (size_t i = 1; i + 1 < ex.tokens.size(); ++i) {
    if (!text.empty()) text.push_back(' ');
    text += vocab.token(ex.tokens[i]);
  }
  return text;
}

void save_examples(const std::filesystem::path& file, const std::vector<Example>& examples,
                   const Vocab& vocab) {
  std::filesystem::create_directories(file.parent_path().empty() ? "." : file.parent_path());
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  for (const Example& ex : examples) {
    json j;
    j["text"] = example_text(ex, vocab);
    j["label"] = ex.label;
    if (ex.provenance != Provenance::kOriginal) {
      j["provenance"] = provenance_name(ex.provenance);
      json positions = json::array();
      for (int p : ex.gt_positions) positions.push_back(p - 1);  // content-relative on disk
      j["gt_positions"] = positions;
    }
    out << j.dump() << "\n";
  }
}

void save_corpus(const std::filesystem::path& dir, const Corpus& corpus) {
  std::filesystem::create_directories(dir);
  save_examples(dir / "train.jsonl", corpus.train, corpus.vocab);
  save_examples(dir / "validation.jsonl", corpus.validation, corpus.vocab);
  save_examples(dir / "test.jsonl", corpus.test, corpus.vocab);
}

std::vector<int> remap_tokens(const std::vector<int>& tokens, const Vocab& from, const Vocab& to) {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (int t : tokens) {
    if (Vocab::is_special(t)) {
      out.push_back(t);
    } else {
      out.push_back(to.lookup_or_unk(from.token(t)));
    }
  }
  return out;
}

}  // namespace salieval
