#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "salieval/corpus.hpp"

using namespace salieval;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("salieval_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("jsonl loading tokenizes, lowercases and frames") {
  TempDir dir;
  write_file(dir.path / "train.jsonl",
             "{\"text\":\"good fun\",\"label\":1}\n"
             "{\"text\":\"Dull and GRAY fun\",\"label\":0}\n");
  const Corpus c = load_corpus(dir.path, CorpusFormat::kJsonl);
  REQUIRE(c.train.size() == 2);
  const Example& ex = c.train[0];
  CHECK(ex.tokens.size() == 4);
  CHECK(ex.tokens.front() == Vocab::kBos);
  CHECK(ex.tokens.back() == Vocab::kEos);
  CHECK(c.vocab.token(ex.tokens[1]) == "good");
  CHECK(c.vocab.token(ex.tokens[2]) == "fun");
  CHECK(ex.label == 1);
  // "fun" is shared between the two records and appears once in the vocab.
  CHECK(c.vocab.size() == Vocab::kNumSpecials + 5);
  // lowercasing folded GRAY -> gray
  CHECK(c.vocab.contains("gray"));
  CHECK_FALSE(c.vocab.contains("GRAY"));
}

TEST_CASE("parse errors carry the line number") {
  TempDir dir;
  SUBCASE("label outside {0,1}") {
    write_file(dir.path / "train.jsonl",
               "{\"text\":\"ok\",\"label\":1}\n{\"text\":\"bad\",\"label\":2}\n");
    try {
      load_corpus(dir.path, CorpusFormat::kJsonl);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }
  SUBCASE("malformed JSON") {
    write_file(dir.path / "train.jsonl", "{\"text\":\"ok\",\"label\":1}\nnot json\n");
    CHECK_THROWS_AS(load_corpus(dir.path, CorpusFormat::kJsonl), ParseError);
  }
  SUBCASE("empty corpus") {
    write_file(dir.path / "train.jsonl", "\n");
    CHECK_THROWS_AS(load_corpus(dir.path, CorpusFormat::kJsonl), ValidationError);
  }
}

TEST_CASE("tsv loading") {
  TempDir dir;
  write_file(dir.path / "train.tsv", "a nice day\t1\nso bad\t0\n");
  const Corpus c = load_corpus(dir.path, CorpusFormat::kTsv);
  REQUIRE(c.train.size() == 2);
  CHECK(c.train[0].label == 1);
  CHECK(c.train[1].label == 0);
  CHECK(c.vocab.contains("nice"));

  write_file(dir.path / "train.tsv", "no label here\n");
  CHECK_THROWS_AS(load_corpus(dir.path, CorpusFormat::kTsv), ParseError);
}

TEST_CASE("out-of-vocabulary test tokens map to UNK") {
  TempDir dir;
  write_file(dir.path / "train.jsonl", "{\"text\":\"alpha beta\",\"label\":0}\n");
  write_file(dir.path / "test.jsonl", "{\"text\":\"alpha zeta\",\"label\":1}\n");
  const Corpus c = load_corpus(dir.path, CorpusFormat::kJsonl);
  REQUIRE(c.test.size() == 1);
  CHECK(c.test[0].tokens[1] == *c.vocab.lookup("alpha"));
  CHECK(c.test[0].tokens[2] == Vocab::kUnk);
}

TEST_CASE("writer round-trips provenance and positions") {
  TempDir dir;
  Vocab vocab;
  const int a = vocab.add("aaa");
  const int b = vocab.add("bbb");
  Example ex;
  ex.id = 0;
  ex.tokens = {Vocab::kBos, a, b, a, Vocab::kEos};
  ex.label = 1;
  ex.provenance = Provenance::kSyntheticShortcut;
  ex.gt_positions = {2};
  save_examples(dir.path / "x.jsonl", {ex}, vocab);

  const auto loaded = load_examples(dir.path / "x.jsonl", CorpusFormat::kJsonl, vocab);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].tokens == ex.tokens);
  CHECK(loaded[0].label == 1);
  CHECK(loaded[0].provenance == Provenance::kSyntheticShortcut);
  CHECK(loaded[0].gt_positions == std::vector<int>{2});

  // Byte-identical on re-save.
  const std::string first = read_file(dir.path / "x.jsonl");
  save_examples(dir.path / "y.jsonl", loaded, vocab);
  CHECK(first == read_file(dir.path / "y.jsonl"));
}

TEST_CASE("corpus validation catches broken invariants") {
  Corpus c;
  CHECK_THROWS_AS(c.validate(), ValidationError);  // empty train

  const int tok = c.vocab.add("xyz");
  Example ex;
  ex.tokens = {Vocab::kBos, tok, Vocab::kEos};
  ex.label = 0;
  c.train.push_back(ex);
  CHECK_NOTHROW(c.validate());

  c.test.push_back(ex);  // duplicate of a train sequence
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("token remapping across vocabularies") {
  Vocab from;
  const int x = from.add("xx");
  const int y = from.add("yy");
  Vocab to;
  const int x2 = to.add("xx");
  const std::vector<int> mapped = remap_tokens({Vocab::kBos, x, y, Vocab::kEos}, from, to);
  CHECK(mapped == std::vector<int>{Vocab::kBos, x2, Vocab::kUnk, Vocab::kEos});
}
