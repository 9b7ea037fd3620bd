#include "salieval/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"

namespace salieval {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'S', 'E', 'V', 'C', 'K', 'P', 'T', '1'};

json model_config_to_json(const ModelConfig& cfg) {
  return json{{"arch", arch_name(cfg.arch)},
              {"embed_dim", cfg.embed_dim},
              {"hidden_dim", cfg.hidden_dim},
              {"layers", cfg.layers},
              {"heads", cfg.heads},
              {"word_dropout", cfg.word_dropout},
              {"dropout", cfg.dropout},
              {"max_len", cfg.max_len}};
}

ModelConfig model_config_from_json(const json& j) {
  ModelConfig cfg;
  cfg.arch = arch_from_name(j.at("arch").get<std::string>());
  cfg.embed_dim = j.at("embed_dim").get<int>();
  cfg.hidden_dim = j.at("hidden_dim").get<int>();
  cfg.layers = j.at("layers").get<int>();
  cfg.heads = j.at("heads").get<int>();
  cfg.word_dropout = j.at("word_dropout").get<double>();
  cfg.dropout = j.at("dropout").get<double>();
  cfg.max_len = j.at("max_len").get<int>();
  return cfg;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const TrainedModel& model,
                     const CheckpointMeta& meta) {
  json header;
  header["version"] = 1;
  header["arch_hash"] = model.config().arch_hash();
  header["model_config"] = model_config_to_json(model.config());
  header["vocab"] = model.vocab().tokens();
  header["metrics"] = {{"val_acc", meta.val_acc}, {"step", meta.step}};
  json params = json::array();
  for (int i = 0; i < model.params().size(); ++i) {
    const ad::Tensor& t = model.params().tensor(i);
    params.push_back({{"name", model.params().name(i)},
                      {"shape", std::vector<int64_t>{t.rows(), t.cols()}}});
  }
  header["params"] = params;
  const std::string header_str = header.dump();

  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  const uint64_t len = header_str.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  for (int i = 0; i < model.params().size(); ++i) {
    const ad::Tensor& t = model.params().tensor(i);
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(t.size())));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ParseError("not a checkpoint file: " + path.string());
  uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || len == 0 || len > (1ull << 30)) throw ParseError("corrupt checkpoint header length");
  std::string header_str(len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(len));
  if (!in) throw ParseError("truncated checkpoint header");
  json header;
  try {
    header = json::parse(header_str);
  } catch (const json::exception& e) {
    throw ParseError(std::string("corrupt checkpoint header: ") + e.what());
  }
  if (header.at("version").get<int>() != 1)
    throw ParseError("unsupported checkpoint version");

  const ModelConfig cfg = model_config_from_json(header.at("model_config"));
  Vocab vocab;
  for (const auto& tok : header.at("vocab")) vocab.add(tok.get<std::string>());

  ParamStore params;
  for (const auto& p : header.at("params")) {
    const auto shape = p.at("shape").get<std::vector<int64_t>>();
    if (shape.size() != 2) throw ParseError("checkpoint parameter is not rank 2");
    ad::Tensor t(shape[0], shape[1]);
    in.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(t.size())));
    if (!in) throw ParseError("truncated checkpoint data for " + p.at("name").get<std::string>());
    params.add(p.at("name").get<std::string>(), std::move(t));
  }

  CheckpointMeta meta;
  meta.val_acc = header.at("metrics").at("val_acc").get<double>();
  meta.step = header.at("metrics").at("step").get<int>();
  return {TrainedModel(cfg, std::move(vocab), std::move(params)), meta};
}

}  // namespace salieval
