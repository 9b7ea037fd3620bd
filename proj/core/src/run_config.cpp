#include "salieval/run_config.hpp"

#include <fstream>

#include "salieval/version.hpp"

namespace salieval {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(context + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

GeneratorConfig parse_generator(const json& j, uint64_t run_seed) {
  check_keys(j,
             {"vocab_size", "class_word_count", "length_min", "length_max", "class_skew",
              "balance", "train_size", "validation_size", "test_size", "seed"},
             "corpus.generator");
  GeneratorConfig g;
  g.vocab_size = get_or(j, "vocab_size", g.vocab_size);
  g.class_word_count = get_or(j, "class_word_count", g.class_word_count);
  g.length_min = get_or(j, "length_min", g.length_min);
  g.length_max = get_or(j, "length_max", g.length_max);
  g.class_skew = get_or(j, "class_skew", g.class_skew);
  g.balance = get_or(j, "balance", g.balance);
  g.train_size = get_or(j, "train_size", g.train_size);
  g.validation_size = get_or(j, "validation_size", g.validation_size);
  g.test_size = get_or(j, "test_size", g.test_size);
  g.seed = get_or(j, "seed", mix_seed(run_seed, "generate"));
  return g;
}

CorpusSource parse_corpus(const json& j, uint64_t run_seed) {
  check_keys(j, {"generator", "path", "format"}, "corpus");
  CorpusSource src;
  if (j.contains("generator") == j.contains("path"))
    throw ConfigError("corpus: exactly one of 'generator' or 'path' is required");
  if (j.contains("generator")) {
    src.use_generator = true;
    src.generator = parse_generator(j.at("generator"), run_seed);
  } else {
    src.use_generator = false;
    src.path = j.at("path").get<std::string>();
    src.format = corpus_format_from_name(get_or<std::string>(j, "format", "jsonl"));
  }
  return src;
}

ShortcutSpec parse_shortcut(const json& j) {
  check_keys(j, {"kind", "indicator0", "indicator1", "context_token", "k"}, "shortcut");
  if (!j.contains("kind")) throw ConfigError("shortcut: 'kind' is required");
  ShortcutSpec spec = ShortcutSpec::make(shortcut_kind_from_name(j.at("kind").get<std::string>()));
  spec.indicator0 = get_or<std::string>(j, "indicator0", spec.indicator0);
  spec.indicator1 = get_or<std::string>(j, "indicator1", spec.indicator1);
  if (j.contains("context_token")) spec.context_token = j.at("context_token").get<std::string>();
  if (j.contains("k") && j.at("k").get<int>() != spec.k)
    throw ConfigError("shortcut: k=" + j.at("k").dump() + " contradicts kind " +
                      shortcut_kind_name(spec.kind));
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

InjectionConfig parse_injection(const json& j, uint64_t run_seed) {
  check_keys(j, {"synthetic_fraction", "distractor_fraction", "synthetic_test_size", "seed"},
             "injection");
  InjectionConfig cfg;
  cfg.synthetic_fraction = get_or(j, "synthetic_fraction", cfg.synthetic_fraction);
  cfg.distractor_fraction = get_or(j, "distractor_fraction", cfg.distractor_fraction);
  cfg.synthetic_test_size = get_or(j, "synthetic_test_size", cfg.synthetic_test_size);
  cfg.seed = get_or(j, "seed", mix_seed(run_seed, "injection"));
  return cfg;
}

TrainConfig parse_training(const json& j, Arch arch, uint64_t run_seed) {
  check_keys(j,
             {"optimizer", "learning_rate", "momentum", "weight_decay", "batch_size", "max_steps",
              "patience", "eval_every", "seed"},
             "training");
  TrainConfig cfg = TrainConfig::defaults(arch);
  if (j.contains("optimizer")) cfg.optimizer = optimizer_from_name(j.at("optimizer").get<std::string>());
  cfg.learning_rate = get_or(j, "learning_rate", cfg.learning_rate);
  cfg.momentum = get_or(j, "momentum", cfg.momentum);
  cfg.weight_decay = get_or(j, "weight_decay", cfg.weight_decay);
  cfg.batch_size = get_or(j, "batch_size", cfg.batch_size);
  cfg.max_steps = get_or(j, "max_steps", cfg.max_steps);
  cfg.patience = get_or(j, "patience", std::min(cfg.patience, cfg.max_steps));
  cfg.eval_every = get_or(j, "eval_every", cfg.eval_every);
  cfg.seed = get_or(j, "seed", mix_seed(run_seed, "train", hash_tag(arch_name(arch))));
  return cfg;
}

ModelEntry parse_model(const json& j, uint64_t run_seed) {
  check_keys(j,
             {"arch", "embed_dim", "hidden_dim", "layers", "heads", "word_dropout", "dropout",
              "max_len", "training"},
             "models[]");
  if (!j.contains("arch")) throw ConfigError("models[]: 'arch' is required");
  const Arch arch = arch_from_name(j.at("arch").get<std::string>());
  ModelEntry entry;
  entry.model = ModelConfig::defaults(arch);
  entry.model.embed_dim = get_or(j, "embed_dim", entry.model.embed_dim);
  entry.model.hidden_dim = get_or(j, "hidden_dim", entry.model.hidden_dim);
  entry.model.layers = get_or(j, "layers", entry.model.layers);
  entry.model.heads = get_or(j, "heads", entry.model.heads);
  entry.model.word_dropout = get_or(j, "word_dropout", entry.model.word_dropout);
  entry.model.dropout = get_or(j, "dropout", entry.model.dropout);
  entry.model.max_len = get_or(j, "max_len", entry.model.max_len);
  entry.training = parse_training(j.contains("training") ? j.at("training") : json::object(), arch,
                                  run_seed);
  try {
    entry.model.validate();
    entry.training.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return entry;
}

MethodConfig parse_method(const json& j, uint64_t run_seed) {
  check_keys(j,
             {"family", "objective", "reduction", "baseline", "baseline_token", "steps",
              "n_perturbations", "mask_token", "perturb_mode", "kernel_width", "ridge_lambda",
              "seed"},
             "methods[]");
  if (!j.contains("family")) throw ConfigError("methods[]: 'family' is required");
  MethodConfig cfg;
  cfg.family = family_from_name(j.at("family").get<std::string>());
  if (j.contains("objective")) cfg.objective = objective_from_name(j.at("objective").get<std::string>());
  if (j.contains("reduction")) cfg.reduction = reduction_from_name(j.at("reduction").get<std::string>());
  if (j.contains("baseline")) cfg.baseline = baseline_kind_from_name(j.at("baseline").get<std::string>());
  if (j.contains("baseline_token"))
    cfg.baseline_token = special_token_from_name(j.at("baseline_token").get<std::string>());
  cfg.steps = get_or(j, "steps", cfg.steps);
  cfg.n_perturbations = get_or(j, "n_perturbations", cfg.n_perturbations);
  if (j.contains("mask_token"))
    cfg.mask_token = special_token_from_name(j.at("mask_token").get<std::string>());
  if (j.contains("perturb_mode"))
    cfg.perturb_mode = perturb_mode_from_name(j.at("perturb_mode").get<std::string>());
  cfg.kernel_width = get_or(j, "kernel_width", cfg.kernel_width);
  cfg.ridge_lambda = get_or(j, "ridge_lambda", cfg.ridge_lambda);
  // One shared default stream keeps LIME runs prefix-compatible across sizes.
  cfg.seed = get_or(j, "seed", mix_seed(run_seed, "salience"));
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

json generator_to_json(const GeneratorConfig& g) {
  return json{{"vocab_size", g.vocab_size},
              {"class_word_count", g.class_word_count},
              {"length_min", g.length_min},
              {"length_max", g.length_max},
              {"class_skew", g.class_skew},
              {"balance", g.balance},
              {"train_size", g.train_size},
              {"validation_size", g.validation_size},
              {"test_size", g.test_size},
              {"seed", g.seed}};
}

}  // namespace

void RunConfig::validate() const {
  if (output_dir.empty()) throw ConfigError("output_dir is required");
  if (models.empty()) throw ConfigError("at least one model is required");
  if (models.size() > 2) throw ConfigError("at most one model per architecture");
  if (models.size() == 2 && models[0].model.arch == models[1].model.arch)
    throw ConfigError("duplicate architecture in models");
  if (methods.empty()) throw ConfigError("at least one method is required");
  if (corpus.use_generator) corpus.generator.validate();
  shortcut.validate();
  injection.validate();
}

RunConfig RunConfig::from_json(const json& j) {
  check_keys(j,
             {"version", "seed", "output_dir", "corpus", "shortcut", "injection", "models",
              "methods", "evaluation"},
             "config");
  if (!j.contains("version") || j.at("version").get<int>() != 1)
    throw ConfigError("config: unsupported or missing schema version (expected 1)");
  RunConfig cfg;
  if (!j.contains("seed")) throw ConfigError("config: 'seed' is required");
  cfg.seed = j.at("seed").get<uint64_t>();
  if (!j.contains("output_dir")) throw ConfigError("config: 'output_dir' is required");
  cfg.output_dir = j.at("output_dir").get<std::string>();
  if (!j.contains("corpus")) throw ConfigError("config: 'corpus' is required");
  cfg.corpus = parse_corpus(j.at("corpus"), cfg.seed);
  if (!j.contains("shortcut")) throw ConfigError("config: 'shortcut' is required");
  cfg.shortcut = parse_shortcut(j.at("shortcut"));
  cfg.injection = parse_injection(j.contains("injection") ? j.at("injection") : json::object(),
                                  cfg.seed);
  if (!j.contains("models")) throw ConfigError("config: 'models' is required");
  for (const auto& m : j.at("models")) cfg.models.push_back(parse_model(m, cfg.seed));
  if (!j.contains("methods")) throw ConfigError("config: 'methods' is required");
  if (j.at("methods").is_string() && j.at("methods").get<std::string>() == "standard") {
    cfg.methods = standard_method_matrix(mix_seed(cfg.seed, "salience"));
  } else {
    for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m, cfg.seed));
  }
  if (j.contains("evaluation")) {
    check_keys(j.at("evaluation"), {"max_examples", "dump_salience"}, "evaluation");
    cfg.evaluation.max_examples = get_or(j.at("evaluation"), "max_examples", 0);
    cfg.evaluation.dump_salience = get_or(j.at("evaluation"), "dump_salience", false);
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  // A manifest embeds the config it was produced from.
  if (j.is_object() && j.contains("config") && j.contains("code_version"))
    return from_json(j.at("config"));
  return from_json(j);
}

json RunConfig::to_json() const {
  json j;
  j["version"] = 1;
  j["seed"] = seed;
  j["output_dir"] = output_dir.string();
  if (corpus.use_generator) {
    j["corpus"] = json{{"generator", generator_to_json(corpus.generator)}};
  } else {
    j["corpus"] = json{{"path", corpus.path.string()},
                       {"format", corpus.format == CorpusFormat::kJsonl ? "jsonl" : "tsv"}};
  }
  json sc{{"kind", shortcut_kind_name(shortcut.kind)},
          {"indicator0", shortcut.indicator0},
          {"indicator1", shortcut.indicator1},
          {"k", shortcut.k}};
  if (!shortcut.context_token.empty()) sc["context_token"] = shortcut.context_token;
  j["shortcut"] = sc;
  j["injection"] = json{{"synthetic_fraction", injection.synthetic_fraction},
                        {"distractor_fraction", injection.distractor_fraction},
                        {"synthetic_test_size", injection.synthetic_test_size},
                        {"seed", injection.seed}};
  json models_j = json::array();
  for (const ModelEntry& m : models) {
    json mj{{"arch", arch_name(m.model.arch)},
            {"embed_dim", m.model.embed_dim},
            {"hidden_dim", m.model.hidden_dim},
            {"layers", m.model.layers},
            {"heads", m.model.heads},
            {"word_dropout", m.model.word_dropout},
            {"dropout", m.model.dropout},
            {"max_len", m.model.max_len}};
    mj["training"] = json{{"optimizer", optimizer_name(m.training.optimizer)},
                          {"learning_rate", m.training.learning_rate},
                          {"momentum", m.training.momentum},
                          {"weight_decay", m.training.weight_decay},
                          {"batch_size", m.training.batch_size},
                          {"max_steps", m.training.max_steps},
                          {"patience", m.training.patience},
                          {"eval_every", m.training.eval_every},
                          {"seed", m.training.seed}};
    models_j.push_back(mj);
  }
  j["models"] = models_j;
  json methods_j = json::array();
  for (const MethodConfig& m : methods) {
    json mj{{"family", family_name(m.family)}, {"seed", m.seed}};
    switch (m.family) {
      case MethodFamily::kGrad:
        mj["objective"] = objective_name(m.objective);
        mj["reduction"] = reduction_name(m.reduction);
        break;
      case MethodFamily::kGxi:
        mj["objective"] = objective_name(m.objective);
        break;
      case MethodFamily::kIg:
        mj["objective"] = objective_name(m.objective);
        mj["baseline"] = baseline_kind_name(m.baseline);
        if (m.baseline == BaselineKind::kSpecialToken)
          mj["baseline_token"] = special_token_name(m.baseline_token);
        mj["steps"] = m.steps;
        break;
      case MethodFamily::kLime:
        mj["n_perturbations"] = m.n_perturbations;
        mj["mask_token"] = special_token_name(m.mask_token);
        mj["perturb_mode"] = perturb_mode_name(m.perturb_mode);
        mj["kernel_width"] = m.kernel_width;
        mj["ridge_lambda"] = m.ridge_lambda;
        break;
      case MethodFamily::kRandom:
        break;
    }
    methods_j.push_back(mj);
  }
  j["methods"] = methods_j;
  j["evaluation"] = json{{"max_examples", evaluation.max_examples},
                         {"dump_salience", evaluation.dump_salience}};
  return j;
}

std::vector<MethodConfig> standard_method_matrix(uint64_t salience_seed) {
  std::vector<MethodConfig> out;
  auto push = [&](MethodConfig cfg) {
    cfg.seed = salience_seed;
    out.push_back(cfg);
  };
  for (Objective obj : {Objective::kLogit, Objective::kProb})
    for (GradReduction red : {GradReduction::kL1, GradReduction::kL2, GradReduction::kMean}) {
      MethodConfig c;
      c.family = MethodFamily::kGrad;
      c.objective = obj;
      c.reduction = red;
      push(c);
    }
  for (Objective obj : {Objective::kLogit, Objective::kProb}) {
    MethodConfig c;
    c.family = MethodFamily::kGxi;
    c.objective = obj;
    push(c);
  }
  for (Objective obj : {Objective::kLogit, Objective::kProb})
    for (BaselineKind base : {BaselineKind::kZero, BaselineKind::kSpecialToken})
      for (int steps : {100, 1000}) {
        MethodConfig c;
        c.family = MethodFamily::kIg;
        c.objective = obj;
        c.baseline = base;
        c.baseline_token = SpecialToken::kUnk;
        c.steps = steps;
        push(c);
      }
  for (int n : {100, 1000, 3000}) {
    MethodConfig c;
    c.family = MethodFamily::kLime;
    c.mask_token = SpecialToken::kUnk;
    c.n_perturbations = n;
    push(c);
  }
  {
    MethodConfig c;
    c.family = MethodFamily::kLime;
    c.mask_token = SpecialToken::kMask;
    c.n_perturbations = 3000;
    push(c);
  }
  {
    MethodConfig c;
    c.family = MethodFamily::kRandom;
    push(c);
  }
  return out;
}

}  // namespace salieval
