#include "salieval/pipeline.hpp"

#include <fstream>
#include <iostream>

#include "json.hpp"
#include "salieval/report.hpp"
#include "salieval/version.hpp"

namespace salieval {

namespace {

using nlohmann::json;

std::string corpus_label(const RunConfig& cfg) {
  return cfg.corpus.use_generator ? "generated" : cfg.corpus.path.filename().string();
}

Corpus obtain_base_corpus(const RunConfig& cfg) {
  if (cfg.corpus.use_generator) return generate_base_corpus(cfg.corpus.generator);
  return load_corpus(cfg.corpus.path, cfg.corpus.format);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace

RunPaths::RunPaths(const std::filesystem::path& r)
    : root(r),
      manifest(r / "manifest.json"),
      original_dir(r / "original"),
      mixed_dir(r / "mixed"),
      synthetic_test(r / "synthetic_test.jsonl"),
      verification(r / "verification.json"),
      eval_csv(r / "eval_report.csv"),
      eval_md(r / "eval_report.md"),
      eval_log(r / "evaluate.log") {}

std::filesystem::path RunPaths::checkpoint(Arch arch, bool shortcut_model) const {
  return root / "models" /
         (arch_name(arch) + std::string(shortcut_model ? "_shortcut" : "_clean") + ".ckpt");
}

std::filesystem::path RunPaths::history(Arch arch, bool shortcut_model) const {
  return root / "models" /
         (arch_name(arch) + std::string(shortcut_model ? "_shortcut" : "_clean") +
          ".history.csv");
}

std::filesystem::path RunPaths::salience_dump(Arch arch, const std::string& method_id) const {
  return root / "salience" / arch_name(arch) / (method_id + ".jsonl");
}

void run_inject(const RunConfig& cfg) {
  cfg.validate();
  const RunPaths paths(cfg.output_dir);
  std::filesystem::create_directories(paths.root);

  const Corpus base = obtain_base_corpus(cfg);
  const InjectionResult injected = inject_shortcuts(base, cfg.shortcut, cfg.injection);

  save_corpus(paths.original_dir, base);
  save_corpus(paths.mixed_dir, injected.mixed);
  save_examples(paths.synthetic_test, injected.synthetic_test, injected.mixed.vocab);

  json manifest;
  manifest["code_version"] = kCodeVersion;
  manifest["seed"] = cfg.seed;
  manifest["config"] = cfg.to_json();
  json hashes;
  for (const ModelEntry& m : cfg.models) hashes[arch_name(m.model.arch)] = m.model.arch_hash();
  manifest["arch_hashes"] = hashes;
  manifest["clean_model_indicator_handling"] = "indicators map to UNK at evaluation time";
  write_json_file(paths.manifest, manifest);
}

void run_train(const RunConfig& cfg) {
  cfg.validate();
  const RunPaths paths(cfg.output_dir);
  for (const auto& p : {paths.original_dir / "train.jsonl", paths.mixed_dir / "train.jsonl"})
    if (!std::filesystem::exists(p))
      throw IoError("missing " + p.string() + "; run the inject stage first");

  const Corpus original = load_corpus(paths.original_dir, CorpusFormat::kJsonl);
  const Corpus mixed = load_corpus(paths.mixed_dir, CorpusFormat::kJsonl);

  for (const ModelEntry& entry : cfg.models) {
    const Arch arch = entry.model.arch;
    struct Job {
      const Corpus* corpus;
      bool shortcut_model;
      uint64_t seed;
    };
    const Job jobs[] = {{&mixed, true, entry.training.seed},
                        {&original, false, mix_seed(entry.training.seed, "clean")}};
    for (const Job& job : jobs) {
      TrainConfig tc = entry.training;
      tc.seed = job.seed;
      try {
        const TrainResult result = train(entry.model, tc, *job.corpus);
        save_checkpoint(paths.checkpoint(arch, job.shortcut_model), result.model,
                        {result.best_val_acc, result.best_step});
        save_history_csv(paths.history(arch, job.shortcut_model).string(), result.history);
      } catch (const TrainingError& e) {
        throw TrainingError(arch_name(arch) +
                            std::string(job.shortcut_model ? " (mixed data)" : " (original data)") +
                            ": " + e.what());
      }
    }
  }
}

VerificationReport run_verify(const RunConfig& cfg) {
  cfg.validate();
  const RunPaths paths(cfg.output_dir);
  VerificationReport report;
  report.passed = true;

  json j;
  j["per_arch"] = json::array();
  for (const ModelEntry& entry : cfg.models) {
    const Arch arch = entry.model.arch;
    const TrainedModel model_a = load_checkpoint(paths.checkpoint(arch, true)).model;
    const TrainedModel model_b = load_checkpoint(paths.checkpoint(arch, false)).model;
    const std::vector<Example> synth =
        load_examples(paths.synthetic_test, CorpusFormat::kJsonl, model_a.vocab());

    ArchVerification av;
    av.arch = arch_name(arch);
    av.outcome = verify_models(model_a, model_b, synth, model_a.vocab());

    const std::vector<Example> original_test_a = load_examples(
        paths.original_dir / "test.jsonl", CorpusFormat::kJsonl, model_a.vocab());
    const std::vector<Example> original_test_b = load_examples(
        paths.original_dir / "test.jsonl", CorpusFormat::kJsonl, model_b.vocab());
    av.shortcut_model_original_test_acc = accuracy(model_a, original_test_a);
    av.clean_model_original_test_acc = accuracy(model_b, original_test_b);

    report.passed = report.passed && av.outcome.passed;
    j["per_arch"].push_back(
        {{"arch", av.arch},
         {"shortcut_model_acc", av.outcome.shortcut_model_acc},
         {"clean_model_acc", av.outcome.clean_model_acc},
         {"test1_passed", av.outcome.test1_passed},
         {"test2_passed", av.outcome.test2_passed},
         {"passed", av.outcome.passed},
         {"summary", av.outcome.summary},
         {"shortcut_model_original_test_acc", av.shortcut_model_original_test_acc},
         {"clean_model_original_test_acc", av.clean_model_original_test_acc}});
    report.per_arch.push_back(std::move(av));
  }
  j["passed"] = report.passed;
  write_json_file(paths.verification, j);
  return report;
}

std::vector<MethodConfig> filter_methods(const std::vector<MethodConfig>& methods,
                                         const std::string& filter) {
  if (filter.empty()) return methods;
  std::vector<std::string> needles;
  std::string cur;
  for (char c : filter) {
    if (c == ',') {
      if (!cur.empty()) needles.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) needles.push_back(cur);
  std::vector<MethodConfig> out;
  for (const MethodConfig& m : methods) {
    const std::string id = m.id();
    for (const std::string& needle : needles) {
      if (id.find(needle) != std::string::npos) {
        out.push_back(m);
        break;
      }
    }
  }
  if (out.empty()) throw ConfigError("method filter '" + filter + "' matches nothing");
  return out;
}

void run_evaluate(const RunConfig& cfg, const std::string& method_filter) {
  cfg.validate();
  const RunPaths paths(cfg.output_dir);
  if (!std::filesystem::exists(paths.verification))
    throw VerificationError("no verification report; run the verify stage first");
  const json verification = read_json_file(paths.verification);
  if (!verification.value("passed", false))
    throw VerificationError("verification failed; ground truth is not valid for evaluation");

  const std::vector<MethodConfig> methods = filter_methods(cfg.methods, method_filter);

  ReportTable table = ReportTable::eval_header();
  std::ofstream log(paths.eval_log, std::ios::trunc);
  const std::string corpus_name = corpus_label(cfg);

  for (const ModelEntry& entry : cfg.models) {
    const Arch arch = entry.model.arch;
    const TrainedModel model = load_checkpoint(paths.checkpoint(arch, true)).model;
    const std::vector<Example> synth =
        load_examples(paths.synthetic_test, CorpusFormat::kJsonl, model.vocab());

    EvalOptions options;
    options.max_examples = cfg.evaluation.max_examples;
    options.keep_records = cfg.evaluation.dump_salience;
    const std::vector<MethodEvalResult> results =
        evaluate_methods(model, synth, methods, options);

    for (const MethodEvalResult& r : results) {
      if (r.failed) {
        const std::string line =
            "skipped " + r.cfg.id() + " on " + arch_name(arch) + ": " + r.note;
        log << line << "\n";
        std::cerr << "[evaluate] " << line << "\n";
        continue;
      }
      table.rows.push_back({corpus_name, shortcut_kind_name(cfg.shortcut.kind), arch_name(arch),
                            family_name(r.cfg.family), r.cfg.objective_column(), r.cfg.variant(),
                            format_double(r.precision, 6), format_double(r.mean_rank, 6),
                            std::to_string(r.n), "yes"});
      if (cfg.evaluation.dump_salience) {
        const auto dump_path = paths.salience_dump(arch, r.cfg.id());
        std::filesystem::create_directories(dump_path.parent_path());
        std::ofstream dump(dump_path, std::ios::trunc);
        if (!dump) throw IoError("cannot write " + dump_path.string());
        for (const EvalRecord& rec : r.records) {
          json jj;
          jj["example_id"] = rec.example_id;
          jj["method"] = rec.method_id;
          jj["positions"] = rec.map.positions;
          jj["scores"] = rec.map.scores;
          jj["ranking"] = rec.ranking.positions;
          jj["gt_positions"] = rec.gt_positions;
          dump << jj.dump() << "\n";
        }
      }
    }
  }

  write_csv(paths.eval_csv, table);
  write_markdown(paths.eval_md, table, "Salience method evaluation");
}

void run_all(const RunConfig& cfg, const std::string& method_filter) {
  struct Stage {
    const char* name;
    std::function<void()> fn;
  };
  VerificationReport verification;
  const Stage stages[] = {
      {"inject", [&] { run_inject(cfg); }},
      {"train", [&] { run_train(cfg); }},
      {"verify",
       [&] {
         verification = run_verify(cfg);
         if (!verification.passed) {
           std::string detail;
           for (const auto& av : verification.per_arch)
             if (!av.outcome.passed) detail += " [" + av.arch + "] " + av.outcome.summary;
           throw VerificationError("verification failed:" + detail);
         }
       }},
      {"evaluate", [&] { run_evaluate(cfg, method_filter); }},
  };
  for (const Stage& stage : stages) {
    std::cerr << "[run-all] stage " << stage.name << "\n";
    try {
      stage.fn();
    } catch (const Error&) {
      std::cerr << "[run-all] stage " << stage.name << " failed\n";
      throw;
    }
  }
}

std::string run_report(const RunConfig& cfg) {
  const RunPaths paths(cfg.output_dir);
  const ReportTable table = read_csv(paths.eval_csv);
  const std::string md = markdown_string(table, "Salience method evaluation");
  write_markdown(paths.eval_md, table, "Salience method evaluation");
  return md;
}

}  // namespace salieval
