#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "salieval/pipeline.hpp"
#include "salieval/version.hpp"

namespace {

// Exit codes: 0 ok, 1 generic error, 2 config error, 3 verification failure,
// 4 training failure.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVerification = 3;
constexpr int kExitTraining = 4;

struct GlobalArgs {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir;
  std::string methods;
  bool dump_salience = false;
};

salieval::RunConfig load_config(const GlobalArgs& args) {
  salieval::RunConfig cfg = salieval::RunConfig::from_json_file(args.config_path);
  if (args.seed) {
    // The sub-seeds derive from the run seed, so an override re-derives them.
    nlohmann::json j = cfg.to_json();
    j["seed"] = *args.seed;
    j["injection"].erase("seed");
    if (j["corpus"].contains("generator")) j["corpus"]["generator"].erase("seed");
    for (auto& m : j["models"]) m["training"].erase("seed");
    for (auto& m : j["methods"]) m.erase("seed");
    cfg = salieval::RunConfig::from_json(j);
  }
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  if (args.dump_salience) cfg.evaluation.dump_salience = true;
  return cfg;
}

int dispatch(const std::string& command, const GlobalArgs& args) {
  const salieval::RunConfig cfg = load_config(args);
  if (command == "inject") {
    salieval::run_inject(cfg);
    std::cout << "inject: wrote corpora and manifest under " << cfg.output_dir.string() << "\n";
  } else if (command == "train") {
    salieval::run_train(cfg);
    std::cout << "train: wrote checkpoints under " << (cfg.output_dir / "models").string() << "\n";
  } else if (command == "verify") {
    const salieval::VerificationReport report = salieval::run_verify(cfg);
    for (const auto& av : report.per_arch)
      std::cout << "verify [" << av.arch << "] " << av.outcome.summary
                << (av.outcome.passed ? " PASS" : " FAIL") << "\n";
    if (!report.passed) return kExitVerification;
  } else if (command == "evaluate") {
    salieval::run_evaluate(cfg, args.methods);
    std::cout << "evaluate: wrote " << (cfg.output_dir / "eval_report.csv").string() << "\n";
  } else if (command == "run-all") {
    salieval::run_all(cfg, args.methods);
    std::cout << "run-all: artifacts under " << cfg.output_dir.string() << "\n";
  } else if (command == "report") {
    std::cout << salieval::run_report(cfg);
  } else {
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("salieval ") +
               "- shortcut-injection benchmark for input-salience methods"};
  app.set_version_flag("--version", salieval::kCodeVersion);
  app.require_subcommand(1);

  GlobalArgs args;
  std::string command;
  for (const char* name : {"inject", "train", "verify", "evaluate", "run-all", "report"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config_path, "Run configuration (or manifest) JSON file")
        ->required();
    sub->add_option("--seed", args.seed, "Override the run seed");
    sub->add_option("--out", args.out_dir, "Override the output directory");
    if (std::string(name) == "evaluate" || std::string(name) == "run-all") {
      sub->add_option("--methods", args.methods,
                      "Comma-separated substrings of method ids to keep");
      sub->add_flag("--dump-salience", args.dump_salience,
                    "Write per-example salience maps as JSONL");
    }
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    return dispatch(command, args);
  } catch (const salieval::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const salieval::VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const salieval::TrainingError& e) {
    std::cerr << "training failure: " << e.what() << "\n";
    return kExitTraining;
  } catch (const salieval::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitError;
  }
}
