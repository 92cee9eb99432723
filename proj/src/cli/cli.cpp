#include "shadowforge/cli/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "shadowforge/config/config.hpp"
#include "shadowforge/core/errors.hpp"
#include "shadowforge/pipeline/pipeline.hpp"
#include "shadowforge/server/server.hpp"

namespace shadowforge::cli {
namespace {

std::atomic<bool> g_stop{false};
void handle_stop(int) { g_stop.store(true); }

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  bool resume = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path, "experiment config JSON")->required();
  sub->add_option("--set", o.sets, "override a config value (key=value, repeatable)")
      ->type_size(1);
  sub->add_flag("--resume", o.resume, "skip stages whose .done marker exists");
  sub->add_option("--seed", o.seed, "override the run seed")
      ->each([&o](const std::string&) { o.seed_given = true; });
  sub->add_option("--out", o.out, "override the output directory");
}

ExperimentConfig resolve(const CommonOpts& o) {
  std::ifstream f(o.config_path);
  if (!f) throw ConfigError("config: cannot open " + o.config_path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + o.config_path + " is not valid JSON: " + e.what());
  }
  for (const auto& kv : o.sets) {
    auto [key, value] = split_override(kv);
    apply_override(j, key, value);
  }
  ExperimentConfig cfg = parse_config(j);
  if (o.seed_given) cfg.seed = o.seed;
  if (!o.out.empty()) cfg.output_dir = o.out;
  return cfg;
}

int serve(const CommonOpts& o) {
  ExperimentConfig cfg = resolve(o);
  Pipeline pipe(cfg, /*resume=*/true);

  ServerConfig sc;
  sc.checkpoint_path = cfg.target.checkpoint.empty()
                           ? pipe.paths().target_checkpoint()
                           : std::filesystem::path(cfg.target.checkpoint);
  if (!std::filesystem::exists(sc.checkpoint_path))
    throw ConfigError("serve: missing checkpoint " + sc.checkpoint_path.string() +
                      "; run `train-target` first");
  sc.mode = cfg.target.serve_mode;
  sc.per_key_budget = cfg.target.serve_budget;
  if (!cfg.target.api_key.empty()) sc.api_keys.push_back(cfg.target.api_key);
  if (const char* port_env = std::getenv("SHADOWFORGE_SERVER_PORT")) {
    try {
      sc.port = std::stoi(port_env);
    } catch (const std::exception&) {
      throw ConfigError("serve: SHADOWFORGE_SERVER_PORT is not a port number");
    }
  } else {
    sc.port = 8080;
  }

  MlaasServer server(sc);
  const int port = server.start();
  std::cout << "serving " << cfg.target.arch << " on http://" << sc.host << ":" << port
            << " (" << sc.mode << " labels)" << std::endl;

  g_stop.store(false);
  std::signal(SIGINT, handle_stop);
  std::signal(SIGTERM, handle_stop);
  while (!g_stop.load() && server.running())
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  std::cout << "server stopped after " << server.queries_served() << " predictions"
            << std::endl;
  return kExitOk;
}

}  // namespace

int run(std::vector<std::string> args) {
  CLI::App app{"Query-budget-aware model extraction and transfer-attack workbench"};
  app.require_subcommand(1);

  // One options block per subcommand: CLI11 keeps pointers into these.
  std::map<std::string, CommonOpts> opts;
  const std::vector<std::pair<std::string, std::string>> stages = {
      {"gen", "generate (or reuse) the synthetic image pool"},
      {"train-target", "train the victim classifier on the labeled dataset"},
      {"serve", "expose the target checkpoint as a prediction service"},
      {"pretrain", "pretrain the substitute on synthetic data"},
      {"distill", "spend the query budget and fine-tune the substitute"},
      {"attack", "craft adversarial batches against the substitute"},
      {"eval", "query the target on clean/adversarial data, store predictions"},
      {"report", "emit CSV/JSON/Markdown reports from stored predictions"},
      {"sweep", "repeat distill+eval across query budgets and seeds"},
      {"pipeline", "run every stage in order"},
  };
  for (const auto& [name, desc] : stages) {
    CLI::App* sub = app.add_subcommand(name, desc);
    add_common(sub, opts[name]);
  }

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitConfig;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    const CommonOpts& o = opts.at(name);
    if (name == "serve") return serve(o);

    ExperimentConfig cfg = resolve(o);
    Pipeline pipe(cfg, o.resume);
    if (name == "gen") {
      pipe.gen();
    } else if (name == "train-target") {
      pipe.train_target();
    } else if (name == "pretrain") {
      pipe.pretrain();
    } else if (name == "distill") {
      pipe.distill();
    } else if (name == "attack") {
      pipe.attack();
    } else if (name == "eval") {
      pipe.evaluate();
    } else if (name == "report") {
      pipe.report();
    } else if (name == "sweep") {
      pipe.sweep();
    } else if (name == "pipeline") {
      pipe.run_all();
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const BudgetExhausted& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitError;
  }
}

}  // namespace shadowforge::cli
