#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "presslab/config.hpp"
#include "presslab/error.hpp"
#include "presslab/runner.hpp"
#include "presslab/version.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::string strategy;
  std::string disjoint;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "declarative run config (JSON)")
      ->required();
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "top-level seed override")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--threads", opts.threads, "worker threads");
  cmd->add_option("--strategy", opts.strategy, "packing strategy: greedy|exact")
      ->check(CLI::IsMember({"greedy", "exact"}));
  cmd->add_option("--disjoint", opts.disjoint,
                  "disjointness mode: triangle|shared-sample")
      ->check(CLI::IsMember({"triangle", "shared-sample"}));
}

int run_command(presslab::Command command, const CommonOptions& opts) {
  using namespace presslab;
  try {
    RunConfig cfg = load_config(opts.config_path);
    cfg.command = command;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.threads > 0) cfg.threads = opts.threads;
    if (opts.strategy == "greedy") cfg.strategy = PackStrategy::Greedy;
    if (opts.strategy == "exact") cfg.strategy = PackStrategy::Exact;
    if (opts.disjoint == "triangle") cfg.mode = DisjointMode::Triangle;
    if (opts.disjoint == "shared-sample") cfg.mode = DisjointMode::SharedSample;
    RunResult result = run(cfg);
    for (const std::string& f : result.files) std::printf("wrote %s\n", f.c_str());
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-scale neutralized packing pressure laboratory"};
  app.set_version_flag("--version", presslab::kVersion);
  app.require_subcommand(1);

  struct Sub {
    presslab::Command command;
    CLI::App* app;
    CommonOptions opts;
  };
  std::vector<Sub> subs;
  subs.reserve(6);
  auto add = [&](const std::string& name, const std::string& desc,
                 presslab::Command c) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    subs.push_back({c, cmd, {}});
    add_common(cmd, subs.back().opts);
  };
  add("pressure", "packing critical exponents over an (n, eps) grid",
      presslab::Command::Pressure);
  add("local-pressure", "measure-theoretic local pressure traces",
      presslab::Command::LocalPressure);
  add("katok", "Katok-style trimmed packing pressure", presslab::Command::Katok);
  add("vp-check", "variational-principle experiment with candidate measures",
      presslab::Command::VpCheck);
  add("properties", "randomized structural property suite",
      presslab::Command::Properties);
  add("oracle", "exact shift-cylinder fixtures", presslab::Command::Oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (const Sub& sub : subs)
    if (sub.app->parsed()) return run_command(sub.command, sub.opts);
  return 2;
}
