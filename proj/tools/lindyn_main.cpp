#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lindyn/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"chain recurrence and positive shadowing certificates for linear operators"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd = nullptr;
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::int64_t horizon = 0;
    bool horizon_set = false;
  };

  const std::pair<const char*, const char*> commands[] = {
      {"chains", "build and certify epsilon-chains (returns, spans, no-return search)"},
      {"shadow", "shadow an explicit pseudo orbit and certify the error"},
      {"mixing", "produce mixing witnesses with exact ball memberships"},
      {"l1demo", "multiplication-by-x defect table and separation lower bounds"},
      {"fhc", "run the frequent-visit vector induction and visit-density table"},
      {"certify", "batch-shadow seeded random pseudo orbits and re-verify from disk"},
  };
  Sub subs[6];
  for (std::size_t i = 0; i < 6; ++i) {
    Sub& s = subs[i];
    s.cmd = app.add_subcommand(commands[i].first, commands[i].second);
    s.cmd->add_option("--config", s.config, "experiment config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    s.cmd->add_option("--out", s.out, "output directory for certificates.csv and report.md")
        ->required();
    s.cmd->add_option("--seed", s.seed, "seed override")->each([&s](const std::string&) {
      s.seed_set = true;
    });
    s.cmd->add_option("--horizon", s.horizon, "horizon override")
        ->each([&s](const std::string&) { s.horizon_set = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (std::size_t i = 0; i < 6; ++i) {
    if (!subs[i].cmd->parsed()) continue;
    lindyn::RunOptions opts;
    opts.command = commands[i].first;
    opts.config_path = subs[i].config;
    opts.out_dir = subs[i].out;
    if (subs[i].seed_set) opts.seed = subs[i].seed;
    if (subs[i].horizon_set) opts.horizon = subs[i].horizon;
    const lindyn::RunResult r = lindyn::run_experiment(opts);
    if (r.exit_code == 0) {
      std::cout << "verified: " << opts.out_dir << "/certificates.csv, " << opts.out_dir
                << "/report.md" << std::endl;
    } else {
      std::cerr << "error (exit " << r.exit_code << "): " << r.message << std::endl;
    }
    return r.exit_code;
  }
  return 2;
}
