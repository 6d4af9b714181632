#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlts/experiments.hpp"

namespace ex = nlts::experiments;

int main(int argc, char** argv) {
  CLI::App app{"Identification experiments for nonlinear time series models", "nlts-ident"};
  app.set_version_flag("--version", ex::tool_version());
  app.require_subcommand(1);

  std::string config;
  std::string out;
  int threads = 0;

  const char* commands[] = {"simulate",     "fit",           "ident-scan",   "partial-ident",
                            "lemma-check",  "laplace-check", "stationarity", "agarch-demo"};
  for (const char* name : commands) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides output_dir)");
    sub->add_option("--threads", threads, "worker threads (overrides NLTS_THREADS)")->check(CLI::PositiveNumber);
  }
  std::string manifest;
  auto* rep = app.add_subcommand("replay", "re-run a manifest and compare report.json");
  rep->add_option("manifest", manifest, "manifest.json of a previous run")->required();
  rep->add_option("--threads", threads, "worker threads (overrides NLTS_THREADS)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ex::exit_validation;
  }

  auto* sub = app.get_subcommands().front();
  if (sub == rep) return ex::replay(manifest, std::cerr, threads);

  ex::RunOptions options;
  options.command = sub->get_name();
  options.threads = threads;
  if (!out.empty()) options.out_dir = out;
  return ex::run(config, options, std::cerr);
}
