//===- semverdiff.cpp - Command-line driver -------------------------------===//

#include "semverdiff/corpus.hpp"
#include "semverdiff/errors.hpp"
#include "semverdiff/report.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace semverdiff;

int main(int argc, char **argv) {
  CLI::App app{"Detect semantic breaking changes between two library versions"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  CheckOptions opts;
  std::string old_dir, new_dir, old_version, new_version, manifest;
  std::string format = "json", penalty = "per-node";

  auto add_analysis = [&](CLI::App *cmd) {
    cmd->add_option("--depth", opts.analysis.depth_cap, "Call graph depth cap")
        ->check(CLI::Range(1, kMaxDepthCap));
    cmd->add_option("--h", opts.analysis.kernel.h, "WL iterations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threshold", opts.analysis.kernel.threshold,
                    "SemB threshold T");
    cmd->add_option("--beta", opts.analysis.kernel.beta,
                    "Weight of benign mismatches");
    cmd->add_option("--penalty-mode", penalty, "per-node or global")
        ->check(CLI::IsMember({"per-node", "global"}));
    cmd->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
  };

  CLI::App *check = app.add_subcommand("check", "Compare two version directories");
  check->add_option("OLD_DIR", old_dir)->required()->check(CLI::ExistingDirectory);
  check->add_option("NEW_DIR", new_dir)->required()->check(CLI::ExistingDirectory);
  check->add_option("--old-version", old_version, "Override old version");
  check->add_option("--new-version", new_version, "Override new version");
  add_analysis(check);
  check->add_flag("--dump-summaries", opts.dump_summaries,
                  "Include dependency summaries");
  check->add_flag("--dump-benign", opts.dump_benign, "Include benign sets");
  check->add_flag("--dump-kernel", opts.dump_kernel, "Include kernel tables");

  CLI::App *corpus = app.add_subcommand("corpus", "Run a labeled corpus");
  corpus->add_option("MANIFEST", manifest)->required()->check(CLI::ExistingFile);
  add_analysis(corpus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  opts.analysis.kernel.penalty_mode = *penalty_mode_from_string(penalty);
  ReportFormat fmt = format == "text" ? ReportFormat::Text : ReportFormat::Json;

  try {
    if (*check) {
      if (!old_version.empty())
        opts.old_version = old_version;
      if (!new_version.empty())
        opts.new_version = new_version;
      UpgradeReport r = run_check(old_dir, new_dir, opts);
      std::cout << render_report(r, fmt, opts);
      return exit_code(r);
    }
    CorpusResult r = run_corpus(load_manifest(manifest), opts);
    std::cout << render_corpus(r, fmt);
    return 0;
  } catch (const std::exception &e) {
    std::cerr << "semverdiff: " << e.what() << "\n";
    return 2;
  }
}
