//===- report_test.cpp - Reports, exit codes, corpus metrics, CLI ---------===//

#include "semverdiff/corpus.hpp"
#include "semverdiff/errors.hpp"
#include "semverdiff/report.hpp"
#include "support.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>

using namespace semverdiff;
using semverdiff::test::case_dir;
using semverdiff::test::snapshot;
using semverdiff::test::source_dir;

TEST(Upgrade, ClassifiesByFirstDifferingComponent) {
  EXPECT_EQ(classify_upgrade("1.2.3", "1.2.4"), UpgradeKind::Patch);
  EXPECT_EQ(classify_upgrade("1.2.3", "1.3.0"), UpgradeKind::Minor);
  EXPECT_EQ(classify_upgrade("1.2.3", "2.0.0"), UpgradeKind::Major);
  EXPECT_EQ(classify_upgrade("2.0.0", "1.9.9"), UpgradeKind::Major);
  EXPECT_THROW(classify_upgrade("1.2.3", "1.2.3"), EqualVersionError);
  EXPECT_THROW(classify_upgrade("1.2", "1.2.3"), VersionParseError);
  EXPECT_THROW(classify_upgrade("1.2.x", "1.2.3"), VersionParseError);
}

TEST(Upgrade, KindNamesRoundTrip) {
  for (auto k : {UpgradeKind::None, UpgradeKind::Patch, UpgradeKind::Minor,
                 UpgradeKind::Major})
    EXPECT_EQ(upgrade_kind_from_string(to_string(k)), k);
}

namespace {

UpgradeReport decode_loop(CheckOptions opts = {}) {
  return run_check(case_dir("if_to_while_decode_loop") / "old",
                   case_dir("if_to_while_decode_loop") / "new", opts);
}

} // namespace

TEST(Report, DecodeLoopHasExactlyOneSemB) {
  auto r = decode_loop();
  EXPECT_EQ(r.totals.semb, 1u);
  EXPECT_EQ(r.totals.synb, 0u);
  EXPECT_EQ(r.totals.sum(), r.verdicts.size());
  EXPECT_EQ(r.upgrade_kind, UpgradeKind::Minor);
  EXPECT_EQ(exit_code(r), 1);
  for (std::size_t k = 1; k < r.verdicts.size(); ++k)
    EXPECT_LT(r.verdicts[k - 1].api, r.verdicts[k].api);
}

TEST(Report, JsonRoundTrip) {
  auto r = decode_loop();
  auto text = render_report(r, ReportFormat::Json);
  auto back = report_from_json(text);
  EXPECT_TRUE(back == r);
  EXPECT_EQ(render_report(back, ReportFormat::Json), text);
}

TEST(Report, JsonShape) {
  auto j = nlohmann::json::parse(render_report(decode_loop(), ReportFormat::Json));
  for (const char *key : {"old_version", "new_version", "upgrade_kind",
                          "config", "verdicts", "synb", "totals"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["config"]["h"], 3);
  EXPECT_EQ(j["config"]["penalty_mode"], "per-node");
}

TEST(Report, SummaryDumpShowsConditionDelta) {
  CheckOptions opts;
  opts.dump_summaries = true;
  auto j = nlohmann::json::parse(
      render_report(decode_loop(opts), ReportFormat::Json, opts));
  const nlohmann::json *dumps = nullptr;
  for (const auto &v : j["verdicts"])
    if (v["status"] == "SemB")
      dumps = &v["clusters"][0]["dumps"]["summaries"];
  ASSERT_NE(dumps, nullptr);
  EXPECT_EQ((*dumps)["old"]["dds"], (*dumps)["new"]["dds"]);
  EXPECT_GT((*dumps)["new"]["cds"].size(), (*dumps)["old"]["cds"].size());
  auto plain = nlohmann::json::parse(render_report(decode_loop(), ReportFormat::Json));
  for (const auto &v : plain["verdicts"])
    for (const auto &c : v["clusters"])
      EXPECT_FALSE(c.contains("dumps"));
}

TEST(Report, TextFormat) {
  auto text = render_report(decode_loop(), ReportFormat::Text);
  EXPECT_NE(text.find("NHttpConnection.onInput(ContentDecoder)"), std::string::npos);
  EXPECT_NE(text.find("totals: "), std::string::npos);
}

TEST(Report, RunsAreByteIdentical) {
  CheckOptions opts;
  opts.dump_summaries = opts.dump_benign = opts.dump_kernel = true;
  opts.threads = 1;
  auto a = render_report(decode_loop(opts), ReportFormat::Json, opts);
  auto b = render_report(decode_loop(opts), ReportFormat::Json, opts);
  opts.threads = 4;
  auto c = render_report(decode_loop(opts), ReportFormat::Json, opts);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(ExitCode, Precedence) {
  UpgradeReport r;
  EXPECT_EQ(exit_code(r), 0);
  r.totals.error = 1;
  EXPECT_EQ(exit_code(r), 2);
  r.totals.semb = 1;
  EXPECT_EQ(exit_code(r), 1);
  r = {};
  r.synb.push_back({"A.f()", SynBKind::MissingMethod});
  r.totals.synb = 1;
  EXPECT_EQ(exit_code(r), 1);
}

TEST(Check, EqualVersionsGiveNoUpgradeKind) {
  auto a = snapshot(R"(class A { method public int f() { entry: x = const #1; return x; } })");
  CheckOptions opts;
  auto r = run_check(a, a, opts);
  EXPECT_EQ(r.upgrade_kind, UpgradeKind::None);
  EXPECT_EQ(r.totals.unchanged, 1u);
  EXPECT_EQ(exit_code(r), 0);
}

TEST(Check, SignatureChangesAreReported) {
  auto r = run_check(case_dir("removed_method") / "old",
                     case_dir("removed_method") / "new", {});
  ASSERT_FALSE(r.synb.empty());
  EXPECT_EQ(r.synb[0].kind, SynBKind::MissingMethod);
  EXPECT_EQ(exit_code(r), 1);
}

TEST(Check, MissingDirectoryFails) {
  EXPECT_THROW(run_check(source_dir() / "no-such-dir", case_dir("removed_method") / "new", {}),
               IOError);
}

TEST(Metrics, PublishedCountsFormat) {
  Metrics m;
  m.tp = 278;
  m.fn = 30;
  m.fp = 64;
  EXPECT_EQ(format_percent(m.recall()), "90.26%");
  EXPECT_EQ(format_percent(m.precision()), "81.29%");
  EXPECT_EQ(format_percent(m.f_measure()), "85.54%");
}

TEST(Metrics, UndefinedRatios) {
  Metrics m;
  EXPECT_EQ(format_percent(m.precision()), "N.A.");
  EXPECT_EQ(format_percent(m.recall()), "N.A.");
  EXPECT_EQ(format_percent(m.f_measure()), "N.A.");
  m.tn = 3;
  EXPECT_NE(format_metrics(m).find("precision=N.A."), std::string::npos);
}

TEST(Manifest, RejectsBrokenInput) {
  auto dir = std::filesystem::temp_directory_path() / "semverdiff_manifest_test";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string &text) {
    std::ofstream(dir / "m.json") << text;
    return dir / "m.json";
  };
  EXPECT_THROW(load_manifest(write("{")), ManifestError);
  EXPECT_THROW(load_manifest(write(R"([{"name": "x"}])")), ManifestError);
  const std::string missing_dirs =
      R"j([{"name": "x", "old_dir": "a", "new_dir": "b", "api": "A.f()", "label": "SEMB"}])j";
  EXPECT_THROW(load_manifest(write(missing_dirs)), ManifestError);
  EXPECT_THROW(load_manifest(dir / "missing.json"), ManifestError);
  std::filesystem::remove_all(dir);
}

TEST(Corpus, MeetsDetectionGates) {
  auto cases = load_manifest(source_dir() / "corpus" / "manifest.json");
  ASSERT_GE(cases.size(), 40u);
  auto t0 = std::chrono::steady_clock::now();
  auto res = run_corpus(cases);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 30.0);
  EXPECT_EQ(res.metrics.fn, 0u);
  EXPECT_EQ(res.synb_hits, res.synb_cases);
  auto refactor = res.families["refactor"];
  EXPECT_GE(refactor.cases, 6u);
  EXPECT_EQ(refactor.flagged, 0u);
  auto benign = res.families["benign"];
  EXPECT_GE(benign.cases, 7u);
  EXPECT_LE(benign.flagged * 5, benign.cases);
  for (const auto &c : res.cases)
    if (c.label == CaseLabel::SemB)
      EXPECT_TRUE(c.correct) << c.name;
}

namespace {

struct CliRun {
  int code = 0;
  std::string out;
};

CliRun run_cli(const std::string &args) {
  std::string cmd = std::string(SEMVERDIFF_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  std::unique_ptr<FILE, int (*)(FILE *)> pipe(popen(cmd.c_str(), "r"), pclose);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0)
    r.out.append(buf.data(), n);
  int status = pclose(pipe.release());
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string case_args(const std::string &name) {
  return (case_dir(name) / "old").string() + " " + (case_dir(name) / "new").string();
}

} // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("check " + case_args("if_to_while_decode_loop")).code, 1);
  EXPECT_EQ(run_cli("check " + case_args("rename_local")).code, 0);
  EXPECT_EQ(run_cli("check " + case_args("param_change")).code, 1);
  EXPECT_EQ(run_cli("check /nonexistent/a /nonexistent/b").code, 2);
  EXPECT_EQ(run_cli("check " + case_args("rename_local") + " --beta 0").code, 2);
  EXPECT_EQ(run_cli("check " + case_args("rename_local") + " --penalty-mode x").code, 2);
}

TEST(Cli, OptionsReachTheReport) {
  auto r = run_cli("check " + case_args("if_to_while_decode_loop") +
                   " --h 2 --threshold 0.5 --beta 1 --depth 4"
                   " --old-version 1.0.0 --new-version 2.0.0");
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["h"], 2);
  EXPECT_EQ(j["config"]["threshold"], 0.5);
  EXPECT_EQ(j["config"]["beta"], 1.0);
  EXPECT_EQ(j["config"]["depth"], 4);
  EXPECT_EQ(j["upgrade_kind"], "Major");
}

TEST(Cli, CorpusCommand) {
  auto r = run_cli("corpus " + (source_dir() / "corpus" / "manifest.json").string() +
                   " --format text");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("recall=100.00%"), std::string::npos);
}

TEST(Cli, OutputIsDeterministic) {
  auto args = "check " + case_args("if_to_while_decode_loop") +
              " --dump-summaries --dump-benign --dump-kernel";
  auto a = run_cli(args), b = run_cli(args);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
}
