//===- acceptance.cpp - End-to-end acceptance checks ----------------------===//
//
// Prints one PASS/FAIL line per criterion and exits nonzero if any fails.
//
//===----------------------------------------------------------------------===//

#include "semverdiff/corpus.hpp"
#include "semverdiff/impact.hpp"
#include "semverdiff/mvil.hpp"
#include "semverdiff/report.hpp"
#include "kernel_checks.hpp"
#include "summary_checks.hpp"

#include <json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

using namespace semverdiff;
using namespace semverdiff::test;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = SEMVERDIFF_SOURCE_DIR;
const fs::path kCases = kRoot / "corpus" / "cases";
const fs::path kManifest = kRoot / "corpus" / "manifest.json";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

/// 1: the if-to-while decode loop end to end, through the JSON summary dump.
Outcome decode_loop() {
  auto t0 = Clock::now();
  CheckOptions opts;
  opts.dump_summaries = true;
  auto r = run_check(kCases / "if_to_while_decode_loop" / "old",
                     kCases / "if_to_while_decode_loop" / "new", opts);
  auto j = nlohmann::json::parse(render_report(r, ReportFormat::Json, opts));
  double secs = seconds_since(t0);

  std::size_t semb = 0;
  bool flags = true, dds_same = false, cds_grew = false;
  std::size_t old_cds = 0, new_cds = 0;
  for (const auto &v : j["verdicts"]) {
    if (v["status"] != "SemB")
      continue;
    ++semb;
    for (const auto &c : v["clusters"]) {
      if (!c["semb"].get<bool>())
        continue;
      flags = flags && c["triggerable"].get<bool>() && c["propagatable"].get<bool>();
      const auto &s = c["dumps"]["summaries"];
      dds_same = s["old"]["dds"] == s["new"]["dds"];
      old_cds = s["old"]["cds"].size();
      new_cds = s["new"]["cds"].size();
      bool kept = true;
      for (const auto &oc : s["old"]["cds"]) {
        bool found = false;
        for (const auto &nc : s["new"]["cds"])
          found = found || nc == oc;
        kept = kept && found;
      }
      cds_grew = kept && new_cds > old_cds;
    }
  }
  std::ostringstream d;
  d << "semb=" << semb << " triggerable&propagatable=" << flags
    << " dds_unchanged=" << dds_same << " cds " << old_cds << "->" << new_cds
    << " runtime=" << secs << "s";
  return {semb == 1 && r.totals.semb == 1 && flags && dds_same && cds_grew &&
              secs < 1.0,
          d.str()};
}

/// 2: corpus quality gates.
Outcome corpus_gates() {
  auto t0 = Clock::now();
  auto cases = load_manifest(kManifest);
  auto res = run_corpus(cases);
  double secs = seconds_since(t0);
  auto fam = [&](const char *f) { return res.families[f]; };
  auto refactor = fam("refactor"), benign = fam("benign");
  std::size_t semb_cases = res.metrics.tp + res.metrics.fn;
  double benign_fp = benign.cases ? double(benign.flagged) / benign.cases : 1.0;
  std::ostringstream d;
  d << cases.size() << " cases, recall=" << format_percent(res.metrics.recall())
    << " (" << res.metrics.tp << "/" << semb_cases << ")"
    << ", refactor FP " << refactor.flagged << "/" << refactor.cases
    << ", benign FP " << benign.flagged << "/" << benign.cases << " ("
    << format_percent(benign_fp) << "), synb " << res.synb_hits << "/"
    << res.synb_cases << ", runtime=" << secs << "s";
  return {cases.size() >= 40 && semb_cases > 0 && res.metrics.fn == 0 &&
              refactor.cases >= 6 && refactor.flagged == 0 &&
              benign.cases > 0 && benign.flagged * 5 <= benign.cases &&
              secs < 30.0,
          d.str()};
}

/// 3: kernel properties over random digraphs.
Outcome kernel_props() {
  auto rep = kernel_properties(1000, 12, 20261016);
  std::ostringstream d;
  d << rep.trials << " pairs (" << rep.nontrivial << " with K>0): self="
    << rep.self_nonzero << " asym=" << rep.asymmetric
    << " perm=" << rep.permutation_variant << " weights=" << rep.weight_errors
    << " beta=" << rep.beta_violations << " violations";
  bool weights = iteration_weight(1, 3) == 1.0 &&
                 iteration_weight(2, 3) == 2.0 / 3.0 &&
                 iteration_weight(3, 3) == 1.0 / 3.0;
  return {rep.trials >= 1000 && rep.ok() && weights, d.str()};
}

/// 4: WL labels against the brute-force oracle, every digraph <= 5 nodes.
Outcome wl_oracle() {
  auto t0 = Clock::now();
  auto rep = exhaustive_wl_check(5, 4, 3);
  auto sample = sampled_wl_check(20000, 5, 3, 5);
  std::ostringstream d;
  d << rep.classes << " isomorphism classes covering " << rep.labeled_covered
    << "/" << rep.labeled_total << " labeled digraphs, label mismatches="
    << rep.label_mismatches + sample.label_mismatches
    << " partition mismatches="
    << rep.partition_mismatches + sample.partition_mismatches
    << " collisions=" << rep.collisions << ", runtime=" << seconds_since(t0)
    << "s";
  return {rep.labeled_covered == rep.labeled_total && rep.label_mismatches == 0 &&
              rep.partition_mismatches == 0 && rep.collisions == 0 &&
              sample.label_mismatches == 0 && sample.partition_mismatches == 0,
          d.str()};
}

/// 5: refactoring invariance of the summaries.
Outcome refactorings() {
  const std::array<std::pair<const char *, const char *>, 6> fixtures{{
      {"rename_local", "Stats.mean(int,int)"},
      {"extract_method", "Geometry.perimeter(int,int)"},
      {"inline_method", "Geometry.perimeter(int,int)"},
      {"split_assignment", "Invoice.gross(int,int)"},
      {"negate_swap", "Limiter.admit(int)"},
      {"reorder_independent", "Profile.rank()"},
  }};
  bool ok = true;
  std::ostringstream d;
  for (const auto &[name, api] : fixtures) {
    auto a = load_snapshot(kCases / name / "old");
    auto b = load_snapshot(kCases / name / "new");
    auto sa = whole_api_slice(a, api), sb = whole_api_slice(b, api);
    bool equal = !sa.summaries.empty() &&
                 summary_multiset(sa.summaries) == summary_multiset(sb.summaries);
    double k = kernel_distance(semantic_graph_of(sa), semantic_graph_of(sb)).k;
    double worst = 0;
    for (const auto &p : pair_api_candidates(a, b))
      if (p.key() == api)
        for (const auto &c : assess_api(p, a, b, AnalysisConfig{}).clusters)
          worst = std::max(worst, c.k);
    ok = ok && equal && k == 0.0 && worst == 0.0;
    d << (d.tellp() > 0 ? " " : "") << name
      << (equal && k == 0.0 && worst == 0.0 ? ":K=0" : ":DIFF");
  }
  return {ok, d.str()};
}

/// 6: the threshold is exclusive at exactly 0.1.
Outcome threshold() {
  KernelConfig cfg;
  cfg.h = 1;
  std::vector<std::string> a(10, "s"), b(10, "s");
  b.back() = "t";
  auto at = kernel_distance(path_graph(a), path_graph(b), cfg);
  a.pop_back();
  b.erase(b.begin());
  auto above = kernel_distance(path_graph(a), path_graph(b), cfg);
  double eps = std::nextafter(0.1, 1.0);
  std::ostringstream d;
  d << "K=" << at.k << " semb=" << at.is_semb << "; K=" << above.k
    << " semb=" << above.is_semb << "; judge(0.1+ulp)=" << judge_value(eps);
  return {at.k == 0.1 && !at.is_semb && above.is_semb && judge_value(eps) &&
              judge_value(0.10001) && !judge_value(0.1),
          d.str()};
}

/// 7: metric formulas, through run_corpus on a synthetic confusion matrix
/// built from corpus cases whose verdicts are known.
Outcome metrics() {
  auto semb_dir = kCases / "changed_calc";
  auto compat_dir = kCases / "rename_local";
  auto make = [](const fs::path &dir, const char *api, CaseLabel label,
                 int k) {
    CorpusCase c;
    c.name = "synthetic" + std::to_string(k);
    c.old_dir = dir / "old";
    c.new_dir = dir / "new";
    c.api = api;
    c.label = label;
    c.category = "synthetic";
    return c;
  };
  std::vector<CorpusCase> cases;
  int k = 0;
  for (int i = 0; i < 278; ++i)
    cases.push_back(make(semb_dir, "Pricing.fee(int)", CaseLabel::SemB, k++));
  for (int i = 0; i < 30; ++i)
    cases.push_back(make(compat_dir, "Stats.mean(int,int)", CaseLabel::SemB, k++));
  for (int i = 0; i < 64; ++i)
    cases.push_back(make(semb_dir, "Pricing.fee(int)", CaseLabel::Compatible, k++));
  auto res = run_corpus(cases);
  auto text = render_corpus(res, ReportFormat::Text);
  auto line = format_metrics(res.metrics);
  bool printed = text.find("recall=90.26%") != std::string::npos &&
                 text.find("precision=81.29%") != std::string::npos &&
                 text.find("F-measure=85.54%") != std::string::npos;
  return {res.metrics.tp == 278 && res.metrics.fn == 30 && res.metrics.fp == 64 &&
              printed,
          line};
}

std::string run_cli(const std::string &args) {
  std::string cmd = std::string(SEMVERDIFF_CLI) + " " + args + " 2>&1";
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE *)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe)
    return out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0)
    out.append(buf.data(), n);
  return out;
}

/// 8: consecutive check runs over every corpus case are byte-identical.
Outcome determinism() {
  auto cases = load_manifest(kManifest);
  std::size_t same = 0, bytes = 0;
  for (const auto &c : cases) {
    std::string args = "check " + c.old_dir.string() + " " + c.new_dir.string() +
                       " --format json --dump-summaries --dump-benign --dump-kernel";
    auto a = run_cli(args), b = run_cli(args);
    same += (!a.empty() && a == b) ? 1 : 0;
    bytes += a.size();
  }
  auto x = render_corpus(run_corpus(cases), ReportFormat::Json);
  auto y = render_corpus(run_corpus(cases), ReportFormat::Json);
  std::ostringstream d;
  d << same << "/" << cases.size() << " case reports identical (" << bytes
    << " bytes per run), corpus report identical=" << (x == y);
  return {same == cases.size() && x == y, d.str()};
}

} // namespace

int main() {
  const std::array<std::pair<const char *, std::function<Outcome()>>, 8> checks{{
      {"decode-loop reproduction", decode_loop},
      {"corpus quality gates", corpus_gates},
      {"kernel metric properties", kernel_props},
      {"WL oracle equivalence", wl_oracle},
      {"refactoring invariance", refactorings},
      {"threshold boundary", threshold},
      {"metrics formula", metrics},
      {"determinism", determinism},
  }};
  int failed = 0, index = 0;
  for (const auto &[name, fn] : checks) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index << "] " << name
              << ": " << o.detail << std::endl;
  }
  std::cout << (8 - failed) << "/8 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
