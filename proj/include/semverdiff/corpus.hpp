//===- corpus.hpp - Labeled corpus runner and detection metrics -*- C++ -*-===//
#pragma once

#include "semverdiff/report.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace semverdiff {

enum class CaseLabel { SemB, Compatible, SynB };

const char *to_string(CaseLabel l);
std::optional<CaseLabel> case_label_from_string(const std::string &s);

struct CorpusCase {
  std::string name;
  std::filesystem::path old_dir; // resolved against the manifest directory
  std::filesystem::path new_dir;
  std::string api; // method key
  CaseLabel label = CaseLabel::Compatible;
  std::string category;

  /// Category family: the part before the first '/'.
  std::string family() const;
};

/// Throws ManifestError on malformed manifests or missing directories.
std::vector<CorpusCase> load_manifest(const std::filesystem::path &path);

struct Metrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  /// Undefined ratios (0/0) are empty.
  std::optional<double> precision() const;
  std::optional<double> recall() const;
  std::optional<double> f_measure() const;
};

/// "90.26%" or "N.A.".
std::string format_percent(std::optional<double> v);
std::string format_metrics(const Metrics &m);

struct CaseOutcome {
  std::string name;
  std::string category;
  CaseLabel label;
  ApiStatus status = ApiStatus::Unchanged;
  bool synb_reported = false; // the API appears in the SynB report
  bool correct = false;
  std::vector<std::string> evidence;
};

struct FamilyRate {
  std::size_t cases = 0;
  std::size_t flagged = 0; // cases reported as SemB
};

struct CorpusResult {
  std::vector<CaseOutcome> cases;
  Metrics metrics;                       // SemB detection
  std::size_t synb_cases = 0, synb_hits = 0;
  std::map<std::string, FamilyRate> families;
};

CorpusResult run_corpus(const std::vector<CorpusCase> &cases,
                        const CheckOptions &opts = {});

std::string render_corpus(const CorpusResult &r, ReportFormat format);

} // namespace semverdiff
