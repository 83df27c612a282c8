//===- report.hpp - Upgrade reports and the check driver -------*- C++ -*-===//
#pragma once

#include "semverdiff/impact.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace semverdiff {

/// None is only produced by the driver for equal versions;
/// classify_upgrade itself rejects them.
enum class UpgradeKind { None, Patch, Minor, Major };

const char *to_string(UpgradeKind k);
std::optional<UpgradeKind> upgrade_kind_from_string(const std::string &s);

/// Throws VersionParseError / EqualVersionError.
UpgradeKind classify_upgrade(const std::string &old_version,
                             const std::string &new_version);

struct Totals {
  std::size_t unchanged = 0;
  std::size_t changed_compatible = 0;
  std::size_t semb = 0;
  std::size_t synb = 0;
  std::size_t error = 0;

  std::size_t sum() const {
    return unchanged + changed_compatible + semb + synb + error;
  }
  bool operator==(const Totals &) const = default;
};

struct UpgradeReport {
  std::string old_version = "0.0.0";
  std::string new_version = "0.0.0";
  UpgradeKind upgrade_kind = UpgradeKind::None;
  AnalysisConfig config;
  std::vector<ApiVerdict> verdicts; // sorted by API key
  std::vector<SynBFinding> synb;
  Totals totals;
};

bool operator==(const UpgradeReport &a, const UpgradeReport &b);

struct CheckOptions {
  AnalysisConfig analysis;
  std::optional<std::string> old_version;
  std::optional<std::string> new_version;
  bool dump_summaries = false;
  bool dump_benign = false;
  bool dump_kernel = false;
  /// Worker count; 0 reads SEMVERDIFF_THREADS, falling back to 1.
  unsigned threads = 0;

  bool any_dump() const { return dump_summaries || dump_benign || dump_kernel; }
};

unsigned worker_count(unsigned requested);

UpgradeReport run_check(const ModuleSnapshot &old_snap,
                        const ModuleSnapshot &new_snap,
                        const CheckOptions &opts);

/// Loads both directories (errors propagate) and runs the check.
UpgradeReport run_check(const std::filesystem::path &old_dir,
                        const std::filesystem::path &new_dir,
                        const CheckOptions &opts);

enum class ReportFormat { Json, Text };

std::string render_report(const UpgradeReport &r, ReportFormat format,
                          const CheckOptions &opts = {});

/// Inverse of the JSON rendering (debug dumps are ignored).
UpgradeReport report_from_json(const std::string &text);

/// 1 when anything breaks, else 2 when some API errored, else 0.
int exit_code(const UpgradeReport &r);

} // namespace semverdiff
