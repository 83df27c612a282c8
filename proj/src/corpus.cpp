//===- corpus.cpp - Labeled corpus runner and detection metrics -----------===//

#include "semverdiff/corpus.hpp"

#include "semverdiff/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace semverdiff {

using ojson = nlohmann::ordered_json;

const char *to_string(CaseLabel l) {
  switch (l) {
  case CaseLabel::SemB: return "SEMB";
  case CaseLabel::Compatible: return "COMPATIBLE";
  case CaseLabel::SynB: return "SYNB";
  }
  return "?";
}

std::optional<CaseLabel> case_label_from_string(const std::string &s) {
  for (auto l : {CaseLabel::SemB, CaseLabel::Compatible, CaseLabel::SynB})
    if (s == to_string(l))
      return l;
  return std::nullopt;
}

std::string CorpusCase::family() const {
  return category.substr(0, category.find('/'));
}

std::vector<CorpusCase> load_manifest(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ManifestError("cannot read manifest " + path.string());
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw ManifestError("malformed manifest " + path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  const ojson &list = j.is_object() && j.contains("cases") ? j["cases"] : j;
  if (!list.is_array())
    throw ManifestError("manifest must be a list of cases");

  std::vector<CorpusCase> out;
  for (const auto &jc : list) {
    CorpusCase c;
    try {
      c.name = jc.at("name").get<std::string>();
      c.old_dir = base / jc.at("old_dir").get<std::string>();
      c.new_dir = base / jc.at("new_dir").get<std::string>();
      c.api = jc.at("api").get<std::string>();
      c.category = jc.value("category", std::string());
      auto label = case_label_from_string(jc.at("label").get<std::string>());
      if (!label)
        throw ManifestError("case " + c.name + ": unknown label");
      c.label = *label;
    } catch (const nlohmann::json::exception &e) {
      throw ManifestError(std::string("malformed case: ") + e.what());
    }
    for (const auto &d : {c.old_dir, c.new_dir})
      if (!std::filesystem::is_directory(d))
        throw ManifestError("case " + c.name + ": missing directory " +
                            d.string());
    if (!parse_signature_key(c.api))
      throw ManifestError("case " + c.name + ": bad API key " + c.api);
    out.push_back(std::move(c));
  }
  return out;
}

std::optional<double> Metrics::precision() const {
  if (tp + fp == 0)
    return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

std::optional<double> Metrics::recall() const {
  if (tp + fn == 0)
    return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

std::optional<double> Metrics::f_measure() const {
  auto p = precision(), r = recall();
  if (!p || !r || *p + *r == 0)
    return std::nullopt;
  return 2 * *p * *r / (*p + *r);
}

std::string format_percent(std::optional<double> v) {
  if (!v)
    return "N.A.";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", *v * 100.0);
  return buf;
}

std::string format_metrics(const Metrics &m) {
  std::ostringstream os;
  os << "TP=" << m.tp << " FP=" << m.fp << " TN=" << m.tn << " FN=" << m.fn
     << " precision=" << format_percent(m.precision())
     << " recall=" << format_percent(m.recall())
     << " F-measure=" << format_percent(m.f_measure());
  return os.str();
}

CorpusResult run_corpus(const std::vector<CorpusCase> &cases,
                        const CheckOptions &opts) {
  CorpusResult res;
  for (const auto &c : cases) {
    UpgradeReport r = run_check(c.old_dir, c.new_dir, opts);
    CaseOutcome o;
    o.name = c.name;
    o.category = c.category;
    o.label = c.label;
    bool found = false;
    for (const auto &v : r.verdicts)
      if (v.api == c.api) {
        o.status = v.status;
        o.evidence = v.evidence;
        found = true;
      }
    if (!found)
      throw ManifestError("case " + c.name + ": API " + c.api +
                          " is not a public method of the old version");
    auto key = parse_signature_key(c.api);
    for (const auto &f : r.synb)
      o.synb_reported = o.synb_reported || f.signature == c.api ||
                        (f.kind == SynBKind::MissingClass &&
                         f.signature == key->class_name);

    bool semb = o.status == ApiStatus::SemB;
    switch (c.label) {
    case CaseLabel::SemB:
      semb ? ++res.metrics.tp : ++res.metrics.fn;
      o.correct = semb;
      break;
    case CaseLabel::Compatible:
      semb ? ++res.metrics.fp : ++res.metrics.tn;
      o.correct = !semb && o.status != ApiStatus::Error &&
                  o.status != ApiStatus::SynB;
      break;
    case CaseLabel::SynB:
      ++res.synb_cases;
      o.correct = o.synb_reported && o.status == ApiStatus::SynB;
      res.synb_hits += o.correct ? 1 : 0;
      break;
    }
    auto &fam = res.families[c.family()];
    ++fam.cases;
    fam.flagged += semb ? 1 : 0;
    res.cases.push_back(std::move(o));
  }
  return res;
}

std::string render_corpus(const CorpusResult &r, ReportFormat format) {
  if (format == ReportFormat::Json) {
    ojson j;
    j["cases"] = ojson::array();
    for (const auto &c : r.cases)
      j["cases"].push_back({{"name", c.name},
                            {"category", c.category},
                            {"label", to_string(c.label)},
                            {"status", to_string(c.status)},
                            {"correct", c.correct}});
    const auto &m = r.metrics;
    auto num = [](std::optional<double> v) {
      return v ? ojson(*v) : ojson("N.A.");
    };
    j["metrics"] = {{"tp", m.tp},
                    {"fp", m.fp},
                    {"tn", m.tn},
                    {"fn", m.fn},
                    {"precision", num(m.precision())},
                    {"recall", num(m.recall())},
                    {"f_measure", num(m.f_measure())}};
    j["synb"] = {{"cases", r.synb_cases}, {"detected", r.synb_hits}};
    j["families"] = ojson::object();
    for (const auto &[name, f] : r.families)
      j["families"][name] = {{"cases", f.cases}, {"flagged_semb", f.flagged}};
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto &c : r.cases)
    os << (c.correct ? "ok    " : "WRONG ") << c.name << "  [" << c.category
       << "] label=" << to_string(c.label) << " got=" << to_string(c.status)
       << "\n";
  os << "\n" << format_metrics(r.metrics) << "\n";
  os << "SynB cases detected: " << r.synb_hits << "/" << r.synb_cases << "\n";
  for (const auto &[name, f] : r.families)
    os << "family " << name << ": " << f.flagged << "/" << f.cases
       << " flagged SemB\n";
  return os.str();
}

} // namespace semverdiff
