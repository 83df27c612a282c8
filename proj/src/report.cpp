//===- report.cpp - Upgrade reports and the check driver ------------------===//

#include "semverdiff/report.hpp"

#include "semverdiff/errors.hpp"
#include "semverdiff/mvil.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <thread>

namespace semverdiff {

using ojson = nlohmann::ordered_json;

const char *to_string(UpgradeKind k) {
  switch (k) {
  case UpgradeKind::None: return "None";
  case UpgradeKind::Patch: return "Patch";
  case UpgradeKind::Minor: return "Minor";
  case UpgradeKind::Major: return "Major";
  }
  return "?";
}

std::optional<UpgradeKind> upgrade_kind_from_string(const std::string &s) {
  for (auto k : {UpgradeKind::None, UpgradeKind::Patch, UpgradeKind::Minor,
                 UpgradeKind::Major})
    if (s == to_string(k))
      return k;
  return std::nullopt;
}

UpgradeKind classify_upgrade(const std::string &old_version,
                             const std::string &new_version) {
  SemVer a = parse_semver(old_version);
  SemVer b = parse_semver(new_version);
  if (a == b)
    throw EqualVersionError("versions are identical: " + a.str());
  if (a.major != b.major)
    return UpgradeKind::Major;
  if (a.minor != b.minor)
    return UpgradeKind::Minor;
  return UpgradeKind::Patch;
}

static bool same_cluster(const ClusterVerdict &a, const ClusterVerdict &b) {
  return a.id == b.id && a.k == b.k && a.is_semb == b.is_semb &&
         a.triggerable == b.triggerable && a.propagatable == b.propagatable;
}

bool operator==(const UpgradeReport &a, const UpgradeReport &b) {
  if (a.old_version != b.old_version || a.new_version != b.new_version ||
      a.upgrade_kind != b.upgrade_kind || a.synb != b.synb ||
      !(a.totals == b.totals) || a.verdicts.size() != b.verdicts.size())
    return false;
  const auto &ca = a.config, &cb = b.config;
  if (ca.depth_cap != cb.depth_cap || ca.kernel.h != cb.kernel.h ||
      ca.kernel.threshold != cb.kernel.threshold ||
      ca.kernel.beta != cb.kernel.beta ||
      ca.kernel.penalty_mode != cb.kernel.penalty_mode)
    return false;
  for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
    const auto &x = a.verdicts[i], &y = b.verdicts[i];
    if (x.api != y.api || x.status != y.status || x.evidence != y.evidence ||
        x.clusters.size() != y.clusters.size())
      return false;
    for (std::size_t k = 0; k < x.clusters.size(); ++k)
      if (!same_cluster(x.clusters[k], y.clusters[k]))
        return false;
  }
  return true;
}

unsigned worker_count(unsigned requested) {
  if (requested > 0)
    return requested;
  if (const char *env = std::getenv("SEMVERDIFF_THREADS")) {
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return static_cast<unsigned>(v);
  }
  return 1;
}

UpgradeReport run_check(const ModuleSnapshot &old_snap,
                        const ModuleSnapshot &new_snap,
                        const CheckOptions &opts) {
  opts.analysis.validate();
  UpgradeReport r;
  r.config = opts.analysis;
  r.old_version = opts.old_version.value_or(old_snap.version);
  r.new_version = opts.new_version.value_or(new_snap.version);
  SemVer va = parse_semver(r.old_version), vb = parse_semver(r.new_version);
  r.upgrade_kind = va == vb ? UpgradeKind::None
                            : classify_upgrade(r.old_version, r.new_version);
  r.synb = detect_synb(old_snap, new_snap);

  auto pairs = pair_api_candidates(old_snap, new_snap);
  std::map<std::string, const ApiPair *> by_key;
  for (const auto &p : pairs)
    by_key[p.key()] = &p;

  std::vector<std::string> apis;
  for (const MethodIR *m : old_snap.public_methods())
    apis.push_back(m->signature.key());
  std::sort(apis.begin(), apis.end());
  r.verdicts.resize(apis.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < apis.size(); i = next++) {
      ApiVerdict &v = r.verdicts[i];
      v.api = apis[i];
      auto it = by_key.find(apis[i]);
      if (it == by_key.end()) {
        v.status = ApiStatus::SynB;
        for (const auto &f : r.synb)
          if (f.signature == apis[i])
            v.evidence.push_back(std::string("signature changed: ") +
                                 to_string(f.kind));
        continue;
      }
      try {
        v = assess_api(*it->second, old_snap, new_snap, opts.analysis,
                       opts.any_dump());
      } catch (const std::exception &e) {
        v.status = ApiStatus::Error;
        v.clusters.clear();
        v.evidence = {std::string("analysis failed: ") + e.what()};
      }
    }
  };
  unsigned n = std::min<std::size_t>(worker_count(opts.threads),
                                     std::max<std::size_t>(apis.size(), 1));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t)
      pool.emplace_back(work);
    for (auto &t : pool)
      t.join();
  }

  for (const auto &v : r.verdicts) {
    switch (v.status) {
    case ApiStatus::Unchanged: ++r.totals.unchanged; break;
    case ApiStatus::ChangedCompatible: ++r.totals.changed_compatible; break;
    case ApiStatus::SemB: ++r.totals.semb; break;
    case ApiStatus::SynB: ++r.totals.synb; break;
    case ApiStatus::Error: ++r.totals.error; break;
    }
  }
  return r;
}

UpgradeReport run_check(const std::filesystem::path &old_dir,
                        const std::filesystem::path &new_dir,
                        const CheckOptions &opts) {
  ModuleSnapshot a = load_snapshot(old_dir, opts.old_version.value_or(""));
  ModuleSnapshot b = load_snapshot(new_dir, opts.new_version.value_or(""));
  CheckOptions o = opts;
  o.old_version = a.version;
  o.new_version = b.version;
  return run_check(a, b, o);
}

namespace {

ojson statement_texts(const std::vector<SummaryStatement> &v) {
  ojson out = ojson::array();
  for (const auto &s : v)
    out.push_back(s.normalized_text);
  return out;
}

ojson summaries_json(const DependencySummaries &s) {
  ojson out;
  out["dds"] = statement_texts(s.dds);
  out["cds"] = ojson::array();
  for (const auto &c : s.cds)
    out["cds"].push_back(
        {{"dbs", c.dbs}, {"data", statement_texts(c.associated_data)}});
  out["es"] = ojson::array();
  for (const auto &e : s.es) {
    ojson j{{"type", e.type}};
    j["guard"] = e.guard ? ojson(s.cds[*e.guard].dbs) : ojson(nullptr);
    out["es"].push_back(std::move(j));
  }
  return out;
}

ojson kernel_json(const KernelResult &k) {
  ojson out{{"k", k.k}, {"is_semb", k.is_semb}};
  out["iterations"] = ojson::array();
  for (const auto &it : k.per_iteration)
    out["iterations"].push_back({{"i", it.i},
                                 {"weight", it.weight},
                                 {"unmatched", it.unmatched},
                                 {"mismatch", it.mismatch},
                                 {"unmatched_old", it.unmatched_old},
                                 {"unmatched_new", it.unmatched_new}});
  return out;
}

ojson dumps_json(const ClusterDetail &c, const CheckOptions &opts) {
  ojson d;
  d["old_members"] = c.old_members;
  d["new_members"] = c.new_members;
  if (opts.dump_summaries)
    d["summaries"] = {{"old", summaries_json(c.old_summaries)},
                      {"new", summaries_json(c.new_summaries)}};
  if (opts.dump_benign) {
    d["benign"] = ojson::array();
    for (const auto &b : c.benign)
      d["benign"].push_back({{"label", b.label}, {"tag", to_string(b.tag)}});
  }
  if (opts.dump_kernel)
    d["kernel"] = kernel_json(c.kernel);
  return d;
}

ojson report_json(const UpgradeReport &r, const CheckOptions &opts) {
  ojson out;
  out["old_version"] = r.old_version;
  out["new_version"] = r.new_version;
  out["upgrade_kind"] = to_string(r.upgrade_kind);
  out["config"] = {{"depth", r.config.depth_cap},
                   {"h", r.config.kernel.h},
                   {"threshold", r.config.kernel.threshold},
                   {"beta", r.config.kernel.beta},
                   {"penalty_mode", to_string(r.config.kernel.penalty_mode)}};
  out["verdicts"] = ojson::array();
  for (const auto &v : r.verdicts) {
    ojson jv{{"api", v.api}, {"status", to_string(v.status)}};
    jv["clusters"] = ojson::array();
    for (const auto &c : v.clusters) {
      ojson jc{{"id", c.id},
               {"k", c.k},
               {"semb", c.is_semb},
               {"triggerable", c.triggerable},
               {"propagatable", c.propagatable}};
      if (c.detail && opts.any_dump())
        jc["dumps"] = dumps_json(*c.detail, opts);
      jv["clusters"].push_back(std::move(jc));
    }
    jv["evidence"] = v.evidence;
    out["verdicts"].push_back(std::move(jv));
  }
  out["synb"] = ojson::array();
  for (const auto &f : r.synb)
    out["synb"].push_back({{"signature", f.signature}, {"kind", to_string(f.kind)}});
  out["totals"] = {{"unchanged", r.totals.unchanged},
                   {"changed_compatible", r.totals.changed_compatible},
                   {"semb", r.totals.semb},
                   {"synb", r.totals.synb},
                   {"error", r.totals.error}};
  return out;
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string report_text(const UpgradeReport &r, const CheckOptions &opts) {
  std::ostringstream os;
  os << "semverdiff " << r.old_version << " -> " << r.new_version << " ("
     << to_string(r.upgrade_kind) << ")\n";
  os << "config: depth=" << r.config.depth_cap << " h=" << r.config.kernel.h
     << " threshold=" << fixed(r.config.kernel.threshold, 4)
     << " beta=" << fixed(r.config.kernel.beta, 4)
     << " penalty-mode=" << to_string(r.config.kernel.penalty_mode) << "\n\n";
  for (const auto &v : r.verdicts) {
    os << to_string(v.status) << "  " << v.api << "\n";
    for (const auto &c : v.clusters) {
      os << "    cluster " << c.id << ": K=" << fixed(c.k, 4)
         << (c.is_semb ? " semb" : "") << " triggerable="
         << (c.triggerable ? "yes" : "no")
         << " propagatable=" << (c.propagatable ? "yes" : "no") << "\n";
      if (c.detail && opts.any_dump()) {
        std::istringstream dump(dumps_json(*c.detail, opts).dump(2));
        for (std::string line; std::getline(dump, line);)
          os << "      " << line << "\n";
      }
    }
    for (const auto &e : v.evidence)
      os << "    - " << e << "\n";
  }
  if (!r.synb.empty()) {
    os << "\nsignature changes:\n";
    for (const auto &f : r.synb)
      os << "    " << to_string(f.kind) << "  " << f.signature << "\n";
  }
  os << "\ntotals: unchanged=" << r.totals.unchanged
     << " changed_compatible=" << r.totals.changed_compatible
     << " semb=" << r.totals.semb << " synb=" << r.totals.synb
     << " error=" << r.totals.error << "\n";
  return os.str();
}

} // namespace

std::string render_report(const UpgradeReport &r, ReportFormat format,
                          const CheckOptions &opts) {
  if (format == ReportFormat::Text)
    return report_text(r, opts);
  return report_json(r, opts).dump(2) + "\n";
}

UpgradeReport report_from_json(const std::string &text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  try {
    UpgradeReport r;
    r.old_version = j.at("old_version").get<std::string>();
    r.new_version = j.at("new_version").get<std::string>();
    auto kind = upgrade_kind_from_string(j.at("upgrade_kind").get<std::string>());
    if (!kind)
      throw Error("unknown upgrade_kind");
    r.upgrade_kind = *kind;
    const auto &c = j.at("config");
    r.config.depth_cap = c.at("depth").get<int>();
    r.config.kernel.h = c.at("h").get<int>();
    r.config.kernel.threshold = c.at("threshold").get<double>();
    r.config.kernel.beta = c.at("beta").get<double>();
    auto mode = penalty_mode_from_string(c.at("penalty_mode").get<std::string>());
    if (!mode)
      throw Error("unknown penalty_mode");
    r.config.kernel.penalty_mode = *mode;
    for (const auto &jv : j.at("verdicts")) {
      ApiVerdict v;
      v.api = jv.at("api").get<std::string>();
      auto st = api_status_from_string(jv.at("status").get<std::string>());
      if (!st)
        throw Error("unknown status");
      v.status = *st;
      for (const auto &jc : jv.at("clusters")) {
        ClusterVerdict cv;
        cv.id = jc.at("id").get<int>();
        cv.k = jc.at("k").get<double>();
        cv.is_semb = jc.at("semb").get<bool>();
        cv.triggerable = jc.at("triggerable").get<bool>();
        cv.propagatable = jc.at("propagatable").get<bool>();
        v.clusters.push_back(cv);
      }
      v.evidence = jv.at("evidence").get<std::vector<std::string>>();
      r.verdicts.push_back(std::move(v));
    }
    for (const auto &js : j.at("synb")) {
      auto kind = synb_kind_from_string(js.at("kind").get<std::string>());
      if (!kind)
        throw Error("unknown SynB kind");
      r.synb.push_back({js.at("signature").get<std::string>(), *kind});
    }
    const auto &t = j.at("totals");
    r.totals.unchanged = t.at("unchanged").get<std::size_t>();
    r.totals.changed_compatible = t.at("changed_compatible").get<std::size_t>();
    r.totals.semb = t.at("semb").get<std::size_t>();
    r.totals.synb = t.at("synb").get<std::size_t>();
    r.totals.error = t.at("error").get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

int exit_code(const UpgradeReport &r) {
  if (r.totals.semb > 0 || r.totals.synb > 0)
    return 1;
  if (r.totals.error > 0)
    return 2;
  return 0;
}

} // namespace semverdiff
