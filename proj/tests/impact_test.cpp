//===- impact_test.cpp - Triggerability, propagatability, verdicts --------===//

#include "semverdiff/errors.hpp"
#include "semverdiff/impact.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace semverdiff;
using semverdiff::test::load_case;
using semverdiff::test::snapshot;

namespace {

ApiVerdict assess(const ModuleSnapshot &a, const ModuleSnapshot &b,
                  const std::string &api, AnalysisConfig cfg = {}) {
  for (auto &p : pair_api_candidates(a, b))
    if (p.key() == api)
      return assess_api(p, a, b, cfg, true);
  throw std::runtime_error("no pair for " + api);
}

ApiVerdict assess_case(const std::string &name, const std::string &api) {
  return assess(load_case(name, "old"), load_case(name, "new"), api);
}

} // namespace

TEST(Verdict, DecodeLoopIsTriggerableAndPropagatable) {
  auto v = assess_case("if_to_while_decode_loop",
                       "NHttpConnection.onInput(ContentDecoder)");
  EXPECT_EQ(v.status, ApiStatus::SemB);
  ASSERT_EQ(v.clusters.size(), 1u);
  const auto &c = v.clusters[0];
  EXPECT_TRUE(c.is_semb);
  EXPECT_TRUE(c.triggerable);
  EXPECT_TRUE(c.propagatable);
  EXPECT_GT(c.k, 0.1);
  EXPECT_FALSE(v.evidence.empty());
}

TEST(Verdict, LoggingSinkDoesNotPropagate) {
  auto v = assess_case("log_only", "Parser.parse(String)");
  ASSERT_EQ(v.clusters.size(), 1u);
  EXPECT_TRUE(v.clusters[0].is_semb);
  EXPECT_FALSE(v.clusters[0].propagatable);
  EXPECT_EQ(v.status, ApiStatus::ChangedCompatible);
}

TEST(Verdict, ChangeOnNewOnlyInputIsNotTriggerable) {
  auto v = assess_case("not_triggerable_new_field", "Codec.decode(Frame)");
  ASSERT_EQ(v.clusters.size(), 1u);
  EXPECT_TRUE(v.clusters[0].is_semb);
  EXPECT_FALSE(v.clusters[0].triggerable);
  EXPECT_EQ(v.status, ApiStatus::ChangedCompatible);
}

TEST(Verdict, UnreachableChangeLeavesApiUnchanged) {
  auto v = assess_case("dead_code", "Table.count()");
  EXPECT_EQ(v.status, ApiStatus::Unchanged);
  EXPECT_TRUE(v.clusters.empty());
}

TEST(Verdict, DiamondWithOneChangedPathBreaks) {
  auto v = assess_case("diamond_onepath", "Service.handle(int)");
  EXPECT_EQ(v.status, ApiStatus::SemB);
  bool any = false;
  for (const auto &c : v.clusters)
    any = any || (c.is_semb && c.triggerable && c.propagatable);
  EXPECT_TRUE(any);
}

TEST(Verdict, UncaughtNewExceptionPropagates) {
  auto v = assess_case("unhandled_new_exception", "Store.lookup(int)");
  EXPECT_EQ(v.status, ApiStatus::SemB);
}

TEST(Verdict, SecondaryOutputStillCounts) {
  auto v = assess_case("secondary_output_red_herring", "Formatter.render(int)");
  EXPECT_EQ(v.status, ApiStatus::SemB);
}

namespace {

// api returns its argument; the helper result only reaches a class field.
const char *kBase = R"(
class P {
  field int last;
  field int mode;
  method public int api(int) {
    entry:
      x = param 0;
      y = call int P.helper(int) x;
      store P.last, y;
      return x;
  }
  method private int helper(int) {
    entry:
      x = param 0;
      y = binop add x, #1;
      return y;
  }
}
)";

} // namespace

TEST(Propagation, FieldWriteCarriesTheChange) {
  auto a = snapshot(kBase);
  std::string changed = kBase;
  changed.replace(changed.find("add x, #1"), 9, "add x, #2");
  auto b = snapshot(changed);
  auto v = assess(a, b, "P.api(int)");
  ASSERT_EQ(v.clusters.size(), 1u);
  EXPECT_TRUE(v.clusters[0].propagatable);
  EXPECT_TRUE(v.clusters[0].triggerable);
  EXPECT_EQ(v.status, ApiStatus::SemB);
}

TEST(Propagation, DiscardedResultDoesNotCarry) {
  std::string base = kBase;
  base.replace(base.find("      store P.last, y;\n"), 23, "");
  std::string changed = base;
  changed.replace(changed.find("add x, #1"), 9, "add x, #2");
  auto v = assess(snapshot(base), snapshot(changed), "P.api(int)");
  for (const auto &c : v.clusters)
    EXPECT_FALSE(c.is_semb && c.propagatable);
  EXPECT_NE(v.status, ApiStatus::SemB);
}

TEST(Triggering, ConditionOnNewFieldIsNotTriggerable) {
  std::string changed = kBase;
  changed.replace(changed.find("      y = binop add x, #1;\n      return y;"),
                  std::string("      y = binop add x, #1;\n      return y;").size(),
                  "      m = load P.mode;\n"
                  "      z = relop eq m, #7;\n"
                  "      branch z, odd, even;\n"
                  "    odd:\n"
                  "      w = const #-1;\n"
                  "      return w;\n"
                  "    even:\n"
                  "      y = binop add x, #1;\n"
                  "      return y;");
  std::string base = kBase;
  base.replace(base.find("  field int mode;\n"), 17, "");
  auto v = assess(snapshot(base), snapshot(changed), "P.api(int)");
  ASSERT_EQ(v.clusters.size(), 1u);
  EXPECT_TRUE(v.clusters[0].is_semb);
  EXPECT_FALSE(v.clusters[0].triggerable);

  // The same change on a field the old version already had is triggerable.
  auto w = assess(snapshot(kBase), snapshot(changed), "P.api(int)");
  ASSERT_EQ(w.clusters.size(), 1u);
  EXPECT_TRUE(w.clusters[0].triggerable);
  EXPECT_EQ(w.status, ApiStatus::SemB);
}

TEST(Verdict, ConfigIsValidated) {
  AnalysisConfig cfg;
  cfg.depth_cap = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.kernel.beta = 2;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Verdict, StatusNamesRoundTrip) {
  for (auto s : {ApiStatus::Unchanged, ApiStatus::ChangedCompatible,
                 ApiStatus::SemB, ApiStatus::SynB, ApiStatus::Error})
    EXPECT_EQ(api_status_from_string(to_string(s)), s);
}
