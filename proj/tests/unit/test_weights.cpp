#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "unionbound/bounds_classic.hpp"
#include "unionbound/bounds_new.hpp"
#include "unionbound/errors.hpp"
#include "unionbound/lp.hpp"
#include "unionbound/weights.hpp"

using namespace unionbound;

namespace {

EventSpace two_event_space() { return EventSpace(2, {0.0, 0.3, 0.2, 0.2}); }

EventSpace disjoint_space() {
  std::vector<double> atoms(8, 0.0);
  atoms[1] = 0.1;
  atoms[2] = 0.25;
  atoms[4] = 0.3;
  return EventSpace(3, atoms);
}

const ReportEntry* find(const BoundReport& r, const std::string& name, const std::string& strategy = {}) {
  for (const auto& e : r.entries) {
    if (e.name == name && e.strategy == strategy) return &e;
  }
  return nullptr;
}

SearchConfig all_strategies(std::size_t trials, std::uint64_t seed) {
  SearchConfig cfg;
  cfg.strategies = {GkExact{}, GkClipped{}, KappaLine{}, RandomPositive{trials, seed}};
  return cfg;
}

}  // namespace

TEST(ClipWeights, Definition) {
  const WeightVector w = clip_weights(std::vector<double>{0.5, -0.2}, 0.01);
  EXPECT_EQ(w[0], 0.5);
  EXPECT_EQ(w[1], 0.01);
  EXPECT_TRUE(w.all_positive());
  EXPECT_THROW(clip_weights(std::vector<double>{1.0}, 0.0), ArgumentError);
}

TEST(GkClipped, UnchangedWhenPositive) {
  const WeightVector w = gk_clipped(derive_partial_info(two_event_space()), 1e-6);
  EXPECT_NEAR(w[0], 0.75, 1e-12);
  EXPECT_NEAR(w[1], 0.625, 1e-12);
}

TEST(GkClipped, AlwaysAllPositive) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PartialInfo info = derive_partial_info(oracle::random_space(2 + seed % 8, seed, 5));
    const WeightVector w = gk_clipped(info, 1e-6);
    EXPECT_EQ(w.classification(), WeightClass::AllPositive);
    const GkResult gk = gk_bound(info);
    if (gk.all_positive && *std::min_element(gk.weights.begin(), gk.weights.end()) >= 1e-6) {
      EXPECT_EQ(lnew3(info, w).value, lnew3(info, WeightVector(gk.weights)).value);
    }
  }
}

TEST(KappaGrid, CountAndParse) {
  EXPECT_EQ(KappaGrid{}.count(), 401U);
  EXPECT_EQ((KappaGrid{0.0, 0.0, 0.1}).count(), 1U);
  const KappaGrid g = KappaGrid::parse("-0.5:0.5:0.25");
  EXPECT_EQ(g.count(), 5U);
  EXPECT_DOUBLE_EQ(g.at(4), 0.5);
  EXPECT_THROW(KappaGrid::parse("1:2"), ArgumentError);
  EXPECT_THROW(KappaGrid::parse("0:1:0"), ArgumentError);
  EXPECT_THROW(KappaGrid::parse("1:0:0.1"), ArgumentError);
  EXPECT_THROW(KappaGrid::parse("a:b:c"), ArgumentError);
}

TEST(KappaLineSearch, SinglePoint) {
  const PartialInfo info = derive_partial_info(two_event_space());
  const std::vector<double> base{0.75, 0.625};
  const SearchResult r = kappa_line_search(info, base, KappaGrid{0.0, 0.0, 0.005});
  EXPECT_EQ(r.evaluations, 1U);
  EXPECT_EQ(r.best_value, lnew3(info, WeightVector(base)).value);
}

TEST(KappaLineSearch, FullGridContainsBase) {
  const PartialInfo info = derive_partial_info(generate_random_space(5, 3, SpaceModel::dirichlet()));
  const GkResult gk = gk_bound(info);
  const SearchResult r = kappa_line_search(info, gk.weights, KappaGrid{});
  EXPECT_EQ(r.trace.size(), 401U);
  EXPECT_EQ(r.evaluations + r.skipped, 401U);
  EXPECT_GE(r.best_value, lnew3(info, WeightVector(gk.weights)).value);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : r.trace) {
    if (t.value) best = std::max(best, *t.value);
  }
  EXPECT_EQ(best, r.best_value);
}

TEST(KappaLineSearch, SkipsInvalidPoints) {
  // base + kappa 1 at kappa = -1 gives (0, 1): a zero subset sum.
  const PartialInfo info = derive_partial_info(two_event_space());
  const SearchResult r = kappa_line_search(info, std::vector<double>{1.0, 2.0}, KappaGrid{-1.0, -1.0, 0.1});
  EXPECT_EQ(r.skipped, 1U);
  EXPECT_FALSE(r.best_weights.has_value());
  EXPECT_EQ(r.best_value, -std::numeric_limits<double>::infinity());
}

TEST(RandomSearch, SingleTrialIsDirectEvaluation) {
  const PartialInfo info = derive_partial_info(generate_random_space(6, 9, SpaceModel::dirichlet()));
  RandomSearchOptions opts;
  opts.trials = 1;
  opts.seed = 42;
  const SearchResult r = random_search(info, opts);
  EXPECT_EQ(r.best_value, lnew3(info, random_trial_weights(6, 42, 0)).value);
}

TEST(RandomSearch, TrialWeightsInUnitInterval) {
  for (std::size_t t = 0; t < 200; ++t) {
    const WeightVector w = random_trial_weights(7, 5, t);
    for (double v : w.values()) {
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(RandomSearch, PrefixMonotone) {
  const PartialInfo info = derive_partial_info(generate_random_space(6, 1, SpaceModel::sparse(12)));
  RandomSearchOptions opts;
  opts.seed = 3;
  opts.trials = 1000;
  const double small = random_search(info, opts).best_value;
  opts.trials = 10000;
  EXPECT_GE(random_search(info, opts).best_value, small);
}

TEST(RandomSearch, IndependentOfThreadCount) {
  const PartialInfo info = derive_partial_info(generate_random_space(7, 2, SpaceModel::dirichlet()));
  RandomSearchOptions opts;
  opts.seed = 11;
  opts.trials = 3000;
  opts.keep_trace = true;
  opts.threads = 1;
  const RandomSearchOutcome one = random_search_both(info, opts);
  opts.threads = 4;
  const RandomSearchOutcome four = random_search_both(info, opts);
  EXPECT_EQ(one.lnew3.best_value, four.lnew3.best_value);
  EXPECT_EQ(one.lnew3.best_id, four.lnew3.best_id);
  EXPECT_EQ(one.lnew4.best_value, four.lnew4.best_value);
  EXPECT_EQ(one.comparison, four.comparison);
  ASSERT_EQ(one.lnew3.trace.size(), four.lnew3.trace.size());
  for (std::size_t k = 0; k < one.lnew3.trace.size(); ++k) {
    EXPECT_EQ(one.lnew3.trace[k].id, four.lnew3.trace[k].id);
    EXPECT_EQ(one.lnew3.trace[k].value, four.lnew3.trace[k].value);
  }
}

TEST(RandomSearch, ComparisonStatistics) {
  const PartialInfo info = derive_partial_info(generate_random_space(5, 4, SpaceModel::sparse(6)));
  RandomSearchOptions opts;
  opts.seed = 8;
  opts.trials = 500;
  opts.keep_trace = true;
  const RandomSearchOutcome out = random_search_both(info, opts);
  std::size_t improved = 0, ratio_trials = 0;
  double ratio_sum = 0.0;
  for (std::size_t t = 0; t < out.lnew3.trace.size(); ++t) {
    const double l3 = *out.lnew3.trace[t].value;
    const double l4 = *out.lnew4.trace[t].value;
    EXPECT_GE(l4, l3 - 1e-9);
    if (l4 > l3 + 1e-12) ++improved;
    if (l3 > 0.0) {
      ++ratio_trials;
      ratio_sum += l4 / l3;
    }
  }
  EXPECT_EQ(out.comparison.trials, 500U);
  EXPECT_EQ(out.comparison.improved, improved);
  EXPECT_EQ(out.comparison.ratio_trials, ratio_trials);
  EXPECT_NEAR(out.comparison.mean_ratio, ratio_sum / static_cast<double>(ratio_trials), 1e-12);
  EXPECT_NEAR(out.comparison.improved_percent, 100.0 * static_cast<double>(improved) / 500.0, 1e-12);
}

TEST(RandomSearch, RejectsBothFamily) {
  const PartialInfo info = derive_partial_info(two_event_space());
  EXPECT_THROW(random_search(info, RandomSearchOptions{}, BoundFamily::Both), ArgumentError);
}

TEST(RandomSearch, StrategiesStayBelowOptimalInclass) {
  const PartialInfo info = derive_partial_info(generate_random_space(5, 17, SpaceModel::dirichlet()));
  RandomSearchOptions opts;
  opts.trials = 200;
  opts.seed = 1;
  const SearchResult r = random_search(info, opts);
  ASSERT_TRUE(r.best_weights.has_value());
  EXPECT_LE(r.best_value, optimal_inclass_bound(info, *r.best_weights, BoundSense::Lower) + 1e-9);
}

TEST(CompareAll, DisjointEventsAllExact) {
  const EventSpace s = disjoint_space();
  const BoundReport r = compare_all(derive_partial_info(s), all_strategies(200, 1), &s);
  ASSERT_TRUE(r.exact_union.has_value());
  EXPECT_NEAR(*r.exact_union, 0.65, 1e-15);
  for (const auto& e : r.entries) {
    ASSERT_TRUE(e.value.has_value()) << e.name << "/" << e.strategy << ": " << e.status;
    EXPECT_NEAR(*e.value, 0.65, 1e-9) << e.name << "/" << e.strategy;
    EXPECT_EQ(e.valid, std::optional<bool>(true));
  }
}

TEST(CompareAll, TwoEventSpace) {
  const EventSpace s = two_event_space();
  const BoundReport r = compare_all(derive_partial_info(s), all_strategies(200, 1), &s);
  for (const auto& [name, strategy] : std::vector<std::pair<std::string, std::string>>{
           {"kat", ""}, {"yat2", ""}, {"lnew3", "gk"}, {"lnew4", "gk"}, {"unew4", "ones"}, {"unew5", "ones"}}) {
    const ReportEntry* e = find(r, name, strategy);
    ASSERT_NE(e, nullptr) << name;
    ASSERT_TRUE(e->value.has_value());
    EXPECT_NEAR(*e->value, 0.7, 1e-9) << name;
  }
}

TEST(CompareAll, OrderingFlags) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const EventSpace s = generate_random_space(3 + seed % 5, seed, SpaceModel::dirichlet());
    const BoundReport r = compare_all(derive_partial_info(s), all_strategies(300, seed), &s);
    // The kappa line lets lnew3 use mixed-sign points that lnew4 cannot, so it is left out.
    for (const char* strategy : {"gk", "gk+", "rand"}) {
      const ReportEntry* l3 = find(r, "lnew3", strategy);
      const ReportEntry* l4 = find(r, "lnew4", strategy);
      ASSERT_NE(l3, nullptr);
      ASSERT_NE(l4, nullptr);
      if (l3->value && l4->value) EXPECT_GE(*l4->value, *l3->value - 1e-9) << strategy << " seed " << seed;
    }
    const ReportEntry* u4 = find(r, "unew4", "ones");
    const ReportEntry* u5 = find(r, "unew5", "ones");
    ASSERT_NE(u4, nullptr);
    ASSERT_NE(u5, nullptr);
    EXPECT_LE(*u5->value, *u4->value + 1e-12);
    for (const auto& e : r.entries) {
      if (e.value) EXPECT_EQ(e.valid, std::optional<bool>(true)) << e.name << "/" << e.strategy;
    }
    ASSERT_TRUE(r.comparison.has_value());
    EXPECT_EQ(r.comparison->trials, 300U);
  }
}

TEST(CompareAll, Deterministic) {
  const PartialInfo info = derive_partial_info(generate_random_space(6, 5, SpaceModel::sparse(20)));
  SearchConfig cfg = all_strategies(2000, 9);
  cfg.threads = 1;
  const BoundReport a = compare_all(info, cfg);
  cfg.threads = 3;
  EXPECT_EQ(a, compare_all(info, cfg));
}

TEST(CompareAll, RejectsMismatchedOracle) {
  const EventSpace s = two_event_space();
  const PartialInfo other = derive_partial_info(disjoint_space());
  EXPECT_THROW(compare_all(other, all_strategies(10, 1), &s), ValidationError);
}

TEST(CompareAll, PropagatesInconsistentInfo) {
  const PartialInfo info({0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.0, 0.5, 0.0, 0.5});
  EXPECT_THROW(compare_all(info, all_strategies(10, 1)), InconsistentInfo);
}
