#include <gtest/gtest.h>

#include "unionbound/errors.hpp"
#include "unionbound/problem_file.hpp"
#include "unionbound/report.hpp"
#include "unionbound/weights.hpp"

using namespace unionbound;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

BoundReport sample_report() {
  const EventSpace s = generate_random_space(4, 2, SpaceModel::dirichlet());
  SearchConfig cfg;
  cfg.strategies = {GkExact{}, GkClipped{}, KappaLine{KappaGrid{-0.1, 0.1, 0.05}}, RandomPositive{50, 3}};
  BoundReport r = compare_all(derive_partial_info(s), cfg, &s);
  r.label = "sample";
  return r;
}

}  // namespace

TEST(ParseProblem, AtomsForm) {
  const ProblemFile p = parse_problem(R"({"schema":"ub-v1","label":"two","n":2,"atoms":{"1":0.3,"2":0.2,"3":0.2}})");
  EXPECT_EQ(p.label, "two");
  ASSERT_TRUE(p.has_atoms());
  EXPECT_NEAR(exact_union(*p.space()), 0.7, 1e-15);
  EXPECT_NEAR(p.info().pairwise(0, 1), 0.2, 1e-15);
}

TEST(ParseProblem, PartialForm) {
  const ProblemFile p = parse_problem(R"({"schema":"ub-v1","alpha":[0.5,0.4],"pairwise":[[0.5,0.2],[0.2,0.4]]})");
  EXPECT_FALSE(p.has_atoms());
  EXPECT_EQ(p.info().alpha(1), 0.4);
}

TEST(ParseProblem, Diagnostics) {
  EXPECT_NE(error_of("{").find("malformed JSON"), std::string::npos);
  EXPECT_NE(error_of(R"({"alpha":[1],"pairwise":[[1]]})").find("schema"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema":"ub-v2","alpha":[1],"pairwise":[[1]]})").find("schema"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema":"ub-v1"})").find("exactly one"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema":"ub-v1","n":2,"atoms":{"4":0.1}})").find("'4'"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema":"ub-v1","n":2,"atoms":{"x":0.1}})").find("'x'"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema":"ub-v1","alpha":[0.5,0.4]})").find("pairwise"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema":"ub-v1","alpha":[0.5,0.4],"pairwise":[[0.5,0.2],[0.1,0.4]]})").find("pairwise(1,2)"),
            std::string::npos);
}

TEST(ParseProblem, EventCap) {
  EXPECT_THROW(parse_problem(R"({"schema":"ub-v1","n":5,"atoms":{}})", 4), ArgumentError);
  EXPECT_NO_THROW(parse_problem(R"({"schema":"ub-v1","n":4,"atoms":{}})", 4));
}

TEST(ProblemRoundTrip, AtomsAndPartial) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const EventSpace s = generate_random_space(2 + seed % 6, seed, SpaceModel::dirichlet());
    const ProblemFile back = parse_problem(serialize_atoms(s, "x"));
    ASSERT_TRUE(back.has_atoms());
    EXPECT_TRUE(std::equal(s.atoms().begin() + 1, s.atoms().end(), back.space()->atoms().begin() + 1));

    const PartialInfo info = derive_partial_info(*back.space());
    const PartialInfo again = parse_problem(serialize_partial(info)).info();
    for (std::size_t i = 0; i < info.event_count(); ++i) {
      EXPECT_NEAR(again.alpha(i), info.alpha(i), 1e-12);
      for (std::size_t j = 0; j < info.event_count(); ++j) EXPECT_NEAR(again.pairwise(i, j), info.pairwise(i, j), 1e-12);
    }
  }
}

TEST(ParseWeights, Forms) {
  EXPECT_EQ(parse_weights("[1, 2.5]"), (std::vector<double>{1.0, 2.5}));
  EXPECT_EQ(parse_weights(R"({"weights":[0.5]})"), (std::vector<double>{0.5}));
  EXPECT_EQ(parse_weights("0.1 0.2\n0.3"), (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_THROW(parse_weights(""), ValidationError);
  EXPECT_THROW(parse_weights("1 abc"), ValidationError);
  EXPECT_THROW(parse_weights(R"({"w":[1]})"), ValidationError);
}

TEST(WeightsDigest, StableAndSensitive) {
  const std::vector<double> a{0.75, 0.625};
  EXPECT_EQ(weights_digest(a), weights_digest(a));
  EXPECT_EQ(weights_digest(a).size(), 16U);
  EXPECT_NE(weights_digest(a), weights_digest(std::vector<double>{0.75, 0.6250000000000001}));
}

TEST(JsonLines, RoundTripIsExact) {
  const BoundReport r = sample_report();
  const std::string text = to_json_lines(r);
  const BoundReport back = parse_json_lines(text);
  EXPECT_EQ(back, r);
  EXPECT_EQ(to_json_lines(back), text);
}

TEST(JsonLines, ReportsBadLine) {
  std::string text = to_json_lines(sample_report());
  text += "{not json\n";
  try {
    parse_json_lines(text);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
}

TEST(AnnotateValidity, Slack) {
  BoundReport r;
  r.entries.push_back(make_entry(BoundValue{"a", 0.5 + 5e-10, BoundKind::Lower, std::nullopt, {}}));
  r.entries.push_back(make_entry(BoundValue{"b", 0.6, BoundKind::Lower, std::nullopt, {}}));
  r.entries.push_back(make_entry(BoundValue{"c", 0.4, BoundKind::Upper, std::nullopt, {}}));
  r.entries.push_back(make_entry(BoundValue{"d", 0.5, BoundKind::Upper, std::nullopt, {}}));
  annotate_validity(r, 0.5);
  EXPECT_EQ(r.entries[0].valid, std::optional<bool>(true));
  EXPECT_EQ(r.entries[1].valid, std::optional<bool>(false));
  EXPECT_EQ(r.entries[2].valid, std::optional<bool>(false));
  EXPECT_EQ(r.entries[3].valid, std::optional<bool>(true));
  EXPECT_EQ(r.exact_union, std::optional<double>(0.5));
}

TEST(Table, OrderingAndSeparator) {
  const BoundReport r = sample_report();
  const std::string t = to_table(r);
  const auto sep = t.find("union");
  ASSERT_NE(sep, std::string::npos);
  // Lower bounds above the separator, upper bounds below it.
  EXPECT_LT(t.find("dc"), sep);
  EXPECT_GT(t.find("unew4"), sep);
  EXPECT_NE(t.find("random search over 50"), std::string::npos);

  std::vector<double> lowers;
  for (const auto& e : r.entries) {
    if (e.kind == BoundKind::Lower && e.value) lowers.push_back(*e.value);
  }
  std::sort(lowers.rbegin(), lowers.rend());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%#.6g", lowers.front());
  EXPECT_LT(t.find(buf), sep);
}
