#include <cmath>
#include <random>

#include "doctest.h"
#include "flockrl/errors.hpp"
#include "flockrl/kinematics.hpp"
#include "flockrl/separation.hpp"

using namespace flockrl;

namespace {

// Two agents on a line pulled together by a constant 0.3 m/s² and damped,
// pushed apart by their separation rules. Returns the final gap.
double two_agent_gap(bool adaptive, double s, int steps) {
  FuzzyRuleBase base = default_rule_base(s, 1.0);
  base.adaptive = adaptive;
  std::array<FuzzyRuleBase, 2> rules{base, base};
  std::array<AgentState, 2> a;
  a[0].position = Vec2(-1.5 * s, 0);
  a[1].position = Vec2(1.5 * s, 0);
  const Limits lim{1.2, 2.0};
  for (int k = 0; k < steps; ++k) {
    std::array<AgentState, 2> next = a;
    for (int i = 0; i < 2; ++i) {
      const int j = 1 - i;
      const double d = a[i].position.x() - a[j].position.x();
      const double pull = d > 0 ? -0.3 : 0.3;
      const double u = pull - 2.0 * a[i].velocity.x() + aggregate_separation({d}, rules[i]);
      rules[i] = adapt_consequences(rules[i], d, s);
      next[i] = step_agent(a[i], Vec2(u, 0), 0.05, lim);
    }
    a = next;
  }
  return std::abs(a[0].position.x() - a[1].position.x());
}

}  // namespace

TEST_SUITE("separation") {

TEST_CASE("zero consequences give zero output") {
  FuzzyRuleBase rules = default_rule_base(2.0, 1.0);
  for (double& eta : rules.consequences) eta = 0.0;
  for (int n = -800; n <= 800; ++n) REQUIRE(ts_infer(n * 0.01, rules) == 0.0);
}

TEST_CASE("a single always-on rule returns its consequence") {
  FuzzyRuleBase rules;
  rules.memberships = {{MembershipShape::Gaussian, 0.0, 1e12}};
  rules.consequences = {0.7};
  for (double d : {-5.0, 0.0, 0.3, 7.0}) CHECK(ts_infer(d, rules) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("default rule base is odd and antisymmetric between agents") {
  const FuzzyRuleBase rules = default_rule_base(2.0, 1.5);
  for (int n = -2000; n <= 2000; ++n) {
    const double d = n * 0.004;
    REQUIRE(ts_infer(-d, rules) == -ts_infer(d, rules));
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int n = 0; n < 1000; ++n) {
    const double xi = U(rng), xj = U(rng);
    REQUIRE(aggregate_separation({xi - xj}, rules) == -aggregate_separation({xj - xi}, rules));
  }
}

TEST_CASE("default rule base repels inside s and is silent beyond") {
  const double s = 2.0, eta0 = 1.0;
  const FuzzyRuleBase rules = default_rule_base(s, eta0);
  CHECK(ts_infer(1e-12, rules) == doctest::Approx(eta0));
  CHECK(ts_infer(-1e-12, rules) == doctest::Approx(-eta0));
  CHECK(ts_infer(0.0, rules) == 0.0);
  CHECK(ts_infer(s / 2, rules) == doctest::Approx(eta0 / 2));
  CHECK(ts_infer(-s / 2, rules) == doctest::Approx(-eta0 / 2));
  for (int n = 1; n < 1000; ++n) {
    const double d = s * n / 1000.0;
    REQUIRE(ts_infer(d, rules) > 0.0);
    REQUIRE(ts_infer(d, rules) == doctest::Approx(eta0 * (1.0 - d / s)).epsilon(1e-12));
  }
  for (double d = s; d < 20.0; d += 0.01) REQUIRE(ts_infer(d, rules) == 0.0);
  CHECK(rules.covers(2 * 3.5));
  CHECK_NOTHROW(rules.validate());
}

TEST_CASE("far neighbours do not interfere") {
  const FuzzyRuleBase rules = default_rule_base(2.5, 2.0);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(3.5, 10);
  for (int n = 0; n < 1000; ++n) {
    std::vector<double> d;
    for (int j = 0; j < 4; ++j) d.push_back((rng() % 2 ? 1 : -1) * U(rng));
    REQUIRE(std::abs(aggregate_separation(d, rules)) <= 1e-6);
  }
}

TEST_CASE("aggregation examples") {
  const FuzzyRuleBase rules = default_rule_base(2.0, 1.0);
  CHECK(aggregate_separation({}, rules) == 0.0);
  CHECK(aggregate_separation({0.7, -0.7}, rules) == 0.0);
  const std::vector<double> d{0.3, -1.1, 2.4};
  double sum = 0.0;
  for (double x : d) {
    double direct = 0.0;
    for (int f = 0; f < rules.size(); ++f) direct += rules.memberships[f](x) * rules.consequences[f];
    sum += direct;
  }
  CHECK(aggregate_separation(d, rules) == doctest::Approx(sum / 3.0).epsilon(1e-15));
}

TEST_CASE("normalized mode divides by the firing strength") {
  FuzzyRuleBase rules;
  rules.memberships = {{MembershipShape::Triangle, 0.0, 2.0}, {MembershipShape::Triangle, 1.0, 2.0}};
  rules.consequences = {1.0, 3.0};
  CHECK(ts_infer(0.5, rules) == doctest::Approx(0.75 * 1 + 0.75 * 3));
  rules.normalized = true;
  CHECK(ts_infer(0.5, rules) == doctest::Approx(2.0));
  CHECK(ts_infer(50.0, rules) == 0.0);
}

TEST_CASE("membership shapes") {
  const Membership tri{MembershipShape::Triangle, 1.0, 0.5};
  CHECK(tri(1.0) == 1.0);
  CHECK(tri(1.25) == doctest::Approx(0.5));
  CHECK(tri(0.5) == 0.0);
  const Membership gau{MembershipShape::Gaussian, 0.0, 1.0};
  CHECK(gau(1.0) == doctest::Approx(std::exp(-0.5)));
  const Membership ls{MembershipShape::LeftShoulder, 0.0, 1.0};
  CHECK(ls(-100.0) == 1.0);
  CHECK(ls(0.5) == doctest::Approx(0.5));
  CHECK(ls(1.0) == 0.0);
  const Membership rs{MembershipShape::RightShoulder, 0.0, 1.0};
  CHECK(rs(100.0) == 1.0);
  CHECK(rs(-0.5) == doctest::Approx(0.5));
  const Membership lh{MembershipShape::LeftHalf, 0.0, 1.0};
  CHECK(lh(0.0) == 1.0);
  CHECK(lh(1e-9) == 0.0);
  CHECK(lh(-0.25) == doctest::Approx(0.75));
  const Membership rh{MembershipShape::RightHalf, 0.0, 1.0};
  CHECK(rh(-1e-9) == 0.0);
  CHECK(rh(0.25) == doctest::Approx(0.75));
}

TEST_CASE("invalid rule bases are rejected") {
  FuzzyRuleBase rules = default_rule_base(2.0);
  rules.consequences.pop_back();
  CHECK_THROWS_AS(rules.validate(), ConfigError);
  rules = default_rule_base(2.0);
  rules.memberships[0].width = 0.0;
  CHECK_THROWS_AS(rules.validate(), ConfigError);
  rules = default_rule_base(2.0);
  rules.consequences[1] = NAN;
  CHECK_THROWS_AS(rules.validate(), ConfigError);
  CHECK_THROWS_AS(default_rule_base(0.0), ConfigError);
  FuzzyRuleBase gap;
  gap.memberships = {{MembershipShape::Triangle, 0.0, 1.0}};
  gap.consequences = {1.0};
  CHECK_FALSE(gap.covers(7.0));
}

TEST_CASE("rescaling follows the safety distance") {
  const FuzzyRuleBase a = default_rule_base(2.0, 1.0);
  const FuzzyRuleBase b = rescale_rule_base(a, 2.5);
  const FuzzyRuleBase fresh = default_rule_base(2.5, 1.0);
  for (int f = 0; f < a.size(); ++f) {
    CHECK(b.memberships[f].center == doctest::Approx(1.25 * a.memberships[f].center));
    CHECK(b.memberships[f].width == doctest::Approx(fresh.memberships[f].width));
    CHECK(b.consequences[f] == a.consequences[f]);
  }
  CHECK(b.scale == 2.5);
}

TEST_CASE("adaptation leaves rules alone beyond s or when disabled") {
  FuzzyRuleBase rules = default_rule_base(2.0, 1.0);
  CHECK(adapt_consequences(rules, 0.1, 2.0).consequences == rules.consequences);
  rules.adaptive = true;
  CHECK(adapt_consequences(rules, 2.5, 2.0).consequences == rules.consequences);
  CHECK(adapt_consequences(rules, -2.0, 2.0).consequences == rules.consequences);
}

TEST_CASE("adaptation at contact strengthens repulsion on both sides") {
  FuzzyRuleBase rules = default_rule_base(2.0, 1.0);
  rules.adaptive = true;
  const FuzzyRuleBase out = adapt_consequences(rules, 0.0, 2.0);
  CHECK(out.consequences[2] < rules.consequences[2]);
  CHECK(out.consequences[3] > rules.consequences[3]);
  CHECK(ts_infer(1e-9, out) > ts_infer(1e-9, rules));
  CHECK(ts_infer(-1e-9, out) < ts_infer(-1e-9, rules));
  CHECK(out.consequences[0] == 0.0);
  CHECK(out.consequences[5] == 0.0);
}

TEST_CASE("adapted consequences stay bounded") {
  FuzzyRuleBase rules = default_rule_base(2.0, 1.0);
  rules.adaptive = true;
  rules.learning_rate = 1.0;
  for (int n = 0; n < 1000; ++n) rules = adapt_consequences(rules, 0.3, 2.0);
  for (double eta : rules.consequences) CHECK(std::abs(eta) <= rules.consequence_bound);
}

TEST_CASE("adaptive rules hold two converging agents near the safety distance") {
  const double s = 2.0;
  const double fixed = two_agent_gap(false, s, 1000);
  const double adapted = two_agent_gap(true, s, 1000);
  CHECK(adapted >= 0.9 * s);
  CHECK(adapted > fixed);
}

}
