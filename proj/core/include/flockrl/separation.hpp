#pragma once

#include <vector>

namespace flockrl {

enum class MembershipShape {
  Triangle,
  Gaussian,
  LeftShoulder,   // 1 up to the centre, falling to 0 at centre + width
  RightShoulder,  // 0 up to centre - width, rising to 1 at the centre
  LeftHalf,       // triangle restricted to [centre - width, centre]
  RightHalf,      // triangle restricted to [centre, centre + width]
};

// One fuzzy set over the signed per-axis displacement γ_i - γ_j.
struct Membership {
  MembershipShape shape = MembershipShape::Triangle;
  double center = 0.0;
  double width = 1.0;  // half-base for triangles and shoulders, sigma for Gaussians

  double operator()(double displacement) const;
};

struct FuzzyRuleBase {
  std::vector<Membership> memberships;
  std::vector<double> consequences;  // [m/s²], one per rule
  // Divide by the total firing strength instead of the plain weighted sum.
  bool normalized = false;
  bool adaptive = false;
  double learning_rate = 0.1;
  double consequence_bound = 3.0;
  // Safety distance the membership geometry currently corresponds to.
  double scale = 2.0;

  int size() const { return static_cast<int>(memberships.size()); }
  void validate() const;
  // Total firing strength is positive everywhere on [-range, range].
  bool covers(double range) const;
};

// Rules anchored at {-s, -s/2, 0, s/2, s}. The outer two are shoulders so the
// sets cover every displacement; the centre is split into a left and a right
// half so the push can change sign there. Consequences
// {0, -η₀/2, -η₀, η₀, η₀/2, 0} repel hardest at contact, halve at s/2 and
// fall silent at and beyond s.
FuzzyRuleBase default_rule_base(double s, double eta0 = 1.0);

// Σ_f Θ_f(d)·η_f, or its firing-weighted mean in normalized mode.
double ts_infer(double displacement, const FuzzyRuleBase& rules);

// Neighbourhood mean of the pairwise decisions; 0 for an empty neighbourhood.
double aggregate_separation(const std::vector<double>& displacements, const FuzzyRuleBase& rules);

// Scales membership centres and widths to a new safety distance.
FuzzyRuleBase rescale_rule_base(const FuzzyRuleBase& rules, double s);

// Reinforces each rule in proportion to its firing strength with a reward
// that grows as the pair closes inside s and vanishes beyond it. Rules centred
// strictly inside (-s, s) move away from zero on their own side (the split
// halves at the centre take the side they cover); consequences stay within
// ±consequence_bound. A no-op unless the rule base is adaptive.
FuzzyRuleBase adapt_consequences(const FuzzyRuleBase& rules, double displacement, double safety_s);

}  // namespace flockrl
