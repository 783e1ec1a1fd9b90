#include "flockrl/separation.hpp"

#include <algorithm>
#include <cmath>

#include "flockrl/errors.hpp"

namespace flockrl {

double Membership::operator()(double d) const {
  switch (shape) {
    case MembershipShape::Triangle:
      return std::max(0.0, 1.0 - std::abs(d - center) / width);
    case MembershipShape::Gaussian: {
      const double u = (d - center) / width;
      return std::exp(-0.5 * u * u);
    }
    case MembershipShape::LeftShoulder:
      return d <= center ? 1.0 : std::max(0.0, 1.0 - (d - center) / width);
    case MembershipShape::RightShoulder:
      return d >= center ? 1.0 : std::max(0.0, 1.0 - (center - d) / width);
    case MembershipShape::LeftHalf:
      return d > center ? 0.0 : std::max(0.0, 1.0 - (center - d) / width);
    case MembershipShape::RightHalf:
      return d < center ? 0.0 : std::max(0.0, 1.0 - (d - center) / width);
  }
  return 0.0;
}

void FuzzyRuleBase::validate() const {
  if (memberships.empty()) throw ConfigError("rule base has no rules");
  if (memberships.size() != consequences.size()) throw ConfigError("rule base needs one consequence per membership");
  for (const auto& m : memberships) {
    if (!std::isfinite(m.center) || !(m.width > 0.0)) throw ConfigError("membership needs a finite centre and positive width");
  }
  for (double eta : consequences) {
    if (!std::isfinite(eta)) throw ConfigError("rule consequences must be finite");
  }
  if (!(scale > 0.0)) throw ConfigError("rule base scale must be positive");
  if (adaptive && !(learning_rate >= 0.0 && consequence_bound > 0.0)) {
    throw ConfigError("adaptive rule base needs a non-negative rate and positive bound");
  }
}

bool FuzzyRuleBase::covers(double range) const {
  constexpr int kSamples = 4001;
  for (int n = 0; n < kSamples; ++n) {
    const double d = -range + 2.0 * range * n / (kSamples - 1);
    double total = 0.0;
    for (const auto& m : memberships) total += m(d);
    if (!(total > 0.0)) return false;
  }
  return true;
}

FuzzyRuleBase default_rule_base(double s, double eta0) {
  if (!(s > 0.0)) throw ConfigError("safety distance must be positive");
  FuzzyRuleBase rules;
  const double w = 0.5 * s;
  rules.memberships = {
      {MembershipShape::LeftShoulder, -s, w},
      {MembershipShape::Triangle, -0.5 * s, w},
      {MembershipShape::LeftHalf, 0.0, w},
      {MembershipShape::RightHalf, 0.0, w},
      {MembershipShape::Triangle, 0.5 * s, w},
      {MembershipShape::RightShoulder, s, w},
  };
  rules.consequences = {0.0, -0.5 * eta0, -eta0, eta0, 0.5 * eta0, 0.0};
  rules.scale = s;
  return rules;
}

double ts_infer(double displacement, const FuzzyRuleBase& rules) {
  double weighted = 0.0;
  double total = 0.0;
  for (int f = 0; f < rules.size(); ++f) {
    const double theta = rules.memberships[f](displacement);
    weighted += theta * rules.consequences[f];
    total += theta;
  }
  if (rules.normalized) return total > 0.0 ? weighted / total : 0.0;
  return weighted;
}

double aggregate_separation(const std::vector<double>& displacements, const FuzzyRuleBase& rules) {
  if (displacements.empty()) return 0.0;
  double sum = 0.0;
  for (double d : displacements) sum += ts_infer(d, rules);
  return sum / static_cast<double>(displacements.size());
}

FuzzyRuleBase rescale_rule_base(const FuzzyRuleBase& rules, double s) {
  if (!(s > 0.0)) throw ConfigError("safety distance must be positive");
  FuzzyRuleBase out = rules;
  const double k = s / rules.scale;
  for (auto& m : out.memberships) {
    m.center *= k;
    m.width *= k;
  }
  out.scale = s;
  return out;
}

FuzzyRuleBase adapt_consequences(const FuzzyRuleBase& rules, double displacement, double safety_s) {
  FuzzyRuleBase out = rules;
  const double gap = std::abs(displacement);
  if (!out.adaptive || !(gap < safety_s)) return out;
  const double reward = std::expm1(1.0 - gap / safety_s) / std::expm1(1.0);
  for (int f = 0; f < out.size(); ++f) {
    const Membership& m = out.memberships[f];
    if (std::abs(m.center) >= safety_s) continue;
    double side = m.center > 0.0 ? 1.0 : (m.center < 0.0 ? -1.0 : 0.0);
    if (m.shape == MembershipShape::LeftHalf) side = -1.0;
    if (m.shape == MembershipShape::RightHalf) side = 1.0;
    const double eta = out.consequences[f] + out.learning_rate * m(displacement) * reward * side;
    out.consequences[f] = std::clamp(eta, -out.consequence_bound, out.consequence_bound);
  }
  return out;
}

}  // namespace flockrl
