#pragma once

#include "nlsblow/multiplier.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace nlsblow {

/// Outcome of a brute-force sampling audit of one multiplier inequality.
struct AuditReport {
  std::string regime;
  std::size_t samples = 0;
  double max_ratio = 0.0;  // largest observed (lhs / bound-shape)
  std::size_t violations = 0;
  std::uint64_t seed = 0;
  double constant = 0.0;   // ratio threshold counted as a violation

  bool passed() const { return violations == 0; }
};

void to_json(nlohmann::json& j, const AuditReport& report);

struct AuditOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double constant = 10.0;
  int jobs = 1;
};

/// All of xi_2, xi_3, xi_4 within |xi| <= N/4 (so |xi_1| < N): the factor
/// 1 - m1/(m2 m3 m4) must vanish exactly. Ratio is |factor|.
AuditReport audit_case1_vanishing(const MultiplierProfile& profile, const AuditOptions& options);

/// N <= |xi_2|, |xi_4| <= |xi_3| <= N/8, xi_1 = -(xi_2 + xi_3 + xi_4).
/// Ratio |1 - m1/(m2 m3 m4)| * |xi_2| / |xi_3|, violation above options.constant.
AuditReport audit_case2_bound(const MultiplierProfile& profile, const AuditOptions& options);

/// N <= |xi_3| <= |xi_2|, |xi_4| <= |xi_3|. Checks |1 - x| <= x with
/// x = m1/(m2 m3 m4); ratio |1 - x| / x, violation above 1.
AuditReport audit_trivial_bound(const MultiplierProfile& profile, const AuditOptions& options);

/// Sextilinear Case 2: N <= |xi_4|, |xi_6| <= |xi_5| <= N, xi_123 = -(xi_4 + xi_5 + xi_6).
/// Ratio |1 - m123/(m4 m5 m6)| * |xi_4| / |xi_5|, violation above options.constant.
AuditReport audit_sextilinear_bound(const MultiplierProfile& profile, const AuditOptions& options);

/// m(x) <x>^{1/2} nondecreasing and >= 1 on `radii` log-spaced points of [1, 10^3 N].
/// Ratio is the largest relative decrease observed; violations count decreasing steps.
AuditReport audit_half_weight(const MultiplierProfile& profile, std::size_t radii = 10000);

} // namespace nlsblow
