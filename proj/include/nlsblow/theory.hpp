#pragma once

#include <json.hpp>

#include <vector>

namespace nlsblow::theory {

/// Decay exponents of the almost-conservation increments. The "minus" in
/// alpha4 = 3/2-, alpha6 = 2- is modelled by epsilon.
struct ExponentParams {
  double alpha4 = 1.5;
  double alpha6 = 2.0;

  /// Throws DomainError unless 0 <= epsilon < 3/2.
  static ExponentParams with_epsilon(double epsilon);
  void validate() const;
};

/// Exponent of Lambda in the frequency choice N(Lambda):
///   (6 + 2/s) / (alpha6 - (4 + 2/s)(1 - s)).
/// Throws DomainError when the denominator is not positive.
double n_exponent(double s, const ExponentParams& params = {});

/// Growth exponent of the modified energy: n_exponent(s) * 2 (1 - s); p(1) = 0.
double p_of_s(double s, const ExponentParams& params = {});

/// Positive root of 10 s^2 + (alpha6 - 6) s - 4 = 0; p(s) < 2 exactly for s above it.
double s_q(const ExponentParams& params = {});

/// N = Lambda^{n_exponent(s)} with unit constant. Lambda must be at least 1.
double n_of_lambda(double lambda, double s, const ExponentParams& params = {});

/// Ratio of the alpha4 to the alpha6 contribution in the accumulated energy
/// bound at N = n_of_lambda(Lambda, s):
///   N^{-alpha4 + (4+2/s)(1-s)} Lambda^{4+2/s} / (N^{-alpha6 + (6+2/s)(1-s)} Lambda^{6+2/s}).
double subdominance_ratio(double lambda, double s, const ExponentParams& params = {});

struct TableRow {
  double s = 0.0;
  double p = 0.0;
  double n_exponent = 0.0;
};

/// Rows for `count` equally spaced s in [s_min, s_max].
std::vector<TableRow> table(double s_min, double s_max, int count, const ExponentParams& params = {});

nlohmann::json to_json(const std::vector<TableRow>& rows);

} // namespace nlsblow::theory
