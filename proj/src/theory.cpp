#include "nlsblow/theory.hpp"

#include "nlsblow/error.hpp"

#include <cmath>
#include <string>

namespace nlsblow::theory {

ExponentParams ExponentParams::with_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.5)) throw DomainError("epsilon must lie in [0, 3/2)");
  ExponentParams params{1.5 - epsilon, 2.0 - epsilon};
  params.validate();
  return params;
}

void ExponentParams::validate() const {
  if (!(alpha4 > 0.0 && alpha4 <= 1.5)) throw DomainError("alpha4 must lie in (0, 3/2]");
  if (!(alpha6 > 0.0 && alpha6 <= 2.0)) throw DomainError("alpha6 must lie in (0, 2]");
}

namespace {

void check_s(double s) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("s must lie in (0, 1], got " + std::to_string(s));
}

} // namespace

double n_exponent(double s, const ExponentParams& params) {
  check_s(s);
  params.validate();
  const double denominator = params.alpha6 - (4.0 + 2.0 / s) * (1.0 - s);
  if (!(denominator > 0.0)) {
    throw DomainError("s = " + std::to_string(s) + " is too small: alpha6 - (4 + 2/s)(1 - s) <= 0");
  }
  return (6.0 + 2.0 / s) / denominator;
}

double p_of_s(double s, const ExponentParams& params) {
  return n_exponent(s, params) * 2.0 * (1.0 - s);
}

double s_q(const ExponentParams& params) {
  params.validate();
  const double b = params.alpha6 - 6.0;
  return (-b + std::sqrt(b * b + 160.0)) / 20.0;
}

double n_of_lambda(double lambda, double s, const ExponentParams& params) {
  if (!(lambda >= 1.0)) throw DomainError("Lambda must be >= 1");
  return std::pow(lambda, n_exponent(s, params));
}

double subdominance_ratio(double lambda, double s, const ExponentParams& params) {
  const double log_n = n_exponent(s, params) * std::log(lambda);
  const double second = (-params.alpha4 + (4.0 + 2.0 / s) * (1.0 - s)) * log_n +
                        (4.0 + 2.0 / s) * std::log(lambda);
  const double third = (-params.alpha6 + (6.0 + 2.0 / s) * (1.0 - s)) * log_n +
                       (6.0 + 2.0 / s) * std::log(lambda);
  return std::exp(second - third);
}

std::vector<TableRow> table(double s_min, double s_max, int count, const ExponentParams& params) {
  if (count < 1) throw DomainError("theory table needs at least one row");
  std::vector<TableRow> rows;
  rows.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double s = count == 1 ? s_min : s_min + (s_max - s_min) * i / (count - 1);
    rows.push_back({s, p_of_s(s, params), n_exponent(s, params)});
  }
  return rows;
}

nlohmann::json to_json(const std::vector<TableRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const TableRow& row : rows) {
    out.push_back({{"s", row.s}, {"p", row.p}, {"n_exponent", row.n_exponent}});
  }
  return out;
}

} // namespace nlsblow::theory
