#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlsblow/error.hpp"
#include "nlsblow/theory.hpp"

#include <cmath>
#include <random>

using namespace nlsblow;
using namespace nlsblow::theory;

namespace {
// Exact rational values at s = 9/10, alpha6 = 2 (evaluated with Python fractions).
constexpr double kExponentAt09 = 185.0 / 31.0;
constexpr double kPAt09 = 37.0 / 31.0;
} // namespace

TEST_CASE("p(s) reference values") {
  CHECK(p_of_s(1.0) == 0.0);
  CHECK(std::abs(p_of_s(0.9) - 1.19354) < 1e-5);
  CHECK(p_of_s(0.9) == doctest::Approx(kPAt09).epsilon(1e-14));
  CHECK(std::abs(p_of_s(s_q()) - 2.0) < 1e-9);
  CHECK_THROWS_AS(p_of_s(0.5), DomainError);
  CHECK_THROWS_AS(p_of_s(0.0), DomainError);
  CHECK_THROWS_AS(p_of_s(1.2), DomainError);
}

TEST_CASE("s_Q") {
  const double sq = s_q();
  CHECK(std::abs(sq - (1.0 + std::sqrt(11.0)) / 5.0) < 1e-12);
  CHECK(std::abs(sq - 0.8633250) < 1e-6);
  CHECK(std::abs(10 * sq * sq - 4 * sq - 4) < 1e-12);

  double previous = INFINITY;
  for (int i = 1; i <= 100; ++i) {
    ExponentParams params;
    params.alpha6 = 0.02 * i;
    const double root = s_q(params);
    CHECK(std::abs(10 * root * root + (params.alpha6 - 6) * root - 4) < 1e-12);
    CHECK(root < previous);
    previous = root;
  }
}

TEST_CASE("frequency choice") {
  CHECK(n_exponent(0.9) == doctest::Approx(kExponentAt09).epsilon(1e-14));
  CHECK(std::abs(n_exponent(0.9) - 5.9677) < 1e-4);
  CHECK(n_of_lambda(1.0, 0.9) == 1.0);
  CHECK(n_of_lambda(10.0, 0.9) == doctest::Approx(std::pow(10.0, kExponentAt09)));
  CHECK_THROWS_AS(n_of_lambda(0.5, 0.9), DomainError);
  CHECK_THROWS_AS(n_of_lambda(10.0, 0.5), DomainError);

  std::mt19937_64 engine(7);
  std::uniform_real_distribution<double> pick(s_q(), 1.0);
  for (int i = 0; i < 100; ++i) {
    const double s = pick(engine);
    if (s >= 1.0) continue;
    CHECK(std::abs(n_exponent(s) - p_of_s(s) / (2 * (1 - s))) <= 1e-12 * n_exponent(s));
  }
}

TEST_CASE("p stays in (0, 2) above s_Q and decreases") {
  for (double epsilon : {0.0, 0.01}) {
    const ExponentParams params = ExponentParams::with_epsilon(epsilon);
    const double lo = s_q(params);
    double previous = INFINITY;
    for (int i = 1; i <= 1000; ++i) {
      const double s = lo + (1.0 - lo) * i / 1001.0;
      const double p = p_of_s(s, params);
      CHECK(p > 0.0);
      CHECK(p < 2.0);
      CHECK(p < previous);
      previous = p;
    }
    CHECK(p_of_s(1.0, params) == 0.0);
  }
}

TEST_CASE("conclusions are stable under a small epsilon") {
  const ExponentParams params = ExponentParams::with_epsilon(0.01);
  CHECK(params.alpha4 == 1.49);
  CHECK(params.alpha6 == 1.99);
  CHECK(s_q(params) > s_q());
  CHECK(s_q(params) < 0.9);
  CHECK(p_of_s(0.9, params) < 2.0);
  CHECK(std::abs(p_of_s(0.9, params) - p_of_s(0.9)) < 0.01);
  CHECK_THROWS_AS(ExponentParams::with_epsilon(-0.1), DomainError);
  CHECK_THROWS_AS(ExponentParams::with_epsilon(1.5), DomainError);
  ExponentParams bad;
  bad.alpha6 = 2.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("second term is subdominant") {
  for (double s : {0.87, 0.9, 0.95}) {
    double previous = INFINITY;
    for (double lambda : {10.0, 100.0, 1000.0}) {
      const double ratio = subdominance_ratio(lambda, s);
      CHECK(ratio < 1.0);
      CHECK(ratio < previous);
      previous = ratio;
    }
  }
}

TEST_CASE("table") {
  const auto rows = table(0.87, 0.99, 13);
  REQUIRE(rows.size() == 13);
  CHECK(rows.front().s == 0.87);
  CHECK(rows.back().s == doctest::Approx(0.99).epsilon(1e-15));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].p < rows[i - 1].p);
  const nlohmann::json j = to_json(rows);
  CHECK(j.size() == 13);
  CHECK(j[0].contains("p"));
  CHECK_THROWS_AS(table(0.5, 0.9, 5), DomainError);
}
