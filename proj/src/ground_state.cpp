#include "nlsblow/ground_state.hpp"

#include "nlsblow/error.hpp"
#include "nlsblow/fft.hpp"
#include "nlsblow/functionals.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace nlsblow {

void to_json(nlohmann::json& j, const GroundState& s) {
  j = nlohmann::json{{"mass", s.mass},
                     {"grad2", s.grad2},
                     {"l4norm4", s.l4norm4},
                     {"energy", s.energy()},
                     {"center_value", s.center_value},
                     {"residual", s.residual},
                     {"samples", s.radii.size()},
                     {"r_max", s.radii.empty() ? 0.0 : s.radii.back()}};
}

void write_profile_csv(const std::filesystem::path& path, const GroundState& state) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << "r,w\n";
  for (std::size_t i = 0; i < state.radii.size(); ++i) {
    out << fmt::format("{:.17g},{:.17g}\n", state.radii[i], state.profile[i]);
  }
}

namespace {

double residual_norm(const SpectrumField2D& w_hat, const ComplexField2D& w) {
  // Lap w - w + w^3, evaluated spectrally for the linear part.
  SpectrumField2D lin = apply_symbol(w_hat, [](double k) { return Complex(-k * k - 1.0); });
  ComplexField2D r = inverse(lin);
  auto rv = r.values();
  const auto wv = w.values();
  for (std::size_t i = 0; i < rv.size(); ++i) rv[i] += wv[i] * std::norm(wv[i]);
  return std::sqrt(mass(r));
}

} // namespace

PetviashviliResult solve_petviashvili(const GridSpec& grid, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw DomainError("Petviashvili tolerance must be positive");
  const auto& xi = wavenumber_magnitudes(grid);

  ComplexField2D w = ComplexField2D::sample(grid, [](double x, double y) {
    return Complex(2.2 / std::cosh(std::hypot(x, y)));
  });
  std::vector<double> history;
  for (int it = 0; it < max_iterations; ++it) {
    SpectrumField2D w_hat = transform(w);
    ComplexField2D cube = w;
    for (Complex& z : cube.values()) z *= std::norm(z);
    SpectrumField2D cube_hat = transform(cube);

    double num = 0.0, den = 0.0;
    const auto wc = w_hat.coefficients();
    const auto cc = cube_hat.coefficients();
    for (std::size_t i = 0; i < wc.size(); ++i) {
      num += (1.0 + xi[i] * xi[i]) * std::norm(wc[i]);
      den += std::real(std::conj(wc[i]) * cc[i]);
    }
    if (!(den > 0.0)) throw ConvergenceError("Petviashvili iteration collapsed to zero");
    const double factor = std::pow(num / den, 1.5);

    SpectrumField2D next_hat(grid);
    auto nc = next_hat.coefficients();
    for (std::size_t i = 0; i < nc.size(); ++i) nc[i] = factor * cc[i] / (1.0 + xi[i] * xi[i]);
    ComplexField2D next = inverse(next_hat);
    for (Complex& z : next.values()) z = Complex(z.real(), 0.0);

    const double residual = residual_norm(transform(next), next);
    history.push_back(residual);
    w = std::move(next);
    if (residual < tol) {
      PetviashviliResult result{GroundState{}, w, it + 1};
      GroundState& gs = result.state;
      gs.mass = mass(w);
      gs.grad2 = 2.0 * kinetic(w);
      gs.l4norm4 = l4norm4(w);
      gs.residual = residual;
      const int n = grid.points();
      const int center = n / 2;
      for (int j = center; j < n; ++j) {
        gs.radii.push_back(grid.coordinate(j));
        gs.profile.push_back(w(center, j).real());
      }
      gs.center_value = gs.profile.front();
      return result;
    }
    if (!std::isfinite(residual)) break;
  }
  std::ostringstream msg;
  msg << "Petviashvili iteration did not reach tolerance " << tol << "; residual history:";
  const std::size_t first = history.size() > 20 ? history.size() - 20 : 0;
  for (std::size_t i = first; i < history.size(); ++i) msg << ' ' << history[i];
  throw ConvergenceError(msg.str());
}

namespace {

struct Shot {
  std::vector<double> w;
  std::vector<double> dw;
  bool overshoot = false;  // crossed zero
};

/// RK4 on (w, w') from a Taylor start at r = dr. Stops at the first zero
/// crossing (overshoot) or the first upturn w' > 0 (undershoot).
Shot shoot(double w0, double dr, std::size_t steps) {
  Shot shot;
  shot.w.reserve(steps + 1);
  shot.dw.reserve(steps + 1);
  const double curvature = 0.5 * (w0 - w0 * w0 * w0);  // w''(0)
  shot.w.push_back(w0);
  shot.dw.push_back(0.0);
  double w = w0 + 0.5 * curvature * dr * dr;
  double v = curvature * dr;
  shot.w.push_back(w);
  shot.dw.push_back(v);

  auto rhs = [](double r, double w_, double v_) {
    return std::array<double, 2>{v_, w_ - w_ * w_ * w_ - v_ / r};
  };
  for (std::size_t i = 1; i < steps; ++i) {
    const double r = static_cast<double>(i) * dr;
    const auto k1 = rhs(r, w, v);
    const auto k2 = rhs(r + 0.5 * dr, w + 0.5 * dr * k1[0], v + 0.5 * dr * k1[1]);
    const auto k3 = rhs(r + 0.5 * dr, w + 0.5 * dr * k2[0], v + 0.5 * dr * k2[1]);
    const auto k4 = rhs(r + dr, w + dr * k3[0], v + dr * k3[1]);
    w += dr / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    v += dr / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    shot.w.push_back(w);
    shot.dw.push_back(v);
    if (w <= 0.0) {
      shot.overshoot = true;
      return shot;
    }
    if (v > 0.0) return shot;
  }
  return shot;
}

} // namespace

GroundState shooting_oracle(double dr, double r_max) {
  if (!(dr > 0.0 && dr < 1e-3)) throw DomainError("shooting step dr must lie in (0, 1e-3)");
  if (!(r_max >= 15.0)) throw DomainError("shooting r_max must be >= 15");
  const auto steps = static_cast<std::size_t>(std::ceil(r_max / dr));

  double lo = 1.0, hi = 4.0;
  if (shoot(lo, dr, steps).overshoot || !shoot(hi, dr, steps).overshoot) {
    throw ConvergenceError("shooting oracle could not bracket w(0) in [1, 4]");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (shoot(mid, dr, steps).overshoot ? hi : lo) = mid;
  }

  const Shot under = shoot(lo, dr, steps);
  const Shot over = shoot(hi, dr, steps);
  const std::size_t common = std::min(under.w.size(), over.w.size());
  std::size_t trusted = common - 1;
  for (std::size_t i = 1; i < common; ++i) {
    if (std::abs(under.w[i] - over.w[i]) > 1e-3 * under.w[i]) {
      trusted = i;
      break;
    }
  }

  GroundState gs;
  gs.radii.resize(steps + 1);
  gs.profile.resize(steps + 1);
  std::vector<double> slope(steps + 1);
  const double r_join = static_cast<double>(trusted) * dr;
  const double w_join = 0.5 * (under.w[trusted] + over.w[trusted]);
  const double k0_join = std::cyl_bessel_k(0.0, r_join);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double r = static_cast<double>(i) * dr;
    gs.radii[i] = r;
    if (i <= trusted) {
      gs.profile[i] = 0.5 * (under.w[i] + over.w[i]);
      slope[i] = 0.5 * (under.dw[i] + over.dw[i]);
    } else {
      gs.profile[i] = w_join * std::cyl_bessel_k(0.0, r) / k0_join;
      slope[i] = -w_join * std::cyl_bessel_k(1.0, r) / k0_join;
    }
  }

  // Trapezoid in r with weight 2 pi r.
  const double two_pi = 2.0 * std::numbers::pi;
  auto integrate = [&](auto&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
      acc += 0.5 * dr * (f(i) * gs.radii[i] + f(i + 1) * gs.radii[i + 1]);
    }
    return two_pi * acc;
  };
  gs.mass = integrate([&](std::size_t i) { return gs.profile[i] * gs.profile[i]; });
  gs.grad2 = integrate([&](std::size_t i) { return slope[i] * slope[i]; });
  gs.l4norm4 = integrate([&](std::size_t i) {
    const double w2 = gs.profile[i] * gs.profile[i];
    return w2 * w2;
  });
  gs.center_value = gs.profile.front();

  double res = 0.0;
  for (std::size_t i = 1; i < trusted; ++i) {
    const double r = gs.radii[i];
    const double w = gs.profile[i];
    const double second = (gs.profile[i + 1] - 2.0 * w + gs.profile[i - 1]) / (dr * dr);
    const double first = (gs.profile[i + 1] - gs.profile[i - 1]) / (2.0 * dr);
    const double e = second + first / r - w + w * w * w;
    res += e * e * r * dr;
  }
  gs.residual = std::sqrt(two_pi * res);
  return gs;
}

double j_functional(const ComplexField2D& f) {
  const double quartic = l4norm4(f);
  if (!(quartic > 0.0)) throw DomainError("J functional is undefined for the zero field");
  return 2.0 * kinetic(f) * mass(f) / quartic;
}

double c_opt(const GroundState& state) { return 2.0 / state.mass; }

} // namespace nlsblow
