#include "nlsblow/fft.hpp"

#include "nlsblow/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace nlsblow {

namespace {

// The FFTW planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

class PlanPair {
public:
  explicit PlanPair(int n) : n_(n) {
    const auto count = static_cast<std::size_t>(n) * n;
    std::lock_guard lock(planner_mutex());
    buffer_ = fftw_alloc_complex(count);
    forward_ = fftw_plan_dft_2d(n, n, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_2d(n, n, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }

  void run(std::span<Complex> data, bool forward) {
    std::copy(data.begin(), data.end(), reinterpret_cast<Complex*>(buffer_));
    fftw_execute(forward ? forward_ : backward_);
    const double scale = 1.0 / n_;
    for (std::size_t i = 0; i < data.size(); ++i) {
      data[i] = Complex(buffer_[i][0] * scale, buffer_[i][1] * scale);
    }
  }

private:
  int n_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

PlanPair& plans_for(int n) {
  thread_local std::map<int, std::unique_ptr<PlanPair>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

void check_buffer(const GridSpec& grid, std::span<Complex> data) {
  if (data.size() != grid.size()) throw ConfigError("transform buffer does not match grid");
}

} // namespace

void forward_inplace(const GridSpec& grid, std::span<Complex> data) {
  check_buffer(grid, data);
  plans_for(grid.points()).run(data, true);
}

void inverse_inplace(const GridSpec& grid, std::span<Complex> data) {
  check_buffer(grid, data);
  plans_for(grid.points()).run(data, false);
}

SpectrumField2D transform(const ComplexField2D& field) {
  const auto values = field.values();
  SpectrumField2D out(field.grid(), std::vector<Complex>(values.begin(), values.end()));
  forward_inplace(out.grid(), out.coefficients());
  return out;
}

ComplexField2D inverse(const SpectrumField2D& spectrum) {
  const auto coeffs = spectrum.coefficients();
  ComplexField2D out(spectrum.grid(), std::vector<Complex>(coeffs.begin(), coeffs.end()));
  inverse_inplace(out.grid(), out.values());
  return out;
}

SpectrumField2D apply_symbol(const SpectrumField2D& spectrum, const RadialSymbol& symbol) {
  SpectrumField2D out = spectrum;
  const auto& xi = wavenumber_magnitudes(spectrum.grid());
  auto coeffs = out.coefficients();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Complex value = symbol(xi[i]);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw DomainError("symbol is not finite at |xi| = " + std::to_string(xi[i]));
    }
    coeffs[i] *= value;
  }
  return out;
}

ComplexField2D apply_symbol(const ComplexField2D& field, const RadialSymbol& symbol) {
  return inverse(apply_symbol(transform(field), symbol));
}

} // namespace nlsblow
