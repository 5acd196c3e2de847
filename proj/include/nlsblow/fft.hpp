#pragma once

#include "nlsblow/field.hpp"

#include <functional>
#include <span>

namespace nlsblow {

/// Unitary 2D DFT: sum |u_j|^2 == sum |c_k|^2.
SpectrumField2D transform(const ComplexField2D& field);
ComplexField2D inverse(const SpectrumField2D& spectrum);

/// In-place unitary transforms on raw row-major buffers of grid.size() samples.
/// Plans are cached per thread and per grid size.
void forward_inplace(const GridSpec& grid, std::span<Complex> data);
void inverse_inplace(const GridSpec& grid, std::span<Complex> data);

using RadialSymbol = std::function<Complex(double)>;

/// Fourier multiplier: coefficients times symbol(|xi|). Throws DomainError
/// if the symbol is non-finite anywhere on the grid's wavenumber set.
ComplexField2D apply_symbol(const ComplexField2D& field, const RadialSymbol& symbol);
SpectrumField2D apply_symbol(const SpectrumField2D& spectrum, const RadialSymbol& symbol);

} // namespace nlsblow
