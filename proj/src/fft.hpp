#pragma once

#include <span>

#include "hallmhd/field.hpp"

namespace hallmhd::detail {

/// Band coefficients of one component -> n^3 real samples.
void inverse_component(const Grid3& grid, std::span<const cplx> band, std::span<double> out);
/// n^3 real samples -> band coefficients of one component (exactly conjugate-symmetric).
void forward_component(const Grid3& grid, std::span<const double> in, std::span<cplx> band);

}  // namespace hallmhd::detail
