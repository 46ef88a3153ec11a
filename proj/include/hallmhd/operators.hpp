#pragma once

#include "hallmhd/field.hpp"

namespace hallmhd {

enum class DiffKind { grad, div, curl };

/// Exact spectral derivative. grad: scalar -> vector3, div: vector3 -> scalar,
/// curl: vector3 -> vector3. Throws std::invalid_argument on a rank mismatch.
SpectralField differentiate(DiffKind kind, const SpectralField& f);

inline SpectralField grad(const SpectralField& f) { return differentiate(DiffKind::grad, f); }
inline SpectralField divergence(const SpectralField& f) { return differentiate(DiffKind::div, f); }
inline SpectralField curl(const SpectralField& f) { return differentiate(DiffKind::curl, f); }

/// Named radial Fourier multipliers.
struct Multiplier {
  enum class Kind {
    heat,                     // exp(-t |xi|^2)
    helmholtz_inverse,        // (1 + |xi|^2)^-1
    laplacian,                // -|xi|^2
    neg_laplacian_helmholtz,  // |xi|^2 (1 + |xi|^2)^-1
  };
  Kind kind = Kind::heat;
  double t = 0.0;

  static Multiplier heat(double t) { return {Kind::heat, t}; }
  static Multiplier helmholtz_inverse() { return {Kind::helmholtz_inverse, 0.0}; }
  static Multiplier laplacian() { return {Kind::laplacian, 0.0}; }
  static Multiplier neg_laplacian_helmholtz() { return {Kind::neg_laplacian_helmholtz, 0.0}; }

  /// Symbol value at |xi|^2.
  double symbol(double xi_sq) const;
};

/// Pointwise multiplication in Fourier space. Throws for heat with t < 0.
SpectralField apply_multiplier(const Multiplier& m, const SpectralField& f);

/// Leray projection xi (xi . v) / |xi|^2 removed; the mean mode passes through.
SpectralField leray_project(const SpectralField& v);

/// Product in physical space followed by truncation to the band.
/// Supports scalar*scalar, scalar*vector and vector*scalar.
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g);
/// u . v (scalar) and u x v (vector), each computed in physical space.
SpectralField dot(const SpectralField& u, const SpectralField& v);
SpectralField cross(const SpectralField& u, const SpectralField& v);
/// u . grad v for vector fields, as the tensor divergence div(u (x) v).
SpectralField advect(const SpectralField& u, const SpectralField& v);

/// Sum over xi != 0 of the L^2 norm of div f, relative to ||f||; 0 for f = 0.
double divergence_ratio(const SpectralField& v);

}  // namespace hallmhd
