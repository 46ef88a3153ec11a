#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hallmhd/field.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/random_fields.hpp"
#include "hallmhd/snapshot.hpp"

using namespace hallmhd;

namespace {

const Grid3 kGrid{32};

SpectralField scalar(double (*f)(double, double, double)) {
  return to_spectral(sample_scalar(kGrid, f));
}

template <class F>
SpectralField vector(F&& f) {
  return to_spectral(sample_vector(kGrid, f));
}

}  // namespace

TEST_CASE("grid validation and band") {
  CHECK(kGrid.kmax() == 10);
  CHECK(kGrid.band() == 21);
  CHECK(Grid3{16}.kmax() == 5);
  CHECK_THROWS_AS(Grid3{12}.validate(), std::invalid_argument);
  CHECK_THROWS_AS((Grid3{32, -1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((Grid3{32, 1.0, 0.0}).validate(), std::invalid_argument);
  // full fraction still stops short of Nyquist
  CHECK(Grid3{8, 1.0, 1.0}.kmax() == 3);
}

TEST_CASE("sin x1 transforms to a single conjugate pair") {
  auto f = scalar([](double x, double, double) { return std::sin(x); });
  CHECK(std::abs(f.coeff(0, 1, 0, 0) - cplx(0, -0.5)) < 1e-14);
  CHECK(std::abs(f.coeff(0, -1, 0, 0) - cplx(0, 0.5)) < 1e-14);
  double rest = 0;
  for (auto c : f.coefficients()) rest += std::norm(c);
  CHECK(std::abs(rest - 0.5) < 1e-14);

  const RealField back = to_physical(f);
  const RealField orig = sample_scalar(kGrid, [](double x, double, double) { return std::sin(x); });
  double err = 0;
  for (std::size_t i = 0; i < orig.data.size(); ++i) err = std::max(err, std::abs(back.data[i] - orig.data[i]));
  CHECK(err < 1e-13);
}

TEST_CASE("zero samples give a zero spectrum") {
  RealField z(kGrid, Rank::vector3);
  CHECK(max_coeff(to_spectral(z)) == 0.0);
}

TEST_CASE("random band-limited round trip") {
  const SpectralField f = random_field(kGrid, Rank::vector3, 10.0, 1.0, 7);
  const SpectralField g = to_spectral(to_physical(f));
  CHECK(relative_difference(g, f) <= 1e-12);
}

TEST_CASE("transform rejects a size mismatch") {
  RealField r(kGrid, Rank::scalar);
  r.data.pop_back();
  CHECK_THROWS_AS(to_spectral(r), std::invalid_argument);
}

TEST_CASE("derivatives") {
  SUBCASE("curl of a gradient vanishes") {
    auto g = scalar([](double x, double y, double) { return std::sin(x) * std::cos(y); });
    CHECK(max_coeff(curl(grad(g))) < 1e-15);
  }
  SUBCASE("curl of (0,0,sin x1)") {
    auto v = vector([](double x, double, double) { return std::array{0.0, 0.0, std::sin(x)}; });
    auto want = vector([](double x, double, double) { return std::array{0.0, -std::cos(x), 0.0}; });
    CHECK(relative_difference(curl(v), want) < 1e-13);
  }
  SUBCASE("double curl of a shear is minus the Laplacian") {
    auto U = vector([](double, double y, double) { return std::array{std::sin(y), 0.0, 0.0}; });
    CHECK(relative_difference(curl(curl(U)), U) < 1e-13);
    CHECK(relative_difference(curl(curl(U)), -1.0 * apply_multiplier(Multiplier::laplacian(), U)) < 1e-13);
  }
  SUBCASE("random fields") {
    const auto g = random_field(kGrid, Rank::scalar, 10.0, 1.0, 3);
    const auto v = random_field(kGrid, Rank::vector3, 10.0, 1.0, 4);
    CHECK(l2_norm(curl(grad(g))) <= 1e-12 * l2_norm(grad(g)));
    CHECK(l2_norm(divergence(curl(v))) <= 1e-12 * l2_norm(curl(v)));
  }
  SUBCASE("rank mismatch") {
    const auto v = random_field(kGrid, Rank::vector3, 4.0, 1.0, 4);
    CHECK_THROWS_AS(grad(v), std::invalid_argument);
    CHECK_THROWS_AS(divergence(divergence(v)), std::invalid_argument);
  }
}

TEST_CASE("multipliers") {
  auto s1 = scalar([](double x, double, double) { return std::sin(x); });
  auto s2 = scalar([](double x, double, double) { return std::sin(2 * x); });
  CHECK(relative_difference(apply_multiplier(Multiplier::helmholtz_inverse(), s1), 0.5 * s1) < 1e-14);
  CHECK(relative_difference(apply_multiplier(Multiplier::helmholtz_inverse(), s2), 0.2 * s2) < 1e-14);
  CHECK(relative_difference(apply_multiplier(Multiplier::heat(0.3), s1), std::exp(-0.3) * s1) < 1e-14);

  SpectralField c(kGrid, Rank::scalar);
  c.set_mode(0, 0, 0, 0, 2.5);
  CHECK(relative_difference(apply_multiplier(Multiplier::helmholtz_inverse(), c), c) == 0.0);

  const auto f = random_field(kGrid, Rank::vector3, 10.0, 1.0, 11);
  CHECK(relative_difference(apply_multiplier(Multiplier::heat(0.0), f), f) == 0.0);
  const auto st = apply_multiplier(Multiplier::heat(0.2), apply_multiplier(Multiplier::heat(0.05), f));
  CHECK(relative_difference(st, apply_multiplier(Multiplier::heat(0.25), f)) <= 1e-12);
  CHECK_THROWS_AS(apply_multiplier(Multiplier::heat(-1.0), f), std::invalid_argument);
}

TEST_CASE("leray projection") {
  auto v = vector([](double x, double, double) { return std::array{std::sin(x), 0.0, 0.0}; });
  CHECK(max_coeff(leray_project(v)) < 1e-15);

  const auto g = random_field(kGrid, Rank::scalar, 10.0, 1.0, 5);
  CHECK(l2_norm(leray_project(grad(g))) <= 1e-13 * l2_norm(grad(g)));

  const auto w = random_solenoidal(kGrid, 10.0, 1.0, 6);
  CHECK(relative_difference(leray_project(w), w) <= 1e-12);
  CHECK(divergence_ratio(w) <= 1e-12);

  auto m = random_field(kGrid, Rank::vector3, 10.0, 1.0, 8);
  for (int c = 0; c < 3; ++c) m.set_mode(c, 0, 0, 0, 0.5 + c);
  const auto pm = leray_project(m);
  for (int c = 0; c < 3; ++c) CHECK(mean_mode(pm, c) == cplx(0.5 + c, 0.0));
  CHECK(relative_difference(leray_project(pm), pm) <= 1e-12);
}

TEST_CASE("pointwise products") {
  auto s = scalar([](double x, double, double) { return std::sin(x); });
  auto want = scalar([](double x, double, double) { return 0.5 - 0.5 * std::cos(2 * x); });
  CHECK(relative_difference(pointwise_product(s, s), want) < 1e-14);

  SpectralField one(kGrid, Rank::scalar);
  one.set_mode(0, 0, 0, 0, 1.0);
  const auto f = random_field(kGrid, Rank::scalar, 10.0, 1.0, 9);
  CHECK(relative_difference(pointwise_product(f, one), f) <= 1e-13);
  CHECK(max_coeff(pointwise_product(f, SpectralField(kGrid, Rank::scalar))) == 0.0);

  const auto g = random_field(kGrid, Rank::scalar, 10.0, 1.0, 10);
  CHECK(relative_difference(pointwise_product(f, g), pointwise_product(g, f)) <= 1e-14);
  const auto v = random_field(kGrid, Rank::vector3, 10.0, 1.0, 12);
  CHECK_THROWS_AS(pointwise_product(v, v), std::invalid_argument);
  CHECK_THROWS_AS(pointwise_product(f, random_field(Grid3{16}, Rank::scalar, 4.0, 1.0, 1)), std::invalid_argument);
}

TEST_CASE("products of band-limited fields are alias free") {
  // with kcut <= kmax/2 every product mode stays in the band, so quadrature is exact
  const auto f = random_field(kGrid, Rank::scalar, 5.0, 1.0, 21);
  const auto g = random_field(kGrid, Rank::scalar, 5.0, 1.0, 22);
  const auto fg = pointwise_product(f, g);
  // coefficient (1,2,0) by direct convolution
  cplx direct = 0;
  const int K = kGrid.kmax();
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int d = -K; d <= K; ++d) direct += f.coeff(0, a, b, d) * g.coeff(0, 1 - a, 2 - b, -d);
  CHECK(std::abs(fg.coeff(0, 1, 2, 0) - direct) < 1e-13);
}

TEST_CASE("Bernstein scaling of single shells") {
  for (int k = 0; k <= 3; ++k) {
    const int m = 1 << k;
    auto f = to_spectral(sample_scalar(kGrid, [m](double x, double y, double) {
      return std::sin(m * x) + 0.5 * std::cos(m * y);
    }));
    const double ratio = l2_norm(grad(f)) / l2_norm(f);
    CHECK(ratio == doctest::Approx(double(m)).epsilon(1e-12));
  }
}

TEST_CASE("HMHD1 snapshot round trip") {
  const auto v = random_field(kGrid, Rank::vector3, 10.0, 1.0, 13);
  std::stringstream ss;
  write_snapshot(ss, v);
  const std::string bytes = ss.str();
  CHECK(bytes.substr(0, 5) == "HMHD1");
  CHECK(bytes.size() == 5 + 4 + 4 + 8 + std::size_t(3) * 32 * 32 * 32 * 16);
  const auto back = read_snapshot(ss);
  CHECK(back.grid() == kGrid);
  CHECK(relative_difference(back, v) == 0.0);

  std::stringstream bad("HMHD2xxxxxxxx");
  CHECK_THROWS_AS(read_snapshot(bad), std::runtime_error);
  std::stringstream truncated(bytes.substr(0, 200));
  CHECK_THROWS_AS(read_snapshot(truncated), std::runtime_error);
}
