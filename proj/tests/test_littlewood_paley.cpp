#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hallmhd/littlewood_paley.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/random_fields.hpp"

using namespace hallmhd;

namespace {

const Grid3 kGrid{32};
constexpr double kPi = std::numbers::pi;

const DyadicPartition& part32() {
  static const DyadicPartition p = build_partition(kGrid);
  return p;
}

SpectralField sin_mode(int m) {
  return to_spectral(sample_scalar(kGrid, [m](double x, double, double) { return std::sin(m * x); }));
}

FieldSeries heat_series(const SpectralField& f0, double T, int steps) {
  FieldSeries s;
  for (int m = 0; m <= steps; ++m) {
    s.times.push_back(T * m / steps);
    s.fields.push_back(apply_multiplier(Multiplier::heat(s.times.back()), f0));
  }
  return s;
}

}  // namespace

TEST_CASE("cutoff profiles") {
  CHECK(smooth_step(-1.0) == 1.0);
  CHECK(smooth_step(0.0) == 1.0);
  CHECK(smooth_step(1.0) == 0.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(smooth_step(0.3) + smooth_step(0.7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(block_profile(0.5) == 0.0);
  CHECK(block_profile(0.75) == 0.0);
  CHECK(block_profile(2.0) == 0.0);
  CHECK(block_profile(8.0 / 3.0) == 0.0);
  CHECK(low_profile(4.0 / 3.0) == 0.0);
  for (double r = 0.0; r < 3.0; r += 0.01) {
    CHECK(block_profile(r) >= 0.0);
    CHECK(block_profile(r) <= 1.0);
  }
  double sum = 0.0;
  for (int q = -6; q <= 6; ++q) sum += block_profile(std::ldexp(1.0, -q));
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  for (double r : {0.1, 0.37, 1.0, 1.7, 5.3, 11.0}) {
    double h = 0.0;
    for (int q = -10; q <= 10; ++q) h += block_profile(std::ldexp(r, -q));
    CHECK(std::abs(h - 1.0) <= 1e-12);
  }
}

TEST_CASE("partition on the grid") {
  const auto& p = part32();
  CHECK(p.j_min == 0);
  CHECK(p.j_max == 4);
  CHECK(p.homogeneous_residual() <= 1e-12);
  CHECK(p.inhomogeneous_residual() <= 1e-12);
  CHECK_THROWS_AS(p.phi(p.j_max + 1), std::out_of_range);
  CHECK_THROWS_AS(build_partition(Grid3{4}), std::invalid_argument);
  const DyadicPartition half = build_partition(Grid3{32, kPi});
  CHECK(half.j_min == 1);
  CHECK(half.homogeneous_residual() <= 1e-12);
}

TEST_CASE("dyadic blocks") {
  const auto& p = part32();
  const SpectralField s = sin_mode(1);
  for (int j = p.j_min; j <= p.j_max; ++j) {
    const SpectralField b = dyadic_block(p, s, j);
    if (j > 1) CHECK(max_coeff(b) <= 1e-15);
  }
  CHECK(relative_difference(dyadic_block(p, s, 0), s) <= 1e-15);
  CHECK(max_coeff(dyadic_block(p, SpectralField(kGrid, Rank::scalar), 2)) == 0.0);
  CHECK_THROWS_AS(dyadic_block(p, s, 9), std::out_of_range);

  SpectralField f = random_field(kGrid, Rank::vector3, 10.0, 1.0, 3);
  f.set_mode(1, 0, 0, 0, 0.4);
  SpectralField sum(kGrid, Rank::vector3);
  for (int j = p.j_min; j <= p.j_max; ++j) sum += dyadic_block(p, f, j);
  SpectralField no_mean = f;
  no_mean.set_mode(1, 0, 0, 0, 0.0);
  CHECK(relative_difference(sum, no_mean) <= 1e-12);

  for (int j = p.j_min; j <= p.j_max; ++j)
    for (int k = p.j_min; k <= p.j_max; ++k)
      if (std::abs(j - k) >= 2) CHECK(max_coeff(dyadic_block(p, dyadic_block(p, f, k), j)) == 0.0);

  SpectralField s3(kGrid, Rank::vector3);
  for (int k = p.j_min; k < 3; ++k) s3 += dyadic_block(p, f, k);
  CHECK(relative_difference(low_pass(p, f, 3), s3) <= 1e-15);
  CHECK(max_coeff(low_pass(p, f, p.j_min)) == 0.0);
  CHECK(relative_difference(low_pass(p, f, 100), no_mean) <= 1e-12);
}

TEST_CASE("Bony decomposition") {
  const auto& p = part32();
  SpectralField c(kGrid, Rank::scalar);
  c.set_mode(0, 0, 0, 0, 1.5);
  const auto v = random_field(kGrid, Rank::scalar, 10.0, 1.0, 4);
  const BonyParts b = bony_decompose(p, c, v);
  CHECK(max_coeff(b.paraproduct_vu) == 0.0);
  CHECK(max_coeff(b.remainder) == 0.0);
  CHECK(relative_difference(b.paraproduct_uv, 1.5 * v) <= 1e-15);

  const SpectralField z(kGrid, Rank::scalar);
  const BonyParts bz = bony_decompose(p, z, z);
  CHECK(max_coeff(bz.paraproduct_uv) + max_coeff(bz.paraproduct_vu) + max_coeff(bz.remainder) == 0.0);

  for (std::uint64_t seed = 10; seed < 13; ++seed) {
    SpectralField u = random_field(kGrid, Rank::scalar, 10.0, 1.0, seed);
    SpectralField w = random_field(kGrid, Rank::scalar, 10.0, 1.0, seed + 100);
    u.set_mode(0, 0, 0, 0, 0.2);
    w.set_mode(0, 0, 0, 0, -0.3);
    const BonyParts r = bony_decompose(p, u, w);
    const SpectralField uw = pointwise_product(u, w);
    CHECK(l2_norm(uw - (r.paraproduct_uv + r.paraproduct_vu + r.remainder)) <= 1e-10 * l2_norm(uw));
  }

  const auto a = random_field(kGrid, Rank::vector3, 6.0, 1.0, 20);
  const auto d = random_field(kGrid, Rank::vector3, 6.0, 1.0, 21);
  const BonyParts vb = bony_decompose(p, a, d);
  const SpectralField sum = vb.paraproduct_uv + vb.paraproduct_vu + vb.remainder;
  for (int i = 0; i < 3; ++i) {
    const SpectralField want = pointwise_product(a.scalar_component(i), d.scalar_component(i));
    CHECK(relative_difference(sum.scalar_component(i), want) <= 1e-10);
  }
}

TEST_CASE("lebesgue norms of sin x1") {
  const SpectralField s = sin_mode(1);
  const double vol = std::pow(2 * kPi, 3);
  CHECK(lp_norm(s, 2) == doctest::Approx(std::sqrt(vol / 2)).epsilon(1e-14));
  CHECK(lp_norm(s, 4) == doctest::Approx(std::pow(vol * 3.0 / 8.0, 0.25)).epsilon(1e-13));
  CHECK(lp_norm(s, kInf) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lp_norm(s, 1) == doctest::Approx(vol * 2 / kPi).epsilon(5e-3));
  // f^ = L^3 c_k at two lattice points of unit cell
  const double peak = vol / 2;
  CHECK(fourier_lp_norm(s, kInf) == doctest::Approx(peak).epsilon(1e-14));
  CHECK(fourier_lp_norm(s, 1) == doctest::Approx(2 * peak).epsilon(1e-14));
  CHECK(fourier_lp_norm(s, 2) == doctest::Approx(std::pow(2 * kPi, 1.5) * lp_norm(s, 2)).epsilon(1e-14));
  CHECK(lp_hat_norm(s, 4) == doctest::Approx(std::pow(2 * std::pow(peak, 4.0 / 3.0), 0.75)).epsilon(1e-14));
  CHECK(conjugate_exponent(1) == kInf);
  CHECK(conjugate_exponent(kInf) == 1.0);
  CHECK(conjugate_exponent(4) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("besov norms") {
  const auto& p = part32();
  for (double pe : {2.0, 4.0, kInf}) {
    const SpectralField s = sin_mode(1);
    const double b = compute_norm({NormFamily::besov, 0.3, pe, 2.0, 1}, p, s).value;
    const double ratio = b / lp_norm(s, pe);
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 2.0);
    for (int k = 1; k <= 3; ++k) {
      const double bk = compute_norm({NormFamily::besov, 0.3, pe, 2.0, 1}, p, sin_mode(1 << k)).value;
      const double rel = bk / (std::exp2(0.3 * k) * b);
      CHECK(rel >= 0.9);
      CHECK(rel <= 1.1);
    }
  }
  const auto f = random_field(kGrid, Rank::vector3, 10.0, 1.0, 6);
  const NormReport r = compute_norm({NormFamily::besov, 0.5, 4.0, 2.0, 1}, p, f);
  CHECK(r.per_block.size() == std::size_t(p.block_count()));
  double sq = 0.0;
  for (auto [j, v] : r.per_block) sq += v * v;
  CHECK(r.value == doctest::Approx(std::sqrt(sq)).epsilon(1e-14));

  // l^r monotonicity and homogeneity
  double prev = kInf;
  for (double rr : {1.0, 2.0, 4.0, kInf}) {
    const double v = compute_norm({NormFamily::besov, 0.2, 2.0, rr, 1}, p, f).value;
    CHECK(v <= prev * (1 + 1e-14));
    prev = v;
  }
  for (NormFamily fam : {NormFamily::besov, NormFamily::fourier_herz, NormFamily::lp_hat}) {
    const NormSpec spec{fam, -0.4, 3.0, 2.0, 1};
    CHECK(compute_norm(spec, p, -2.5 * f).value == doctest::Approx(2.5 * compute_norm(spec, p, f).value).epsilon(1e-13));
  }
  CHECK_THROWS_AS(compute_norm({NormFamily::kato, 1, 2, 2, 1}, p, f), std::invalid_argument);
  CHECK_THROWS_AS(compute_norm({NormFamily::besov, 0, 0.5, 2, 1}, p, f), std::invalid_argument);
}

TEST_CASE("time norms") {
  const auto& p = part32();
  const SpectralField s = sin_mode(1);
  const double T = 1.0;
  const FieldSeries series = heat_series(s, T, 64);
  const double ls = lp_norm(s, 4);

  const double cl_inf = compute_norm({NormFamily::chemin_lerner, 0.0, 4.0, kInf, kInf}, p, series).value;
  CHECK(cl_inf == doctest::Approx(ls).epsilon(1e-13));
  const double cl_1 = compute_norm({NormFamily::chemin_lerner, 0.0, 4.0, kInf, 1.0}, p, series).value;
  CHECK(cl_1 == doctest::Approx((1 - std::exp(-T)) * ls).epsilon(1e-4));

  // sup over stored t > 0 of t^{1/2} e^{-t}: attained near t = 1/2
  const double kato = compute_norm({NormFamily::kato, 1.0, 4.0, 2, 1}, p, series).value;
  CHECK(kato == doctest::Approx(std::sqrt(0.5) * std::exp(-0.5) * ls).epsilon(1e-12));
  const double kh = compute_norm({NormFamily::kato_herz, 1.0, 6.0, 2, 1}, p, series).value;
  CHECK(kh == doctest::Approx(std::sqrt(0.5) * std::exp(-0.5) * lp_hat_norm(s, 6.0)).epsilon(1e-12));

  FieldSeries zero;
  zero.times = {0.0, 0.5, 1.0};
  zero.fields.assign(3, SpectralField(kGrid, Rank::vector3));
  CHECK(compute_norm({NormFamily::kato, 0.5, 2.0, 2, 1}, p, zero).value == 0.0);

  const Trajectory tz = Trajectory::uniform(1.0, 4, StateTriple::zero(kGrid));
  CHECK(compute_norm({NormFamily::kato, 0.5, 2.0, 2, 1}, p, tz).value == 0.0);

  CHECK_THROWS_AS(compute_norm({NormFamily::besov, 0, 2, 2, 1}, p, series), std::invalid_argument);
  FieldSeries bad = series;
  bad.times[3] = bad.times[2];
  CHECK_THROWS_AS(compute_norm({NormFamily::kato, 1, 2, 2, 1}, p, bad), std::invalid_argument);

  FieldSeries scaled = series;
  for (auto& f : scaled.fields) f *= 3.0;
  for (NormFamily fam : {NormFamily::chemin_lerner, NormFamily::kato, NormFamily::kato_herz}) {
    const NormSpec spec{fam, 0.5, 4.0, 2.0, 2.0};
    CHECK(compute_norm(spec, p, scaled).value == doctest::Approx(3.0 * compute_norm(spec, p, series).value).epsilon(1e-13));
  }
  CHECK(intersection_norm(p, series, 0.0, 2.0, 1.0) >= cl_inf * (1 - 1e-14));
}

TEST_CASE("Bernstein and multiplier checks on single shells") {
  const auto& p = part32();
  for (int k = 0; k <= 3; ++k) {
    const SpectralField f = sin_mode(1 << k);
    for (double pe : {2.0, 4.0, kInf}) {
      const double ratio = lp_norm(grad(f).scalar_component(0), pe) / lp_norm(f, pe);
      CHECK(ratio == doctest::Approx(std::exp2(k)).epsilon(1e-12));
    }
  }
  const SpectralField v = to_spectral(sample_vector(kGrid, [](double x, double y, double) {
    return std::array{std::sin(y), 0.0, std::cos(x)};
  }));
  const auto [c1, c2] = multiplier_constants(p, v, 2.0);
  // |xi| = 1 sits in block 0 only: symbol ratios are exactly 1
  CHECK(c1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c2 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("heat characterization of a single mode") {
  const auto& p = part32();
  const auto times = heat_time_grid(kGrid, 16);
  // sup_t t^{1/4} e^{-t} = (4e)^{-1/4}, Besov norm picks phi(1) = 1 at block 0
  const double exact = std::pow(4.0 * std::numbers::e, -0.25);
  for (double pe : {2.0, 4.0}) {
    const double r = heat_characterization_ratio(p, sin_mode(1), -0.5, pe, times);
    CHECK(r == doctest::Approx(exact).epsilon(2e-3));
    CHECK(r >= 0.1);
    CHECK(r <= 10.0);
  }
}

TEST_CASE("inequality suite on a small grid") {
  const Grid3 g{16};
  const DyadicPartition p = build_partition(g);
  const InequalityCorpus corpus = default_corpus(g, 3);
  const auto rows = inequality_suite(p, corpus);
  CHECK(rows.size() == 22);
  for (const auto& r : rows) {
    INFO(r.name << " " << r.parameters << " " << r.constant << " " << r.refined);
    CHECK(r.pass);
    if (r.name.rfind("multiplier", 0) == 0) CHECK(r.constant <= 2.0);
    if (r.name == "minkowski") CHECK(r.constant <= 1.0 + 1e-12);
  }
  std::ostringstream os;
  write_inequality_csv(os, rows);
  CHECK(os.str().rfind("name,parameters,constant,pass\nbernstein,p1=2;p2=2;refined=", 0) == 0);
  CHECK_THROWS_AS(inequality_suite(p, InequalityCorpus{}), std::invalid_argument);
}
