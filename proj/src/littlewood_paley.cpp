#include "hallmhd/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "hallmhd/csv.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/parallel.hpp"
#include "hallmhd/random_fields.hpp"

namespace hallmhd {
namespace {

constexpr double kLow = 0.75;
constexpr double kHigh = 1.0;

double transition_piece(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double lr_sum(const std::vector<double>& a, double r) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (double v : a) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : a) s += std::pow(v, r);
  return std::pow(s, 1.0 / r);
}

// Trapezoid weights on arbitrary increasing times.
std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t m = 0; m + 1 < t.size(); ++m) {
    const double h = t[m + 1] - t[m];
    w[m] += 0.5 * h;
    w[m + 1] += 0.5 * h;
  }
  return w;
}

double time_norm(const std::vector<double>& g, const std::vector<double>& w, double rho) {
  if (std::isinf(rho)) return *std::max_element(g.begin(), g.end());
  double s = 0.0;
  for (std::size_t m = 0; m < g.size(); ++m) s += w[m] * std::pow(g[m], rho);
  return std::pow(s, 1.0 / rho);
}

SpectralField weighted(const SpectralField& f, std::span<const double> w) {
  SpectralField out = f;
  for (int c = 0; c < out.components(); ++c) {
    auto oc = out.component(c);
    for (std::size_t m = 0; m < oc.size(); ++m) oc[m] *= w[m];
  }
  return out;
}

bool all_zero(const SpectralField& f) { return max_coeff(f) == 0.0; }

// Blocks holding only transform round-off would dominate any ratio.
bool negligible_block(const SpectralField& block, const SpectralField& whole) {
  return max_coeff(block) <= 1e-12 * max_coeff(whole);
}

std::vector<double> block_norms(const DyadicPartition& part, const SpectralField& f, double p, bool fourier) {
  std::vector<double> out(static_cast<std::size_t>(part.block_count()), 0.0);
  for (int j = part.j_min; j <= part.j_max; ++j) {
    const SpectralField b = weighted(f, part.phi(j));
    if (all_zero(b)) continue;
    out[static_cast<std::size_t>(j - part.j_min)] = fourier ? fourier_lp_norm(b, conjugate_exponent(p)) : lp_norm(b, p);
  }
  return out;
}

// norms[m][j - j_min] for every stored time.
std::vector<std::vector<double>> block_table(const DyadicPartition& part, const FieldSeries& series, double p,
                                             bool fourier) {
  std::vector<std::vector<double>> table(series.fields.size());
  parallel_for(series.fields.size(), [&](std::size_t m) { table[m] = block_norms(part, series.fields[m], p, fourier); });
  return table;
}

void validate_series(const FieldSeries& s) {
  if (s.fields.empty() || s.fields.size() != s.times.size())
    throw std::invalid_argument("field series: times and fields must be nonempty and of equal length");
  for (std::size_t m = 1; m < s.times.size(); ++m)
    if (!(s.times[m] > s.times[m - 1])) throw std::invalid_argument("field series: times must increase");
}

NormReport besov_from_blocks(const DyadicPartition& part, const std::vector<double>& blocks, double s, double r) {
  NormReport rep;
  std::vector<double> a(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int j = part.j_min + static_cast<int>(i);
    a[i] = std::exp2(j * s) * blocks[i];
    rep.per_block.emplace_back(j, a[i]);
  }
  rep.value = lr_sum(a, r);
  return rep;
}

NormReport chemin_lerner_from_table(const DyadicPartition& part, const std::vector<std::vector<double>>& table,
                                    const std::vector<double>& w, double s, double r, double rho) {
  std::vector<double> blocks(static_cast<std::size_t>(part.block_count()));
  std::vector<double> g(table.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t m = 0; m < table.size(); ++m) g[m] = table[m][i];
    blocks[i] = time_norm(g, w, rho);
  }
  return besov_from_blocks(part, blocks, s, r);
}

// L^rho_T(B^s_{p,r}): Besov norm per time, then the time norm.
double outer_time_norm(const DyadicPartition& part, const std::vector<std::vector<double>>& table,
                       const std::vector<double>& w, double s, double r, double rho) {
  std::vector<double> g(table.size());
  for (std::size_t m = 0; m < table.size(); ++m) g[m] = besov_from_blocks(part, table[m], s, r).value;
  return time_norm(g, w, rho);
}

SpectralField axis_derivative(const SpectralField& f, int axis) {
  const ModeTable& t = modes(f.grid());
  const auto& xi = axis == 0 ? t.xi1 : (axis == 1 ? t.xi2 : t.xi3);
  SpectralField out = f;
  for (int c = 0; c < out.components(); ++c) {
    auto oc = out.component(c);
    for (std::size_t m = 0; m < oc.size(); ++m) oc[m] *= cplx(0.0, xi[m]);
  }
  return out;
}

std::string exponent_text(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = transition_piece(1.0 - x);
  return a / (a + transition_piece(x));
}

double low_profile(double r) { return smooth_step((r - kLow) / (kHigh - kLow)); }

double block_profile(double r) { return low_profile(0.5 * r) - low_profile(r); }

std::span<const double> DyadicPartition::phi(int j) const {
  if (!contains(j)) throw std::out_of_range("dyadic block " + std::to_string(j) + " outside the partition");
  const std::size_t n = grid.band_size();
  return std::span<const double>(weights).subspan(static_cast<std::size_t>(j - j_min) * n, n);
}

double DyadicPartition::homogeneous_residual() const {
  const ModeTable& t = modes(grid);
  double worst = 0.0;
  for (std::size_t m = 0; m < grid.band_size(); ++m) {
    if (m == t.zero_index) continue;
    double s = 0.0;
    for (int j = j_min; j <= j_max; ++j) s += phi(j)[m];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double DyadicPartition::inhomogeneous_residual() const {
  const ModeTable& t = modes(grid);
  double worst = 0.0;
  for (std::size_t m = 0; m < grid.band_size(); ++m) {
    const double r = std::sqrt(t.xi_sq[m]);
    double s = psi[m];
    for (int q = 0; q <= std::max(j_max, 0); ++q) s += block_profile(std::ldexp(r, -q));
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

DyadicPartition build_partition(const Grid3& grid) {
  grid.validate();
  DyadicPartition part;
  part.grid = grid;
  const ModeTable& t = modes(grid);
  const std::size_t n = grid.band_size();
  const double rmin = grid.dxi();
  const double rmax = std::sqrt(grid.max_wavenumber_sq());
  const int lo = static_cast<int>(std::floor(std::log2(rmin))) - 2;
  const int hi = static_cast<int>(std::ceil(std::log2(rmax / kLow))) + 1;

  std::vector<double> r(n);
  for (std::size_t m = 0; m < n; ++m) r[m] = std::sqrt(t.xi_sq[m]);
  part.psi.resize(n);
  for (std::size_t m = 0; m < n; ++m) part.psi[m] = low_profile(r[m]);

  std::vector<std::vector<double>> blocks;
  std::vector<int> index;
  for (int j = lo; j <= hi; ++j) {
    std::vector<double> w(n);
    bool any = false;
    for (std::size_t m = 0; m < n; ++m) {
      w[m] = m == t.zero_index ? 0.0 : block_profile(std::ldexp(r[m], -j));
      any = any || w[m] != 0.0;
    }
    if (!any) {
      if (!blocks.empty()) break;
      continue;
    }
    blocks.push_back(std::move(w));
    index.push_back(j);
  }
  if (blocks.size() < 3)
    throw std::invalid_argument("build_partition: grid hosts only " + std::to_string(blocks.size()) +
                                " dyadic blocks, need at least 3");
  part.j_min = index.front();
  part.j_max = index.back();
  part.weights.reserve(blocks.size() * n);
  for (const auto& w : blocks) part.weights.insert(part.weights.end(), w.begin(), w.end());
  return part;
}

SpectralField dyadic_block(const DyadicPartition& part, const SpectralField& f, int j) {
  require_same_grid(part.grid, f.grid());
  return weighted(f, part.phi(j));
}

SpectralField low_pass(const DyadicPartition& part, const SpectralField& f, int j) {
  require_same_grid(part.grid, f.grid());
  const std::size_t n = part.grid.band_size();
  std::vector<double> w(n, 0.0);
  for (int k = part.j_min; k < std::min(j, part.j_max + 1); ++k) {
    const auto pk = part.phi(k);
    for (std::size_t m = 0; m < n; ++m) w[m] += pk[m];
  }
  return weighted(f, w);
}

BonyParts bony_decompose(const DyadicPartition& part, const SpectralField& u, const SpectralField& v) {
  require_same_grid(part.grid, u.grid());
  require_same_grid(u.grid(), v.grid());
  if (u.rank() != v.rank()) throw std::invalid_argument("bony_decompose: ranks differ");
  BonyParts out{SpectralField(u.grid(), u.rank()), SpectralField(u.grid(), u.rank()),
                SpectralField(u.grid(), u.rank())};
  const std::size_t zero = modes(u.grid()).zero_index;
  for (int c = 0; c < u.components(); ++c) {
    const SpectralField uc = u.scalar_component(c), vc = v.scalar_component(c);
    const double u0 = uc.component(0)[zero].real(), v0 = vc.component(0)[zero].real();
    std::vector<SpectralField> du, dv;
    for (int j = part.j_min; j <= part.j_max; ++j) {
      du.push_back(dyadic_block(part, uc, j));
      dv.push_back(dyadic_block(part, vc, j));
    }
    SpectralField tuv = u0 * vc;
    SpectralField uosc = uc;
    uosc.component(0)[zero] = 0.0;
    SpectralField tvu = v0 * uosc;
    SpectralField rem(u.grid(), Rank::scalar);
    SpectralField su(u.grid(), Rank::scalar), sv(u.grid(), Rank::scalar);  // S_{j-1}
    const int nb = part.block_count();
    for (int i = 0; i < nb; ++i) {
      if (i >= 2) {
        su += du[static_cast<std::size_t>(i - 2)];
        sv += dv[static_cast<std::size_t>(i - 2)];
      }
      const auto& dvi = dv[static_cast<std::size_t>(i)];
      const auto& dui = du[static_cast<std::size_t>(i)];
      if (!all_zero(su) && !all_zero(dvi)) tuv += pointwise_product(su, dvi);
      if (!all_zero(sv) && !all_zero(dui)) tvu += pointwise_product(sv, dui);
      SpectralField tilde(u.grid(), Rank::scalar);
      for (int k = std::max(0, i - 1); k <= std::min(nb - 1, i + 1); ++k) tilde += du[static_cast<std::size_t>(k)];
      if (!all_zero(tilde) && !all_zero(dvi)) rem += pointwise_product(tilde, dvi);
    }
    auto put = [c](SpectralField& dst, const SpectralField& src) {
      std::copy(src.component(0).begin(), src.component(0).end(), dst.component(c).begin());
    };
    put(out.paraproduct_uv, tuv);
    put(out.paraproduct_vu, tvu);
    put(out.remainder, rem);
  }
  return out;
}

NormFamily parse_norm_family(const std::string& name) {
  if (name == "besov") return NormFamily::besov;
  if (name == "chemin_lerner") return NormFamily::chemin_lerner;
  if (name == "kato") return NormFamily::kato;
  if (name == "kato_herz") return NormFamily::kato_herz;
  if (name == "fourier_herz") return NormFamily::fourier_herz;
  if (name == "lp_hat") return NormFamily::lp_hat;
  throw std::invalid_argument("unknown norm family '" + name + "'");
}

std::string to_string(NormFamily f) {
  switch (f) {
    case NormFamily::besov: return "besov";
    case NormFamily::chemin_lerner: return "chemin_lerner";
    case NormFamily::kato: return "kato";
    case NormFamily::kato_herz: return "kato_herz";
    case NormFamily::fourier_herz: return "fourier_herz";
    case NormFamily::lp_hat: return "lp_hat";
  }
  return "?";
}

bool is_time_family(NormFamily f) {
  return f == NormFamily::chemin_lerner || f == NormFamily::kato || f == NormFamily::kato_herz;
}

void NormSpec::validate() const {
  auto ok = [](double e) { return e >= 1.0; };  // inf passes
  if (!ok(p) || !ok(r) || !ok(rho)) throw std::invalid_argument("norm exponents p, r, rho must lie in [1, inf]");
  if (!std::isfinite(s)) throw std::invalid_argument("norm regularity must be finite");
}

std::string NormSpec::describe() const {
  std::string d = "family=" + to_string(family) + ";s=" + exponent_text(s) + ";p=" + exponent_text(p);
  if (family == NormFamily::besov || family == NormFamily::fourier_herz || family == NormFamily::chemin_lerner)
    d += ";r=" + exponent_text(r);
  if (family == NormFamily::chemin_lerner) d += ";rho=" + exponent_text(rho);
  return d;
}

FieldSeries row_series(const Trajectory& traj, int row) {
  FieldSeries s;
  s.times = traj.times;
  for (const auto& st : traj.states) s.fields.push_back(st[row]);
  return s;
}

double conjugate_exponent(double p) {
  if (p < 1.0) throw std::invalid_argument("exponent must be >= 1");
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double lp_norm(const SpectralField& f, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (p == 2.0) return l2_norm(f);
  if (all_zero(f)) return 0.0;
  const RealField r = to_physical(f);
  const std::size_t np = f.grid().point_count();
  const int nc = f.components();
  double acc = 0.0;
  for (std::size_t x = 0; x < np; ++x) {
    double mag2 = 0.0;
    for (int c = 0; c < nc; ++c) mag2 += r.data[c * np + x] * r.data[c * np + x];
    if (std::isinf(p))
      acc = std::max(acc, mag2);
    else
      acc += std::pow(mag2, 0.5 * p);
  }
  if (std::isinf(p)) return std::sqrt(acc);
  return std::pow(acc * f.grid().cell_volume(), 1.0 / p);
}

double fourier_lp_norm(const SpectralField& f, double q) {
  if (q < 1.0) throw std::invalid_argument("fourier_lp_norm: exponent must be >= 1");
  const double scale = f.grid().volume();
  const std::size_t n = f.grid().band_size();
  double acc = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    double mag2 = 0.0;
    for (int c = 0; c < f.components(); ++c) mag2 += std::norm(f.component(c)[m]);
    const double mag = scale * std::sqrt(mag2);
    if (std::isinf(q))
      acc = std::max(acc, mag);
    else
      acc += std::pow(mag, q);
  }
  if (std::isinf(q)) return acc;
  return std::pow(acc * f.grid().fourier_cell(), 1.0 / q);
}

NormReport compute_norm(const NormSpec& spec, const DyadicPartition& part, const SpectralField& f) {
  spec.validate();
  require_same_grid(part.grid, f.grid());
  switch (spec.family) {
    case NormFamily::besov:
      return besov_from_blocks(part, block_norms(part, f, spec.p, false), spec.s, spec.r);
    case NormFamily::fourier_herz:
      return besov_from_blocks(part, block_norms(part, f, spec.p, true), spec.s, spec.r);
    case NormFamily::lp_hat: {
      NormReport rep;
      rep.value = lp_hat_norm(f, spec.p);
      return rep;
    }
    default:
      throw std::invalid_argument("norm family " + to_string(spec.family) + " needs a trajectory");
  }
}

NormReport compute_norm(const NormSpec& spec, const DyadicPartition& part, const FieldSeries& series) {
  spec.validate();
  validate_series(series);
  for (const auto& f : series.fields) require_same_grid(part.grid, f.grid());
  switch (spec.family) {
    case NormFamily::chemin_lerner: {
      const auto table = block_table(part, series, spec.p, false);
      return chemin_lerner_from_table(part, table, trapezoid_weights(series.times), spec.s, spec.r, spec.rho);
    }
    case NormFamily::kato:
    case NormFamily::kato_herz: {
      const bool hat = spec.family == NormFamily::kato_herz;
      std::vector<double> vals(series.fields.size(), 0.0);
      parallel_for(series.fields.size(), [&](std::size_t m) {
        const double t = series.times[m];
        if (t <= 0.0) return;
        const double norm = hat ? lp_hat_norm(series.fields[m], spec.p) : lp_norm(series.fields[m], spec.p);
        vals[m] = std::pow(t, 0.5 * spec.s) * norm;
      });
      NormReport rep;
      rep.value = *std::max_element(vals.begin(), vals.end());
      return rep;
    }
    default:
      throw std::invalid_argument("norm family " + to_string(spec.family) + " applies to a single field");
  }
}

NormReport compute_norm(const NormSpec& spec, const DyadicPartition& part, const Trajectory& traj) {
  traj.validate();
  NormReport total;
  for (int row = 0; row < 3; ++row) {
    const NormReport r = compute_norm(spec, part, row_series(traj, row));
    total.value += r.value;
    if (total.per_block.empty())
      total.per_block = r.per_block;
    else
      for (std::size_t i = 0; i < r.per_block.size(); ++i) total.per_block[i].second += r.per_block[i].second;
  }
  return total;
}

double intersection_norm(const DyadicPartition& part, const FieldSeries& series, double s, double p, double r) {
  validate_series(series);
  const auto table = block_table(part, series, p, false);
  const auto w = trapezoid_weights(series.times);
  double best = 0.0;
  for (double rho : kScriptLExponents) {
    const double reg = s + (std::isinf(rho) ? 0.0 : 2.0 / rho);
    best = std::max(best, chemin_lerner_from_table(part, table, w, reg, r, rho).value);
  }
  return best;
}

std::vector<double> heat_time_grid(const Grid3& grid, int per_decade) {
  const double t0 = 0.01 / grid.max_wavenumber_sq();
  const double t1 = 100.0 / (grid.dxi() * grid.dxi());
  const int count = static_cast<int>(std::ceil(std::log10(t1 / t0) * per_decade)) + 1;
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = t0 * std::pow(t1 / t0, double(i) / (count - 1));
  return t;
}

double heat_characterization_ratio(const DyadicPartition& part, const SpectralField& f, double s, double p,
                                   const std::vector<double>& times) {
  const NormSpec spec{NormFamily::besov, s, p, kInf, 1.0};
  const double besov = compute_norm(spec, part, f).value;
  if (besov == 0.0) throw std::invalid_argument("heat_characterization_ratio: zero field");
  std::vector<double> vals(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    vals[i] = std::pow(times[i], -0.5 * s) * lp_norm(apply_multiplier(Multiplier::heat(times[i]), f), p);
  });
  return *std::max_element(vals.begin(), vals.end()) / besov;
}

InequalityCorpus default_corpus(const Grid3& grid, std::uint64_t seed) {
  grid.validate();
  InequalityCorpus c;
  const int K = grid.kmax();
  const double d = grid.dxi();
  for (int m = 1; m <= K; m *= 2) {
    c.fields.push_back(to_spectral(sample_scalar(grid, [m, d](double x, double y, double) {
      return std::sin(m * d * x) + 0.5 * std::cos(m * d * y);
    })));
  }
  c.fields.push_back(random_field(grid, Rank::scalar, K, 1.0, seed));
  c.fields.push_back(random_field(grid, Rank::scalar, K / 2.0, 1.0, seed + 1));
  c.fields.push_back(random_solenoidal(grid, K, 1.0, seed + 2));
  c.fields.push_back(random_solenoidal(grid, K / 2.0, 1.0, seed + 3));

  const int steps = 16;
  const double T = 0.5;
  for (int k = 0; k < 2; ++k) {
    const SpectralField f0 = random_field(grid, Rank::scalar, K / 2.0, 1.0, seed + 10 + k);
    FieldSeries s;
    for (int m = 0; m <= steps; ++m) {
      const double t = T * m / steps;
      s.times.push_back(t);
      s.fields.push_back(apply_multiplier(Multiplier::heat(t), f0));
    }
    c.series.push_back(std::move(s));
  }
  return c;
}

std::pair<double, double> multiplier_constants(const DyadicPartition& part, const SpectralField& f, double p) {
  double c1 = 0.0, c2 = 0.0;
  for (int j = part.j_min; j <= part.j_max; ++j) {
    const SpectralField b = dyadic_block(part, f, j);
    if (negligible_block(b, f)) continue;
    const double base = lp_norm(b, p);
    const double x = std::exp2(j);
    const SpectralField first = f.rank() == Rank::vector3 ? curl(b) : grad(b);
    const double n1 = lp_norm(apply_multiplier(Multiplier::helmholtz_inverse(), first), p);
    const double n2 = lp_norm(apply_multiplier(Multiplier::neg_laplacian_helmholtz(), b), p);
    c1 = std::max(c1, n1 / (x / (1.0 + x * x) * base));
    c2 = std::max(c2, n2 / (x * x / (1.0 + x * x) * base));
  }
  return {c1, c2};
}

namespace {

struct Measured {
  std::string name, parameters;
  double constant;
  bool exact_bound;  // inequality holds with constant 1 exactly
};

std::vector<Measured> measure_all(const DyadicPartition& part, const InequalityCorpus& corpus) {
  std::vector<Measured> rows;

  // Bernstein, first derivatives, shell-j blocks
  const std::pair<double, double> bern[] = {{2, 2}, {4, 2}, {kInf, 2}, {4, 4}, {kInf, kInf}};
  for (auto [p1, p2] : bern) {
    double worst = 0.0;
    for (const auto& f : corpus.fields)
      for (int j = part.j_min; j <= part.j_max; ++j) {
        const SpectralField g = dyadic_block(part, f, j);
        if (negligible_block(g, f)) continue;
        const double inv1 = std::isinf(p1) ? 0.0 : 1.0 / p1, inv2 = std::isinf(p2) ? 0.0 : 1.0 / p2;
        const double scale = std::exp2(j * (1.0 + 3.0 * (inv2 - inv1))) * lp_norm(g, p2);
        for (int axis = 0; axis < 3; ++axis) worst = std::max(worst, lp_norm(axis_derivative(g, axis), p1) / scale);
      }
    rows.push_back({"bernstein", "p1=" + exponent_text(p1) + ";p2=" + exponent_text(p2), worst, false});
  }

  // Besov embeddings B^d_{p,r} -> B^{d-3(1/p-1/q)}_{q,m}
  struct Emb {
    double delta, p, r, q, m;
  };
  const Emb embs[] = {{0.0, 2, 1, 4, 2}, {0.5, 2, 2, kInf, kInf}, {-0.5, 4, 1, kInf, 2}};
  for (const auto& e : embs) {
    double worst = 0.0;
    const double shift = 3.0 * (1.0 / e.p - (std::isinf(e.q) ? 0.0 : 1.0 / e.q));
    for (const auto& f : corpus.fields) {
      const double lhs = compute_norm({NormFamily::besov, e.delta - shift, e.q, e.m, 1}, part, f).value;
      const double rhs = compute_norm({NormFamily::besov, e.delta, e.p, e.r, 1}, part, f).value;
      worst = std::max(worst, lhs / rhs);
    }
    rows.push_back({"embedding",
                    "delta=" + exponent_text(e.delta) + ";p=" + exponent_text(e.p) + ";r=" + exponent_text(e.r) +
                        ";q=" + exponent_text(e.q) + ";m=" + exponent_text(e.m),
                    worst, false});
  }

  // Minkowski between L^rho(B) and the Chemin-Lerner space
  const std::pair<double, double> mink[] = {{1, 2}, {1, kInf}, {2, 1}, {kInf, 1}};
  for (auto [rho, r] : mink) {
    double worst = 0.0;
    for (const auto& s : corpus.series) {
      const auto table = block_table(part, s, 2.0, false);
      const auto w = trapezoid_weights(s.times);
      const double tilde = chemin_lerner_from_table(part, table, w, 0.0, r, rho).value;
      const double plain = outer_time_norm(part, table, w, 0.0, r, rho);
      worst = std::max(worst, rho <= r ? tilde / plain : plain / tilde);
    }
    rows.push_back({"minkowski", "rho=" + exponent_text(rho) + ";r=" + exponent_text(r) + ";p=2;s=0", worst, true});
  }

  // multiplier bounds per block
  for (double p : {2.0, 4.0, kInf}) {
    double w1 = 0.0, w2 = 0.0;
    for (const auto& f : corpus.fields) {
      const auto [c1, c2] = multiplier_constants(part, f, p);
      w1 = std::max(w1, c1);
      w2 = std::max(w2, c2);
    }
    rows.push_back({"multiplier_curl_helmholtz", "p=" + exponent_text(p), w1, false});
    rows.push_back({"multiplier_laplacian_helmholtz", "p=" + exponent_text(p), w2, false});
  }

  // heat characterization at s = -1/2
  const auto times = heat_time_grid(part.grid, 6);
  for (double p : {2.0, 4.0}) {
    double lo = kInf, hi = 0.0;
    for (const auto& f : corpus.fields) {
      const double ratio = heat_characterization_ratio(part, f, -0.5, p, times);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    rows.push_back({"heat_characterization", "s=-0.5;p=" + exponent_text(p), std::max(hi, 1.0 / lo), false});
  }

  // product estimate on heat-flow pairs
  if (corpus.series.size() >= 2) {
    for (double p : {2.0, 4.0}) {
      double worst = 0.0;
      for (std::size_t a = 0; a + 1 < corpus.series.size(); a += 2) {
        const FieldSeries& u = corpus.series[a];
        const FieldSeries& v = corpus.series[a + 1];
        FieldSeries uv;
        uv.times = u.times;
        for (std::size_t m = 0; m < u.fields.size(); ++m) uv.fields.push_back(pointwise_product(u.fields[m], v.fields[m]));
        const double lhs = compute_norm({NormFamily::chemin_lerner, 3.0 / p, p, 1.0, 1.0}, part, uv).value;
        const double rhs = intersection_norm(part, u, 3.0 / p - 1.0, p, 1.0) *
                           intersection_norm(part, v, 3.0 / p - 1.0, p, 1.0);
        worst = std::max(worst, lhs / rhs);
      }
      rows.push_back({"product", "p=" + exponent_text(p) + ";r=1", worst, false});
    }
  }
  return rows;
}

InequalityCorpus refine(const InequalityCorpus& c, const Grid3& fine) {
  InequalityCorpus out;
  for (const auto& f : c.fields) out.fields.push_back(resample(f, fine));
  for (const auto& s : c.series) {
    FieldSeries r;
    r.times = s.times;
    for (const auto& f : s.fields) r.fields.push_back(resample(f, fine));
    out.series.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<InequalityRow> inequality_suite(const DyadicPartition& part, const InequalityCorpus& corpus) {
  if (corpus.fields.empty()) throw std::invalid_argument("inequality_suite: empty corpus");
  Grid3 fine = part.grid;
  fine.n *= 2;
  // keep the same retained modes so refinement only changes the quadrature
  fine.dealias_fraction = part.grid.dealias_fraction * 0.5;
  if (fine.kmax() != part.grid.kmax()) fine.dealias_fraction = double(part.grid.kmax()) / (fine.n / 2) + 1e-12;
  const DyadicPartition fine_part = build_partition(fine);

  const auto coarse = measure_all(part, corpus);
  const auto refined = measure_all(fine_part, refine(corpus, fine));
  std::vector<InequalityRow> rows;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    InequalityRow r;
    r.name = coarse[i].name;
    r.parameters = coarse[i].parameters;
    r.constant = coarse[i].constant;
    r.refined = refined[i].constant;
    const double scale = std::max(std::abs(r.constant), std::abs(r.refined));
    bool ok = std::isfinite(r.constant) && std::isfinite(r.refined) &&
              std::abs(r.constant - r.refined) <= kRefinementTolerance * scale;
    if (coarse[i].exact_bound) ok = ok && r.constant <= 1.0 + 1e-12 && r.refined <= 1.0 + 1e-12;
    r.pass = ok;
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_inequality_csv(std::ostream& os, const std::vector<InequalityRow>& rows) {
  os << "name,parameters,constant,pass\n";
  for (const auto& r : rows)
    write_csv_row(os, {r.name, r.parameters + ";refined=" + format_double(r.refined), format_double(r.constant),
                       pass_text(r.pass)});
}

}  // namespace hallmhd
