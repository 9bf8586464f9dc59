#include "levylab/stable_process.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "levylab/error.hpp"
#include "levylab/parallel.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/rng.hpp"

namespace levylab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCutoff = 40.0;  // truncate the inversion where t c u^beta >= 40
constexpr double kDirectHalfPeriods = 256.0;
constexpr std::size_t kChunk = 4096;

double scale_of(const StableParams& p, double t) { return std::pow(t * p.c, 1.0 / p.beta); }

// Above this standardized |s| the series representation is used.
double series_switch(double beta) {
  if (beta <= 0.8) return 1.0;
  if (beta < 1.0) return 4.0;
  if (beta == 1.0) return 2.0;
  return 20.0;
}

// Coefficients a_k = (-1)^{k+1} Gamma(k beta + 1) sin(k pi beta / 2) / (k! pi)
// of p(s) = sum a_k s^{-k beta - 1}; mag_k drops the sine.
struct SeriesCoefficients {
  std::vector<double> a;
  std::vector<double> mag;
};

SeriesCoefficients series_coefficients(double beta) {
  SeriesCoefficients sc;
  for (int k = 1; k <= 200; ++k) {
    const double m = std::exp(std::lgamma(k * beta + 1.0) - std::lgamma(k + 1.0)) / kPi;
    if (!std::isfinite(m)) break;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sc.a.push_back(sign * m * std::sin(k * kPi * beta / 2.0));
    sc.mag.push_back(m);
  }
  return sc;
}

// Sums the density series (integrated = false) or the upper-tail series.
double series_sum(const SeriesCoefficients& sc, double beta, double s, bool integrated) {
  const double ls = std::log(s);
  double sum = 0.0;
  double prev_mag = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sc.a.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    double w = integrated ? std::exp(-k * beta * ls) / (k * beta) : std::exp(-(k * beta + 1.0) * ls);
    const double mag = sc.mag[i] * w;
    if (beta > 1.0 && i > 1 && mag > prev_mag) break;  // asymptotic: stop at the smallest term
    sum += sc.a[i] * w;
    if (mag < 1e-17 * std::abs(sum) && i > 1) break;
    prev_mag = mag;
  }
  return sum;
}

// (1/pi) int_0^U e^{-a u^beta} cos(u x) du with a u^beta = kCutoff at U.
double fourier_density(double a, double beta, double x) {
  if (x == 0.0) return std::tgamma(1.0 + 1.0 / beta) * std::pow(a, -1.0 / beta) / kPi;
  const double ax = std::abs(x);
  const double U = std::pow(kCutoff / a, 1.0 / beta);
  auto f = [&](double u) { return std::exp(-a * std::pow(u, beta)) * std::cos(u * ax); };
  auto amplitude = [&](double u) { return std::exp(-a * std::pow(u, beta)); };
  double acc = 0.0;
  double lo = 0.0;
  for (double k = 0.0;; k += 1.0) {
    if (k >= kDirectHalfPeriods) {
      // Slowly damped tail: alternating half-period sums, Wynn-accelerated.
      const auto tail = quad::oscillatory_tail(amplitude, ax, 0.0, lo, 1e-12);
      if (!(tail.abs_error <= 1e-9 * std::max(std::abs(acc + tail.value), 1e-300)))
        throw NumericError("density inversion tail did not converge (beta too small or |x| too large)");
      acc += tail.value;
      break;
    }
    const double hi = std::min((k + 0.5) * kPi / ax, U);
    if (lo == 0.0) {
      // Geometric grading towards the u^beta cusp at 0.
      double right = hi;
      while (right > 1e-17) {
        acc += quad::gauss_fixed(f, 0.5 * right, right, 20);
        right *= 0.5;
      }
      acc += right;  // integrand is 1 at the origin
    } else {
      acc += quad::integrate(f, lo, hi, 1e-13, 10).value;
    }
    if (hi >= U) break;
    lo = hi;
  }
  return acc / kPi;
}

struct DensityTable {
  double beta = 1.0;
  double s_switch = 1.0;
  double step = 0.0;
  SeriesCoefficients series;
  std::unique_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline;
  std::vector<double> cumulative;  // int_0^{i step} p

  double pdf(double s) const {
    s = std::abs(s);
    if (s >= s_switch) return series_sum(series, beta, s, false);
    return (*spline)(s);
  }

  double upper_tail(double s) const {
    if (s < 0.0) return 1.0 - upper_tail(-s);
    if (s >= s_switch) return series_sum(series, beta, s, true);
    const std::size_t i = std::min(static_cast<std::size_t>(s / step), cumulative.size() - 1);
    const double base = static_cast<double>(i) * step;
    const double part = quad::integrate([this](double v) { return (*spline)(v); }, base, s, 1e-13, 8).value;
    return 0.5 - cumulative[i] - part;
  }
};

const DensityTable& table_for(double beta) {
  static std::mutex m;
  static std::map<double, std::unique_ptr<DensityTable>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[beta];
  if (!slot) {
    auto t = std::make_unique<DensityTable>();
    t->beta = beta;
    t->s_switch = series_switch(beta);
    t->series = series_coefficients(beta);
    constexpr std::size_t n = 2048;
    t->step = t->s_switch / static_cast<double>(n);
    std::vector<double> values(n + 1);
    parallel_for(n + 1, [&](std::size_t i) { values[i] = fourier_density(1.0, beta, t->step * static_cast<double>(i)); });
    t->spline = std::make_unique<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
        values.data(), values.size(), 0.0, t->step, 0.0);
    t->cumulative.resize(n + 1);
    t->cumulative[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      const double lo = t->step * static_cast<double>(i - 1);
      t->cumulative[i] =
          t->cumulative[i - 1] +
          quad::integrate([&](double v) { return (*t->spline)(v); }, lo, lo + t->step, 1e-13, 8).value;
    }
    slot = std::move(t);
  }
  return *slot;
}

std::uint32_t poisson(double mu, DrawStream& stream) {
  std::uint32_t total = 0;
  while (mu > 0.0) {
    const double m = std::min(mu, 30.0);
    mu -= m;
    double p = std::exp(-m);
    double F = p;
    const double u = stream.uniform();
    std::uint32_t k = 0;
    while (u > F && k < 100000) {
      ++k;
      p *= m / static_cast<double>(k);
      F += p;
      if (p == 0.0) break;
    }
    total += k;
  }
  return total;
}

}  // namespace

void validate(const StableParams& p) {
  if (!(p.beta > 0.0 && p.beta < 2.0)) throw ValidationError("beta must lie in (0,2)", "beta");
  if (!(p.c > 0.0 && std::isfinite(p.c))) throw ValidationError("c must be positive", "c");
}

void validate(const CompoundPoisson& p) { validate(LevyMeasure{FiniteDiscrete{p.atoms}}); }

void validate(const Process& p) {
  std::visit([](const auto& v) { validate(v); }, p);
}

LevyMeasure levy_measure_of(const Process& p) {
  if (const auto* s = std::get_if<StableParams>(&p)) return SymmetricStable{char_scale_to_nu(s->c, s->beta), s->beta};
  return FiniteDiscrete{std::get<CompoundPoisson>(p).atoms};
}

double standard_stable(double beta, double u0, double u1) noexcept {
  const double v = kPi * (u0 - 0.5);
  if (beta == 1.0) return std::tan(v);
  const double w = -std::log(u1);
  return std::sin(beta * v) / std::pow(std::cos(v), 1.0 / beta) *
         std::pow(std::cos((1.0 - beta) * v) / w, (1.0 - beta) / beta);
}

void sample_stable_range(const StableParams& p, double t, std::uint64_t seed, std::uint32_t substream,
                         std::uint64_t first, std::size_t n, double* out) {
  const double scale = scale_of(p, t);
  double u0[kChunk];
  double u1[kChunk];
  for (std::size_t i = 0; i < n; i += kChunk) {
    const std::size_t m = std::min(kChunk, n - i);
    uniform_pairs(seed, substream, 0, first + i, m, u0, u1);
    for (std::size_t j = 0; j < m; ++j) out[i + j] = scale * standard_stable(p.beta, u0[j], u1[j]);
  }
}

SampleBatch sample_stable(const StableParams& p, double t, std::size_t n, std::uint64_t seed,
                          std::uint32_t substream) {
  validate(p);
  if (!(t > 0.0)) throw ValidationError("t must be positive", "t");
  SampleBatch b;
  b.t = t;
  b.seed = seed;
  b.substream = substream;
  b.values.resize(n);
  sample_stable_range(p, t, seed, substream, 0, n, b.values.data());
  return b;
}

CppDraw sample_cpp_draw(std::span<const Atom> atoms, double t, std::uint64_t seed, std::uint32_t substream,
                        std::uint64_t index) {
  DrawStream stream(seed, substream, index);
  CppDraw d;
  for (const Atom& a : atoms) {
    const std::uint32_t k = poisson(a.lambda * t, stream);
    d.value += a.x * static_cast<double>(k);
    d.jumps += k;
    if (std::abs(a.x) > 1.0) d.big_jumps += k;
  }
  return d;
}

SampleBatch sample_cpp(std::span<const Atom> atoms, double t, std::size_t n, std::uint64_t seed,
                       std::uint32_t substream) {
  validate(CompoundPoisson{{atoms.begin(), atoms.end()}});
  if (!(t > 0.0)) throw ValidationError("t must be positive", "t");
  SampleBatch b;
  b.t = t;
  b.seed = seed;
  b.substream = substream;
  b.values.resize(n);
  b.jump_counts.resize(n);
  b.big_jump_counts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CppDraw d = sample_cpp_draw(atoms, t, seed, substream, i);
    b.values[i] = d.value;
    b.jump_counts[i] = d.jumps;
    b.big_jump_counts[i] = d.big_jumps;
  }
  return b;
}

void sample_range(const Process& p, double t, std::uint64_t seed, std::uint32_t substream, std::uint64_t first,
                  std::size_t n, double* out) {
  if (const auto* s = std::get_if<StableParams>(&p)) {
    sample_stable_range(*s, t, seed, substream, first, n, out);
    return;
  }
  const auto& atoms = std::get<CompoundPoisson>(p).atoms;
  for (std::size_t i = 0; i < n; ++i) out[i] = sample_cpp_draw(atoms, t, seed, substream, first + i).value;
}

double standard_density(double beta, double s) {
  s = std::abs(s);
  if (s >= series_switch(beta)) return series_sum(series_coefficients(beta), beta, s, false);
  return fourier_density(1.0, beta, s);
}

double standard_upper_tail(double beta, double s) { return table_for(beta).upper_tail(s); }

double density(const StableParams& p, double t, double x) {
  validate(p);
  if (!(t > 0.0)) throw ValidationError("t must be positive", "t");
  const double scale = scale_of(p, t);
  return standard_density(p.beta, x / scale) / scale;
}

double density_direct(const StableParams& p, double t, double x) {
  validate(p);
  if (!(t > 0.0)) throw ValidationError("t must be positive", "t");
  return fourier_density(t * p.c, p.beta, x);
}

double density_fast(const StableParams& p, double t, double x) {
  const double scale = scale_of(p, t);
  return table_for(p.beta).pdf(x / scale) / scale;
}

double cdf(const StableParams& p, double t, double x) {
  return 1.0 - table_for(p.beta).upper_tail(x / scale_of(p, t));
}

double density_sup(const StableParams& p, double t) {
  return std::tgamma(1.0 + 1.0 / p.beta) / (kPi * scale_of(p, t));
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_one_sample(std::vector<double> values, const std::function<double(double)>& F) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = F(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

KSResult scaling_check(const StableParams& p, double t, std::size_t n, std::uint64_t seed) {
  validate(p);
  if (!(t > 0.0 && t <= 1.0)) throw ValidationError("t must lie in (0,1]", "t");
  std::vector<double> xt = sample_stable(p, t, n, seed, 1).values;
  std::vector<double> x1 = sample_stable(p, 1.0, n, seed, 2).values;
  const double s = std::pow(t, 1.0 / p.beta);
  for (double& v : x1) v *= s;
  KSResult r;
  r.n = n;
  r.statistic = ks_two_sample(std::move(xt), std::move(x1));
  r.critical = 1.95 * std::sqrt(2.0 / static_cast<double>(n));
  r.pass = r.statistic < r.critical;
  return r;
}

DensityExtremes density_assumption_check(const StableParams& p, double a, double b, std::span<const double> t_grid,
                                         std::size_t points) {
  validate(p);
  if (b < a) throw ValidationError("interval must satisfy a <= b", "interval");
  if (t_grid.empty()) throw ValidationError("t grid must be nonempty", "t_grid");
  DensityExtremes e{0.0, std::numeric_limits<double>::infinity()};
  const std::size_t m = (a == b) ? 1 : std::max<std::size_t>(points, 2);
  for (double t : t_grid) {
    if (!(t > 0.0 && t <= 1.0)) throw ValidationError("t grid values must lie in (0,1]", "t_grid");
    for (std::size_t i = 0; i < m; ++i) {
      const double x = (m == 1) ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
      const double v = density(p, t, x);
      e.sup = std::max(e.sup, v);
      e.inf = std::min(e.inf, v);
    }
  }
  return e;
}

}  // namespace levylab
