#include "levylab/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levylab/error.hpp"
#include "levylab/levy_model.hpp"
#include "levylab/parallel.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {
namespace {

constexpr std::size_t kChunk = std::size_t{1} << 16;

void draw(const Process& p, double t, std::uint64_t seed, std::uint32_t substream, std::uint64_t first,
          std::size_t n, double* out) {
  if (t == 0.0) {
    std::fill(out, out + n, 0.0);
    return;
  }
  sample_range(p, t, seed, substream, first, n, out);
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

void check_samples(std::size_t n) {
  if (n < 1000) throw ValidationError("n must be at least 1000", "n");
}

}  // namespace

PsiEstimate psi(const FunctionSpec& f, const Process& p, double t, std::size_t n, std::uint64_t seed,
                std::uint32_t substream_base) {
  validate(f);
  validate(p);
  check_samples(n);
  if (!(t >= 0.0 && t < 1.0)) throw ValidationError("t must lie in [0, 1)", "t");
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Moments> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t first = c * kChunk;
    const std::size_t m = std::min(kChunk, n - first);
    std::vector<double> xt(m), inc(m), bar(m), a(m), b(m), fa(m), fb(m);
    draw(p, t, seed, substream_base, first, m, xt.data());
    draw(p, 1.0 - t, seed, substream_base + 1, first, m, inc.data());
    draw(p, 1.0 - t, seed, substream_base + 2, first, m, bar.data());
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = xt[i] + inc[i];
      b[i] = xt[i] + bar[i];
    }
    eval_batch(f, a.data(), fa.data(), m);
    eval_batch(f, b.data(), fb.data(), m);
    Moments acc;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = fa[i] - fb[i];
      const double v = 0.5 * d * d;
      acc.sum += v;
      acc.sum_sq += v * v;
    }
    parts[c] = acc;
  });
  Moments total;
  for (const auto& m : parts) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  const double nn = static_cast<double>(n);
  const double mean = total.sum / nn;
  const double var = std::max(0.0, (total.sum_sq - nn * mean * mean) / (nn - 1.0));
  return {mean, std::sqrt(var / nn)};
}

PsiEstimate variance_estimate(const FunctionSpec& f, const Process& p, std::size_t n, std::uint64_t seed,
                              std::uint32_t substream) {
  validate(f);
  validate(p);
  check_samples(n);
  std::vector<double> xs(n), fx(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t first = c * kChunk;
    const std::size_t m = std::min(kChunk, n - first);
    draw(p, 1.0, seed, substream, first, m, xs.data() + first);
    eval_batch(f, xs.data() + first, fx.data() + first, m);
  });
  const double nn = static_cast<double>(n);
  double mean = 0.0;
  for (double v : fx) mean += v;
  mean /= nn;
  double m2 = 0.0, m4 = 0.0;
  for (double v : fx) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= nn;
  m4 /= nn;
  const double var = m2 * nn / (nn - 1.0);
  return {var, std::sqrt(std::max(0.0, m4 - m2 * m2) / nn)};
}

std::vector<double> dyadic_grid(int first, int last) {
  if (first < 0 || last < first) throw ValidationError("grid levels must satisfy 0 <= first <= last", "t_grid");
  std::vector<double> g;
  for (int k = first; k <= last; ++k) g.push_back(1.0 - std::ldexp(1.0, -k));
  return g;
}

PsiCurve psi_curve(const FunctionSpec& f, const Process& p, const std::vector<double>& t_grid, std::size_t n,
                   std::uint64_t seed) {
  if (t_grid.empty()) throw ValidationError("t_grid must not be empty", "t_grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (!(t >= 0.0 && t <= 1.0 - 1e-4)) throw ValidationError("t_grid entries must lie in [0, 1 - 1e-4]", "t_grid");
    if (i > 0 && !(t > t_grid[i - 1])) throw ValidationError("t_grid must be increasing", "t_grid");
  }
  PsiCurve curve;
  curve.t_grid = t_grid;
  curve.n = n;
  curve.seed = seed;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const auto e = psi(f, p, t_grid[i], n, seed, static_cast<std::uint32_t>(3 * i + 1));
    curve.psi.push_back(e.value);
    curve.stderr_.push_back(e.stderr_);
  }
  return curve;
}

SmoothnessFit fit_exponent(const PsiCurve& curve) {
  std::vector<double> xs, ys, ws;
  for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
    const double v = curve.psi[i], se = curve.stderr_[i];
    if (!(v > 0.0) || se / v > 0.1) continue;
    const double rel = std::max(se / v, 1e-12);
    xs.push_back(std::log(1.0 - curve.t_grid[i]));
    ys.push_back(std::log(v));
    ws.push_back(1.0 / (rel * rel));
  }
  if (xs.size() < 4) throw InsufficientData("insufficient decay data");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += ws[i];
    sx += ws[i] * xs[i];
    sy += ws[i] * ys[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
    sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
    syy += ws[i] * (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientData("insufficient decay data");
  SmoothnessFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    rss += ws[i] * r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  // Residual-scaled slope variance, floored by the propagated MC variance.
  const double dof = static_cast<double>(xs.size()) - 2.0;
  const double scale = std::max(1.0, rss / dof);
  fit.half_width = 1.96 * std::sqrt(scale / sxx);
  fit.theta_max = std::min(fit.slope, 1.0);
  fit.used_points = xs.size();
  return fit;
}

MembershipStat membership_statistic(const PsiCurve& curve, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw ValidationError("theta must lie in (0, 1)", "theta");
  MembershipStat out;
  out.theta = theta;
  out.rule = "growing when the last three grid points increase by at least 10% each";
  std::vector<double> v;
  for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
    v.push_back(std::pow(1.0 - curve.t_grid[i], -theta) * curve.psi[i]);
    out.sup_stat = std::max(out.sup_stat, v.back());
  }
  bool growing = v.size() >= 3;
  for (std::size_t i = v.size() >= 3 ? v.size() - 2 : 0; growing && i < v.size(); ++i)
    growing = v[i] >= 1.1 * v[i - 1] && v[i] > 0.0;
  out.verdict = growing ? "growing" : "bounded-on-grid";
  return out;
}

ExceedanceProbe small_time_exceedance(const Process& p, double beta_prime, double c, double t0, int levels,
                                      std::size_t n_mc, std::uint64_t seed) {
  validate(p);
  if (!(beta_prime > 0.0)) throw ValidationError("beta_prime must be positive", "beta_prime");
  if (!(c > 0.0)) throw ValidationError("c must be positive", "c");
  if (!(t0 > 0.0 && t0 <= 1.0)) throw ValidationError("t0 must lie in (0, 1]", "t0");
  if (levels < 1 || levels > 200) throw ValidationError("levels must lie in [1, 200]", "levels");
  ExceedanceProbe out;
  for (int k = 0; k <= levels; ++k) out.t.push_back(t0 * std::ldexp(1.0, -k));
  out.probability.resize(out.t.size());
  if (const auto* s = std::get_if<StableParams>(&p)) {
    for (std::size_t k = 0; k < out.t.size(); ++k) {
      const double y = c * std::pow(out.t[k], 1.0 / beta_prime - 1.0 / s->beta);
      out.probability[k] = 2.0 * cdf(*s, 1.0, -y);
    }
  } else {
    if (n_mc < 2) throw ValidationError("samples must be at least 2", "samples");
    parallel_for(out.t.size(), [&](std::size_t k) {
      std::vector<double> xs(n_mc);
      sample_range(p, out.t[k], seed, static_cast<std::uint32_t>(k + 1), 0, n_mc, xs.data());
      const double thr = c * std::pow(out.t[k], 1.0 / beta_prime);
      std::size_t hits = 0;
      for (double x : xs) hits += std::abs(x) > thr;
      out.probability[k] = static_cast<double>(hits) / static_cast<double>(n_mc);
    });
  }
  out.partial_sums.push_back(0.0);
  for (std::size_t k = 1; k < out.t.size(); ++k)
    out.partial_sums.push_back(out.partial_sums.back() +
                               0.5 * (out.probability[k - 1] + out.probability[k]) * std::numbers::ln2);
  out.total = out.partial_sums.back();
  return out;
}

BVInterpolation bv_interp_upper(const NBVMixture& mixture, double theta, const StableParams& p,
                                const std::vector<double>& t_grid, const D12Options& opts) {
  validate(FunctionSpec{mixture});
  validate(p);
  if (!(theta >= 0.5 && theta < 1.0)) throw ValidationError("theta must lie in [1/2, 1)", "theta");
  for (double t : t_grid)
    if (!(t > 0.0 && t < 1.0)) throw ValidationError("t_grid entries must lie in (0, 1)", "t_grid");
  const LevyMeasure m = levy_measure_of(p);
  const auto m_inv = moment(m, 1.0 / theta);
  if (!m_inv.finite) throw ValidationError("m_{1/theta} must be finite", "theta");
  const double p_inf = density_sup(p, 1.0);
  BVInterpolation out;
  out.t_grid = t_grid;
  out.constant = (std::sqrt(p_inf) + std::sqrt(1.0 + 2.0 * std::max(p_inf, 1.0) * m_inv.value)) *
                 mixture.total_variation();
  const FunctionSpec f{mixture};
  std::vector<double> base;
  for (const auto& a : mixture.atoms) base.push_back(a.u);
  for (const auto& pc : mixture.pieces) {
    base.push_back(pc.lo);
    base.push_back(pc.hi);
  }
  for (double t : t_grid) {
    const auto dec = smoothing_decomposition(mixture, theta, t);
    const FunctionSpec ft{dec.f_t};
    std::vector<double> cuts;
    for (double b : base) {
      cuts.push_back(b);
      cuts.push_back(b + dec.support_length);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double l2 = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      l2 += quad::integrate(
                [&](double y) {
                  const double d = eval(f, y) - eval(ft, y);
                  return d * d * density_fast(p, 1.0, y);
                },
                cuts[k], cuts[k + 1], 1e-11, 12)
                .value;
    }
    const auto rep = d12_norm_sq(ft, p, opts);
    const double l2_part = std::sqrt(l2);
    const double d12_part = std::sqrt(rep.d12_norm_sq);
    out.l2_part.push_back(l2_part);
    out.d12_part.push_back(d12_part);
    out.values.push_back(std::pow(t, -theta) * (l2_part + t * d12_part));
    out.sup = std::max(out.sup, out.values.back());
  }
  return out;
}

}  // namespace levylab
