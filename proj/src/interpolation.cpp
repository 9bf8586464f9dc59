#include "levylab/interpolation.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "levylab/error.hpp"
#include "levylab/parallel.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSub = 64;  // sub-points per interpolation cell

// Interval [a, b] carrying the whole behaviour of f - f_t; flag set when it is exact.
struct Span {
  double a = 0.0;
  double b = 1.0;
  bool exact = true;
};

Span evaluation_span(const FunctionSpec& f, double t) {
  if (const auto* g = std::get_if<Ciesielski>(&f)) {
    const double P = std::ldexp(1.0, -g->ell);
    const double r = t <= P ? P / t : t / P;
    if (std::abs(r - std::round(r)) < 1e-9) return {0.0, std::max(P, t), true};
    return {0.0, 16.0 * std::max(P, t), false};
  }
  std::vector<double> pts;
  if (const auto* i = std::get_if<Indicator>(&f)) pts = {i->K};
  if (const auto* m = std::get_if<NBVMixture>(&f)) {
    for (const auto& a : m->atoms) pts.push_back(a.u);
    for (const auto& p : m->pieces) pts.insert(pts.end(), {p.lo, p.hi});
  }
  if (std::holds_alternative<PowerCap>(f)) pts = {-1.0, 1.0};
  if (const auto* s = std::get_if<SmoothedIndicator>(&f)) {
    const double T = std::pow(s->t, 2.0 * s->theta);
    for (const auto& a : s->mixture.atoms) pts.insert(pts.end(), {a.u, a.u + T});
    for (const auto& p : s->mixture.pieces) pts.insert(pts.end(), {p.lo, p.hi + T});
  }
  if (std::holds_alternative<Constant>(f)) pts = {0.0};
  if (std::holds_alternative<Custom>(f)) return {-8.0, 8.0, false};
  if (pts.empty()) pts = {0.0};
  const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
  return {*lo - 2.0 * t - 1.0, *hi + 2.0 * t + 1.0, true};
}

double seq_weighted(const SequenceElement& a, const std::vector<double>& s, bool second) {
  double acc = 0.0;
  for (std::size_t n = 0; n < a.c.size(); ++n) {
    const double v = second ? (1.0 - s[n]) : s[n];
    acc += v * v * a.c[n] * (second ? static_cast<double>(n + 1) : 1.0);
  }
  return std::sqrt(acc);
}

std::vector<double> colinear_split(const SequenceElement& a, double lambda) {
  std::vector<double> s(a.c.size());
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double w = static_cast<double>(n + 1);
    s[n] = lambda * w / (1.0 + lambda * w);
  }
  return s;
}

void check_grid(const std::vector<double>& g) {
  if (g.empty()) throw ValidationError("t_grid must not be empty", "t_grid");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0 && std::isfinite(g[i]))) throw ValidationError("t_grid entries must be positive", "t_grid");
    if (i > 0 && !(g[i] > g[i - 1])) throw ValidationError("t_grid must be increasing", "t_grid");
  }
}

void check_theta(double theta, const char* name) {
  if (!(theta > 0.0 && theta < 1.0)) throw ValidationError(std::string(name) + " must lie in (0, 1)", name);
}

// Norm bracket from K brackets on a grid using monotonicity of K and of K(t)/t.
NormBracket bracket_from_k(const std::vector<double>& g, const std::vector<double>& k_lo,
                           const std::vector<double>& k_up, double theta, double q, double norm0, double norm1) {
  NormBracket out;
  const std::size_t m = g.size();
  if (std::isinf(q)) {
    for (std::size_t i = 0; i < m; ++i) {
      out.lower = std::max(out.lower, std::pow(g[i], -theta) * k_lo[i]);
      out.estimate = std::max(out.estimate, std::pow(g[i], -theta) * k_up[i]);
    }
    double up = std::max(std::pow(g.front(), 1.0 - theta) * norm1, std::pow(g.back(), -theta) * norm0);
    for (std::size_t i = 0; i + 1 < m; ++i) up = std::max(up, std::pow(g[i], -theta) * k_up[i + 1]);
    out.upper = std::max(up, out.estimate);
    return out;
  }
  double lo = 0.0, est = 0.0, up = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double h = std::log(g[i + 1] / g[i]);
    // On [g_i, g_{i+1}]: t^{-theta} K(t) >= g_{i+1}^{-theta} K(g_i).
    lo += h * std::pow(std::pow(g[i + 1], -theta) * k_lo[i], q);
    est += 0.5 * h * (std::pow(std::pow(g[i], -theta) * k_up[i], q) + std::pow(std::pow(g[i + 1], -theta) * k_up[i + 1], q));
    up += h * std::pow(std::pow(g[i], -theta) * k_up[i + 1], q);
  }
  up += std::pow(norm1, q) * std::pow(g.front(), (1.0 - theta) * q) / ((1.0 - theta) * q);
  up += std::pow(norm0, q) * std::pow(g.back(), -theta * q) / (theta * q);
  out.lower = std::pow(lo, 1.0 / q);
  out.estimate = std::pow(est, 1.0 / q);
  out.upper = std::pow(up, 1.0 / q);
  return out;
}

// Cost, gradient and Hessian of sqrt(A(s)) + t sqrt(B(s)); false where a norm vanishes.
bool split_derivatives(const SequenceElement& a, double t, const std::vector<double>& s, double& f,
                       std::vector<double>& grad, std::vector<double>& hess) {
  const std::size_t dim = s.size();
  double A = 0.0, B = 0.0;
  for (std::size_t n = 0; n < dim; ++n) {
    A += s[n] * s[n] * a.c[n];
    B += (1.0 - s[n]) * (1.0 - s[n]) * (n + 1.0) * a.c[n];
  }
  if (!(A > 0.0 && B > 0.0)) return false;
  const double rA = std::sqrt(A), rB = std::sqrt(B);
  std::vector<double> ga(dim), gb(dim);
  grad.assign(dim, 0.0);
  hess.assign(dim * dim, 0.0);
  for (std::size_t n = 0; n < dim; ++n) {
    ga[n] = a.c[n] * s[n];
    gb[n] = (n + 1.0) * a.c[n] * (1.0 - s[n]);
    grad[n] = ga[n] / rA - t * gb[n] / rB;
  }
  for (std::size_t p = 0; p < dim; ++p)
    for (std::size_t q = 0; q < dim; ++q) {
      double h = -ga[p] * ga[q] / (A * rA) - t * gb[p] * gb[q] / (B * rB);
      if (p == q) h += a.c[p] / rA + t * (p + 1.0) * a.c[p] / rB;
      hess[p * dim + q] = h;
    }
  f = rA + t * rB;
  return true;
}

// Solves M x = b in place by Cholesky; false when M is not positive definite.
bool cholesky_solve(std::vector<double> M, std::vector<double>& b) {
  const std::size_t m = b.size();
  for (std::size_t j = 0; j < m; ++j) {
    double d = M[j * m + j];
    for (std::size_t k = 0; k < j; ++k) d -= M[j * m + k] * M[j * m + k];
    if (!(d > 0.0)) return false;
    M[j * m + j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < m; ++i) {
      double v = M[i * m + j];
      for (std::size_t k = 0; k < j; ++k) v -= M[i * m + k] * M[j * m + k];
      M[i * m + j] = v / M[j * m + j];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= M[i * m + k] * b[k];
    b[i] /= M[i * m + i];
  }
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t k = i + 1; k < m; ++k) b[i] -= M[k * m + i] * b[k];
    b[i] /= M[i * m + i];
  }
  return true;
}

// Levenberg-Marquardt Newton on the split cost in one of three charts:
// s = x, s = 1 - e^x (resolves the cone point of sqrt(B) at s = 1) or
// s = e^x (the cone point of sqrt(A) at s = 0). Returns the best cost reached.
enum class Chart { plain, near_one, near_zero };

double newton_polish(const SequenceElement& a, double t, const std::vector<double>& start, Chart chart) {
  const std::size_t dim = start.size();
  std::vector<double> x(dim);
  for (std::size_t n = 0; n < dim; ++n) {
    if (chart == Chart::plain) x[n] = start[n];
    else if (chart == Chart::near_one) x[n] = std::log(std::max(1.0 - start[n], 1e-3));
    else x[n] = std::log(std::max(start[n], 1e-3));
  }
  auto to_s = [&](const std::vector<double>& y, std::vector<double>& s, std::vector<double>& d1) {
    s.resize(dim);
    d1.resize(dim);
    for (std::size_t n = 0; n < dim; ++n) {
      if (chart == Chart::plain) {
        s[n] = y[n];
        d1[n] = 1.0;
      } else if (chart == Chart::near_one) {
        s[n] = 1.0 - std::exp(y[n]);
        d1[n] = -std::exp(y[n]);
      } else {
        s[n] = std::exp(y[n]);
        d1[n] = std::exp(y[n]);
      }
    }
  };
  // In both exponential charts the second derivative of s equals the first.
  auto eval = [&](const std::vector<double>& y, double& f, std::vector<double>& g, std::vector<double>& H) {
    std::vector<double> s, d1, gs, Hs;
    to_s(y, s, d1);
    if (!split_derivatives(a, t, s, f, gs, Hs)) return false;
    g.resize(dim);
    H.resize(dim * dim);
    for (std::size_t p = 0; p < dim; ++p) {
      g[p] = gs[p] * d1[p];
      for (std::size_t q = 0; q < dim; ++q) H[p * dim + q] = Hs[p * dim + q] * d1[p] * d1[q];
      if (chart != Chart::plain) H[p * dim + p] += gs[p] * d1[p];
    }
    return true;
  };
  double f;
  std::vector<double> g, H;
  if (!eval(x, f, g, H)) return kInf;
  double tau = 1e-3;
  for (int it = 0; it < 500; ++it) {
    bool accepted = false;
    while (tau < 1e20) {
      auto M = H;
      for (std::size_t i = 0; i < dim; ++i) M[i * dim + i] += tau;
      std::vector<double> d(dim);
      for (std::size_t i = 0; i < dim; ++i) d[i] = -g[i];
      if (!cholesky_solve(M, d)) {
        tau *= 10.0;
        continue;
      }
      std::vector<double> y(dim);
      for (std::size_t i = 0; i < dim; ++i) y[i] = x[i] + d[i];
      double fy;
      std::vector<double> gy, Hy;
      if (eval(y, fy, gy, Hy) && fy < f) {
        accepted = f - fy > 1e-16 * f;
        x = std::move(y);
        f = fy;
        g = std::move(gy);
        H = std::move(Hy);
        tau = std::max(tau / 3.0, 1e-15);
        break;
      }
      tau *= 10.0;
    }
    if (!accepted) break;
  }
  return f;
}

}  // namespace

KFunctionalEstimate k_functional_holder(const FunctionSpec& f, double t) {
  validate(f);
  if (!(t > 0.0 && std::isfinite(t))) throw ValidationError("t must be positive", "t");
  const Span span = evaluation_span(f, t);
  const auto k0 = static_cast<long long>(std::floor(span.a / t));
  const auto k1 = static_cast<long long>(std::ceil(span.b / t));
  const std::size_t cells = static_cast<std::size_t>(k1 - k0);
  if (cells > (std::size_t{1} << 22)) throw ValidationError("t too small for the evaluation span", "t");

  const std::size_t pts = cells * kSub + 1;
  std::vector<double> xs(pts), fx(pts), xs_shift(pts), fs(pts);
  for (std::size_t i = 0; i < pts; ++i) {
    xs[i] = (static_cast<double>(k0) + static_cast<double>(i) / kSub) * t;
    xs_shift[i] = xs[i] + t;
  }
  eval_batch(f, xs.data(), fx.data(), pts);
  eval_batch(f, xs_shift.data(), fs.data(), pts);

  double dev = 0.0, jump = 0.0, osc = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double left = fx[c * kSub], right = fx[(c + 1) * kSub];
    jump = std::max(jump, std::abs(right - left));
    for (int j = 0; j <= kSub; ++j) {
      const double lin = left + (right - left) * (static_cast<double>(j) / kSub);
      dev = std::max(dev, std::abs(fx[c * kSub + j] - lin));
    }
  }
  for (std::size_t i = 0; i < pts; ++i) osc = std::max(osc, std::abs(fs[i] - fx[i]));

  KFunctionalEstimate out;
  out.t = t;
  out.lower = 0.5 * osc;
  const double interp = dev + jump;
  const double zero = sup_bound(f);
  if (interp <= zero) {
    out.upper = interp;
    out.witness = "piecewise-linear interpolant on tZ";
  } else {
    out.upper = zero;
    out.witness = "(f, 0)";
  }
  if (!span.exact) out.witness += " (truncated span)";
  return out;
}

NormBracket interp_norm_holder(const FunctionSpec& f, double alpha, const std::vector<double>& t_grid) {
  check_theta(alpha, "alpha");
  check_grid(t_grid);
  std::vector<KFunctionalEstimate> ks(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) { ks[i] = k_functional_holder(f, t_grid[i]); });
  NormBracket out;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double w = std::pow(t_grid[i], -alpha);
    out.lower = std::max(out.lower, w * ks[i].lower);
    out.estimate = std::max(out.estimate, w * ks[i].upper);
  }
  // t >= 1 contributes at most ||f||_inf.
  out.upper = std::max(out.estimate, sup_bound(f));
  return out;
}

void validate(const SequenceElement& a) {
  if (a.c.empty()) throw ValidationError("sequence must have at least one coefficient", "c");
  for (std::size_t n = 0; n < a.c.size(); ++n)
    if (!(a.c[n] >= 0.0 && std::isfinite(a.c[n])))
      throw ValidationError("coefficients must be finite and nonnegative", "c[" + std::to_string(n) + "]");
}

double seq_T(const SequenceElement& a, double t) {
  validate(a);
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("t must lie in [0, 1]", "t");
  double acc = 0.0;
  for (std::size_t n = a.c.size(); n-- > 0;) acc = acc * t + a.c[n];
  return acc;
}

double seq_norm_l2(const SequenceElement& a) {
  double s = 0.0;
  for (double v : a.c) s += v;
  return std::sqrt(s);
}

double seq_norm_d12(const SequenceElement& a) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.c.size(); ++n) s += static_cast<double>(n + 1) * a.c[n];
  return std::sqrt(s);
}

double seq_split_cost(const SequenceElement& a, double t, const std::vector<double>& s) {
  return seq_weighted(a, s, false) + t * seq_weighted(a, s, true);
}

KFunctionalEstimate seq_k_functional(const SequenceElement& a, double t) {
  validate(a);
  if (!(t > 0.0)) throw ValidationError("t must be positive", "t");
  KFunctionalEstimate out;
  out.t = t;
  double lo = 0.0;
  for (std::size_t n = 0; n < a.c.size(); ++n) lo += std::min(1.0, t * t * static_cast<double>(n + 1)) * a.c[n];
  out.lower = std::sqrt(lo) / std::numbers::sqrt2;

  const double all_a0 = seq_norm_l2(a);       // s = 1
  const double all_a1 = t * seq_norm_d12(a);  // s = 0
  out.upper = std::min(all_a0, all_a1);
  out.witness = all_a0 <= all_a1 ? "(a, 0)" : "(0, a)";
  if (out.upper == 0.0) return out;

  // Stationarity: s_n = lambda w_n / (1 + lambda w_n) with lambda B(lambda) = t A(lambda).
  auto g = [&](double u) {
    const auto s = colinear_split(a, std::exp(u));
    const double A = seq_weighted(a, s, false), B = seq_weighted(a, s, true);
    return std::exp(u) * B - t * A;
  };
  // g may keep its sign at both ends, so scan for every bracket.
  double prev_u = -80.0, prev_g = g(prev_u);
  for (double u = -79.5; u <= 80.0; u += 0.5) {
    const double gu = g(u);
    if (prev_g * gu < 0.0) {
      std::uintmax_t iters = 200;
      const auto root = boost::math::tools::toms748_solve(g, prev_u, u, prev_g, gu,
                                                          boost::math::tools::eps_tolerance<double>(50), iters);
      const double lam = std::exp(0.5 * (root.first + root.second));
      const double val = seq_split_cost(a, t, colinear_split(a, lam));
      if (val < out.upper) {
        out.upper = val;
        out.witness = "colinear split, lambda = " + std::to_string(lam);
      }
    }
    prev_u = u;
    prev_g = gu;
  }
  out.lower = std::min(out.lower, out.upper);
  return out;
}

KFunctionalEstimate seq_k_bruteforce(const SequenceElement& a, double t, double step) {
  validate(a);
  if (a.c.size() > 8) throw ValidationError("brute force limited to N <= 7", "c");
  if (!(step > 0.0 && step <= 0.5)) throw ValidationError("step must lie in (0, 1/2]", "step");
  const std::size_t dim = a.c.size();
  const int levels = static_cast<int>(std::round(1.0 / step)) + 1;
  // The cost is convex and smooth away from s = 0 and s = 1 (where one norm
  // vanishes); the corners are scored separately and the descent starts from
  // the best grid point that is not a corner.
  std::vector<double> s(dim, 0.0), best_s(dim, 0.0);
  double best = kInf;
  const double corners = std::min(seq_split_cost(a, t, std::vector<double>(dim, 0.0)),
                                  seq_split_cost(a, t, std::vector<double>(dim, 1.0)));
  std::vector<int> idx(dim, 0);
  while (true) {
    bool corner0 = true, corner1 = true;
    for (std::size_t n = 0; n < dim; ++n) {
      s[n] = std::min(1.0, idx[n] * step);
      corner0 = corner0 && s[n] == 0.0;
      corner1 = corner1 && s[n] == 1.0;
    }
    const double v = (corner0 || corner1) ? kInf : seq_split_cost(a, t, s);
    if (v < best) {
      best = v;
      best_s = s;
    }
    std::size_t n = 0;
    while (n < dim && ++idx[n] == levels) idx[n++] = 0;
    if (n == dim) break;
  }
  const std::vector<double> grid_best = best_s;
  // Coordinate descent with golden-section line searches.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < 5000 && std::isfinite(best); ++sweep) {
    const double before = best;
    for (std::size_t n = 0; n < dim; ++n) {
      auto cost = [&](double v) {
        auto trial = best_s;
        trial[n] = v;
        return seq_split_cost(a, t, trial);
      };
      double lo = 0.0, hi = 1.0;
      double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      double f1 = cost(x1), f2 = cost(x2);
      while (hi - lo > 1e-13) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - g * (hi - lo);
          f1 = cost(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + g * (hi - lo);
          f2 = cost(x2);
        }
      }
      for (double v : {lo, hi, 0.5 * (lo + hi)}) {
        const double c = cost(v);
        if (c < best) {
          best = c;
          best_s[n] = v;
        }
      }
    }
    if (before - best <= 1e-16 * best) break;
  }
  // The descent can drift onto the s = 1 face where sqrt(B) has its cone point;
  // Newton is run from the descent result and from the grid point in each chart.
  if (std::isfinite(best))
    for (Chart chart : {Chart::plain, Chart::near_one, Chart::near_zero})
      best = std::min({best, newton_polish(a, t, best_s, chart), newton_polish(a, t, grid_best, chart)});
  best = std::min(best, corners);
  KFunctionalEstimate out;
  out.t = t;
  out.upper = best;
  out.lower = seq_k_functional(a, t).lower;
  out.witness = "grid search, step " + std::to_string(step) + ", refined";
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  if (!(lo > 0.0 && hi > lo) || points_per_decade < 1) throw ValidationError("invalid log grid", "t_grid");
  const double span = std::log10(hi / lo);
  const int n = static_cast<int>(std::ceil(span * points_per_decade));
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(lo * std::pow(10.0, span * i / n));
  return g;
}

NormBracket seq_interp_norm(const SequenceElement& a, double theta, double q, const std::vector<double>& t_grid) {
  validate(a);
  check_theta(theta, "theta");
  if (!(q >= 1.0)) throw ValidationError("q must lie in [1, inf]", "q");
  check_grid(t_grid);
  std::vector<double> lo(t_grid.size()), up(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const auto k = seq_k_functional(a, t_grid[i]);
    lo[i] = k.lower;
    up[i] = k.upper;
  }
  return bracket_from_k(t_grid, lo, up, theta, q, seq_norm_l2(a), seq_norm_d12(a));
}

GeissHujoReport geiss_hujo_check(const SequenceElement& a, double theta, double q, const std::vector<double>& t_grid) {
  GeissHujoReport r;
  r.interpolation = seq_interp_norm(a, theta, q, t_grid);
  const double T1 = seq_T(a, 1.0);
  // u = 1 - t, integrand u^{-theta/2} sqrt(T(1) - T(1 - u)).
  auto h = [&](double u) {
    const double d = std::max(0.0, T1 - seq_T(a, 1.0 - u));
    return std::pow(u, -theta / 2.0) * std::sqrt(d);
  };
  double second = 0.0;
  if (std::isinf(q)) {
    for (int i = 0; i <= 2400; ++i) second = std::max(second, h(std::pow(10.0, -12.0 + 12.0 * i / 2400.0)));
  } else {
    // int_0^1 h(u)^q du / u in log u.
    second = std::pow(quad::integrate([&](double w) { return std::pow(h(std::exp(w)), q); }, std::log(1e-14), 0.0,
                                      1e-10, 15)
                          .value,
                      1.0 / q);
  }
  r.t_expression = seq_norm_l2(a) + second;
  if (r.interpolation.estimate > 0.0) {
    r.ratio = r.t_expression / r.interpolation.estimate;
    r.ratio_lower = r.t_expression / r.interpolation.upper;
    r.ratio_upper = r.interpolation.lower > 0.0 ? r.t_expression / r.interpolation.lower : kInf;
  }
  return r;
}

ReiterationReport reiteration_check(const SequenceElement& a, double eta, double theta,
                                    const std::vector<double>& t_grid) {
  validate(a);
  check_theta(eta, "eta");
  check_theta(theta, "theta");
  if (a.c.size() > 9) throw ValidationError("reiteration check limited to N <= 8", "c");
  check_grid(t_grid);
  ReiterationReport r;
  constexpr double inf = std::numeric_limits<double>::infinity();
  r.direct = seq_interp_norm(a, eta * theta, inf, t_grid);

  // Candidate splits a = (1 - s) a + s a: the colinear family plus the two endpoints.
  struct Candidate {
    double a0_norm;        // ||(1 - s) a||_{A0}
    NormBracket a1_norm;   // ||s a||_{(A0, A1)_{eta, inf}}
  };
  std::vector<Candidate> cands;
  auto add = [&](const std::vector<double>& s) {
    SequenceElement part0, part1;
    for (std::size_t n = 0; n < a.c.size(); ++n) {
      part0.c.push_back((1.0 - s[n]) * (1.0 - s[n]) * a.c[n]);
      part1.c.push_back(s[n] * s[n] * a.c[n]);
    }
    Candidate c{seq_norm_l2(part0), {}};
    c.a1_norm = seq_interp_norm(part1, eta, inf, t_grid);
    cands.push_back(c);
  };
  add(std::vector<double>(a.c.size(), 0.0));
  add(std::vector<double>(a.c.size(), 1.0));
  for (double u = -12.0; u <= 12.0; u += 0.25) add(colinear_split(a, std::exp(u)));
  // Uniform scalings s_n = s cover the single-coordinate case exactly.
  for (int j = 1; j < 64; ++j) add(std::vector<double>(a.c.size(), j / 64.0));

  // K(t; A0, A_eta) upper via candidates; lower via K(t) >= t s^{-eta} K(a, s; A0, A1) for s^eta >= t.
  std::vector<double> k_up(t_grid.size()), k_lo(t_grid.size());
  const double n0 = seq_norm_l2(a);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    double best = inf;
    for (const auto& c : cands) best = std::min(best, c.a0_norm + t * c.a1_norm.upper);
    k_up[i] = best;
    double lo = 0.0;
    for (double s : t_grid) {
      if (std::pow(s, eta) < t) continue;
      lo = std::max(lo, t * std::pow(s, -eta) * seq_k_functional(a, s).lower);
    }
    k_lo[i] = std::min(lo, n0);
  }
  const auto direct_eta = seq_interp_norm(a, eta, inf, t_grid);
  r.reiterated = bracket_from_k(t_grid, k_lo, k_up, theta, inf, n0, direct_eta.upper);
  if (r.direct.upper > 0.0) {
    r.ratio_lower = r.reiterated.lower / r.direct.upper;
    r.ratio_upper = r.direct.lower > 0.0 ? r.reiterated.upper / r.direct.lower : inf;
  }
  r.intersects = r.ratio_lower <= 3.0 && r.ratio_upper >= 1.0;
  return r;
}

}  // namespace levylab
