#include "levylab/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "levylab/error.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

// Multiplicative prefactor kept out of the log-space integrand so that
// moments scale exactly with b.
double prefactor(const LevyMeasure& m) {
  return std::visit(overloaded{[](const SymmetricStable& s) { return s.b; },
                               [](const LogDampedStable& s) { return s.b; },
                               [](const auto&) { return 1.0; }},
                    m);
}

// log(h(e^w) + h(-e^w)) without the prefactor.
double log_density_sum(const LevyMeasure& m, double w) {
  return std::visit(
      overloaded{
          [&](const SymmetricStable& s) { return std::log(2.0) - (1.0 + s.beta) * w; },
          [&](const LogDampedStable& s) {
            return std::log(2.0) - (1.0 + s.beta) * w - std::log1p(w * w);
          },
          [&](const FiniteDiscrete&) { return -kInf; },
          [&](const GenericDensity& g) {
            if (g.h) {
              const double x = std::exp(w);
              if (x == 0.0 || !std::isfinite(x)) return -kInf;
              const double v = g.h(x) + g.h(-x);
              return v > 0.0 ? std::log(v) : -kInf;
            }
            double top = -kInf;
            std::vector<double> logs;
            logs.reserve(g.terms.size());
            for (const DensityTerm& t : g.terms) {
              if (t.b <= 0.0) continue;
              const double l = std::log(2.0 * t.b) - (1.0 + t.beta) * w - t.lambda * std::exp(w);
              logs.push_back(l);
              top = std::max(top, l);
            }
            if (!std::isfinite(top)) return top;
            double acc = 0.0;
            for (double l : logs) acc += std::exp(l - top);
            return top + std::log(acc);
          }},
      m);
}

// int over e^{w0} < |x| <= e^{w1} of |x|^p nu(dx), density variants only.
quad::Result log_band(const LevyMeasure& m, double w0, double w1, double p) {
  const double pre = prefactor(m);
  auto f = [&](double w) {
    const double l = (p + 1.0) * w + log_density_sum(m, w);
    return l == -kInf ? 0.0 : std::exp(l);
  };
  quad::Result r = quad::integrate(f, w0, w1, 1e-13, 10);
  r.value *= pre;
  r.abs_error *= pre;
  return r;
}

bool is_callable_density(const LevyMeasure& m) {
  const auto* g = std::get_if<GenericDensity>(&m);
  return g != nullptr && static_cast<bool>(g->h);
}

MomentValue small_jump_shells(const LevyMeasure& m, double xi, double r) {
  const double top = std::log(r);
  quad::ShellOptions opts;
  opts.rel_tol = 1e-13;
  if (is_callable_density(m)) {
    // The callable is evaluated at x = e^w; stay clear of underflow.
    opts.max_shells = static_cast<std::size_t>(std::max(1.0, (top + 700.0) / kLn2));
  }
  double quad_err = 0.0;
  const quad::ShellSum s = quad::sum_shells(
      [&](std::size_t k) {
        const double hi = top - static_cast<double>(k) * kLn2;
        const quad::Result band = log_band(m, hi - kLn2, hi, xi);
        quad_err += band.abs_error;
        return band.value;
      },
      opts);
  MomentValue out;
  out.xi = xi;
  out.finite = s.finite;
  out.value = s.value;
  out.abs_error = s.finite ? s.abs_error + quad_err : 0.0;
  return out;
}

double tail_mass_shells(const LevyMeasure& m, double r) {
  const double bottom = std::log(r);
  quad::ShellOptions opts;
  opts.rel_tol = 1e-14;
  opts.max_shells = 1024;  // up to |x| ~ r 2^1024
  if (is_callable_density(m)) opts.max_shells = static_cast<std::size_t>(std::max(1.0, (700.0 - bottom) / kLn2));
  const quad::ShellSum s = quad::sum_shells(
      [&](std::size_t k) {
        const double lo = bottom + static_cast<double>(k) * kLn2;
        return log_band(m, lo, lo + kLn2, 0.0).value;
      },
      opts);
  return s.finite ? s.value : kInf;
}

MomentValue small_jump_impl(const LevyMeasure& m, double xi, double r, bool closed_forms) {
  if (const auto* d = std::get_if<FiniteDiscrete>(&m)) {
    MomentValue out{xi, 0.0, true, 0.0};
    for (const Atom& a : d->atoms) {
      const double ax = std::abs(a.x);
      if (ax > 0.0 && ax <= r) out.value += a.lambda * std::pow(ax, xi);
    }
    return out;
  }
  if (const auto* s = std::get_if<SymmetricStable>(&m); s != nullptr && closed_forms) {
    if (xi <= s->beta) return {xi, kInf, false, 0.0};
    return {xi, 2.0 * s->b * std::pow(r, xi - s->beta) / (xi - s->beta), true, 0.0};
  }
  return small_jump_shells(m, xi, r);
}

MomentValue moment_impl(const LevyMeasure& m, double xi, bool closed_forms) {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw ValidationError("xi must be a finite nonnegative number", "xi");
  if (const auto* d = std::get_if<FiniteDiscrete>(&m)) {
    MomentValue out{xi, 0.0, true, 0.0};
    for (const Atom& a : d->atoms) out.value += a.lambda * std::min(std::pow(std::abs(a.x), xi), 1.0);
    return out;
  }
  if (const auto* s = std::get_if<SymmetricStable>(&m); s != nullptr && closed_forms) {
    if (xi <= s->beta) return {xi, kInf, false, 0.0};
    return {xi, 2.0 * s->b * (1.0 / (xi - s->beta) + 1.0 / s->beta), true, 0.0};
  }
  MomentValue small = small_jump_impl(m, xi, 1.0, closed_forms);
  if (!small.finite) return small;
  const double tail = closed_forms ? tail_mass(m, 1.0) : tail_mass_shells(m, 1.0);
  if (!std::isfinite(tail)) return {xi, kInf, false, 0.0};
  small.value += tail;
  small.abs_error += 1e-13 * tail;
  return small;
}

}  // namespace

double FiniteDiscrete::total_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.lambda;
  return s;
}

std::string variant_name(const LevyMeasure& m) {
  return std::visit(overloaded{[](const SymmetricStable&) { return std::string("symmetric_stable"); },
                               [](const LogDampedStable&) { return std::string("log_damped_stable"); },
                               [](const FiniteDiscrete&) { return std::string("finite_discrete"); },
                               [](const GenericDensity&) { return std::string("generic_density"); }},
                    m);
}

void validate(const LevyMeasure& m) {
  std::visit(
      overloaded{
          [](const SymmetricStable& s) {
            if (!finite_positive(s.b)) throw ValidationError("b must be positive", "b");
            if (!(s.beta > 0.0 && s.beta < 2.0)) throw ValidationError("beta must lie in (0,2)", "beta");
          },
          [](const LogDampedStable& s) {
            if (!finite_positive(s.b)) throw ValidationError("b must be positive", "b");
            if (!(s.beta > 0.0 && s.beta <= 2.0)) throw ValidationError("beta must lie in (0,2]", "beta");
          },
          [](const FiniteDiscrete& d) {
            for (std::size_t i = 0; i < d.atoms.size(); ++i) {
              const std::string at = "atoms/" + std::to_string(i);
              if (!std::isfinite(d.atoms[i].x) || d.atoms[i].x == 0.0)
                throw ValidationError("atom location must be finite and nonzero", at + "/x");
              if (!finite_positive(d.atoms[i].lambda))
                throw ValidationError("atom intensity must be positive", at + "/lambda");
            }
          },
          [](const GenericDensity& g) {
            if (!finite_positive(g.integrability_tol))
              throw ValidationError("integrability_tol must be positive", "integrability_tol");
            if (!g.h) {
              if (g.terms.empty()) throw ValidationError("generic density needs terms or a callable", "terms");
              for (std::size_t i = 0; i < g.terms.size(); ++i) {
                const std::string at = "terms/" + std::to_string(i);
                const DensityTerm& t = g.terms[i];
                if (!(std::isfinite(t.b) && t.b >= 0.0)) throw ValidationError("b must be nonnegative", at + "/b");
                if (!(t.beta >= 0.0 && t.beta < 2.0)) throw ValidationError("beta must lie in [0,2)", at + "/beta");
                if (!(std::isfinite(t.lambda) && t.lambda >= 0.0))
                  throw ValidationError("lambda must be nonnegative", at + "/lambda");
              }
            }
            const LevyMeasure copy = g;
            const MomentValue second = small_jump_shells(copy, 2.0, 1.0);
            const double tail = tail_mass_shells(copy, 1.0);
            if (!second.finite || !std::isfinite(tail))
              throw ValidationError("int (x^2 ^ 1) nu(dx) is not finite", "h");
            if (second.abs_error > g.integrability_tol * (1.0 + second.value + tail))
              throw ValidationError("integrability of (x^2 ^ 1) not resolved within integrability_tol", "h");
          }},
      m);
}

double levy_density(const LevyMeasure& m, double x) {
  const double ax = std::abs(x);
  if (ax == 0.0) return kInf;
  return std::visit(
      overloaded{[&](const SymmetricStable& s) { return s.b * std::pow(ax, -1.0 - s.beta); },
                 [&](const LogDampedStable& s) {
                   const double l = std::log(ax);
                   return s.b / (std::pow(ax, 1.0 + s.beta) * (l * l + 1.0));
                 },
                 [&](const FiniteDiscrete&) { return 0.0; },
                 [&](const GenericDensity& g) {
                   if (g.h) return g.h(x);
                   double v = 0.0;
                   for (const DensityTerm& t : g.terms) v += t.b * std::pow(ax, -1.0 - t.beta) * std::exp(-t.lambda * ax);
                   return v;
                 }},
      m);
}

MomentValue moment(const LevyMeasure& m, double xi) { return moment_impl(m, xi, true); }

MomentValue moment_quadrature(const LevyMeasure& m, double xi) { return moment_impl(m, xi, false); }

MomentValue small_jump_moment(const LevyMeasure& m, double xi, double r) {
  if (!(r > 0.0)) throw ValidationError("r must be positive", "r");
  return small_jump_impl(m, xi, r, true);
}

double tail_mass(const LevyMeasure& m, double r) {
  if (!(r > 0.0)) throw ValidationError("r must be positive", "r");
  if (const auto* d = std::get_if<FiniteDiscrete>(&m)) {
    double s = 0.0;
    for (const Atom& a : d->atoms)
      if (std::abs(a.x) > r) s += a.lambda;
    return s;
  }
  if (const auto* s = std::get_if<SymmetricStable>(&m)) return 2.0 * s->b * std::pow(r, -s->beta) / s->beta;
  return tail_mass_shells(m, r);
}

BGIndex bg_index(const LevyMeasure& m) {
  if (const auto* s = std::get_if<SymmetricStable>(&m)) return {s->beta, BGIndex::Source::analytic, false, 0.0};
  if (const auto* s = std::get_if<LogDampedStable>(&m)) return {s->beta, BGIndex::Source::analytic, true, 0.0};
  if (std::holds_alternative<FiniteDiscrete>(m)) return {0.0, BGIndex::Source::analytic, true, 0.0};

  // Shell masses nu(2^{-k-1} < |x| <= 2^{-k}) behave like C 2^{k beta}.
  std::vector<double> xs;
  std::vector<double> ys;
  for (int k = 4; k < 20; ++k) {
    const double hi = -static_cast<double>(k) * kLn2;
    const double mass = log_band(m, hi - kLn2, hi, 0.0).value;
    if (mass > 0.0 && std::isfinite(mass)) {
      xs.push_back(static_cast<double>(k) * kLn2);
      ys.push_back(std::log(mass));
    }
  }
  BGIndex out;
  out.source = BGIndex::Source::estimated;
  if (xs.size() < 3) {
    out.beta = 0.0;
  } else {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - (my + slope * (xs[i] - mx));
      rss += e * e;
    }
    out.fit_residual = std::sqrt(rss / n);
    out.beta = std::clamp(slope, 0.0, 2.0);
  }
  out.boundary_moment_finite = moment(m, out.beta).finite;
  return out;
}

HartmanWintner hartman_wintner_ratio(const LevyMeasure& m, double u) {
  if (!(std::abs(u) > 1.0) || !std::isfinite(u)) throw ValidationError("|u| must exceed 1", "u");
  const double U = std::abs(u);
  HartmanWintner out;
  if (const auto* d = std::get_if<FiniteDiscrete>(&m)) {
    for (const Atom& a : d->atoms) {
      const double s = std::sin(u * a.x);
      out.numerator += a.lambda * s * s;
    }
    out.ratio = out.numerator / std::log(U);
    return out;
  }
  const double pi = std::numbers::pi;
  const double pre = prefactor(m);
  auto g = [&](double x) { return pre * std::exp(log_density_sum(m, std::log(x))); };

  // v = U x. Near v = 0, sin^2 v = v^2 - v^4/3 + O(v^6).
  const double v0 = 1e-3;
  double num = U * U * small_jump_moment(m, 2.0, v0 / U).value -
               U * U * U * U / 3.0 * small_jump_moment(m, 4.0, v0 / U).value;

  // [v0, pi] in log v.
  num += quad::integrate(
             [&](double w) {
               const double v = std::exp(w);
               const double s = std::sin(v);
               return s * s * g(v / U) / U * v;
             },
             std::log(v0), std::log(pi), 1e-13, 12)
             .value;

  const long n_half = static_cast<long>(std::min(std::ceil(U), 1e5));
  for (long k = 1; k < n_half; ++k) {
    num += quad::gauss_fixed(
        [&](double v) {
          const double s = std::sin(v);
          return s * s * g(v / U) / U;
        },
        static_cast<double>(k) * pi, static_cast<double>(k + 1) * pi, 24);
  }
  // Remainder over |x| > X0: sin^2 = (1 - cos 2Ux)/2.
  const double x0 = static_cast<double>(n_half) * pi / U;
  const double tail = tail_mass(m, x0);
  const quad::Result osc = quad::oscillatory_tail(g, 2.0 * U, 0.0, x0, 1e-12);
  out.remainder = 0.5 * tail - 0.5 * osc.value;
  out.remainder_bound = tail;
  out.half_periods = n_half;
  out.numerator = num + out.remainder;
  out.ratio = out.numerator / std::log(U);
  return out;
}

namespace {

// int_0^inf (1 - cos v) v^{-1-beta} dv.
double one_minus_cos_integral(double beta) {
  // [0,1]: termwise integration of 1 - cos v = sum (-1)^{k+1} v^{2k}/(2k)!.
  double head = 0.0;
  double fact = 1.0;
  for (int k = 1; k < 20; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double term = 1.0 / (fact * (2.0 * k - beta));
    head += (k % 2 == 1) ? term : -term;
  }
  // [1,inf): 1/beta minus the oscillatory cosine part.
  const quad::Result osc =
      quad::oscillatory_tail([beta](double v) { return std::pow(v, -1.0 - beta); }, 1.0, 0.0, 1.0, 1e-14);
  return head + 1.0 / beta - osc.value;
}

void check_stable_pair(double scale, double beta, const char* name) {
  if (!finite_positive(scale)) throw ValidationError("must be positive", name);
  if (!(beta > 0.0 && beta < 2.0)) throw ValidationError("beta must lie in (0,2)", "beta");
}

}  // namespace

double nu_to_char_scale(double b, double beta) {
  check_stable_pair(b, beta, "b");
  return 2.0 * b * one_minus_cos_integral(beta);
}

double char_scale_to_nu(double c, double beta) {
  check_stable_pair(c, beta, "c");
  return c / (2.0 * one_minus_cos_integral(beta));
}

}  // namespace levylab
