#include "levylab/function_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "levylab/error.hpp"
#include "levylab/kernels.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> ciesielski_weights(const Ciesielski& c) {
  std::vector<double> w;
  for (int n = c.ell; n <= c.last_term(); ++n) w.push_back(std::exp2(-c.alpha * n));
  return w;
}

double mixture_eval(const NBVMixture& m, double x) {
  double v = 0.0;
  for (const WeightedAtom& a : m.atoms)
    if (a.u <= x) v += a.w;
  for (const DensityPiece& p : m.pieces) v += p.density * std::clamp(x - p.lo, 0.0, p.hi - p.lo);
  return v;
}

// Antiderivative of g_t, zero for z <= 0.
double smoothing_primitive(double theta, double t, double z) {
  if (z <= 0.0) return 0.0;
  const double a = 1.0 / (2.0 * theta);
  const double T = std::pow(t, 2.0 * theta);
  if (z < T) return std::pow(z, a + 1.0) / ((a + 1.0) * t);
  return T / (a + 1.0) + (z - T);
}

double smoothed_eval(const SmoothedIndicator& s, double x) {
  double v = 0.0;
  for (const WeightedAtom& a : s.mixture.atoms) v += a.w * smoothing_kernel(s.theta, s.t, x - a.u);
  for (const DensityPiece& p : s.mixture.pieces)
    v += p.density * (smoothing_primitive(s.theta, s.t, x - p.lo) - smoothing_primitive(s.theta, s.t, x - p.hi));
  return v;
}

std::vector<double> mixture_breakpoints(const NBVMixture& m) {
  std::vector<double> b;
  for (const WeightedAtom& a : m.atoms) b.push_back(a.u);
  for (const DensityPiece& p : m.pieces) {
    b.push_back(p.lo);
    b.push_back(p.hi);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// Points where f fails to be smooth.
std::vector<double> feature_points(const FunctionSpec& f) {
  return std::visit(overloaded{[](const Indicator& i) { return std::vector<double>{i.K}; },
                               [](const NBVMixture& m) { return mixture_breakpoints(m); },
                               [](const PowerCap&) { return std::vector<double>{-1.0, 0.0, 1.0}; },
                               [](const SmoothedIndicator& s) {
                                 std::vector<double> b = mixture_breakpoints(s.mixture);
                                 const double T = std::pow(s.t, 2.0 * s.theta);
                                 const std::size_t n = b.size();
                                 for (std::size_t i = 0; i < n; ++i) b.push_back(b[i] + T);
                                 std::sort(b.begin(), b.end());
                                 return b;
                               },
                               [](const auto&) { return std::vector<double>{}; }},
                    f);
}

// Window [lo, hi] containing the interesting part of f for grid estimates.
std::pair<double, double> feature_window(const FunctionSpec& f) {
  const std::vector<double> pts = feature_points(f);
  if (pts.empty()) return {-8.0, 8.0};
  return {pts.front() - 1.0, pts.back() + 1.0};
}

struct GridStats {
  double sup = 0.0;
  double seminorm = 0.0;
  double variation = 0.0;
  double step = 0.0;
};

GridStats grid_stats(const FunctionSpec& f, double lo, double hi, std::optional<double> alpha, bool periodic) {
  constexpr std::size_t n = 4096;
  GridStats g;
  g.step = (hi - lo) / static_cast<double>(n);
  std::vector<double> x(n + 1);
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) x[i] = lo + g.step * static_cast<double>(i);
  eval_batch(f, x.data(), v.data(), n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    g.sup = std::max(g.sup, std::abs(v[i]));
    if (i > 0) g.variation += std::abs(v[i] - v[i - 1]);
  }
  if (alpha) {
    const std::size_t max_lag = periodic ? n / 2 : n;
    for (std::size_t k = 1; k <= max_lag; ++k) {
      const double denom = std::pow(g.step * static_cast<double>(k), *alpha);
      double worst = 0.0;
      const std::size_t count = periodic ? n : n + 1 - k;
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = periodic ? (i + k) % n : i + k;
        worst = std::max(worst, std::abs(v[j] - v[i]));
      }
      g.seminorm = std::max(g.seminorm, worst / denom);
    }
  }
  return g;
}

NormValue exact(double v) { return {v, v, NormValue::Method::exact, 0.0}; }

NormValue grid(double lower, double upper, double step) {
  return {lower, upper, NormValue::Method::grid_estimate, step};
}

double mixture_sup(const NBVMixture& m) {
  double s = 0.0;
  for (double b : mixture_breakpoints(m)) {
    double jump = 0.0;
    for (const WeightedAtom& a : m.atoms)
      if (a.u == b) jump += a.w;
    const double right = mixture_eval(m, b);
    s = std::max({s, std::abs(right), std::abs(right - jump)});
  }
  return s;
}

// phi(s) = int_0^1 (d(z+s, Z) - d(z, Z))^2 dz for the unit triangle wave.
double triangle_energy(double s) {
  s -= std::floor(s);
  if (s > 0.5) s = 1.0 - s;
  return s * s - 4.0 / 3.0 * s * s * s;
}

}  // namespace

int Ciesielski::last_term() const {
  return truncation >= 0 ? truncation : ell + static_cast<int>(std::ceil(52.0 / alpha));
}

double NBVMixture::total_variation() const {
  double v = 0.0;
  for (const WeightedAtom& a : atoms) v += std::abs(a.w);
  for (const DensityPiece& p : pieces) v += std::abs(p.density) * (p.hi - p.lo);
  return v;
}

std::string variant_name(const FunctionSpec& f) {
  return std::visit(overloaded{[](const Ciesielski&) { return std::string("ciesielski"); },
                               [](const Indicator&) { return std::string("indicator"); },
                               [](const NBVMixture&) { return std::string("nbv_mixture"); },
                               [](const PowerCap&) { return std::string("power_cap"); },
                               [](const SmoothedIndicator&) { return std::string("smoothed_indicator"); },
                               [](const Constant&) { return std::string("constant"); },
                               [](const Custom& c) { return c.name; }},
                    f);
}

namespace {

void validate_mixture(const NBVMixture& m, const std::string& prefix) {
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    if (!std::isfinite(m.atoms[i].u)) throw ValidationError("atom location must be finite", prefix + "atoms/" + std::to_string(i) + "/u");
    if (!std::isfinite(m.atoms[i].w)) throw ValidationError("atom weight must be finite", prefix + "atoms/" + std::to_string(i) + "/w");
  }
  for (std::size_t i = 0; i < m.pieces.size(); ++i) {
    const DensityPiece& p = m.pieces[i];
    const std::string at = prefix + "pieces/" + std::to_string(i);
    if (!(std::isfinite(p.lo) && std::isfinite(p.hi) && p.lo < p.hi))
      throw ValidationError("piece needs finite lo < hi", at);
    if (!std::isfinite(p.density)) throw ValidationError("density must be finite", at + "/density");
  }
}

}  // namespace

void validate(const FunctionSpec& f) {
  std::visit(overloaded{[](const Ciesielski& c) {
                          if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)", "alpha");
                          if (c.ell < 0) throw ValidationError("ell must be nonnegative", "ell");
                          if (c.truncation >= 0 && c.truncation < c.ell)
                            throw ValidationError("truncation must be >= ell", "truncation");
                          if (c.last_term() > 1100) throw ValidationError("truncation too large", "truncation");
                        },
                        [](const Indicator& i) {
                          if (!std::isfinite(i.K)) throw ValidationError("K must be finite", "K");
                        },
                        [](const NBVMixture& m) { validate_mixture(m, ""); },
                        [](const PowerCap& p) {
                          if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)", "alpha");
                        },
                        [](const SmoothedIndicator& s) {
                          if (!(s.theta >= 0.5 && s.theta < 1.0)) throw ValidationError("theta must lie in [1/2,1)", "theta");
                          if (!(s.t > 0.0 && s.t < 1.0)) throw ValidationError("t must lie in (0,1)", "t");
                          validate_mixture(s.mixture, "mixture/");
                        },
                        [](const Constant& c) {
                          if (!std::isfinite(c.value)) throw ValidationError("value must be finite", "value");
                        },
                        [](const Custom& c) {
                          if (!c.f) throw ValidationError("custom function has no evaluator", "f");
                        }},
             f);
}

double eval(const FunctionSpec& f, double x) {
  double out = 0.0;
  if (const auto* c = std::get_if<Ciesielski>(&f)) {
    const std::vector<double> w = ciesielski_weights(*c);
    kernels::scalar_table().ciesielski({c->ell, c->last_term(), w.data()}, &x, &out, 1);
    return out;
  }
  return std::visit(overloaded{[](const Ciesielski&) { return 0.0; },
                               [x](const Indicator& i) { return x >= i.K ? 1.0 : 0.0; },
                               [x](const NBVMixture& m) { return mixture_eval(m, x); },
                               [x](const PowerCap& p) { return std::min(std::pow(std::abs(x), p.alpha), 1.0); },
                               [x](const SmoothedIndicator& s) { return smoothed_eval(s, x); },
                               [](const Constant& c) { return c.value; },
                               [x](const Custom& c) { return c.f(x); }},
                    f);
}

void eval_batch(const FunctionSpec& f, const double* x, double* out, std::size_t n) {
  if (const auto* c = std::get_if<Ciesielski>(&f)) {
    const std::vector<double> w = ciesielski_weights(*c);
    kernels::active().ciesielski({c->ell, c->last_term(), w.data()}, x, out, n);
    return;
  }
  if (const auto* i = std::get_if<Indicator>(&f)) {
    kernels::active().indicator(i->K, x, out, n);
    return;
  }
  for (std::size_t k = 0; k < n; ++k) out[k] = eval(f, x[k]);
}

double holder_constant_bound(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)", "alpha");
  return 1.0 / ((std::exp2(1.0 - alpha) - 1.0) * (1.0 - std::exp2(-alpha)));
}

double ciesielski_tail_bound(const Ciesielski& c) {
  return std::exp2(-c.alpha * c.last_term()) / (2.0 * (std::exp2(c.alpha) - 1.0));
}

std::string method_name(NormValue::Method m) {
  switch (m) {
    case NormValue::Method::exact: return "exact";
    case NormValue::Method::grid_estimate: return "grid-estimate";
    case NormValue::Method::bound: return "bound";
  }
  return "unknown";
}

NormReport norms(const FunctionSpec& f, std::optional<double> alpha) {
  validate(f);
  if (alpha && !(*alpha > 0.0 && *alpha <= 1.0)) throw ValidationError("alpha must lie in (0,1]", "alpha");
  NormReport r;
  r.alpha = alpha;
  std::visit(
      overloaded{
          [&](const Ciesielski& c) {
            const double period = std::exp2(-c.ell);
            const GridStats g = grid_stats(f, 0.0, period, alpha, true);
            double geometric = 0.0;
            for (int n = c.ell; n <= c.last_term(); ++n) geometric += 0.5 * std::exp2(-c.alpha * n);
            r.sup_norm = grid(g.sup, geometric, g.step);
            if (alpha) {
              const double up = (*alpha == c.alpha) ? holder_constant_bound(c.alpha) : kInf;
              r.holder_seminorm = grid(g.seminorm, up, g.step);
            }
            r.bv_norm = {kInf, kInf, NormValue::Method::bound, 0.0};
          },
          [&](const Indicator&) {
            r.sup_norm = exact(1.0);
            if (alpha) r.holder_seminorm = exact(kInf);
            r.bv_norm = exact(1.0);
          },
          [&](const NBVMixture& m) {
            r.sup_norm = exact(mixture_sup(m));
            r.bv_norm = exact(m.total_variation());
            if (alpha) {
              bool jumps = false;
              for (const WeightedAtom& a : m.atoms) jumps = jumps || a.w != 0.0;
              if (jumps) {
                r.holder_seminorm = exact(kInf);
              } else {
                const auto [lo, hi] = feature_window(f);
                const GridStats g = grid_stats(f, lo, hi, alpha, false);
                r.holder_seminorm = grid(g.seminorm, kInf, g.step);
              }
            }
          },
          [&](const PowerCap& p) {
            r.sup_norm = exact(1.0);
            r.bv_norm = exact(2.0);  // total variation; f(-inf) = 1, so not normalized
            if (alpha) {
              if (*alpha == p.alpha) {
                r.holder_seminorm = exact(1.0);
              } else {
                const GridStats g = grid_stats(f, -2.0, 2.0, alpha, false);
                r.holder_seminorm = grid(g.seminorm, *alpha < p.alpha ? 1.0 : kInf, g.step);
              }
            }
          },
          [&](const SmoothedIndicator& s) {
            const double mass = s.mixture.total_variation();
            const auto [lo, hi] = feature_window(f);
            const GridStats g = grid_stats(f, lo, hi, alpha, false);
            r.sup_norm = grid(g.sup, mass, g.step);
            r.bv_norm = grid(g.variation, mass, g.step);
            if (alpha) {
              const double up = (*alpha == 1.0 / (2.0 * s.theta)) ? mass / s.t : kInf;
              r.holder_seminorm = grid(g.seminorm, up, g.step);
            }
          },
          [&](const Constant& c) {
            r.sup_norm = exact(std::abs(c.value));
            r.bv_norm = exact(std::abs(c.value));  // one atom at -inf
            if (alpha) r.holder_seminorm = exact(0.0);
          },
          [&](const Custom& c) {
            const GridStats g = grid_stats(f, -8.0, 8.0, alpha, false);
            r.sup_norm = grid(g.sup, c.sup_bound.value_or(kInf), g.step);
            r.bv_norm = grid(g.variation, kInf, g.step);
            if (alpha) r.holder_seminorm = grid(g.seminorm, kInf, g.step);
          }},
      f);
  return r;
}

std::optional<HolderCertificate> holder_certificate(const FunctionSpec& f, std::optional<double> alpha) {
  return std::visit(
      overloaded{
          [&](const Ciesielski& c) -> std::optional<HolderCertificate> {
            if (alpha && *alpha != c.alpha) return std::nullopt;
            double geometric = 0.0;
            for (int n = c.ell; n <= c.last_term(); ++n) geometric += 0.5 * std::exp2(-c.alpha * n);
            return HolderCertificate{c.alpha, geometric + holder_constant_bound(c.alpha)};
          },
          [&](const PowerCap& p) -> std::optional<HolderCertificate> {
            if (alpha && *alpha > p.alpha) return std::nullopt;
            return HolderCertificate{alpha.value_or(p.alpha), 2.0};
          },
          [&](const SmoothedIndicator& s) -> std::optional<HolderCertificate> {
            const double a = 1.0 / (2.0 * s.theta);
            if (alpha && *alpha != a) return std::nullopt;
            const double mass = s.mixture.total_variation();
            return HolderCertificate{a, mass + mass / s.t};
          },
          [&](const Constant& c) -> std::optional<HolderCertificate> {
            return HolderCertificate{alpha.value_or(0.5), std::abs(c.value)};
          },
          [&](const NBVMixture& m) -> std::optional<HolderCertificate> {
            for (const WeightedAtom& a : m.atoms)
              if (a.w != 0.0) return std::nullopt;
            // Piecewise linear: |f(x)-f(y)| <= min(L|x-y|, 2 sup) <= L^a (2 sup)^{1-a} |x-y|^a.
            const double a = alpha.value_or(0.5);
            double L = 0.0;
            for (const DensityPiece& p : m.pieces) L += std::abs(p.density);
            const double sup = mixture_sup(m);
            return HolderCertificate{a, sup + std::pow(L, a) * std::pow(2.0 * sup, 1.0 - a)};
          },
          [](const auto&) -> std::optional<HolderCertificate> { return std::nullopt; }},
      f);
}

std::optional<NBVMixture> as_mixture(const FunctionSpec& f) {
  if (const auto* i = std::get_if<Indicator>(&f)) return NBVMixture{{{i->K, 1.0}}, {}};
  if (const auto* m = std::get_if<NBVMixture>(&f)) return *m;
  return std::nullopt;
}

double sup_bound(const FunctionSpec& f) {
  const NormValue s = norms(f).sup_norm;
  return std::isfinite(s.upper) ? s.upper : s.lower;
}

double displacement_energy_quadrature(const FunctionSpec& f, double a, double b, double x, double tol) {
  if (x == 0.0 || a >= b) return 0.0;
  if (std::holds_alternative<Ciesielski>(f)) {
    // Nowhere smooth: adaptive error estimates are unreliable, so use a fixed composite rule.
    std::size_t cells = std::size_t{1} << 14;
    while (cells < (std::size_t{1} << 20) && (b - a) / static_cast<double>(cells) > std::abs(x) / 16.0) cells <<= 1;
    const auto& rule = quad::gauss_legendre(4);
    const double h = (b - a) / static_cast<double>(cells);
    std::vector<double> ys(cells * 4), shifted(cells * 4), fy(cells * 4), fs(cells * 4);
    for (std::size_t c = 0; c < cells; ++c)
      for (std::size_t j = 0; j < 4; ++j) {
        ys[4 * c + j] = a + h * (static_cast<double>(c) + 0.5 * (rule.nodes[j] + 1.0));
        shifted[4 * c + j] = ys[4 * c + j] + x;
      }
    eval_batch(f, ys.data(), fy.data(), ys.size());
    eval_batch(f, shifted.data(), fs.data(), ys.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double d = fs[i] - fy[i];
      acc += 0.5 * h * rule.weights[i % 4] * d * d;
    }
    return acc;
  }
  std::vector<double> cuts{a, b};
  for (double p : feature_points(f)) {
    for (double q : {p, p - x})
      if (q > a && q < b) cuts.push_back(q);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto integrand = [&](double y) {
    const double d = eval(f, y + x) - eval(f, y);
    return d * d;
  };
  return quad::integrate_pieces(integrand, cuts, tol, 15).value;
}

double displacement_energy(const FunctionSpec& f, double a, double b, double x) {
  validate(f);
  if (!(std::isfinite(a) && std::isfinite(b) && a <= b)) throw ValidationError("interval must satisfy a <= b", "interval");
  if (x == 0.0 || a == b) return 0.0;
  if (const auto* i = std::get_if<Indicator>(&f)) {
    const double lo = std::min(i->K, i->K - x);
    const double hi = std::max(i->K, i->K - x);
    return std::max(0.0, std::min(b, hi) - std::max(a, lo));
  }
  if (const auto m = as_mixture(f)) {
    // y -> f(y+x) - f(y) is linear between the cuts; two Gauss points are exact for its square.
    std::vector<double> cuts{a, b};
    for (double p : mixture_breakpoints(*m))
      for (double q : {p, p - x})
        if (q > a && q < b) cuts.push_back(q);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double g = 1.0 / std::sqrt(3.0);
    double acc = 0.0;
    for (std::size_t k = 1; k < cuts.size(); ++k) {
      const double mid = 0.5 * (cuts[k] + cuts[k - 1]);
      const double half = 0.5 * (cuts[k] - cuts[k - 1]);
      for (double node : {mid - half * g, mid + half * g}) {
        const double d = mixture_eval(*m, node + x) - mixture_eval(*m, node);
        acc += half * d * d;
      }
    }
    return acc;
  }
  if (const auto* c = std::get_if<Ciesielski>(&f)) {
    // The terms are orthogonal over a period, and each contributes
    // 2^{-2 alpha n} phi(frac(2^n x)) per unit length.
    const double period = std::exp2(-c->ell);
    const double whole = std::floor((b - a) / period);
    double per_unit = 0.0;
    for (int n = c->ell; n <= c->last_term(); ++n) {
      const double y = std::ldexp(x, n);
      if (!(std::abs(y) < 0x1p52)) break;
      per_unit += std::exp2(-2.0 * c->alpha * n) * triangle_energy(y);
    }
    double energy = whole * period * per_unit;
    const double rest = a + whole * period;
    if (rest < b) energy += displacement_energy_quadrature(f, rest, b, x, 1e-10);
    return energy;
  }
  return displacement_energy_quadrature(f, a, b, x);
}

double smoothing_kernel(double theta, double t, double z) {
  if (z <= 0.0) return 0.0;
  const double T = std::pow(t, 2.0 * theta);
  if (z >= T) return 1.0;
  return std::pow(z, 1.0 / (2.0 * theta)) / t;
}

double SmoothingDecomposition::energy_bound(double x) const {
  const double theta = f_t.theta;
  return 2.0 * std::pow(f_t.t, 2.0 * (theta - 1.0)) * std::pow(std::abs(x), 1.0 / theta);
}

double SmoothingDecomposition::difference_support(double x) const { return support_length + std::abs(x); }

SmoothingDecomposition smoothing_decomposition(const NBVMixture& mixture, double theta, double t) {
  SmoothedIndicator s{theta, t, mixture};
  validate(FunctionSpec{s});
  SmoothingDecomposition d;
  d.f_t = s;
  d.support_length = std::pow(t, 2.0 * theta);
  d.holder_alpha = 1.0 / (2.0 * theta);
  d.holder_seminorm = mixture.total_variation() / t;
  return d;
}

}  // namespace levylab
