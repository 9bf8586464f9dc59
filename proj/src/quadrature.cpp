#include "levylab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace levylab::quad {

Result integrate(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth) {
  if (a == b) return {};
  double err = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, max_depth, rel_tol, &err, &l1);
  return {v, err * std::max(l1, std::abs(v))};
}

Result integrate_pieces(const Integrand& f, std::span<const double> breakpoints, double rel_tol,
                        unsigned max_depth) {
  Result total;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const Result r = integrate(f, breakpoints[i - 1], breakpoints[i], rel_tol, max_depth);
    total.value += r.value;
    total.abs_error += r.abs_error;
  }
  return total;
}

namespace {

GaussRule build_rule(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t n) {
  static std::mutex m;
  static std::map<std::size_t, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(build_rule(n));
  return *slot;
}

double gauss_fixed(const Integrand& f, double a, double b, std::size_t n) {
  const GaussRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

Result wynn_epsilon(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n == 0) return {};
  if (n < 3) return {s[n - 1], n == 2 ? std::abs(s[1] - s[0]) : std::numeric_limits<double>::infinity()};
  std::vector<double> prev(n + 1, 0.0);  // column k-1
  std::vector<double> cur(s.begin(), s.end());  // column k
  double best = s[n - 1];
  double best_err = std::abs(s[n - 1] - s[n - 2]);
  double last_even = s[n - 1];
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t len = n - k;
    std::vector<double> next(len);
    bool broke = false;
    for (std::size_t i = 0; i < len; ++i) {
      const double diff = cur[i + 1] - cur[i];
      if (diff == 0.0 || !std::isfinite(diff)) {
        broke = true;
        break;
      }
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    if (broke) break;
    if (k % 2 == 0) {
      const double cand = next[len - 1];
      const double err = len >= 2 ? std::abs(next[len - 1] - next[len - 2]) + std::abs(cand - last_even)
                                  : std::abs(cand - last_even);
      if (err < best_err) {
        best = cand;
        best_err = err;
      }
      last_even = cand;
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {best, best_err};
}

Result oscillatory_tail(const Integrand& g, double omega, double phase, double a, double rel_tol) {
  const double pi = std::numbers::pi;
  auto zero = [&](double k) { return ((k + 0.5) * pi - phase) / omega; };
  double k = std::ceil((omega * a + phase) / pi - 0.5);
  if (zero(k) <= a) k += 1.0;
  auto piece = [&](double lo, double hi) {
    return gauss_fixed([&](double x) { return g(x) * std::cos(omega * x + phase); }, lo, hi, 32);
  };
  std::vector<double> sums;
  double acc = piece(a, zero(k));
  sums.push_back(acc);
  Result best{acc, std::numeric_limits<double>::infinity()};
  for (int j = 0; j < 400; ++j) {
    acc += piece(zero(k + j), zero(k + j + 1));
    sums.push_back(acc);
    if (sums.size() >= 12 && sums.size() % 4 == 0) {
      const std::size_t window = std::min<std::size_t>(sums.size(), 40);
      const Result r = wynn_epsilon(std::span<const double>(sums).last(window));
      if (r.abs_error < best.abs_error) best = r;
      if (best.abs_error <= rel_tol * std::abs(best.value) || best.abs_error < 1e-300) break;
    }
  }
  return best;
}

ShellSum sum_shells(const std::function<double(std::size_t)>& shell, const ShellOptions& opts) {
  ShellSum out;
  double sum = 0.0;
  double prev_shell = -1.0;
  double checkpoint_sum = -1.0;
  int growth_run = 0;
  std::size_t next_checkpoint = std::max<std::size_t>(opts.first_checkpoint, 1);
  double tail = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  for (; k < opts.max_shells; ++k) {
    const double c = shell(k);
    if (!(c >= 0.0) || !std::isfinite(c) || !std::isfinite(sum + c)) {
      out.value = std::numeric_limits<double>::infinity();
      out.finite = false;
      out.shells = k + 1;
      return out;
    }
    sum += c;
    if (sum > opts.ceiling) {
      out.value = std::numeric_limits<double>::infinity();
      out.finite = false;
      out.shells = k + 1;
      return out;
    }
    if (k + 1 == next_checkpoint) {
      if (checkpoint_sum > 0.0) {
        growth_run = (sum - checkpoint_sum >= opts.growth_threshold * checkpoint_sum) ? growth_run + 1 : 0;
        if (growth_run >= 3) {
          out.value = std::numeric_limits<double>::infinity();
          out.finite = false;
          out.shells = k + 1;
          return out;
        }
      }
      checkpoint_sum = sum;
      next_checkpoint *= 2;
    }
    if (prev_shell >= 0.0) {
      if (c == 0.0 && prev_shell == 0.0) {
        tail = 0.0;
      } else if (prev_shell > 0.0 && c < prev_shell) {
        const double r = c / prev_shell;
        tail = r < 0.999 ? c * r / (1.0 - r) : c * 1000.0;
      } else {
        tail = std::numeric_limits<double>::infinity();
      }
    }
    prev_shell = c;
    if (k + 1 >= opts.min_shells && tail <= opts.rel_tol * sum) {
      out.converged = true;
      ++k;
      break;
    }
  }
  out.value = sum;
  out.finite = true;
  out.shells = k;
  out.abs_error = std::isfinite(tail) ? tail : sum;
  return out;
}

}  // namespace levylab::quad
