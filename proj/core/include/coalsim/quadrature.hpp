#ifndef COALSIM_QUADRATURE_HPP
#define COALSIM_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "coalsim/errors.hpp"

namespace coalsim {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

namespace detail {

// 15-point Kronrod / 7-point Gauss pair on [-1, 1].
inline constexpr double kronrod_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kronrod_weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gauss_weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(F& f, double lo, double hi, double& value, double& error) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f_mid = f(mid);
  double kron = kronrod_weights[7] * f_mid;
  double gauss = gauss_weights[3] * f_mid;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kronrod_nodes[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    kron += kronrod_weights[i] * fsum;
    if (i % 2 == 1) gauss += gauss_weights[i / 2] * fsum;
  }
  value = kron * half;
  error = std::abs((kron - gauss) * half);
}

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [lo, hi].
/// Splits the panel with the largest error estimate until the total estimate
/// meets max(abs_tol, rel_tol * |integral|) or the panel budget is exhausted.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double lo, double hi, double rel_tol = 1e-9,
                                    double abs_tol = 0.0, int max_panels = 2000) {
  if (!(hi >= lo)) throw ArgumentError("integrate_adaptive: hi < lo");
  if (hi == lo) return {0.0, 0.0, 0};

  std::priority_queue<detail::Panel> queue;
  detail::Panel root{lo, hi, 0.0, 0.0};
  detail::gk15(f, lo, hi, root.value, root.error);
  queue.push(root);
  double total_value = root.value;
  double total_error = root.error;
  int panels = 1;

  while (panels < max_panels) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total_value));
    if (total_error <= tol) break;
    detail::Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      // panel no longer splittable in double precision
      queue.push(worst);
      break;
    }
    detail::Panel left{worst.lo, mid, 0.0, 0.0};
    detail::Panel right{mid, worst.hi, 0.0, 0.0};
    detail::gk15(f, left.lo, left.hi, left.value, left.error);
    detail::gk15(f, right.lo, right.hi, right.value, right.error);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  return {total_value, total_error, panels};
}

/// Adaptive integration over consecutive intervals [cuts[0], cuts[1]], ...
template <class F>
double integrate_with_breakpoints(F&& f, std::span<const double> cuts, double rel_tol = 1e-9,
                                  double abs_tol = 0.0) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate_adaptive(f, cuts[i], cuts[i + 1], rel_tol, abs_tol).value;
  }
  return total;
}

}  // namespace coalsim

#endif  // COALSIM_QUADRATURE_HPP
