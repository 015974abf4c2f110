#ifndef CATLAB_QUADRATURE_HPP
#define CATLAB_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>

namespace catlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

namespace detail {

template <typename F>
void adapt_simpson(F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth, QuadratureResult& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  out.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = (left + right - whole) / 15.0;
  if (depth <= 0 || std::abs(err) <= tol) {
    out.value += left + right + err;
    out.error_estimate += std::abs(err);
    return;
  }
  adapt_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
  adapt_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b] to the given absolute
/// tolerance. f must be finite on [a, b] (supply limit values at endpoints).
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                    int max_depth = 48) {
  if (!(b >= a)) throw std::invalid_argument("integrate_adaptive: bad interval");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tolerance must be positive");
  QuadratureResult out;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  out.evaluations = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::adapt_simpson(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, out);
  return out;
}

}  // namespace catlab

#endif
