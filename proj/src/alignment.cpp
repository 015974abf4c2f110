#include "catlab/alignment.hpp"

#include <cmath>
#include <stdexcept>

#include "catlab/quadrature.hpp"
#include "catlab/strategies.hpp"
#include "catlab/weights.hpp"

namespace catlab {

namespace {

// Damped pass weight as an integrand, with the analytic endpoint limits
// w(0) = 1 and w(1) = 0 so the 0/0 endpoints never get evaluated.
double pass_weight_curve(double p, int n) {
  if (n == 1) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  return w_sft(p, Strategy::pass_at(n));
}

}  // namespace

AlignmentResult alignment_coefficient(int n_train, int n_test, double abs_tol) {
  if (n_train < 1 || n_test < 1)
    throw std::invalid_argument("alignment_coefficient: budgets must be >= 1");

  const auto cross = integrate_adaptive(
      [&](double p) { return pass_weight_curve(p, n_train) * pass_weight_curve(p, n_test); },
      0.0, 1.0, abs_tol);
  const auto train_sq = integrate_adaptive(
      [&](double p) { const double w = pass_weight_curve(p, n_train); return w * w; },
      0.0, 1.0, abs_tol);
  const auto test_sq =
      n_test == n_train
          ? train_sq
          : integrate_adaptive(
                [&](double p) { const double w = pass_weight_curve(p, n_test); return w * w; },
                0.0, 1.0, abs_tol);

  AlignmentResult out;
  out.n_train = n_train;
  out.n_test = n_test;
  out.coefficient = cross.value / (std::sqrt(train_sq.value) * std::sqrt(test_sq.value));
  out.quadrature_error_estimate =
      cross.error_estimate + train_sq.error_estimate + test_sq.error_estimate;
  return out;
}

std::optional<int> crossover(int n_small, int n_large, const std::vector<int>& grid,
                             double abs_tol) {
  if (grid.empty()) throw std::invalid_argument("crossover: empty grid");
  if (!(n_small < n_large)) throw std::invalid_argument("crossover: budgets must be ordered");
  for (const int n_test : grid) {
    const double large = alignment_coefficient(n_large, n_test, abs_tol).coefficient;
    const double small = alignment_coefficient(n_small, n_test, abs_tol).coefficient;
    if (large >= small) return n_test;
  }
  return std::nullopt;
}

}  // namespace catlab
