#ifndef CATLAB_ALIGNMENT_HPP
#define CATLAB_ALIGNMENT_HPP

#include <optional>
#include <vector>

namespace catlab {

/// Cosine similarity of two budget weight curves over p in [0, 1].
struct AlignmentResult {
  double coefficient = 0.0;
  int n_train = 1;
  int n_test = 1;
  double quadrature_error_estimate = 0.0;
};

/// Alignment of the damped pass weight curves for two budgets. The n = 1
/// curve is identically 1. Each of the three integrals is evaluated by
/// adaptive quadrature to the given absolute tolerance.
AlignmentResult alignment_coefficient(int n_train, int n_test, double abs_tol = 1e-9);

/// First grid entry where the large-budget curve aligns at least as well with
/// the test budget as the small one does. Empty when no crossover happens.
std::optional<int> crossover(int n_small, int n_large, const std::vector<int>& grid,
                             double abs_tol = 1e-9);

}  // namespace catlab

#endif
