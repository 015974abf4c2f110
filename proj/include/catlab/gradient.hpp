#ifndef CATLAB_GRADIENT_HPP
#define CATLAB_GRADIENT_HPP

#include "catlab/strategies.hpp"
#include "catlab/weights.hpp"

namespace catlab {

/// Exact logit gradient next to its scalar-weighted approximation.
struct GradientReport {
  Vector exact;
  Vector diagonal;
  Vector off_diagonal_error;  // exact - diagonal
  double inner_product = 0.0;  // <diagonal, off_diagonal_error>
  double exact_norm = 0.0;
  double diagonal_norm = 0.0;
  double error_norm = 0.0;
};

enum class RhoConvention { CompetitivePlus, UncompetitiveMinus };

/// Fraction of the total derivative captured by the direct sensitivity.
struct RhoReport {
  double diag_sensitivity = 0.0;
  double rivalry_correction = 0.0;
  double rho = 0.0;
  RhoConvention convention = RhoConvention::CompetitivePlus;
  bool degenerate = false;   // correction at or above the diagonal (minus convention)
  int collapsed_k = 0;       // dynamic threshold implied by the strongest rival
  double collapsed_diag = 0.0;  // fixed-threshold binomial derivative at collapsed_k
};

/// Gradient of -log(exact win probability) with respect to the policy logits,
/// by the chain rule through the softmax Jacobian and the forced-vote
/// sensitivities. Throws singularity_error when the win probability is 0.
Vector exact_cat_gradient(const SoftmaxPolicy& policy, const TaskSpec& task, const Strategy& s);

/// w(p) times the plain cross-entropy gradient softmax(z) - onehot(target).
/// Best-of-n is reduced to pass_at(n), matching its log-likelihood form.
Vector diagonal_cat_gradient(const SoftmaxPolicy& policy, const TaskSpec& task,
                             const Strategy& s, const WeightConfig& config = {});

/// Central finite difference of the exact win probability along the
/// proportional-decay direction toward the task target.
double total_derivative_decay(const Categorical& dist, const TaskSpec& task,
                              const Strategy& s, double delta);

/// Majority-vote efficiency: direct forced-vote sensitivity over the rival-
/// corrected total, rho = diag / (diag + correction). samples == 0 uses exact
/// enumeration for the rival sensitivities, otherwise Monte Carlo.
RhoReport rho_majority(const Categorical& dist, int correct, int n, int samples, RngSeed seed);

/// Best-of-n efficiency under the minus convention: rho = diag / (diag -
/// correction) with diag = n * P_<target^{n-1}. When the correction reaches
/// the diagonal the report is flagged degenerate and rho is +infinity.
RhoReport rho_bon(const Categorical& dist, const Vector& rewards, int target, int n,
                  int samples, RngSeed seed);

struct DescentCheck {
  GradientReport report;
  double inner_product = 0.0;
  bool bound_satisfied = false;
};

/// Builds the GradientReport and evaluates the two safety conditions:
/// <g_diag, error> >= -tolerance and ||error|| <= ||g_diag|| + tolerance.
DescentCheck descent_alignment(const SoftmaxPolicy& policy, const TaskSpec& task,
                               const Strategy& s, const WeightConfig& config = {},
                               double tolerance = 1e-9);

/// One scalar bound sample for the plurality game: the proportional-decay
/// total derivative against [d, 2d] for both the exact forced-vote diagonal
/// and the collapsed fixed-threshold one.
struct PluralityBoundSample {
  double total_derivative = 0.0;    // forced-vote combination
  double direct_sensitivity = 0.0;  // forced-vote diagonal
  double correction = 0.0;
  double collapsed_derivative = 0.0;
  int collapsed_k = 0;
  bool forced_bound_ok = false;     // correction <= direct sensitivity
  bool collapsed_bound_ok = false;  // total in [collapsed, 2*collapsed]
};

PluralityBoundSample plurality_bound_sample(const Categorical& dist, int correct, int n);

}  // namespace catlab

#endif
