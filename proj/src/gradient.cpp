#include "catlab/gradient.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "catlab/errors.hpp"
#include "catlab/parallel.hpp"

namespace catlab {

namespace {

Vector all_forced_sensitivities(const Categorical& dist, const TaskSpec& task, const Strategy& s) {
  Vector sens(dist.size());
  for (Index y = 0; y < dist.size(); ++y)
    sens[y] = forced_vote_sensitivity(dist, task, s, y);
  return sens;
}

// Monte Carlo estimate of n * P(target wins plurality | one draw forced).
double mc_forced_sensitivity_maj(const Categorical& dist, int correct, int n, Index forced,
                                 int samples, Rng rng) {
  const Index k = dist.size();
  std::vector<int> counts(k, 0);
  long wins = 0;
  for (int t = 0; t < samples; ++t) {
    std::fill(counts.begin(), counts.end(), 0);
    counts[forced] = 1;
    for (int d = 0; d < n - 1; ++d) counts[sample_one(dist, rng)] += 1;
    const int c = counts[correct];
    bool win = c >= 1;
    for (Index j = 0; win && j < k; ++j)
      if (j != correct && counts[j] >= c) win = false;
    if (win) ++wins;
  }
  return n * static_cast<double>(wins) / samples;
}

int dynamic_plurality_threshold(const Categorical& dist, int correct, int n) {
  double strongest = 0.0;
  for (Index j = 0; j < dist.size(); ++j)
    if (j != correct) strongest = std::max(strongest, dist.prob(j));
  const int k = static_cast<int>(std::floor(n * strongest)) + 1;
  return std::max(1, std::min(n, k));
}

double rival_correction(const Categorical& dist, int correct, const Vector& sens) {
  const double p = dist.prob(correct);
  if (p >= 1.0) return 0.0;
  double acc = 0.0;
  for (Index j = 0; j < dist.size(); ++j)
    if (j != correct) acc += dist.prob(j) * sens[j];
  return acc / (1.0 - p);
}

}  // namespace

Vector exact_cat_gradient(const SoftmaxPolicy& policy, const TaskSpec& task, const Strategy& s) {
  const Categorical dist = policy.induced();
  const double win = effective_win_prob_exact(dist, task, s);
  if (win <= 0.0) throw singularity_error("exact_cat_gradient: win probability is zero");
  const Vector sens = all_forced_sensitivities(dist, task, s);
  const double mean_sens = dist.probs().dot(sens);  // equals n * win by homogeneity
  Vector grad(dist.size());
  for (Index j = 0; j < dist.size(); ++j)
    grad[j] = -(dist.prob(j) / win) * (sens[j] - mean_sens);
  return grad;
}

Vector diagonal_cat_gradient(const SoftmaxPolicy& policy, const TaskSpec& task,
                             const Strategy& s, const WeightConfig& config) {
  const Categorical dist = policy.induced();
  if (task.target < 0 || task.target >= dist.size())
    throw std::invalid_argument("diagonal_cat_gradient: target outside support");
  const Strategy collapsed = s.kind == StrategyKind::Bon ? Strategy::pass_at(s.n) : s;
  const double w = w_sft(dist.prob(task.target), collapsed, config);
  Vector grad = dist.probs();
  grad[task.target] -= 1.0;
  return w * grad;
}

double total_derivative_decay(const Categorical& dist, const TaskSpec& task,
                              const Strategy& s, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("total_derivative_decay: delta must be positive");
  const Categorical up = proportional_decay_shift(dist, task.target, delta);
  const Categorical down = proportional_decay_shift(dist, task.target, -delta);
  const double hi = effective_win_prob_exact(up, task, s);
  const double lo = effective_win_prob_exact(down, task, s);
  return (hi - lo) / (2.0 * delta);
}

RhoReport rho_majority(const Categorical& dist, int correct, int n, int samples, RngSeed seed) {
  if (correct < 0 || correct >= dist.size())
    throw std::invalid_argument("rho_majority: correct index outside support");
  const TaskSpec task = TaskSpec::correct_answer(correct);
  const Strategy game = Strategy::majority(n, 1);  // k unused by the plurality oracle
  Vector sens(dist.size());
  if (samples <= 0) {
    sens = all_forced_sensitivities(dist, task, game);
  } else {
    if (samples < 1000)
      throw std::invalid_argument("rho_majority: Monte Carlo path needs samples >= 1000");
    const Rng root{seed};
    std::vector<double> out(dist.size(), 0.0);
    run_chunks(static_cast<int>(dist.size()), [&](int y) {
      out[y] = mc_forced_sensitivity_maj(dist, correct, n, y, samples,
                                         root.split(static_cast<std::uint64_t>(y)));
    });
    for (Index y = 0; y < dist.size(); ++y) sens[y] = out[y];
  }

  RhoReport report;
  report.convention = RhoConvention::CompetitivePlus;
  report.diag_sensitivity = sens[correct];
  report.rivalry_correction = rival_correction(dist, correct, sens);
  report.collapsed_k = dynamic_plurality_threshold(dist, correct, n);
  report.collapsed_diag = w_rl(dist.prob(correct), Strategy::majority(n, report.collapsed_k));
  const double denom = report.diag_sensitivity + report.rivalry_correction;
  report.rho = denom > 0.0 ? report.diag_sensitivity / denom : 1.0;
  return report;
}

RhoReport rho_bon(const Categorical& dist, const Vector& rewards, int target, int n,
                  int samples, RngSeed seed) {
  if (target < 0 || target >= dist.size())
    throw std::invalid_argument("rho_bon: target outside support");
  if (rewards.size() != dist.size())
    throw std::invalid_argument("rho_bon: rewards not aligned with support");

  // samples > 0 replaces the true masses with the empirical masses of a
  // sampled rollout batch; the sensitivities themselves stay closed-form.
  Categorical work = dist;
  if (samples > 0) {
    if (samples < 1000) throw std::invalid_argument("rho_bon: batch path needs samples >= 1000");
    Vector counts = Vector::Zero(dist.size());
    Rng rng{seed};
    for (int t = 0; t < samples; ++t) counts[sample_one(dist, rng)] += 1.0;
    work = Categorical(counts / samples);
  }

  const TaskSpec task = TaskSpec::scored(rewards, target);
  const Strategy s = Strategy::best_of(n);
  Vector sens = all_forced_sensitivities(work, task, s);

  double below = 0.0;
  for (Index i = 0; i < work.size(); ++i)
    if (rewards[i] < rewards[target]) below += work.prob(i);

  RhoReport report;
  report.convention = RhoConvention::UncompetitiveMinus;
  report.diag_sensitivity = n * std::pow(below, n - 1);
  report.rivalry_correction = rival_correction(work, target, sens);
  const double denom = report.diag_sensitivity - report.rivalry_correction;
  if (dist.size() == 1) {
    report.rho = 1.0;
  } else if (denom <= 0.0) {
    report.degenerate = true;
    report.rho = std::numeric_limits<double>::infinity();
  } else {
    report.rho = report.diag_sensitivity / denom;
  }
  return report;
}

DescentCheck descent_alignment(const SoftmaxPolicy& policy, const TaskSpec& task,
                               const Strategy& s, const WeightConfig& config,
                               double tolerance) {
  DescentCheck check;
  GradientReport& r = check.report;
  r.exact = exact_cat_gradient(policy, task, s);
  r.diagonal = diagonal_cat_gradient(policy, task, s, config);
  r.off_diagonal_error = r.exact - r.diagonal;
  r.inner_product = r.diagonal.dot(r.off_diagonal_error);
  r.exact_norm = r.exact.norm();
  r.diagonal_norm = r.diagonal.norm();
  r.error_norm = r.off_diagonal_error.norm();
  check.inner_product = r.inner_product;
  check.bound_satisfied =
      r.inner_product >= -tolerance && r.error_norm <= r.diagonal_norm + tolerance;
  return check;
}

PluralityBoundSample plurality_bound_sample(const Categorical& dist, int correct, int n) {
  const TaskSpec task = TaskSpec::correct_answer(correct);
  const Strategy game = Strategy::majority(n, 1);
  const Vector sens = all_forced_sensitivities(dist, task, game);

  PluralityBoundSample out;
  out.direct_sensitivity = sens[correct];
  out.correction = rival_correction(dist, correct, sens);
  out.total_derivative = out.direct_sensitivity - out.correction;
  out.collapsed_k = dynamic_plurality_threshold(dist, correct, n);
  out.collapsed_derivative = w_rl(dist.prob(correct), Strategy::majority(n, out.collapsed_k));
  out.forced_bound_ok = out.correction <= out.direct_sensitivity + 1e-12;
  const double d = out.collapsed_derivative;
  out.collapsed_bound_ok = out.total_derivative >= d - 1e-12 &&
                           out.total_derivative <= 2.0 * d + 1e-12;
  return out;
}

}  // namespace catlab
