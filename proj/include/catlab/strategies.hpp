#ifndef CATLAB_STRATEGIES_HPP
#define CATLAB_STRATEGIES_HPP

#include <cstdint>

#include "catlab/distributions.hpp"

namespace catlab {

enum class StrategyKind { Pass, Maj, Bon };

/// A test-time sampling strategy with its budget hyperparameters.
struct Strategy {
  StrategyKind kind = StrategyKind::Pass;
  int n = 1;  // sample budget
  int k = 1;  // consensus threshold, Maj only

  static Strategy pass_at(int n);
  static Strategy majority(int n, int k);
  /// k derived from a consensus fraction: k = max(2, min(n, ceil(n*f))).
  static Strategy majority_fraction(int n, double f);
  static Strategy best_of(int n);
};

/// What counts as the right answer: an outcome index for binary-reward
/// strategies, plus a reward vector over the support for best-of-n.
struct TaskSpec {
  int target = 0;
  Vector rewards;  // empty unless best-of-n

  bool has_rewards() const { return rewards.size() > 0; }

  static TaskSpec correct_answer(int index);
  static TaskSpec scored(Vector rewards, int target);
};

struct StrategyClass {
  bool orthogonal = false;
  bool competitive = false;
  bool adversarially_symmetric = false;
};

StrategyClass classify(const Strategy& s);

/// Collapsed success probability as a function of the target probability alone.
/// Pass: 1-(1-p)^n. Maj: binomial tail at threshold k. Best-of-n has no
/// p-only form and throws unsupported_strategy (use bon_win_prob).
double effective_success_prob(double p, const Strategy& s);

/// Number of outcome-count configurations the oracle enumerates, C(n+k-1, k-1).
std::uint64_t enumeration_count(int n, int support);

/// Exact probability that the strategy's selected output is the target,
/// by enumerating multinomial count vectors (Pass, Maj) or by the order
/// statistics of the reward classes (Bon). Majority wins are strict
/// plurality; set ties_win to count ties as wins instead.
double effective_win_prob_exact(const Categorical& dist, const TaskSpec& task,
                                const Strategy& s, bool ties_win = false);

/// n * P(target wins | one of the n draws is pinned to `forced`). This is the
/// homogeneous partial derivative of the win probability in the coordinate
/// of the forced outcome.
double forced_vote_sensitivity(const Categorical& dist, const TaskSpec& task,
                               const Strategy& s, Index forced, bool ties_win = false);

/// Best-of-n selection probability for `target`: (P_<= )^n - (P_<)^n, where
/// P_< is the mass on strictly lower rewards and P_<= includes ties.
double bon_win_prob(const Vector& rewards, const Categorical& dist, Index target, int n);

}  // namespace catlab

#endif
