#include "catlab/strategies.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "catlab/errors.hpp"

namespace catlab {

namespace {

constexpr int kMaxOracleSupport = 64;
constexpr std::uint64_t kMaxConfigurations = 10'000'000;

void require_budget(int n) {
  if (n < 1) throw std::invalid_argument("Strategy: budget must be >= 1");
}

// Walks every count vector (c_0..c_{K-1}) with sum n, calling visit(counts).
template <typename Visit>
void for_each_composition(int n, int support, Visit&& visit) {
  std::vector<int> counts(support, 0);
  counts[0] = n;
  for (;;) {
    visit(counts);
    // next composition in colex order
    int i = 0;
    while (i < support - 1 && counts[i] == 0) ++i;
    if (i == support - 1) break;
    const int head = counts[i];
    counts[i] = 0;
    counts[0] = head - 1;
    counts[i + 1] += 1;
  }
}

// log multinomial pmf term for counts under dist; -inf when impossible.
double log_pmf(const std::vector<int>& counts, const Categorical& dist, double log_n_fact) {
  double lp = log_n_fact;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int c = counts[i];
    if (c == 0) continue;
    const double q = dist.prob(static_cast<Index>(i));
    if (q <= 0.0) return -std::numeric_limits<double>::infinity();
    lp += c * std::log(q) - std::lgamma(c + 1.0);
  }
  return lp;
}

bool passes(const std::vector<int>& counts, int target) { return counts[target] >= 1; }

bool wins_plurality(const std::vector<int>& counts, int target, bool ties_win) {
  const int c = counts[target];
  if (c == 0) return false;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (static_cast<int>(j) == target) continue;
    if (ties_win ? counts[j] > c : counts[j] >= c) return false;
  }
  return true;
}

void check_oracle_budget(int n, Index support) {
  if (support > kMaxOracleSupport)
    throw resource_error("enumeration oracle: support larger than 64");
  if (enumeration_count(n, static_cast<int>(support)) > kMaxConfigurations)
    throw resource_error("enumeration oracle: configuration budget exceeded");
}

void check_task(const Categorical& dist, const TaskSpec& task) {
  if (task.target < 0 || task.target >= dist.size())
    throw std::invalid_argument("TaskSpec: target outside support");
  if (task.has_rewards()) {
    if (task.rewards.size() != dist.size())
      throw std::invalid_argument("TaskSpec: rewards not aligned with support");
    if (!task.rewards.allFinite())
      throw std::invalid_argument("TaskSpec: non-finite rewards");
  }
}

struct RewardSplit {
  double below = 0.0;  // mass with reward strictly under the target's
  double at = 0.0;     // mass at the target's reward, target included
};

RewardSplit split_by_reward(const Vector& rewards, const Categorical& dist, Index target) {
  RewardSplit out;
  const double rt = rewards[target];
  for (Index i = 0; i < dist.size(); ++i) {
    if (rewards[i] < rt)
      out.below += dist.prob(i);
    else if (rewards[i] == rt)
      out.at += dist.prob(i);
  }
  return out;
}

}  // namespace

Strategy Strategy::pass_at(int n) {
  require_budget(n);
  return {StrategyKind::Pass, n, 1};
}

Strategy Strategy::majority(int n, int k) {
  require_budget(n);
  if (k < 1 || k > n) throw std::invalid_argument("Strategy: majority threshold outside [1, n]");
  return {StrategyKind::Maj, n, k};
}

Strategy Strategy::majority_fraction(int n, double f) {
  if (n < 2) throw std::invalid_argument("Strategy: fraction constructor needs n >= 2");
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("Strategy: fraction outside [0, 1]");
  const int k = std::max(2, std::min(n, static_cast<int>(std::ceil(n * f))));
  return {StrategyKind::Maj, n, k};
}

Strategy Strategy::best_of(int n) {
  require_budget(n);
  return {StrategyKind::Bon, n, 1};
}

TaskSpec TaskSpec::correct_answer(int index) {
  TaskSpec t;
  t.target = index;
  return t;
}

TaskSpec TaskSpec::scored(Vector rewards, int target) {
  TaskSpec t;
  t.target = target;
  t.rewards = std::move(rewards);
  return t;
}

StrategyClass classify(const Strategy& s) {
  switch (s.kind) {
    case StrategyKind::Pass:
      return {true, true, true};
    case StrategyKind::Maj:
      return {false, true, true};
    case StrategyKind::Bon:
      return {false, false, true};
  }
  return {};
}

double effective_success_prob(double p, const Strategy& s) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("effective_success_prob: p outside [0, 1]");
  switch (s.kind) {
    case StrategyKind::Pass:
      return one_minus_pow(p, s.n);
    case StrategyKind::Maj:
      return binomial_tail(s.n, s.k, p);
    case StrategyKind::Bon:
      throw unsupported_strategy("effective_success_prob: best-of-n needs rewards, use bon_win_prob");
  }
  return 0.0;
}

std::uint64_t enumeration_count(int n, int support) {
  // C(n+support-1, support-1) with saturation
  std::uint64_t num = 1;
  for (int i = 1; i <= support - 1; ++i) {
    num = num * static_cast<std::uint64_t>(n + i) / static_cast<std::uint64_t>(i);
    if (num > (std::uint64_t(1) << 62)) return UINT64_MAX;
  }
  return num;
}

double effective_win_prob_exact(const Categorical& dist, const TaskSpec& task,
                                const Strategy& s, bool ties_win) {
  check_task(dist, task);
  if (s.kind == StrategyKind::Bon) {
    if (!task.has_rewards())
      throw std::invalid_argument("effective_win_prob_exact: best-of-n requires rewards");
    return bon_win_prob(task.rewards, dist, task.target, s.n);
  }
  check_oracle_budget(s.n, dist.size());
  const int target = task.target;
  const double log_n_fact = std::lgamma(s.n + 1.0);
  CompensatedSum acc;
  for_each_composition(s.n, static_cast<int>(dist.size()), [&](const std::vector<int>& counts) {
    const bool win = s.kind == StrategyKind::Pass ? passes(counts, target)
                                                  : wins_plurality(counts, target, ties_win);
    if (!win) return;
    const double lp = log_pmf(counts, dist, log_n_fact);
    if (lp > -std::numeric_limits<double>::infinity()) acc.add(std::exp(lp));
  });
  return clamp01(acc.value());
}

double forced_vote_sensitivity(const Categorical& dist, const TaskSpec& task,
                               const Strategy& s, Index forced, bool ties_win) {
  check_task(dist, task);
  if (forced < 0 || forced >= dist.size())
    throw std::invalid_argument("forced_vote_sensitivity: forced outcome outside support");
  if (s.kind == StrategyKind::Bon) {
    if (!task.has_rewards())
      throw std::invalid_argument("forced_vote_sensitivity: best-of-n requires rewards");
    const RewardSplit split = split_by_reward(task.rewards, dist, task.target);
    const double p_le = split.below + split.at;
    const double rf = task.rewards[forced];
    const double rt = task.rewards[task.target];
    if (rf > rt) return 0.0;  // a stronger rival in the batch always wins
    if (rf == rt) return s.n * std::pow(p_le, s.n - 1);
    // weaker rival: remaining draws must stay at or below the target's level
    // and still produce at least one draw at it
    return s.n * (std::pow(p_le, s.n - 1) - std::pow(split.below, s.n - 1));
  }
  if (s.n < 1) throw std::invalid_argument("forced_vote_sensitivity: budget must be >= 1");
  check_oracle_budget(s.n, dist.size());
  const int target = task.target;
  const double log_rest_fact = std::lgamma(static_cast<double>(s.n));
  CompensatedSum acc;
  std::vector<int> full(dist.size(), 0);
  for_each_composition(s.n - 1, static_cast<int>(dist.size()), [&](const std::vector<int>& counts) {
    for (std::size_t i = 0; i < counts.size(); ++i) full[i] = counts[i];
    full[forced] += 1;
    const bool win = s.kind == StrategyKind::Pass ? passes(full, target)
                                                  : wins_plurality(full, target, ties_win);
    if (!win) return;
    const double lp = log_pmf(counts, dist, log_rest_fact);
    if (lp > -std::numeric_limits<double>::infinity()) acc.add(std::exp(lp));
  });
  return s.n * clamp01(acc.value());
}

double bon_win_prob(const Vector& rewards, const Categorical& dist, Index target, int n) {
  if (rewards.size() != dist.size())
    throw std::invalid_argument("bon_win_prob: rewards not aligned with support");
  if (target < 0 || target >= dist.size())
    throw std::invalid_argument("bon_win_prob: target outside support");
  if (!rewards.allFinite()) throw std::invalid_argument("bon_win_prob: non-finite rewards");
  require_budget(n);
  const RewardSplit split = split_by_reward(rewards, dist, target);
  return std::pow(split.below + split.at, n) - std::pow(split.below, n);
}

}  // namespace catlab
