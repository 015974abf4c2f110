#ifndef CATLAB_ESTIMATORS_HPP
#define CATLAB_ESTIMATORS_HPP

#include <deque>
#include <string>
#include <vector>

#include "catlab/math.hpp"
#include "catlab/rng.hpp"

namespace catlab {

/// Bounded FIFO history of (reward, step) pairs for quantile estimation.
/// decay = 1 recovers the plain empirical CDF on the time-weighted path.
class QuantileBuffer {
 public:
  explicit QuantileBuffer(int capacity = 4000, double decay = 1.0);

  void push(double reward, long step);
  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  double decay() const { return decay_; }
  long total_pushed() const { return total_pushed_; }
  const std::deque<std::pair<double, long>>& entries() const { return entries_; }

 private:
  int capacity_;
  double decay_;
  long total_pushed_ = 0;
  std::deque<std::pair<double, long>> entries_;
};

/// Candidate answers for one problem plus the reference answer.
struct AnswerPool {
  std::vector<std::string> answers;
  std::string correct;
};

/// Sampled outcomes with rewards and sequence log probabilities.
struct RolloutBatch {
  std::vector<int> outcomes;
  std::vector<double> rewards;
  std::vector<double> logprobs;
  long step = 0;

  int size() const { return static_cast<int>(outcomes.size()); }
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// P(a size-k draw without replacement from a pool of n with c correct
/// contains at least one correct sample): 1 - prod_i (n-c-i)/(n-i).
double pass_at_k(int n, int c, int k);

struct MajBootstrapOptions {
  int iterations = 500;
  bool strict_plurality = false;   // when set, modal ties count as losses
  bool with_replacement = false;   // default draws subsets without replacement
};

/// Fraction of bootstrap draws whose modal answer matches the reference.
/// Modal ties break uniformly at random under the default options.
Estimate maj_at_k_bootstrap(const AnswerPool& pool, int k, RngSeed seed,
                            const MajBootstrapOptions& options = {});

/// E[max of n draws with replacement] from the pool's empirical distribution,
/// in closed form over the sorted pool.
double expected_max_at_n(std::vector<double> reward_pool, int n);

/// (successes + 1) / (batch + 2).
double laplace_smooth(int successes, int batch);

/// Consensus threshold projected from the strongest rival count:
/// clamp(floor(c_max * n_target / m) + 1, 2, floor(n_target / 2) + 1).
int dynamic_k(int c_max, int m, int n_target);

/// Smoothed strictly-below quantile against the buffer contents, clamped to
/// [0.001, 0.999]. Ignores the decay factor.
double quantile_fifo(const QuantileBuffer& buffer, double reward);

/// Decay-weighted strictly-below quantile; an empty buffer returns 0.5.
double quantile_time_weighted(const QuantileBuffer& buffer, double reward, long now);

/// (rank + 1) / (M + 1) with average ranks for ties.
double quantile_in_batch(const std::vector<double>& rewards, int index);

/// Leave-one-out max advantages for binary rewards:
/// A_i = max(r) - max(r without i). Zero everywhere once two samples succeed.
std::vector<double> loo_max_advantage(const std::vector<int>& rewards);

/// gamma * current + (1 - gamma) * observation.
double ema_update(double current, double observation, double gamma);

}  // namespace catlab

#endif
