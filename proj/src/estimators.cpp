#include "catlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace catlab {

QuantileBuffer::QuantileBuffer(int capacity, double decay) : capacity_(capacity), decay_(decay) {
  if (capacity < 1) throw std::invalid_argument("QuantileBuffer: capacity must be >= 1");
  if (!(decay > 0.0 && decay <= 1.0))
    throw std::invalid_argument("QuantileBuffer: decay must lie in (0, 1]");
}

void QuantileBuffer::push(double reward, long step) {
  entries_.emplace_back(reward, step);
  ++total_pushed_;
  if (static_cast<int>(entries_.size()) > capacity_) entries_.pop_front();
}

double pass_at_k(int n, int c, int k) {
  if (c < 0 || c > n) throw std::invalid_argument("pass_at_k: correct count outside [0, n]");
  if (k < 1 || k > n) throw std::invalid_argument("pass_at_k: budget outside [1, n]");
  if (c == 0) return 0.0;
  if (n - c < k) return 1.0;  // every subset of size k hits a correct sample
  double miss = 1.0;
  for (int i = 0; i < k; ++i)
    miss *= static_cast<double>(n - c - i) / static_cast<double>(n - i);
  return 1.0 - miss;
}

namespace {

// index of the modal label; ties resolved per options
int modal_winner(const std::vector<int>& counts, Rng& rng, bool strict_plurality) {
  int best = 0;
  std::vector<int> tied;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > best) {
      best = counts[i];
      tied.clear();
    }
    if (counts[i] == best && best > 0) tied.push_back(static_cast<int>(i));
  }
  if (tied.empty()) return -1;
  if (tied.size() == 1) return tied.front();
  if (strict_plurality) return -1;
  return tied[rng.next_below(tied.size())];
}

}  // namespace

Estimate maj_at_k_bootstrap(const AnswerPool& pool, int k, RngSeed seed,
                            const MajBootstrapOptions& options) {
  const int n = static_cast<int>(pool.answers.size());
  if (n == 0) throw std::invalid_argument("maj_at_k_bootstrap: empty pool");
  if (k < 1 || (!options.with_replacement && k > n))
    throw std::invalid_argument("maj_at_k_bootstrap: budget outside pool size");
  if (options.iterations < 1) throw std::invalid_argument("maj_at_k_bootstrap: iterations must be >= 1");

  // map labels to dense ids once
  std::unordered_map<std::string, int> ids;
  std::vector<int> label_of(n);
  for (int i = 0; i < n; ++i)
    label_of[i] = ids.emplace(pool.answers[i], static_cast<int>(ids.size())).first->second;
  const auto correct_it = ids.find(pool.correct);
  const int correct_id = correct_it == ids.end() ? -1 : correct_it->second;

  Rng rng{seed};
  std::vector<int> indices(n);
  std::iota(indices.begin(), indices.end(), 0);
  std::vector<int> counts(ids.size(), 0);

  int hits = 0;
  for (int it = 0; it < options.iterations; ++it) {
    std::fill(counts.begin(), counts.end(), 0);
    if (options.with_replacement) {
      for (int j = 0; j < k; ++j) counts[label_of[rng.next_below(n)]] += 1;
    } else {
      // partial Fisher-Yates for a size-k subset
      for (int j = 0; j < k; ++j) {
        const int pick = j + static_cast<int>(rng.next_below(n - j));
        std::swap(indices[j], indices[pick]);
        counts[label_of[indices[j]]] += 1;
      }
    }
    if (modal_winner(counts, rng, options.strict_plurality) == correct_id) ++hits;
  }
  const double acc = static_cast<double>(hits) / options.iterations;
  return {acc, std::sqrt(acc * (1.0 - acc) / options.iterations)};
}

double expected_max_at_n(std::vector<double> reward_pool, int n) {
  if (reward_pool.empty()) throw std::invalid_argument("expected_max_at_n: empty pool");
  if (n < 1) throw std::invalid_argument("expected_max_at_n: budget must be >= 1");
  std::sort(reward_pool.begin(), reward_pool.end());
  const double m = static_cast<double>(reward_pool.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < reward_pool.size(); ++i) {
    const double hi = std::pow((i + 1) / m, n);
    const double lo = std::pow(i / m, n);
    acc += reward_pool[i] * (hi - lo);
  }
  return acc;
}

double laplace_smooth(int successes, int batch) {
  if (batch < 1 || successes < 0 || successes > batch)
    throw std::invalid_argument("laplace_smooth: counts out of range");
  return (successes + 1.0) / (batch + 2.0);
}

int dynamic_k(int c_max, int m, int n_target) {
  if (m < 1) throw std::invalid_argument("dynamic_k: rollout size must be >= 1");
  if (c_max < 0 || c_max > m) throw std::invalid_argument("dynamic_k: rival count outside [0, m]");
  if (n_target < 1) throw std::invalid_argument("dynamic_k: target budget must be >= 1");
  const int projected = static_cast<int>(std::floor(
                            static_cast<double>(c_max) * n_target / m)) + 1;
  const int hi = n_target / 2 + 1;
  return std::clamp(projected, std::min(2, hi), hi);
}

double quantile_fifo(const QuantileBuffer& buffer, double reward) {
  long below = 0;
  for (const auto& [r, step] : buffer.entries())
    if (r < reward) ++below;
  const double q = (below + 1.0) / (buffer.size() + 2.0);
  return std::clamp(q, 0.001, 0.999);
}

double quantile_time_weighted(const QuantileBuffer& buffer, double reward, long now) {
  double mass = 0.0, below = 0.0;
  for (const auto& [r, step] : buffer.entries()) {
    if (step > now) throw std::invalid_argument("quantile_time_weighted: entry newer than now");
    const double w = std::pow(buffer.decay(), static_cast<double>(now - step));
    mass += w;
    if (r < reward) below += w;
  }
  if (mass <= 0.0) return 0.5;  // empty history carries no evidence either way
  return below / mass;
}

double quantile_in_batch(const std::vector<double>& rewards, int index) {
  const int m = static_cast<int>(rewards.size());
  if (m < 1) throw std::invalid_argument("quantile_in_batch: empty batch");
  if (index < 0 || index >= m) throw std::invalid_argument("quantile_in_batch: index outside batch");
  const double r = rewards[index];
  int below = 0, tied = 0;
  for (const double x : rewards) {
    if (x < r) ++below;
    if (x == r) ++tied;
  }
  // ranks below..below+tied-1 share this value; use their mean
  const double rank = below + (tied - 1) / 2.0;
  return (rank + 1.0) / (m + 1.0);
}

std::vector<double> loo_max_advantage(const std::vector<int>& rewards) {
  for (const int r : rewards)
    if (r != 0 && r != 1) throw std::invalid_argument("loo_max_advantage: rewards must be 0 or 1");
  const int successes = static_cast<int>(std::count(rewards.begin(), rewards.end(), 1));
  std::vector<double> advantage(rewards.size(), 0.0);
  if (successes == 1) {
    for (std::size_t i = 0; i < rewards.size(); ++i)
      if (rewards[i] == 1) advantage[i] = 1.0;
  }
  // zero or several successes: the leave-one-out max never moves
  return advantage;
}

double ema_update(double current, double observation, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("ema_update: gamma outside [0, 1]");
  return gamma * current + (1.0 - gamma) * observation;
}

}  // namespace catlab
