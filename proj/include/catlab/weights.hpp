#ifndef CATLAB_WEIGHTS_HPP
#define CATLAB_WEIGHTS_HPP

#include <optional>

#include "catlab/rng.hpp"
#include "catlab/strategies.hpp"

namespace catlab {

enum class WeightMode { SftClosedForm, SftTable1Maj, RlRaw, RlNormalized };

struct WeightConfig {
  WeightMode mode = WeightMode::SftClosedForm;
  std::optional<double> clip_ceiling = 50.0;
  double p_floor = 1e-10;
  double p_ceiling = 1.0 - 1e-10;

  double clamp_p(double p) const {
    return p < p_floor ? p_floor : (p > p_ceiling ? p_ceiling : p);
  }
};

/// Gradient multiplier for log-likelihood training: (p / p~) * dp~/dp of the
/// collapsed success probability. Best-of-n has no SFT form here; callers
/// reduce it to pass_at(n) first.
double w_sft(double p, const Strategy& s, const WeightConfig& config = {});

/// Gradient multiplier for reward training: dp~/dp. For best-of-n the
/// argument is the strictly-below quantile of the sample, otherwise p.
double w_rl(double arg, const Strategy& s);

/// The pass budget-n RL weight damped by p / p~. Algebraically identical to
/// w_sft for pass_at(n); evaluated in log space so large n stays finite.
double w_rl_pass_normalized(double p, int n, const WeightConfig& config = {});

/// Weight under the configured mode (the CSV/CLI dispatch point).
double cat_weight(double arg, const Strategy& s, const WeightConfig& config);

/// min(max(w, 0), ceiling).
double clip_weight(double w, double ceiling);

/// Divide by the batch mean: output mean is 1, ratios are untouched.
/// Throws degenerate_batch when every weight is zero.
Vector batch_normalize(const Vector& weights);

/// Pointwise variance inflation, the squared weight of the selected mode.
double variance_inflation(const Strategy& s, double p, const WeightConfig& config = {});

struct ViLimits {
  double hard_limit = 0.0;                  // p -> 0
  double easy_limit = 0.0;                  // p -> 1
  std::optional<double> second_moment;      // E[w^2], best-of-n under uniform quantiles
};

ViLimits vi_limits(const Strategy& s, WeightMode mode);

/// Margin of the target logit over its best rival, one entry per row.
Vector token_margins(const Matrix& logits, const std::vector<int>& targets);

/// Mean hinge loss max(0, eta - margin).
double contrastive_margin_loss(const Vector& margins, double eta);

/// Mean -log sigmoid(z_target - z_rival) over rivals sampled from each row's
/// softmax with the target masked out.
double pairwise_contrastive_loss(const Matrix& logits, const std::vector<int>& targets,
                                 int rivals_per_position, RngSeed seed);

}  // namespace catlab

#endif
