#ifndef CATLAB_TRAINER_HPP
#define CATLAB_TRAINER_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catlab/estimators.hpp"
#include "catlab/strategies.hpp"
#include "catlab/weights.hpp"

namespace catlab {

// ---------------------------------------------------------------------------
// toy question banks

struct Question {
  int answer_space = 2;
  int correct = 0;
  SoftmaxPolicy policy;  // per-question logits
};

struct QuestionBank {
  std::vector<Question> questions;

  int size() const { return static_cast<int>(questions.size()); }
};

/// Question mix for synthetic banks. Easy questions carry the correct answer
/// on top; shadowed questions put it a small gap behind one rival, the regime
/// where overconfident policies become confidently wrong; the rest are plain
/// unit-normal logits.
struct BankSpec {
  int count = 200;
  int answer_space = 8;
  double easy_fraction = 0.4;
  double easy_boost = 1.5;
  double shadow_fraction = 0.4;
  double shadow_gap_low = 0.15;
  double shadow_gap_high = 0.6;
};

QuestionBank make_question_bank(const BankSpec& spec, RngSeed seed);

// ---------------------------------------------------------------------------
// synthetic sequence policies and reward landscapes

inline constexpr std::string_view kAminoAlphabet = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr std::string_view kHydrophobicResidues = "AILMFWYV";
inline constexpr int kConditionBins = 10;

/// Fraction of residues in the hydrophobic set. Throws on unknown letters.
double hydrophobic_fraction(std::string_view sequence);

/// Residues drawn independently from a 20-way categorical; conditional
/// policies keep one logit row per input bin.
struct SequencePolicy {
  int length = 20;
  Matrix logits;                    // rows = condition bins (1 when unconditional)
  std::optional<Matrix> reference;  // frozen copy for the divergence penalty

  static SequencePolicy unconditional(int length = 20);
  static SequencePolicy conditional(int length = 20);

  int bin_for(double h_in) const;
  Categorical residue_distribution(int bin = 0) const;
  std::string sample_sequence(int bin, Rng& rng) const;
  /// Exact hydrophobic-count distribution h = X/length, X ~ Bin(length, q).
  double mass_above(double h_threshold, int bin = 0) const;
};

enum class LandscapeKind { Valley, Complement };

/// Two-peak hydrophobicity landscape: a broad low peak, a narrow high peak,
/// a penalized middle band, and a flat penalty for short sequences.
double valley_reward(std::string_view sequence);

/// Gaussian ridge centered on the complementary hydrophobicity 1 - h_in, with
/// a penalty for echoing the input when the input is away from the midpoint.
double conditional_reward(std::string_view sequence, double h_in);

/// Analytic maximum of the valley landscape (attained at the narrow peak).
double valley_reward_peak();

// ---------------------------------------------------------------------------
// training configuration

struct TrainConfig {
  double learning_rate = 0.05;
  int steps = 300;
  RngSeed seed;
  int group_size = 8;      // rollouts per update
  int n_target = 8;        // strategy budget the training aligns to
  WeightMode weight_mode = WeightMode::RlRaw;
  double clip_ceiling = 50.0;
  double kl_beta = 0.0;
  bool silence_penalty = false;
  double advantage_epsilon = 1e-8;
  int warmup_steps = 0;
  bool normalize_weights = false;
};

// ---------------------------------------------------------------------------
// losses and update steps

struct LossGrad {
  double loss = 0.0;
  Vector grad;  // with respect to the policy logits
};

/// Strategy-aware log-likelihood loss on one question, evaluated in log space
/// with the clamps baked in: sequence log probability to [-50, 0], then p to
/// [1e-6, 1-1e-6]. The pass form switches to the linearized branch below
/// p = 1e-4; majority goes through a log-gamma log-sum-exp tail.
LossGrad sft_cat_loss(const SoftmaxPolicy& policy, const Question& question,
                      const Strategy& strategy, const TrainConfig& config);

struct GrpoStats {
  std::vector<double> advantages;
  std::vector<double> weights;  // after clipping (and normalization when enabled)
  double p_hat = 0.0;
  int k_used = 0;
  double kl = 0.0;
  bool kl_only = false;
};

struct GrpoResult {
  SoftmaxPolicy policy;
  GrpoStats stats;
};

/// One group-relative update: standardized advantages, strategy weights from
/// the batch statistics, weights applied outside the normalization, then a
/// gradient step with the divergence penalty against `reference`.
GrpoResult grpo_lite_step(const SoftmaxPolicy& policy, const SoftmaxPolicy& reference,
                          const RolloutBatch& batch, const Strategy& strategy,
                          const TrainConfig& config);

/// Same update with caller-supplied weights; grpo_lite_step delegates here.
GrpoResult grpo_lite_update_from_weights(const SoftmaxPolicy& policy,
                                         const SoftmaxPolicy& reference, const RolloutBatch& batch,
                                         const std::vector<double>& weights,
                                         const TrainConfig& config, GrpoStats stats = {});

struct ReinforceStepStats {
  double mean_reward = 0.0;
  double mean_h = 0.0;
  double kl = 0.0;
  Vector weights;
};

struct ReinforceStepResult {
  SequencePolicy policy;
  ReinforceStepStats stats;
};

/// One policy-gradient step of a sequence policy against a landscape.
/// Quantiles come from the rolling buffer (valley) or in-batch ranks
/// (complement); weights are n (P_<)^{n-1}, batch normalized.
ReinforceStepResult reinforce_cat_step(const SequencePolicy& policy, LandscapeKind landscape,
                                       const Strategy& strategy, const TrainConfig& config,
                                       QuantileBuffer& buffer, Rng& rng);

// ---------------------------------------------------------------------------
// experiments

struct MetricRow {
  std::string model;
  std::string metric;
  int k = 1;
  double value = 0.0;
  double std_error = 0.0;
};

using MetricsTable = std::vector<MetricRow>;

struct SftExperimentConfig {
  TrainConfig train;
  int eval_pool = 64;
  std::vector<int> pass_grid = {1, 2, 4, 8, 16, 32, 64};
  std::vector<int> maj_grid = {1, 4, 16};
  int bootstrap_iterations = 200;
  double warmup_target_p = 0.05;
};

/// Cross-entropy warmup shared by all branches, then one branch per strategy.
/// pass_at(1) is the continued-baseline branch. Questions share a trained
/// global temperature, which is what couples them. Emits per-seed rows
/// (model@seedN) and seed-aggregate rows with standard errors.
MetricsTable run_sft_experiment(const QuestionBank& bank, const QuestionBank& heldout,
                                const std::vector<Strategy>& strategies,
                                const SftExperimentConfig& config,
                                const std::vector<RngSeed>& seeds);

struct BonExperimentConfig {
  TrainConfig train;
  int eval_pool = 4000;
  std::vector<int> budget_grid = {1, 2, 4, 8, 16, 32, 64};
  double jackpot_threshold = 0.65;
};

struct BonExperimentResult {
  MetricsTable table;                      // model, "emax", n, value, stderr
  std::vector<double> jackpot_mass;        // per model, exact tail mass above the threshold
  std::vector<std::string> model_names;
  std::vector<double> final_mean_h;
};

/// Trains one sequence policy per strategy on the valley landscape and
/// evaluates expected max reward on fresh pools across test budgets.
BonExperimentResult run_bon_experiment(const std::vector<Strategy>& strategies,
                                       const BonExperimentConfig& config);

/// Conditional variant: per-bin policies trained on the complement landscape,
/// evaluated by expected max reward over fresh pools at sampled inputs.
BonExperimentResult run_complement_experiment(const std::vector<Strategy>& strategies,
                                              const BonExperimentConfig& config);

/// Seed-aggregate helper: rows sharing (model, metric, k) across tables are
/// averaged, with the standard error taken across tables.
MetricsTable aggregate_tables(const std::vector<MetricsTable>& tables);

}  // namespace catlab

#endif
