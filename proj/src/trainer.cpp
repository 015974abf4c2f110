#include "catlab/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "catlab/errors.hpp"

namespace catlab {

namespace {

double gaussian(Rng& rng) {
  // Box-Muller; one value per call is plenty here
  const double u = std::max(rng.next_double(), 1e-300);
  const double v = rng.next_double();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

int hydrophobic_index(char c) {
  return kHydrophobicResidues.find(c) == std::string_view::npos ? 0 : 1;
}

bool valid_residue(char c) { return kAminoAlphabet.find(c) != std::string_view::npos; }

// KL(softmax(row) || softmax(ref_row)) and its logit gradient
double residue_kl(const Vector& probs, const Vector& ref_probs, Vector* grad) {
  double kl = 0.0;
  Vector logratio(probs.size());
  for (Index a = 0; a < probs.size(); ++a) {
    logratio[a] = std::log(probs[a]) - std::log(ref_probs[a]);
    kl += probs[a] * logratio[a];
  }
  if (grad) {
    grad->resize(probs.size());
    for (Index a = 0; a < probs.size(); ++a) (*grad)[a] = probs[a] * (logratio[a] - kl);
  }
  return kl;
}

std::string strategy_label(const Strategy& s) {
  switch (s.kind) {
    case StrategyKind::Pass:
      return "pass@" + std::to_string(s.n);
    case StrategyKind::Maj:
      return "maj@" + std::to_string(s.n) + "k" + std::to_string(s.k);
    case StrategyKind::Bon:
      return s.n == 1 ? "standard-rl" : "bon-" + std::to_string(s.n);
  }
  return "?";
}

}  // namespace

// ---------------------------------------------------------------------------
// banks

QuestionBank make_question_bank(const BankSpec& spec, RngSeed seed) {
  if (spec.count < 1 || spec.answer_space < 2)
    throw std::invalid_argument("make_question_bank: need count >= 1 and answer_space >= 2");
  if (spec.easy_fraction + spec.shadow_fraction > 1.0)
    throw std::invalid_argument("make_question_bank: fractions exceed 1");
  Rng rng{seed};
  QuestionBank bank;
  bank.questions.reserve(spec.count);
  for (int q = 0; q < spec.count; ++q) {
    Question question;
    question.answer_space = spec.answer_space;
    question.correct = static_cast<int>(rng.next_below(spec.answer_space));
    Vector z(spec.answer_space);
    for (int a = 0; a < spec.answer_space; ++a) z[a] = gaussian(rng);
    const double kind = rng.next_double();
    if (kind < spec.easy_fraction) {
      z[question.correct] += spec.easy_boost;
    } else if (kind < spec.easy_fraction + spec.shadow_fraction) {
      const int rival = (question.correct + 1 +
                         static_cast<int>(rng.next_below(spec.answer_space - 1))) %
                        spec.answer_space;
      const double gap = spec.shadow_gap_low +
                         (spec.shadow_gap_high - spec.shadow_gap_low) * rng.next_double();
      z[question.correct] = z.maxCoeff() + 0.1;
      z[rival] = z[question.correct] + gap;
    }
    question.policy = SoftmaxPolicy{z};
    bank.questions.push_back(std::move(question));
  }
  return bank;
}

// ---------------------------------------------------------------------------
// sequences and landscapes

double hydrophobic_fraction(std::string_view sequence) {
  if (sequence.empty()) throw std::invalid_argument("hydrophobic_fraction: empty sequence");
  int hydro = 0;
  for (char c : sequence) {
    if (!valid_residue(c)) throw std::invalid_argument("hydrophobic_fraction: unknown residue");
    hydro += hydrophobic_index(c);
  }
  return static_cast<double>(hydro) / sequence.size();
}

SequencePolicy SequencePolicy::unconditional(int length) {
  SequencePolicy p;
  p.length = length;
  p.logits = Matrix::Zero(1, static_cast<Index>(kAminoAlphabet.size()));
  p.reference = p.logits;
  return p;
}

SequencePolicy SequencePolicy::conditional(int length) {
  SequencePolicy p;
  p.length = length;
  p.logits = Matrix::Zero(kConditionBins, static_cast<Index>(kAminoAlphabet.size()));
  p.reference = p.logits;
  return p;
}

int SequencePolicy::bin_for(double h_in) const {
  if (logits.rows() == 1) return 0;
  const int bin = static_cast<int>(h_in * kConditionBins);
  return std::clamp(bin, 0, kConditionBins - 1);
}

Categorical SequencePolicy::residue_distribution(int bin) const {
  return softmax(logits.row(bin).transpose());
}

std::string SequencePolicy::sample_sequence(int bin, Rng& rng) const {
  const Categorical residues = residue_distribution(bin);
  std::string seq(length, '?');
  for (int t = 0; t < length; ++t) seq[t] = kAminoAlphabet[sample_one(residues, rng)];
  return seq;
}

double SequencePolicy::mass_above(double h_threshold, int bin) const {
  const Categorical residues = residue_distribution(bin);
  double q = 0.0;
  for (Index a = 0; a < residues.size(); ++a)
    if (hydrophobic_index(kAminoAlphabet[a])) q += residues.prob(a);
  // strictly above: counts from floor(threshold * length) + 1
  const int k0 = static_cast<int>(std::floor(h_threshold * length + 1e-9)) + 1;
  return binomial_tail(length, k0, q);
}

double valley_reward(std::string_view sequence) {
  if (sequence.size() < 10) {
    for (char c : sequence)
      if (!valid_residue(c)) throw std::invalid_argument("valley_reward: unknown residue");
    return -5.0;
  }
  const double h = hydrophobic_fraction(sequence);
  double r = 4.0 * std::exp(-(h - 0.35) * (h - 0.35) / 0.05) +
             12.0 * std::exp(-(h - 0.75) * (h - 0.75) / 0.015);
  if (h > 0.45 && h < 0.60) r += -2.0;
  return r;
}

double valley_reward_peak() { return 12.0 + 4.0 * std::exp(-3.2); }

double conditional_reward(std::string_view sequence, double h_in) {
  const double h = hydrophobic_fraction(sequence);
  double r = 10.0 * std::exp(-(h - (1.0 - h_in)) * (h - (1.0 - h_in)) / 0.05);
  if (std::abs(h - h_in) < 0.1 && std::abs(h_in - 0.5) > 0.1) r += -2.0;
  return r;
}

// ---------------------------------------------------------------------------
// strategy-aware SFT loss

LossGrad sft_cat_loss(const SoftmaxPolicy& policy, const Question& question,
                      const Strategy& strategy, const TrainConfig& config) {
  (void)config;
  if (strategy.kind == StrategyKind::Bon)
    throw unsupported_strategy("sft_cat_loss: best-of-n reduces to pass_at(n)");
  const Categorical dist = policy.induced();
  if (question.correct < 0 || question.correct >= dist.size())
    throw std::invalid_argument("sft_cat_loss: correct index outside support");

  const double p_raw = dist.prob(question.correct);
  double ell = std::log(std::max(p_raw, 1e-300));
  bool clamped = false;
  if (ell < -50.0) {
    ell = -50.0;
    clamped = true;
  }
  double p = std::exp(ell);
  if (p < 1e-6) {
    p = 1e-6;
    clamped = true;
  } else if (p > 1.0 - 1e-6) {
    p = 1.0 - 1e-6;
    clamped = true;
  }

  double loss = 0.0;
  double dloss_dp = 0.0;
  const int n = strategy.n;
  if (strategy.kind == StrategyKind::Pass) {
    if (p < 1e-4) {
      // linearized branch: coverage ~ n p, so the loss is -log p - log n
      loss = -std::log(p) - std::log(static_cast<double>(n));
      dloss_dp = -1.0 / p;
    } else {
      const double ptilde = one_minus_pow(p, n);
      loss = -std::log(ptilde);
      dloss_dp = -n * pow_one_minus(p, n - 1) / ptilde;
    }
  } else {
    const int k = strategy.k;
    const double lp = std::log(p), lq = std::log1p(-p);
    Vector terms(n - k + 1);
    for (int i = k; i <= n; ++i)
      terms[i - k] = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                     i * lp + (n - i) * lq;
    const double log_tail = log_sum_exp(terms);
    loss = -log_tail;
    double slope = 0.0;  // d log_tail / dp as a softmax-weighted mixture
    for (int i = k; i <= n; ++i)
      slope += std::exp(terms[i - k] - log_tail) * (i / p - (n - i) / (1.0 - p));
    dloss_dp = -slope;
  }

  LossGrad out;
  out.loss = loss;
  out.grad = Vector::Zero(dist.size());
  if (!clamped) {
    // chain rule through softmax: dp/dz_j = p (1[j = correct] - pi_j)
    for (Index j = 0; j < dist.size(); ++j) {
      const double indicator = j == question.correct ? 1.0 : 0.0;
      out.grad[j] = dloss_dp * p_raw * (indicator - dist.prob(j));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// group-relative update

GrpoResult grpo_lite_update_from_weights(const SoftmaxPolicy& policy,
                                         const SoftmaxPolicy& reference, const RolloutBatch& batch,
                                         const std::vector<double>& weights,
                                         const TrainConfig& config, GrpoStats stats) {
  const int m = batch.size();
  if (m < 2) throw std::invalid_argument("grpo_lite: need at least two rollouts");
  if (static_cast<int>(weights.size()) != m)
    throw std::invalid_argument("grpo_lite: one weight per rollout required");
  const Categorical dist = policy.induced();

  double mean = 0.0;
  for (double r : batch.rewards) mean += r;
  mean /= m;
  double var = 0.0;
  for (double r : batch.rewards) var += (r - mean) * (r - mean);
  var /= m;
  const double sd = std::sqrt(var);

  stats.advantages.assign(m, 0.0);
  stats.kl_only = sd == 0.0 && mean != 0.0;
  for (int i = 0; i < m; ++i) {
    double a = stats.kl_only ? 0.0 : (batch.rewards[i] - mean) / (sd + config.advantage_epsilon);
    if (mean == 0.0 && config.silence_penalty) a -= 0.5;
    stats.advantages[i] = a;
  }

  // policy term: -(1/m) sum_i w_i A_i d log pi(o_i) / dz
  Vector grad = Vector::Zero(dist.size());
  for (int i = 0; i < m; ++i) {
    const int o = batch.outcomes[i];
    if (o < 0 || o >= dist.size()) throw std::invalid_argument("grpo_lite: outcome outside support");
    const double scale = weights[i] * stats.advantages[i] / m;
    grad += scale * dist.probs();
    grad[o] -= scale;  // together: -scale * (onehot - pi)
  }

  if (config.kl_beta > 0.0) {
    Vector kl_grad;
    stats.kl = residue_kl(dist.probs(), reference.induced().probs(), &kl_grad);
    grad += config.kl_beta * kl_grad;
  } else {
    stats.kl = 0.0;
  }

  GrpoResult out;
  out.policy = SoftmaxPolicy{policy.logits - config.learning_rate * grad};
  stats.weights = weights;
  out.stats = std::move(stats);
  return out;
}

GrpoResult grpo_lite_step(const SoftmaxPolicy& policy, const SoftmaxPolicy& reference,
                          const RolloutBatch& batch, const Strategy& strategy,
                          const TrainConfig& config) {
  const int m = batch.size();
  if (m < 2) throw std::invalid_argument("grpo_lite_step: need at least two rollouts");

  GrpoStats stats;
  int successes = 0;
  for (double r : batch.rewards)
    if (r > 0.0) ++successes;
  stats.p_hat = laplace_smooth(successes, m);

  const Strategy n_scaled{strategy.kind, config.n_target, strategy.k};
  std::vector<double> weights(m, 1.0);
  if (strategy.kind == StrategyKind::Bon) {
    for (int i = 0; i < m; ++i)
      weights[i] = w_rl(quantile_in_batch(batch.rewards, i), Strategy::best_of(config.n_target));
  } else {
    Strategy effective = n_scaled;
    if (strategy.kind == StrategyKind::Maj) {
      // strongest incorrect answer in the rollouts sets the projected threshold
      std::map<int, int> wrong_counts;
      for (int i = 0; i < m; ++i)
        if (batch.rewards[i] <= 0.0) wrong_counts[batch.outcomes[i]] += 1;
      int c_max = 0;
      for (const auto& [outcome, count] : wrong_counts) c_max = std::max(c_max, count);
      stats.k_used = dynamic_k(c_max, m, config.n_target);
      effective = Strategy::majority(config.n_target, stats.k_used);
    }
    WeightConfig wc;
    wc.mode = config.weight_mode;
    const double w = cat_weight(stats.p_hat, effective, wc);
    std::fill(weights.begin(), weights.end(), w);
  }

  for (double& w : weights) w = clip_weight(w, config.clip_ceiling);
  if (config.normalize_weights) {
    Vector v(m);
    for (int i = 0; i < m; ++i) v[i] = weights[i];
    const Vector normalized = batch_normalize(v);
    for (int i = 0; i < m; ++i) weights[i] = normalized[i];
  }
  return grpo_lite_update_from_weights(policy, reference, batch, weights, config,
                                       std::move(stats));
}

// ---------------------------------------------------------------------------
// sequence-policy reinforcement

ReinforceStepResult reinforce_cat_step(const SequencePolicy& policy, LandscapeKind landscape,
                                       const Strategy& strategy, const TrainConfig& config,
                                       QuantileBuffer& buffer, Rng& rng) {
  if (strategy.kind != StrategyKind::Bon)
    throw std::invalid_argument("reinforce_cat_step: expects a best-of-n strategy");
  const int m = config.group_size;
  if (m < 2) throw std::invalid_argument("reinforce_cat_step: need at least two rollouts");

  const bool conditional = landscape == LandscapeKind::Complement;
  const double h_in = conditional ? rng.next_double() : 0.0;
  const int bin = conditional ? policy.bin_for(h_in) : 0;
  const Categorical residues = policy.residue_distribution(bin);
  const Index alphabet = residues.size();

  // rollouts
  std::vector<double> rewards(m), h_values(m);
  Matrix counts = Matrix::Zero(m, alphabet);
  for (int i = 0; i < m; ++i) {
    std::string seq(policy.length, '?');
    for (int t = 0; t < policy.length; ++t) {
      const int a = sample_one(residues, rng);
      counts(i, a) += 1.0;
      seq[t] = kAminoAlphabet[a];
    }
    rewards[i] = conditional ? conditional_reward(seq, h_in) : valley_reward(seq);
    h_values[i] = hydrophobic_fraction(seq);
  }

  // quantiles: rolling history for the static landscape, in-batch ranks for
  // the input-dependent one
  Vector weights(m);
  if (conditional) {
    for (int i = 0; i < m; ++i)
      weights[i] = w_rl(quantile_in_batch(rewards, i), strategy);
  } else {
    for (int i = 0; i < m; ++i) weights[i] = w_rl(quantile_fifo(buffer, rewards[i]), strategy);
    for (int i = 0; i < m; ++i) buffer.push(rewards[i], buffer.total_pushed());
  }
  weights = batch_normalize(weights);

  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= m;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / m);

  Vector grad = Vector::Zero(alphabet);  // ascent on the weighted advantage
  for (int i = 0; i < m; ++i) {
    const double advantage = (rewards[i] - mean) / (sd + config.advantage_epsilon);
    const Vector score = counts.row(i).transpose() - policy.length * residues.probs();
    grad += weights[i] * advantage / m * score;
  }

  ReinforceStepResult out;
  out.policy = policy;
  if (config.kl_beta > 0.0 && policy.reference) {
    Vector kl_grad;
    const Categorical ref = softmax(policy.reference->row(bin).transpose());
    out.stats.kl = residue_kl(residues.probs(), ref.probs(), &kl_grad);
    grad -= config.kl_beta * kl_grad;
  }
  out.policy.logits.row(bin) += config.learning_rate * grad.transpose();

  out.stats.mean_reward = mean;
  double mean_h = 0.0;
  for (double h : h_values) mean_h += h;
  out.stats.mean_h = mean_h / m;
  out.stats.weights = weights;
  return out;
}

// ---------------------------------------------------------------------------
// SFT experiment: per-question logits coupled through a global temperature

namespace {

struct SftState {
  std::vector<Vector> logits;  // one vector per question
  double log_gain = 0.0;       // shared sharpness parameter

  double gain() const { return std::exp(log_gain); }

  SoftmaxPolicy effective(int q) const { return SoftmaxPolicy{gain() * logits[q]}; }
};

SftState initial_state(const QuestionBank& bank) {
  SftState state;
  state.logits.reserve(bank.size());
  for (const Question& q : bank.questions) state.logits.push_back(q.policy.logits);
  return state;
}

double heldout_mean_p(const SftState& state, const QuestionBank& heldout) {
  // held-out questions keep their own logits but share the trained gain
  double acc = 0.0;
  const double g = state.gain();
  for (const Question& q : heldout.questions)
    acc += softmax(g * q.policy.logits).prob(q.correct);
  return acc / heldout.size();
}

void train_step(SftState& state, const QuestionBank& bank, const Strategy& strategy,
                const TrainConfig& config) {
  const double g = state.gain();
  double gain_grad = 0.0;
  for (int q = 0; q < bank.size(); ++q) {
    const LossGrad lg = sft_cat_loss(state.effective(q), bank.questions[q], strategy, config);
    gain_grad += g * state.logits[q].dot(lg.grad);
    state.logits[q] -= config.learning_rate * g * lg.grad;
  }
  state.log_gain -= config.learning_rate * gain_grad / bank.size();
}

}  // namespace

MetricsTable run_sft_experiment(const QuestionBank& bank, const QuestionBank& heldout,
                                const std::vector<Strategy>& strategies,
                                const SftExperimentConfig& config,
                                const std::vector<RngSeed>& seeds) {
  if (bank.size() < 1 || heldout.size() < 1)
    throw std::invalid_argument("run_sft_experiment: empty bank");
  std::vector<MetricsTable> per_seed;

  for (const RngSeed seed : seeds) {
    const Rng root{seed};

    // shared warmup: plain cross entropy until held-out p clears the floor
    SftState warm = initial_state(bank);
    TrainConfig warm_config = config.train;
    for (int step = 0; step < config.train.warmup_steps; ++step) {
      if (heldout_mean_p(warm, heldout) >= config.warmup_target_p) break;
      train_step(warm, bank, Strategy::pass_at(1), warm_config);
    }

    MetricsTable table;
    for (std::size_t si = 0; si < strategies.size(); ++si) {
      const Strategy strategy = strategies[si];
      SftState state = warm;
      for (int step = 0; step < config.train.steps; ++step)
        train_step(state, bank, strategy, config.train);

      // held-out evaluation through sampled pools
      const double g = state.gain();
      std::vector<double> pass_sum(config.pass_grid.size(), 0.0);
      std::vector<double> maj_sum(config.maj_grid.size(), 0.0);
      for (int q = 0; q < heldout.size(); ++q) {
        const Question& question = heldout.questions[q];
        const Categorical dist = softmax(g * question.policy.logits);
        Rng pool_rng = root.split(0x9000 + q);
        const std::vector<int> pool = sample(dist, config.eval_pool, pool_rng);
        const int correct_count =
            static_cast<int>(std::count(pool.begin(), pool.end(), question.correct));
        for (std::size_t i = 0; i < config.pass_grid.size(); ++i)
          pass_sum[i] += pass_at_k(config.eval_pool, correct_count, config.pass_grid[i]);

        AnswerPool answers;
        answers.correct = std::to_string(question.correct);
        answers.answers.reserve(pool.size());
        for (int o : pool) answers.answers.push_back(std::to_string(o));
        MajBootstrapOptions opts;
        opts.iterations = config.bootstrap_iterations;
        for (std::size_t i = 0; i < config.maj_grid.size(); ++i)
          maj_sum[i] +=
              maj_at_k_bootstrap(answers, config.maj_grid[i], pool_rng.split(i).seed(), opts).value;
      }

      const std::string label = strategy_label(strategy);
      for (std::size_t i = 0; i < config.pass_grid.size(); ++i)
        table.push_back({label, "pass", config.pass_grid[i], pass_sum[i] / heldout.size(), 0.0});
      for (std::size_t i = 0; i < config.maj_grid.size(); ++i)
        table.push_back({label, "maj", config.maj_grid[i], maj_sum[i] / heldout.size(), 0.0});
    }
    per_seed.push_back(std::move(table));
  }

  // per-seed rows tagged with their seed, then the aggregate
  MetricsTable out;
  for (std::size_t i = 0; i < per_seed.size(); ++i)
    for (const MetricRow& row : per_seed[i])
      out.push_back({row.model + "@seed" + std::to_string(seeds[i].value), row.metric, row.k,
                     row.value, 0.0});
  for (const MetricRow& row : aggregate_tables(per_seed)) out.push_back(row);
  return out;
}

// ---------------------------------------------------------------------------
// best-of-n experiment on the valley landscape

BonExperimentResult run_bon_experiment(const std::vector<Strategy>& strategies,
                                       const BonExperimentConfig& config) {
  BonExperimentResult result;
  const Rng root{config.train.seed};

  for (std::size_t si = 0; si < strategies.size(); ++si) {
    const Strategy strategy = strategies[si];
    SequencePolicy policy = SequencePolicy::unconditional();
    QuantileBuffer buffer;
    Rng rng = root.split(si);
    for (int step = 0; step < config.train.steps; ++step) {
      const ReinforceStepResult r =
          reinforce_cat_step(policy, LandscapeKind::Valley, strategy, config.train, buffer, rng);
      policy = r.policy;
    }

    // fresh evaluation pool
    Rng eval_rng = root.split(0x7000 + si);
    std::vector<double> pool;
    pool.reserve(config.eval_pool);
    double h_acc = 0.0;
    for (int i = 0; i < config.eval_pool; ++i) {
      const std::string seq = policy.sample_sequence(0, eval_rng);
      pool.push_back(valley_reward(seq));
      h_acc += hydrophobic_fraction(seq);
    }

    const std::string label = strategy_label(strategy);
    result.model_names.push_back(label);
    result.jackpot_mass.push_back(policy.mass_above(config.jackpot_threshold));
    result.final_mean_h.push_back(h_acc / config.eval_pool);
    for (int n : config.budget_grid) {
      // standard error of the closed-form estimate via a few pool splits
      const int splits = 8;
      const int chunk = config.eval_pool / splits;
      double sum = 0.0, sumsq = 0.0;
      for (int s = 0; s < splits; ++s) {
        const std::vector<double> part(pool.begin() + s * chunk, pool.begin() + (s + 1) * chunk);
        const double v = expected_max_at_n(part, n);
        sum += v;
        sumsq += v * v;
      }
      const double mean = sum / splits;
      const double se = std::sqrt(std::max(0.0, sumsq / splits - mean * mean) / splits);
      result.table.push_back({label, "emax", n, expected_max_at_n(pool, n), se});
    }
  }
  return result;
}

MetricsTable aggregate_tables(const std::vector<MetricsTable>& tables) {
  if (tables.empty()) return {};
  std::map<std::tuple<std::string, std::string, int>, std::vector<double>> grouped;
  std::vector<std::tuple<std::string, std::string, int>> order;
  for (const MetricsTable& table : tables) {
    for (const MetricRow& row : table) {
      const auto key = std::make_tuple(row.model, row.metric, row.k);
      if (grouped.find(key) == grouped.end()) order.push_back(key);
      grouped[key].push_back(row.value);
    }
  }
  MetricsTable out;
  for (const auto& key : order) {
    const std::vector<double>& values = grouped[key];
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= values.size();
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double se = values.size() > 1
                          ? std::sqrt(var / (values.size() - 1) / values.size())
                          : 0.0;
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), mean, se});
  }
  return out;
}

}  // namespace catlab
