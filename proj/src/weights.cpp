#include "catlab/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "catlab/errors.hpp"

namespace catlab {

namespace {

// Shared pass-at-n damped weight: n p (1-p)^{n-1} / (1 - (1-p)^n), log-space
// numerator. w_sft and w_rl_pass_normalized must agree bit for bit, so both
// call this.
double pass_damped_weight(double p, int n) {
  if (n == 1) return 1.0;
  const double numerator = std::exp(std::log(static_cast<double>(n)) + std::log(p) +
                                    (n - 1) * std::log1p(-p));
  return numerator / one_minus_pow(p, n);
}

double log_binom_term(int n, int i, double lp, double lq) {
  return log_binomial(n, i) + i * lp + (n - i) * lq;
}

// log of the binomial tail sum_{i=k..n} C(n,i) p^i (1-p)^{n-i}
double log_binomial_tail(int n, int k, double lp, double lq) {
  Vector terms(n - k + 1);
  for (int i = k; i <= n; ++i) terms[i - k] = log_binom_term(n, i, lp, lq);
  return log_sum_exp(terms);
}

double maj_sft_weight(double p, int n, int k) {
  const double lp = std::log(p), lq = std::log1p(-p);
  const double log_num = std::log(static_cast<double>(k)) + log_binom_term(n, k, lp, lq);
  return std::exp(log_num - log_binomial_tail(n, k, lp, lq));
}

double maj_table1_weight(double p, int n, int k) {
  return std::exp(log_binom_term(n, k, std::log(p), std::log1p(-p)));
}

double maj_rl_weight(double p, int n, int k) {
  if (k == 1 && p <= 0.0) return n * pow_one_minus(p, n - 1);
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return k == n ? static_cast<double>(n) : 0.0;
  return std::exp(std::log(static_cast<double>(n)) + log_binomial(n - 1, k - 1) +
                  (k - 1) * std::log(p) + (n - k) * std::log1p(-p));
}

}  // namespace

double w_sft(double p, const Strategy& s, const WeightConfig& config) {
  const double pc = config.clamp_p(p);
  switch (s.kind) {
    case StrategyKind::Pass:
      return pass_damped_weight(pc, s.n);
    case StrategyKind::Maj:
      return config.mode == WeightMode::SftTable1Maj ? maj_table1_weight(pc, s.n, s.k)
                                                     : maj_sft_weight(pc, s.n, s.k);
    case StrategyKind::Bon:
      throw unsupported_strategy("w_sft: best-of-n reduces to pass_at(n)");
  }
  return 0.0;
}

double w_rl(double arg, const Strategy& s) {
  if (!(arg >= 0.0 && arg <= 1.0)) throw std::invalid_argument("w_rl: argument outside [0, 1]");
  switch (s.kind) {
    case StrategyKind::Pass:
      return s.n * pow_one_minus(arg, s.n - 1);
    case StrategyKind::Maj:
      return maj_rl_weight(arg, s.n, s.k);
    case StrategyKind::Bon:
      return s.n * std::pow(arg, s.n - 1);
  }
  return 0.0;
}

double w_rl_pass_normalized(double p, int n, const WeightConfig& config) {
  return pass_damped_weight(config.clamp_p(p), n);
}

double cat_weight(double arg, const Strategy& s, const WeightConfig& config) {
  switch (config.mode) {
    case WeightMode::SftClosedForm:
    case WeightMode::SftTable1Maj:
      return w_sft(arg, s.kind == StrategyKind::Bon ? Strategy::pass_at(s.n) : s, config);
    case WeightMode::RlRaw:
      return w_rl(arg, s);
    case WeightMode::RlNormalized:
      if (s.kind == StrategyKind::Pass) return w_rl_pass_normalized(arg, s.n, config);
      return w_rl(arg, s);
  }
  return 0.0;
}

double clip_weight(double w, double ceiling) {
  if (ceiling < 0.0) throw std::invalid_argument("clip_weight: negative ceiling");
  return std::min(std::max(w, 0.0), ceiling);
}

Vector batch_normalize(const Vector& weights) {
  if (weights.size() == 0) throw std::invalid_argument("batch_normalize: empty batch");
  const double mean = weights.mean();
  if (mean <= 0.0) throw degenerate_batch("batch_normalize: batch mean is not positive");
  return weights / mean;
}

double variance_inflation(const Strategy& s, double p, const WeightConfig& config) {
  const double w = cat_weight(p, s, config);
  return w * w;
}

ViLimits vi_limits(const Strategy& s, WeightMode mode) {
  ViLimits out;
  const double n = s.n, k = s.k;
  const bool raw_rl = mode == WeightMode::RlRaw ||
                      (mode == WeightMode::RlNormalized && s.kind != StrategyKind::Pass);
  switch (s.kind) {
    case StrategyKind::Pass:
      out.hard_limit = raw_rl ? n * n : 1.0;
      out.easy_limit = s.n == 1 ? 1.0 : 0.0;
      break;
    case StrategyKind::Maj:
      if (mode == WeightMode::SftClosedForm) {
        out.hard_limit = k * k;
        out.easy_limit = s.k == s.n ? k * k : 0.0;
      } else if (mode == WeightMode::SftTable1Maj) {
        out.hard_limit = 0.0;
        out.easy_limit = s.k == s.n ? 1.0 : 0.0;
      } else {
        out.hard_limit = s.k == 1 ? n * n : 0.0;
        out.easy_limit = s.k == s.n ? n * n : 0.0;
      }
      break;
    case StrategyKind::Bon:
      // endpoints of n u^{n-1} in the quantile u
      out.hard_limit = s.n == 1 ? 1.0 : 0.0;
      out.easy_limit = n * n;
      out.second_moment = n * n / (2.0 * n - 1.0);
      break;
  }
  return out;
}

Vector token_margins(const Matrix& logits, const std::vector<int>& targets) {
  const Index rows = logits.rows(), vocab = logits.cols();
  if (vocab < 2) throw std::invalid_argument("token_margins: vocabulary must have >= 2 entries");
  if (static_cast<Index>(targets.size()) != rows)
    throw std::invalid_argument("token_margins: one target per row required");
  Vector margins(rows);
  for (Index t = 0; t < rows; ++t) {
    const int y = targets[t];
    if (y < 0 || y >= vocab) throw std::invalid_argument("token_margins: target outside vocabulary");
    double best_rival = -std::numeric_limits<double>::infinity();
    for (Index v = 0; v < vocab; ++v)
      if (v != y) best_rival = std::max(best_rival, logits(t, v));
    margins[t] = logits(t, y) - best_rival;
  }
  return margins;
}

double contrastive_margin_loss(const Vector& margins, double eta) {
  if (eta < 0.0) throw std::invalid_argument("contrastive_margin_loss: eta must be >= 0");
  if (margins.size() == 0) return 0.0;
  return (eta - margins.array()).max(0.0).mean();
}

double pairwise_contrastive_loss(const Matrix& logits, const std::vector<int>& targets,
                                 int rivals_per_position, RngSeed seed) {
  const Index rows = logits.rows(), vocab = logits.cols();
  if (vocab < 2) throw std::invalid_argument("pairwise_contrastive_loss: vocabulary must have >= 2 entries");
  if (static_cast<Index>(targets.size()) != rows)
    throw std::invalid_argument("pairwise_contrastive_loss: one target per row required");
  if (rivals_per_position < 1)
    throw std::invalid_argument("pairwise_contrastive_loss: need at least one rival");
  Rng rng{seed};
  double total = 0.0;
  for (Index t = 0; t < rows; ++t) {
    const int y = targets[t];
    Vector masked = logits.row(t).transpose();
    masked[y] = -std::numeric_limits<double>::infinity();
    // renormalized rival distribution with the target removed
    Vector rival_probs = (masked.array() - log_sum_exp(masked)).exp();
    const Categorical rivals{rival_probs / rival_probs.sum()};
    double row_loss = 0.0;
    for (int m = 0; m < rivals_per_position; ++m) {
      const int bad = sample_one(rivals, rng);
      row_loss -= log_sigmoid(logits(t, y) - logits(t, bad));
    }
    total += row_loss / rivals_per_position;
  }
  return total / rows;
}

}  // namespace catlab
