#include "catlab/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include "catlab/errors.hpp"

namespace catlab {

Categorical::Categorical(Vector probs) : probs_(std::move(probs)) {
  if (probs_.size() < 1) throw std::invalid_argument("Categorical: empty support");
  double sum = 0.0;
  for (Index i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("Categorical: entry outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("Categorical: probabilities do not sum to 1");
}

Categorical SoftmaxPolicy::induced() const { return softmax(logits); }

Categorical softmax(const Vector& logits) {
  if (logits.size() < 1) throw std::invalid_argument("softmax: empty logits");
  if (!logits.allFinite()) throw std::invalid_argument("softmax: non-finite logits");
  return Categorical(softmax_vector(logits));
}

int sample_one(const Categorical& dist, Rng& rng) {
  const double u = rng.next_double();
  double cum = 0.0;
  const Index k = dist.size();
  for (Index i = 0; i < k; ++i) {
    cum += dist.prob(i);
    if (u < cum) return static_cast<int>(i);
  }
  // u landed in the round-off sliver past the last cumulative sum
  for (Index i = k - 1; i >= 0; --i)
    if (dist.prob(i) > 0.0) return static_cast<int>(i);
  return static_cast<int>(k - 1);
}

std::vector<int> sample(const Categorical& dist, int n, Rng& rng) {
  if (n < 0) throw std::invalid_argument("sample: negative count");
  std::vector<int> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(sample_one(dist, rng));
  return out;
}

std::vector<int> sample(const Categorical& dist, int n, RngSeed seed) {
  Rng rng(seed);
  return sample(dist, n, rng);
}

Categorical proportional_decay_shift(const Categorical& dist, Index target, double delta) {
  if (target < 0 || target >= dist.size())
    throw std::invalid_argument("proportional_decay_shift: target out of range");
  const double p = dist.prob(target);
  const double shifted = p + delta;
  if (shifted < -1e-15 || shifted > 1.0 + 1e-15)
    throw std::invalid_argument("proportional_decay_shift: target mass leaves [0, 1]");
  if (p >= 1.0) {
    if (delta != 0.0)
      throw singularity_error("proportional_decay_shift: no rival mass to draw from");
    return dist;
  }
  const double scale = (1.0 - shifted) / (1.0 - p);
  Vector out = dist.probs() * scale;
  out[target] = clamp01(shifted);
  return Categorical(out);
}

double entropy(const Categorical& dist) {
  double h = 0.0;
  for (Index i = 0; i < dist.size(); ++i) {
    const double p = dist.prob(i);
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace catlab
