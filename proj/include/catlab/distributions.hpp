#ifndef CATLAB_DISTRIBUTIONS_HPP
#define CATLAB_DISTRIBUTIONS_HPP

#include <vector>

#include "catlab/math.hpp"
#include "catlab/rng.hpp"

namespace catlab {

/// Finite distribution over outcome indices 0..size()-1.
/// Entries lie in [0,1] and sum to 1 within 1e-9; both are checked on construction.
class Categorical {
 public:
  explicit Categorical(Vector probs);

  const Vector& probs() const { return probs_; }
  double prob(Index i) const { return probs_[i]; }
  Index size() const { return probs_.size(); }

 private:
  Vector probs_;
};

/// Logit parameterization; the induced distribution is softmax(logits).
struct SoftmaxPolicy {
  Vector logits;

  Categorical induced() const;
};

/// softmax(logits). Throws std::invalid_argument on non-finite or empty input.
Categorical softmax(const Vector& logits);

/// n independent draws, deterministic in the seed.
std::vector<int> sample(const Categorical& dist, int n, RngSeed seed);
std::vector<int> sample(const Categorical& dist, int n, Rng& rng);
int sample_one(const Categorical& dist, Rng& rng);

/// Move `delta` mass onto `target`, draining rivals in proportion to their
/// current probability. The resulting direction is tangent to the simplex.
Categorical proportional_decay_shift(const Categorical& dist, Index target, double delta);

/// Shannon entropy in nats, with 0*log(0) = 0.
double entropy(const Categorical& dist);

}  // namespace catlab

#endif
