#ifndef CATLAB_MATH_HPP
#define CATLAB_MATH_HPP

#include <Eigen/Core>
#include <cmath>
#include <limits>

namespace catlab {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;
using Index = Eigen::Index;

template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Scalar m = v.maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf stays -inf
  return m + std::log((v.array() - m).exp().sum());
}

template <typename Derived>
VectorX<typename Derived::Scalar> softmax_vector(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  const Scalar lse = log_sum_exp(logits);
  return (logits.array() - lse).exp().matrix();
}

/// log C(n, k) via lgamma; exact enough for n up to a few thousand.
inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// (1-p)^n without cancellation for small p, with x^0 = 1 throughout.
inline double pow_one_minus(double p, double n) {
  if (n == 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  return std::exp(n * std::log1p(-p));
}

/// 1-(1-p)^n, accurate for small p.
inline double one_minus_pow(double p, double n) {
  if (p >= 1.0) return 1.0;
  return -std::expm1(n * std::log1p(-p));
}

inline double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

inline double log_sigmoid(double x) {
  // -log(1+exp(-x)) with the usual stable split
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// Kahan-Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// P(Bin(n, p) >= k), summed in a numerically tame order.
inline double binomial_tail(int n, int k, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  CompensatedSum acc;
  const double lp = std::log(p), lq = std::log1p(-p);
  for (int i = k; i <= n; ++i)
    acc.add(std::exp(log_binomial(n, i) + i * lp + (n - i) * lq));
  const double v = acc.value();
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

}  // namespace catlab

#endif
