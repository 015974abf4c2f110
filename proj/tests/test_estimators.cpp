#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "catlab/estimators.hpp"

using namespace catlab;

namespace {

// exhaustive mean over all size-k subsets of {0..n-1}: fraction containing a correct index
double pass_at_k_brute(int n, int c, int k) {
  std::vector<bool> mask(n, false);
  std::fill(mask.end() - k, mask.end(), true);
  long total = 0, hits = 0;
  do {
    ++total;
    bool hit = false;
    for (int i = 0; i < n && !hit; ++i)
      if (mask[i] && i < c) hit = true;
    if (hit) ++hits;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return static_cast<double>(hits) / total;
}

}  // namespace

TEST_CASE("pass_at_k equals exhaustive subset enumeration") {
  for (int n = 1; n <= 8; ++n)
    for (int c = 0; c <= n; ++c)
      for (int k = 1; k <= n; ++k)
        CHECK(pass_at_k(n, c, k) == doctest::Approx(pass_at_k_brute(n, c, k)).epsilon(1e-12));
}

TEST_CASE("pass_at_k edges and monotonicity") {
  CHECK(pass_at_k(64, 0, 13) == 0.0);
  CHECK(pass_at_k(64, 64, 1) == 1.0);
  CHECK(pass_at_k(4, 2, 2) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK_THROWS_AS(pass_at_k(4, 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(pass_at_k(4, 5, 2), std::invalid_argument);
  for (int c = 0; c < 16; ++c)
    for (int k = 1; k < 16; ++k) {
      CHECK(pass_at_k(16, c, k + 1) >= pass_at_k(16, c, k));
      CHECK(pass_at_k(16, c + 1, k) >= pass_at_k(16, c, k));
    }
}

TEST_CASE("bootstrap majority on degenerate pools") {
  AnswerPool good{{"a", "a", "a"}, "a"};
  CHECK(maj_at_k_bootstrap(good, 2, RngSeed{1}).value == 1.0);
  AnswerPool bad{{"b", "c", "b"}, "a"};
  CHECK(maj_at_k_bootstrap(bad, 2, RngSeed{1}).value == 0.0);
  AnswerPool single{{"a", "a", "b"}, "a"};
  CHECK(maj_at_k_bootstrap(single, 3, RngSeed{1}).value == 1.0);  // only one 3-subset exists
  CHECK_THROWS_AS(maj_at_k_bootstrap(AnswerPool{{}, "a"}, 1, RngSeed{1}), std::invalid_argument);
  CHECK_THROWS_AS(maj_at_k_bootstrap(good, 4, RngSeed{1}), std::invalid_argument);
}

TEST_CASE("bootstrap majority tie handling") {
  AnswerPool pool{{"a", "b"}, "a"};
  MajBootstrapOptions opts;
  opts.iterations = 2000;
  // random tie break wins about half the time
  const Estimate loose = maj_at_k_bootstrap(pool, 2, RngSeed{77}, opts);
  CHECK(loose.value == doctest::Approx(0.5).epsilon(0.1));
  // strict plurality counts ties as losses
  opts.strict_plurality = true;
  CHECK(maj_at_k_bootstrap(pool, 2, RngSeed{77}, opts).value == 0.0);
}

TEST_CASE("bootstrap majority converges on a majority-correct pool") {
  AnswerPool pool;
  for (int i = 0; i < 40; ++i) pool.answers.push_back("x");
  for (int i = 0; i < 12; ++i) pool.answers.push_back("y" + std::to_string(i % 4));
  pool.correct = "x";
  MajBootstrapOptions opts;
  opts.iterations = 4000;
  const double at1 = maj_at_k_bootstrap(pool, 1, RngSeed{5}, opts).value;
  const double atn = maj_at_k_bootstrap(pool, static_cast<int>(pool.answers.size()), RngSeed{5},
                                        opts)
                         .value;
  CHECK(atn >= at1);
  CHECK(atn == 1.0);  // the full pool always elects the majority label
}

TEST_CASE("bootstrap majority with replacement stays near the plurality rate") {
  AnswerPool pool{{"a", "a", "a", "b", "b", "c"}, "a"};
  MajBootstrapOptions opts;
  opts.with_replacement = true;
  opts.iterations = 3000;
  const Estimate e = maj_at_k_bootstrap(pool, 9, RngSeed{13}, opts);
  CHECK(e.value > 0.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt(e.value * (1 - e.value) / 3000)).epsilon(1e-9));
}

TEST_CASE("expected max closed form") {
  CHECK(expected_max_at_n({0.0, 1.0}, 2) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(expected_max_at_n({2.5, 2.5, 2.5}, 7) == doctest::Approx(2.5).epsilon(1e-12));
  const std::vector<double> pool{3.0, -1.0, 4.0, 1.5};
  CHECK(expected_max_at_n(pool, 1) ==
        doctest::Approx((3.0 - 1.0 + 4.0 + 1.5) / 4.0).epsilon(1e-12));
  // nondecreasing in n, converging to the pool max
  double prev = -1e9;
  for (int n = 1; n <= 64; n *= 2) {
    const double v = expected_max_at_n(pool, n);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK(expected_max_at_n(pool, 512) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK_THROWS_AS(expected_max_at_n({}, 1), std::invalid_argument);
}

TEST_CASE("expected max matches Monte Carlo") {
  const std::vector<double> pool{0.3, 0.9, 0.1, 0.7, 0.5, 0.2, 0.8};
  Rng rng(RngSeed{2718});
  for (int n : {2, 5}) {
    const int trials = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
      double best = -1e300;
      for (int d = 0; d < n; ++d) best = std::max(best, pool[rng.next_below(pool.size())]);
      sum += best;
      sumsq += best * best;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sumsq / trials - mean * mean) / trials);
    CHECK(std::abs(expected_max_at_n(pool, n) - mean) <= 3.0 * se);
  }
}

TEST_CASE("laplace smoothing") {
  CHECK(laplace_smooth(0, 4) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(laplace_smooth(4, 4) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(laplace_smooth(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(laplace_smooth(5, 4), std::invalid_argument);
}

TEST_CASE("dynamic threshold projection") {
  CHECK(dynamic_k(3, 8, 4) == 2);
  CHECK(dynamic_k(0, 8, 16) == 2);
  CHECK(dynamic_k(8, 8, 8) == 5);
  CHECK(dynamic_k(7, 8, 16) == 9);  // floor(14)+1 = 15 clamped to 9
  CHECK_THROWS_AS(dynamic_k(9, 8, 4), std::invalid_argument);
}

TEST_CASE("fifo quantiles") {
  QuantileBuffer buffer;
  CHECK(buffer.capacity() == 4000);
  CHECK(quantile_fifo(buffer, 3.0) == doctest::Approx(0.5).epsilon(1e-12));
  for (int i = 0; i < 4000; ++i) buffer.push(i, i);
  CHECK(buffer.size() == 4000);
  CHECK(quantile_fifo(buffer, -1.0) == doctest::Approx(0.001));
  CHECK(quantile_fifo(buffer, 1e9) == doctest::Approx(0.999));
  CHECK(quantile_fifo(buffer, 2000.0) == doctest::Approx((2000.0 + 1.0) / 4002.0).epsilon(1e-12));
  // eviction is first in, first out
  buffer.push(9999.0, 4000);
  CHECK(buffer.entries().front().first == 1.0);
}

TEST_CASE("fifo quantile output always lies inside the clamp") {
  Rng rng(RngSeed{55});
  QuantileBuffer buffer(64);
  for (int i = 0; i < 500; ++i) {
    const double q = quantile_fifo(buffer, rng.next_double() * 100.0 - 50.0);
    CHECK(q >= 0.001);
    CHECK(q <= 0.999);
    buffer.push(rng.next_double() * 100.0 - 50.0, i);
  }
}

TEST_CASE("time weighted quantiles") {
  QuantileBuffer plain(100, 1.0);
  plain.push(1.0, 0);
  plain.push(2.0, 1);
  plain.push(3.0, 2);
  CHECK(quantile_time_weighted(plain, 2.5, 10) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(quantile_time_weighted(plain, 99.0, 10) == doctest::Approx(1.0));
  CHECK(quantile_time_weighted(QuantileBuffer(10, 0.9), 1.0, 0) == 0.5);

  QuantileBuffer decayed(100, 0.9);
  decayed.push(0.0, 0);
  decayed.push(10.0, 100);
  const double w_old = std::pow(0.9, 100.0);
  CHECK(quantile_time_weighted(decayed, 5.0, 100) ==
        doctest::Approx(w_old / (1.0 + w_old)).epsilon(1e-9));
  CHECK_THROWS_AS(quantile_time_weighted(decayed, 5.0, 50), std::invalid_argument);
}

TEST_CASE("in-batch quantiles with average ranks") {
  std::vector<double> rewards(25);
  for (int i = 0; i < 25; ++i) rewards[i] = i;
  CHECK(quantile_in_batch(rewards, 24) == doctest::Approx(25.0 / 26.0).epsilon(1e-12));
  CHECK(quantile_in_batch(rewards, 0) == doctest::Approx(1.0 / 26.0).epsilon(1e-12));

  const std::vector<double> tied{5.0, 5.0, 1.0};
  CHECK(quantile_in_batch(tied, 0) == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(quantile_in_batch(tied, 1) == doctest::Approx(0.625).epsilon(1e-12));

  // permutation invariance under ties
  const std::vector<double> shuffled{1.0, 5.0, 5.0};
  CHECK(quantile_in_batch(shuffled, 1) == doctest::Approx(0.625).epsilon(1e-12));
  CHECK_THROWS_AS(quantile_in_batch({}, 0), std::invalid_argument);
}

TEST_CASE("leave-one-out max advantages") {
  const auto two = loo_max_advantage({1, 1, 0, 0, 0});
  for (double a : two) CHECK(a == 0.0);
  const auto one = loo_max_advantage({0, 1, 0});
  CHECK(one[1] == 1.0);
  CHECK(one[0] == 0.0);
  const auto none = loo_max_advantage({0, 0, 0});
  for (double a : none) CHECK(a == 0.0);
  CHECK_THROWS_AS(loo_max_advantage({0, 2}), std::invalid_argument);
}

TEST_CASE("loo advantages vanish whenever two or more successes exist") {
  for (int n = 2; n <= 10; ++n) {
    for (long mask = 0; mask < (1L << n); ++mask) {
      std::vector<int> rewards(n);
      int successes = 0;
      for (int i = 0; i < n; ++i) {
        rewards[i] = (mask >> i) & 1;
        successes += rewards[i];
      }
      const auto adv = loo_max_advantage(rewards);
      if (successes >= 2)
        for (double a : adv) CHECK(a == 0.0);
    }
  }
  // spot check at batch 64
  std::vector<int> big(64, 0);
  big[3] = big[40] = big[41] = 1;
  for (double a : loo_max_advantage(big)) CHECK(a == 0.0);
}

TEST_CASE("ema update") {
  CHECK(ema_update(4.0, 8.0, 1.0) == 4.0);
  CHECK(ema_update(4.0, 8.0, 0.0) == 8.0);
  CHECK(ema_update(4.0, 8.0, 0.75) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK_THROWS_AS(ema_update(1.0, 1.0, 1.5), std::invalid_argument);
}
