#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "catlab/errors.hpp"
#include "catlab/gradient.hpp"
#include "catlab/strategies.hpp"

using namespace catlab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Categorical random_categorical(Rng& rng, int support) {
  Vector v(support);
  for (int i = 0; i < support; ++i) v[i] = -std::log(1.0 - rng.next_double());
  return Categorical(v / v.sum());
}

// Brute-force win probability by rolling over all |support|^n ordered draw
// sequences. Independent of the composition-based oracle.
double ordered_sequence_win_prob(const Categorical& dist, const TaskSpec& task, const Strategy& s,
                                 int forced = -1) {
  const int k = static_cast<int>(dist.size());
  const int draws = forced >= 0 ? s.n - 1 : s.n;
  std::vector<int> seq(std::max(draws, 1), 0);
  double total = 0.0;
  const long combos = static_cast<long>(std::llround(std::pow(k, draws)));
  for (long code = 0; code < combos; ++code) {
    long rest = code;
    double prob = 1.0;
    std::vector<int> counts(k, 0);
    for (int d = 0; d < draws; ++d) {
      const int outcome = static_cast<int>(rest % k);
      rest /= k;
      prob *= dist.prob(outcome);
      counts[outcome] += 1;
    }
    if (forced >= 0) counts[forced] += 1;
    bool win = false;
    if (s.kind == StrategyKind::Pass) {
      win = counts[task.target] >= 1;
    } else if (s.kind == StrategyKind::Maj) {
      win = counts[task.target] >= 1;
      for (int j = 0; j < k && win; ++j)
        if (j != task.target && counts[j] >= counts[task.target]) win = false;
    } else {
      // best-of-n: every draw at or below the target's reward, at least one at it
      const double rt = task.rewards[task.target];
      bool any_at = false, all_le = true;
      for (int j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;
        if (task.rewards[j] > rt) all_le = false;
        if (task.rewards[j] == rt) any_at = true;
      }
      win = all_le && any_at;
    }
    if (win) total += prob;
  }
  return total;
}

}  // namespace

TEST_CASE("strategy constructors validate") {
  CHECK_THROWS_AS(Strategy::pass_at(0), std::invalid_argument);
  CHECK_THROWS_AS(Strategy::majority(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(Strategy::majority(4, 5), std::invalid_argument);
  CHECK(Strategy::majority_fraction(64, 0.4).k == 26);
  CHECK(Strategy::majority_fraction(8, 0.33).k == 3);
  CHECK(Strategy::majority_fraction(16, 0.25).k == 4);
  CHECK(Strategy::majority_fraction(4, 0.01).k == 2);
  CHECK(Strategy::majority_fraction(4, 1.0).k == 4);
}

TEST_CASE("classification predicates") {
  const StrategyClass pass = classify(Strategy::pass_at(16));
  CHECK(pass.orthogonal);
  CHECK(pass.competitive);
  CHECK(pass.adversarially_symmetric);

  const StrategyClass maj = classify(Strategy::majority(16, 8));
  CHECK_FALSE(maj.orthogonal);
  CHECK(maj.competitive);
  CHECK(maj.adversarially_symmetric);

  const StrategyClass bon = classify(Strategy::best_of(8));
  CHECK_FALSE(bon.orthogonal);
  CHECK_FALSE(bon.competitive);
  CHECK(bon.adversarially_symmetric);
}

TEST_CASE("effective_success_prob closed forms") {
  CHECK(effective_success_prob(0.5, Strategy::pass_at(2)) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(effective_success_prob(1.0, Strategy::pass_at(7)) == doctest::Approx(1.0));
  CHECK(effective_success_prob(1.0, Strategy::majority(7, 4)) == doctest::Approx(1.0));
  CHECK(effective_success_prob(0.5, Strategy::majority(2, 2)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(effective_success_prob(0.5, Strategy::best_of(4)), unsupported_strategy);
}

TEST_CASE("effective_success_prob is monotone in p") {
  for (const Strategy s : {Strategy::pass_at(5), Strategy::majority(9, 4)}) {
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
      const double v = effective_success_prob(i / 100.0, s);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
  // strictly increasing on the interior for pass
  for (int i = 1; i < 100; ++i) {
    const double a = effective_success_prob(i / 100.0, Strategy::pass_at(6));
    const double b = effective_success_prob((i + 1) / 100.0, Strategy::pass_at(6));
    CHECK(b > a);
  }
}

TEST_CASE("exact oracle matches closed forms on binary support") {
  for (int n = 1; n <= 12; ++n) {
    for (double p : {0.0, 0.05, 0.3, 0.5, 0.77, 1.0}) {
      const Categorical dist(vec({p, 1.0 - p}));
      const TaskSpec task = TaskSpec::correct_answer(0);
      const double pass_exact = effective_win_prob_exact(dist, task, Strategy::pass_at(n));
      CHECK(pass_exact == doctest::Approx(effective_success_prob(p, Strategy::pass_at(n)))
                              .epsilon(1e-12));
      const int k = n / 2 + 1;  // strict majority over one rival
      const double maj_exact = effective_win_prob_exact(dist, task, Strategy::majority(n, k));
      CHECK(maj_exact == doctest::Approx(effective_success_prob(p, Strategy::majority(n, k)))
                             .epsilon(1e-12));
    }
  }
}

TEST_CASE("exact oracle spot values") {
  CHECK(effective_win_prob_exact(Categorical(vec({0.3, 0.7})), TaskSpec::correct_answer(0),
                                 Strategy::pass_at(3)) == doctest::Approx(0.657).epsilon(1e-12));
  CHECK(effective_win_prob_exact(Categorical(vec({0.4, 0.3, 0.3})), TaskSpec::correct_answer(0),
                                 Strategy::majority(1, 1)) == doctest::Approx(0.4).epsilon(1e-12));
  const TaskSpec bon = TaskSpec::scored(vec({1.0, 0.0}), 0);
  CHECK(effective_win_prob_exact(Categorical(vec({0.5, 0.5})), bon, Strategy::best_of(2)) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("exact oracle agrees with ordered-sequence brute force") {
  Rng rng(RngSeed{123});
  for (int t = 0; t < 60; ++t) {
    const int k = 2 + static_cast<int>(rng.next_below(3));
    const int n = 1 + static_cast<int>(rng.next_below(5));
    const Categorical dist = random_categorical(rng, k);
    const int target = static_cast<int>(rng.next_below(k));
    for (const Strategy s : {Strategy::pass_at(n), Strategy::majority(n, 1)}) {
      const TaskSpec task = TaskSpec::correct_answer(target);
      CHECK(effective_win_prob_exact(dist, task, s) ==
            doctest::Approx(ordered_sequence_win_prob(dist, task, s)).epsilon(1e-10));
    }
    Vector rewards(k);
    for (int i = 0; i < k; ++i) rewards[i] = std::floor(rng.next_double() * 4.0);
    const TaskSpec bon = TaskSpec::scored(rewards, target);
    CHECK(effective_win_prob_exact(dist, bon, Strategy::best_of(n)) ==
          doctest::Approx(ordered_sequence_win_prob(dist, bon, Strategy::best_of(n)))
              .epsilon(1e-10));
  }
}

TEST_CASE("oracle budget guard") {
  Vector big = Vector::Constant(40, 1.0 / 40.0);
  CHECK_THROWS_AS(
      effective_win_prob_exact(Categorical(big), TaskSpec::correct_answer(0), Strategy::pass_at(40)),
      resource_error);
  CHECK(enumeration_count(2, 3) == 6);
  CHECK(enumeration_count(12, 8) == 50388);
}

TEST_CASE("forced vote sensitivity examples") {
  const Categorical dist(vec({0.3, 0.7}));
  const TaskSpec task = TaskSpec::correct_answer(0);
  // a guaranteed correct draw guarantees coverage
  CHECK(forced_vote_sensitivity(dist, task, Strategy::pass_at(4), 0) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(forced_vote_sensitivity(dist, task, Strategy::pass_at(2), 1) ==
        doctest::Approx(0.6).epsilon(1e-12));
  CHECK(forced_vote_sensitivity(Categorical(vec({0.5, 0.5})), task, Strategy::majority(2, 2), 1) ==
        doctest::Approx(0.0));
}

TEST_CASE("forced vote sensitivity matches brute force with a pinned draw") {
  Rng rng(RngSeed{321});
  for (int t = 0; t < 40; ++t) {
    const int k = 2 + static_cast<int>(rng.next_below(3));
    const int n = 1 + static_cast<int>(rng.next_below(5));
    const Categorical dist = random_categorical(rng, k);
    const int target = static_cast<int>(rng.next_below(k));
    const int forced = static_cast<int>(rng.next_below(k));
    const TaskSpec task = TaskSpec::correct_answer(target);
    for (const Strategy s : {Strategy::pass_at(n), Strategy::majority(n, 1)}) {
      CHECK(forced_vote_sensitivity(dist, task, s, forced) ==
            doctest::Approx(s.n * ordered_sequence_win_prob(dist, task, s, forced))
                .epsilon(1e-10));
    }
    Vector rewards(k);
    for (int i = 0; i < k; ++i) rewards[i] = std::floor(rng.next_double() * 4.0);
    const TaskSpec bon = TaskSpec::scored(rewards, target);
    const Strategy s = Strategy::best_of(n);
    CHECK(forced_vote_sensitivity(dist, bon, s, forced) ==
          doctest::Approx(s.n * ordered_sequence_win_prob(dist, bon, s, forced)).epsilon(1e-10));
  }
}

TEST_CASE("forced-vote combination equals the proportional-decay derivative") {
  Rng rng(RngSeed{2024});
  int trials = 0;
  for (int t = 0; t < 1000; ++t) {
    const int k = 2 + static_cast<int>(rng.next_below(4));
    const int n = 1 + static_cast<int>(rng.next_below(6));
    const Categorical dist = random_categorical(rng, k);
    const int target = static_cast<int>(rng.next_below(k));
    const double p = dist.prob(target);
    if (p < 1e-3 || p > 1.0 - 1e-3) continue;
    const TaskSpec task = TaskSpec::correct_answer(target);
    const Strategy s = rng.next_below(2) == 0 ? Strategy::pass_at(n) : Strategy::majority(n, 1);

    double combo = forced_vote_sensitivity(dist, task, s, target);
    for (Index j = 0; j < k; ++j) {
      if (static_cast<int>(j) == target) continue;
      combo -= dist.prob(j) / (1.0 - p) * forced_vote_sensitivity(dist, task, s, j);
    }
    const double fd = total_derivative_decay(dist, task, s, 1e-5);
    CHECK(combo == doctest::Approx(fd).epsilon(1e-4));
    ++trials;
  }
  CHECK(trials > 900);
}

TEST_CASE("majority adversarial symmetry") {
  Rng rng(RngSeed{555});
  for (int t = 0; t < 1000; ++t) {
    const int k = 2 + static_cast<int>(rng.next_below(4));
    const int n = 1 + static_cast<int>(rng.next_below(6));
    const Categorical dist = random_categorical(rng, k);
    const int target = static_cast<int>(rng.next_below(k));
    const TaskSpec task = TaskSpec::correct_answer(target);
    const Strategy s = Strategy::majority(n, 1);
    const double own = forced_vote_sensitivity(dist, task, s, target);
    for (Index j = 0; j < k; ++j) {
      if (static_cast<int>(j) == target) continue;
      CHECK(forced_vote_sensitivity(dist, task, s, j) <= own + 1e-12);
    }
  }
}

TEST_CASE("best-of-n sensitivity sign structure") {
  Rng rng(RngSeed{808});
  for (int t = 0; t < 500; ++t) {
    const int k = 2 + static_cast<int>(rng.next_below(4));
    const int n = 1 + static_cast<int>(rng.next_below(6));
    const Categorical dist = random_categorical(rng, k);
    const int target = static_cast<int>(rng.next_below(k));
    Vector rewards(k);
    for (int i = 0; i < k; ++i) rewards[i] = rng.next_double();
    const TaskSpec task = TaskSpec::scored(rewards, target);
    const Strategy s = Strategy::best_of(n);
    const double own = forced_vote_sensitivity(dist, task, s, target);
    for (Index j = 0; j < k; ++j) {
      if (static_cast<int>(j) == target) continue;
      const double sj = forced_vote_sensitivity(dist, task, s, j);
      if (rewards[j] > rewards[target]) {
        CHECK(sj == 0.0);
      } else {
        CHECK(sj >= 0.0);
        CHECK(sj <= own + 1e-12);
      }
    }
  }
}

TEST_CASE("bon win prob") {
  // unique argmax target behaves like pass at n
  const Categorical dist(vec({0.35, 0.4, 0.25}));
  const Vector rewards = vec({3.0, 1.0, 2.0});
  for (int n = 1; n <= 6; ++n)
    CHECK(bon_win_prob(rewards, dist, 0, n) ==
          doctest::Approx(one_minus_pow(0.35, n)).epsilon(1e-12));
  // strict minimum target wins only when every draw is the target
  CHECK(bon_win_prob(vec({0.0, 1.0}), Categorical(vec({0.5, 0.5})), 0, 2) ==
        doctest::Approx(0.25).epsilon(1e-12));
  // unsampleable outcome never wins
  CHECK(bon_win_prob(vec({1.0, 0.0}), Categorical(vec({0.0, 1.0})), 0, 3) == 0.0);
}

TEST_CASE("pass unified-equation closure") {
  for (int n = 1; n <= 16; ++n) {
    for (double p : {0.01, 0.2, 0.5, 0.9}) {
      const double lhs = n - n * (1.0 - std::pow(1.0 - p, n - 1));
      const double rhs = n * std::pow(1.0 - p, n - 1);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-15));
      // forced-vote combination against the closed-form derivative
      const Categorical dist(vec({p, 1.0 - p}));
      const TaskSpec task = TaskSpec::correct_answer(0);
      const Strategy s = Strategy::pass_at(n);
      const double combo = forced_vote_sensitivity(dist, task, s, 0) -
                           forced_vote_sensitivity(dist, task, s, 1);
      CHECK(combo == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("ties_win flag flips tie handling") {
  const Categorical dist(vec({0.5, 0.5}));
  const TaskSpec task = TaskSpec::correct_answer(0);
  const Strategy s = Strategy::majority(2, 1);
  // counts (1,1) are a tie: a loss by default, a win with ties_win
  const double strict = effective_win_prob_exact(dist, task, s, false);
  const double lenient = effective_win_prob_exact(dist, task, s, true);
  CHECK(strict == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(lenient == doctest::Approx(0.75).epsilon(1e-12));
}
