#include <cmath>

#include "apgls/eval.hpp"
#include "apgls/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apgls;

TEST_CASE("match_doas worked examples") {
  CHECK(match_doas({3.0, -3.0}, {-3.0, 3.0}) == std::vector<double>{-3.0, 3.0});
  CHECK(match_doas({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) ==
        std::vector<double>{1.0, 2.0, 3.0});
  // pairing (0 -> 1, 4 -> 3), total error 2
  CHECK(match_doas({0.0, 4.0}, {1.0, 3.0}) == std::vector<double>{0.0, 4.0});
  CHECK_THROWS_AS(match_doas({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("match_doas is the optimal assignment") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform() * 4.0);
    std::vector<double> est, truth;
    for (int i = 0; i < k; ++i) {
      est.push_back(rng.uniform(-90.0, 90.0));
      truth.push_back(rng.uniform(-90.0, 90.0));
    }
    const std::vector<double> aligned = match_doas(est, truth);
    double cost = 0.0;
    for (int i = 0; i < k; ++i) cost += std::abs(aligned[static_cast<std::size_t>(i)] -
                                                 truth[static_cast<std::size_t>(i)]);
    CHECK(cost == doctest::Approx(oracles::min_assignment_cost(est, truth)));
  }
}

TEST_CASE("rmse worked examples") {
  CHECK(rmse_deg({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(rmse_deg({0.0, 4.0}, {1.0, 3.0}) == doctest::Approx(1.0));
  // uniform shift by delta gives rmse |delta|
  CHECK(rmse_deg({-9.5, 0.5, 20.5}, {-10.0, 0.0, 20.0}) == doctest::Approx(0.5));
}

TEST_CASE("rmse is permutation-invariant and shift-equivariant") {
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> truth, est;
    for (int i = 0; i < 4; ++i) {
      truth.push_back(rng.uniform(-80.0, 80.0));
      est.push_back(truth.back() + rng.uniform(-2.0, 2.0));
    }
    std::vector<double> shuffled = est;
    std::swap(shuffled[0], shuffled[3]);
    std::swap(shuffled[1], shuffled[2]);
    CHECK(rmse_deg(shuffled, truth) == doctest::Approx(rmse_deg(est, truth)));

    const double shift = rng.uniform(-5.0, 5.0);
    std::vector<double> est_shifted = est, truth_shifted = truth;
    for (auto& v : est_shifted) v += shift;
    for (auto& v : truth_shifted) v += shift;
    CHECK(rmse_deg(est_shifted, truth_shifted) ==
          doctest::Approx(rmse_deg(est, truth)));
  }
}

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK_THROWS_AS(median({}), std::invalid_argument);
}

TEST_CASE("outlier filter worked examples") {
  const OutlierFilter a = filter_outliers({1.0, 1.0, 1.0, 1.0, 100.0});
  CHECK(a.kept == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  CHECK(a.dropped == 1);

  const OutlierFilter b = filter_outliers({2.0, 2.0, 2.0});
  CHECK(b.dropped == 0);

  // median 3, threshold 30: 25 stays, 31 goes
  const OutlierFilter c = filter_outliers({1.0, 2.0, 3.0, 25.0, 31.0});
  CHECK(c.kept == std::vector<double>{1.0, 2.0, 3.0, 25.0});
  CHECK(c.dropped == 1);

  CHECK_THROWS_AS(filter_outliers({}), std::invalid_argument);
}

TEST_CASE("outlier filter accounting properties") {
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform() * 20.0);
    std::vector<double> rmses;
    for (int i = 0; i < n; ++i) rmses.push_back(rng.uniform(0.1, 50.0));
    const double med = median(rmses);
    const OutlierFilter filter = filter_outliers(rmses);
    // the median element itself is never dropped
    bool median_kept = false;
    for (double v : filter.kept) {
      if (v <= med + 1e-12 && v >= med - 1e-12) median_kept = true;
    }
    if (n % 2 == 1) CHECK(median_kept);
    CHECK(filter.dropped <= n / 2);
    CHECK(static_cast<int>(filter.kept.size()) + filter.dropped == n);
  }
}

TEST_CASE("aggregate rmse order and failure accounting") {
  std::vector<TrialReport> reports(4);
  reports[0].rmse_deg = 1.0;
  reports[1].rmse_deg = 2.0;
  reports[2].failed = true;
  reports[3].rmse_deg = 100.0;  // outlier: median 2, threshold 20
  for (int i = 0; i < 4; ++i) reports[static_cast<std::size_t>(i)].trial_index = i;

  const AggregateRmse agg = aggregate_rmse(reports);
  CHECK(agg.failed == 1);
  CHECK(agg.dropped == 1);
  CHECK(agg.trials_kept == 2);
  // sqrt(mean of kept per-trial mean squared errors) = sqrt((1 + 4) / 2)
  CHECK(agg.rmse_deg == doctest::Approx(std::sqrt(2.5)));
  CHECK(agg.is_outlier == std::vector<bool>{false, false, false, true});

  std::vector<TrialReport> all_failed(2);
  all_failed[0].failed = true;
  all_failed[1].failed = true;
  const AggregateRmse empty = aggregate_rmse(all_failed);
  CHECK(empty.trials_kept == 0);
  CHECK(std::isnan(empty.rmse_deg));
}
