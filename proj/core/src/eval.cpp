#include "apgls/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace apgls {

std::vector<double> match_doas(std::vector<double> est,
                               const std::vector<double>& truth) {
  if (est.size() != truth.size())
    throw std::invalid_argument("match_doas: length mismatch");
  // For scalar angles with |.| cost the optimal assignment pairs the sorted
  // sequences, so sort the estimates and scatter them back into truth order.
  std::sort(est.begin(), est.end());
  std::vector<std::size_t> order(truth.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return truth[a] < truth[b]; });
  std::vector<double> aligned(truth.size());
  for (std::size_t i = 0; i < order.size(); ++i) aligned[order[i]] = est[i];
  return aligned;
}

double rmse_deg(const std::vector<double>& est, const std::vector<double>& truth) {
  const std::vector<double> aligned = match_doas(est, truth);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double diff = aligned[i] - truth[i];
    sum_sq += diff * diff;
  }
  return std::sqrt(sum_sq / static_cast<double>(truth.size()));
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

OutlierFilter filter_outliers(const std::vector<double>& trial_rmses) {
  if (trial_rmses.empty())
    throw std::invalid_argument("filter_outliers: empty input");
  const double threshold = 10.0 * median(trial_rmses);
  OutlierFilter result;
  result.is_outlier.resize(trial_rmses.size(), false);
  for (std::size_t i = 0; i < trial_rmses.size(); ++i) {
    if (trial_rmses[i] > threshold) {
      result.is_outlier[i] = true;
      ++result.dropped;
    } else {
      result.kept.push_back(trial_rmses[i]);
    }
  }
  return result;
}

AggregateRmse aggregate_rmse(const std::vector<TrialReport>& reports) {
  AggregateRmse agg;
  agg.is_outlier.resize(reports.size(), false);
  std::vector<double> rmses;
  std::vector<std::size_t> source_index;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].failed) {
      ++agg.failed;
      continue;
    }
    rmses.push_back(reports[i].rmse_deg);
    source_index.push_back(i);
  }
  if (rmses.empty()) {
    agg.rmse_deg = std::numeric_limits<double>::quiet_NaN();
    return agg;
  }
  const OutlierFilter filter = filter_outliers(rmses);
  for (std::size_t i = 0; i < rmses.size(); ++i) {
    agg.is_outlier[source_index[i]] = filter.is_outlier[i];
  }
  agg.dropped = filter.dropped;
  agg.trials_kept = static_cast<int>(filter.kept.size());
  double mean_sq = 0.0;
  for (double r : filter.kept) mean_sq += r * r;
  mean_sq /= static_cast<double>(filter.kept.size());
  agg.rmse_deg = std::sqrt(mean_sq);
  return agg;
}

}  // namespace apgls
