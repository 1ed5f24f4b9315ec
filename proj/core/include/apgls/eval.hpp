#pragma once

#include <vector>

namespace apgls {

struct TrialReport {
  int trial_index = 0;
  std::vector<double> est_doas_deg;   // matched to true_doas_deg order
  std::vector<double> true_doas_deg;
  double rmse_deg = 0.0;
  bool converged = false;
  int iterations = 0;
  bool failed = false;  // degenerate retrieval or numeric failure
};

// Minimum-total-absolute-error assignment of estimates to truths. For scalar
// angles this is the sorted-order pairing. Returns the estimates permuted so
// element i corresponds to truth[i].
std::vector<double> match_doas(std::vector<double> est,
                               const std::vector<double>& truth);

// sqrt(mean squared error) after matching, in degrees.
double rmse_deg(const std::vector<double>& est,
                const std::vector<double>& truth);

double median(std::vector<double> values);

struct OutlierFilter {
  std::vector<double> kept;
  std::vector<bool> is_outlier;  // aligned with the input
  int dropped = 0;
};

// Drops entries larger than 10x the median of the whole input.
OutlierFilter filter_outliers(const std::vector<double>& trial_rmses);

struct AggregateRmse {
  double rmse_deg = 0.0;  // sqrt(mean of kept per-trial mean squared errors)
  int trials_kept = 0;
  int dropped = 0;
  int failed = 0;
  std::vector<bool> is_outlier;  // aligned with the report sequence
};

AggregateRmse aggregate_rmse(const std::vector<TrialReport>& reports);

}  // namespace apgls
