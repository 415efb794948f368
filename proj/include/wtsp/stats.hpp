#pragma once

#include <cstddef>
#include <span>

namespace wtsp {

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Linear-interpolation quantile (R type 7) of unsorted data.
double quantile(std::span<const double> data, double q);
double median(std::span<const double> data);
Summary summarize(std::span<const double> data);

struct MannWhitney {
  double u = 0.0;   // #{x_i < y_j} + 0.5 #{x_i == y_j}
  double p = 1.0;   // one-sided: x tends to be smaller than y
  bool exact = false;
};

inline constexpr std::size_t kExactMannWhitneyLimit = 20;

/// One-sided Wilcoxon-Mann-Whitney rank-sum test. When both samples have at
/// most kExactMannWhitneyLimit values the permutation distribution of the
/// midrank sum is enumerated exactly (ties included); otherwise the normal
/// approximation with tie and continuity correction is used.
MannWhitney mann_whitney_less(std::span<const double> x, std::span<const double> y);

/// min(1, p * comparisons)
double bonferroni(double p, std::size_t comparisons);

}  // namespace wtsp
