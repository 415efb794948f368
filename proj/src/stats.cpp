#include "wtsp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "wtsp/core.hpp"

namespace wtsp {

double quantile(std::span<const double> data, double q) {
  if (data.empty()) throw ValidationError("quantile of an empty sample");
  std::vector<double> v(data.begin(), data.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(std::span<const double> data) { return quantile(data, 0.5); }

Summary summarize(std::span<const double> data) {
  if (data.empty()) throw ValidationError("summary of an empty sample");
  Summary s;
  s.count = data.size();
  s.mean = std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : data) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
  s.min = *mn;
  s.max = *mx;
  s.q1 = quantile(data, 0.25);
  s.median = quantile(data, 0.5);
  s.q3 = quantile(data, 0.75);
  return s;
}

namespace {

struct Ranked {
  std::vector<std::size_t> doubled_ranks;  // 2 * midrank, always an integer
  std::vector<std::size_t> tie_sizes;
};

// Midranks of the pooled sample; the first x.size() entries belong to x.
Ranked pooled_ranks(std::span<const double> x, std::span<const double> y) {
  const std::size_t total = x.size() + y.size();
  std::vector<std::pair<double, std::size_t>> pooled;
  pooled.reserve(total);
  for (std::size_t i = 0; i < x.size(); ++i) pooled.emplace_back(x[i], i);
  for (std::size_t j = 0; j < y.size(); ++j) pooled.emplace_back(y[j], x.size() + j);
  std::sort(pooled.begin(), pooled.end());

  Ranked r;
  r.doubled_ranks.assign(total, 0);
  for (std::size_t i = 0; i < total;) {
    std::size_t j = i;
    while (j < total && pooled[j].first == pooled[i].first) ++j;
    // ranks i+1..j share the midrank (i+1+j)/2
    for (std::size_t k = i; k < j; ++k) r.doubled_ranks[pooled[k].second] = i + 1 + j;
    r.tie_sizes.push_back(j - i);
    i = j;
  }
  return r;
}

// P(doubled rank sum of a random m-subset >= observed)
double exact_upper_tail(const std::vector<std::size_t>& ranks, std::size_t m,
                        std::size_t observed) {
  const std::size_t max_sum = std::accumulate(ranks.begin(), ranks.end(), std::size_t{0});
  // ways[j][s]: subsets of size j with doubled rank sum s
  std::vector<std::vector<double>> ways(m + 1, std::vector<double>(max_sum + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t r : ranks) {
    for (std::size_t j = m; j >= 1; --j) {
      auto& cur = ways[j];
      const auto& prev = ways[j - 1];
      for (std::size_t s = max_sum; s >= r; --s) {
        cur[s] += prev[s - r];
        if (s == r) break;
      }
    }
  }
  double tail = 0.0, all = 0.0;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    all += ways[m][s];
    if (s >= observed) tail += ways[m][s];
  }
  return tail / all;
}

}  // namespace

MannWhitney mann_whitney_less(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw ValidationError("Mann-Whitney needs two nonempty samples");
  const std::size_t n = x.size(), m = y.size();
  const auto ranked = pooled_ranks(x, y);

  std::size_t doubled_sum_y = 0;
  for (std::size_t j = 0; j < m; ++j) doubled_sum_y += ranked.doubled_ranks[n + j];

  MannWhitney result;
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  result.u = static_cast<double>(doubled_sum_y) / 2.0 - md * (md + 1.0) / 2.0;

  if (n <= kExactMannWhitneyLimit && m <= kExactMannWhitneyLimit) {
    result.exact = true;
    result.p = exact_upper_tail(ranked.doubled_ranks, m, doubled_sum_y);
    return result;
  }

  const double total = nd + md;
  double tie_term = 0.0;
  for (std::size_t t : ranked.tie_sizes) {
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double var = nd * md / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
  if (var <= 0.0) {
    result.p = 1.0;
    return result;
  }
  const double z = (result.u - nd * md / 2.0 - 0.5) / std::sqrt(var);
  result.p = 0.5 * std::erfc(z / std::sqrt(2.0));
  return result;
}

double bonferroni(double p, std::size_t comparisons) {
  return std::min(1.0, p * static_cast<double>(comparisons));
}

}  // namespace wtsp
