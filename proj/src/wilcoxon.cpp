#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "growcut/metrics.hpp"

namespace growcut::metrics {

namespace {

struct RankedDiffs {
  std::vector<double> abs_diff;
  std::vector<int> sign;
  /// Twice the average rank, so tied ranks stay integral.
  std::vector<int> rank2;
};

RankedDiffs rank_nonzero(std::span<const double> a, std::span<const double> b) {
  RankedDiffs r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d == 0.0) continue;
    r.abs_diff.push_back(std::abs(d));
    r.sign.push_back(d > 0 ? 1 : -1);
  }
  const std::size_t n = r.abs_diff.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return r.abs_diff[i] < r.abs_diff[j]; });
  r.rank2.assign(n, 0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && r.abs_diff[order[j + 1]] == r.abs_diff[order[i]]) ++j;
    // positions i..j (0-based) share ranks i+1..j+1; doubled average = i + j + 2
    const int r2 = static_cast<int>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) r.rank2[order[k]] = r2;
    i = j + 1;
  }
  return r;
}

// P(W+ <= w) and P(W+ >= w) under the exact conditional null: each rank
// carries a positive sign with probability 1/2 independently.
std::pair<double, double> exact_tails(const std::vector<int>& rank2, int w2) {
  const int total = std::accumulate(rank2.begin(), rank2.end(), 0);
  std::vector<double> dist(static_cast<std::size_t>(total) + 1, 0.0);
  dist[0] = 1.0;
  int reach = 0;
  for (int r : rank2) {
    for (int s = reach; s >= 0; --s)
      if (dist[static_cast<std::size_t>(s)] != 0.0)
        dist[static_cast<std::size_t>(s + r)] += dist[static_cast<std::size_t>(s)];
    reach += r;
  }
  const double denom = std::ldexp(1.0, static_cast<int>(rank2.size()));
  double lower = 0.0, upper = 0.0;
  for (int s = 0; s <= total; ++s) {
    if (s <= w2) lower += dist[static_cast<std::size_t>(s)];
    if (s >= w2) upper += dist[static_cast<std::size_t>(s)];
  }
  return {lower / denom, upper / denom};
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha) {
  if (a.size() != b.size()) throw InvalidArgument("wilcoxon: samples differ in length");
  if (a.empty()) throw InvalidArgument("wilcoxon: empty samples");
  const RankedDiffs r = rank_nonzero(a, b);
  WilcoxonResult out;
  out.n = r.abs_diff.size();
  if (out.n == 0) return out;  // no evidence either way

  int w2 = 0;
  for (std::size_t i = 0; i < out.n; ++i)
    if (r.sign[i] > 0) w2 += r.rank2[i];
  out.w_plus = w2 / 2.0;

  if (out.n <= kWilcoxonExactLimit) {
    const auto [lower, upper] = exact_tails(r.rank2, w2);
    out.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
    out.exact = true;
  } else {
    const double n = static_cast<double>(out.n);
    const double mean = n * (n + 1.0) / 4.0;
    double tie_term = 0.0;
    std::vector<int> sorted = r.rank2;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    const double diff = out.w_plus - mean;
    const double cc = diff > 0 ? 0.5 : (diff < 0 ? -0.5 : 0.0);
    const double z = var > 0.0 ? (diff - cc) / std::sqrt(var) : 0.0;
    out.p_value = std::min(1.0, std::erfc(std::abs(z) / std::numbers::sqrt2));
    out.exact = false;
  }
  out.reject = out.p_value < alpha;
  return out;
}

}  // namespace growcut::metrics
