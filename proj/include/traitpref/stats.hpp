#pragma once

#include "traitpref/core.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace traitpref::stats {

enum class TestMethod
{
  mann_whitney_u,
  kruskal_wallis,
};

[[nodiscard]] inline const char* to_string(TestMethod m) noexcept
{
  return m == TestMethod::mann_whitney_u ? "mann-whitney-u" : "kruskal-wallis";
}

struct TestResult
{
  double statistic = 0.0;
  double p_value = 1.0;
  TestMethod method = TestMethod::mann_whitney_u;
  std::vector<std::size_t> n_per_group;
  bool exact = false;      // p-value from the exact permutation distribution
  bool degenerate = false; // every observation identical
};

/// Midranks (1-based) of the pooled samples, in pooled order.
[[nodiscard]] inline std::vector<double> midranks(std::span<const double> pooled)
{
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pooled[a] < pooled[b];
  });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;)
  {
    std::size_t j = i;
    while (j < n && pooled[order[j]] == pooled[order[i]])
      ++j;
    const double r = static_cast<double>(i + j + 1) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

/// Sum over tie groups of (t^3 - t).
[[nodiscard]] inline double tie_term(std::span<const double> pooled)
{
  std::vector<double> sorted(pooled.begin(), pooled.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size();)
  {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i])
      ++j;
    const double t = static_cast<double>(j - i);
    sum += t * t * t - t;
    i = j;
  }
  return sum;
}

namespace detail {

// Exact two-sided p-value of the rank sum of a group of size `n` drawn from
// the pooled midranks. Doubled midranks are integers, so the rank-sum
// distribution is tabulated over integers.
inline double exact_rank_sum_p(const std::vector<double>& ranks, std::size_t n, double observed_sum)
{
  std::vector<long> doubled(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i)
    doubled[i] = std::lround(2.0 * ranks[i]);
  const long max_sum = std::accumulate(doubled.begin(), doubled.end(), 0L);

  // ways[c][t]: number of c-subsets of the items seen so far with doubled sum t
  std::vector<std::vector<double>> ways(n + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
  ways[0][0] = 1.0;
  std::size_t seen = 0;
  for (long r : doubled)
  {
    ++seen;
    for (std::size_t c = std::min(n, seen); c >= 1; --c)
    {
      auto& dst = ways[c];
      const auto& src = ways[c - 1];
      for (long t = max_sum - r; t >= 0; --t)
        if (src[static_cast<std::size_t>(t)] != 0.0)
          dst[static_cast<std::size_t>(t + r)] += src[static_cast<std::size_t>(t)];
    }
  }

  const long centre2 = static_cast<long>(n) * static_cast<long>(ranks.size() + 1); // 2 * E[sum]
  const long obs_dev = std::labs(std::lround(2.0 * observed_sum) - centre2);
  double total = 0.0, extreme = 0.0;
  for (long t = 0; t <= max_sum; ++t)
  {
    const double w = ways[n][static_cast<std::size_t>(t)];
    if (w == 0.0)
      continue;
    total += w;
    if (std::labs(t - centre2) >= obs_dev)
      extreme += w;
  }
  return std::min(1.0, extreme / total);
}

} // namespace detail

/// Two-sided Mann-Whitney U test. Exact permutation p-value when the smaller
/// sample has at most `exact_limit` observations, otherwise the normal
/// approximation with tie and continuity correction.
[[nodiscard]] inline TestResult mann_whitney_u(
    std::span<const double> a, std::span<const double> b, std::size_t exact_limit = 8)
{
  if (a.size() < 3 || b.size() < 3)
    throw InvalidArgument("mann-whitney: each sample needs at least 3 observations");

  TestResult res;
  res.method = TestMethod::mann_whitney_u;
  res.n_per_group = {a.size(), b.size()};

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);

  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double r1 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
  res.statistic = r1 - n1 * (n1 + 1.0) / 2.0;

  if (std::all_of(pooled.begin(), pooled.end(), [&](double v) { return v == pooled.front(); }))
  {
    res.degenerate = true;
    res.p_value = 1.0;
    return res;
  }

  if (std::min(a.size(), b.size()) <= exact_limit)
  {
    res.exact = true;
    if (a.size() <= b.size())
      res.p_value = detail::exact_rank_sum_p(ranks, a.size(), r1);
    else
    {
      // tabulate over the smaller group; swap the pooled order accordingly
      std::vector<double> swapped(ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), ranks.end());
      swapped.insert(swapped.end(), ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()));
      const double r2 = std::accumulate(swapped.begin(), swapped.begin() + static_cast<std::ptrdiff_t>(b.size()), 0.0);
      res.p_value = detail::exact_rank_sum_p(swapped, b.size(), r2);
    }
    return res;
  }

  const double n = n1 + n2;
  const double mean_u = n1 * n2 / 2.0;
  const double var_u = n1 * n2 / 12.0 * ((n + 1.0) - tie_term(pooled) / (n * (n - 1.0)));
  const double dev = std::max(0.0, std::abs(res.statistic - mean_u) - 0.5);
  const double z = dev / std::sqrt(var_u);
  res.p_value = std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
  return res;
}

/// Kruskal-Wallis H test with tie correction; chi-squared p-value with
/// (groups - 1) degrees of freedom.
[[nodiscard]] inline TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups)
{
  if (groups.size() < 2)
    throw InvalidArgument("kruskal-wallis needs at least two groups");
  for (const auto& g : groups)
    if (g.size() < 3)
      throw InvalidArgument("kruskal-wallis: each group needs at least 3 observations");

  TestResult res;
  res.method = TestMethod::kruskal_wallis;
  std::vector<double> pooled;
  for (const auto& g : groups)
  {
    res.n_per_group.push_back(g.size());
    pooled.insert(pooled.end(), g.begin(), g.end());
  }

  if (std::all_of(pooled.begin(), pooled.end(), [&](double v) { return v == pooled.front(); }))
  {
    res.degenerate = true;
    res.statistic = 0.0;
    res.p_value = 1.0;
    return res;
  }

  const auto ranks = midranks(pooled);
  const double n = static_cast<double>(pooled.size());
  double between = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups)
  {
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      r += ranks[offset + i];
    between += r * r / static_cast<double>(g.size());
    offset += g.size();
  }
  double h = 12.0 / (n * (n + 1.0)) * between - 3.0 * (n + 1.0);
  h /= 1.0 - tie_term(pooled) / (n * n * n - n);
  h = std::max(0.0, h);

  res.statistic = h;
  const double df = static_cast<double>(groups.size() - 1);
  res.p_value = std::clamp(boost::math::gamma_q(df / 2.0, h / 2.0), 0.0, 1.0);
  return res;
}

// ============================================================================
/// True when the descending order of `inferred` within task m agrees with the
/// ground truth; traits tied in the ground truth may appear in any order.
[[nodiscard]] inline bool task_ordering_preserved(
    const PreferenceWeights& inferred, const PreferenceWeights& truth, std::size_t m)
{
  const std::size_t traits = truth.trait_count();
  std::vector<std::size_t> order(traits);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inferred(m, a) > inferred(m, b);
  });
  for (std::size_t i = 1; i < traits; ++i)
    if (truth(m, order[i]) > truth(m, order[i - 1]))
      return false;
  return true;
}

/// Fraction of tasks whose trait ordering is preserved.
[[nodiscard]] inline double ordering_accuracy(
    const PreferenceWeights& inferred, const PreferenceWeights& truth)
{
  if (inferred.task_count() != truth.task_count() || inferred.trait_count() != truth.trait_count())
    throw DimensionError(
        "ordering accuracy: shapes " + inferred.values().shape() + " and "
        + truth.values().shape() + " differ");
  if (truth.task_count() == 0)
    return 1.0;
  std::size_t ok = 0;
  for (std::size_t m = 0; m < truth.task_count(); ++m)
    ok += task_ordering_preserved(inferred, truth, m) ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(truth.task_count());
}

[[nodiscard]] inline double median(std::vector<double> v)
{
  if (v.empty())
    throw InvalidArgument("median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

} // namespace traitpref::stats
