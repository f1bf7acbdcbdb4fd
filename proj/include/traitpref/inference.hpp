#pragma once

#include "traitpref/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace traitpref {

// ============================================================================
/// Parameters of the cosine weight function
///   W = (cv_div / tau) * cos(alpha * cv_obs + beta) + c
struct WeightFunctionParams
{
  double alpha = 2.0;
  double beta = 0.5;
  double tau = 2.0;
  double c = 0.5;

  static WeightFunctionParams make(double alpha, double beta, double tau, double c)
  {
    if (!(tau > 0.0))
      throw InvalidArgument("weight function tau must be > 0");
    return {alpha, beta, tau, c};
  }

  friend bool operator==(const WeightFunctionParams&, const WeightFunctionParams&) = default;
};

/// Intermediate statistics of the inference, kept for auditing.
struct VariationStats
{
  Matrix<double> cv_obs;        // M x U, clamped to [0,1]
  Matrix<double> aggregate_mean;  // M x U, mean of Y over demonstrations
  Matrix<double> aggregate_std;   // M x U, population std of Y
  std::vector<double> cv_div;   // U, clamped to [0,1]
  std::vector<double> trait_mean; // U, mean over stacked species rows
  std::vector<double> trait_std;  // U
  bool obs_zero_mean = false;   // some cell had mean 0 and spread > 0
  bool div_zero_mean = false;
};

// ============================================================================
namespace detail {

struct Moments
{
  double mean = 0.0;
  double stddev = 0.0;
};

// Population moments. Values are summed in sorted order so the result does not
// depend on the order the samples arrived in.
inline Moments population_moments(std::vector<double> values)
{
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values)
    ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

// std / mean clamped to [0,1]; 0/0 -> 0, x/0 -> 1 with `zero_mean` raised.
inline double clamped_cv(const Moments& mo, bool& zero_mean)
{
  if (mo.stddev == 0.0)
    return 0.0;
  if (mo.mean == 0.0)
  {
    zero_mean = true;
    return 1.0;
  }
  return std::clamp(mo.stddev / std::abs(mo.mean), 0.0, 1.0);
}

} // namespace detail

// ============================================================================
/// Y^(i) = X^(i) Q^(i) for every demonstration.
[[nodiscard]] inline std::vector<TraitRequirementMatrix> aggregate_demonstrations(
    const DemonstrationSet& demos)
{
  std::vector<TraitRequirementMatrix> out;
  out.reserve(demos.size());
  for (const auto& rec : demos.records())
    out.push_back(trait_aggregation(rec.assignment, rec.traits));
  return out;
}

struct ObservedVariation
{
  Matrix<double> cv;
  Matrix<double> mean;
  Matrix<double> stddev;
  bool zero_mean = false;
};

/// Coefficient of variation of each aggregated trait across demonstrations.
[[nodiscard]] inline ObservedVariation observed_variation(const DemonstrationSet& demos)
{
  if (demos.size() < 2)
    throw InvalidArgument("observed variation needs at least two demonstrations");

  const auto ys = aggregate_demonstrations(demos);
  const std::size_t tasks = demos.task_count();
  const std::size_t traits = demos.trait_count();

  ObservedVariation out{
      Matrix<double>(tasks, traits), Matrix<double>(tasks, traits),
      Matrix<double>(tasks, traits), false};
  std::vector<double> cell(ys.size());
  for (std::size_t m = 0; m < tasks; ++m)
    for (std::size_t u = 0; u < traits; ++u)
    {
      for (std::size_t i = 0; i < ys.size(); ++i)
        cell[i] = ys[i](m, u);
      const auto mo = detail::population_moments(cell);
      out.mean(m, u) = mo.mean;
      out.stddev(m, u) = mo.stddev;
      out.cv(m, u) = detail::clamped_cv(mo, out.zero_mean);
    }
  return out;
}

struct InherentDiversity
{
  std::vector<double> cv;
  std::vector<double> mean;
  std::vector<double> stddev;
  bool zero_mean = false;
};

/// Coefficient of variation of each trait over all species rows of all
/// demonstrations stacked together.
[[nodiscard]] inline InherentDiversity inherent_diversity(const DemonstrationSet& demos)
{
  std::size_t stacked = 0;
  for (const auto& rec : demos.records())
    stacked += rec.traits.species_count();
  if (stacked < 2)
    throw InvalidArgument("inherent diversity needs at least two stacked species rows");

  const std::size_t traits = demos.trait_count();
  InherentDiversity out{
      std::vector<double>(traits), std::vector<double>(traits),
      std::vector<double>(traits), false};
  std::vector<double> column;
  column.reserve(stacked);
  for (std::size_t u = 0; u < traits; ++u)
  {
    column.clear();
    for (const auto& rec : demos.records())
      for (std::size_t s = 0; s < rec.traits.species_count(); ++s)
        column.push_back(rec.traits(s, u));
    const auto mo = detail::population_moments(column);
    out.mean[u] = mo.mean;
    out.stddev[u] = mo.stddev;
    out.cv[u] = detail::clamped_cv(mo, out.zero_mean);
  }
  return out;
}

// ============================================================================
/// Combine observed variation (M x U) with inherent diversity (U, broadcast
/// across tasks) into preference weights clamped to [0,1].
[[nodiscard]] inline PreferenceWeights weight_function(
    const Matrix<double>& cv_obs,
    const std::vector<double>& cv_div,
    const WeightFunctionParams& params = {})
{
  if (!(params.tau > 0.0))
    throw InvalidArgument("weight function tau must be > 0");
  if (cv_obs.cols() != cv_div.size())
    throw DimensionError(
        "weight function: cv_obs is " + cv_obs.shape() + " but cv_div has "
        + std::to_string(cv_div.size()) + " entries");

  Matrix<double> w(cv_obs.rows(), cv_obs.cols());
  for (std::size_t m = 0; m < cv_obs.rows(); ++m)
    for (std::size_t u = 0; u < cv_obs.cols(); ++u)
    {
      const double v = (cv_div[u] / params.tau)
                           * std::cos(params.alpha * cv_obs(m, u) + params.beta)
                       + params.c;
      w(m, u) = std::clamp(v, 0.0, 1.0);
    }
  return PreferenceWeights(std::move(w));
}

struct InferenceResult
{
  PreferenceWeights weights;
  VariationStats stats;
};

namespace detail {

inline VariationStats make_stats(ObservedVariation obs, InherentDiversity div)
{
  VariationStats st;
  st.cv_obs = std::move(obs.cv);
  st.aggregate_mean = std::move(obs.mean);
  st.aggregate_std = std::move(obs.stddev);
  st.obs_zero_mean = obs.zero_mean;
  st.cv_div = std::move(div.cv);
  st.trait_mean = std::move(div.mean);
  st.trait_std = std::move(div.stddev);
  st.div_zero_mean = div.zero_mean;
  return st;
}

} // namespace detail

/// Infer trait preferences from demonstrations: aggregate, measure observed
/// variation and inherent diversity, then apply the weight function.
[[nodiscard]] inline InferenceResult infer_weights(
    const DemonstrationSet& demos, const WeightFunctionParams& params = {})
{
  auto obs = observed_variation(demos);
  auto div = inherent_diversity(demos);
  auto stats = detail::make_stats(std::move(obs), std::move(div));
  auto weights = weight_function(stats.cv_obs, stats.cv_div, params);
  return {std::move(weights), std::move(stats)};
}

/// Baseline that treats every trait as equally important.
[[nodiscard]] inline PreferenceWeights baseline_no_preference(const DemonstrationSet& demos)
{
  return PreferenceWeights(Matrix<double>(demos.task_count(), demos.trait_count(), 1.0));
}

/// Baseline that ignores inherent diversity (cv_div fixed at 0.5).
[[nodiscard]] inline InferenceResult baseline_no_inherent_diversity(
    const DemonstrationSet& demos, const WeightFunctionParams& params = {})
{
  auto obs = observed_variation(demos);
  VariationStats stats;
  stats.cv_obs = std::move(obs.cv);
  stats.aggregate_mean = std::move(obs.mean);
  stats.aggregate_std = std::move(obs.stddev);
  stats.obs_zero_mean = obs.zero_mean;
  stats.cv_div.assign(demos.trait_count(), 0.5);
  auto weights = weight_function(stats.cv_obs, stats.cv_div, params);
  return {std::move(weights), std::move(stats)};
}

// ============================================================================
struct TopKSelection
{
  std::vector<std::size_t> traits; // ascending original indices
  PreferenceWeights weights;       // M x k
};

/// Keep the k traits with the highest mean weight across tasks. Ties go to the
/// lower trait index.
[[nodiscard]] inline TopKSelection top_k_traits(const PreferenceWeights& w, std::size_t k)
{
  const std::size_t traits = w.trait_count();
  if (k < 1 || k > traits)
    throw InvalidArgument(
        "top-k: k=" + std::to_string(k) + " outside [1, " + std::to_string(traits) + "]");

  std::vector<double> mean(traits, 0.0);
  for (std::size_t u = 0; u < traits; ++u)
  {
    for (std::size_t m = 0; m < w.task_count(); ++m)
      mean[u] += w(m, u);
    mean[u] /= static_cast<double>(w.task_count());
  }

  std::vector<std::size_t> order(traits);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mean[a] > mean[b];
  });
  order.resize(k);
  std::sort(order.begin(), order.end());

  return {order, PreferenceWeights(select_columns(w.values(), std::span<const std::size_t>(order)))};
}

// ============================================================================
struct HeatmapCell
{
  double cv_obs;
  double cv_div;
  double weight;
};

/// Weight function sampled on a regular (cv_obs, cv_div) grid over [0,1]^2.
[[nodiscard]] inline std::vector<HeatmapCell> weight_heatmap(
    std::size_t steps, const WeightFunctionParams& params = {})
{
  if (steps < 2)
    throw InvalidArgument("heatmap needs at least two steps per axis");
  std::vector<HeatmapCell> cells;
  cells.reserve(steps * steps);
  for (std::size_t i = 0; i < steps; ++i)
    for (std::size_t j = 0; j < steps; ++j)
    {
      const double obs = static_cast<double>(j) / static_cast<double>(steps - 1);
      const double div = static_cast<double>(i) / static_cast<double>(steps - 1);
      Matrix<double> cv(1, 1, obs);
      const auto w = weight_function(cv, {div}, params);
      cells.push_back({obs, div, w(0, 0)});
    }
  return cells;
}

} // namespace traitpref
