#pragma once

#include "traitpref/core.hpp"
#include "traitpref/fifa.hpp"
#include "traitpref/inference.hpp"
#include "traitpref/simulate.hpp"
#include "traitpref/solver.hpp"
#include "traitpref/stats.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace traitpref {

// ============================================================================
// Synthetic expert study
// ============================================================================

struct ExpertStudy
{
  SimulationScenario scenario;
  TraitRequirementMatrix y_star;
  DemonstrationSet demos;
};

[[nodiscard]] inline ExpertStudy run_expert_study(const SimulationScenario& sc)
{
  auto y_star = make_y_star(sc);
  auto demos = generate_demonstrations(sc, y_star);
  return {sc, std::move(y_star), std::move(demos)};
}

/// Records [first, first + count) as their own set.
[[nodiscard]] inline DemonstrationSet demo_block(
    const DemonstrationSet& demos, std::size_t first, std::size_t count)
{
  if (first + count > demos.size() || count == 0)
    throw InvalidArgument(
        "demo block [" + std::to_string(first) + ", " + std::to_string(first + count)
        + ") outside a set of " + std::to_string(demos.size()));
  std::vector<Demonstration> records(
      demos.records().begin() + static_cast<std::ptrdiff_t>(first),
      demos.records().begin() + static_cast<std::ptrdiff_t>(first + count));
  return DemonstrationSet(std::move(records));
}

struct SweepRow
{
  std::size_t demo_count = 0;
  double accuracy = 0.0; // mean ordering accuracy over the blocks
  std::size_t blocks = 0;
};

/// Ordering accuracy as a function of the number of demonstrations. For each
/// count N the set is cut into floor(size / N) disjoint blocks of N records,
/// weights are inferred from each block, and accuracies are averaged.
[[nodiscard]] inline std::vector<SweepRow> demo_count_sweep(
    const DemonstrationSet& demos,
    const PreferenceWeights& w_star,
    const std::vector<std::size_t>& counts,
    const WeightFunctionParams& params = {})
{
  std::vector<SweepRow> rows;
  for (std::size_t n : counts)
  {
    if (n < 2 || n > demos.size())
      throw InvalidArgument(
          "sweep count " + std::to_string(n) + " outside [2, " + std::to_string(demos.size()) + "]");
    SweepRow row;
    row.demo_count = n;
    row.blocks = demos.size() / n;
    double sum = 0.0;
    for (std::size_t b = 0; b < row.blocks; ++b)
    {
      const auto inferred = infer_weights(demo_block(demos, b * n, n), params);
      sum += stats::ordering_accuracy(inferred.weights, w_star);
    }
    row.accuracy = sum / static_cast<double>(row.blocks);
    rows.push_back(row);
  }
  return rows;
}

[[nodiscard]] inline std::vector<std::size_t> default_sweep_counts()
{
  return {100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
}

// ============================================================================
// Allocation quality on fresh teams
// ============================================================================

struct WeightScheme
{
  std::string name;
  PreferenceWeights weights;
};

/// No-preference, no-inherent-diversity and full inference, in that order.
[[nodiscard]] inline std::vector<WeightScheme> standard_schemes(
    const DemonstrationSet& demos, const WeightFunctionParams& params = {})
{
  return {
      {"no-preference", baseline_no_preference(demos)},
      {"no-diversity", baseline_no_inherent_diversity(demos, params).weights},
      {"inferred", infer_weights(demos, params).weights},
  };
}

struct PairwiseTest
{
  std::size_t first = 0;
  std::size_t second = 0;
  stats::TestResult result;
};

struct TaskComparison
{
  std::vector<double> medians; // per scheme
  std::optional<stats::TestResult> kruskal;
  std::vector<PairwiseTest> pairs;
};

struct QualityReport
{
  std::vector<std::string> schemes;
  // errors[scheme][task][trial]
  std::vector<std::vector<std::vector<double>>> errors;
  std::vector<TaskComparison> tasks;
};

/// Per-task error sqrt(sum_u w(m,u) * (target(m,u) - y(m,u))^2).
[[nodiscard]] inline std::vector<double> weighted_task_errors(
    const TraitRequirementMatrix& target,
    const TraitRequirementMatrix& achieved,
    const PreferenceWeights& w)
{
  return per_task_mismatch(target, achieved, w);
}

/// Allocate `trials` fresh teams under every scheme and score each allocation
/// by its per-task error under `scoring` weights. Pairwise Mann-Whitney tests
/// cover every scheme pair (i < j); Kruskal-Wallis runs when there are three
/// or more schemes.
[[nodiscard]] inline QualityReport compare_allocations(
    const SimulationScenario& sc,
    const TraitRequirementMatrix& target,
    const std::vector<WeightScheme>& schemes,
    const PreferenceWeights& scoring,
    std::size_t trials,
    std::uint64_t seed)
{
  if (schemes.empty())
    throw InvalidArgument("compare_allocations: no weight schemes");
  if (trials == 0)
    throw InvalidArgument("compare_allocations: trials must be positive");

  SimulationScenario fresh = sc;
  fresh.seed = seed;
  const std::size_t tasks = target.task_count();
  const AllocationConstraints constraints(sc.supply, std::nullopt, SolveMode::exact, seed);

  QualityReport rep;
  rep.errors.assign(schemes.size(), std::vector<std::vector<double>>(tasks));
  for (const auto& s : schemes)
    rep.schemes.push_back(s.name);

  for (std::size_t t = 0; t < trials; ++t)
  {
    const auto q = sample_traits(fresh, t, SampleStream::evaluation);
    for (std::size_t k = 0; k < schemes.size(); ++k)
    {
      const auto res = allocate(target, q, schemes[k].weights, constraints);
      const auto err = weighted_task_errors(target, trait_aggregation(res.assignment, q), scoring);
      for (std::size_t m = 0; m < tasks; ++m)
        rep.errors[k][m].push_back(err[m]);
    }
  }

  for (std::size_t m = 0; m < tasks; ++m)
  {
    TaskComparison cmp;
    std::vector<std::vector<double>> groups;
    for (std::size_t k = 0; k < schemes.size(); ++k)
    {
      cmp.medians.push_back(stats::median(rep.errors[k][m]));
      groups.push_back(rep.errors[k][m]);
    }
    if (trials >= 3)
    {
      if (schemes.size() >= 3)
        cmp.kruskal = stats::kruskal_wallis(groups);
      for (std::size_t i = 0; i < schemes.size(); ++i)
        for (std::size_t j = i + 1; j < schemes.size(); ++j)
          cmp.pairs.push_back({i, j, stats::mann_whitney_u(groups[i], groups[j])});
    }
    rep.tasks.push_back(std::move(cmp));
  }
  return rep;
}

// ============================================================================
// FIFA trait-count study
// ============================================================================

struct FifaKRow
{
  std::size_t k = 0;
  double median_score = 0.0;
  double median_time_ms = 0.0;
  double normalized_score = 0.0; // relative to the inferred-weight run on all traits
  double normalized_time = 0.0;
  double baseline_relative_score = 0.0; // relative to the uniform-weight run
  double baseline_relative_time = 0.0;
};

struct FifaStudy
{
  fifa::SquadDemonstrations squads;
  InferenceResult inference;
  std::vector<fifa::Team> teams;
  std::vector<fifa::TeamReport> baseline; // uniform weights, all traits
  std::vector<std::size_t> k_values;
  std::vector<std::vector<fifa::TeamReport>> reports; // [k index][team]
  double baseline_median_score = 0.0;
  double baseline_median_time_ms = 0.0;
  std::vector<FifaKRow> rows;
};

[[nodiscard]] inline double to_ms(std::chrono::nanoseconds t) noexcept
{
  return std::chrono::duration<double, std::milli>(t).count();
}

/// Infer position preferences from squads, then allocate random teams with the
/// top-k traits for every k and with uniform weights on all traits. Runs for
/// one team are interleaved so timing drift affects all k alike.
[[nodiscard]] inline FifaStudy run_fifa_study(
    const std::vector<fifa::PlayerRecord>& players,
    std::vector<std::size_t> k_values,
    std::size_t team_count,
    std::uint64_t seed,
    const WeightFunctionParams& params = {},
    std::size_t timing_repeats = 3)
{
  if (players.empty())
    throw InvalidArgument("fifa study: no players");
  const std::size_t traits = players.front().traits.size();
  if (k_values.empty())
    k_values.push_back(traits);
  for (auto& k : k_values)
    if (k == 0 || k > traits)
      throw InvalidArgument("k = " + std::to_string(k) + " outside [1, " + std::to_string(traits) + "]");
  if (team_count == 0)
    throw InvalidArgument("fifa study: team count must be positive");
  timing_repeats = std::max<std::size_t>(1, timing_repeats);

  FifaStudy st;
  st.squads = fifa::build_demonstrations(players, seed);
  st.inference = infer_weights(st.squads.demos, params);
  st.k_values = k_values;
  st.reports.assign(k_values.size(), {});
  const auto uniform = baseline_no_preference(st.squads.demos);

  auto timed = [&](const fifa::Team& team, const PreferenceWeights& w, std::size_t k) {
    auto rep = fifa::evaluate_team(players, team, st.squads.target, w, k);
    for (std::size_t r = 1; r < timing_repeats; ++r)
      rep.wall_time = std::min(
          rep.wall_time, fifa::evaluate_team(players, team, st.squads.target, w, k).wall_time);
    return rep;
  };

  for (std::size_t t = 0; t < team_count; ++t)
  {
    st.teams.push_back(fifa::sample_team(players, seed, t));
    const auto& team = st.teams.back();
    st.baseline.push_back(timed(team, uniform, traits));
    for (std::size_t i = 0; i < k_values.size(); ++i)
      st.reports[i].push_back(timed(team, st.inference.weights, k_values[i]));
  }

  auto medians = [](const std::vector<fifa::TeamReport>& reps) {
    std::vector<double> score, time;
    for (const auto& r : reps)
    {
      score.push_back(r.score);
      time.push_back(to_ms(r.wall_time));
    }
    return std::pair{stats::median(score), stats::median(time)};
  };

  std::tie(st.baseline_median_score, st.baseline_median_time_ms) = medians(st.baseline);

  // anchor: inferred weights on every trait
  const auto full = medians([&] {
    for (std::size_t i = 0; i < k_values.size(); ++i)
      if (k_values[i] == traits)
        return st.reports[i];
    std::vector<fifa::TeamReport> reps;
    for (const auto& team : st.teams)
      reps.push_back(timed(team, st.inference.weights, traits));
    return reps;
  }());

  auto ratio = [](double a, double b) { return b > 0.0 ? a / b : 0.0; };
  for (std::size_t i = 0; i < k_values.size(); ++i)
  {
    FifaKRow row;
    row.k = k_values[i];
    std::tie(row.median_score, row.median_time_ms) = medians(st.reports[i]);
    row.normalized_score = ratio(row.median_score, full.first);
    row.normalized_time = ratio(row.median_time_ms, full.second);
    row.baseline_relative_score = ratio(row.median_score, st.baseline_median_score);
    row.baseline_relative_time = ratio(row.median_time_ms, st.baseline_median_time_ms);
    st.rows.push_back(row);
  }
  return st;
}

} // namespace traitpref
