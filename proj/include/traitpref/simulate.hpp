#pragma once

#include "traitpref/core.hpp"
#include "traitpref/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace traitpref {

// ============================================================================
/// Synthetic expert setup: Gaussian species traits, ground-truth preferences
/// and team supply.
struct SimulationScenario
{
  std::string name = "custom";
  Matrix<double> mu;    // S x U trait means
  Matrix<double> sigma; // S x U trait standard deviations
  PreferenceWeights w_star;
  TeamComposition supply;
  std::size_t task_count = 3;
  std::size_t demo_count = 1000;
  std::uint64_t seed = 1;
  // Assignment that defines Y* = X0 * mu. Drawn at random when absent.
  std::optional<AssignmentMatrix> target_assignment;

  [[nodiscard]] std::size_t species_count() const noexcept { return mu.rows(); }
  [[nodiscard]] std::size_t trait_count() const noexcept { return mu.cols(); }

  void validate() const
  {
    if (mu.rows() == 0 || mu.cols() == 0)
      throw InvalidArgument("scenario: mu must be non-empty");
    if (sigma.rows() != mu.rows() || sigma.cols() != mu.cols())
      throw DimensionError(
          "scenario: sigma is " + sigma.shape() + " but mu is " + mu.shape());
    for (double v : sigma.data())
      if (!(v >= 0.0))
        throw InvalidArgument("scenario: sigma entries must be >= 0");
    if (w_star.task_count() != task_count || w_star.trait_count() != mu.cols())
      throw DimensionError(
          "scenario: w_star is " + w_star.values().shape() + ", expected "
          + std::to_string(task_count) + "x" + std::to_string(mu.cols()));
    if (supply.species_count() != mu.rows())
      throw DimensionError("scenario: supply does not list one count per species");
    if (task_count == 0)
      throw InvalidArgument("scenario: task count must be positive");
    if (target_assignment)
    {
      if (target_assignment->task_count() != task_count
          || target_assignment->species_count() != mu.rows())
        throw DimensionError(
            "scenario: target assignment is " + target_assignment->counts().shape()
            + ", expected " + std::to_string(task_count) + "x" + std::to_string(mu.rows()));
      if (!target_assignment->respects(supply))
        throw InvalidArgument("scenario: target assignment exceeds the species supply");
    }
  }
};

/// Independent random streams derived from one scenario seed.
enum class SampleStream : std::uint64_t
{
  demonstration = 1,
  target = 2,
  evaluation = 3,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) noexcept
{
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace detail

[[nodiscard]] inline std::uint64_t derive_seed(
    std::uint64_t seed, SampleStream stream, std::uint64_t index) noexcept
{
  return detail::splitmix64(
      detail::splitmix64(seed ^ (static_cast<std::uint64_t>(stream) << 56)) + index);
}

// ============================================================================
inline constexpr const char* paper_preset_names[] = {
    "paper-w1", "paper-w2", "paper-w3", "paper-w4"};

/// The four hand-crafted ground-truth preference rows, applied to every task.
[[nodiscard]] inline std::vector<double> paper_preset_weights(std::size_t preset)
{
  switch (preset)
  {
    case 1: return {0.0, 1.0, 0.0};
    case 2: return {0.6, 0.3, 0.1};
    case 3: return {0.8, 0.1, 0.1};
    case 4: return {0.5, 0.3, 0.2};
    default: throw InvalidArgument("paper presets are numbered 1..4");
  }
}

/// Three species, three tasks, three traits, 15 agents per species. The
/// ground-truth requirement puts two agents of every species on every task.
[[nodiscard]] inline SimulationScenario paper_scenario(std::size_t preset, std::uint64_t seed = 1)
{
  SimulationScenario sc;
  sc.name = paper_preset_names[(preset >= 1 && preset <= 4) ? preset - 1 : 0];
  sc.mu = Matrix<double>{{10, 5, 20}, {5, 20, 10}, {20, 10, 5}};
  sc.sigma = Matrix<double>{{2, 1, 3}, {1, 3, 2}, {3, 2, 1}};
  sc.task_count = 3;
  sc.w_star = PreferenceWeights::broadcast(3, paper_preset_weights(preset));
  sc.supply = TeamComposition({15, 15, 15});
  sc.demo_count = 1000;
  sc.seed = seed;
  sc.target_assignment = AssignmentMatrix(Matrix<int>(3, 3, 2));
  return sc;
}

[[nodiscard]] inline SimulationScenario paper_scenario(const std::string& name, std::uint64_t seed = 1)
{
  for (std::size_t i = 0; i < 4; ++i)
    if (name == paper_preset_names[i])
      return paper_scenario(i + 1, seed);
  throw InvalidArgument("unknown scenario preset '" + name + "'");
}

// ============================================================================
/// One species-trait matrix drawn cell-wise from Normal(mu, sigma); negative
/// draws are clamped to zero.
[[nodiscard]] inline SpeciesTraitMatrix sample_traits(
    const SimulationScenario& sc,
    std::uint64_t index,
    SampleStream stream = SampleStream::demonstration)
{
  std::mt19937_64 rng(derive_seed(sc.seed, stream, index));
  Matrix<double> q(sc.mu.rows(), sc.mu.cols());
  for (std::size_t s = 0; s < q.rows(); ++s)
    for (std::size_t u = 0; u < q.cols(); ++u)
    {
      const double sd = sc.sigma(s, u);
      double v = sc.mu(s, u);
      if (sd > 0.0)
        v = std::normal_distribution<double>(sc.mu(s, u), sd)(rng);
      q(s, u) = std::max(0.0, v);
    }
  return SpeciesTraitMatrix(std::move(q));
}

/// Random feasible assignment: every agent independently joins one of the
/// tasks or stays idle, each with equal probability.
[[nodiscard]] inline AssignmentMatrix random_feasible_assignment(
    const SimulationScenario& sc, std::mt19937_64& rng)
{
  Matrix<int> x(sc.task_count, sc.species_count(), 0);
  std::uniform_int_distribution<std::size_t> slot(0, sc.task_count);
  for (std::size_t s = 0; s < sc.species_count(); ++s)
    for (int k = 0; k < sc.supply[s]; ++k)
    {
      const std::size_t m = slot(rng);
      if (m < sc.task_count)
        ++x(m, s);
    }
  return AssignmentMatrix(std::move(x));
}

/// Ground-truth requirement Y* = X0 * mu, with X0 the scenario's target
/// assignment or, when it has none, a seeded random feasible assignment.
[[nodiscard]] inline TraitRequirementMatrix make_y_star(const SimulationScenario& sc)
{
  sc.validate();
  if (sc.target_assignment)
    return trait_aggregation(*sc.target_assignment, SpeciesTraitMatrix(sc.mu));
  std::mt19937_64 rng(derive_seed(sc.seed, SampleStream::target, 0));
  const auto x0 = random_feasible_assignment(sc, rng);
  return trait_aggregation(x0, SpeciesTraitMatrix(sc.mu));
}

[[nodiscard]] inline AllocationConstraints expert_constraints(const SimulationScenario& sc)
{
  return AllocationConstraints(sc.supply, std::nullopt, SolveMode::exact, sc.seed);
}

/// Expert demonstrations: for each record sample Q and solve the weighted
/// allocation exactly against (y_star, w_star).
[[nodiscard]] inline DemonstrationSet generate_demonstrations(
    const SimulationScenario& sc, const TraitRequirementMatrix& y_star)
{
  sc.validate();
  if (y_star.task_count() != sc.task_count || y_star.trait_count() != sc.trait_count())
    throw DimensionError(
        "generate_demonstrations: y_star is " + y_star.values().shape() + ", expected "
        + std::to_string(sc.task_count) + "x" + std::to_string(sc.trait_count()));
  if (sc.demo_count == 0)
    throw InvalidArgument("scenario demo_count must be positive");

  const auto constraints = expert_constraints(sc);
  std::vector<Demonstration> records;
  records.reserve(sc.demo_count);
  for (std::size_t i = 0; i < sc.demo_count; ++i)
  {
    auto q = sample_traits(sc, i);
    auto res = allocate(y_star, q, sc.w_star, constraints);
    records.push_back({std::move(res.assignment), std::move(q)});
  }
  return DemonstrationSet(std::move(records));
}

} // namespace traitpref
