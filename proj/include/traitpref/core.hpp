#pragma once

#include "traitpref/matrix.hpp"

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace traitpref {

// ============================================================================
/// Trait amounts per species (S x U). Rows are species, columns are traits.
class SpeciesTraitMatrix
{
public:
  SpeciesTraitMatrix() = default;

  explicit SpeciesTraitMatrix(
      Matrix<double> values, std::vector<std::string> trait_names = {})
    : values_{std::move(values)}, trait_names_{std::move(trait_names)}
  {
    if (values_.rows() == 0 || values_.cols() == 0)
      throw DimensionError(
          "species-trait matrix needs at least one species and one trait, got "
          + values_.shape());
    for (double v : values_.data())
      if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidArgument("species-trait entries must be finite and >= 0");
    if (!trait_names_.empty() && trait_names_.size() != values_.cols())
      throw DimensionError("trait name count does not match trait count");
  }

  [[nodiscard]] const Matrix<double>& values() const noexcept { return values_; }
  [[nodiscard]] std::size_t species_count() const noexcept { return values_.rows(); }
  [[nodiscard]] std::size_t trait_count() const noexcept { return values_.cols(); }
  [[nodiscard]] const std::vector<std::string>& trait_names() const noexcept
  {
    return trait_names_;
  }
  [[nodiscard]] double operator()(std::size_t s, std::size_t u) const noexcept
  {
    return values_(s, u);
  }

  friend bool operator==(const SpeciesTraitMatrix&, const SpeciesTraitMatrix&) = default;

private:
  Matrix<double> values_;
  std::vector<std::string> trait_names_;
};

// ============================================================================
/// Number of available agents per species (A_s).
class TeamComposition
{
public:
  TeamComposition() = default;

  explicit TeamComposition(std::vector<int> agents_per_species)
    : agents_{std::move(agents_per_species)}
  {
    for (int a : agents_)
      if (a < 0)
        throw InvalidArgument("agents per species must be >= 0");
  }

  [[nodiscard]] const std::vector<int>& agents() const noexcept { return agents_; }
  [[nodiscard]] std::size_t species_count() const noexcept { return agents_.size(); }
  [[nodiscard]] int operator[](std::size_t s) const noexcept { return agents_[s]; }
  [[nodiscard]] long total() const noexcept
  {
    return std::accumulate(agents_.begin(), agents_.end(), 0L);
  }

  friend bool operator==(const TeamComposition&, const TeamComposition&) = default;

private:
  std::vector<int> agents_;
};

// ============================================================================
/// Agents of each species assigned to each task (M x S, nonnegative integers).
class AssignmentMatrix
{
public:
  AssignmentMatrix() = default;

  explicit AssignmentMatrix(Matrix<int> counts) : counts_{std::move(counts)}
  {
    if (counts_.rows() == 0 || counts_.cols() == 0)
      throw DimensionError("assignment matrix must be non-empty, got " + counts_.shape());
    for (int v : counts_.data())
      if (v < 0)
        throw InvalidArgument("assignment counts must be >= 0");
  }

  [[nodiscard]] const Matrix<int>& counts() const noexcept { return counts_; }
  [[nodiscard]] std::size_t task_count() const noexcept { return counts_.rows(); }
  [[nodiscard]] std::size_t species_count() const noexcept { return counts_.cols(); }
  [[nodiscard]] int operator()(std::size_t m, std::size_t s) const noexcept
  {
    return counts_(m, s);
  }

  [[nodiscard]] int species_used(std::size_t s) const noexcept
  {
    int total = 0;
    for (std::size_t m = 0; m < counts_.rows(); ++m)
      total += counts_(m, s);
    return total;
  }

  [[nodiscard]] int task_size(std::size_t m) const noexcept
  {
    const auto r = counts_.row(m);
    return std::accumulate(r.begin(), r.end(), 0);
  }

  /// True when no species is used beyond its supply.
  [[nodiscard]] bool respects(const TeamComposition& team) const noexcept
  {
    if (team.species_count() != species_count())
      return false;
    for (std::size_t s = 0; s < species_count(); ++s)
      if (species_used(s) > team[s])
        return false;
    return true;
  }

  friend bool operator==(const AssignmentMatrix&, const AssignmentMatrix&) = default;

private:
  Matrix<int> counts_;
};

// ============================================================================
/// Aggregated (or target) trait amounts per task (M x U).
class TraitRequirementMatrix
{
public:
  TraitRequirementMatrix() = default;

  explicit TraitRequirementMatrix(Matrix<double> values) : values_{std::move(values)}
  {
    for (double v : values_.data())
      if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidArgument("trait requirement entries must be finite and >= 0");
  }

  [[nodiscard]] const Matrix<double>& values() const noexcept { return values_; }
  [[nodiscard]] std::size_t task_count() const noexcept { return values_.rows(); }
  [[nodiscard]] std::size_t trait_count() const noexcept { return values_.cols(); }
  [[nodiscard]] double operator()(std::size_t m, std::size_t u) const noexcept
  {
    return values_(m, u);
  }

  friend bool operator==(const TraitRequirementMatrix&, const TraitRequirementMatrix&) = default;

private:
  Matrix<double> values_;
};

// ============================================================================
/// Per-task per-trait importance (M x U), every entry in [0,1].
class PreferenceWeights
{
public:
  PreferenceWeights() = default;

  explicit PreferenceWeights(Matrix<double> values) : values_{std::move(values)}
  {
    for (double v : values_.data())
    {
      if (!(v >= 0.0))
        throw InvalidArgument("preference weights must be >= 0");
      if (v > 1.0)
        throw InvalidArgument("preference weights must be <= 1");
    }
  }

  /// Same weight row for every task.
  static PreferenceWeights broadcast(std::size_t tasks, const std::vector<double>& row)
  {
    Matrix<double> w(tasks, row.size());
    for (std::size_t m = 0; m < tasks; ++m)
      std::copy(row.begin(), row.end(), w.row(m).begin());
    return PreferenceWeights(std::move(w));
  }

  [[nodiscard]] const Matrix<double>& values() const noexcept { return values_; }
  [[nodiscard]] std::size_t task_count() const noexcept { return values_.rows(); }
  [[nodiscard]] std::size_t trait_count() const noexcept { return values_.cols(); }
  [[nodiscard]] double operator()(std::size_t m, std::size_t u) const noexcept
  {
    return values_(m, u);
  }

  friend bool operator==(const PreferenceWeights&, const PreferenceWeights&) = default;

private:
  Matrix<double> values_;
};

// ============================================================================
struct Demonstration
{
  AssignmentMatrix assignment;
  SpeciesTraitMatrix traits;
};

/// Expert demonstrations sharing task and trait dimensions. Species count may
/// differ between records.
class DemonstrationSet
{
public:
  DemonstrationSet() = default;

  explicit DemonstrationSet(std::vector<Demonstration> records)
    : records_{std::move(records)}
  {
    if (records_.empty())
      throw InvalidArgument("demonstration set is empty");
    const std::size_t tasks = records_.front().assignment.task_count();
    const std::size_t traits = records_.front().traits.trait_count();
    for (std::size_t i = 0; i < records_.size(); ++i)
    {
      const auto& rec = records_[i];
      if (rec.assignment.species_count() != rec.traits.species_count())
        throw DimensionError(
            "demonstration " + std::to_string(i) + ": assignment "
            + rec.assignment.counts().shape() + " does not match traits "
            + rec.traits.values().shape());
      if (rec.assignment.task_count() != tasks || rec.traits.trait_count() != traits)
        throw DimensionError(
            "demonstration " + std::to_string(i)
            + " has different task or trait count than the first record");
    }
  }

  [[nodiscard]] const std::vector<Demonstration>& records() const noexcept { return records_; }
  [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
  [[nodiscard]] std::size_t task_count() const noexcept
  {
    return records_.empty() ? 0 : records_.front().assignment.task_count();
  }
  [[nodiscard]] std::size_t trait_count() const noexcept
  {
    return records_.empty() ? 0 : records_.front().traits.trait_count();
  }
  [[nodiscard]] const Demonstration& operator[](std::size_t i) const noexcept
  {
    return records_[i];
  }

  /// First `n` records.
  [[nodiscard]] DemonstrationSet prefix(std::size_t n) const
  {
    if (n == 0 || n > records_.size())
      throw InvalidArgument("prefix length out of range");
    return DemonstrationSet(
        std::vector<Demonstration>(records_.begin(), records_.begin() + n));
  }

private:
  std::vector<Demonstration> records_;
};

// ============================================================================
/// Y = X Q: total amount of each trait allocated to each task.
[[nodiscard]] inline TraitRequirementMatrix trait_aggregation(
    const AssignmentMatrix& x, const SpeciesTraitMatrix& q)
{
  if (x.species_count() != q.species_count())
    throw DimensionError(
        "trait aggregation: assignment is " + x.counts().shape()
        + " but species-trait matrix is " + q.values().shape());

  Matrix<double> y(x.task_count(), q.trait_count(), 0.0);
  for (std::size_t m = 0; m < x.task_count(); ++m)
    for (std::size_t s = 0; s < x.species_count(); ++s)
    {
      const int n = x(m, s);
      if (n == 0)
        continue;
      for (std::size_t u = 0; u < q.trait_count(); ++u)
        y(m, u) += n * q(s, u);
    }
  return TraitRequirementMatrix(std::move(y));
}

namespace detail {

inline void require_same_shape(
    const Matrix<double>& a, const Matrix<double>& b, const char* what)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(
        std::string(what) + ": shapes " + a.shape() + " and " + b.shape() + " differ");
}

} // namespace detail

/// Squared weighted residual of one task row.
[[nodiscard]] inline double task_squared_mismatch(
    const TraitRequirementMatrix& target,
    const TraitRequirementMatrix& achieved,
    const PreferenceWeights& w,
    std::size_t task)
{
  double sum = 0.0;
  for (std::size_t u = 0; u < target.trait_count(); ++u)
  {
    const double d = target(task, u) - achieved(task, u);
    sum += w(task, u) * d * d;
  }
  return sum;
}

/// sqrt( sum_{m,u} W_mu (target_mu - achieved_mu)^2 ).
[[nodiscard]] inline double weighted_mismatch(
    const TraitRequirementMatrix& target,
    const TraitRequirementMatrix& achieved,
    const PreferenceWeights& w)
{
  detail::require_same_shape(target.values(), achieved.values(), "weighted mismatch");
  detail::require_same_shape(target.values(), w.values(), "weighted mismatch weights");

  double total = 0.0;
  for (std::size_t m = 0; m < target.task_count(); ++m)
    total += task_squared_mismatch(target, achieved, w, m);
  return std::sqrt(total);
}

/// Per-task weighted mismatch, one entry per task row.
[[nodiscard]] inline std::vector<double> per_task_mismatch(
    const TraitRequirementMatrix& target,
    const TraitRequirementMatrix& achieved,
    const PreferenceWeights& w)
{
  detail::require_same_shape(target.values(), achieved.values(), "per-task mismatch");
  detail::require_same_shape(target.values(), w.values(), "per-task mismatch weights");

  std::vector<double> out(target.task_count());
  for (std::size_t m = 0; m < out.size(); ++m)
    out[m] = std::sqrt(task_squared_mismatch(target, achieved, w, m));
  return out;
}

} // namespace traitpref
