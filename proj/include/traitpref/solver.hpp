#pragma once

#include "traitpref/core.hpp"
#include "traitpref/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace traitpref {

enum class SolveMode
{
  exact,
  local,
  automatic,
};

[[nodiscard]] inline const char* to_string(SolveMode mode) noexcept
{
  switch (mode)
  {
    case SolveMode::exact: return "exact";
    case SolveMode::local: return "local";
    case SolveMode::automatic: return "auto";
  }
  return "?";
}

[[nodiscard]] inline SolveMode parse_solve_mode(const std::string& s)
{
  if (s == "exact")
    return SolveMode::exact;
  if (s == "local")
    return SolveMode::local;
  if (s == "auto")
    return SolveMode::automatic;
  throw InvalidArgument("unknown solve mode '" + s + "' (expected exact|local|auto)");
}

struct LocalSearchOptions
{
  // Per-restart evaluation budget is iterations_per_cell * M * S.
  std::size_t iterations_per_cell = 200;
  std::size_t restarts = 10;
};

// ============================================================================
class AllocationConstraints
{
public:
  /// Exact-mode problems whose feasible space is at most this many
  /// assignments are solved exactly when the mode is `automatic`.
  static constexpr double auto_exact_limit = 1e7;

  AllocationConstraints() = default;

  explicit AllocationConstraints(
      TeamComposition supply,
      std::optional<std::vector<int>> task_cardinality = std::nullopt,
      SolveMode mode = SolveMode::automatic,
      std::uint64_t seed = 0)
    : supply_{std::move(supply)},
      cardinality_{std::move(task_cardinality)},
      mode_{mode},
      seed_{seed}
  {
    if (cardinality_)
    {
      long needed = 0;
      for (int c : *cardinality_)
      {
        if (c < 0)
          throw InvalidArgument("task cardinality must be >= 0");
        needed += c;
      }
      if (needed > supply_.total())
        throw InfeasibleError(
            "task cardinalities require " + std::to_string(needed)
            + " agents but only " + std::to_string(supply_.total()) + " are available");
    }
  }

  [[nodiscard]] const TeamComposition& supply() const noexcept { return supply_; }
  [[nodiscard]] const std::optional<std::vector<int>>& task_cardinality() const noexcept
  {
    return cardinality_;
  }
  [[nodiscard]] SolveMode mode() const noexcept { return mode_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] const LocalSearchOptions& local_search() const noexcept { return local_; }

  AllocationConstraints with_mode(SolveMode mode) const
  {
    auto copy = *this;
    copy.mode_ = mode;
    return copy;
  }

  AllocationConstraints with_local_search(LocalSearchOptions opts) const
  {
    auto copy = *this;
    copy.local_ = opts;
    return copy;
  }

private:
  TeamComposition supply_;
  std::optional<std::vector<int>> cardinality_;
  SolveMode mode_ = SolveMode::automatic;
  std::uint64_t seed_ = 0;
  LocalSearchOptions local_;
};

struct AllocationResult
{
  AssignmentMatrix assignment;
  double objective = 0.0;
  bool optimal = false;
  std::uint64_t nodes_explored = 0; // branch-and-bound nodes or local-search evaluations
  std::chrono::nanoseconds wall_time{0};
  SolveMode mode_used = SolveMode::exact;
};

// ============================================================================
/// Mean of the aggregated trait matrices over all demonstrations.
[[nodiscard]] inline TraitRequirementMatrix estimate_target(const DemonstrationSet& demos)
{
  if (demos.size() == 0)
    throw InvalidArgument("cannot estimate a target from an empty demonstration set");

  Matrix<double> sum(demos.task_count(), demos.trait_count(), 0.0);
  for (const auto& rec : demos.records())
  {
    const auto y = trait_aggregation(rec.assignment, rec.traits);
    for (std::size_t m = 0; m < sum.rows(); ++m)
      for (std::size_t u = 0; u < sum.cols(); ++u)
        sum(m, u) += y(m, u);
  }
  const double n = static_cast<double>(demos.size());
  for (auto& v : sum.data())
    v /= n;
  return TraitRequirementMatrix(std::move(sum));
}

// ============================================================================
namespace detail {

inline double tie_tolerance(double v) noexcept
{
  return 1e-12 * std::max(1.0, std::abs(v));
}

// Shared problem view with the per-task cost used by every solver path.
class AllocationProblem
{
public:
  AllocationProblem(
      const TraitRequirementMatrix& target,
      const SpeciesTraitMatrix& q,
      const PreferenceWeights& w,
      const AllocationConstraints& constraints)
    : tasks_{target.task_count()},
      species_{q.species_count()},
      traits_{q.trait_count()},
      target_{&target.values()},
      q_{&q.values()},
      w_{&w.values()},
      supply_{constraints.supply().agents()},
      cardinality_{constraints.task_cardinality()}
  {
    if (target.trait_count() != traits_)
      throw DimensionError(
          "allocate: target is " + target.values().shape()
          + " but species-trait matrix is " + q.values().shape());
    if (w.task_count() != tasks_ || w.trait_count() != traits_)
      throw DimensionError(
          "allocate: weights are " + w.values().shape() + " but target is "
          + target.values().shape());
    if (supply_.size() != species_)
      throw DimensionError(
          "allocate: supply lists " + std::to_string(supply_.size())
          + " species but species-trait matrix has " + std::to_string(species_));
    if (cardinality_ && cardinality_->size() != tasks_)
      throw DimensionError(
          "allocate: cardinality lists " + std::to_string(cardinality_->size())
          + " tasks but target has " + std::to_string(tasks_));
    if (tasks_ == 0)
      throw DimensionError("allocate: target has no tasks");
  }

  [[nodiscard]] std::size_t tasks() const noexcept { return tasks_; }
  [[nodiscard]] std::size_t species() const noexcept { return species_; }
  [[nodiscard]] std::size_t traits() const noexcept { return traits_; }
  [[nodiscard]] const std::vector<int>& supply() const noexcept { return supply_; }
  [[nodiscard]] const std::optional<std::vector<int>>& cardinality() const noexcept
  {
    return cardinality_;
  }
  [[nodiscard]] double target(std::size_t m, std::size_t u) const noexcept
  {
    return (*target_)(m, u);
  }
  [[nodiscard]] double weight(std::size_t m, std::size_t u) const noexcept
  {
    return (*w_)(m, u);
  }
  [[nodiscard]] double trait(std::size_t s, std::size_t u) const noexcept
  {
    return (*q_)(s, u);
  }

  /// Squared weighted residual of task m for the assignment row `x` (length S).
  [[nodiscard]] double row_cost(std::size_t m, std::span<const int> x) const
  {
    double sum = 0.0;
    for (std::size_t u = 0; u < traits_; ++u)
    {
      double agg = 0.0;
      for (std::size_t s = 0; s < species_; ++s)
        if (x[s] != 0)
          agg += x[s] * (*q_)(s, u);
      const double d = (*target_)(m, u) - agg;
      sum += (*w_)(m, u) * d * d;
    }
    return sum;
  }

  [[nodiscard]] double total_cost(const Matrix<int>& x) const
  {
    double total = 0.0;
    for (std::size_t m = 0; m < tasks_; ++m)
      total += row_cost(m, x.row(m));
    return total;
  }

  /// Number of feasible assignments, or +inf when it is too costly to count.
  [[nodiscard]] double feasible_count() const
  {
    if (!cardinality_)
    {
      // Each species independently spreads at most A_s agents over M tasks:
      // C(A_s + M, M) ways.
      double count = 1.0;
      for (int a : supply_)
      {
        double ways = 1.0;
        for (std::size_t k = 1; k <= tasks_; ++k)
          ways = ways * static_cast<double>(a + static_cast<int>(k)) / static_cast<double>(k);
        count *= std::round(ways);
      }
      return count;
    }
    return cardinality_count();
  }

  /// Number of candidate rows for task m (entries bounded by supply, and row
  /// sum fixed when the task has a cardinality).
  [[nodiscard]] double row_count(std::size_t m) const
  {
    const int limit = cardinality_ ? (*cardinality_)[m] : -1;
    // ways[t] = number of partial rows with sum t (only tracked when limited)
    if (limit < 0)
    {
      double count = 1.0;
      for (int a : supply_)
        count *= static_cast<double>(a + 1);
      return count;
    }
    std::vector<double> ways(static_cast<std::size_t>(limit) + 1, 0.0);
    ways[0] = 1.0;
    for (int a : supply_)
    {
      std::vector<double> next(ways.size(), 0.0);
      for (std::size_t t = 0; t < ways.size(); ++t)
      {
        if (ways[t] == 0.0)
          continue;
        for (int v = 0; v <= a && t + static_cast<std::size_t>(v) < ways.size(); ++v)
          next[t + static_cast<std::size_t>(v)] += ways[t];
      }
      ways = std::move(next);
    }
    return ways.back();
  }

private:
  // DP over species; state = remaining slots per task (mixed radix).
  [[nodiscard]] double cardinality_count() const
  {
    const auto& card = *cardinality_;
    std::vector<std::size_t> radix(tasks_);
    double states_d = 1.0;
    for (std::size_t m = 0; m < tasks_; ++m)
    {
      radix[m] = static_cast<std::size_t>(card[m]) + 1;
      states_d *= static_cast<double>(radix[m]);
    }
    if (states_d > 2e6)
      return std::numeric_limits<double>::infinity();
    const auto states = static_cast<std::size_t>(states_d);

    auto decode = [&](std::size_t idx, std::vector<int>& rem) {
      for (std::size_t m = 0; m < tasks_; ++m)
      {
        rem[m] = static_cast<int>(idx % radix[m]);
        idx /= radix[m];
      }
    };
    auto encode = [&](const std::vector<int>& rem) {
      std::size_t idx = 0;
      for (std::size_t m = tasks_; m-- > 0;)
        idx = idx * radix[m] + static_cast<std::size_t>(rem[m]);
      return idx;
    };

    std::vector<double> ways(states, 0.0);
    ways[encode(card)] = 1.0;
    std::vector<int> rem(tasks_), next_rem(tasks_), x(tasks_);
    for (int a : supply_)
    {
      std::vector<double> next(states, 0.0);
      for (std::size_t idx = 0; idx < states; ++idx)
      {
        if (ways[idx] == 0.0)
          continue;
        decode(idx, rem);
        // enumerate x with x_m <= rem_m and sum x <= a
        std::fill(x.begin(), x.end(), 0);
        int used = 0;
        while (true)
        {
          for (std::size_t m = 0; m < tasks_; ++m)
            next_rem[m] = rem[m] - x[m];
          next[encode(next_rem)] += ways[idx];
          std::size_t pos = 0;
          while (pos < tasks_)
          {
            if (x[pos] < rem[pos] && used < a)
            {
              ++x[pos];
              ++used;
              break;
            }
            used -= x[pos];
            x[pos] = 0;
            ++pos;
          }
          if (pos == tasks_)
            break;
        }
      }
      ways = std::move(next);
    }
    return ways[0];
  }

  std::size_t tasks_;
  std::size_t species_;
  std::size_t traits_;
  const Matrix<double>* target_;
  const Matrix<double>* q_;
  const Matrix<double>* w_;
  std::vector<int> supply_;
  std::optional<std::vector<int>> cardinality_;
};

// Lowest objective wins; within the tie tolerance the lexicographically
// smaller (row-major) assignment wins.
inline bool better_solution(
    double cost, std::span<const int> x, double best_cost, std::span<const int> best_x)
{
  if (best_x.empty())
    return true;
  const double tol = tie_tolerance(best_cost);
  if (cost < best_cost - tol)
    return true;
  if (cost > best_cost + tol)
    return false;
  return std::lexicographical_compare(x.begin(), x.end(), best_x.begin(), best_x.end());
}

inline AllocationResult finish(
    const AllocationProblem& problem,
    Matrix<int> x,
    bool optimal,
    std::uint64_t nodes,
    SolveMode mode,
    std::chrono::steady_clock::time_point start)
{
  AllocationResult res;
  res.objective = std::sqrt(problem.total_cost(x));
  res.assignment = AssignmentMatrix(std::move(x));
  res.optimal = optimal;
  res.nodes_explored = nodes;
  res.mode_used = mode;
  res.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return res;
}

// ============================================================================
// Greedy construction: repeatedly add the single agent that lowers the
// objective most. With cardinalities, every task is filled to its size even
// when that raises the objective.
inline Matrix<int> greedy_assignment(const AllocationProblem& p)
{
  const std::size_t M = p.tasks(), S = p.species(), U = p.traits();
  Matrix<int> x(M, S, 0);
  Matrix<double> agg(M, U, 0.0);
  std::vector<int> left = p.supply();
  std::vector<int> size(M, 0);

  auto delta_add = [&](std::size_t m, std::size_t s) {
    double d = 0.0;
    for (std::size_t u = 0; u < U; ++u)
    {
      const double before = p.target(m, u) - agg(m, u);
      const double after = before - p.trait(s, u);
      d += p.weight(m, u) * (after * after - before * before);
    }
    return d;
  };

  while (true)
  {
    bool must_fill = false;
    if (p.cardinality())
      for (std::size_t m = 0; m < M; ++m)
        must_fill = must_fill || size[m] < (*p.cardinality())[m];

    double best = std::numeric_limits<double>::infinity();
    std::size_t bm = M, bs = S;
    for (std::size_t m = 0; m < M; ++m)
    {
      if (p.cardinality() && size[m] >= (*p.cardinality())[m])
        continue;
      for (std::size_t s = 0; s < S; ++s)
      {
        if (left[s] == 0)
          continue;
        const double d = delta_add(m, s);
        if (d < best)
        {
          best = d;
          bm = m;
          bs = s;
        }
      }
    }
    if (bm == M)
      break;
    if (!must_fill && !(best < 0.0))
      break;
    ++x(bm, bs);
    --left[bs];
    ++size[bm];
    for (std::size_t u = 0; u < U; ++u)
      agg(bm, u) += p.trait(bs, u);
  }
  return x;
}

// ============================================================================
class BranchAndBound
{
public:
  // Refuse exact solves whose per-task candidate tables exceed this size.
  static constexpr double row_table_limit = 4e6;

  explicit BranchAndBound(const AllocationProblem& p) : p_{p}
  {
    const std::size_t M = p_.tasks();
    double table = 0.0;
    for (std::size_t m = 0; m < M; ++m)
      table += p_.row_count(m);
    if (table > row_table_limit)
      throw InvalidArgument(
          "exact allocation would enumerate " + std::to_string(table)
          + " candidate task rows; use local search for this problem size");

    rows_.resize(M);
    costs_.resize(M);
    order_.resize(M);
    for (std::size_t m = 0; m < M; ++m)
      build_rows(m);

    suffix_min_.assign(M + 1, 0.0);
    for (std::size_t m = M; m-- > 0;)
      suffix_min_[m] = suffix_min_[m + 1] + costs_[m][order_[m].front()];
  }

  std::pair<Matrix<int>, std::uint64_t> solve(const Matrix<int>& incumbent)
  {
    const std::size_t M = p_.tasks(), S = p_.species();
    best_x_.assign(incumbent.data().begin(), incumbent.data().end());
    best_cost_ = 0.0;
    for (std::size_t m = 0; m < M; ++m)
      best_cost_ += p_.row_cost(m, incumbent.row(m));
    current_.assign(M * S, 0);
    remaining_ = p_.supply();
    nodes_ = 0;
    dfs(0, 0.0);

    Matrix<int> x(M, S, 0);
    std::copy(best_x_.begin(), best_x_.end(), x.data().begin());
    return {std::move(x), nodes_};
  }

private:
  void build_rows(std::size_t m)
  {
    const std::size_t S = p_.species();
    const auto& supply = p_.supply();
    const int card = p_.cardinality() ? (*p_.cardinality())[m] : -1;

    // suffix capacity lets us stop early when the row sum can no longer
    // reach the cardinality
    std::vector<int> cap_after(S + 1, 0);
    for (std::size_t s = S; s-- > 0;)
      cap_after[s] = cap_after[s + 1] + supply[s];

    std::vector<int> x(S, 0);
    auto& rows = rows_[m];
    auto& costs = costs_[m];
    auto rec = [&](auto&& self, std::size_t s, int sum) -> void {
      if (s == S)
      {
        if (card >= 0 && sum != card)
          return;
        rows.insert(rows.end(), x.begin(), x.end());
        costs.push_back(p_.row_cost(m, x));
        return;
      }
      int hi = supply[s];
      if (card >= 0)
      {
        hi = std::min(hi, card - sum);
        if (sum + cap_after[s] < card)
          return;
      }
      for (int v = 0; v <= hi; ++v)
      {
        x[s] = v;
        self(self, s + 1, sum + v);
      }
      x[s] = 0;
    };
    rec(rec, 0, 0);

    auto& order = order_[m];
    order.resize(costs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // rows were generated in lexicographic order, so a stable sort keeps
    // equal-cost rows lexicographic
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return costs[a] < costs[b];
    });
  }

  bool fits(std::span<const int> row) const
  {
    for (std::size_t s = 0; s < row.size(); ++s)
      if (row[s] > remaining_[s])
        return false;
    return true;
  }

  void dfs(std::size_t m, double partial)
  {
    const std::size_t M = p_.tasks(), S = p_.species();
    if (m == M)
    {
      if (better_solution(partial, current_, best_cost_, best_x_))
      {
        best_cost_ = partial;
        best_x_ = current_;
      }
      return;
    }

    const auto& rows = rows_[m];
    const auto& costs = costs_[m];
    for (std::size_t idx : order_[m])
    {
      const double c = costs[idx];
      if (partial + c + suffix_min_[m + 1] > best_cost_ + tie_tolerance(best_cost_))
        break;
      const std::span<const int> row(rows.data() + idx * S, S);
      if (!fits(row))
        continue;
      ++nodes_;
      for (std::size_t s = 0; s < S; ++s)
      {
        remaining_[s] -= row[s];
        current_[m * S + s] = row[s];
      }
      dfs(m + 1, partial + c);
      for (std::size_t s = 0; s < S; ++s)
        remaining_[s] += row[s];
    }
    std::fill(current_.begin() + static_cast<std::ptrdiff_t>(m * S),
              current_.begin() + static_cast<std::ptrdiff_t>((m + 1) * S), 0);
  }

  const AllocationProblem& p_;
  std::vector<std::vector<int>> rows_;
  std::vector<std::vector<double>> costs_;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<double> suffix_min_;

  std::vector<int> current_;
  std::vector<int> remaining_;
  std::vector<int> best_x_;
  double best_cost_ = 0.0;
  std::uint64_t nodes_ = 0;
};

// ============================================================================
// Single-agent move/swap local search with first-improvement acceptance.
class LocalSearch
{
public:
  LocalSearch(const AllocationProblem& p, std::uint64_t seed, LocalSearchOptions opts)
    : p_{p}, opts_{opts}, seed_{seed}
  {}

  std::pair<Matrix<int>, std::uint64_t> solve(const Matrix<int>& greedy)
  {
    const std::size_t restarts = std::max<std::size_t>(1, opts_.restarts);
    Matrix<int> best;
    double best_cost = 0.0;
    std::uint64_t evaluations = 0;
    for (std::size_t r = 0; r < restarts; ++r)
    {
      std::mt19937_64 rng(seed_ ^ (0x9E3779B97F4A7C15ULL * (r + 1)));
      Matrix<int> start = r == 0 ? greedy : random_assignment(rng);
      auto [x, cost, evals] = descend(std::move(start), rng);
      evaluations += evals;
      if (better_solution(cost, x.data(), best_cost, best.data()))
      {
        best = std::move(x);
        best_cost = cost;
      }
    }
    return {std::move(best), evaluations};
  }

private:
  enum class MoveKind
  {
    add,       // unassigned agent of s joins task m
    remove,    // agent of s leaves task m
    relocate,  // agent of s moves from task m to task m2
    replace,   // in task m, agent of s is replaced by unassigned agent of s2
    exchange,  // agent of s in task m trades places with agent of s2 in task m2
  };

  struct Move
  {
    MoveKind kind;
    std::size_t m, s, m2, s2;
  };

  Matrix<int> random_assignment(std::mt19937_64& rng) const
  {
    const std::size_t M = p_.tasks(), S = p_.species();
    Matrix<int> x(M, S, 0);
    std::vector<int> left = p_.supply();
    if (p_.cardinality())
    {
      for (std::size_t m = 0; m < M; ++m)
        for (int k = 0; k < (*p_.cardinality())[m]; ++k)
        {
          std::vector<std::size_t> avail;
          for (std::size_t s = 0; s < S; ++s)
            if (left[s] > 0)
              avail.push_back(s);
          std::uniform_int_distribution<std::size_t> pick(0, avail.size() - 1);
          const std::size_t s = avail[pick(rng)];
          ++x(m, s);
          --left[s];
        }
      return x;
    }
    std::uniform_int_distribution<std::size_t> slot(0, M);
    for (std::size_t s = 0; s < S; ++s)
      for (int k = 0; k < left[s]; ++k)
      {
        const std::size_t m = slot(rng);
        if (m < M)
          ++x(m, s);
      }
    return x;
  }

  std::vector<Move> neighbourhood() const
  {
    const std::size_t M = p_.tasks(), S = p_.species();
    std::vector<Move> moves;
    const bool sized = p_.cardinality().has_value();
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t s = 0; s < S; ++s)
      {
        if (!sized)
        {
          moves.push_back({MoveKind::add, m, s, 0, 0});
          moves.push_back({MoveKind::remove, m, s, 0, 0});
          for (std::size_t m2 = 0; m2 < M; ++m2)
            if (m2 != m)
              moves.push_back({MoveKind::relocate, m, s, m2, 0});
        }
        for (std::size_t s2 = 0; s2 < S; ++s2)
          if (s2 != s)
            moves.push_back({MoveKind::replace, m, s, 0, s2});
        for (std::size_t m2 = m + 1; m2 < M; ++m2)
          for (std::size_t s2 = 0; s2 < S; ++s2)
            if (s2 != s)
              moves.push_back({MoveKind::exchange, m, s, m2, s2});
      }
    return moves;
  }

  struct Descent
  {
    Matrix<int> x;
    double cost;
    std::uint64_t evaluations;
  };

  Descent descend(Matrix<int> x, std::mt19937_64& rng) const
  {
    const std::size_t M = p_.tasks(), S = p_.species(), U = p_.traits();
    const std::uint64_t budget = opts_.iterations_per_cell * M * S;

    Matrix<double> agg(M, U, 0.0);
    std::vector<int> left = p_.supply();
    std::vector<double> task_cost(M);
    for (std::size_t m = 0; m < M; ++m)
    {
      for (std::size_t s = 0; s < S; ++s)
      {
        left[s] -= x(m, s);
        for (std::size_t u = 0; u < U; ++u)
          agg(m, u) += x(m, s) * p_.trait(s, u);
      }
      task_cost[m] = p_.row_cost(m, x.row(m));
    }

    // cost of task m after adding `plus` agents of sp and `minus` of sm
    std::vector<double> scratch(U);
    auto shifted_cost = [&](std::size_t m, std::size_t sp, int plus, std::size_t sm, int minus) {
      double sum = 0.0;
      for (std::size_t u = 0; u < U; ++u)
      {
        const double a = agg(m, u) + plus * p_.trait(sp, u) - minus * p_.trait(sm, u);
        const double d = p_.target(m, u) - a;
        sum += p_.weight(m, u) * d * d;
      }
      return sum;
    };

    auto moves = neighbourhood();
    std::uint64_t evaluations = 0;
    bool improved = true;
    while (improved && evaluations < budget)
    {
      improved = false;
      std::shuffle(moves.begin(), moves.end(), rng);
      for (const Move& mv : moves)
      {
        if (evaluations >= budget)
          break;
        // skip moves that are not applicable without counting them
        double before = 0.0, after = 0.0;
        switch (mv.kind)
        {
          case MoveKind::add:
            if (left[mv.s] == 0)
              continue;
            before = task_cost[mv.m];
            after = shifted_cost(mv.m, mv.s, 1, mv.s, 0);
            break;
          case MoveKind::remove:
            if (x(mv.m, mv.s) == 0)
              continue;
            before = task_cost[mv.m];
            after = shifted_cost(mv.m, mv.s, 0, mv.s, 1);
            break;
          case MoveKind::relocate:
            if (x(mv.m, mv.s) == 0)
              continue;
            before = task_cost[mv.m] + task_cost[mv.m2];
            after = shifted_cost(mv.m, mv.s, 0, mv.s, 1)
                    + shifted_cost(mv.m2, mv.s, 1, mv.s, 0);
            break;
          case MoveKind::replace:
            if (x(mv.m, mv.s) == 0 || left[mv.s2] == 0)
              continue;
            before = task_cost[mv.m];
            after = shifted_cost(mv.m, mv.s2, 1, mv.s, 1);
            break;
          case MoveKind::exchange:
            if (x(mv.m, mv.s) == 0 || x(mv.m2, mv.s2) == 0)
              continue;
            before = task_cost[mv.m] + task_cost[mv.m2];
            after = shifted_cost(mv.m, mv.s2, 1, mv.s, 1)
                    + shifted_cost(mv.m2, mv.s, 1, mv.s2, 1);
            break;
        }
        ++evaluations;
        if (!(after < before - tie_tolerance(before)))
          continue;

        apply(mv, x, agg, left);
        task_cost[mv.m] = p_.row_cost(mv.m, x.row(mv.m));
        if (mv.kind == MoveKind::relocate || mv.kind == MoveKind::exchange)
          task_cost[mv.m2] = p_.row_cost(mv.m2, x.row(mv.m2));
        improved = true;
        break;
      }
    }
    const double cost = p_.total_cost(x);
    return {std::move(x), cost, evaluations};
  }

  void apply(const Move& mv, Matrix<int>& x, Matrix<double>& agg, std::vector<int>& left) const
  {
    auto shift = [&](std::size_t m, std::size_t s, int delta) {
      x(m, s) += delta;
      for (std::size_t u = 0; u < p_.traits(); ++u)
        agg(m, u) += delta * p_.trait(s, u);
    };
    switch (mv.kind)
    {
      case MoveKind::add:
        shift(mv.m, mv.s, 1);
        --left[mv.s];
        break;
      case MoveKind::remove:
        shift(mv.m, mv.s, -1);
        ++left[mv.s];
        break;
      case MoveKind::relocate:
        shift(mv.m, mv.s, -1);
        shift(mv.m2, mv.s, 1);
        break;
      case MoveKind::replace:
        shift(mv.m, mv.s, -1);
        shift(mv.m, mv.s2, 1);
        ++left[mv.s];
        --left[mv.s2];
        break;
      case MoveKind::exchange:
        shift(mv.m, mv.s, -1);
        shift(mv.m, mv.s2, 1);
        shift(mv.m2, mv.s2, -1);
        shift(mv.m2, mv.s, 1);
        break;
    }
  }

  const AllocationProblem& p_;
  LocalSearchOptions opts_;
  std::uint64_t seed_;
};

} // namespace detail

// ============================================================================
/// Assignment minimizing the weighted trait mismatch to `target` under the
/// supply (and optional task-size) constraints.
[[nodiscard]] inline AllocationResult allocate(
    const TraitRequirementMatrix& target,
    const SpeciesTraitMatrix& q,
    const PreferenceWeights& w,
    const AllocationConstraints& constraints)
{
  const auto start = std::chrono::steady_clock::now();
  const detail::AllocationProblem problem(target, q, w, constraints);

  SolveMode mode = constraints.mode();
  if (mode == SolveMode::automatic)
    mode = problem.feasible_count() <= AllocationConstraints::auto_exact_limit
               ? SolveMode::exact
               : SolveMode::local;

  const Matrix<int> greedy = detail::greedy_assignment(problem);
  if (mode == SolveMode::exact)
  {
    detail::BranchAndBound bnb(problem);
    auto [x, nodes] = bnb.solve(greedy);
    return detail::finish(problem, std::move(x), true, nodes, mode, start);
  }
  detail::LocalSearch search(problem, constraints.seed(), constraints.local_search());
  auto [x, evaluations] = search.solve(greedy);
  return detail::finish(problem, std::move(x), false, evaluations, mode, start);
}

/// Exhaustive enumeration of every feasible assignment; returns the
/// lexicographically smallest minimizer. Test oracle for `allocate`.
[[nodiscard]] inline AllocationResult brute_force_allocate(
    const TraitRequirementMatrix& target,
    const SpeciesTraitMatrix& q,
    const PreferenceWeights& w,
    const AllocationConstraints& constraints,
    double max_assignments = 1e6)
{
  const auto start = std::chrono::steady_clock::now();
  const detail::AllocationProblem problem(target, q, w, constraints);
  if (problem.feasible_count() > max_assignments)
    throw InvalidArgument(
        "brute force: feasible space exceeds " + std::to_string(max_assignments)
        + " assignments");

  const std::size_t M = problem.tasks(), S = problem.species(), U = problem.traits();
  const auto& card = problem.cardinality();
  std::vector<int> x(M * S, 0);
  std::vector<int> left = problem.supply();
  std::vector<int> best;
  double best_cost = 0.0;
  std::uint64_t visited = 0;

  // Plain objective: aggregate and square, no shared tables.
  auto objective = [&]() {
    double total = 0.0;
    for (std::size_t m = 0; m < M; ++m)
    {
      double task = 0.0;
      for (std::size_t u = 0; u < U; ++u)
      {
        double agg = 0.0;
        for (std::size_t s = 0; s < S; ++s)
          agg += x[m * S + s] * problem.trait(s, u);
        const double d = problem.target(m, u) - agg;
        task += problem.weight(m, u) * d * d;
      }
      total += task;
    }
    return total;
  };

  // Entries visited in row-major order with ascending values, so
  // assignments are produced in lexicographic order.
  auto rec = [&](auto&& self, std::size_t idx, int row_sum) -> void {
    if (idx == M * S)
    {
      ++visited;
      const double cost = objective();
      if (best.empty() || cost < best_cost - detail::tie_tolerance(best_cost))
      {
        best_cost = cost;
        best = x;
      }
      return;
    }
    const std::size_t m = idx / S, s = idx % S;
    const bool row_end = s + 1 == S;
    int hi = left[s];
    if (card)
      hi = std::min(hi, (*card)[m] - row_sum);
    for (int v = 0; v <= hi; ++v)
    {
      if (row_end && card && row_sum + v != (*card)[m])
        continue;
      x[idx] = v;
      left[s] -= v;
      self(self, idx + 1, row_end ? 0 : row_sum + v);
      left[s] += v;
    }
    x[idx] = 0;
  };
  rec(rec, 0, 0);

  if (best.empty())
    throw InfeasibleError("brute force: no feasible assignment");
  Matrix<int> out(M, S, 0);
  std::copy(best.begin(), best.end(), out.data().begin());
  return detail::finish(problem, std::move(out), true, visited, SolveMode::exact, start);
}

} // namespace traitpref
