// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <traitpref/traitpref.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace traitpref;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4)
{
  std::ostringstream ss;
  ss.precision(precision);
  ss << v;
  return ss.str();
}

// ----------------------------------------------------------------------------
Outcome ordering_recovery()
{
  Outcome o{true, false, ""};
  for (std::size_t preset = 1; preset <= 4; ++preset)
  {
    const auto study = run_expert_study(paper_scenario(preset, 1));
    const double acc = stats::ordering_accuracy(infer_weights(study.demos).weights, study.scenario.w_star);
    o.detail += study.scenario.name + "=" + fmt(acc * 100) + "% ";
    o.pass = o.pass && acc == 1.0;
  }
  return o;
}

// ----------------------------------------------------------------------------
Outcome degradation_trend()
{
  constexpr std::size_t replicates = 20;
  const auto counts = default_sweep_counts();
  std::vector<double> mean(counts.size(), 0.0);
  std::size_t runs = 0;
  for (std::size_t preset = 1; preset <= 4; ++preset)
    for (std::uint64_t seed = 1; seed <= replicates; ++seed)
    {
      const auto study = run_expert_study(paper_scenario(preset, seed));
      const auto rows = demo_count_sweep(study.demos, study.scenario.w_star, counts);
      for (std::size_t i = 0; i < rows.size(); ++i)
        mean[i] += rows[i].accuracy;
      ++runs;
    }
  for (auto& m : mean)
    m /= static_cast<double>(runs);

  std::size_t inversions = 0;
  bool large_inversion = false;
  for (std::size_t i = 1; i < mean.size(); ++i)
    if (mean[i] < mean[i - 1])
    {
      ++inversions;
      large_inversion = large_inversion || mean[i - 1] - mean[i] > 0.02 + 1e-12;
    }

  Outcome o;
  for (std::size_t i = 0; i < counts.size(); ++i)
    o.detail += "N" + std::to_string(counts[i]) + "=" + fmt(mean[i] * 100) + "% ";
  o.pass = inversions <= 1 && !large_inversion && mean.front() >= 0.70 && mean.back() == 1.0;
  return o;
}

// ----------------------------------------------------------------------------
struct QualityRun
{
  std::string scenario;
  QualityReport report;
};

std::vector<QualityRun> quality_runs(std::size_t trials)
{
  std::vector<QualityRun> runs;
  for (std::size_t preset = 1; preset <= 4; ++preset)
  {
    const auto study = run_expert_study(paper_scenario(preset, 1));
    const auto target = estimate_target(study.demos);
    runs.push_back({study.scenario.name,
                    compare_allocations(study.scenario, target, standard_schemes(study.demos),
                                        study.scenario.w_star, trials, 101)});
  }
  return runs;
}

// schemes are [no-preference, no-diversity, inferred]
Outcome allocation_quality(const std::vector<QualityRun>& runs)
{
  Outcome o{true, false, ""};
  for (const auto& run : runs)
  {
    o.detail += run.scenario + "[";
    for (std::size_t m = 0; m < run.report.tasks.size(); ++m)
    {
      const auto& t = run.report.tasks[m];
      const auto it = std::find_if(t.pairs.begin(), t.pairs.end(),
                                   [](const PairwiseTest& p) { return p.first == 0 && p.second == 2; });
      const bool lower = t.medians[2] < t.medians[0];
      const double p = it->result.p_value;
      o.pass = o.pass && lower && p < 0.01;
      o.detail += (m ? " " : "") + std::string("t") + std::to_string(m) + ":" + fmt(t.medians[2]) + "/"
          + fmt(t.medians[0]) + ",p=" + fmt(p, 3);
    }
    o.detail += "] ";
  }
  return o;
}

Outcome diversity_benefit(const std::vector<QualityRun>& runs)
{
  Outcome o{true, false, ""};
  for (const auto& run : runs)
  {
    int wins = 0;
    for (const auto& t : run.report.tasks)
      wins += t.medians[2] <= t.medians[1] ? 1 : 0;
    o.pass = o.pass && wins >= 2;
    o.detail += run.scenario + "=" + std::to_string(wins) + "/3 ";
  }
  return o;
}

// ----------------------------------------------------------------------------
Outcome solver_correctness()
{
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> agents(0, 4), traits(1, 4);
  std::uniform_real_distribution<double> val(0.0, 10.0), wt(0.0, 1.0);
  double worst = 0.0;
  std::size_t mismatches = 0;
  for (int i = 0; i < 200; ++i)
  {
    const std::size_t M = 3, S = 3, U = static_cast<std::size_t>(traits(rng));
    Matrix<double> y(M, U), q(S, U), w(M, U);
    for (auto& v : y.data())
      v = val(rng) * 2.0;
    for (auto& v : q.data())
      v = val(rng);
    for (auto& v : w.data())
      v = wt(rng);
    std::vector<int> supply(S);
    for (auto& a : supply)
      a = agents(rng);
    const AllocationConstraints c(TeamComposition(supply), std::nullopt, SolveMode::exact, 0);
    const TraitRequirementMatrix target(y);
    const SpeciesTraitMatrix traits_q(q);
    const PreferenceWeights weights(w);
    const double exact = allocate(target, traits_q, weights, c).objective;
    const double brute = brute_force_allocate(target, traits_q, weights, c).objective;
    const double diff = std::abs(exact - brute);
    worst = std::max(worst, diff);
    mismatches += diff > 1e-9 ? 1 : 0;
  }
  return {mismatches == 0, false, "200 instances, max |diff|=" + fmt(worst, 3)};
}

// ----------------------------------------------------------------------------
Outcome inference_suite()
{
  std::vector<std::string> failed;
  auto check = [&](bool ok, const std::string& name) {
    if (!ok)
      failed.push_back(name);
  };

  // scale invariance
  {
    const auto study = run_expert_study([] {
      auto sc = paper_scenario(2, 3);
      sc.demo_count = 200;
      return sc;
    }());
    std::vector<Demonstration> scaled;
    for (const auto& d : study.demos.records())
    {
      Matrix<double> q = d.traits.values();
      for (auto& v : q.data())
        v *= 37.5;
      scaled.push_back({d.assignment, SpeciesTraitMatrix(q)});
    }
    const auto a = infer_weights(study.demos).weights.values();
    const auto b = infer_weights(DemonstrationSet(scaled)).weights.values();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
      worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    check(worst <= 1e-9, "scale-invariance");
  }

  // monotone in cv_obs, gated by cv_div
  {
    bool monotone = true, gated = true, neutral = true;
    for (int d = 0; d <= 20; ++d)
    {
      const double div = d / 20.0;
      Matrix<double> obs(1, 101);
      for (std::size_t j = 0; j <= 100; ++j)
        obs(0, j) = static_cast<double>(j) / 100.0;
      const auto w = weight_function(obs, std::vector<double>(101, div)).values();
      for (std::size_t j = 0; j <= 100; ++j)
      {
        if (j > 0 && w(0, j) > w(0, j - 1))
          monotone = false;
        if (std::abs(w(0, j) - 0.5) > div / 2.0 + 1e-15)
          gated = false;
        if (d == 0 && w(0, j) != 0.5)
          neutral = false;
      }
    }
    check(monotone, "monotonicity");
    check(gated, "diversity-gating");
    check(neutral, "zero-diversity");
  }

  // closed forms evaluated independently in extended precision
  {
    auto closed = [](long double div, long double obs) {
      return static_cast<double>(div / 2.0L * std::cos(2.0L * obs + 0.5L) + 0.5L);
    };
    const auto w = weight_function(Matrix<double>{{0.0, 1.0}}, {1.0, 1.0}).values();
    check(std::abs(w(0, 0) - closed(1, 0)) <= 1e-6 && std::abs(w(0, 0) - 0.9388) <= 1e-4, "closed-form cv_obs=0");
    check(std::abs(w(0, 1) - closed(1, 1)) <= 1e-6 && std::abs(w(0, 1) - 0.0995) <= 1e-4, "closed-form cv_obs=1");

    const fs::path data = TRAITPREF_DATA_DIR;
    const auto fixture = infer_weights(io::load_demonstrations(data / "toy_demos")).weights.values();
    const auto expected = io::read_matrix_csv(data / "toy_expected_weights.csv").values;
    bool ok = fixture.rows() == expected.rows() && fixture.cols() == expected.cols();
    for (std::size_t i = 0; ok && i < expected.data().size(); ++i)
      ok = std::abs(fixture.data()[i] - expected.data()[i]) <= 1e-6;
    check(ok, "toy fixture");
  }

  Outcome o;
  o.pass = failed.empty();
  if (failed.empty())
    o.detail = "scale-invariance, monotonicity, gating, zero-diversity, 3 closed forms";
  else
    for (const auto& f : failed)
      o.detail += "failed:" + f + " ";
  return o;
}

// ----------------------------------------------------------------------------
Outcome fifa_study(const fs::path& csv, std::size_t teams)
{
  const auto ing = fifa::ingest(csv);
  const std::size_t all = ing.players.front().traits.size();
  const std::vector<std::size_t> ks{1, 2, 4, 6, 8, 10, 12, 16, 20, 24, 28, 32, all};
  const auto st = run_fifa_study(ing.players, ks, teams, 7);

  const auto& full = st.rows.back();
  const auto k12 = *std::find_if(st.rows.begin(), st.rows.end(), [](const FifaKRow& r) { return r.k == 12; });
  const bool a = full.median_score >= st.baseline_median_score;
  const bool b = k12.baseline_relative_score >= 0.95 && k12.baseline_relative_time <= 0.70;
  bool c = true;
  for (std::size_t i = 1; i < st.rows.size(); ++i)
    c = c && st.rows[i].median_score >= st.rows[i - 1].median_score - 1.0 / 11.0 - 1e-12;

  Outcome o;
  o.pass = a && b && c;
  o.detail = std::to_string(ing.players.size()) + " players, " + std::to_string(st.squads.demos.size())
      + " squads, " + std::to_string(teams) + " teams; (a) " + (a ? "ok" : "fail") + " k=U " + fmt(full.median_score)
      + " vs uniform " + fmt(st.baseline_median_score) + "; (b) " + (b ? "ok" : "fail") + " k=12 score "
      + fmt(k12.baseline_relative_score) + "x, time " + fmt(k12.baseline_relative_time) + "x; (c) "
      + (c ? "ok" : "fail") + " scores";
  for (const auto& r : st.rows)
    o.detail += " " + std::to_string(r.k) + ":" + fmt(r.median_score, 3);
  return o;
}

// ----------------------------------------------------------------------------
double permutation_p(const std::vector<double>& a, const std::vector<double>& b)
{
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size();
  auto u_of = [&](const std::vector<bool>& in_a) {
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (in_a[i])
        for (std::size_t j = 0; j < n; ++j)
          if (!in_a[j])
            u += pooled[i] > pooled[j] ? 1.0 : (pooled[i] == pooled[j] ? 0.5 : 0.0);
    return u;
  };
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(a.size()), true);
  const double centre = static_cast<double>(a.size() * b.size()) / 2.0;
  const double dev = std::abs(u_of(mask) - centre);
  std::sort(mask.begin(), mask.end());
  double total = 0.0, extreme = 0.0;
  do
  {
    total += 1.0;
    extreme += std::abs(u_of(mask) - centre) >= dev - 1e-9 ? 1.0 : 0.0;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return extreme / total;
}

Outcome statistics_kit()
{
  std::mt19937_64 rng(12);
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t na = 3; na <= 8; ++na)
    for (std::size_t nb = 3; nb <= 8; ++nb)
      for (int levels : {3, 6, 1000})
      {
        std::uniform_int_distribution<int> d(0, levels);
        std::vector<double> a(na), b(nb);
        for (auto& v : a)
          v = d(rng);
        for (auto& v : b)
          v = d(rng) + 1;
        worst = std::max(worst, std::abs(stats::mann_whitney_u(a, b).p_value - permutation_p(a, b)));
        ++cases;
      }
  const auto kw = stats::kruskal_wallis({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  const double h_err = std::abs(kw.statistic - 7.2);
  Outcome o;
  o.pass = worst <= 1e-9 && h_err <= 1e-9;
  o.detail = std::to_string(cases) + " MWU cases max |dp|=" + fmt(worst, 3) + "; H=" + fmt(kw.statistic, 12)
      + " p=" + fmt(kw.p_value, 6);
  return o;
}

} // namespace

int main()
{
  bool all_pass = true;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = fn();
    }
    catch (const std::exception& e)
    {
      o = {false, false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
    if (!o.skipped && !o.pass)
      all_pass = false;
    std::cout << tag << " " << id << " " << name << " (" << fmt(secs, 3) << "s): " << o.detail << std::endl;
  };

  report(1, "weight-ordering recovery", ordering_recovery);
  report(2, "degradation trend", degradation_trend);

  std::vector<QualityRun> runs;
  auto with_runs = [&](Outcome (*fn)(const std::vector<QualityRun>&)) {
    return [&, fn] {
      if (runs.empty())
        runs = quality_runs(500);
      return fn(runs);
    };
  };
  report(3, "allocation quality vs no-preference", with_runs(allocation_quality));
  report(4, "inherent-diversity benefit", with_runs(diversity_benefit));
  report(5, "solver correctness", solver_correctness);
  report(6, "inference unit suite", inference_suite);
  report(7, "fifa dimensionality reduction (synthetic sample)",
         [] { return fifa_study(fs::path(TRAITPREF_DATA_DIR) / "fifa_sample.csv", 100); });
  report(7, "fifa dimensionality reduction (dataset)", [] {
    const char* path = std::getenv("TRAITPREF_FIFA_CSV");
    if (path == nullptr || *path == '\0')
      return Outcome{false, true, "set TRAITPREF_FIFA_CSV to a players CSV to run"};
    return fifa_study(path, 100);
  });
  report(8, "statistics kit", statistics_kit);

  return all_pass ? 0 : 1;
}
