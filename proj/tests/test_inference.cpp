#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

using namespace traitpref;
using traitpref::fixtures::random_demos;

namespace {

// Demonstrations with one task, one species and one trait, so each
// aggregate is x * q.
DemonstrationSet scalar_demos(const std::vector<double>& values)
{
  std::vector<Demonstration> recs;
  for (double v : values)
    recs.push_back({AssignmentMatrix(Matrix<int>{{1}}), SpeciesTraitMatrix(Matrix<double>{{v}})});
  return DemonstrationSet(std::move(recs));
}

double two_pass_cv(const std::vector<double>& v)
{
  double mean = 0.0;
  for (double x : v)
    mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v)
    ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size())) / mean;
}

} // namespace

TEST(ObservedVariation, ConstantAggregatesGiveZero)
{
  const auto obs = observed_variation(scalar_demos({4, 4, 4}));
  EXPECT_EQ(obs.cv(0, 0), 0.0);
  EXPECT_FALSE(obs.zero_mean);
}

TEST(ObservedVariation, PopulationCvMatchesTwoPassOracle)
{
  const auto obs = observed_variation(scalar_demos({9, 11}));
  EXPECT_NEAR(obs.cv(0, 0), two_pass_cv({9, 11}), 1e-15);
  EXPECT_NEAR(obs.cv(0, 0), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(obs.stddev(0, 0), 1.0);
}

TEST(ObservedVariation, ClampsAtOne)
{
  EXPECT_DOUBLE_EQ(observed_variation(scalar_demos({0, 100})).cv(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(observed_variation(scalar_demos({0, 0, 0, 100})).cv(0, 0), 1.0);
}

TEST(ObservedVariation, ZeroMeanCells)
{
  // 0/0: aggregates all zero
  std::vector<Demonstration> recs;
  for (int i = 0; i < 3; ++i)
    recs.push_back({AssignmentMatrix(Matrix<int>{{0}}), SpeciesTraitMatrix(Matrix<double>{{double(i + 1)}})});
  const auto obs = observed_variation(DemonstrationSet(recs));
  EXPECT_EQ(obs.cv(0, 0), 0.0);
  EXPECT_FALSE(obs.zero_mean);
}

TEST(ObservedVariation, NeedsTwoDemonstrations)
{
  EXPECT_THROW((void)observed_variation(scalar_demos({1})), InvalidArgument);
}

TEST(ZeroMean, SpreadWithZeroMeanGivesOneAndFlag)
{
  detail::Moments mo{0.0, 2.0};
  bool flag = false;
  EXPECT_EQ(detail::clamped_cv(mo, flag), 1.0);
  EXPECT_TRUE(flag);
  bool flag2 = false;
  EXPECT_EQ(detail::clamped_cv({0.0, 0.0}, flag2), 0.0);
  EXPECT_FALSE(flag2);
}

TEST(InherentDiversity, ConstantColumnIsZero)
{
  const auto div = inherent_diversity(scalar_demos({7, 7, 7}));
  EXPECT_EQ(div.cv[0], 0.0);
}

TEST(InherentDiversity, TwoValues)
{
  EXPECT_NEAR(inherent_diversity(scalar_demos({5, 15})).cv[0], 0.5, 1e-15);
}

TEST(InherentDiversity, ThreeValuesPopulationFormula)
{
  const double expected = std::sqrt(8.0 / 3.0) / 2.0;
  EXPECT_NEAR(inherent_diversity(scalar_demos({0, 2, 4})).cv[0], expected, 1e-15);
  EXPECT_NEAR(expected, 0.816496580927726, 1e-12);
}

TEST(InherentDiversity, StacksSpeciesRowsAcrossDemonstrations)
{
  const DemonstrationSet d({
      {AssignmentMatrix(Matrix<int>{{1, 0}}), SpeciesTraitMatrix(Matrix<double>{{0}, {2}})},
      {AssignmentMatrix(Matrix<int>{{1, 0}}), SpeciesTraitMatrix(Matrix<double>{{4}, {2}})},
  });
  EXPECT_NEAR(inherent_diversity(d).cv[0], two_pass_cv({0, 2, 4, 2}), 1e-15);
}

TEST(WeightFunction, NoDiversityIsInconclusive)
{
  const Matrix<double> cv_obs{{0.0, 0.3, 1.0}};
  const auto w = weight_function(cv_obs, {0.0, 0.0, 0.0});
  for (double v : w.values().data())
    EXPECT_EQ(v, 0.5);
}

TEST(WeightFunction, ClosedFormValues)
{
  auto closed = [](long double div, long double obs, long double tau) {
    return static_cast<double>(div / tau * std::cos(2.0L * obs + 0.5L) + 0.5L);
  };
  const auto w = weight_function(Matrix<double>{{0.0, 1.0}}, {1.0, 1.0});
  EXPECT_NEAR(w(0, 0), closed(1, 0, 2), 1e-6);
  EXPECT_NEAR(w(0, 1), closed(1, 1, 2), 1e-6);
  EXPECT_NEAR(w(0, 0), 0.9388, 1e-4);
  EXPECT_NEAR(w(0, 1), 0.0995, 1e-4);

  const auto half = weight_function(Matrix<double>{{0.0, 1.0}}, {0.5, 0.5});
  EXPECT_NEAR(half(0, 0), closed(0.5L, 0, 2), 1e-6);
  EXPECT_NEAR(half(0, 1), closed(0.5L, 1, 2), 1e-6);
  EXPECT_NEAR(half(0, 0), 0.7194, 1e-4);
  EXPECT_NEAR(half(0, 1), 0.2997, 1e-4);
}

TEST(WeightFunction, ClampsOutsideUnitInterval)
{
  const auto w = weight_function(Matrix<double>{{0.0, 1.0}}, {1.0, 1.0}, WeightFunctionParams::make(2, 0.5, 0.5, 0.5));
  EXPECT_EQ(w(0, 0), 1.0);
  EXPECT_EQ(w(0, 1), 0.0);
}

TEST(WeightFunction, RejectsNonPositiveTau)
{
  EXPECT_THROW((void)WeightFunctionParams::make(2, 0.5, 0.0, 0.5), InvalidArgument);
  EXPECT_THROW((void)WeightFunctionParams::make(2, 0.5, -1.0, 0.5), InvalidArgument);
  EXPECT_THROW((void)weight_function(Matrix<double>{{0.0}}, {1.0}, {2, 0.5, 0.0, 0.5}), InvalidArgument);
  EXPECT_EQ(WeightFunctionParams{}, WeightFunctionParams::make(2, 0.5, 2, 0.5));
}

TEST(WeightFunction, StrictlyDecreasingInObservedVariation)
{
  for (double div : {0.05, 0.3, 0.7, 1.0})
  {
    double prev = 2.0;
    for (int i = 0; i <= 200; ++i)
    {
      const double obs = i / 200.0;
      const double w = weight_function(Matrix<double>{{obs}}, {div})(0, 0);
      EXPECT_LT(w, prev) << "div=" << div << " obs=" << obs;
      prev = w;
    }
  }
}

TEST(WeightFunction, DiversityBoundsDeviationFromHalf)
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i)
  {
    const double obs = u(rng), div = u(rng);
    const double w = weight_function(Matrix<double>{{obs}}, {div})(0, 0);
    EXPECT_LE(std::abs(w - 0.5), div / 2.0 + 1e-15);
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
  }
}

TEST(InferWeights, ConstantTraitColumnIsInconclusive)
{
  std::mt19937_64 rng(4);
  std::vector<Demonstration> recs;
  for (int i = 0; i < 6; ++i)
  {
    auto q = fixtures::random_matrix(3, 3, rng, 1.0, 9.0);
    for (std::size_t s = 0; s < 3; ++s)
      q(s, 1) = 4.0;
    recs.push_back({AssignmentMatrix(fixtures::random_counts(2, 3, rng)), SpeciesTraitMatrix(q)});
  }
  const auto res = infer_weights(DemonstrationSet(recs));
  EXPECT_EQ(res.weights(0, 1), 0.5);
  EXPECT_EQ(res.weights(1, 1), 0.5);
}

TEST(InferWeights, ScaleInvariance)
{
  const auto demos = random_demos(25, 3, 4, 5, 99);
  const auto base = infer_weights(demos);
  for (double c : {1e-3, 0.37, 12.5, 4e4})
  {
    std::vector<Demonstration> scaled;
    for (const auto& rec : demos.records())
    {
      auto q = rec.traits.values();
      for (std::size_t s = 0; s < q.rows(); ++s)
        q(s, 2) *= c;
      scaled.push_back({rec.assignment, SpeciesTraitMatrix(q)});
    }
    const auto res = infer_weights(DemonstrationSet(scaled));
    for (std::size_t i = 0; i < res.weights.values().size(); ++i)
      EXPECT_NEAR(res.weights.values().data()[i], base.weights.values().data()[i], 1e-9);
  }
}

TEST(InferWeights, PermutationEquivariant)
{
  const auto demos = random_demos(30, 2, 3, 4, 5);
  const auto base = infer_weights(demos);
  auto recs = demos.records();
  std::mt19937_64 rng(1);
  for (int k = 0; k < 5; ++k)
  {
    std::shuffle(recs.begin(), recs.end(), rng);
    EXPECT_EQ(infer_weights(DemonstrationSet(recs)).weights, base.weights);
  }
}

TEST(InferWeights, OutputWithinUnitInterval)
{
  for (std::uint64_t seed = 0; seed < 20; ++seed)
  {
    const auto res = infer_weights(random_demos(10, 3, 3, 3, seed));
    for (double v : res.weights.values().data())
    {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(InferWeights, ToyFixtureMatchesIndependentScript)
{
  const auto demos = io::load_demonstrations(TRAITPREF_DATA_DIR "/toy_demos");
  const auto expected = io::read_matrix_csv(TRAITPREF_DATA_DIR "/toy_expected_weights.csv").values;
  const auto res = infer_weights(demos);
  ASSERT_EQ(res.weights.values().shape(), expected.shape());
  for (std::size_t i = 0; i < expected.size(); ++i)
    EXPECT_NEAR(res.weights.values().data()[i], expected.data()[i], 1e-12);
}

TEST(Baselines, NoPreferenceIsAllOnes)
{
  const auto w = baseline_no_preference(random_demos(3, 3, 2, 3, 1));
  EXPECT_EQ(w.values(), Matrix<double>(3, 3, 1.0));
}

TEST(Baselines, NoDiversityUsesHalf)
{
  const auto demos = random_demos(12, 2, 3, 3, 2);
  const auto res = baseline_no_inherent_diversity(demos);
  const auto obs = observed_variation(demos);
  EXPECT_EQ(res.weights, weight_function(obs.cv, {0.5, 0.5, 0.5}));
  EXPECT_EQ(res.stats.cv_div, (std::vector<double>{0.5, 0.5, 0.5}));
}

TEST(Baselines, NoDiversityIgnoresTraitRescaling)
{
  const auto demos = random_demos(12, 2, 3, 3, 6);
  std::vector<Demonstration> scaled;
  for (const auto& rec : demos.records())
  {
    auto q = rec.traits.values();
    for (std::size_t s = 0; s < q.rows(); ++s)
      q(s, 0) *= 3.0;
    scaled.push_back({rec.assignment, SpeciesTraitMatrix(q)});
  }
  const auto a = baseline_no_inherent_diversity(demos).weights;
  const auto b = baseline_no_inherent_diversity(DemonstrationSet(scaled)).weights;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    EXPECT_NEAR(a.values().data()[i], b.values().data()[i], 1e-12);
}

TEST(TopK, FullSetIsIdentity)
{
  const PreferenceWeights w(Matrix<double>{{0.2, 0.9, 0.4}, {0.3, 0.1, 0.8}});
  const auto sel = top_k_traits(w, 3);
  EXPECT_EQ(sel.traits, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(sel.weights, w);
}

TEST(TopK, DominantColumnSelected)
{
  Matrix<double> m(3, 5, 0.5);
  for (std::size_t t = 0; t < 3; ++t)
    m(t, 3) = 0.9;
  EXPECT_EQ(top_k_traits(PreferenceWeights(m), 1).traits, (std::vector<std::size_t>{3}));
}

TEST(TopK, RanksByMeanAcrossTasks)
{
  const PreferenceWeights w(Matrix<double>{{0.6, 0.6}, {0.2, 0.8}});
  const auto sel = top_k_traits(w, 1);
  EXPECT_EQ(sel.traits, (std::vector<std::size_t>{1}));
  EXPECT_EQ(sel.weights.values(), (Matrix<double>{{0.6}, {0.8}}));
}

TEST(TopK, TiesGoToLowerIndexAndRangeChecked)
{
  const PreferenceWeights w(Matrix<double>{{0.5, 0.7, 0.7, 0.7}});
  EXPECT_EQ(top_k_traits(w, 2).traits, (std::vector<std::size_t>{1, 2}));
  EXPECT_THROW((void)top_k_traits(w, 0), InvalidArgument);
  EXPECT_THROW((void)top_k_traits(w, 5), InvalidArgument);
}

TEST(Heatmap, GridCoversUnitSquare)
{
  const auto cells = weight_heatmap(11);
  ASSERT_EQ(cells.size(), 121u);
  for (const auto& c : cells)
  {
    EXPECT_GE(c.cv_obs, 0.0);
    EXPECT_LE(c.cv_obs, 1.0);
    EXPECT_DOUBLE_EQ(c.weight, weight_function(Matrix<double>{{c.cv_obs}}, {c.cv_div})(0, 0));
  }
  EXPECT_THROW((void)weight_heatmap(1), InvalidArgument);
}
