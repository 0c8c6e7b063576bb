#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <random>

#include "support.hpp"

using namespace pathzva;
using namespace testing_support;

TEST(Moments, MergeMatchesSequentialAccumulation) {
  std::mt19937_64 rng(9);
  std::exponential_distribution<double> draw(3.0);
  Moments all, left, right;
  for (int i = 0; i < 1000; ++i) {
    double x = draw(rng);
    all.add(x);
    (i < 377 ? left : right).add(x);
  }
  left.merge(right);
  EXPECT_EQ(left.n, all.n);
  EXPECT_NEAR(left.mean, all.mean, 1e-13);
  EXPECT_NEAR(left.variance(), all.variance(), 1e-12);
  Moments empty;
  empty.merge(all);
  EXPECT_EQ(empty.mean, all.mean);
}

TEST(Moments, SmallSamples) {
  Moments m;
  EXPECT_EQ(m.variance(), 0.0);
  EXPECT_EQ(ci_half_width(m), 0.0);
  m.add(1.0);
  m.add(3.0);
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_DOUBLE_EQ(m.variance(), 2.0);
  EXPECT_DOUBLE_EQ(ci_half_width(m), 1.96);
}

TEST(Wnvr, Examples) {
  EXPECT_DOUBLE_EQ(*wnvr(10.0, 2.0, 1.0, 1.0), 200.0);
  EXPECT_DOUBLE_EQ(*wnvr(0.3, 5.0, 0.3, 5.0), 1.0);
  EXPECT_FALSE(wnvr(1.0, 1.0, 0.0, 1.0).has_value());
  EXPECT_FALSE(wnvr(1.0, 0.0, 1.0, 1.0).has_value());
}

TEST(Estimator, IdenticalAcrossWorkerCounts) {
  auto m = zoo::make_two_type(zoo::fig3_params(0.01));
  auto pre = preprocess(*m);
  RunOptions o;
  o.runs = 3000;
  o.seed = 17;
  o.workers = 1;
  auto a = run_estimator(*m, {MeasureKind::ZvaDelta}, &pre, o);
  o.workers = 3;
  auto b = run_estimator(*m, {MeasureKind::ZvaDelta}, &pre, o);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_EQ(a.n_nondominant, b.n_nondominant);
  o.seed = 18;
  auto c = run_estimator(*m, {MeasureKind::ZvaDelta}, &pre, o);
  EXPECT_NE(a.mean, c.mean);
}

TEST(Estimator, TimeBudgetRunsWholeChunks) {
  auto m = zoo::make_two_type(zoo::fig3_params(0.1));
  RunOptions o;
  o.time_budget_ms = 150.0;
  const auto t0 = std::chrono::steady_clock::now();
  auto e = run_estimator(*m, {MeasureKind::MC}, nullptr, o);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_GT(e.n_runs, 0u);
  EXPECT_EQ(e.n_runs % o.chunk_size, 0u);
  EXPECT_LT(ms, 5000.0);
}

TEST(Estimator, RejectsInvalidOptions) {
  zoo::Fig1Chain m(5, 0.1);
  RunOptions o;
  o.variant = Variant::Plus;
  EXPECT_THROW(run_estimator(m, {MeasureKind::MC}, nullptr, o), ConfigError);
  o.variant = Variant::Plain;
  EXPECT_THROW(run_estimator(m, {MeasureKind::ZvaDelta}, nullptr, o), ConfigError);
  o.runs = 0;
  EXPECT_THROW(run_estimator(m, {MeasureKind::MC}, nullptr, o), ConfigError);
  EXPECT_THROW(parse_variant("plusplusplus"), ConfigError);
}

// Every measure and variant, on three small models, against a dense solve.
// With 95% intervals a few misses are expected; at most one in twenty is
// tolerated.
TEST(Estimator, UnbiasedOnSmallModels) {
  std::vector<std::unique_ptr<MarkovModel>> models;
  models.push_back(std::make_unique<zoo::Fig1Chain>(5, 0.1));
  models.push_back(zoo::make_two_type(zoo::fig3_params(0.1)));
  models.push_back(zoo::make_two_type(zoo::fig4_params(0.1)));
  int checks = 0, misses = 0;
  for (auto& m : models) {
    const double pi = dense_hitting(model_chain(*m))[0];
    auto pre = preprocess(*m);
    struct Case {
      MeasureKind kind;
      Variant variant;
    };
    std::vector<Case> cases{{MeasureKind::MC, Variant::Plain},        {MeasureKind::BFB, Variant::Plain},
                            {MeasureKind::IGBS, Variant::Plain},      {MeasureKind::ZvaDbar, Variant::Plain},
                            {MeasureKind::ZvaDelta, Variant::Plain},  {MeasureKind::ZvaDelta, Variant::Plus},
                            {MeasureKind::ZvaDelta, Variant::PlusPlus}};
    for (const auto& c : cases) {
      RunOptions o;
      o.runs = 100'000;
      o.seed = 1234 + static_cast<std::uint64_t>(checks);
      o.variant = c.variant;
      auto e = run_estimator(*m, {c.kind}, &pre, o);
      ++checks;
      const bool inside = std::abs(e.mean - pi) <= std::max(e.ci_half_width, 1e-12 * pi);
      if (!inside) {
        ++misses;
        std::cout << "outside interval: " << m->name() << " " << e.method << " " << e.variant << " estimate " << e.mean
                      << " +- " << e.ci_half_width << " vs " << pi << "\n";
      }
    }
  }
  EXPECT_EQ(checks, 21);
  EXPECT_LE(misses, 1);
}

TEST(Estimator, PlusVariantsReportDominanceQuantities) {
  auto m = zoo::make_two_type(zoo::fig4_params(0.01));
  auto pre = preprocess(*m);
  RunOptions o;
  o.runs = 5000;
  o.variant = Variant::PlusPlus;
  auto e = run_estimator(*m, {MeasureKind::ZvaDelta}, &pre, o);
  ASSERT_TRUE(e.p_delta && e.q_delta);
  EXPECT_DOUBLE_EQ(*e.p_delta, pre.p_delta());
  EXPECT_GT(*e.q_delta, 0.9);
  EXPECT_LE(*e.q_delta, 1.0);
  EXPECT_LT(e.n_nondominant, e.n_runs);
}

TEST(Exact, BirthDeathClosedForm) {
  for (auto [levels, eps] : {std::pair{5, 0.1}, std::pair{8, 0.3}, std::pair{3, 0.45}}) {
    zoo::Fig1Chain m(levels, eps);
    const double rho = (1 - eps) / eps;
    const double closed = (1 - rho) / (1 - std::pow(rho, levels));
    EXPECT_NEAR(exact_hitting_probability(m).pi, closed, 1e-12 * closed) << levels << " " << eps;
  }
}

TEST(Exact, SolversAgreeWithDenseOracle) {
  for (auto& m : {zoo::make_two_type(zoo::fig3_params(0.01)), zoo::make_two_type(zoo::fig4_params(0.001)),
                  zoo::make_two_type(zoo::table4_params(0.01))}) {
    const double dense = dense_hitting(model_chain(*m))[0];
    ExactOptions lu, gs;
    lu.method = ExactMethod::SparseLU;
    gs.method = ExactMethod::GaussSeidel;
    auto a = exact_hitting_probability(*m, lu);
    auto b = exact_hitting_probability(*m, gs);
    EXPECT_TRUE(a.direct);
    EXPECT_FALSE(b.direct);
    EXPECT_NEAR(a.pi, dense, 1e-10 * dense);
    EXPECT_NEAR(b.pi, dense, 1e-9 * dense);
  }
}

TEST(Exact, StateBudget) {
  auto m = zoo::make_dds({0.01, zoo::DdsStrategy::Dedicated, true});
  ExactOptions o;
  o.max_states = 100;
  EXPECT_THROW(exact_hitting_probability(*m, o), BudgetExceeded);
}

// State 0 is the up and regeneration state, 2 and 3 are down. The oracle is
// the stationary distribution of the generator, solved densely.
TEST(Unavailability, SmallCtmcMatchesStationaryDistribution) {
  const double eps = 0.1;
  std::map<int, std::vector<TableModel::Arc>> rows{{0, {{1, 1.0, -1}, {2, eps, -1}}},
                                                   {1, {{0, 1.0, -1}, {2, eps, -1}}},
                                                   {2, {{0, 1.0, -1}, {3, 1.0, -1}}},
                                                   {3, {{0, 2.0, -1}}}};
  TableModel m(0, {2, 3}, {0}, rows, eps, WeightKind::Rate);

  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(4, 4);
  for (const auto& [x, arcs] : rows)
    for (const auto& a : arcs) {
      gen(x, a.target) += a.weight;
      gen(x, x) -= a.weight;
    }
  Eigen::MatrixXd sys = gen.transpose();
  sys.row(3).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(4);
  rhs[3] = 1.0;
  Eigen::VectorXd stat = sys.partialPivLu().solve(rhs);
  const double exact = stat[2] + stat[3];

  auto pre = preprocess(m);
  UnavailabilityOptions o;
  o.runs_z = 50'000;
  o.runs_d = 50'000;
  o.seed = 5;
  auto u = estimate_unavailability(m, {MeasureKind::ZvaDelta}, &pre, o);
  EXPECT_NEAR(u.value, exact, exact * (u.z_half_width / u.z_mean + u.d_half_width / u.d_mean));
  EXPECT_GT(u.z_half_width, 0.0);
}

TEST(Unavailability, RejectsUnsuitableModels) {
  zoo::Fig1Chain fig1(5, 0.1);
  auto pre1 = preprocess(fig1);
  EXPECT_THROW(estimate_unavailability(fig1, {MeasureKind::ZvaDelta}, &pre1, {}), ConfigError);
  auto fig4 = zoo::make_two_type(zoo::fig4_params(0.01));
  auto pre4 = preprocess(*fig4);
  EXPECT_THROW(estimate_unavailability(*fig4, {MeasureKind::ZvaDelta}, &pre4, {}), ConfigError);
}

TEST(Unavailability, TwoTypeModelIsPlausible) {
  auto m = zoo::make_two_type(zoo::fig3_params(0.1));
  auto pre = preprocess(*m);
  UnavailabilityOptions o;
  o.runs_z = 5000;
  o.runs_d = 5000;
  auto u = estimate_unavailability(*m, {MeasureKind::ZvaDelta}, &pre, o);
  EXPECT_GT(u.value, 0.0);
  EXPECT_LT(u.value, 1.0);
  EXPECT_GT(u.d_mean, 1.0 / (0.2));
}
