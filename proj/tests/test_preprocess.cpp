#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>

#include "support.hpp"

using namespace pathzva;
using namespace testing_support;

namespace {

std::unique_ptr<MarkovModel> fig3(double eps) { return zoo::make_two_type(zoo::fig3_params(eps)); }
std::unique_ptr<MarkovModel> fig4(double eps) { return zoo::make_two_type(zoo::fig4_params(eps)); }
std::unique_ptr<MarkovModel> table4(double eps) { return zoo::make_two_type(zoo::table4_params(eps)); }

std::vector<std::pair<std::string, std::unique_ptr<MarkovModel>>> small_models() {
  std::vector<std::pair<std::string, std::unique_ptr<MarkovModel>>> out;
  out.emplace_back("fig1", std::make_unique<zoo::Fig1Chain>(5, 0.1));
  out.emplace_back("fig3 0.1", fig3(0.1));
  out.emplace_back("fig3 0.001", fig3(0.001));
  out.emplace_back("fig4 0.01", fig4(0.01));
  out.emplace_back("table4 0.01", table4(0.01));
  out.emplace_back("dds dedicated", zoo::make_dds({0.01, zoo::DdsStrategy::Dedicated, true}));
  return out;
}

/// Symmetric random walk on the integers with no reachable goal nearby.
class EndlessWalk final : public MarkovModel {
 public:
  std::string name() const override { return "walk"; }
  State initial_state() const override { return {0}; }
  bool is_goal(const State& s) const override { return s[0] == 1'000'000; }
  bool is_taboo(const State&) const override { return false; }
  double epsilon() const override { return 0.1; }
  std::vector<Transition> successors(const State& s) const override {
    return {{{s[0] + 1}, 0.5, EpsilonOrder(0)}, {{s[0] - 1}, 0.5, EpsilonOrder(0)}};
  }
};

}  // namespace

TEST(Preprocess, Fig1SetsAndDistances) {
  const double eps = 0.1;
  zoo::Fig1Chain m(5, eps);
  auto pre = preprocess(m);
  EXPECT_EQ(pre.distance().value(), 4);
  EXPECT_NEAR(pre.p_delta(), std::pow(eps, 4), 1e-18);
  EXPECT_EQ(pre.gamma().size(), 0u);
  EXPECT_EQ(pre.report().lambda_size, 7u);  // s, levels 1-4, t and g
  for (int level = 1; level <= 4; ++level) {
    auto i = *pre.space().find({level});
    EXPECT_TRUE(pre.in_lambda(i));
    EXPECT_EQ(pre.d_forward(i).value(), level - 1);
    EXPECT_EQ(pre.d_backward(i).value(), 5 - level);
    EXPECT_NEAR(pre.v_delta(i), std::pow(eps, 5 - level), 1e-18);
  }
  EXPECT_EQ(pre.d_backward(pre.goal()).value(), 0);
  EXPECT_EQ(pre.v_delta(pre.goal()), 1.0);
}

TEST(Preprocess, Fig3RelevantSetAndGamma) {
  auto m = fig3(0.01);
  auto pre = preprocess(*m);
  EXPECT_EQ(pre.distance().value(), 3);
  std::set<State> gamma;
  for (auto i : pre.gamma()) gamma.insert(pre.space().descriptor(i));
  EXPECT_EQ(gamma, (std::set<State>{{2, 3}, {3, 2}}));
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      auto i = pre.space().find({a, b});
      bool expected = a + b <= 4;
      EXPECT_EQ(i && pre.in_lambda(*i), expected) << a << "," << b;
    }
  }
  for (auto i : pre.gamma()) {
    EXPECT_EQ(pre.d_backward(i).value(), 0);
    EXPECT_EQ(pre.v_delta(i), 1.0);
    EXPECT_NE(std::optional<std::int32_t>(i), pre.taboo());
  }
}

TEST(Preprocess, Fig4RemovesTheDeferredRepairCycle) {
  auto m = fig4(0.01);
  auto pre = preprocess(*m);
  ASSERT_EQ(pre.hpcs().size(), 1u);
  const auto& h = pre.hpcs()[0];
  std::set<State> members;
  for (auto i : h.members) members.insert(pre.space().descriptor(i));
  EXPECT_EQ(members, (std::set<State>{{1, 0}, {1, 1}}));
  std::map<State, double> exits;
  for (const auto& e : pre.row(*pre.space().find({1, 0})))
    exits[e.target == pre.goal() ? State{1, 2} : pre.space().descriptor(e.target)] += e.probability;
  ASSERT_EQ(exits.size(), 3u);
  EXPECT_NEAR((exits[{2, 0}]), 0.66, 0.01);
  EXPECT_NEAR((exits[{2, 1}]), 0.006, 0.01);
  EXPECT_NEAR((exits[{1, 2}]), 0.33, 0.01);
}

TEST(Preprocess, DistanceMatchesBellmanFord) {
  for (auto& [name, m] : small_models()) {
    auto pre = preprocess(*m);
    std::map<std::int32_t, std::int32_t> member_of;
    for (const auto& h : pre.hpcs())
      for (auto x : h.members) member_of[x] = h.trigger;
    auto chain = reduced_chain(*m, pre);
    auto d = bellman_ford_from_start(chain);
    ASSERT_GE(chain.goal, 0) << name;
    EXPECT_EQ(d[static_cast<std::size_t>(chain.goal)], pre.distance().value()) << name;
    const int dg = pre.distance().value();
    for (std::size_t x = 0; x < chain.states.size(); ++x) {
      if (static_cast<int>(x) == chain.goal || static_cast<int>(x) == chain.taboo) continue;
      auto i = x == 0 ? std::optional<std::int32_t>(0) : pre.space().find(chain.states[x]);
      const std::string where = name + " " + m->describe(chain.states[x]);
      if (i && member_of.count(*i)) {
        EXPECT_EQ(pre.d_forward(*i), pre.d_forward(member_of[*i])) << where;
        continue;
      }
      bool expected = d[x] <= dg;
      EXPECT_EQ(i && pre.in_lambda(*i), expected) << where;
      if (expected) EXPECT_EQ(pre.d_forward(*i).value(), d[x]) << where;
    }
    if (pre.hpcs().empty()) {
      auto original = model_chain(*m);
      EXPECT_EQ(bellman_ford_from_start(original)[static_cast<std::size_t>(original.goal)], dg) << name;
      EXPECT_EQ(bounded_goal_distance(*m, dg + 1), dg) << name;
      EXPECT_EQ(bounded_goal_distance(*m, dg - 1), kInf) << name;
    }
  }
}

// The deferred repair cycle of the unbalanced model is traversed many times
// before a second type-1 failure, which lowers the distance from 2 to 1.
TEST(Preprocess, CycleRemovalLowersDistance) {
  auto m = table4(0.001);
  auto pre = preprocess(*m);
  auto original = model_chain(*m);
  EXPECT_EQ(bellman_ford_from_start(original)[static_cast<std::size_t>(original.goal)], 2);
  EXPECT_EQ(pre.distance().value(), 1);
  const double pi = exact_hitting_probability(*m).pi;
  EXPECT_NEAR(pi / 0.001, 0.5, 0.01);
}

TEST(Preprocess, VDeltaMatchesPathEnumeration) {
  for (auto& [name, m] : small_models()) {
    auto pre = preprocess(*m);
    for (auto x : pre.lambda()) {
      if (pre.space().is_terminal(x)) continue;
      double brute = enumerate_dominant(pre, x, pre.d_backward(x).value());
      EXPECT_NEAR(pre.v_delta(x), brute, 1e-12 * brute) << name << " " << m->describe(pre.space().descriptor(x));
    }
  }
}

TEST(Preprocess, NoOrderZeroCycleRemainsInLambda) {
  for (auto& [name, m] : small_models()) {
    auto pre = preprocess(*m);
    enum { kNew, kOpen, kDone };
    std::vector<int> mark(pre.space().size(), kNew);
    std::function<bool(std::int32_t)> cyclic = [&](std::int32_t x) {
      mark[static_cast<std::size_t>(x)] = kOpen;
      for (const Edge& e : pre.row(x)) {
        if (e.order != kZeroOrder || !pre.in_lambda(e.target) || pre.space().is_terminal(e.target)) continue;
        int mk = mark[static_cast<std::size_t>(e.target)];
        if (mk == kOpen || (mk == kNew && cyclic(e.target))) return true;
      }
      mark[static_cast<std::size_t>(x)] = kDone;
      return false;
    };
    for (auto x : pre.lambda())
      if (!pre.space().is_terminal(x) && mark[static_cast<std::size_t>(x)] == kNew) EXPECT_FALSE(cyclic(x)) << name;
  }
}

TEST(Preprocess, ReductionPreservesHittingProbability) {
  for (auto& m : {fig4(0.1), fig4(0.001), table4(0.01)}) {
    auto pre = preprocess(*m);
    ASSERT_FALSE(pre.hpcs().empty());
    auto over = overrides_of(pre);
    double original = dense_hitting(model_chain(*m))[0];
    double reduced = dense_hitting(reduced_chain(*m, pre))[0];
    double via_exact = exact_hitting_probability(*m, {}, &over).pi;
    EXPECT_NEAR(reduced, original, 1e-10 * original);
    EXPECT_NEAR(via_exact, original, 1e-10 * original);
  }
}

TEST(Preprocess, GaussSeidelExitSolverGivesSameResult) {
  auto m = table4(0.01);
  PreprocessOptions gs;
  gs.exit_solver.method = ExitSolver::GaussSeidel;
  auto a = preprocess(*m);
  auto b = preprocess(*m, gs);
  ASSERT_EQ(a.space().size(), b.space().size());
  EXPECT_EQ(a.lambda(), b.lambda());
  EXPECT_NEAR(a.p_delta(), b.p_delta(), 1e-10 * a.p_delta());
  for (const auto& [i, row] : a.reduced().overrides()) {
    const Row& other = b.row(i);
    ASSERT_EQ(row.size(), other.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      EXPECT_EQ(row[k].target, other[k].target);
      EXPECT_NEAR(row[k].probability, other[k].probability, 1e-10);
    }
  }
}

TEST(LoopDetect, FalseTriggerLeavesChainUntouched) {
  TableModel m(0, {9}, {8},
               {{0, {{1, 0.5, 0}, {2, 0.5, 0}}}, {1, {{2, 0.9, 0}, {9, 0.1, 1}}}, {2, {{8, 0.9, 0}, {9, 0.1, 1}}}});
  StateSpace space(m);
  ReducedChain reduced;
  auto i1 = space.resolve({1});
  EXPECT_FALSE(loop_detect(space, reduced, i1).has_value());
  EXPECT_FALSE(reduced.has_override(i1));
  auto pre = preprocess(m);
  EXPECT_TRUE(pre.hpcs().empty());
}

// Cycle 1 <-> 2 leaving with eps from each side: the exit distribution from 1
// is 1/(2-eps) to the goal and (1-eps)/(2-eps) to t.
TEST(LoopDetect, MergesGenuineCycle) {
  const double eps = 0.1;
  TableModel m(0, {9}, {8},
               {{0, {{1, 1.0, 0}}}, {1, {{2, 1 - eps, 0}, {9, eps, 1}}}, {2, {{1, 1 - eps, 0}, {8, eps, 1}}}});
  StateSpace space(m);
  ReducedChain reduced;
  auto i1 = space.resolve({1});
  auto rec = loop_detect(space, reduced, i1);
  ASSERT_TRUE(rec.has_value());
  EXPECT_EQ(rec->members.size(), 2u);
  double to_goal = 0.0, to_taboo = 0.0;
  for (const Edge& e : reduced.row(space, i1)) {
    if (e.target == *space.goal()) to_goal += e.probability;
    if (e.target == *space.taboo()) to_taboo += e.probability;
  }
  EXPECT_NEAR(to_goal, 1 / (2 - eps), 1e-13);
  EXPECT_NEAR(to_taboo, (1 - eps) / (2 - eps), 1e-13);
}

TEST(Preprocess, ReportsModelFailures) {
  TableModel unreachable(0, {9}, {8}, {{0, {{8, 1.0, 0}}}});
  EXPECT_THROW(preprocess(unreachable), GoalUnreachable);
  TableModel starts_in_goal(9, {9}, {8}, {{9, {{8, 1.0, 0}}}});
  EXPECT_THROW(preprocess(starts_in_goal), ModelError);
  EndlessWalk walk;
  PreprocessOptions small;
  small.max_states = 1000;
  EXPECT_THROW(preprocess(walk, small), BudgetExceeded);
}

TEST(Preprocess, AutomaticOrdersMatchEmittedOnes) {
  zoo::Fig1Chain emitted(5, 0.1, true), automatic(5, 0.1, false);
  auto a = preprocess(emitted);
  auto b = preprocess(automatic);
  EXPECT_EQ(a.distance(), b.distance());
  EXPECT_EQ(a.lambda().size(), b.lambda().size());
  EXPECT_DOUBLE_EQ(a.p_delta(), b.p_delta());
}
