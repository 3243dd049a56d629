#include <algorithm>
#include <chrono>
#include <map>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "cormf/datasets.hpp"
#include "cormf/error.hpp"
#include "cormf/ordering.hpp"

using namespace cormf;

namespace {

IsingModel upper_model(int n, const std::vector<std::tuple<int, int, double>>& couplings) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v, w] : couplings) J(u, v) = w;
  return IsingModel(J, Eigen::VectorXd::Zero(n));
}

bool is_permutation(const std::vector<int>& p) {
  std::vector<int> s = p;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != static_cast<int>(i)) return false;
  return true;
}

bool acyclic(int n, const std::vector<std::pair<int, int>>& edges) {
  UnionFind uf(n);
  for (auto [u, v] : edges)
    if (!uf.unite(u, v)) return false;
  return true;
}

}  // namespace

TEST_CASE("spin order must be a permutation") {
  CHECK_THROWS_AS(SpinOrder({0, 0}), ContractError);
  CHECK_THROWS_AS(SpinOrder({1, 2}), ContractError);
  CHECK(SpinOrder({1, 0}).size() == 2);
}

TEST_CASE("union find") {
  UnionFind uf(5);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(3, 4));
  CHECK_FALSE(uf.unite(1, 0));
  CHECK(uf.find(0) == uf.find(1));
  CHECK(uf.find(1) != uf.find(3));
  CHECK(uf.unite(1, 4));
  CHECK(uf.find(0) == uf.find(3));
}

TEST_CASE("criticality order on hand-traced graphs") {
  SUBCASE("triangle") {
    const auto r = criticality_order(upper_model(3, {{0, 1, 3.0}, {1, 2, 2.0}, {0, 2, 1.0}}));
    CHECK(r.order.indices() == std::vector<int>{0, 1, 2});
    CHECK(r.forest.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(inverse_order(r.order).indices() == std::vector<int>{2, 1, 0});
  }
  SUBCASE("single negative edge") {
    const auto r = criticality_order(upper_model(2, {{0, 1, -5.0}}));
    CHECK(r.order.indices() == std::vector<int>{0, 1});
    CHECK(r.forest.total_weight == 5.0);
  }
  SUBCASE("star") {
    const auto r = criticality_order(upper_model(4, {{0, 2, 4.0}, {1, 2, -3.0}, {2, 3, 1.0}}));
    CHECK(r.order.indices() == std::vector<int>{0, 2, 1, 3});
  }
  SUBCASE("disconnected graph yields a forest and an ascending suffix") {
    const auto r = criticality_order(upper_model(5, {{3, 4, 1.0}}));
    CHECK(r.order.indices() == std::vector<int>{3, 4, 0, 1, 2});
    CHECK(r.forest.edges.size() == 1);
  }
  SUBCASE("two trees joined later append nothing new") {
    const auto r = criticality_order(upper_model(4, {{0, 1, 5.0}, {2, 3, 4.0}, {1, 2, 1.0}}));
    CHECK(r.order.indices() == std::vector<int>{0, 1, 2, 3});
    CHECK(r.forest.edges.size() == 3);
  }
  SUBCASE("weight uses both stored triangles") {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 3);
    J(0, 1) = 1.0;
    J(1, 0) = 1.0;
    J(2, 1) = 1.5;
    const auto r = criticality_order(IsingModel(J, Eigen::VectorXd::Zero(3)));
    CHECK(r.order.indices() == std::vector<int>{0, 1, 2});
    CHECK(r.forest.total_weight == 3.5);
  }
}

TEST_CASE("ring dataset is walked from the first edge with all ties") {
  const auto r = criticality_order(datasets::spin_chain_100());
  std::vector<int> expected{0, 1, 99};
  for (int i = 2; i < 99; ++i) expected.push_back(i);
  CHECK(r.order.indices() == expected);
  CHECK(r.forest.edges.size() == 99);
  CHECK(r.forest.total_weight == doctest::Approx(198.0));
}

TEST_CASE("criticality order properties on random graphs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) J(i, j) = u(rng);
    const IsingModel m(J, Eigen::VectorXd::Zero(n));
    const auto r = criticality_order(m);
    CHECK(is_permutation(r.order.indices()));
    CHECK(acyclic(n, r.forest.edges));
    CHECK(static_cast<int>(r.forest.edges.size()) == n - 1);

    const Eigen::MatrixXd w = J.cwiseAbs() + J.transpose().cwiseAbs();
    Eigen::Index bi = 0, bj = 0;
    w.maxCoeff(&bi, &bj);
    const std::vector<int> head{r.order[0], r.order[1]};
    CHECK(std::is_permutation(head.begin(), head.end(), std::vector<int>{static_cast<int>(std::min(bi, bj)), static_cast<int>(std::max(bi, bj))}.begin()));
    if (n <= 6) CHECK(r.forest.total_weight == doctest::Approx(oracle::max_spanning_tree_weight(w)));

    const auto seeded = criticality_order(m, TieSeeded{static_cast<std::uint64_t>(trial)});
    CHECK(is_permutation(seeded.order.indices()));
    CHECK(seeded.forest.total_weight == doctest::Approx(r.forest.total_weight));
  }
}

TEST_CASE("seeded tie-breaking is reproducible and explores ties") {
  const auto m = datasets::dense_n20(5, 1);
  const auto a = criticality_order(m, TieSeeded{3});
  const auto b = criticality_order(m, TieSeeded{3});
  CHECK(a.order == b.order);
  bool differs = false;
  for (std::uint64_t s = 0; s < 10 && !differs; ++s) differs = criticality_order(m, TieSeeded{s}).order != a.order;
  CHECK(differs);
}

TEST_CASE("random and inverse orders") {
  CHECK(random_order(1, 5).indices() == std::vector<int>{0});
  CHECK(random_order(7, 42) == random_order(7, 42));
  const auto o = random_order(9, 3);
  CHECK(inverse_order(inverse_order(o)) == o);

  std::map<std::vector<int>, int> counts;
  constexpr int trials = 10000;
  for (int s = 0; s < trials; ++s) ++counts[random_order(3, static_cast<std::uint64_t>(s)).indices()];
  CHECK(counts.size() == 6);
  double chi2 = 0.0;
  for (const auto& [perm, c] : counts) {
    CHECK(std::abs(c / static_cast<double>(trials) - 1.0 / 6.0) < 0.02);
    const double e = trials / 6.0;
    chi2 += (c - e) * (c - e) / e;
  }
  CHECK(chi2 < 20.5);  // 99.9% quantile, 5 degrees of freedom
}

TEST_CASE("ordering a dense 1000-spin graph stays within budget") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 1000;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) J(i, j) = u(rng);
  const IsingModel m(J, Eigen::VectorXd::Zero(n));
  const auto start = std::chrono::steady_clock::now();
  const auto r = criticality_order(m);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(r.order.size() == n);
  CHECK(seconds < 5.0);
}
