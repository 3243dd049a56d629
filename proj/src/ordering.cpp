#include "cormf/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "cormf/error.hpp"
#include "cormf/rng.hpp"

namespace cormf {

SpinOrder::SpinOrder(std::vector<int> permutation) : perm_(std::move(permutation)) {
  std::vector<char> seen(perm_.size(), 0);
  for (int v : perm_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)]) {
      throw ContractError("spin order is not a permutation");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

SpinOrder SpinOrder::identity(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return SpinOrder(std::move(p));
}

UnionFind::UnionFind(int n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  while (parent_[static_cast<std::size_t>(x)] != x) {
    auto& p = parent_[static_cast<std::size_t>(x)];
    p = parent_[static_cast<std::size_t>(p)];
    x = p;
  }
  return x;
}

bool UnionFind::unite(int x, int y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  auto& rx = rank_[static_cast<std::size_t>(x)];
  auto& ry = rank_[static_cast<std::size_t>(y)];
  if (rx < ry) std::swap(x, y);
  parent_[static_cast<std::size_t>(y)] = x;
  if (rx == ry) ++rank_[static_cast<std::size_t>(x)];
  return true;
}

std::vector<WeightedEdge> coupling_edges(const IsingModel& model) {
  const auto& pair = model.pair_couplings();
  std::vector<WeightedEdge> edges;
  for (int u = 0; u < model.n(); ++u) {
    for (int v = u + 1; v < model.n(); ++v) {
      const double w = std::abs(pair(u, v));
      if (w > 0.0) edges.push_back({u, v, w});
    }
  }
  return edges;
}

CriticalityResult criticality_order(const IsingModel& model, TieBreak tie_break) {
  const int n = model.n();
  auto edges = coupling_edges(model);
  std::stable_sort(edges.begin(), edges.end(),
                   [](const WeightedEdge& a, const WeightedEdge& b) { return a.weight > b.weight; });

  std::optional<Rng> rng;
  if (const auto* seeded = std::get_if<TieSeeded>(&tie_break)) {
    rng.emplace(seeded->seed);
    for (std::size_t lo = 0; lo < edges.size();) {
      std::size_t hi = lo + 1;
      while (hi < edges.size() && edges[hi].weight == edges[lo].weight) ++hi;
      std::vector<WeightedEdge> run(edges.begin() + static_cast<std::ptrdiff_t>(lo),
                                    edges.begin() + static_cast<std::ptrdiff_t>(hi));
      rng->shuffle(run);
      std::copy(run.begin(), run.end(), edges.begin() + static_cast<std::ptrdiff_t>(lo));
      lo = hi;
    }
  }

  UnionFind sets(n);
  std::vector<char> placed(static_cast<std::size_t>(n), 0);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  auto place = [&](int v) {
    placed[static_cast<std::size_t>(v)] = 1;
    order.push_back(v);
  };

  SpanningForest forest;
  for (const auto& e : edges) {
    if (static_cast<int>(forest.edges.size()) == n - 1) break;
    if (!sets.unite(e.u, e.v)) continue;
    forest.edges.emplace_back(e.u, e.v);
    forest.total_weight += e.weight;
    const bool has_u = placed[static_cast<std::size_t>(e.u)];
    const bool has_v = placed[static_cast<std::size_t>(e.v)];
    if (!has_u && !has_v) {
      const bool swap = rng && rng->uniform() < 0.5;
      place(swap ? e.v : e.u);
      place(swap ? e.u : e.v);
    } else if (has_u && !has_v) {
      place(e.v);
    } else if (!has_u && has_v) {
      place(e.u);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!placed[static_cast<std::size_t>(v)]) place(v);
  }
  return {SpinOrder(std::move(order)), std::move(forest)};
}

SpinOrder random_order(int n, std::uint64_t seed) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  Rng rng(seed);
  rng.shuffle(p);
  return SpinOrder(std::move(p));
}

SpinOrder inverse_order(const SpinOrder& order) {
  std::vector<int> p(order.indices().rbegin(), order.indices().rend());
  return SpinOrder(std::move(p));
}

}  // namespace cormf
