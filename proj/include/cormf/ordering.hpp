#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "cormf/ising.hpp"

namespace cormf {

/// A permutation of spin indices; position t holds the spin generated at step t.
class SpinOrder {
 public:
  SpinOrder() = default;
  /// Throws ContractError unless `permutation` is a bijection on [0, n).
  explicit SpinOrder(std::vector<int> permutation);
  static SpinOrder identity(int n);

  int size() const { return static_cast<int>(perm_.size()); }
  int operator[](int t) const { return perm_[static_cast<std::size_t>(t)]; }
  const std::vector<int>& indices() const { return perm_; }
  bool operator==(const SpinOrder&) const = default;

 private:
  std::vector<int> perm_;
};

struct WeightedEdge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

struct SpanningForest {
  std::vector<std::pair<int, int>> edges;
  double total_weight = 0.0;
};

struct TieByIndex {};
struct TieSeeded {
  std::uint64_t seed = 0;
};
using TieBreak = std::variant<TieByIndex, TieSeeded>;

/// Disjoint-set forest with path halving and union by rank.
class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int x);
  /// Returns false when x and y were already connected.
  bool unite(int x, int y);

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

/// Candidate edges of the model, weight |J_uv + J_vu|, u < v, zero weights dropped.
std::vector<WeightedEdge> coupling_edges(const IsingModel& model);

struct CriticalityResult {
  SpinOrder order;
  SpanningForest forest;
};

/// Greedy maximum-|J| spanning forest (Kruskal) recording the order in which
/// spins are first touched. Vertices never touched by an accepted edge are
/// appended in ascending index order.
///
/// With TieByIndex, equal weights are taken in (u, v) lexicographic order and a
/// fresh edge appends u before v. TieSeeded shuffles equal-weight runs and the
/// orientation of fresh edges.
CriticalityResult criticality_order(const IsingModel& model, TieBreak tie_break = TieByIndex{});

SpinOrder random_order(int n, std::uint64_t seed);

SpinOrder inverse_order(const SpinOrder& order);

}  // namespace cormf
