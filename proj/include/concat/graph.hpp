#pragma once

// Cascade and global graph construction.  A cascade graph has one node per
// event: the root plus one node per triplet, so a user who retweets twice
// contributes two occurrence-indexed nodes and N = |triplets| always holds.

#include <Eigen/SparseCore>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "concat/cascade.hpp"

namespace concat {

class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CascadeGraph {
  struct Node {
    std::string user;
    int occurrence = 0;  // 0 for a user's first event in this cascade
    double join_time = 0.0;
  };

  std::string cascade_id;
  std::vector<Node> nodes;                    // first-appearance order, node 0 = root
  std::vector<std::pair<int, int>> edges;     // (parent, child), one per triplet
  std::vector<double> edge_weights;           // observation_time - child join time
  Eigen::SparseMatrix<double> adjacency;      // symmetric, weighted
  Eigen::VectorXd degrees;                    // row sums of adjacency

  // Stable per-node key used by embedding tables: "user" for the first
  // occurrence, "user#k" for re-retweets.
  std::string node_key(int i) const {
    const Node& n = nodes.at(static_cast<std::size_t>(i));
    if (n.occurrence == 0) return n.user;
    return n.user + "#" + std::to_string(n.occurrence);
  }
};

inline CascadeGraph build_cascade_graph(const Cascade& cascade, double t_s) {
  if (cascade.origin_user.empty()) throw StructuralError("cascade has no origin user");
  CascadeGraph g;
  g.cascade_id = cascade.cascade_id;
  g.nodes.push_back(CascadeGraph::Node{cascade.origin_user, 0, 0.0});

  std::unordered_map<std::string, int> last_node_of_user;  // most recent event per user
  std::unordered_map<std::string, int> occurrences;
  last_node_of_user[cascade.origin_user] = 0;
  occurrences[cascade.origin_user] = 1;

  for (const auto& tr : cascade.triplets) {
    if (tr.time > t_s)
      throw StructuralError("cascade " + cascade.cascade_id +
                            " holds a triplet past the observation time");
    auto it = last_node_of_user.find(tr.source_user);
    if (it == last_node_of_user.end())
      throw StructuralError("cascade " + cascade.cascade_id + ": triplet retweets from '" +
                            tr.source_user + "' who never joined");
    const int parent = it->second;
    const int child = static_cast<int>(g.nodes.size());
    const int occ = occurrences[tr.target_user]++;
    g.nodes.push_back(CascadeGraph::Node{tr.target_user, occ, tr.time});
    last_node_of_user[tr.target_user] = child;
    g.edges.emplace_back(parent, child);
    g.edge_weights.push_back(t_s - tr.time);
  }

  const auto n = static_cast<int>(g.nodes.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [a, b] = g.edges[e];
    entries.emplace_back(a, b, g.edge_weights[e]);
    entries.emplace_back(b, a, g.edge_weights[e]);
  }
  g.adjacency.resize(n, n);
  g.adjacency.setFromTriplets(entries.begin(), entries.end());
  g.degrees = Eigen::VectorXd::Zero(n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    g.degrees[g.edges[e].first] += g.edge_weights[e];
    g.degrees[g.edges[e].second] += g.edge_weights[e];
  }
  return g;
}

struct GlobalGraph {
  std::vector<std::string> nodes;  // user universe, first-appearance order
  std::unordered_map<std::string, int> index;
  std::vector<std::pair<int, int>> edges;  // undirected, deduplicated, first < second

  Eigen::SparseMatrix<double> adjacency() const {
    const auto n = static_cast<int>(nodes.size());
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(2 * edges.size());
    for (auto [a, b] : edges) {
      entries.emplace_back(a, b, 1.0);
      entries.emplace_back(b, a, 1.0);
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(entries.begin(), entries.end());
    return A;
  }
};

// Undirected user graph from retweet pairs observed at or before t_s.  Every
// user appearing in a retained cascade becomes a node even if isolated.
inline GlobalGraph build_global_graph(std::span<const Cascade> cascades, double t_s) {
  GlobalGraph g;
  auto intern = [&g](const std::string& user) {
    auto [it, inserted] = g.index.try_emplace(user, static_cast<int>(g.nodes.size()));
    if (inserted) g.nodes.push_back(user);
    return it->second;
  };
  std::unordered_set<std::uint64_t> seen;
  for (const auto& c : cascades) {
    intern(c.origin_user);
    for (const auto& tr : c.triplets) {
      const int a = intern(tr.source_user);
      const int b = intern(tr.target_user);
      if (tr.time > t_s) continue;  // no post-observation information
      if (a == b) continue;
      const auto lo = static_cast<std::uint64_t>(std::min(a, b));
      const auto hi = static_cast<std::uint64_t>(std::max(a, b));
      if (seen.insert((lo << 32) | hi).second)
        g.edges.emplace_back(static_cast<int>(lo), static_cast<int>(hi));
    }
  }
  return g;
}

}  // namespace concat
