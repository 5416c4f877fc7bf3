#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace sisnet {

using NodeId = std::size_t;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A weighted edge (src, dst). In the epidemic model, an edge j -> i lets
/// node j infect node i.
struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Adjacency entry seen from one endpoint.
struct Neighbor {
  NodeId node = 0;
  double weight = 0.0;
};

/// Immutable weighted digraph without self-loops or parallel edges.
///
/// Edges are stored sorted by (src, dst); in- and out-neighbour lists are
/// kept in compressed form so the model can evaluate infection pressure
/// without materializing the dense adjacency matrix.
class Digraph {
 public:
  Digraph() = default;

  /// Throws GraphError on out-of-range ids, self-loops, duplicate edges or
  /// non-positive / non-finite weights.
  Digraph(std::size_t n, std::vector<Edge> edges,
          std::vector<std::string> labels = {});

  std::size_t size() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::span<const Neighbor> in_neighbors(NodeId i) const;
  std::span<const Neighbor> out_neighbors(NodeId i) const;

  /// Weight of edge (i, j), 0 when absent.
  double weight(NodeId i, NodeId j) const;

  /// Dense adjacency A with A(i, j) = weight of edge (i, j).
  Eigen::MatrixXd adjacency() const;

  double total_weight() const;

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.labels_ == b.labels_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> in_offsets_, out_offsets_;
  std::vector<Neighbor> in_, out_;
};

/// Condensation of a digraph into strongly connected components.
///
/// Components are numbered by their smallest node id. `order` is a
/// topological order of the condensation (upstream first) where ties are
/// broken by component number.
struct SccDecomposition {
  std::vector<std::vector<NodeId>> components;  // each sorted ascending
  std::vector<std::size_t> component_of;        // node -> component
  std::vector<std::pair<std::size_t, std::size_t>> condensation_edges;
  std::vector<std::size_t> order;
  // reach[a * N + b] != 0 iff component b is reachable from a (reflexive).
  std::vector<char> reach;

  std::size_t count() const { return components.size(); }
  bool reaches(std::size_t from, std::size_t to) const {
    return reach[from * components.size() + to] != 0;
  }
  /// Components with an edge into `c`.
  std::vector<std::size_t> predecessors(std::size_t c) const;
};

SccDecomposition scc_decompose(const Digraph& g);

enum class Connectivity { StronglyConnected, WeaklyConnected, Disconnected };

const char* to_string(Connectivity c);

Connectivity connectivity_class(const Digraph& g);

struct SourceSets {
  std::vector<NodeId> sources;       // no incoming edge
  std::vector<NodeId> near_sources;  // receive an edge from some source
};

SourceSets sources_and_near_sources(const Digraph& g);

/// Support digraph of a square matrix: edge (i, j) for every nonzero
/// off-diagonal entry m(i, j).
Digraph support_digraph(const Eigen::MatrixXd& m);

/// A square matrix is irreducible iff its support digraph is strongly
/// connected; a 1x1 matrix is irreducible iff its entry is nonzero.
bool is_irreducible(const Eigen::MatrixXd& m);

}  // namespace sisnet
