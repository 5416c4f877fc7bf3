#include "sisnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace sisnet {

namespace {

void build_csr(std::size_t n, const std::vector<Edge>& edges, bool incoming,
               std::vector<std::size_t>& offsets, std::vector<Neighbor>& out) {
  offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++offsets[(incoming ? e.dst : e.src) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  out.assign(edges.size(), Neighbor{});
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& e : edges) {
    const NodeId key = incoming ? e.dst : e.src;
    out[cursor[key]++] = Neighbor{incoming ? e.src : e.dst, e.weight};
  }
}

std::string edge_str(const Edge& e) {
  std::ostringstream os;
  os << "(" << e.src << ", " << e.dst << ")";
  return os.str();
}

}  // namespace

Digraph::Digraph(std::size_t n, std::vector<Edge> edges,
                 std::vector<std::string> labels)
    : n_(n), edges_(std::move(edges)), labels_(std::move(labels)) {
  if (n_ == 0) throw GraphError("digraph needs at least one node");
  if (!labels_.empty() && labels_.size() != n_)
    throw GraphError("label count does not match node count");
  for (const auto& e : edges_) {
    if (e.src >= n_ || e.dst >= n_)
      throw GraphError("edge " + edge_str(e) + " references a node outside [0, " +
                       std::to_string(n_) + ")");
    if (e.src == e.dst)
      throw GraphError("self-loop on node " + std::to_string(e.src) +
                       " is not allowed");
    if (!std::isfinite(e.weight) || e.weight <= 0.0)
      throw GraphError("edge " + edge_str(e) + " must have a positive weight");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k - 1].src == edges_[k].src && edges_[k - 1].dst == edges_[k].dst)
      throw GraphError("duplicate edge " + edge_str(edges_[k]));
  }
  build_csr(n_, edges_, true, in_offsets_, in_);
  build_csr(n_, edges_, false, out_offsets_, out_);
}

std::span<const Neighbor> Digraph::in_neighbors(NodeId i) const {
  return {in_.data() + in_offsets_[i], in_offsets_[i + 1] - in_offsets_[i]};
}

std::span<const Neighbor> Digraph::out_neighbors(NodeId i) const {
  return {out_.data() + out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]};
}

double Digraph::weight(NodeId i, NodeId j) const {
  for (const auto& nb : out_neighbors(i))
    if (nb.node == j) return nb.weight;
  return 0.0;
}

Eigen::MatrixXd Digraph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& e : edges_) a(e.src, e.dst) = e.weight;
  return a;
}

double Digraph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges_) s += e.weight;
  return s;
}

std::vector<std::size_t> SccDecomposition::predecessors(std::size_t c) const {
  std::vector<std::size_t> out;
  for (const auto& [a, b] : condensation_edges)
    if (b == c) out.push_back(a);
  return out;
}

SccDecomposition scc_decompose(const Digraph& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

  // Iterative Tarjan.
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), raw_comp(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<NodeId> stack;
  std::vector<std::pair<NodeId, std::size_t>> call;  // (node, next out-edge)
  std::size_t counter = 0, raw_count = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      const auto outs = g.out_neighbors(v);
      if (next < outs.size()) {
        const NodeId w = outs[next++].node;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          raw_comp[w] = raw_count;
        } while (w != v);
        ++raw_count;
      }
      const NodeId finished = v;
      call.pop_back();
      if (!call.empty()) {
        const NodeId parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }

  // Renumber components by smallest member id.
  std::vector<NodeId> min_member(raw_count, kUnvisited);
  for (NodeId v = 0; v < n; ++v)
    min_member[raw_comp[v]] = std::min(min_member[raw_comp[v]], v);
  std::vector<std::size_t> by_min(raw_count);
  std::iota(by_min.begin(), by_min.end(), 0);
  std::sort(by_min.begin(), by_min.end(), [&](std::size_t a, std::size_t b) {
    return min_member[a] < min_member[b];
  });
  std::vector<std::size_t> renumber(raw_count);
  for (std::size_t k = 0; k < raw_count; ++k) renumber[by_min[k]] = k;

  SccDecomposition d;
  const std::size_t count = raw_count;
  d.components.assign(count, {});
  d.component_of.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    d.component_of[v] = renumber[raw_comp[v]];
    d.components[d.component_of[v]].push_back(v);
  }

  for (const auto& e : g.edges()) {
    const auto a = d.component_of[e.src], b = d.component_of[e.dst];
    if (a != b) d.condensation_edges.emplace_back(a, b);
  }
  std::sort(d.condensation_edges.begin(), d.condensation_edges.end());
  d.condensation_edges.erase(
      std::unique(d.condensation_edges.begin(), d.condensation_edges.end()),
      d.condensation_edges.end());

  std::vector<std::vector<std::size_t>> succ(count);
  std::vector<std::size_t> indegree(count, 0);
  for (const auto& [a, b] : d.condensation_edges) {
    succ[a].push_back(b);
    ++indegree[b];
  }

  // Kahn with smallest-number-first tie breaking.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t c = 0; c < count; ++c)
    if (indegree[c] == 0) ready.push(c);
  while (!ready.empty()) {
    const auto c = ready.top();
    ready.pop();
    d.order.push_back(c);
    for (auto s : succ[c])
      if (--indegree[s] == 0) ready.push(s);
  }

  // Reachability by DFS from every component.
  d.reach.assign(count * count, 0);
  std::vector<std::size_t> todo;
  for (std::size_t c = 0; c < count; ++c) {
    char* row = d.reach.data() + c * count;
    row[c] = 1;
    todo.assign(1, c);
    while (!todo.empty()) {
      const auto x = todo.back();
      todo.pop_back();
      for (auto s : succ[x]) {
        if (!row[s]) {
          row[s] = 1;
          todo.push_back(s);
        }
      }
    }
  }
  return d;
}

const char* to_string(Connectivity c) {
  switch (c) {
    case Connectivity::StronglyConnected: return "strongly_connected";
    case Connectivity::WeaklyConnected: return "weakly_connected";
    case Connectivity::Disconnected: return "disconnected";
  }
  return "?";
}

Connectivity connectivity_class(const Digraph& g) {
  if (scc_decompose(g).count() == 1) return Connectivity::StronglyConnected;

  // Undirected reachability from node 0.
  std::vector<char> seen(g.size(), 0);
  std::vector<NodeId> todo{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!todo.empty()) {
    const NodeId v = todo.back();
    todo.pop_back();
    auto visit = [&](std::span<const Neighbor> nbs) {
      for (const auto& nb : nbs) {
        if (!seen[nb.node]) {
          seen[nb.node] = 1;
          ++visited;
          todo.push_back(nb.node);
        }
      }
    };
    visit(g.out_neighbors(v));
    visit(g.in_neighbors(v));
  }
  return visited == g.size() ? Connectivity::WeaklyConnected
                             : Connectivity::Disconnected;
}

SourceSets sources_and_near_sources(const Digraph& g) {
  SourceSets s;
  std::vector<char> near(g.size(), 0);
  for (NodeId i = 0; i < g.size(); ++i) {
    if (!g.in_neighbors(i).empty()) continue;
    s.sources.push_back(i);
    for (const auto& nb : g.out_neighbors(i)) near[nb.node] = 1;
  }
  for (NodeId i = 0; i < g.size(); ++i)
    if (near[i]) s.near_sources.push_back(i);
  return s;
}

Digraph support_digraph(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("support_digraph: matrix must be square and non-empty");
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m(i, j) != 0.0) edges.push_back({i, j, 1.0});
  return Digraph(n, std::move(edges));
}

bool is_irreducible(const Eigen::MatrixXd& m) {
  if (m.rows() == 1 && m.cols() == 1) return m(0, 0) != 0.0;
  return scc_decompose(support_digraph(m)).count() == 1;
}

}  // namespace sisnet
