#include "sisnet/generate.hpp"

#include <algorithm>
#include <cmath>

#include "sisnet/spectral.hpp"

namespace sisnet {

namespace {

constexpr std::size_t kMaxRedraws = 10000;
constexpr std::size_t kGdNodes = 105;

struct Builder {
  std::size_t n;
  std::vector<Edge> edges;
  std::vector<double> beta, delta;

  explicit Builder(std::size_t n_) : n(n_), beta(n_, 1.0), delta(n_, 1.0) {}

  bool has(NodeId a, NodeId b) const {
    return std::any_of(edges.begin(), edges.end(),
                       [&](const Edge& e) { return e.src == a && e.dst == b; });
  }
  void add(NodeId a, NodeId b, double w = 1.0) {
    if (a != b && !has(a, b)) edges.push_back({a, b, w});
  }
  void add_both(NodeId a, NodeId b, double w = 1.0) {
    add(a, b, w);
    add(b, a, w);
  }
  EpidemicNetwork build() const { return EpidemicNetwork(Digraph(n, edges), beta, delta); }
};

void draw_rates(Rng& rng, std::vector<double>& v) {
  for (auto& x : v) x = rng.uniform(0.5, 1.5);
}

std::size_t node_count(const GenerateConfig& cfg, std::size_t min) {
  const std::size_t n = cfg.nodes.value_or(20);
  if (n < min) throw GenerateError(cfg.family + " needs at least " + std::to_string(min) + " nodes");
  return n;
}

void check_prob(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw GenerateError("edge probability must lie in [0, 1]");
}

void check_target(std::optional<double> r0, const char* what) {
  if (r0 && !(*r0 > 0.0 && std::isfinite(*r0)))
    throw GenerateError(std::string(what) + " must be positive");
}

// Uniform beta override, then either a uniform delta or delta scaled to hit
// the R0 target.
EpidemicNetwork finish(const GenerateConfig& cfg, Builder b, double default_r0) {
  if (cfg.beta) std::fill(b.beta.begin(), b.beta.end(), *cfg.beta);
  if (cfg.delta) {
    std::fill(b.delta.begin(), b.delta.end(), *cfg.delta);
    return b.build();
  }
  return scale_to_r0(b.build(), cfg.r0.value_or(default_r0));
}

// Delta of the nodes in [first, first + count) scaled so that the component
// they form has reproduction number `target`.
void scale_block(Builder& b, std::size_t first, std::size_t count, double target) {
  std::vector<Edge> local;
  for (const auto& e : b.edges)
    if (e.src >= first && e.src < first + count && e.dst >= first && e.dst < first + count)
      local.push_back({e.src - first, e.dst - first, e.weight});
  const EpidemicNetwork sub(
      Digraph(count, local),
      std::vector<double>(b.beta.begin() + first, b.beta.begin() + first + count),
      std::vector<double>(b.delta.begin() + first, b.delta.begin() + first + count));
  const double factor = basic_reproduction_number(sub) / target;
  for (std::size_t i = first; i < first + count; ++i) b.delta[i] *= factor;
}

EpidemicNetwork make_ring(const GenerateConfig& cfg) {
  const std::size_t n = node_count(cfg, 2);
  Rng rng(cfg.seed);
  Builder b(n);
  for (std::size_t i = 0; i < n; ++i) b.add_both(i, (i + 1) % n, rng.uniform(0.5, 1.5));
  draw_rates(rng, b.beta);
  draw_rates(rng, b.delta);
  return finish(cfg, std::move(b), 2.0);
}

EpidemicNetwork make_erdos(const GenerateConfig& cfg) {
  const std::size_t n = node_count(cfg, 2);
  check_prob(cfg.edge_prob);
  Rng rng(cfg.seed);
  const auto net = random_undirected(rng, n, cfg.edge_prob);
  Builder b(n);
  b.edges = net.graph().edges();
  b.beta = net.beta();
  b.delta = net.delta();
  return finish(cfg, std::move(b), 2.0);
}

EpidemicNetwork make_chain(const GenerateConfig& cfg) {
  const std::size_t n = node_count(cfg, 1);
  Builder b(n);
  for (std::size_t i = 0; i + 1 < n; ++i) b.add(i, i + 1);
  if (cfg.beta) std::fill(b.beta.begin(), b.beta.end(), *cfg.beta);
  if (cfg.delta) std::fill(b.delta.begin(), b.delta.end(), *cfg.delta);
  return b.build();
}

// Two bidirectional rings joined by a single edge from the first ring into
// the second.
EpidemicNetwork make_two_scc(const GenerateConfig& cfg) {
  const std::size_t n = node_count(cfg, 4);
  check_target(cfg.r0_down, "--r0-down");
  Rng rng(cfg.seed);
  const std::size_t up = n / 2, down = n - up;
  Builder b(n);
  for (std::size_t i = 0; i < up; ++i) b.add_both(i, (i + 1) % up, rng.uniform(0.5, 1.5));
  for (std::size_t i = 0; i < down; ++i)
    b.add_both(up + i, up + (i + 1) % down, rng.uniform(0.5, 1.5));
  b.add(rng.index(up), up + rng.index(down), rng.uniform(0.5, 1.5));
  draw_rates(rng, b.beta);
  draw_rates(rng, b.delta);
  if (cfg.beta) std::fill(b.beta.begin(), b.beta.end(), *cfg.beta);
  if (cfg.delta) {
    std::fill(b.delta.begin(), b.delta.end(), *cfg.delta);
  } else {
    scale_block(b, 0, up, cfg.r0.value_or(1.5));
    scale_block(b, up, down, cfg.r0_down.value_or(0.5));
  }
  return b.build();
}

// 105 nodes in 66 strongly connected components:
//   [0, 13)    the infected component: a ring with random chords, low curing
//   [13, 17)   four source nodes feeding the infected component
//   [17, 71)   27 two-node cycles
//   [71, 105)  34 single nodes
// The cycles and single nodes hang below the infected component in a random
// DAG; five single nodes are fed only by the sources. Outside the infected
// component delta_i = sum_j a_ji beta_j + 0.5.
EpidemicNetwork make_gd99c_style(const GenerateConfig& cfg) {
  if (cfg.nodes && *cfg.nodes != kGdNodes)
    throw GenerateError("gd99c-style has a fixed size of 105 nodes");
  Rng rng(cfg.seed);
  constexpr std::size_t core = 13, sources = 4, pairs = 27, singles = 34, isolated = 5;
  Builder b(kGdNodes);

  for (std::size_t i = 0; i < core; ++i) b.add_both(i, (i + 1) % core);
  for (std::size_t k = 0; k < 6; ++k) b.add(rng.index(core), rng.index(core));
  for (std::size_t s = 0; s < sources; ++s) b.add(core + s, rng.index(core));

  std::vector<std::vector<NodeId>> units;
  const NodeId pair0 = core + sources, single0 = pair0 + 2 * pairs;
  for (std::size_t k = 0; k < pairs; ++k) {
    b.add_both(pair0 + 2 * k, pair0 + 2 * k + 1);
    units.push_back({pair0 + 2 * k, pair0 + 2 * k + 1});
  }
  std::vector<std::vector<NodeId>> fed_by_sources;
  for (std::size_t k = 0; k < singles; ++k) {
    if (k < isolated)
      fed_by_sources.push_back({single0 + k});
    else
      units.push_back({single0 + k});
  }
  rng.shuffle(units);

  // Unit u receives an edge from the core or an earlier unit, so every unit
  // is reachable from the core; a few extra forward edges thicken the DAG.
  std::vector<NodeId> pool(core);
  for (std::size_t i = 0; i < core; ++i) pool[i] = i;
  for (const auto& unit : units) {
    b.add(pool[rng.index(pool.size())], unit[rng.index(unit.size())]);
    if (rng.uniform() < 0.3) b.add(pool[rng.index(pool.size())], unit[rng.index(unit.size())]);
    pool.insert(pool.end(), unit.begin(), unit.end());
  }
  for (const auto& unit : fed_by_sources) b.add(core + rng.index(sources), unit.front());

  if (cfg.beta) std::fill(b.beta.begin(), b.beta.end(), *cfg.beta);
  const EpidemicNetwork tmp = b.build();
  for (NodeId i = core; i < b.n; ++i) {
    double in = 0.0;
    for (const auto& nb : tmp.graph().in_neighbors(i)) in += nb.weight * b.beta[nb.node];
    b.delta[i] = in + 0.5;
  }
  if (cfg.delta)
    std::fill(b.delta.begin(), b.delta.begin() + core, *cfg.delta);
  else
    scale_block(b, 0, core, cfg.r0.value_or(3.0));
  return b.build();
}

}  // namespace

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::index: empty range");
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

const std::vector<std::string>& generator_families() {
  static const std::vector<std::string> families{"ring", "erdos", "chain", "two-scc",
                                                 "gd99c-style"};
  return families;
}

EpidemicNetwork generate(const GenerateConfig& cfg) {
  check_target(cfg.r0, "--r0");
  if (cfg.beta && !(*cfg.beta > 0.0)) throw GenerateError("--beta must be positive");
  if (cfg.delta && !(*cfg.delta > 0.0)) throw GenerateError("--delta must be positive");
  if (cfg.family == "ring") return make_ring(cfg);
  if (cfg.family == "erdos") return make_erdos(cfg);
  if (cfg.family == "chain") return make_chain(cfg);
  if (cfg.family == "two-scc") return make_two_scc(cfg);
  if (cfg.family == "gd99c-style") return make_gd99c_style(cfg);
  throw GenerateError("unknown family \"" + cfg.family + "\"");
}

EpidemicNetwork scale_to_r0(const EpidemicNetwork& net, double target) {
  const double r0 = basic_reproduction_number(net);
  if (!(r0 > 0.0)) throw GenerateError("cannot rescale a network with R0 = 0");
  auto delta = net.delta();
  for (auto& d : delta) d *= r0 / target;
  return EpidemicNetwork(net.graph(), net.beta(), std::move(delta));
}

EpidemicNetwork random_strongly_connected(Rng& rng, std::size_t n, double edge_prob) {
  if (n < 2) throw GenerateError("random_strongly_connected needs n >= 2");
  check_prob(edge_prob);
  std::vector<NodeId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);
  Builder b(n);
  for (std::size_t k = 0; k < n; ++k) b.add(perm[k], perm[(k + 1) % n], rng.uniform(0.5, 1.5));
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j && !b.has(i, j) && rng.uniform() < edge_prob) b.add(i, j, rng.uniform(0.5, 1.5));
  draw_rates(rng, b.beta);
  draw_rates(rng, b.delta);
  return b.build();
}

EpidemicNetwork random_undirected(Rng& rng, std::size_t n, double edge_prob) {
  check_prob(edge_prob);
  for (std::size_t attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Builder b(n);
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j)
        if (rng.uniform() < edge_prob) b.add_both(i, j, rng.uniform(0.5, 1.5));
    draw_rates(rng, b.beta);
    draw_rates(rng, b.delta);
    Digraph g(n, b.edges);
    if (n == 1 || connectivity_class(g) != Connectivity::Disconnected) return b.build();
  }
  throw GenerateError("no connected graph drawn; increase the edge probability");
}

}  // namespace sisnet
