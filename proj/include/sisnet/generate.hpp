#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sisnet/model.hpp"

namespace sisnet {

/// Seeded generator: std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Doubles are built from the top 53 bits, so the same seed
/// yields the same numbers on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  /// Fisher-Yates shuffle driven by index().
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t k = v.size(); k > 1; --k) std::swap(v[k - 1], v[index(k)]);
  }

 private:
  std::mt19937_64 engine_;
};

class GenerateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GenerateConfig {
  std::string family;  // ring, erdos, chain, two-scc, gd99c-style
  std::optional<std::size_t> nodes;  // default 20 (gd99c-style: fixed 105)
  double edge_prob = 0.3;
  std::uint64_t seed = 0;
  std::optional<double> r0;       // target R0 (upstream component for two-scc)
  std::optional<double> r0_down;  // two-scc: downstream component target
  std::optional<double> beta;     // uniform infection rate instead of random
  std::optional<double> delta;    // uniform curing rate, disables R0 targeting
};

const std::vector<std::string>& generator_families();

/// Deterministic model for the configured family. Throws GenerateError on an
/// unknown family or unusable parameters.
EpidemicNetwork generate(const GenerateConfig& cfg);

/// Multiplies every curing rate by R0(net) / target so that R0 = target.
EpidemicNetwork scale_to_r0(const EpidemicNetwork& net, double target);

/// Strongly connected digraph on n nodes: a Hamiltonian cycle through a
/// random permutation plus each other ordered pair with probability
/// edge_prob. Weights, beta and delta are uniform on [0.5, 1.5].
EpidemicNetwork random_strongly_connected(Rng& rng, std::size_t n, double edge_prob);

/// Undirected G(n, p) (each edge stored in both directions with a common
/// weight), redrawn until connected. Weights and beta uniform on [0.5, 1.5].
EpidemicNetwork random_undirected(Rng& rng, std::size_t n, double edge_prob);

}  // namespace sisnet
