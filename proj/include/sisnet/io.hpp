#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sisnet/certificates.hpp"
#include "sisnet/equilibrium.hpp"
#include "sisnet/game.hpp"
#include "sisnet/graph.hpp"
#include "sisnet/model.hpp"

namespace sisnet {

/// Input error with a 1-based line number (0 when not applicable).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Edge-list text: one "src dst [weight]" per line, '#' starts a comment,
// blank lines are skipped, an optional "nodes N" line fixes the node count
// (otherwise max id + 1).
Digraph read_edge_list(std::istream& is);
void write_edge_list(std::ostream& os, const Digraph& g);

// Model JSON: {"nodes": n, "edges": [[src, dst, w], ...], "beta": [...],
// "delta": [...]} with optional "labels" and a free-form "meta" object.
EpidemicNetwork read_model_json(std::istream& is);
nlohmann::json model_to_json(const EpidemicNetwork& net);
EpidemicNetwork model_from_json(const nlohmann::json& j);

/// Loads a model by extension: ".json" is model JSON, anything else is an
/// edge list with uniform rates.
EpidemicNetwork load_model(const std::string& path, double beta = 1.0, double delta = 1.0);

/// Reads n probabilities (whitespace separated, or a JSON array).
State read_state(std::istream& is, std::size_t n);

nlohmann::json to_json(const SccDecomposition& d);
nlohmann::json to_json(const EquilibriumReport& r);
nlohmann::json to_json(const LyapunovCertificate& c);
nlohmann::json to_json(const StabilityReport& s);
nlohmann::json to_json(const DistributedVerdict& v, const DominanceVerdict& dom);

}  // namespace sisnet
