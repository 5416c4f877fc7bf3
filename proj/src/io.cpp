#include "sisnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <vector>

namespace sisnet {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    const auto start = k;
    while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    if (k > start) out.push_back(s.substr(start, k - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, out);
  return res.ec == std::errc{} && res.ptr == end;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json vec_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace

Digraph read_edge_list(std::istream& is) {
  std::vector<Edge> edges;
  std::optional<std::size_t> declared;
  std::size_t max_id = 0, line_no = 0;
  bool any_edge = false;
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const auto toks = split_ws(std::string_view(line).substr(0, hash));
    if (toks.empty()) continue;
    if (toks[0] == "nodes") {
      std::size_t n = 0;
      if (toks.size() != 2 || !parse_number(toks[1], n) || n == 0)
        throw ParseError("expected \"nodes N\" with N >= 1", line_no);
      if (declared) throw ParseError("duplicate \"nodes\" header", line_no);
      declared = n;
      continue;
    }
    if (toks.size() < 2 || toks.size() > 3)
      throw ParseError("expected \"src dst [weight]\"", line_no);
    Edge e;
    if (!parse_number(toks[0], e.src) || !parse_number(toks[1], e.dst))
      throw ParseError("node ids must be nonnegative integers", line_no);
    if (toks.size() == 3 && !parse_number(toks[2], e.weight))
      throw ParseError("weight is not a number", line_no);
    if (!(e.weight > 0.0)) throw ParseError("weight must be positive", line_no);
    if (e.src == e.dst) throw ParseError("self-loops are not allowed", line_no);
    if (declared && std::max(e.src, e.dst) >= *declared)
      throw ParseError("node id exceeds declared node count", line_no);
    max_id = std::max({max_id, e.src, e.dst});
    any_edge = true;
    edges.push_back(e);
  }
  const std::size_t n = declared ? *declared : (any_edge ? max_id + 1 : 0);
  if (n == 0) throw ParseError("edge list defines no nodes", 0);
  if (declared && any_edge && max_id >= n)
    throw ParseError("node id exceeds declared node count", 0);
  try {
    return Digraph(n, std::move(edges));
  } catch (const GraphError& e) {
    throw ParseError(e.what(), 0);
  }
}

void write_edge_list(std::ostream& os, const Digraph& g) {
  os << "nodes " << g.size() << '\n';
  for (const auto& e : g.edges()) os << e.src << ' ' << e.dst << ' ' << fmt_double(e.weight) << '\n';
}

json model_to_json(const EpidemicNetwork& net) {
  json j;
  j["nodes"] = net.size();
  json edges = json::array();
  for (const auto& e : net.graph().edges()) edges.push_back(json::array({e.src, e.dst, e.weight}));
  j["edges"] = std::move(edges);
  j["beta"] = net.beta();
  j["delta"] = net.delta();
  if (!net.graph().labels().empty()) j["labels"] = net.graph().labels();
  return j;
}

EpidemicNetwork model_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("model must be a JSON object", 0);
    const auto n = j.at("nodes").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3)
        throw ParseError("each edge must be [src, dst] or [src, dst, weight]", 0);
      edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(),
                       e.size() == 3 ? e[2].get<double>() : 1.0});
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return EpidemicNetwork(Digraph(n, std::move(edges), std::move(labels)),
                           j.at("beta").get<std::vector<double>>(),
                           j.at("delta").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

EpidemicNetwork read_model_json(std::istream& is) {
  const std::string text{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), line_of_offset(text, e.byte));
  }
  return model_from_json(j);
}

EpidemicNetwork load_model(const std::string& path, double beta, double delta) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (is_json) return read_model_json(in);
  auto g = read_edge_list(in);
  try {
    return EpidemicNetwork::uniform(std::move(g), beta, delta);
  } catch (const ModelError& e) {
    throw ParseError(e.what(), 0);
  }
}

State read_state(std::istream& is, std::size_t n) {
  const std::string text{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  std::vector<double> vals;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      vals = json::parse(text).get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid state JSON: ") + e.what(), 0);
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      for (auto tok : split_ws(std::string_view(line).substr(0, line.find('#')))) {
        double v;
        if (!parse_number(tok, v)) throw ParseError("not a number", line_no);
        vals.push_back(v);
      }
    }
  }
  if (vals.size() != n)
    throw ParseError("initial state has " + std::to_string(vals.size()) + " entries, expected " +
                         std::to_string(n),
                     0);
  State p = Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(n));
  try {
    check_state(p, n, 0.0);
  } catch (const ModelError& e) {
    throw ParseError(e.what(), 0);
  }
  return p;
}

json to_json(const SccDecomposition& d) {
  json j;
  j["count"] = d.count();
  j["components"] = d.components;
  j["order"] = d.order;
  json edges = json::array();
  for (const auto& [a, b] : d.condensation_edges) edges.push_back(json::array({a, b}));
  j["condensation_edges"] = std::move(edges);
  return j;
}

json to_json(const EquilibriumReport& r) {
  json j;
  j["classification"] = to_string(r.classification);
  j["p_star"] = vec_json(r.p_star);
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  json comps = json::array();
  for (const auto& c : r.components) {
    comps.push_back({{"component", c.component},
                     {"nodes", c.nodes},
                     {"r0", c.r0},
                     {"threshold", to_string(c.threshold)},
                     {"critical", c.critical()},
                     {"input", vec_json(c.input)},
                     {"state", vec_json(c.state)},
                     {"iterations", c.iterations}});
  }
  j["components"] = std::move(comps);
  return j;
}

json to_json(const LyapunovCertificate& c) {
  json j{{"certifies", c.certifies},
         {"regime", to_string(c.regime)},
         {"diagonal", vec_json(c.diagonal)},
         {"lambda_max", c.lambda_max},
         {"target_hash", c.target_hash()}};
  if (c.regime == CertificateRegime::NegativeSemidefinite) {
    j["null_vector"] = vec_json(c.null_vector);
    j["null_residual"] = c.null_residual;
  }
  return j;
}

json to_json(const StabilityReport& s) {
  json j;
  j["verdict"] = to_string(s.verdict);
  j["equilibrium"] = to_string(s.equilibrium);
  j["origin_unstable"] = s.origin_unstable;
  j["jacobian_abscissa"] = s.jacobian_abscissa;
  j["locally_exponentially_stable"] = s.locally_exponentially_stable;
  if (s.jacobian_direction) j["jacobian_direction"] = *s.jacobian_direction;
  json certs = json::array();
  for (const auto& cs : s.components) {
    json c = to_json(cs.certificate);
    c["component"] = cs.component;
    certs.push_back(std::move(c));
  }
  j["certificates"] = std::move(certs);
  return j;
}

json to_json(const DistributedVerdict& v, const DominanceVerdict& dom) {
  json nodes = json::array();
  for (std::size_t i = 0; i < v.nodes.size(); ++i) {
    const auto& r = v.nodes[i];
    nodes.push_back({{"node", i},
                     {"margin", r.margin},
                     {"pass", r.pass},
                     {"in_edge_margin", r.in_margin},
                     {"in_edge_pass", r.in_pass},
                     {"dominance_lhs", dom.nodes[i].lhs},
                     {"dominance_rhs", dom.nodes[i].rhs}});
  }
  return {{"pass", v.pass},
          {"in_edge_pass", v.in_pass},
          {"diagonal_dominance_pass", dom.pass},
          {"note", "margin = delta_i - 1/2 sum_j a_ij beta_j sums over out-edges of i; "
                   "the infection pressure uses in-edges, reported as in_edge_margin"},
          {"nodes", std::move(nodes)}};
}

}  // namespace sisnet
