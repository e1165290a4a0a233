/*
 * cli.hpp : experiment configuration and the simulate / linearize / sweep /
 * fixtures commands. Kept in the library so the commands can be driven from
 * tests without spawning processes; tools/lohe.cpp only parses flags.
 *
 * Config is strict JSON (see configs/experiment.schema.json). Unknown keys at
 * any level are rejected. Every default is filled in by parse_config and echoed
 * back in each output file under "config".
 */

#pragma once

#include "lohe/io.hpp"
#include "lohe/simulate.hpp"
#include "lohe/stability.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lohe::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kConfigError = 2, kDiverged = 3, kNoEquilibrium = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GraphSpec {
  std::string type;
  int N = 0;
  double k = 1.0;
  std::vector<WeightedPair> edges;
};

struct FrequencySpec {
  std::string mode = "zero";
  double total_norm = 0.0;
  std::vector<Matrix> matrices;
};

struct InitSpec {
  std::string mode = "random";
  int q = 1;
  std::vector<Vector> points;
};

struct IntegrateSpec {
  double dt = 1e-3;
  double t_end = 100.0;
  int sample_every = 100;
};

struct AnalysisSpec {
  bool linearize = true;
  bool verify_theorem = true;
  bool dispersed = true;
};

struct SweepSpec {
  std::string variable;
  std::vector<double> values;
  int trials = 1;
  bool relative = false;  // omega_total values are multiples of theorem_rhs
};

struct ExperimentConfig {
  GraphSpec graph;
  int n = 2;
  FrequencySpec frequencies;
  InitSpec init;
  IntegrateSpec integrate;
  AnalysisSpec analysis;
  std::uint64_t seed = 0;
  std::string out = "lohe";
  std::optional<SweepSpec> sweep;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  int workers = 1;
  TheoremFactor factor = TheoremFactor::Conservative;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

inline void only_keys(const Json& obj, const std::string& where,
                      std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

inline double get_number(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": must be finite");
  return d;
}

inline long long get_int(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<long long>();
}

inline bool get_bool(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected a boolean");
  return v.get<bool>();
}

inline std::string get_string(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline Vector number_vector(const Json& arr, const std::string& where) {
  if (!arr.is_array()) throw ConfigError(where + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (!arr[k].is_number()) throw ConfigError(where + ": expected an array of numbers");
    v[static_cast<Eigen::Index>(k)] = arr[k].get<double>();
  }
  return v;
}

inline int min_nodes(const std::string& type) {
  if (type == "cycle") return 3;
  if (type == "edges") return 1;
  return 2;
}

}  // namespace detail

inline ExperimentConfig parse_config(const Json& j) {
  using namespace detail;
  only_keys(j, "config",
            {"graph", "n", "frequencies", "init", "integrate", "analysis", "seed", "out", "sweep"});
  ExperimentConfig c;

  if (!j.contains("graph")) throw ConfigError("config: missing required key \"graph\"");
  const Json& g = j["graph"];
  only_keys(g, "graph", {"type", "N", "k", "edges"});
  if (!g.contains("type")) throw ConfigError("graph: missing \"type\"");
  c.graph.type = get_string(g, "type", "graph");
  if (c.graph.type != "path" && c.graph.type != "cycle" && c.graph.type != "complete" &&
      c.graph.type != "edges")
    throw ConfigError("graph.type: expected path|cycle|complete|edges");
  if (!g.contains("N")) throw ConfigError("graph: missing \"N\"");
  const long long nodes = get_int(g, "N", "graph");
  if (nodes < min_nodes(c.graph.type) || nodes > 100000)
    throw ConfigError("graph.N: out of range for type " + c.graph.type);
  c.graph.N = static_cast<int>(nodes);
  if (g.contains("k")) c.graph.k = get_number(g, "k", "graph");
  if (!(c.graph.k > 0.0)) throw ConfigError("graph.k: must be positive");
  if (c.graph.type == "edges") {
    if (!g.contains("edges")) throw ConfigError("graph: type \"edges\" requires \"edges\"");
    if (!g["edges"].is_array()) throw ConfigError("graph.edges: expected an array");
    for (const auto& e : g["edges"]) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
          !e[1].is_number_integer() || !e[2].is_number())
        throw ConfigError("graph.edges: each edge must be [i, j, k]");
      c.graph.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
  } else if (g.contains("edges")) {
    throw ConfigError("graph.edges: only allowed for type \"edges\"");
  }

  if (j.contains("n")) {
    const long long n = get_int(j, "n", "config");
    if (n < 1 || n > 64) throw ConfigError("config.n: must lie in [1, 64]");
    c.n = static_cast<int>(n);
  }

  if (j.contains("frequencies")) {
    const Json& f = j["frequencies"];
    only_keys(f, "frequencies", {"mode", "total_norm", "matrices"});
    if (f.contains("mode")) c.frequencies.mode = get_string(f, "mode", "frequencies");
    const auto& mode = c.frequencies.mode;
    if (mode != "zero" && mode != "random" && mode != "explicit")
      throw ConfigError("frequencies.mode: expected zero|random|explicit");
    if (f.contains("total_norm")) {
      c.frequencies.total_norm = get_number(f, "total_norm", "frequencies");
      if (c.frequencies.total_norm < 0.0) throw ConfigError("frequencies.total_norm: must be >= 0");
    } else if (mode == "random") {
      throw ConfigError("frequencies: mode \"random\" requires \"total_norm\"");
    }
    if (mode == "explicit") {
      if (!f.contains("matrices") || !f["matrices"].is_array())
        throw ConfigError("frequencies: mode \"explicit\" requires \"matrices\"");
      for (const auto& m : f["matrices"]) {
        if (!m.is_array()) throw ConfigError("frequencies.matrices: expected arrays of rows");
        Matrix mat(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.size()));
        for (std::size_t r = 0; r < m.size(); ++r) {
          const Vector row = number_vector(m[r], "frequencies.matrices");
          if (row.size() != mat.cols()) throw ConfigError("frequencies.matrices: matrix not square");
          mat.row(static_cast<Eigen::Index>(r)) = row.transpose();
        }
        if (mat.size() > 0 && (mat + mat.transpose()).cwiseAbs().maxCoeff() > 1e-12)
          throw ConfigError("frequencies.matrices: matrix is not skew-symmetric");
        c.frequencies.matrices.push_back(std::move(mat));
      }
    } else if (f.contains("matrices")) {
      throw ConfigError("frequencies.matrices: only allowed for mode \"explicit\"");
    }
  }

  if (j.contains("init")) {
    const Json& in = j["init"];
    only_keys(in, "init", {"mode", "q", "points"});
    if (in.contains("mode")) c.init.mode = get_string(in, "mode", "init");
    if (c.init.mode != "random" && c.init.mode != "twisted" && c.init.mode != "explicit")
      throw ConfigError("init.mode: expected random|twisted|explicit");
    if (in.contains("q")) c.init.q = static_cast<int>(get_int(in, "q", "init"));
    if (c.init.mode == "explicit") {
      if (!in.contains("points") || !in["points"].is_array())
        throw ConfigError("init: mode \"explicit\" requires \"points\"");
      for (const auto& p : in["points"]) c.init.points.push_back(number_vector(p, "init.points"));
    } else if (in.contains("points")) {
      throw ConfigError("init.points: only allowed for mode \"explicit\"");
    }
  }

  if (j.contains("integrate")) {
    const Json& it = j["integrate"];
    only_keys(it, "integrate", {"dt", "t_end", "sample_every"});
    if (it.contains("dt")) c.integrate.dt = get_number(it, "dt", "integrate");
    if (it.contains("t_end")) c.integrate.t_end = get_number(it, "t_end", "integrate");
    if (it.contains("sample_every"))
      c.integrate.sample_every = static_cast<int>(get_int(it, "sample_every", "integrate"));
    if (!(c.integrate.dt > 0.0)) throw ConfigError("integrate.dt: must be positive");
    if (!(c.integrate.t_end > 0.0)) throw ConfigError("integrate.t_end: must be positive");
    if (c.integrate.sample_every < 1) throw ConfigError("integrate.sample_every: must be >= 1");
    if (c.integrate.t_end / c.integrate.dt > 1e9) throw ConfigError("integrate: too many steps");
  }

  if (j.contains("analysis")) {
    const Json& a = j["analysis"];
    only_keys(a, "analysis", {"linearize", "verify_theorem", "dispersed"});
    if (a.contains("linearize")) c.analysis.linearize = get_bool(a, "linearize", "analysis");
    if (a.contains("verify_theorem"))
      c.analysis.verify_theorem = get_bool(a, "verify_theorem", "analysis");
    if (a.contains("dispersed")) c.analysis.dispersed = get_bool(a, "dispersed", "analysis");
  }

  if (j.contains("seed")) {
    const Json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      throw ConfigError("config.seed: expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("out")) c.out = get_string(j, "out", "config");

  if (j.contains("sweep")) {
    const Json& s = j["sweep"];
    only_keys(s, "sweep", {"variable", "values", "trials", "relative"});
    SweepSpec sw;
    if (!s.contains("variable")) throw ConfigError("sweep: missing \"variable\"");
    sw.variable = get_string(s, "variable", "sweep");
    if (sw.variable != "omega_total" && sw.variable != "N" && sw.variable != "n" && sw.variable != "K")
      throw ConfigError("sweep.variable: expected omega_total|N|n|K");
    if (!s.contains("values")) throw ConfigError("sweep: missing \"values\"");
    const Vector vals = number_vector(s["values"], "sweep.values");
    sw.values.assign(vals.data(), vals.data() + vals.size());
    if (sw.values.empty()) throw ConfigError("sweep.values: empty sweep list");
    if (s.contains("trials")) sw.trials = static_cast<int>(get_int(s, "trials", "sweep"));
    if (sw.trials < 1) throw ConfigError("sweep.trials: must be >= 1");
    if (s.contains("relative")) sw.relative = get_bool(s, "relative", "sweep");
    for (double v : sw.values) {
      const bool integral = v == std::floor(v);
      if (sw.variable == "N" && (!integral || v < detail::min_nodes(c.graph.type) || v > 100000))
        throw ConfigError("sweep.values: N values must be integers valid for the graph type");
      if (sw.variable == "n" && (!integral || v < 2 || v > 64))
        throw ConfigError("sweep.values: n values must be integers in [2, 64]");
      if (sw.variable == "K" && !(v > 0.0)) throw ConfigError("sweep.values: K values must be positive");
      if (sw.variable == "omega_total" && !(v >= 0.0))
        throw ConfigError("sweep.values: omega_total values must be >= 0");
    }
    if (sw.variable == "N" && c.graph.type == "edges")
      throw ConfigError("sweep: cannot sweep N over an explicit edge list");
    c.sweep = std::move(sw);
  }
  return c;
}

inline Json to_json(const ExperimentConfig& c) {
  Json g;
  g["type"] = c.graph.type;
  g["N"] = c.graph.N;
  if (c.graph.type == "edges") {
    Json edges = Json::array();
    for (const auto& e : c.graph.edges) edges.push_back(Json::array({e.i, e.j, e.gain}));
    g["edges"] = std::move(edges);
  } else {
    g["k"] = c.graph.k;
  }
  Json f;
  f["mode"] = c.frequencies.mode;
  f["total_norm"] = c.frequencies.total_norm;
  if (c.frequencies.mode == "explicit") {
    Json mats = Json::array();
    for (const auto& m : c.frequencies.matrices) {
      Json rows = Json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(r, k));
        rows.push_back(std::move(row));
      }
      mats.push_back(std::move(rows));
    }
    f["matrices"] = std::move(mats);
  }
  Json in;
  in["mode"] = c.init.mode;
  in["q"] = c.init.q;
  if (c.init.mode == "explicit") {
    Json pts = Json::array();
    for (const auto& p : c.init.points) pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    in["points"] = std::move(pts);
  }
  Json j;
  j["graph"] = std::move(g);
  j["n"] = c.n;
  j["frequencies"] = std::move(f);
  j["init"] = std::move(in);
  j["integrate"] = {{"dt", c.integrate.dt}, {"t_end", c.integrate.t_end},
                    {"sample_every", c.integrate.sample_every}};
  j["analysis"] = {{"linearize", c.analysis.linearize},
                   {"verify_theorem", c.analysis.verify_theorem},
                   {"dispersed", c.analysis.dispersed}};
  j["seed"] = c.seed;
  j["out"] = c.out;
  if (c.sweep) {
    j["sweep"] = {{"variable", c.sweep->variable}, {"values", c.sweep->values},
                  {"trials", c.sweep->trials}, {"relative", c.sweep->relative}};
  }
  return j;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// Seeding and model construction
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based split: the stream for (seed, a, b) depends on nothing else.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

enum Stream : std::uint64_t { kFrequencyStream = 1, kInitStream = 2 };

inline CouplingGraph build_graph(const GraphSpec& g) {
  try {
    if (g.type == "path") return path_graph(g.N, g.k);
    if (g.type == "cycle") return cycle_graph(g.N, g.k);
    if (g.type == "complete") return complete_graph(g.N, g.k);
    return from_edge_list(g.N, g.edges);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
}

// Random Ω_i are antisymmetrized Gaussians, jointly rescaled so that
// (Σ|Ω_i|₂²)^{1/2} equals the requested total.
inline FrequencySet build_frequencies(const FrequencySpec& f, int agents, int n, std::uint64_t seed,
                                      std::optional<double> total_override = std::nullopt) {
  const double total = total_override.value_or(f.total_norm);
  if (f.mode == "explicit") {
    if (static_cast<int>(f.matrices.size()) != agents)
      throw ConfigError("frequencies.matrices: expected one matrix per agent");
    std::vector<SkewMatrix> mats;
    for (const auto& m : f.matrices) {
      if (m.rows() != n + 1) throw ConfigError("frequencies.matrices: expected (n+1)x(n+1) matrices");
      mats.emplace_back(m);
    }
    FrequencySet set(std::move(mats));
    if (total_override) {
      const double current = set.total_norm();
      if (current == 0.0) throw ConfigError("frequencies: cannot rescale zero explicit matrices");
      return set.scaled(total / current);
    }
    return set;
  }
  if (f.mode == "zero" && !total_override) return FrequencySet::zero(agents, n + 1);

  std::mt19937_64 rng(derive_seed(seed, 0, kFrequencyStream));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<SkewMatrix> mats;
  for (int i = 0; i < agents; ++i) {
    Matrix g(n + 1, n + 1);
    for (Eigen::Index c = 0; c < g.cols(); ++c)
      for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = normal(rng);
    mats.emplace_back(g);
  }
  FrequencySet set(std::move(mats));
  const double current = set.total_norm();
  return set.scaled(current > 0.0 ? total / current : 0.0);
}

inline Configuration build_init(const InitSpec& in, int agents, int n, std::uint64_t seed) {
  if (in.mode == "twisted") {
    if (agents < 3 || in.q < 1 || in.q >= agents)
      throw ConfigError("init: twisted state needs N >= 3 and 1 <= q < N");
    return twisted_state(agents, in.q, n);
  }
  if (in.mode == "explicit") {
    if (static_cast<int>(in.points.size()) != agents)
      throw ConfigError("init.points: expected one point per agent");
    Matrix m(n + 1, agents);
    for (int i = 0; i < agents; ++i) {
      if (in.points[i].size() != n + 1) throw ConfigError("init.points: expected length n+1");
      m.col(i) = in.points[i];
    }
    try {
      return Configuration::normalized(m);
    } catch (const std::domain_error&) {
      throw ConfigError("init.points: degenerate (zero) point");
    }
  }
  std::mt19937_64 rng(derive_seed(seed, 0, kInitStream));
  std::vector<UnitVector> pts;
  for (int i = 0; i < agents; ++i) pts.push_back(random_unit(rng, n));
  return Configuration(pts);
}

inline LoheSystem build_system(const ExperimentConfig& c, std::uint64_t seed,
                               std::optional<double> total_override = std::nullopt) {
  CouplingGraph graph = build_graph(c.graph);
  FrequencySet freqs = build_frequencies(c.frequencies, graph.node_count(), c.n, seed, total_override);
  return LoheSystem(std::move(graph), std::move(freqs));
}

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

inline std::string verdict(bool b) { return b ? "yes" : "no"; }

inline bool theorem_applicable(const LoheSystem& sys) {
  return sys.sphere_dim() >= 2 && sys.agent_count() >= 2;
}

}  // namespace detail

inline ExperimentConfig apply_overrides(ExperimentConfig c, const RunOptions& opt) {
  if (opt.seed) c.seed = *opt.seed;
  if (opt.out) c.out = *opt.out;
  return c;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int cmd_simulate(const ExperimentConfig& config, const RunOptions& opt,
                        std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  const ExperimentConfig c = apply_overrides(config, opt);
  try {
    const LoheSystem sys = build_system(c, c.seed);
    const Configuration x0 = build_init(c.init, sys.agent_count(), c.n, c.seed);
    const Trajectory traj = integrate(sys, x0, c.integrate.dt, c.integrate.t_end, c.integrate.sample_every);

    std::ostringstream csv;
    io::write_trajectory_csv(csv, traj);
    detail::write_text(c.out + "_trajectory.csv", csv.str());

    const Configuration& xf = traj.final_state();
    const auto& last = traj.diagnostics.back();
    const bool synced = last.sync_radius < kPi / 4;
    Json j;
    j["config"] = to_json(c);
    j["t"] = traj.times.back();
    j["points"] = io::to_json(xf);
    j["V"] = last.disagreement;
    j["sync_radius"] = last.sync_radius;
    j["practically_synced"] = synced;
    j["max_norm_drift"] = traj.max_norm_drift;
    j["residual"] = residual(sys, xf);
    if (c.analysis.dispersed) j["dispersed"] = io::to_json(is_dispersed(xf));
    if (c.analysis.verify_theorem && detail::theorem_applicable(sys))
      j["bound_report"] = io::to_json(verify_theorem(sys, xf, opt.factor));
    else if (c.analysis.linearize)
      j["linearization"] = io::to_json(linearize(sys, xf));
    detail::write_text(c.out + "_final.json", j.dump(2) + "\n");

    out << "final V=" << io::format_double(last.disagreement)
        << " sync_radius=" << io::format_double(last.sync_radius)
        << " practically_synced=" << detail::verdict(synced) << "\n";
    return kOk;
  } catch (const IntegrationDiverged& e) {
    err << "error: " << e.what() << "\n";
    return kDiverged;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

struct LinearizeOutcome {
  Json report;
  bool converged = false;
  std::optional<BoundReport> bound;
  std::optional<LinearizationReport> linearization;
};

// Equilibrium lookup + analysis shared by linearize and sweep. Twisted
// fixtures are analysed in place: they are exact equilibria of the
// homogeneous part, and the heterogeneous residual is reported alongside.
inline LinearizeOutcome analyse(const ExperimentConfig& c, const LoheSystem& sys, std::uint64_t seed,
                                TheoremFactor factor) {
  LinearizeOutcome o;
  const Configuration x0 = build_init(c.init, sys.agent_count(), c.n, seed);
  Json eq;
  std::optional<Configuration> x;
  if (c.init.mode == "twisted") {
    x = x0;
    o.converged = true;
    eq["mode"] = "fixture";
    eq["residual"] = residual(sys, x0);
    eq["newton_steps"] = 0;
  } else {
    const EquilibriumResult r = find_equilibrium(sys, x0, 1e-10, c.integrate.t_end, c.integrate.dt);
    x = r.config;
    o.converged = r.converged;
    eq["mode"] = "search";
    eq["residual"] = r.residual;
    eq["newton_steps"] = r.iterations;
    eq["integrated_time"] = r.integrated_time;
  }
  eq["converged"] = o.converged;
  eq["points"] = io::to_json(*x);

  Json j;
  j["config"] = to_json(c);
  j["equilibrium"] = std::move(eq);
  j["theorem_factor"] = static_cast<int>(factor);
  if (c.analysis.verify_theorem && detail::theorem_applicable(sys)) {
    o.bound = verify_theorem(sys, *x, factor);
    const Json part = io::to_json(*o.bound);
    for (const auto& [k, v] : part.items()) j[k] = v;
  } else {
    o.linearization = linearize(sys, *x);
    const Json part = io::to_json(*o.linearization);
    for (const auto& [k, v] : part.items()) j[k] = v;
    if (c.analysis.dispersed) j["dispersed"] = io::to_json(is_dispersed(*x));
  }
  o.report = std::move(j);
  return o;
}

inline int cmd_linearize(const ExperimentConfig& config, const RunOptions& opt,
                         std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  const ExperimentConfig c = apply_overrides(config, opt);
  try {
    const LoheSystem sys = build_system(c, c.seed);
    const LinearizeOutcome o = analyse(c, sys, c.seed, opt.factor);
    detail::write_text(c.out + "_report.json", o.report.dump(2) + "\n");

    const Json& r = o.report;
    out << "beta=" << io::format_double(r["beta"].get<double>())
        << " alpha_re=" << io::format_double(r["alpha_re"].get<double>())
        << " omega_norm=" << io::format_double(r["omega_norm"].get<double>());
    if (o.bound) {
      out << " theorem_rhs=" << io::format_double(o.bound->theorem_rhs)
          << " premise_holds=" << detail::verdict(o.bound->premise_holds)
          << " conclusion_holds=" << detail::verdict(o.bound->conclusion_holds);
    }
    out << " converged=" << detail::verdict(o.converged) << "\n";
    if (o.bound)
      for (const auto& v : o.bound->violations) out << "note: " << v << "\n";
    if (!o.converged) {
      err << "error: equilibrium not found within budget\n";
      return kNoEquilibrium;
    }
    return kOk;
  } catch (const IntegrationDiverged& e) {
    err << "error: " << e.what() << "\n";
    return kDiverged;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  double beta = 0.0;
  double alpha_re = 0.0;
  bool premise_holds = false;
  bool conclusion_holds = false;
  bool dispersed = false;
  double theorem_rhs = 0.0;
  double omega_norm = 0.0;
  double f_value = 0.0;
  bool converged = false;
};

inline SweepRow run_sweep_trial(const ExperimentConfig& base, double value, std::uint64_t seed,
                                TheoremFactor factor) {
  ExperimentConfig c = base;
  const SweepSpec& sw = *base.sweep;
  std::optional<double> total;
  if (sw.variable == "N") c.graph.N = static_cast<int>(value);
  if (sw.variable == "n") c.n = static_cast<int>(value);
  if (sw.variable == "K") {
    if (c.graph.type == "edges") {
      double kmin = std::numeric_limits<double>::infinity();
      for (const auto& e : c.graph.edges) kmin = std::min(kmin, e.gain);
      for (auto& e : c.graph.edges) e.gain *= value / kmin;
    } else {
      c.graph.k = value;
    }
  }
  c.analysis.verify_theorem = true;
  if (sw.variable == "omega_total") {
    total = value;
    if (sw.relative) {
      const CouplingGraph g = build_graph(c.graph);
      total = value * theorem_rhs(g.min_gain(), c.n, g.node_count(), factor);
    }
  }
  const LoheSystem sys = build_system(c, seed, total);
  const LinearizeOutcome o = analyse(c, sys, seed, factor);
  SweepRow row;
  row.value = value;
  row.seed = seed;
  row.converged = o.converged;
  if (o.bound) {
    row.beta = o.bound->beta;
    row.alpha_re = o.bound->alpha_re;
    row.premise_holds = o.bound->premise_holds;
    row.conclusion_holds = o.bound->conclusion_holds;
    row.dispersed = o.bound->dispersion.dispersed;
    row.theorem_rhs = o.bound->theorem_rhs;
    row.omega_norm = o.bound->omega_norm;
    row.f_value = o.bound->f_value;
  }
  return row;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "value,seed,beta,alpha_re,premise_holds,conclusion_holds,dispersed,theorem_rhs,omega_norm,"
        "f_value,converged\n";
  for (const auto& r : rows) {
    os << io::format_double(r.value) << ',' << r.seed << ',' << io::format_double(r.beta) << ','
       << io::format_double(r.alpha_re) << ',' << (r.premise_holds ? 1 : 0) << ','
       << (r.conclusion_holds ? 1 : 0) << ',' << (r.dispersed ? 1 : 0) << ','
       << io::format_double(r.theorem_rhs) << ',' << io::format_double(r.omega_norm) << ','
       << io::format_double(r.f_value) << ',' << (r.converged ? 1 : 0) << '\n';
  }
  return os.str();
}

inline int cmd_sweep(const ExperimentConfig& config, const RunOptions& opt,
                     std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  const ExperimentConfig c = apply_overrides(config, opt);
  if (!c.sweep) {
    err << "config error: sweep command requires a \"sweep\" object\n";
    return kConfigError;
  }
  if (c.sweep->values.empty()) {
    err << "config error: empty sweep list\n";
    return kConfigError;
  }
  if (c.n < 2 && c.sweep->variable != "n") {
    err << "config error: sweeps verify the theorem, which requires n >= 2\n";
    return kConfigError;
  }

  struct Task {
    double value;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < c.sweep->values.size(); ++p)
    for (int t = 0; t < c.sweep->trials; ++t)
      tasks.push_back({c.sweep->values[p], derive_seed(c.seed, p, static_cast<std::uint64_t>(t))});

  std::vector<SweepRow> rows(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < tasks.size();) {
      try {
        rows[k] = run_sweep_trial(c, tasks[k].value, tasks[k].seed, opt.factor);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(opt.workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& e : errors) {
    if (!e.empty()) {
      err << "config error: " << e << "\n";
      return kConfigError;
    }
  }
  detail::write_text(c.out + "_sweep.csv", sweep_csv(rows));
  std::size_t premise = 0, confirmed = 0;
  for (const auto& r : rows) {
    if (r.premise_holds && r.dispersed) {
      ++premise;
      if (r.conclusion_holds) ++confirmed;
    }
  }
  out << "rows=" << rows.size() << " premise_at_dispersed=" << premise
      << " unstable_among_those=" << confirmed << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

inline std::string fixture_listing() {
  return "twisted:N=<N>,q=<q>  q-twisted state on a great circle; equilibrium of the homogeneous "
         "model on cycle_graph(N); dispersed for q=1\n"
         "synced:N=<N>         all agents at e1 (phase synchronized)\n"
         "antipodal            e1 and -e1; equilibrium on a single edge\n";
}

// Parses "twisted:N=6,q=1", "synced:N=4" or "antipodal".
inline Configuration fixture_by_name(const std::string& name, int n) {
  const auto colon = name.find(':');
  const std::string kind = name.substr(0, colon);
  std::map<std::string, int> params;
  if (colon != std::string::npos) {
    std::stringstream ss(name.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("fixture: malformed parameter \"" + item + "\"");
      try {
        params[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw ConfigError("fixture: parameter \"" + item + "\" is not an integer");
      }
    }
  }
  auto need = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end()) throw ConfigError(std::string("fixture: missing parameter ") + key);
    return it->second;
  };
  try {
    if (kind == "twisted") return twisted_state(need("N"), params.count("q") ? params["q"] : 1, n);
    if (kind == "synced") {
      const int N = need("N");
      if (N < 1) throw ConfigError("fixture: N must be positive");
      return Configuration(std::vector<UnitVector>(N, great_circle_point(0.0, n)));
    }
    if (kind == "antipodal")
      return Configuration(std::vector<UnitVector>{great_circle_point(0.0, n), great_circle_point(kPi, n)});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("fixture: ") + e.what());
  }
  throw ConfigError("fixture: unknown fixture \"" + kind + "\"");
}

inline int cmd_fixtures(const std::optional<std::string>& show, int n, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  if (!show) {
    out << fixture_listing();
    return kOk;
  }
  try {
    if (n < 1) throw ConfigError("fixture: n must be >= 1");
    const Configuration x = fixture_by_name(*show, n);
    Json j;
    j["name"] = *show;
    j["n"] = n;
    j["points"] = io::to_json(x);
    out << j.dump(2) << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace lohe::cli
