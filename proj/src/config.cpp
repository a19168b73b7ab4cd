#include "pcosync/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pcosync/metrics.hpp"

namespace pcosync {

using nlohmann::json;

namespace {

double num(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_pi_number(j.get<std::string>());
  throw std::invalid_argument(field + ": expected a number or a pi token");
}

Vec num_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw std::invalid_argument(field + ": expected an array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Index>(i)] = num(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

struct PrfPiece {
  double from = 0.0;
  double to = 0.0;
  bool is_poly = true;
  std::vector<double> coeffs;  // poly: ascending powers
  SinusoidTerm sin;            // sin: a*sin(b*x + c) + d, in phase x
};

double eval_pieces(const std::vector<PrfPiece>& pieces, double x) {
  for (const auto& p : pieces) {
    if (x < p.from || x > p.to) continue;
    if (p.is_poly) {
      double v = 0.0;
      for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
        v = v * x + *it;
      }
      return v;
    }
    return p.sin.offset +
           p.sin.amplitude * std::sin(p.sin.omega * x + p.sin.phase);
  }
  throw std::domain_error("custom PRF: no piece covers x = " +
                          std::to_string(x));
}

std::vector<PrfPiece> parse_pieces(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument(field + ": expected a non-empty piece array");
  }
  std::vector<PrfPiece> pieces;
  for (size_t i = 0; i < j.size(); ++i) {
    const auto& pj = j[i];
    const std::string at = field + "[" + std::to_string(i) + "]";
    PrfPiece p;
    p.from = num(pj.at("from"), at + ".from");
    p.to = num(pj.at("to"), at + ".to");
    const std::string kind = pj.at("kind").get<std::string>();
    if (kind == "poly") {
      p.is_poly = true;
      for (const auto& c : pj.at("coeffs")) {
        p.coeffs.push_back(num(c, at + ".coeffs"));
      }
    } else if (kind == "sin") {
      p.is_poly = false;
      p.sin.amplitude = num(pj.at("amplitude"), at + ".amplitude");
      p.sin.omega = num(pj.at("frequency"), at + ".frequency");
      p.sin.phase = pj.contains("phase") ? num(pj["phase"], at + ".phase") : 0.0;
      p.sin.offset =
          pj.contains("offset") ? num(pj["offset"], at + ".offset") : 0.0;
    } else {
      throw std::invalid_argument(at + ".kind: expected poly or sin");
    }
    pieces.push_back(std::move(p));
  }
  return pieces;
}

PhaseResponseFunction parse_prf(const json& j, PiSelection sel,
                                const std::string& field, std::string* name) {
  if (j.is_string()) {
    const auto id = builtin_prf_id_from_string(j.get<std::string>());
    *name = to_string(id);
    return builtin_prf(id, sel);
  }
  if (j.is_object() && j.contains("builtin")) {
    const auto id =
        builtin_prf_id_from_string(j["builtin"].get<std::string>());
    *name = to_string(id);
    return builtin_prf(id, sel);
  }
  if (j.is_object() && j.contains("custom")) {
    const auto& cj = j["custom"];
    auto delay = parse_pieces(cj.at("delay"), field + ".custom.delay");
    auto advance = parse_pieces(cj.at("advance"), field + ".custom.advance");
    PhaseResponseFunction prf;
    prf.pi_selection = sel;
    prf.name = cj.contains("name") ? cj["name"].get<std::string>() : "custom";
    *name = prf.name;
    // piecewise descriptors carry rounding at the pinned endpoints; snap
    // to the exact zeros the branch contract requires
    prf.delay_branch = [delay](double x) {
      const double v = eval_pieces(delay, x);
      return (x == 0.0 && std::abs(v) <= 1e-9) ? 0.0 : v;
    };
    prf.advance_branch = [advance](double x) {
      const double v = eval_pieces(advance, x);
      return (x == kTwoPi && std::abs(v) <= 1e-9) ? 0.0 : v;
    };
    return prf;
  }
  throw std::invalid_argument(field +
                              ": expected a builtin id or a custom descriptor");
}

}  // namespace

double parse_pi_number(const std::string& token) {
  std::string s = token;
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  double scale = 1.0;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    scale = kPi;
    s = s.substr(0, s.size() - 2);
    if (s.empty()) s = "1";
    if (s == "-") s = "-1";
  }
  size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + token + "'");
  }
  if (used != s.size()) {
    throw std::invalid_argument("not a number: '" + token + "'");
  }
  return v * scale;
}

NetworkTopology RunConfig::make_topology() const {
  return build_topology(kind, n, coupling, parents);
}

SimulationParams RunConfig::make_params() const {
  SimulationParams p;
  p.omega = omega;
  p.t_end = t_end;
  p.event_tolerance = event_tolerance;
  p.record_mode = record_mode;
  p.sample_dt = sample_dt;
  switch (perturbation_kind) {
    case PerturbationKind::None:
      break;
    case PerturbationKind::BuiltinFamily:
      p.perturbation =
          SinusoidPerturbation::builtin_family(n, perturbation_amplitude);
      break;
    case PerturbationKind::Custom:
      p.perturbation =
          std::make_shared<SinusoidPerturbation>(perturbation_terms);
      break;
  }
  return p;
}

Vec random_phases(int n, std::uint64_t seed) {
  // splitmix64; fixed here so artifacts are reproducible everywhere
  Vec x(n);
  std::uint64_t state = seed;
  for (int i = 0; i < n; ++i) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    x[i] = static_cast<double>(z >> 11) * 0x1.0p-53 * kTwoPi;
  }
  return x;
}

Vec RunConfig::make_initial(std::uint64_t seed_value) const {
  if (initial_phases) return *initial_phases;
  return random_phases(n, seed_value);
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }

  std::vector<std::string> errors;
  RunConfig cfg;
  try {
    const auto& tj = j.at("topology");
    cfg.kind = topology_kind_from_string(tj.at("kind").get<std::string>());
    cfg.n = tj.at("n").get<int>();
    cfg.coupling = num_vector(tj.at("coupling"), "topology.coupling");
    if (tj.contains("parents")) {
      cfg.parents = tj["parents"].get<std::vector<int>>();
    }
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("topology: ") + e.what());
  }

  if (j.contains("pi_selection")) {
    const std::string s = j["pi_selection"].get<std::string>();
    if (s == "delay") {
      cfg.pi_selection = PiSelection::Delay;
    } else if (s == "advance") {
      cfg.pi_selection = PiSelection::Advance;
    } else {
      errors.push_back("pi_selection: expected delay or advance, got " + s);
    }
  }

  try {
    const auto& pj = j.at("prfs");
    if (!pj.is_array()) throw std::invalid_argument("prfs: expected an array");
    for (size_t i = 0; i < pj.size(); ++i) {
      std::string name;
      cfg.prfs.push_back(parse_prf(pj[i], cfg.pi_selection,
                                   "prfs[" + std::to_string(i) + "]", &name));
      cfg.prf_names.push_back(name);
    }
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("prfs: ") + e.what());
  }

  if (j.contains("omega")) cfg.omega = num(j["omega"], "omega");
  if (j.contains("t_end")) cfg.t_end = num(j["t_end"], "t_end");
  if (j.contains("event_tolerance")) {
    cfg.event_tolerance = num(j["event_tolerance"], "event_tolerance");
  }

  if (j.contains("record")) {
    const auto& rj = j["record"];
    if (rj.is_string() && rj == "events") {
      cfg.record_mode = RecordMode::EventsOnly;
    } else if (rj.is_object() && rj.value("mode", "") == "dense") {
      cfg.record_mode = RecordMode::Dense;
      cfg.sample_dt = num(rj.at("dt"), "record.dt");
    } else {
      errors.push_back("record: expected \"events\" or {mode: dense, dt}");
    }
  }

  if (j.contains("initial")) {
    const auto& ij = j["initial"];
    if (ij.contains("phases")) {
      cfg.initial_phases = num_vector(ij["phases"], "initial.phases");
    } else if (ij.contains("seed")) {
      cfg.seed = ij["seed"].get<std::uint64_t>();
    } else {
      errors.push_back("initial: expected phases or seed");
    }
  }

  if (j.contains("perturbation")) {
    const auto& qj = j["perturbation"];
    const std::string kind = qj.value("kind", "none");
    if (kind == "none") {
      cfg.perturbation_kind = RunConfig::PerturbationKind::None;
    } else if (kind == "builtin") {
      cfg.perturbation_kind = RunConfig::PerturbationKind::BuiltinFamily;
      cfg.perturbation_amplitude =
          num(qj.at("amplitude"), "perturbation.amplitude");
    } else if (kind == "custom") {
      cfg.perturbation_kind = RunConfig::PerturbationKind::Custom;
      for (const auto& nodej : qj.at("nodes")) {
        std::vector<SinusoidTerm> terms;
        for (const auto& termj : nodej) {
          SinusoidTerm t;
          t.amplitude = num(termj.at("amplitude"), "perturbation amplitude");
          t.omega = num(termj.at("frequency"), "perturbation frequency");
          t.phase =
              termj.contains("phase") ? num(termj["phase"], "phase") : 0.0;
          t.offset =
              termj.contains("offset") ? num(termj["offset"], "offset") : 0.0;
          terms.push_back(t);
        }
        cfg.perturbation_terms.push_back(std::move(terms));
      }
      if (static_cast<int>(cfg.perturbation_terms.size()) != cfg.n) {
        errors.push_back("perturbation.nodes: expected one entry per node");
      }
    } else {
      errors.push_back("perturbation.kind: expected none, builtin, or custom");
    }
  }

  if (j.contains("batch")) {
    cfg.batch_count = j["batch"].value("count", 1);
    cfg.batch_base_seed = j["batch"].value("seed", std::uint64_t{0});
  }

  // cross-module validation
  try {
    cfg.make_topology();
  } catch (const std::exception& e) {
    errors.push_back(e.what());
  }
  if (static_cast<int>(cfg.prfs.size()) != cfg.n) {
    errors.push_back("prfs: expected " + std::to_string(cfg.n) +
                     " entries, got " + std::to_string(cfg.prfs.size()));
  }
  for (size_t i = 0; i < cfg.prfs.size(); ++i) {
    const auto report = validate_prf(cfg.prfs[i], 1000);
    for (size_t k = 0; k < report.size() && k < 3; ++k) {
      errors.push_back("prfs[" + std::to_string(i) + "]: " + report[k].what +
                       " at x = " + std::to_string(report[k].x));
    }
  }
  if (cfg.initial_phases) {
    if (cfg.initial_phases->size() != cfg.n) {
      errors.push_back("initial.phases: expected n entries");
    } else {
      for (Index i = 0; i < cfg.initial_phases->size(); ++i) {
        const double v = (*cfg.initial_phases)[i];
        if (!(v >= 0.0 && v <= kTwoPi)) {
          errors.push_back("initial.phases[" + std::to_string(i) +
                           "]: outside [0, 2pi]");
        }
      }
    }
  }
  if (cfg.batch_count < 1) errors.push_back("batch.count: must be >= 1");
  try {
    cfg.make_params().validate(cfg.n);
  } catch (const std::exception& e) {
    errors.push_back(e.what());
  }

  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<std::string> preset_names() {
  return {"chain6", "dchain6", "tree10", "chain6-perturbed"};
}

RunConfig preset(const std::string& name) {
  auto chain6 = []() {
    RunConfig cfg;
    cfg.kind = TopologyKind::UndirectedChain;
    cfg.n = 6;
    cfg.coupling = Vec(6);
    cfg.coupling << 0.4, 0.5, 0.6, 0.6, 0.5, 0.4;
    const BuiltinPrfId ids[] = {BuiltinPrfId::A, BuiltinPrfId::B,
                                BuiltinPrfId::C, BuiltinPrfId::D,
                                BuiltinPrfId::A, BuiltinPrfId::B};
    for (auto id : ids) {
      cfg.prfs.push_back(builtin_prf(id));
      cfg.prf_names.push_back(to_string(id));
    }
    cfg.omega = kTwoPi;
    cfg.t_end = 200.0;
    return cfg;
  };

  if (name == "chain6") return chain6();
  if (name == "dchain6") {
    RunConfig cfg = chain6();
    cfg.kind = TopologyKind::DirectedChain;
    return cfg;
  }
  if (name == "chain6-perturbed") {
    RunConfig cfg = chain6();
    cfg.perturbation_kind = RunConfig::PerturbationKind::BuiltinFamily;
    cfg.perturbation_amplitude = 0.5;
    // perturbed runs reach a bounded neighborhood, not the 1e-6 set; a
    // shorter window shows the steady oscillation without the long tail
    cfg.t_end = 50.0;
    return cfg;
  }
  if (name == "tree10") {
    RunConfig cfg;
    cfg.kind = TopologyKind::DirectedTree;
    cfg.n = 10;
    cfg.parents = std::vector<int>{0, 1, 1, 2, 2, 3, 4, 4, 6, 7};
    cfg.coupling = Vec(10);
    cfg.coupling << 0.6, 0.5, 0.4, 0.6, 0.5, 0.4, 0.6, 0.5, 0.4, 0.6;
    const BuiltinPrfId ids[] = {BuiltinPrfId::A, BuiltinPrfId::B,
                                BuiltinPrfId::C, BuiltinPrfId::D,
                                BuiltinPrfId::A, BuiltinPrfId::B,
                                BuiltinPrfId::C, BuiltinPrfId::D,
                                BuiltinPrfId::A, BuiltinPrfId::B};
    for (auto id : ids) {
      cfg.prfs.push_back(builtin_prf(id));
      cfg.prf_names.push_back(to_string(id));
    }
    cfg.omega = kTwoPi;
    cfg.t_end = 200.0;
    return cfg;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace pcosync
