#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcosync/engine.hpp"
#include "pcosync/prf.hpp"
#include "pcosync/topology.hpp"

namespace pcosync {

/// Fully validated run configuration, as loaded from a JSON config document
/// or a named preset. Numeric fields in the document accept plain decimals
/// or pi multiples written as strings ("0.35pi", "2pi", "pi").
struct RunConfig {
  // topology
  TopologyKind kind = TopologyKind::UndirectedChain;
  int n = 0;
  Vec coupling;
  std::optional<std::vector<int>> parents;

  // response functions
  std::vector<PhaseResponseFunction> prfs;
  std::vector<std::string> prf_names;
  PiSelection pi_selection = PiSelection::Delay;

  // dynamics
  double omega = kTwoPi;
  double t_end = 50.0;
  double event_tolerance = 1e-12;
  RecordMode record_mode = RecordMode::EventsOnly;
  double sample_dt = 0.01;

  // initial condition: explicit phases, or uniform random from seed
  std::optional<Vec> initial_phases;
  std::uint64_t seed = 0;

  // perturbation
  enum class PerturbationKind { None, BuiltinFamily, Custom };
  PerturbationKind perturbation_kind = PerturbationKind::None;
  double perturbation_amplitude = 0.0;  // builtin family
  std::vector<std::vector<SinusoidTerm>> perturbation_terms;  // custom

  int batch_count = 1;
  std::uint64_t batch_base_seed = 0;

  NetworkTopology make_topology() const;
  SimulationParams make_params() const;
  /// Explicit phases when given, otherwise uniform random in [0, 2pi] from
  /// the seed (platform-independent generator).
  Vec make_initial(std::uint64_t seed_value) const;
};

/// Parses "1.5", "pi", "2pi", "-0.35pi" and JSON numbers.
double parse_pi_number(const std::string& token);

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

/// Uniform phases in [0, 2pi], deterministic across platforms.
Vec random_phases(int n, std::uint64_t seed);

}  // namespace pcosync
