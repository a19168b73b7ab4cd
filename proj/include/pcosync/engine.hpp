#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "pcosync/prf.hpp"
#include "pcosync/topology.hpp"
#include "pcosync/types.hpp"

namespace pcosync {

/// Phase vector at a hybrid time point (t, j).
struct HybridState {
  Vec x;
  double t = 0.0;
  long j = 0;
};

struct FiringEvent {
  double t = 0.0;
  long j = 0;  // jump counter after this firing
  int node = 0;
};

struct Trajectory {
  std::vector<HybridState> samples;  // every pre/post-jump state, plus dense
  std::vector<FiringEvent> firings;
};

/// Per-node frequency perturbation p_i(t). Implementations must provide an
/// exact or tolerance-bounded integral so flows stay consistent with event
/// detection.
class Perturbation {
 public:
  virtual ~Perturbation() = default;
  virtual double value(int node, double t) const = 0;
  virtual double integral(int node, double t0, double t1) const = 0;
  /// sup over nodes and time of |p_i(t)|; must be < omega.
  virtual double bound() const = 0;
};

/// offset + amplitude * sin(omega * t + phase)
struct SinusoidTerm {
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double offset = 0.0;
};

/// Sum-of-sinusoids perturbation with a closed-form integral.
class SinusoidPerturbation : public Perturbation {
 public:
  explicit SinusoidPerturbation(std::vector<std::vector<SinusoidTerm>> terms);

  /// The family a*sin(2*pi*t + 2*pi*k/n) on every node k = 1..n.
  static std::shared_ptr<SinusoidPerturbation> builtin_family(int n, double a);

  double value(int node, double t) const override;
  double integral(int node, double t0, double t1) const override;
  double bound() const override { return bound_; }

 private:
  std::vector<std::vector<SinusoidTerm>> terms_;  // terms_[node-1]
  double bound_ = 0.0;
};

/// Arbitrary per-node rate functions, integrated by adaptive Simpson
/// quadrature to 1e-12. The caller supplies the sup bound.
class FunctionPerturbation : public Perturbation {
 public:
  FunctionPerturbation(std::vector<std::function<double(double)>> fns,
                       double bound)
      : fns_(std::move(fns)), bound_(bound) {}

  double value(int node, double t) const override { return fns_[node - 1](t); }
  double integral(int node, double t0, double t1) const override;
  double bound() const override { return bound_; }

 private:
  std::vector<std::function<double(double)>> fns_;
  double bound_;
};

enum class RecordMode { EventsOnly, Dense };

struct SimulationParams {
  double omega = kTwoPi;
  std::shared_ptr<const Perturbation> perturbation;  // null = unperturbed
  std::optional<PiSelection> pi_selection_override;
  double t_end = 50.0;
  double event_tolerance = 1e-12;  // seconds
  RecordMode record_mode = RecordMode::EventsOnly;
  double sample_dt = 0.01;  // Dense mode only

  /// Phases at least this close to 2pi at an event time are snapped to 2pi.
  double snap_tolerance() const;
  void validate(int n) const;
};

/// Advances all phases by dt of continuous time. The caller guarantees no
/// component crosses 2pi strictly inside the interval.
HybridState flow(const HybridState& state, double dt,
                 const SimulationParams& params);

/// Time until the earliest component reaches 2pi. Exact when unperturbed,
/// bracketing + bisection to event_tolerance otherwise.
double next_event_time(const HybridState& state,
                       const SimulationParams& params);

/// Jump map of a single firing: node i resets to 0 and each out-neighbor j
/// shifts by l_j * F_j(x_j).
HybridState fire(const HybridState& state, int i, const NetworkTopology& topo,
                 const std::vector<PhaseResponseFunction>& prfs,
                 const SimulationParams& params);

/// Fires every node in the jump set, lowest id first, until the jump set is
/// empty. At most n consecutive firings. Appends post-jump samples and
/// firing events to record when given.
HybridState process_jump_set(const HybridState& state,
                             const NetworkTopology& topo,
                             const std::vector<PhaseResponseFunction>& prfs,
                             const SimulationParams& params,
                             Trajectory* record = nullptr);

/// Event-driven simulation until t_end: alternating exact flows and jump-set
/// processing, deterministic for identical inputs.
Trajectory simulate(const Vec& initial_x, const NetworkTopology& topo,
                    const std::vector<PhaseResponseFunction>& prfs,
                    const SimulationParams& params);

}  // namespace pcosync
