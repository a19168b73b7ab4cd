#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcosync/engine.hpp"
#include "pcosync/topology.hpp"
#include "pcosync/types.hpp"

namespace pcosync {

/// Length of the shorter circular arc between two phases in [0, 2pi].
double delta(double xa, double xb);

/// Sum of consecutive arc lengths over the chain order 1..N, with the last
/// term wrapping back to node 1. Zero exactly on the synchronization set.
double lyapunov_l(const Vec& x);

/// Same measure restricted to an ordered node-id sequence (a decomposed
/// tree chain), wrapping from the last listed node back to the first.
double lyapunov_l(const Vec& x, const std::vector<int>& chain);

/// Length of the shortest arc containing all phases: 2pi minus the largest
/// circular gap between sorted phases.
double containing_arc(const Vec& x);

/// Distance of x to the synchronization set under the circular metric,
/// minimized over candidate common phases. Diagnostic only.
double sync_distance(const Vec& x);

struct SyncMetrics {
  Vec deltas;
  double lyapunov_l = 0.0;
  double containing_arc = 0.0;
  double sync_distance = 0.0;
};

SyncMetrics compute_metrics(const Vec& x);

struct MonotoneViolation {
  double t = 0.0;
  long j = 0;
  double l_before = 0.0;
  double l_after = 0.0;
  bool during_flow = false;
};

struct MonotoneReport {
  std::vector<MonotoneViolation> violations;
  double max_increase = 0.0;
};

/// Checks that L is constant during flows and nonincreasing across jumps,
/// sample to sample, within tol.
MonotoneReport check_l_monotone(const Trajectory& traj, double tol);

/// Which of the four jump-analysis cases applied to a neighbor of the firer:
/// the neighbor jumps toward (1, 2) or away from (3, 4) its far-side
/// neighbor, split on the magnitude comparison.
struct JumpCaseResult {
  int neighbor = 0;      // node that received the pulse
  int far_node = 0;      // its neighbor on the far side of the firer
  int case_id = 0;       // 1..4
  double jump_magnitude = 0.0;
  double near_error = 0.0;  // |observed - predicted| for the near delta
  double far_error = 0.0;   // same for the far delta
  double sum_change = 0.0;  // post minus pre of the two affected deltas
  bool passed = false;
  std::string detail;
};

/// Classifies the effect of one firing on each existing chain neighbor and
/// checks the per-case relations among the affected arc lengths. Chain
/// topologies with n >= 4 only (the four-difference description needs it).
std::vector<JumpCaseResult> check_jump_cases(
    const HybridState& pre, const HybridState& post, int firer,
    const NetworkTopology& topo, const std::vector<PhaseResponseFunction>& prfs,
    const SimulationParams& params, double tol = 1e-9);

struct ClosenessResult {
  bool close = false;
  double sup_eps = 0.0;  // smallest eps for which the arcs are (tau,eps)-close
  std::optional<HybridState> witness;  // first failing point, if any
};

/// Definition-style two-sided closeness over recorded points with
/// t + j <= tau. Both trajectories must be densely recorded.
ClosenessResult tau_eps_close(const Trajectory& a, const Trajectory& b,
                              double tau, double eps);

/// The smallest eps making the two arcs (tau, eps)-close, computed from the
/// recorded samples.
double tau_eps_sup(const Trajectory& a, const Trajectory& b, double tau);

/// Splits the firing log into rounds (one firing per node) and counts the
/// rounds whose cyclic node order differs from the previous round.
int firing_order_changes(const Trajectory& traj, int n);

}  // namespace pcosync
