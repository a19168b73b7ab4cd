#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pcosync/types.hpp"

namespace pcosync {

/// Branch selection at x = pi, where a delay-advance response function
/// takes two admissible values.
enum class PiSelection { Delay, Advance };

/// A delay-advance phase response function: a delay branch on [0, pi]
/// (values in [-x, 0), zero at 0) and an advance branch on [pi, 2pi]
/// (values in (0, 2pi - x], zero at 2pi). Immutable after construction.
struct PhaseResponseFunction {
  std::function<double(double)> delay_branch;    // defined on [0, pi]
  std::function<double(double)> advance_branch;  // defined on [pi, 2pi]
  PiSelection pi_selection = PiSelection::Delay;
  std::string name;
};

enum class BuiltinPrfId { A, B, C, D };

/// Evaluates the response at phase x in [0, 2pi]. Delay branch below pi,
/// advance branch above, pi_selection decides at exactly pi.
double prf_eval(const PhaseResponseFunction& prf, double x);

/// Same, with the branch choice at pi taken from at_pi instead of the
/// function's own pi_selection.
double prf_eval(const PhaseResponseFunction& prf, double x, PiSelection at_pi);

struct PrfViolation {
  double x = 0.0;
  double value = 0.0;
  std::string what;
};

/// Checks the sign/bound constraints and a continuity heuristic on a
/// uniform grid of grid_points per branch. Empty report means accepted.
/// Non-finite branch values are reported, never thrown.
std::vector<PrfViolation> validate_prf(const PhaseResponseFunction& prf,
                                       int grid_points);

/// The four closed-form response functions used by the reference
/// experiments: A linear, B plateaued piecewise linear, C sinusoidal
/// lobes, D cubic.
PhaseResponseFunction builtin_prf(BuiltinPrfId id,
                                  PiSelection sel = PiSelection::Delay);

BuiltinPrfId builtin_prf_id_from_string(const std::string& s);
std::string to_string(BuiltinPrfId id);

}  // namespace pcosync
