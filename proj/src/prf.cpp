#include "pcosync/prf.hpp"

#include <cmath>
#include <stdexcept>

namespace pcosync {

double prf_eval(const PhaseResponseFunction& prf, double x) {
  return prf_eval(prf, x, prf.pi_selection);
}

double prf_eval(const PhaseResponseFunction& prf, double x,
                PiSelection at_pi) {
  if (!(x >= 0.0 && x <= kTwoPi)) {
    throw std::domain_error("prf_eval: phase " + std::to_string(x) +
                            " outside [0, 2pi]");
  }
  if (x < kPi) return prf.delay_branch(x);
  if (x > kPi) return prf.advance_branch(x);
  return at_pi == PiSelection::Delay ? prf.delay_branch(kPi)
                                     : prf.advance_branch(kPi);
}

namespace {

void check_point(std::vector<PrfViolation>& out, double x, double v,
                 bool delay) {
  if (!std::isfinite(v)) {
    out.push_back({x, v, "non-finite value"});
    return;
  }
  if (delay) {
    if (x == 0.0) {
      if (v != 0.0) out.push_back({x, v, "delay branch must be 0 at x=0"});
    } else if (!(v >= -x && v < 0.0)) {
      out.push_back({x, v, "delay branch must lie in [-x, 0) on (0, pi]"});
    }
  } else {
    if (x == kTwoPi) {
      if (v != 0.0) out.push_back({x, v, "advance branch must be 0 at x=2pi"});
    } else if (!(v > 0.0 && v <= kTwoPi - x)) {
      out.push_back({x, v, "advance branch must lie in (0, 2pi-x] on [pi, 2pi)"});
    }
  }
}

}  // namespace

std::vector<PrfViolation> validate_prf(const PhaseResponseFunction& prf,
                                       int grid_points) {
  if (grid_points < 2) {
    throw std::invalid_argument("validate_prf: grid_points must be >= 2");
  }
  std::vector<PrfViolation> report;
  const double jump_threshold = 10.0 * (kTwoPi / grid_points) + 1e-6;

  for (int branch = 0; branch < 2; ++branch) {
    const bool delay = branch == 0;
    const double lo = delay ? 0.0 : kPi;
    const double hi = delay ? kPi : kTwoPi;
    double prev = 0.0;
    for (int k = 0; k < grid_points; ++k) {
      const double u = static_cast<double>(k) / (grid_points - 1);
      // exact endpoints; F(0)=0 and F(2pi)=0 are checked verbatim
      const double x = (k == grid_points - 1) ? hi : lo + u * (hi - lo);
      const double v = delay ? prf.delay_branch(x) : prf.advance_branch(x);
      check_point(report, x, v, delay);
      if (k > 0 && std::isfinite(v) && std::isfinite(prev) &&
          std::abs(v - prev) > jump_threshold) {
        report.push_back({x, v, "discontinuity heuristic tripped"});
      }
      prev = v;
    }
  }
  return report;
}

PhaseResponseFunction builtin_prf(BuiltinPrfId id, PiSelection sel) {
  PhaseResponseFunction prf;
  prf.pi_selection = sel;
  switch (id) {
    case BuiltinPrfId::A:
      prf.name = "A";
      prf.delay_branch = [](double x) { return -0.6 * x; };
      prf.advance_branch = [](double x) { return 0.6 * (kTwoPi - x); };
      break;
    case BuiltinPrfId::B:
      prf.name = "B";
      prf.delay_branch = [](double x) {
        return x < kPi / 2 ? -0.7 * x : -0.35 * kPi;
      };
      prf.advance_branch = [](double x) {
        return x <= 1.5 * kPi ? 0.35 * kPi : 0.7 * (kTwoPi - x);
      };
      break;
    case BuiltinPrfId::C:
      prf.name = "C";
      prf.delay_branch = [](double x) { return -1.5 * std::sin(0.5 * x); };
      prf.advance_branch = [](double x) {
        // sin(0.5x) picks up rounding at x=2pi; the endpoint is exactly 0
        return x == kTwoPi ? 0.0 : 1.5 * std::sin(0.5 * x);
      };
      break;
    case BuiltinPrfId::D:
      prf.name = "D";
      prf.delay_branch = [](double x) {
        return -x * x * x / (kPi * kPi) + x * x / kPi - 0.75 * x;
      };
      prf.advance_branch = [](double x) {
        if (x == kTwoPi) return 0.0;
        return -x * x * x / (kPi * kPi) + 5.0 * x * x / kPi - 8.75 * x +
               5.5 * kPi;
      };
      break;
  }
  return prf;
}

BuiltinPrfId builtin_prf_id_from_string(const std::string& s) {
  if (s == "A" || s == "a") return BuiltinPrfId::A;
  if (s == "B" || s == "b") return BuiltinPrfId::B;
  if (s == "C" || s == "c") return BuiltinPrfId::C;
  if (s == "D" || s == "d") return BuiltinPrfId::D;
  throw std::invalid_argument("unknown builtin PRF id: " + s);
}

std::string to_string(BuiltinPrfId id) {
  switch (id) {
    case BuiltinPrfId::A: return "A";
    case BuiltinPrfId::B: return "B";
    case BuiltinPrfId::C: return "C";
    case BuiltinPrfId::D: return "D";
  }
  return "?";
}

}  // namespace pcosync
