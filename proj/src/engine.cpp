#include "pcosync/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pcosync {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

SinusoidPerturbation::SinusoidPerturbation(
    std::vector<std::vector<SinusoidTerm>> terms)
    : terms_(std::move(terms)) {
  for (const auto& node : terms_) {
    double b = 0.0;
    for (const auto& term : node) {
      b += std::abs(term.offset) + std::abs(term.amplitude);
    }
    bound_ = std::max(bound_, b);
  }
}

std::shared_ptr<SinusoidPerturbation> SinusoidPerturbation::builtin_family(
    int n, double a) {
  std::vector<std::vector<SinusoidTerm>> terms(n);
  for (int k = 1; k <= n; ++k) {
    terms[k - 1].push_back({a, kTwoPi, kTwoPi * k / n, 0.0});
  }
  return std::make_shared<SinusoidPerturbation>(std::move(terms));
}

double SinusoidPerturbation::value(int node, double t) const {
  double v = 0.0;
  for (const auto& term : terms_[node - 1]) {
    v += term.offset + term.amplitude * std::sin(term.omega * t + term.phase);
  }
  return v;
}

double SinusoidPerturbation::integral(int node, double t0, double t1) const {
  double v = 0.0;
  for (const auto& term : terms_[node - 1]) {
    v += term.offset * (t1 - t0);
    if (term.omega == 0.0) {
      v += term.amplitude * std::sin(term.phase) * (t1 - t0);
    } else {
      v += term.amplitude / term.omega *
           (std::cos(term.omega * t0 + term.phase) -
            std::cos(term.omega * t1 + term.phase));
    }
  }
  return v;
}

double FunctionPerturbation::integral(int node, double t0, double t1) const {
  if (t1 == t0) return 0.0;
  const auto& f = fns_[node - 1];
  const double m = 0.5 * (t0 + t1);
  const double fa = f(t0), fm = f(m), fb = f(t1);
  const double whole = simpson(t0, t1, fa, fm, fb);
  return adaptive_simpson(f, t0, t1, fa, fm, fb, whole, 1e-12, 48);
}

double SimulationParams::snap_tolerance() const {
  const double rate = omega + (perturbation ? perturbation->bound() : 0.0);
  return rate * event_tolerance + 1e-13;
}

void SimulationParams::validate(int n) const {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (!(event_tolerance > 0.0)) {
    throw std::invalid_argument("event_tolerance must be positive");
  }
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (record_mode == RecordMode::Dense && !(sample_dt > 0.0)) {
    throw std::invalid_argument("dense recording needs sample_dt > 0");
  }
  if (perturbation && !(perturbation->bound() < omega)) {
    throw std::invalid_argument(
        "perturbation bound must stay below omega to keep phases advancing");
  }
  (void)n;
}

HybridState flow(const HybridState& state, double dt,
                 const SimulationParams& params) {
  if (dt < 0.0) throw std::invalid_argument("flow: dt must be nonnegative");
  const double snap = params.snap_tolerance();
  HybridState out = state;
  out.t = state.t + dt;
  for (Index i = 0; i < state.x.size(); ++i) {
    double dx = params.omega * dt;
    if (params.perturbation) {
      dx += params.perturbation->integral(static_cast<int>(i) + 1, state.t,
                                          state.t + dt);
    }
    double xi = state.x[i] + dx;
    if (xi > kTwoPi) {
      if (xi - kTwoPi > snap) {
        throw std::logic_error("flow: phase overshot 2pi beyond tolerance; "
                               "event detection failed");
      }
      xi = kTwoPi;
    }
    out.x[i] = xi;
  }
  return out;
}

double next_event_time(const HybridState& state,
                       const SimulationParams& params) {
  const double omega = params.omega;
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < state.x.size(); ++i) {
    const double xi = state.x[i];
    if (!std::isfinite(xi)) {
      throw std::logic_error("next_event_time: non-finite phase");
    }
    if (xi >= kTwoPi) {
      throw std::logic_error("next_event_time: component already at 2pi");
    }
    const double target = kTwoPi - xi;
    if (!params.perturbation) {
      best = std::min(best, target / omega);
      continue;
    }
    const int node = static_cast<int>(i) + 1;
    const double pmax = params.perturbation->bound();
    auto g = [&](double dt) {
      return omega * dt +
             params.perturbation->integral(node, state.t, state.t + dt) -
             target;
    };
    double lo = target / (omega + pmax);
    double hi = target / (omega - pmax);
    // guard against rounding at the analytic bracket edges
    for (int k = 0; k < 8 && g(hi) < 0.0; ++k) hi *= 1.0 + 1e-9 + 1e-9 * k;
    while (hi - lo > params.event_tolerance) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    best = std::min(best, hi);
  }
  return best;
}

HybridState fire(const HybridState& state, int i, const NetworkTopology& topo,
                 const std::vector<PhaseResponseFunction>& prfs,
                 const SimulationParams& params) {
  const double snap = params.snap_tolerance();
  if (std::abs(state.x[i - 1] - kTwoPi) > snap) {
    throw std::logic_error("fire: node " + std::to_string(i) +
                           " is not at 2pi");
  }
  HybridState out = state;
  out.x[i - 1] = 0.0;
  out.j = state.j + 1;
  for (int nb : topo.out_neighbors(i)) {
    const auto& prf = prfs[nb - 1];
    const PiSelection sel =
        params.pi_selection_override.value_or(prf.pi_selection);
    const double xj = state.x[nb - 1];
    double shifted = xj + topo.coupling(nb) * prf_eval(prf, xj, sel);
    shifted = std::min(std::max(shifted, 0.0), kTwoPi);
    out.x[nb - 1] = shifted;
  }
  return out;
}

HybridState process_jump_set(const HybridState& state,
                             const NetworkTopology& topo,
                             const std::vector<PhaseResponseFunction>& prfs,
                             const SimulationParams& params,
                             Trajectory* record) {
  const double snap = params.snap_tolerance();
  HybridState s = state;
  int fired = 0;
  for (;;) {
    int firer = 0;
    for (Index i = 0; i < s.x.size(); ++i) {
      if (s.x[i] >= kTwoPi - snap) {
        firer = static_cast<int>(i) + 1;
        break;
      }
    }
    if (firer == 0) break;
    if (++fired > topo.n()) {
      throw std::runtime_error(
          "process_jump_set: more than N consecutive jumps; a pulse "
          "re-triggered a freshly reset oscillator");
    }
    s.x[firer - 1] = kTwoPi;  // snap before applying the jump map
    s = fire(s, firer, topo, prfs, params);
    if (record) {
      record->firings.push_back({s.t, s.j, firer});
      record->samples.push_back(s);
    }
  }
  return s;
}

Trajectory simulate(const Vec& initial_x, const NetworkTopology& topo,
                    const std::vector<PhaseResponseFunction>& prfs,
                    const SimulationParams& params) {
  const int n = topo.n();
  params.validate(n);
  if (initial_x.size() != n) {
    throw std::invalid_argument("simulate: initial phase count must equal n");
  }
  if (static_cast<int>(prfs.size()) != n) {
    throw std::invalid_argument("simulate: PRF count must equal n");
  }
  for (Index i = 0; i < initial_x.size(); ++i) {
    if (!(initial_x[i] >= 0.0 && initial_x[i] <= kTwoPi)) {
      throw std::invalid_argument("simulate: initial phase outside [0, 2pi]");
    }
  }

  const double snap = params.snap_tolerance();
  const bool dense = params.record_mode == RecordMode::Dense;

  Trajectory traj;
  HybridState s{initial_x, 0.0, 0};
  traj.samples.push_back(s);
  if ((s.x.array() >= kTwoPi - snap).any()) {
    s = process_jump_set(s, topo, prfs, params, &traj);
  }

  while (s.t < params.t_end) {
    const double dt_event = next_event_time(s, params);
    const bool hits_event = dt_event <= params.t_end - s.t;
    const double dt = hits_event ? dt_event : params.t_end - s.t;

    if (dense) {
      long k = static_cast<long>(std::floor(s.t / params.sample_dt)) + 1;
      for (; k * params.sample_dt < s.t + dt - 1e-15; ++k) {
        const double ts = k * params.sample_dt;
        if (ts <= s.t) continue;
        traj.samples.push_back(flow(s, ts - s.t, params));
      }
    }

    s = flow(s, dt, params);
    traj.samples.push_back(s);
    if (!hits_event) break;
    s = process_jump_set(s, topo, prfs, params, &traj);
  }
  return traj;
}

}  // namespace pcosync
