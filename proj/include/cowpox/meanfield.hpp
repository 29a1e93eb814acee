#pragma once

// Mean-field transmission dynamics.
//
// Baseline model, r = infected fraction:
//   dr/dt = beta r (1 - r) / 2 - gamma r
// Cowpox model, r = infected, rc = cured fraction, one round per step:
//   r'  = r  + (beta r (1-rc-r) + eta r rc - eps rc r) / 2
//   rc' = rc + (delta rc (1-rc-r) + eps rc r - eta r rc) / 2
// and its continuous limit with delta -> eps:
//   dr/dt  = (beta r (1-rc-r) + eta r rc - eps rc r) / 2
//   drc/dt = (eps rc (1-rc) - eta r rc) / 2

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cowpox/events.hpp"

namespace cowpox {

struct SirParams {
  double beta = 0.8;
  double gamma = 0.2;
  double r0 = 0.01;

  void validate() const;
};

struct CowpoxParams {
  double beta = 0.8;
  double delta = 0.6;
  double epsilon = 0.6;
  double eta = 0.3;
  double r0 = 0.1;
  double rc0 = 0.05;

  void validate() const;
};

double sir_rhs(double r, const SirParams& p);

/// 1 - 2 gamma / beta when beta >= 2 gamma, else 0.
double sir_equilibrium(const SirParams& p);

struct DiscreteStep {
  double r = 0.0;
  double rc = 0.0;
  bool clamped = false;
};

DiscreteStep cowpox_discrete_step(double r, double rc, const CowpoxParams& p);

std::array<double, 2> cowpox_rhs(double r, double rc, const CowpoxParams& p);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> r;
  std::optional<std::vector<double>> rc;
  std::size_t clamp_events = 0;  // steps whose raw state left the domain by more than 1e-6
  double max_violation = 0.0;

  double final_r() const { return r.back(); }
  double final_rc() const { return rc ? rc->back() : 0.0; }
};

template <std::size_t D>
using Rhs = std::function<std::array<double, D>(const std::array<double, D>&)>;

struct IntegrationOptions {
  double dt = 0.1;
  double t_end = 100.0;
  std::size_t record_every = 1;  // keep every k-th step (the final state is always kept)
};

/// Classic fixed-step RK4 for the baseline model; state projected onto [0,1].
Trajectory integrate_rk4(const Rhs<1>& rhs, double y0, const IntegrationOptions& opt);

/// Classic fixed-step RK4 for the two-compartment model; state projected onto
/// the simplex r, rc >= 0, r + rc <= 1. Throws std::runtime_error on a
/// non-finite state.
Trajectory integrate_rk4(const Rhs<2>& rhs, std::array<double, 2> y0, const IntegrationOptions& opt);

Trajectory integrate_sir(const SirParams& p, const IntegrationOptions& opt);
Trajectory integrate_cowpox(const CowpoxParams& p, const IntegrationOptions& opt);

/// Iterates the per-round difference equations for `rounds` steps.
Trajectory iterate_discrete(const CowpoxParams& p, std::uint32_t rounds);

enum class StationaryClass { Extinction, Endemic, Boundary };

const char* to_string(StationaryClass c);

struct FixedPoint {
  double m = 0.0;  // infected fraction
  double n = 0.0;  // cured fraction
  double residual = 0.0;
};

struct StationaryReport {
  std::vector<FixedPoint> fixed_points;
  StationaryClass classification = StationaryClass::Extinction;
  bool condition_satisfied = false;  // epsilon > eta
  /// Long-horizon numerical limit from several initial conditions.
  double limit_r = 0.0;
  double limit_rc = 0.0;
  double limit_spread = 0.0;  // max disagreement across initial conditions
};

StationaryReport stationary_analysis(const CowpoxParams& p, double t_end = 1e4);

struct RateEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  std::optional<double> value() const {
    if (trials == 0) return std::nullopt;
    return static_cast<double>(successes) / static_cast<double>(trials);
  }
};

/// Pairwise transition frequencies from labelled pair events.
struct ParamEstimates {
  RateEstimate beta;     // Q=i, A=s -> A=i
  RateEstimate delta;    // Q=c, A=s -> A=c
  RateEstimate epsilon;  // Q=c, A=i -> A=c
  RateEstimate eta;      // Q=i, A=c -> A=i

  /// Missing estimates fall back to 0.
  CowpoxParams to_params(double r0, double rc0) const;
};

/// Throws std::invalid_argument on an empty event list.
ParamEstimates estimate_params(std::span<const PairEvent> events);
ParamEstimates estimate_params(const EventLog& log);

}  // namespace cowpox
