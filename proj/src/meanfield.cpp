#include "cowpox/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cowpox {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

constexpr double kViolationLog = 1e-6;

}  // namespace

void SirParams::validate() const {
  if (!is_probability(beta) || !is_probability(gamma) || !is_probability(r0)) {
    throw std::invalid_argument("SIR parameters beta, gamma, r0 must lie in [0,1]");
  }
}

void CowpoxParams::validate() const {
  for (double v : {beta, delta, epsilon, eta, r0, rc0}) {
    if (!is_probability(v)) throw std::invalid_argument("Cowpox parameters must lie in [0,1]");
  }
  if (r0 + rc0 > 1.0 + 1e-12) throw std::invalid_argument("invalid simplex: r0 + rc0 > 1");
}

double sir_rhs(double r, const SirParams& p) { return p.beta * r * (1.0 - r) / 2.0 - p.gamma * r; }

double sir_equilibrium(const SirParams& p) {
  if (p.beta <= 0.0 || p.beta <= 2.0 * p.gamma) return 0.0;
  return 1.0 - 2.0 * p.gamma / p.beta;
}

DiscreteStep cowpox_discrete_step(double r, double rc, const CowpoxParams& p) {
  const double s = 1.0 - rc - r;
  const double r_next = r + 0.5 * (p.beta * r * s + p.eta * r * rc - rc * r * p.epsilon);
  const double rc_next = rc + 0.5 * (p.delta * rc * s + p.epsilon * rc * r - p.eta * r * rc);
  DiscreteStep out{std::clamp(r_next, 0.0, 1.0), std::clamp(rc_next, 0.0, 1.0), false};
  out.clamped = out.r != r_next || out.rc != rc_next;
  return out;
}

std::array<double, 2> cowpox_rhs(double r, double rc, const CowpoxParams& p) {
  const double dr = 0.5 * (p.beta * r * (1.0 - rc - r) + p.eta * r * rc - rc * r * p.epsilon);
  const double drc = 0.5 * (p.epsilon * rc * (1.0 - rc) - p.eta * r * rc);
  return {dr, drc};
}

namespace {

template <std::size_t D>
std::array<double, D> axpy(const std::array<double, D>& y, double h, const std::array<double, D>& k) {
  std::array<double, D> out;
  for (std::size_t i = 0; i < D; ++i) out[i] = y[i] + h * k[i];
  return out;
}

template <std::size_t D>
std::array<double, D> rk4_step(const Rhs<D>& f, const std::array<double, D>& y, double h) {
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, h / 2, k1));
  const auto k3 = f(axpy(y, h / 2, k2));
  const auto k4 = f(axpy(y, h, k3));
  std::array<double, D> out;
  for (std::size_t i = 0; i < D; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

/// Projects onto [0,1] (D=1) or the simplex (D=2); returns the distance moved.
template <std::size_t D>
double project(std::array<double, D>& y) {
  const auto before = y;
  for (auto& v : y) v = std::clamp(v, 0.0, 1.0);
  if constexpr (D == 2) {
    const double excess = y[0] + y[1] - 1.0;
    if (excess > 0.0) {
      y[0] -= excess / 2;
      y[1] -= excess / 2;
      for (auto& v : y) v = std::clamp(v, 0.0, 1.0);
      if (y[0] + y[1] > 1.0) y[1] = 1.0 - y[0];
    }
  }
  double moved = 0.0;
  for (std::size_t i = 0; i < D; ++i) moved = std::max(moved, std::abs(before[i] - y[i]));
  // Subnormal fractions are flushed to zero; decaying states otherwise hit slow arithmetic.
  for (auto& v : y) {
    if (v < std::numeric_limits<double>::min()) v = 0.0;
  }
  return moved;
}

template <std::size_t D>
Trajectory integrate(const Rhs<D>& rhs, std::array<double, D> y, const IntegrationOptions& opt) {
  if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) throw std::invalid_argument("integrate_rk4: dt must be positive");
  if (!(opt.t_end >= 0.0)) throw std::invalid_argument("integrate_rk4: t_end must be non-negative");
  const std::size_t every = std::max<std::size_t>(1, opt.record_every);

  Trajectory tr;
  if constexpr (D == 2) tr.rc.emplace();
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.r.push_back(y[0]);
    if constexpr (D == 2) tr.rc->push_back(y[1]);
  };

  project(y);
  record(0.0);
  const auto steps = static_cast<std::size_t>(std::llround(opt.t_end / opt.dt));
  for (std::size_t i = 1; i <= steps; ++i) {
    y = rk4_step(rhs, y, opt.dt);
    for (double v : y) {
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "integrate_rk4: non-finite state at step " << i << " (t=" << i * opt.dt << ")";
        throw std::runtime_error(msg.str());
      }
    }
    const double moved = project(y);
    tr.max_violation = std::max(tr.max_violation, moved);
    if (moved > kViolationLog) ++tr.clamp_events;
    if (i % every == 0 || i == steps) record(static_cast<double>(i) * opt.dt);
  }
  return tr;
}

}  // namespace

Trajectory integrate_rk4(const Rhs<1>& rhs, double y0, const IntegrationOptions& opt) {
  return integrate<1>(rhs, {y0}, opt);
}

Trajectory integrate_rk4(const Rhs<2>& rhs, std::array<double, 2> y0, const IntegrationOptions& opt) {
  return integrate<2>(rhs, y0, opt);
}

Trajectory integrate_sir(const SirParams& p, const IntegrationOptions& opt) {
  p.validate();
  return integrate_rk4(Rhs<1>([&](const std::array<double, 1>& y) { return std::array<double, 1>{sir_rhs(y[0], p)}; }),
                       p.r0, opt);
}

Trajectory integrate_cowpox(const CowpoxParams& p, const IntegrationOptions& opt) {
  p.validate();
  return integrate_rk4(Rhs<2>([&](const std::array<double, 2>& y) { return cowpox_rhs(y[0], y[1], p); }),
                       std::array<double, 2>{p.r0, p.rc0}, opt);
}

Trajectory iterate_discrete(const CowpoxParams& p, std::uint32_t rounds) {
  p.validate();
  Trajectory tr;
  tr.rc.emplace();
  double r = p.r0;
  double rc = p.rc0;
  tr.times.push_back(0.0);
  tr.r.push_back(r);
  tr.rc->push_back(rc);
  for (std::uint32_t t = 1; t <= rounds; ++t) {
    const auto next = cowpox_discrete_step(r, rc, p);
    if (next.clamped) ++tr.clamp_events;
    r = next.r;
    rc = next.rc;
    tr.times.push_back(t);
    tr.r.push_back(r);
    tr.rc->push_back(rc);
  }
  return tr;
}

const char* to_string(StationaryClass c) {
  switch (c) {
    case StationaryClass::Extinction: return "Extinction";
    case StationaryClass::Endemic: return "Endemic";
    case StationaryClass::Boundary: return "Boundary";
  }
  return "?";
}

StationaryReport stationary_analysis(const CowpoxParams& p, double t_end) {
  p.validate();
  StationaryReport rep;

  // In-simplex roots of both right-hand sides. With cured fraction n = 0 the
  // infected fraction solves beta m (1 - m) = 0; with n = 1 it must be 0.
  std::vector<std::pair<double, double>> candidates{{0.0, 0.0}, {0.0, 1.0}};
  if (p.beta > 0.0) candidates.emplace_back(1.0, 0.0);
  for (auto [m, n] : candidates) {
    const auto d = cowpox_rhs(m, n, p);
    const double residual = std::max(std::abs(d[0]), std::abs(d[1]));
    if (residual < 1e-10) rep.fixed_points.push_back({m, n, residual});
  }

  rep.condition_satisfied = p.epsilon > p.eta;

  const std::array<std::array<double, 2>, 3> starts{{{0.1, 0.1}, {0.3, 0.3}, {0.6, 0.2}}};
  double lo_r = 1.0, hi_r = 0.0, lo_rc = 1.0, hi_rc = 0.0, sum_r = 0.0, sum_rc = 0.0;
  for (const auto& y0 : starts) {
    CowpoxParams q = p;
    q.r0 = y0[0];
    q.rc0 = y0[1];
    const auto tr = integrate_cowpox(q, IntegrationOptions{0.1, t_end, 1000000000});
    lo_r = std::min(lo_r, tr.final_r());
    hi_r = std::max(hi_r, tr.final_r());
    lo_rc = std::min(lo_rc, tr.final_rc());
    hi_rc = std::max(hi_rc, tr.final_rc());
    sum_r += tr.final_r();
    sum_rc += tr.final_rc();
  }
  rep.limit_r = sum_r / starts.size();
  rep.limit_rc = sum_rc / starts.size();
  rep.limit_spread = std::max(hi_r - lo_r, hi_rc - lo_rc);

  if (p.epsilon == p.eta) {
    rep.classification = StationaryClass::Boundary;
  } else if (rep.condition_satisfied) {
    rep.classification = StationaryClass::Extinction;
  } else {
    rep.classification = rep.limit_r > 1e-6 ? StationaryClass::Endemic : StationaryClass::Extinction;
  }
  return rep;
}

CowpoxParams ParamEstimates::to_params(double r0, double rc0) const {
  CowpoxParams p;
  p.beta = beta.value().value_or(0.0);
  p.delta = delta.value().value_or(0.0);
  p.epsilon = epsilon.value().value_or(0.0);
  p.eta = eta.value().value_or(0.0);
  p.r0 = r0;
  p.rc0 = rc0;
  return p;
}

ParamEstimates estimate_params(std::span<const PairEvent> events) {
  if (events.empty()) throw std::invalid_argument("estimate_params: empty event log");
  using C = Compartment;
  ParamEstimates est;
  for (const auto& e : events) {
    auto tally = [&](RateEstimate& rate, C target) {
      ++rate.trials;
      if (e.a_state_after == target) ++rate.successes;
    };
    if (e.q_state_before == C::Infected && e.a_state_before == C::Sensitive) tally(est.beta, C::Infected);
    if (e.q_state_before == C::Cured && e.a_state_before == C::Sensitive) tally(est.delta, C::Cured);
    if (e.q_state_before == C::Cured && e.a_state_before == C::Infected) tally(est.epsilon, C::Cured);
    if (e.q_state_before == C::Infected && e.a_state_before == C::Cured) tally(est.eta, C::Infected);
  }
  return est;
}

ParamEstimates estimate_params(const EventLog& log) {
  std::vector<PairEvent> all;
  for (const auto& r : log) all.insert(all.end(), r.pairs.begin(), r.pairs.end());
  return estimate_params(all);
}

}  // namespace cowpox
