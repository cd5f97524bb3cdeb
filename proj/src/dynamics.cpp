#include "trireduce/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "trireduce/errors.hpp"

namespace trireduce {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Triple = std::array<Vec3, 3>;

Triple accelerations(const MassTriple& m, const Triple& x, const PotentialSpec& V) {
  Triple f = forces_cartesian(V, m, x);
  for (int i = 0; i < 3; ++i) f[i] /= m[i];
  return f;
}

void leapfrog_step(const MassTriple& m, CartesianState& s, Triple& acc, const PotentialSpec& V,
                   double dt) {
  for (int i = 0; i < 3; ++i) {
    s.v[i] += 0.5 * dt * acc[i];
    s.x[i] += dt * s.v[i];
  }
  acc = accelerations(m, s.x, V);
  for (int i = 0; i < 3; ++i) s.v[i] += 0.5 * dt * acc[i];
}

void rk4_step(const MassTriple& m, CartesianState& s, const PotentialSpec& V, double dt) {
  auto deriv = [&](const CartesianState& y) {
    CartesianState d;
    d.x = y.v;
    d.v = accelerations(m, y.x, V);
    return d;
  };
  auto axpy = [](const CartesianState& y, double h, const CartesianState& k) {
    CartesianState out;
    for (int i = 0; i < 3; ++i) {
      out.x[i] = y.x[i] + h * k.x[i];
      out.v[i] = y.v[i] + h * k.v[i];
    }
    return out;
  };
  const CartesianState k1 = deriv(s);
  const CartesianState k2 = deriv(axpy(s, 0.5 * dt, k1));
  const CartesianState k3 = deriv(axpy(s, 0.5 * dt, k2));
  const CartesianState k4 = deriv(axpy(s, dt, k3));
  for (int i = 0; i < 3; ++i) {
    s.x[i] += dt / 6.0 * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
    s.v[i] += dt / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
  }
}

void check_guard(const CartesianState& s, double guard, std::size_t step) {
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      if (!std::isfinite(s.x[i][k]) || !std::isfinite(s.v[i][k]) ||
          std::abs(s.x[i][k]) > guard || std::abs(s.v[i][k]) > guard) {
        throw NumericalBlowup(
            fmt::format("state of body {} left the overflow guard at step {}", i + 1, step));
      }
    }
  }
}

}  // namespace

double kinetic_energy(const MassTriple& m, const CartesianState& s) {
  double k = 0.0;
  for (int i = 0; i < 3; ++i) k += 0.5 * m[i] * s.v[i].squaredNorm();
  return k;
}

double total_energy(const MassTriple& m, const CartesianState& s, const PotentialSpec& V) {
  return kinetic_energy(m, s) + eval_potential(V, context_from_positions(m, s.x));
}

SampleRecord record_sample(const MassTriple& m, const CartesianState& s, const PotentialSpec& V,
                           const Thresholds& thresholds) {
  const JacobiVectors j = jacobi_from_cartesian(m, s);
  SampleRecord r;
  r.r1 = j.s1.norm();
  r.r2 = j.s2.norm();
  r.phi = std::atan2(j.s1.cross(j.s2).norm(), j.s1.dot(j.s2));
  r.sin_phi = (r.r1 > 0.0 && r.r2 > 0.0) ? j.s1.cross(j.s2).norm() / (r.r1 * r.r2) : kNaN;
  r.L = spatial_angular_momentum(j);
  r.E = total_energy(m, s, V);
  try {
    const ReducedEvaluation ev = evaluate_reduced(m, s, V, thresholds);
    r.J = ev.momenta.J;
    r.p = ev.momenta.p;
    r.H_reduced = ev.H;
    r.branch = ev.branch;
  } catch (const DomainError&) {
    throw;
  } catch (const Error&) {
    r.J = r.p = Vec3::Constant(kNaN);
    r.H_reduced = kNaN;
    r.branch.reset();
  }
  return r;
}

Trajectory integrate(const MassTriple& m, const CartesianState& state0, const PotentialSpec& V,
                     const IntegratorConfig& cfg, const Thresholds& thresholds) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidInput("dt must be positive");
  if (cfg.steps < 1) throw InvalidInput("steps must be at least 1");
  if (cfg.record_stride < 1) throw InvalidInput("record_stride must be at least 1");

  Trajectory traj{m, {}};
  traj.samples.reserve(cfg.steps / cfg.record_stride + 1);

  CartesianState s = state0;
  check_guard(s, cfg.overflow_guard, 0);
  const double K0 = kinetic_energy(m, s);
  const double V0 = eval_potential(V, context_from_positions(m, s.x));
  const double E0 = K0 + V0;
  const double energy_scale = std::abs(K0) + std::abs(V0);

  traj.samples.push_back({0.0, s, record_sample(m, s, V, thresholds)});
  Triple acc = accelerations(m, s.x, V);
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    if (cfg.method == Method::Leapfrog) {
      leapfrog_step(m, s, acc, V, cfg.dt);
    } else {
      rk4_step(m, s, V, cfg.dt);
    }
    check_guard(s, cfg.overflow_guard, step);
    if (cfg.energy_guard > 0.0 && energy_scale > 0.0) {
      const double E = total_energy(m, s, V);
      if (!(std::abs(E - E0) <= cfg.energy_guard * energy_scale)) {
        throw NumericalBlowup(fmt::format(
            "energy drift {:.3g} exceeds guard at step {} (t = {:.6g})", E - E0, step,
            step * cfg.dt));
      }
    }
    if (step % cfg.record_stride == 0) {
      traj.samples.push_back({static_cast<double>(step) * cfg.dt, s,
                              record_sample(m, s, V, thresholds)});
    }
  }
  return traj;
}

ConservationReport conservation_report(const Trajectory& traj, double band) {
  ConservationReport rep{};
  if (traj.samples.empty()) return rep;
  const SampleRecord& first = traj.samples.front().record;
  const double E0 = first.E;
  const double L0 = first.L.norm();
  for (const Sample& smp : traj.samples) {
    const SampleRecord& r = smp.record;
    const double dE = std::abs(r.E - E0);
    rep.max_rel_energy_drift = std::max(rep.max_rel_energy_drift, E0 != 0.0 ? dE / std::abs(E0) : dE);
    rep.max_angular_momentum_drift =
        std::max(rep.max_angular_momentum_drift, (r.L - first.L).lpNorm<Eigen::Infinity>());
    const double dL = std::abs(r.L.norm() - L0);
    rep.max_rel_angular_momentum_norm_drift =
        std::max(rep.max_rel_angular_momentum_norm_drift, L0 > 0.0 ? dL / L0 : dL);
    if (!r.branch) {
      ++rep.samples_undefined;
      continue;
    }
    const double dH = std::abs(r.H_reduced - r.E);
    if (r.sin_phi > band) {
      rep.max_H_minus_E_outside_band = std::max(rep.max_H_minus_E_outside_band, dH);
    } else {
      ++rep.samples_inside_band;
      rep.max_H_minus_E_inside_band = std::max(rep.max_H_minus_E_inside_band, dH);
    }
  }
  return rep;
}

std::vector<CollinearPassage> detect_collinear_passages(const Trajectory& traj,
                                                        const PotentialSpec& V,
                                                        double threshold,
                                                        const Thresholds& thresholds) {
  std::vector<CollinearPassage> out;
  const auto& smp = traj.samples;
  for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
    const double s0 = smp[i].record.sin_phi;
    const double sm = smp[i - 1].record.sin_phi;
    const double sp = smp[i + 1].record.sin_phi;
    if (!(s0 < threshold) || !(s0 <= sm) || !(s0 < sp)) continue;

    CollinearPassage p{};
    p.index = i;
    p.t_minus = smp[i - 1].t;
    p.t_plus = smp[i + 1].t;
    p.min_sin_phi = s0;

    const double a = smp[i].t - p.t_minus, b = smp[i].t - p.t_plus;
    const double den = a * (s0 - sp) - b * (s0 - sm);
    p.t_star = den != 0.0 ? smp[i].t - 0.5 * (a * a * (s0 - sp) - b * b * (s0 - sm)) / den
                          : smp[i].t;

    p.H_before = smp[i - 1].record.H_reduced;
    p.H_after = smp[i + 1].record.H_reduced;
    try {
      p.H_collinear =
          evaluate_reduced(traj.masses, smp[i].state, V, thresholds, Branch::Collinear).H;
    } catch (const Error&) {
      p.H_collinear = kNaN;
    }
    if (s0 > 0.0) {
      try {
        p.H_noncollinear =
            evaluate_reduced(traj.masses, smp[i].state, V, thresholds, Branch::Noncollinear).H;
      } catch (const Error&) {
      }
    }
    p.delta_H = std::max(std::abs(p.H_before - p.H_collinear), std::abs(p.H_after - p.H_collinear));
    out.push_back(p);
  }
  return out;
}

}  // namespace trireduce
