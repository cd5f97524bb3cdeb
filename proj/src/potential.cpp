#include "trireduce/potential.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace trireduce {

namespace {

constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

VariableValues variables_of(const EvalContext& ctx) {
  return {ctx.r1, ctx.r2, ctx.phi, ctx.d[0], ctx.d[1], ctx.d[2]};
}

void require_separated(const EvalContext& ctx, const char* family) {
  for (int k = 0; k < 3; ++k) {
    if (!(ctx.d[k] > 0.0)) {
      throw DomainError(fmt::format("{} potential at zero separation d{}{}", family,
                                    kPairs[k][0] + 1, kPairs[k][1] + 1),
                        ctx.d[k]);
    }
  }
}

// dV/dd_ij for the distance-based built-in families.
std::array<double, 3> distance_gradient(const PotentialSpec& spec, const EvalContext& ctx) {
  return std::visit(
      overloaded{
          [](const FreePotential&) { return std::array<double, 3>{0.0, 0.0, 0.0}; },
          [&](const GravityPotential& g) {
            require_separated(ctx, "gravity");
            std::array<double, 3> out;
            for (int k = 0; k < 3; ++k) {
              const double mm = ctx.masses[kPairs[k][0]] * ctx.masses[kPairs[k][1]];
              out[k] = g.G * mm / (ctx.d[k] * ctx.d[k]);
            }
            return out;
          },
          [&](const HarmonicPotential& h) {
            std::array<double, 3> out;
            for (int k = 0; k < 3; ++k) out[k] = h.k * (ctx.d[k] - h.rest[k]);
            return out;
          },
          [&](const LennardJonesPotential& lj) {
            require_separated(ctx, "lennard-jones");
            std::array<double, 3> out;
            for (int k = 0; k < 3; ++k) {
              const double sr6 = std::pow(lj.sigma / ctx.d[k], 6);
              out[k] = 4.0 * lj.epsilon * (-12.0 * sr6 * sr6 + 6.0 * sr6) / ctx.d[k];
            }
            return out;
          },
          [](const ExpressionPotential&) { return std::array<double, 3>{0.0, 0.0, 0.0}; },
      },
      spec);
}

// Central differences of the expression in each of its six inputs.
VariableValues expression_gradient(const ExpressionPotential& e, const EvalContext& ctx) {
  const VariableValues base = variables_of(ctx);
  const double length = std::max({ctx.r1, ctx.r2, ctx.d[0], ctx.d[1], ctx.d[2]});
  VariableValues grad{};
  for (int k = 0; k < kVariableCount; ++k) {
    const double h = 1e-6 * (k == static_cast<int>(Variable::Phi) ? 1.0 : length);
    VariableValues plus = base, minus = base;
    plus[k] += h;
    minus[k] -= h;
    grad[k] = (evaluate_expression(*e.ast, plus) - evaluate_expression(*e.ast, minus)) / (2.0 * h);
  }
  return grad;
}

}  // namespace

EvalContext context_from_shape(const MassTriple& m, const ShapeCoordinates& q) {
  const PairDistances d = shape_to_distances(m, q);
  return {q.r1, q.r2, q.phi, {d.d12, d.d13, d.d23}, {m.m1(), m.m2(), m.m3()}};
}

EvalContext context_from_positions(const MassTriple& m, const std::array<Vec3, 3>& x) {
  CartesianState s;
  s.x = x;
  s.v = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  const JacobiVectors j = jacobi_from_cartesian(m, s);
  EvalContext ctx;
  ctx.r1 = j.s1.norm();
  ctx.r2 = j.s2.norm();
  ctx.phi = std::atan2(j.s1.cross(j.s2).norm(), j.s1.dot(j.s2));
  for (int k = 0; k < 3; ++k) ctx.d[k] = (x[kPairs[k][0]] - x[kPairs[k][1]]).norm();
  ctx.masses = {m.m1(), m.m2(), m.m3()};
  return ctx;
}

PotentialSpec parse_potential(const std::string& text) {
  return ExpressionPotential{parse_expression(text), text};
}

std::string potential_name(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const FreePotential&) { return std::string("free"); },
                        [](const GravityPotential&) { return std::string("gravity"); },
                        [](const HarmonicPotential&) { return std::string("harmonic"); },
                        [](const LennardJonesPotential&) { return std::string("lennard_jones"); },
                        [](const ExpressionPotential&) { return std::string("expression"); },
                    },
                    spec);
}

double eval_potential(const PotentialSpec& spec, const EvalContext& ctx) {
  return std::visit(
      overloaded{
          [](const FreePotential&) { return 0.0; },
          [&](const GravityPotential& g) {
            require_separated(ctx, "gravity");
            double v = 0.0;
            for (int k = 0; k < 3; ++k) {
              v -= g.G * ctx.masses[kPairs[k][0]] * ctx.masses[kPairs[k][1]] / ctx.d[k];
            }
            return v;
          },
          [&](const HarmonicPotential& h) {
            double v = 0.0;
            for (int k = 0; k < 3; ++k) {
              const double stretch = ctx.d[k] - h.rest[k];
              v += 0.5 * h.k * stretch * stretch;
            }
            return v;
          },
          [&](const LennardJonesPotential& lj) {
            require_separated(ctx, "lennard-jones");
            double v = 0.0;
            for (int k = 0; k < 3; ++k) {
              const double sr6 = std::pow(lj.sigma / ctx.d[k], 6);
              v += 4.0 * lj.epsilon * (sr6 * sr6 - sr6);
            }
            return v;
          },
          [&](const ExpressionPotential& e) {
            return evaluate_expression(*e.ast, variables_of(ctx));
          },
      },
      spec);
}

double potential_at_shape(const PotentialSpec& spec, const MassTriple& m,
                          const ShapeCoordinates& q) {
  return eval_potential(spec, context_from_shape(m, q));
}

std::array<Vec3, 3> forces_cartesian(const PotentialSpec& spec, const MassTriple& m,
                                     const std::array<Vec3, 3>& x) {
  const EvalContext ctx = context_from_positions(m, x);
  std::array<Vec3, 3> grad = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};

  std::array<double, 3> dV_dd{};
  double dV_dr1 = 0.0, dV_dr2 = 0.0, dV_dphi = 0.0;
  if (const auto* e = std::get_if<ExpressionPotential>(&spec)) {
    const VariableValues g = expression_gradient(*e, ctx);
    dV_dr1 = g[0];
    dV_dr2 = g[1];
    dV_dphi = g[2];
    dV_dd = {g[3], g[4], g[5]};
  } else {
    dV_dd = distance_gradient(spec, ctx);
  }

  for (int k = 0; k < 3; ++k) {
    if (dV_dd[k] == 0.0) continue;
    const int i = kPairs[k][0], j = kPairs[k][1];
    if (!(ctx.d[k] > 0.0)) {
      throw DomainError(fmt::format("distance gradient at zero separation d{}{}", i + 1, j + 1),
                        ctx.d[k]);
    }
    const Vec3 dir = (x[i] - x[j]) / ctx.d[k];
    grad[i] += dV_dd[k] * dir;
    grad[j] -= dV_dd[k] * dir;
  }

  if (dV_dr1 != 0.0 || dV_dr2 != 0.0 || dV_dphi != 0.0) {
    // Gradients with respect to the Jacobi vectors, pulled back through the
    // linear Jacobi map.
    const ReducedMasses mu = reduced_masses(m);
    const double m13 = m.m1() + m.m3();
    const double a1 = std::sqrt(mu.mu1), a2 = std::sqrt(mu.mu2);
    const Vec3 s1 = a1 * (x[0] - x[2]);
    const Vec3 s2 = a2 * (x[1] - (m.m1() * x[0] + m.m3() * x[2]) / m13);

    Vec3 g1 = Vec3::Zero(), g2 = Vec3::Zero();
    if (dV_dr1 != 0.0) {
      if (!(ctx.r1 > 0.0)) throw DomainError("gradient of r1 at r1 = 0", ctx.r1);
      g1 += dV_dr1 * s1 / ctx.r1;
    }
    if (dV_dr2 != 0.0) {
      if (!(ctx.r2 > 0.0)) throw DomainError("gradient of r2 at r2 = 0", ctx.r2);
      g2 += dV_dr2 * s2 / ctx.r2;
    }
    if (dV_dphi != 0.0) {
      if (!(ctx.r1 > 0.0) || !(ctx.r2 > 0.0)) {
        throw DomainError("gradient of phi with a vanishing Jacobi vector", 0.0);
      }
      const Vec3 e1 = s1 / ctx.r1, e2 = s2 / ctx.r2;
      const Vec3 n1 = e2 - e1.dot(e2) * e1;
      const Vec3 n2 = e1 - e1.dot(e2) * e2;
      // phi has a kink at collinearity; the one-sided direction is undefined
      // there and the phi contribution is dropped.
      if (n1.norm() > 0.0 && n2.norm() > 0.0) {
        g1 -= dV_dphi * n1.normalized() / ctx.r1;
        g2 -= dV_dphi * n2.normalized() / ctx.r2;
      }
    }
    grad[0] += a1 * g1 - a2 * (m.m1() / m13) * g2;
    grad[1] += a2 * g2;
    grad[2] += -a1 * g1 - a2 * (m.m3() / m13) * g2;
  }

  return {-grad[0], -grad[1], -grad[2]};
}

}  // namespace trireduce
