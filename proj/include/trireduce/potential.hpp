#pragma once

#include <array>
#include <string>
#include <variant>

#include "trireduce/expression.hpp"
#include "trireduce/geometry.hpp"

namespace trireduce {

struct FreePotential {};

/// -G sum m_i m_j / d_ij
struct GravityPotential {
  double G = 1.0;
};

/// 1/2 k sum (d_ij - rest_ij)^2, rest ordered (12, 13, 23).
struct HarmonicPotential {
  double k = 1.0;
  std::array<double, 3> rest{1.0, 1.0, 1.0};
};

/// sum 4 eps ((sigma/d)^12 - (sigma/d)^6)
struct LennardJonesPotential {
  double epsilon = 1.0;
  double sigma = 1.0;
};

/// Parsed expression over r1, r2, phi, d12, d13, d23.
struct ExpressionPotential {
  ExprPtr ast;
  std::string source;
};

using PotentialSpec = std::variant<FreePotential, GravityPotential, HarmonicPotential,
                                   LennardJonesPotential, ExpressionPotential>;

/// Shape-level evaluation point. Distances are ordered (12, 13, 23).
struct EvalContext {
  double r1;
  double r2;
  double phi;
  std::array<double, 3> d;
  std::array<double, 3> masses;
};

EvalContext context_from_shape(const MassTriple& m, const ShapeCoordinates& q);
EvalContext context_from_positions(const MassTriple& m, const std::array<Vec3, 3>& x);

PotentialSpec parse_potential(const std::string& text);

/// Human-readable name of the family ("free", "gravity", ...).
std::string potential_name(const PotentialSpec& spec);

double eval_potential(const PotentialSpec& spec, const EvalContext& ctx);

/// Convenience: V at a shape point.
double potential_at_shape(const PotentialSpec& spec, const MassTriple& m,
                          const ShapeCoordinates& q);

/// F_i = -dV/dx_i. Analytic for the built-in families. Expressions are
/// differenced centrally in their six shape-level inputs and chained through
/// exact derivatives of those inputs, so total force and torque vanish to
/// rounding regardless of the difference error.
std::array<Vec3, 3> forces_cartesian(const PotentialSpec& spec, const MassTriple& m,
                                     const std::array<Vec3, 3>& x);

}  // namespace trireduce
