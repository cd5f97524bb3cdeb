#pragma once

#include <optional>

#include "trireduce/geometry.hpp"
#include "trireduce/potential.hpp"
#include "trireduce/reduction.hpp"
#include "trireduce/types.hpp"

namespace trireduce {

enum class Branch { Noncollinear, Collinear };

const char* branch_name(Branch b);

/// Reduced Hamiltonian in Jacobi shape coordinates, expanded form.
/// Throws CollinearInput when |sin phi| <= collinear_threshold.
double reduced_hamiltonian(const ShapeCoordinates& q, const BodyMomenta& m, double V,
                           double collinear_threshold = 1e-8);

/// 1/2 J^T I^-1 J + 1/2 g^{mu nu} (p_mu - J.A_mu)(p_nu - J.A_nu) + V, assembled
/// from the reduction tensors.
double reduced_hamiltonian_matrix_form(const ShapeCoordinates& q, const BodyMomenta& m,
                                       double V, double collinear_threshold = 1e-8);

/// Value of the reduced Hamiltonian on a collinear shape in a frame with
/// u3 along L. Throws MisalignedFrame if |J1| or |J2| exceeds
/// alignment * |J|.
double collinear_hamiltonian(double r1, double r2, const BodyMomenta& m, double V,
                             double alignment = 1e-9);

/// Kinetic energy on a collinear shape:
/// 1/2 (r1^2 + r2^2)(w2^2 + w3^2) + r2^2 w3 phidot + 1/2 |qdot|_h^2.
double collinear_kinetic_energy(double r1, double r2, const BodyVelocityState& w);

/// J1 / sin(phi), evaluated as r2^2 (w1 sin phi - w2 cos phi), which stays
/// finite through phi = 0.
double singular_term(const ShapeCoordinates& q, const BodyVelocityState& w);

/// Body frame on a collinear configuration: u1 along s1, u3 along L,
/// u2 = u3 x u1. Throws NotCollinear, DegenerateShape or ZeroAngularMomentum.
Rotation align_collinear_frame(const JacobiVectors& j, double collinear_threshold = 1e-8);

struct ReducedEvaluation {
  Branch branch;
  double H;
  double V;
  ShapeCoordinates q;
  BodyMomenta momenta;
  // Body velocities recovered from the momenta (omega_1 = 0 on the
  // collinear branch).
  BodyVelocityState velocities;
  Rotation frame;
  double sin_phi;
  double singular_term;
  // Set when 0 < sin(phi) <= band on the noncollinear branch.
  bool conditioning_warning;
  // Collinear branch only: |L . u1| / |L|, the part of J dropped when the
  // state is declared collinear.
  double alignment_residual;
  // Collinear branch only: Jacobi kinetic energy minus (H - V). Nonzero when
  // the two transverse Jacobi velocities leave the plane spanned by the
  // molecular line and L, which the collinear chart cannot represent.
  double collinear_residual;
};

/// Fits the body frame and evaluates the reduced Hamiltonian on the branch
/// selected by sin(phi). `force` overrides the dispatch; forcing the
/// collinear branch projects a nearly collinear state onto the collinear
/// chart.
ReducedEvaluation evaluate_reduced(const MassTriple& masses, const CartesianState& state,
                                   const PotentialSpec& potential,
                                   const Thresholds& thresholds = {},
                                   std::optional<Branch> force = std::nullopt);

}  // namespace trireduce
