#pragma once

#include <array>

#include "trireduce/geometry.hpp"
#include "trireduce/types.hpp"

namespace trireduce {

/// Shape-dependent tensors of the rotational reduction at one shape point.
/// Index order for the shape coordinates is (r1, r2, phi).
struct ReductionTensors {
  Mat3 inertia;
  Mat3 shape_metric;
  std::array<Vec3, 3> gauge;
  std::array<Vec3, 3> connection;
  Mat3 horizontal_metric;
  Mat3 horizontal_metric_inv;
};

/// Body angular momentum J and the momenta p conjugate to (r1, r2, phi).
struct BodyMomenta {
  Vec3 J;
  Vec3 p;
};

struct InertiaInverse {
  Mat3 matrix;
  // False when sin(phi) lies inside the conditioning band; the inverse is
  // still returned but its 2x2 block has lost roughly log10(1/sin^2) digits.
  bool well_conditioned;
};

Mat3 inertia_tensor(const ShapeCoordinates& q);

/// Closed-form inverse. Throws SingularInertia when |sin phi| <= singular.
InertiaInverse inertia_inverse(const ShapeCoordinates& q, double singular = 1e-8,
                               double band = 1e-3);

/// h = diag(1, 1, r2^2).
Mat3 shape_metric(const ShapeCoordinates& q);

/// a_r1 = a_r2 = 0, a_phi = (0, 0, r2^2).
std::array<Vec3, 3> gauge_potential(const ShapeCoordinates& q);

/// A_mu = I^-1 a_mu in closed form; finite for every r1, r2 > 0.
std::array<Vec3, 3> mechanical_connection(const ShapeCoordinates& q);

struct HorizontalMetric {
  Mat3 g;
  Mat3 g_inv;
};

/// g = h - A^T I A and its inverse, both diagonal.
HorizontalMetric horizontal_metric(const ShapeCoordinates& q);

ReductionTensors reduction_tensors(const ShapeCoordinates& q);

/// v_i = omega x r_i + sum_mu (d r_i / d q^mu) qdot^mu.
std::array<Vec3, 2> body_velocities(const ShapeCoordinates& q, const BodyVelocityState& w);

/// K = 1/2 w^T I w + sum (w . a_mu) qdot^mu + 1/2 h(qdot, qdot).
double kinetic_energy_body(const ShapeCoordinates& q, const BodyVelocityState& w);

/// 1/2 (w + A qdot)^T I (w + A qdot) + 1/2 g(qdot, qdot).
double kinetic_energy_compact(const ShapeCoordinates& q, const BodyVelocityState& w);

/// J = I w + a_phi phidot.
Vec3 body_angular_momentum(const ShapeCoordinates& q, const BodyVelocityState& w);

/// p_mu = h_mu,nu qdot^nu + w . a_mu, together with J.
BodyMomenta shape_momenta(const ShapeCoordinates& q, const BodyVelocityState& w);

/// p_mu = g_mu,nu qdot^nu + J . A_mu. Same value as shape_momenta by a
/// different algebraic route.
Vec3 shape_momenta_via_connection(const ShapeCoordinates& q, const BodyVelocityState& w);

/// Inverse Legendre map away from collinearity. Throws SingularInertia when
/// |sin phi| <= singular.
BodyVelocityState velocities_from_momenta(const ShapeCoordinates& q, const BodyMomenta& m,
                                          double singular = 1e-8);

/// Inverse Legendre map on a collinear shape (phi = 0 or pi). Rotation about
/// the molecular line carries no energy, so omega_1 is returned as 0.
BodyVelocityState collinear_velocities_from_momenta(double r1, double r2,
                                                    const BodyMomenta& m);

}  // namespace trireduce
