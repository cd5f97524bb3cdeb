#pragma once

#include <array>
#include <optional>

#include "trireduce/types.hpp"

namespace trireduce {

/// Three strictly positive, finite particle masses.
class MassTriple {
 public:
  /// Throws InvalidInput unless every mass is finite and > 0.
  MassTriple(double m1, double m2, double m3);

  double m1() const { return m_[0]; }
  double m2() const { return m_[1]; }
  double m3() const { return m_[2]; }
  double operator[](int i) const { return m_[i]; }
  double total() const { return m_[0] + m_[1] + m_[2]; }

 private:
  std::array<double, 3> m_;
};

struct ReducedMasses {
  double mu1;
  double mu2;
};

/// Space-frame positions and velocities of the three bodies.
struct CartesianState {
  std::array<Vec3, 3> x;
  std::array<Vec3, 3> v;
};

/// Mass-weighted Jacobi vectors and their velocities (space frame).
struct JacobiVectors {
  Vec3 s1;
  Vec3 s2;
  Vec3 sdot1;
  Vec3 sdot2;
};

struct EulerAngles {
  double alpha;
  double beta;
  double gamma;
};

/// Internal coordinates: lengths of the Jacobi vectors and the angle
/// between them, phi in [0, pi].
struct ShapeCoordinates {
  double r1;
  double r2;
  double phi;
};

/// Body angular velocity and shape velocities (r1dot, r2dot, phidot).
struct BodyVelocityState {
  Vec3 omega;
  Vec3 qdot;
};

/// Body-frame Jacobi vectors r1 = (r1,0,0), r2 = (r2 cos phi, r2 sin phi, 0)
/// and their partials with respect to q = (r1, r2, phi).
struct BodyVectors {
  std::array<Vec3, 2> r;
  // d[i][mu] = d r_i / d q^mu
  std::array<std::array<Vec3, 3>, 2> d;
};

BodyVectors body_vectors(const ShapeCoordinates& q);

ReducedMasses reduced_masses(const MassTriple& m);

JacobiVectors jacobi_from_cartesian(const MassTriple& m, const CartesianState& s);

/// Inverse Jacobi map with the center of mass at rest at the origin.
CartesianState cartesian_from_jacobi(const MassTriple& m, const JacobiVectors& j);

/// L = s1 x sdot1 + s2 x sdot2.
Vec3 spatial_angular_momentum(const JacobiVectors& j);

/// Euler chart with u1 = (sin b cos a, sin b sin a, cos b). The chart is the
/// right-handed completion: u3 = u1 x u2 and at (0, 0, pi/2) the frame is
/// u1 = e3, u2 = e1, u3 = e2.
Rotation rotation_from_euler(const EulerAngles& e);

/// Result of fitting the body frame to a pair of Jacobi vectors.
struct FrameFit {
  ShapeCoordinates shape;
  // |s1 x s2| / (|s1||s2|)
  double sin_phi;
  bool collinear;
  // Empty when collinear: u2 is not fixed by the vectors alone.
  std::optional<Rotation> rotation;
};

/// u1 along s1, u2 in the s1-s2 plane with s2.u2 >= 0, u3 = u1 x u2.
/// Throws DegenerateShape when |s1| = 0 or |s2| = 0.
FrameFit body_frame_fit(const JacobiVectors& j, double collinear_threshold = 1e-8);

/// Extracts omega from Omega = R^T Rdot after antisymmetrizing.
Vec3 omega_from_rotation_rate(const Rotation& R, const Mat3& Rdot);

/// Closed form of R^T Rdot for the chart of rotation_from_euler.
Vec3 omega_from_euler_rates(const EulerAngles& e, const Vec3& rates);

struct PairDistances {
  double d12;
  double d13;
  double d23;
};

PairDistances shape_to_distances(const MassTriple& m, const ShapeCoordinates& q);

/// Skew matrix [w]x with [w]x v = w x v.
Mat3 skew(const Vec3& w);

}  // namespace trireduce
