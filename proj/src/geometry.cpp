#include "trireduce/geometry.hpp"

#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "trireduce/errors.hpp"

namespace trireduce {

MassTriple::MassTriple(double m1, double m2, double m3) : m_{m1, m2, m3} {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(m_[i]) || !(m_[i] > 0.0)) {
      throw InvalidInput("mass m" + std::to_string(i + 1) +
                         " must be finite and strictly positive");
    }
  }
}

ReducedMasses reduced_masses(const MassTriple& m) {
  const double m13 = m.m1() + m.m3();
  return {m.m1() * m.m3() / m13, m.m2() * m13 / m.total()};
}

JacobiVectors jacobi_from_cartesian(const MassTriple& m, const CartesianState& s) {
  const ReducedMasses mu = reduced_masses(m);
  const double m13 = m.m1() + m.m3();
  const double a1 = std::sqrt(mu.mu1);
  const double a2 = std::sqrt(mu.mu2);

  const Vec3 c13 = (m.m1() * s.x[0] + m.m3() * s.x[2]) / m13;
  const Vec3 c13dot = (m.m1() * s.v[0] + m.m3() * s.v[2]) / m13;

  JacobiVectors j;
  j.s1 = a1 * (s.x[0] - s.x[2]);
  j.s2 = a2 * (s.x[1] - c13);
  j.sdot1 = a1 * (s.v[0] - s.v[2]);
  j.sdot2 = a2 * (s.v[1] - c13dot);
  return j;
}

namespace {

// Positions from (s1, s2) with the center of mass at the origin.
std::array<Vec3, 3> invert_jacobi(const MassTriple& m, const ReducedMasses& mu,
                                  const Vec3& s1, const Vec3& s2) {
  const double m13 = m.m1() + m.m3();
  const Vec3 d13 = s1 / std::sqrt(mu.mu1);    // x1 - x3
  const Vec3 d2c = s2 / std::sqrt(mu.mu2);    // x2 - c13
  const Vec3 c13 = -(m.m2() / m.total()) * d2c;
  return {c13 + (m.m3() / m13) * d13, c13 + d2c, c13 - (m.m1() / m13) * d13};
}

}  // namespace

CartesianState cartesian_from_jacobi(const MassTriple& m, const JacobiVectors& j) {
  const ReducedMasses mu = reduced_masses(m);
  CartesianState out;
  out.x = invert_jacobi(m, mu, j.s1, j.s2);
  out.v = invert_jacobi(m, mu, j.sdot1, j.sdot2);
  return out;
}

Vec3 spatial_angular_momentum(const JacobiVectors& j) {
  return j.s1.cross(j.sdot1) + j.s2.cross(j.sdot2);
}

Rotation rotation_from_euler(const EulerAngles& e) {
  const double ca = std::cos(e.alpha), sa = std::sin(e.alpha);
  const double cb = std::cos(e.beta), sb = std::sin(e.beta);
  const double cg = std::cos(e.gamma), sg = std::sin(e.gamma);

  Rotation R;
  R.col(0) << sb * ca, sb * sa, cb;
  R.col(1) << cb * ca * sg + sa * cg, cb * sa * sg - ca * cg, -sb * sg;
  R.col(2) << cb * ca * cg - sa * sg, cb * sa * cg + ca * sg, -sb * cg;
  return R;
}

BodyVectors body_vectors(const ShapeCoordinates& q) {
  const double c = std::cos(q.phi), s = std::sin(q.phi);
  BodyVectors b;
  b.r[0] = Vec3(q.r1, 0.0, 0.0);
  b.r[1] = Vec3(q.r2 * c, q.r2 * s, 0.0);
  b.d[0] = {Vec3(1.0, 0.0, 0.0), Vec3::Zero(), Vec3::Zero()};
  b.d[1] = {Vec3::Zero(), Vec3(c, s, 0.0), Vec3(-q.r2 * s, q.r2 * c, 0.0)};
  return b;
}

FrameFit body_frame_fit(const JacobiVectors& j, double collinear_threshold) {
  const double r1 = j.s1.norm();
  const double r2 = j.s2.norm();
  if (!(r1 > 0.0)) {
    throw DegenerateShape("|s1| = 0: particles 1 and 3 coincide");
  }
  if (!(r2 > 0.0)) {
    throw DegenerateShape("|s2| = 0: angle phi is undefined");
  }

  const Vec3 n = j.s1.cross(j.s2);
  const double cross = n.norm();
  const double phi = std::atan2(cross, j.s1.dot(j.s2));

  FrameFit fit;
  fit.shape = {r1, r2, phi};
  fit.sin_phi = cross / (r1 * r2);
  fit.collinear = !(fit.sin_phi > collinear_threshold);
  if (fit.collinear) {
    return fit;
  }

  const Vec3 u1 = j.s1 / r1;
  const Vec3 u3 = n / cross;
  const Vec3 u2 = u3.cross(u1);
  Rotation R;
  R.col(0) = u1;
  R.col(1) = u2;
  R.col(2) = u3;
  fit.rotation = R;
  return fit;
}

Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

Vec3 omega_from_rotation_rate(const Rotation& R, const Mat3& Rdot) {
  const Mat3 omega = R.transpose() * Rdot;
  const Mat3 w = 0.5 * (omega - omega.transpose());
  return Vec3(w(2, 1), w(0, 2), w(1, 0));
}

Vec3 omega_from_euler_rates(const EulerAngles& e, const Vec3& rates) {
  const double ad = rates.x(), bd = rates.y(), gd = rates.z();
  const double cb = std::cos(e.beta), sb = std::sin(e.beta);
  const double cg = std::cos(e.gamma), sg = std::sin(e.gamma);
  // omega_2 carries the opposite sign to the uncorrected chart because the
  // second body axis is reversed to make the frame right-handed.
  return Vec3(ad * cb + gd,
              -bd * cg - ad * sb * sg,
              bd * sg - ad * sb * cg);
}

PairDistances shape_to_distances(const MassTriple& m, const ShapeCoordinates& q) {
  const ReducedMasses mu = reduced_masses(m);
  const double m13 = m.m1() + m.m3();
  const Vec3 d13 = Vec3(q.r1, 0.0, 0.0) / std::sqrt(mu.mu1);
  const Vec3 d2c = Vec3(q.r2 * std::cos(q.phi), q.r2 * std::sin(q.phi), 0.0) /
                   std::sqrt(mu.mu2);
  return {(d2c - (m.m3() / m13) * d13).norm(), d13.norm(),
          (d2c + (m.m1() / m13) * d13).norm()};
}

}  // namespace trireduce
