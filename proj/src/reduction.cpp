#include "trireduce/reduction.hpp"

#include <cmath>
#include <string>

#include "trireduce/errors.hpp"

namespace trireduce {

Mat3 inertia_tensor(const ShapeCoordinates& q) {
  const double c = std::cos(q.phi), s = std::sin(q.phi);
  const double r1s = q.r1 * q.r1, r2s = q.r2 * q.r2;
  Mat3 I;
  I << r2s * s * s, -r2s * s * c, 0.0,
       -r2s * s * c, r1s + r2s * c * c, 0.0,
       0.0, 0.0, r1s + r2s;
  return I;
}

InertiaInverse inertia_inverse(const ShapeCoordinates& q, double singular, double band) {
  const double c = std::cos(q.phi), s = std::sin(q.phi);
  if (!(std::abs(s) > singular) || !(q.r1 > 0.0) || !(q.r2 > 0.0)) {
    throw SingularInertia("inertia tensor is singular at sin(phi) = " + std::to_string(s));
  }
  const double r1s = q.r1 * q.r1, r2s = q.r2 * q.r2;
  const double off = c / (r1s * s);
  Mat3 inv;
  inv << (r1s + r2s * c * c) / (r1s * r2s * s * s), off, 0.0,
         off, 1.0 / r1s, 0.0,
         0.0, 0.0, 1.0 / (r1s + r2s);
  return {inv, std::abs(s) > band};
}

Mat3 shape_metric(const ShapeCoordinates& q) {
  return Vec3(1.0, 1.0, q.r2 * q.r2).asDiagonal();
}

std::array<Vec3, 3> gauge_potential(const ShapeCoordinates& q) {
  return {Vec3::Zero(), Vec3::Zero(), Vec3(0.0, 0.0, q.r2 * q.r2)};
}

std::array<Vec3, 3> mechanical_connection(const ShapeCoordinates& q) {
  const double r1s = q.r1 * q.r1, r2s = q.r2 * q.r2;
  return {Vec3::Zero(), Vec3::Zero(), Vec3(0.0, 0.0, r2s / (r1s + r2s))};
}

HorizontalMetric horizontal_metric(const ShapeCoordinates& q) {
  const double r1s = q.r1 * q.r1, r2s = q.r2 * q.r2;
  HorizontalMetric hm;
  hm.g = Vec3(1.0, 1.0, r1s * r2s / (r1s + r2s)).asDiagonal();
  hm.g_inv = Vec3(1.0, 1.0, (r1s + r2s) / (r1s * r2s)).asDiagonal();
  return hm;
}

ReductionTensors reduction_tensors(const ShapeCoordinates& q) {
  const HorizontalMetric hm = horizontal_metric(q);
  return {inertia_tensor(q), shape_metric(q), gauge_potential(q),
          mechanical_connection(q), hm.g, hm.g_inv};
}

std::array<Vec3, 2> body_velocities(const ShapeCoordinates& q, const BodyVelocityState& w) {
  const BodyVectors b = body_vectors(q);
  std::array<Vec3, 2> v;
  for (int i = 0; i < 2; ++i) {
    v[i] = w.omega.cross(b.r[i]);
    for (int mu = 0; mu < 3; ++mu) {
      v[i] += b.d[i][mu] * w.qdot[mu];
    }
  }
  return v;
}

double kinetic_energy_body(const ShapeCoordinates& q, const BodyVelocityState& w) {
  const Mat3 I = inertia_tensor(q);
  const auto a = gauge_potential(q);
  const Mat3 h = shape_metric(q);
  double coupling = 0.0;
  for (int mu = 0; mu < 3; ++mu) {
    coupling += w.omega.dot(a[mu]) * w.qdot[mu];
  }
  return 0.5 * w.omega.dot(I * w.omega) + coupling + 0.5 * w.qdot.dot(h * w.qdot);
}

double kinetic_energy_compact(const ShapeCoordinates& q, const BodyVelocityState& w) {
  const Mat3 I = inertia_tensor(q);
  const auto A = mechanical_connection(q);
  const HorizontalMetric hm = horizontal_metric(q);
  Vec3 xi = w.omega;
  for (int mu = 0; mu < 3; ++mu) {
    xi += A[mu] * w.qdot[mu];
  }
  return 0.5 * xi.dot(I * xi) + 0.5 * w.qdot.dot(hm.g * w.qdot);
}

Vec3 body_angular_momentum(const ShapeCoordinates& q, const BodyVelocityState& w) {
  const auto a = gauge_potential(q);
  Vec3 J = inertia_tensor(q) * w.omega;
  for (int mu = 0; mu < 3; ++mu) {
    J += a[mu] * w.qdot[mu];
  }
  return J;
}

BodyMomenta shape_momenta(const ShapeCoordinates& q, const BodyVelocityState& w) {
  const auto a = gauge_potential(q);
  const Vec3 hq = shape_metric(q) * w.qdot;
  Vec3 p;
  for (int mu = 0; mu < 3; ++mu) {
    p[mu] = hq[mu] + w.omega.dot(a[mu]);
  }
  return {body_angular_momentum(q, w), p};
}

Vec3 shape_momenta_via_connection(const ShapeCoordinates& q, const BodyVelocityState& w) {
  const auto A = mechanical_connection(q);
  const Vec3 J = body_angular_momentum(q, w);
  const Vec3 gq = horizontal_metric(q).g * w.qdot;
  Vec3 p;
  for (int mu = 0; mu < 3; ++mu) {
    p[mu] = gq[mu] + J.dot(A[mu]);
  }
  return p;
}

BodyVelocityState velocities_from_momenta(const ShapeCoordinates& q, const BodyMomenta& m,
                                          double singular) {
  const InertiaInverse Iinv = inertia_inverse(q, singular);
  const auto A = mechanical_connection(q);
  const auto a = gauge_potential(q);
  const Mat3 g_inv = horizontal_metric(q).g_inv;

  Vec3 horizontal;
  for (int mu = 0; mu < 3; ++mu) {
    horizontal[mu] = m.p[mu] - m.J.dot(A[mu]);
  }
  BodyVelocityState w;
  w.qdot = g_inv * horizontal;
  Vec3 rigid = m.J;
  for (int mu = 0; mu < 3; ++mu) {
    rigid -= a[mu] * w.qdot[mu];
  }
  w.omega = Iinv.matrix * rigid;
  return w;
}

BodyVelocityState collinear_velocities_from_momenta(double r1, double r2,
                                                    const BodyMomenta& m) {
  const double r1s = r1 * r1, r2s = r2 * r2;
  BodyVelocityState w;
  const double omega3 = (m.J.z() - m.p.z()) / r1s;
  w.omega = Vec3(0.0, m.J.y() / (r1s + r2s), omega3);
  w.qdot = Vec3(m.p.x(), m.p.y(), (r1s + r2s) * m.p.z() / (r1s * r2s) - m.J.z() / r1s);
  return w;
}

}  // namespace trireduce
