#include "trireduce/hamiltonian.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "trireduce/errors.hpp"

namespace trireduce {

const char* branch_name(Branch b) {
  return b == Branch::Collinear ? "collinear" : "noncollinear";
}

double reduced_hamiltonian(const ShapeCoordinates& q, const BodyMomenta& m, double V,
                           double collinear_threshold) {
  const double c = std::cos(q.phi), s = std::sin(q.phi);
  if (!(std::abs(s) > collinear_threshold)) {
    throw CollinearInput(fmt::format(
        "sin(phi) = {:.3g} is collinear; use the collinear Hamiltonian", s));
  }
  const double r1s = q.r1 * q.r1, r2s = q.r2 * q.r2, rr = r1s + r2s;
  const double J1 = m.J.x(), J2 = m.J.y(), J3 = m.J.z();
  const double shifted = m.p.z() - (r2s / rr) * J3;

  const double quadratic = (r1s + r2s * c * c) / (r1s * r2s * s * s) * J1 * J1 +
                           2.0 * c / (r1s * s) * J1 * J2 + J2 * J2 / r1s + J3 * J3 / rr +
                           m.p.x() * m.p.x() + m.p.y() * m.p.y() +
                           rr / (r1s * r2s) * shifted * shifted;
  return 0.5 * quadratic + V;
}

double reduced_hamiltonian_matrix_form(const ShapeCoordinates& q, const BodyMomenta& m,
                                       double V, double collinear_threshold) {
  const double s = std::sin(q.phi);
  if (!(std::abs(s) > collinear_threshold)) {
    throw CollinearInput(fmt::format(
        "sin(phi) = {:.3g} is collinear; use the collinear Hamiltonian", s));
  }
  const InertiaInverse Iinv = inertia_inverse(q, collinear_threshold);
  const auto A = mechanical_connection(q);
  const Mat3 g_inv = horizontal_metric(q).g_inv;
  Vec3 horizontal;
  for (int mu = 0; mu < 3; ++mu) {
    horizontal[mu] = m.p[mu] - m.J.dot(A[mu]);
  }
  return 0.5 * m.J.dot(Iinv.matrix * m.J) + 0.5 * horizontal.dot(g_inv * horizontal) + V;
}

double collinear_hamiltonian(double r1, double r2, const BodyMomenta& m, double V,
                             double alignment) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) {
    throw DegenerateShape("collinear Hamiltonian needs r1 > 0 and r2 > 0");
  }
  const double tol = alignment * m.J.norm();
  if (std::abs(m.J.x()) > tol || std::abs(m.J.y()) > tol) {
    throw MisalignedFrame(fmt::format(
        "J = ({:.6g}, {:.6g}, {:.6g}) is not aligned with the third body axis", m.J.x(),
        m.J.y(), m.J.z()));
  }
  const double r1s = r1 * r1, r2s = r2 * r2, rr = r1s + r2s;
  const double J3 = m.J.z();
  const double shifted = m.p.z() - (r2s / rr) * J3;
  return 0.5 * (J3 * J3 / rr + m.p.x() * m.p.x() + m.p.y() * m.p.y() +
                rr / (r1s * r2s) * shifted * shifted) +
         V;
}

double collinear_kinetic_energy(double r1, double r2, const BodyVelocityState& w) {
  const double r2s = r2 * r2;
  const double w2 = w.omega.y(), w3 = w.omega.z();
  const Vec3& qd = w.qdot;
  return 0.5 * (r1 * r1 + r2s) * (w2 * w2 + w3 * w3) + r2s * w3 * qd.z() +
         0.5 * qd.x() * qd.x() + 0.5 * qd.y() * qd.y() + 0.5 * r2s * qd.z() * qd.z();
}

double singular_term(const ShapeCoordinates& q, const BodyVelocityState& w) {
  const double r2s = q.r2 * q.r2;
  return r2s * w.omega.x() * std::sin(q.phi) - r2s * w.omega.y() * std::cos(q.phi);
}

Rotation align_collinear_frame(const JacobiVectors& j, double collinear_threshold) {
  const double r1 = j.s1.norm();
  if (!(r1 > 0.0)) {
    throw DegenerateShape("|s1| = 0: molecular line undefined");
  }
  const double r2 = j.s2.norm();
  if (r2 > 0.0) {
    const double sin_phi = j.s1.cross(j.s2).norm() / (r1 * r2);
    if (sin_phi > collinear_threshold) {
      throw NotCollinear(fmt::format("sin(phi) = {:.3g} exceeds collinear threshold", sin_phi));
    }
  }
  const Vec3 u1 = j.s1 / r1;
  const Vec3 L = spatial_angular_momentum(j);
  const Vec3 L_perp = L - L.dot(u1) * u1;
  const double scale = r1 * j.sdot1.norm() + r2 * j.sdot2.norm();
  if (!(L_perp.norm() > 1e-12 * scale)) {
    throw ZeroAngularMomentum(
        "angular momentum vanishes at a collinear configuration; body frame is not fixed");
  }
  const Vec3 u3 = L_perp.normalized();
  Rotation R;
  R.col(0) = u1;
  R.col(1) = u3.cross(u1);
  R.col(2) = u3;
  return R;
}

namespace {

// p_mu = sum_i v_i . d r_i / d q^mu with body velocities v_i = R^T sdot_i.
Vec3 momenta_from_body(const ShapeCoordinates& q, const std::array<Vec3, 2>& v) {
  const BodyVectors b = body_vectors(q);
  Vec3 p;
  for (int mu = 0; mu < 3; ++mu) {
    p[mu] = v[0].dot(b.d[0][mu]) + v[1].dot(b.d[1][mu]);
  }
  return p;
}

}  // namespace

ReducedEvaluation evaluate_reduced(const MassTriple& masses, const CartesianState& state,
                                   const PotentialSpec& potential,
                                   const Thresholds& thresholds, std::optional<Branch> force) {
  const JacobiVectors j = jacobi_from_cartesian(masses, state);
  FrameFit fit = body_frame_fit(j, thresholds.collinear);

  ReducedEvaluation out{};
  out.branch = force.value_or(fit.collinear ? Branch::Collinear : Branch::Noncollinear);
  out.q = fit.shape;
  out.sin_phi = fit.sin_phi;
  out.V = potential_at_shape(potential, masses, fit.shape);
  const Vec3 L = spatial_angular_momentum(j);

  if (out.branch == Branch::Noncollinear) {
    if (!fit.rotation) {
      fit = body_frame_fit(j, 0.0);
      if (!fit.rotation) {
        throw CollinearInput("exactly collinear state has no noncollinear body frame");
      }
    }
    const Rotation& R = *fit.rotation;
    out.frame = R;
    out.momenta.J = R.transpose() * L;
    out.momenta.p = momenta_from_body(out.q, {R.transpose() * j.sdot1, R.transpose() * j.sdot2});
    out.H = reduced_hamiltonian(out.q, out.momenta, out.V, 0.0);
    out.velocities = velocities_from_momenta(out.q, out.momenta, 0.0);
    out.singular_term = singular_term(out.q, out.velocities);
    out.conditioning_warning = !(fit.sin_phi > thresholds.band);
    return out;
  }

  const double accept = force ? std::numeric_limits<double>::infinity() : thresholds.collinear;
  const Rotation R = align_collinear_frame(j, accept);
  out.frame = R;
  const ShapeCoordinates line{fit.shape.r1, fit.shape.r2,
                              fit.shape.phi < 0.5 * std::numbers::pi ? 0.0 : std::numbers::pi};
  const Vec3 J = R.transpose() * L;
  out.alignment_residual = std::abs(J.x()) / L.norm();
  out.momenta.J = Vec3(0.0, J.y(), J.z());
  out.momenta.p = momenta_from_body(line, {R.transpose() * j.sdot1, R.transpose() * j.sdot2});
  out.H = collinear_hamiltonian(line.r1, line.r2, out.momenta, out.V, thresholds.alignment);
  out.velocities = collinear_velocities_from_momenta(line.r1, line.r2, out.momenta);
  out.singular_term = singular_term(line, out.velocities);
  out.conditioning_warning = false;
  const double kinetic = 0.5 * (j.sdot1.squaredNorm() + j.sdot2.squaredNorm());
  out.collinear_residual = kinetic - (out.H - out.V);
  return out;
}

}  // namespace trireduce
