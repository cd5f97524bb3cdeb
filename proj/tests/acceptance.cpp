// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/LU>
#include <fmt/format.h>

#include "support.hpp"
#include "trireduce/dynamics.hpp"
#include "trireduce/expression.hpp"
#include "trireduce/hamiltonian.hpp"
#include "trireduce/potential.hpp"
#include "trireduce/reduction.hpp"

using namespace trireduce;
using namespace testing;

namespace {

using LD = long double;
using Vec3L = Eigen::Matrix<LD, 3, 1>;
using Mat3L = Eigen::Matrix<LD, 3, 3>;

// Largest value, with NaN treated as the worst possible.
double worst_of(std::initializer_list<double> xs) {
  double w = -INFINITY;
  for (double x : xs) {
    if (std::isnan(x)) return x;
    w = std::max(w, x);
  }
  return w;
}

double worst_of(double a, double b) { return worst_of({a, b}); }

struct Outcome {
  bool passed;
  std::string detail;
};

Outcome below(const char* what, double worst, double tol) {
  return {worst < tol, fmt::format("{} worst={:.3e} tol={:.0e}", what, worst, tol)};
}

Outcome all_of(std::vector<Outcome> parts) {
  Outcome out{true, ""};
  for (const Outcome& p : parts) {
    out.passed = out.passed && p.passed;
    out.detail += (out.detail.empty() ? "" : "; ") + p.detail;
  }
  return out;
}

// Long-double body vectors, independent of the library.
std::array<Vec3L, 2> body_vectors_ld(LD r1, LD r2, LD phi) {
  return {Vec3L(r1, 0, 0), Vec3L(r2 * std::cos(phi), r2 * std::sin(phi), 0)};
}

LD rel_scale(const Mat3L& oracle) { return std::max<LD>(1, oracle.cwiseAbs().maxCoeff()); }

double mat_err(const Mat3& closed, const Mat3L& oracle) {
  return static_cast<double>((closed.cast<LD>() - oracle).cwiseAbs().maxCoeff() / rel_scale(oracle));
}

// 1. Euler chart lands in SO(3).
Outcome criterion_so3() {
  Rng rng(101);
  double worst = 0.0;
  for (int n = 0; n < 10000; ++n) {
    const Rotation R = rotation_from_euler(rng.euler());
    worst = worst_of({worst, max_abs(R.transpose() * R - Mat3::Identity()), std::abs(R.determinant() - 1.0)});
  }
  return below("orthogonality/det", worst, 1e-12);
}

// 2. Closed-form tensors against brute-force long-double assembly and inversion.
Outcome criterion_tensors() {
  Rng rng(102);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const ShapeCoordinates q = rng.shape(1e-3);
    const LD r1 = q.r1, r2 = q.r2, phi = q.phi;
    const auto r = body_vectors_ld(r1, r2, phi);
    Mat3L I;
    for (int k = 0; k < 3; ++k) {
      const Vec3L u = Vec3L::Unit(k);
      I.col(k) = r[0].cross(u.cross(r[0])) + r[1].cross(u.cross(r[1]));
    }
    const Mat3L Iinv = I.inverse();

    // a_mu by Richardson-extrapolated central differences of the body vectors.
    std::array<Vec3L, 3> a, A;
    const LD h = 1e-3L;
    for (int mu = 0; mu < 3; ++mu) {
      auto diff = [&](LD step) {
        std::array<LD, 3> p{r1, r2, phi}, m{r1, r2, phi};
        p[mu] += step;
        m[mu] -= step;
        const auto bp = body_vectors_ld(p[0], p[1], p[2]), bm = body_vectors_ld(m[0], m[1], m[2]);
        Vec3L out = Vec3L::Zero();
        for (int i = 0; i < 2; ++i) out += r[i].cross((bp[i] - bm[i]) / (2 * step));
        return out;
      };
      a[mu] = (4 * diff(h / 2) - diff(h)) / 3;
      A[mu] = Iinv * a[mu];
    }
    Mat3L hm = Mat3L::Zero();
    hm(0, 0) = 1;
    hm(1, 1) = 1;
    hm(2, 2) = r2 * r2;
    Mat3L g;
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu) g(mu, nu) = hm(mu, nu) - A[mu].dot(I * A[nu]);
    const Mat3L ginv = g.inverse();

    const auto ac = gauge_potential(q);
    const auto Ac = mechanical_connection(q);
    const HorizontalMetric hc = horizontal_metric(q);
    worst = worst_of({worst, mat_err(inertia_tensor(q), I), mat_err(inertia_inverse(q).matrix, Iinv),
                      mat_err(hc.g, g), mat_err(hc.g_inv, ginv)});
    for (int mu = 0; mu < 3; ++mu) {
      worst = worst_of(worst, static_cast<double>((ac[mu].cast<LD>() - a[mu]).cwiseAbs().maxCoeff() /
                                                  std::max<LD>(1, a[mu].norm())));
      worst = worst_of(worst, static_cast<double>((Ac[mu].cast<LD>() - A[mu]).cwiseAbs().maxCoeff()));
    }
  }
  return below("I, I^-1, a, A, g, g^-1", worst, 1e-10);
}

// 3. Reduced Hamiltonian against Cartesian K + V on states whose Jacobi
// velocities come from differentiating the rigid-plus-shape motion.
Outcome criterion_energy() {
  Rng rng(103);
  const MassTriple m(0.9, 1.7, 2.6);
  const PotentialSpec V = HarmonicPotential{1.3, {1.0, 1.5, 1.2}};
  double worst_H = 0.0, worst_forms = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const ShapeCoordinates q = rng.shape(1e-3);
    const BodyVelocityState w = rng.velocities();
    const Rotation R0 = rng.rotation();
    auto s_at = [&](double t, int i) {
      const Mat3 Rt = R0 * Eigen::AngleAxisd(t * w.omega.norm(), w.omega.normalized()).toRotationMatrix();
      const ShapeCoordinates qt{q.r1 + t * w.qdot[0], q.r2 + t * w.qdot[1], q.phi + t * w.qdot[2]};
      return Vec3(Rt * body_vectors(qt).r[i]);
    };
    auto sdot = [&](int i) {
      auto D = [&](double h) { return Vec3((s_at(h, i) - s_at(-h, i)) / (2 * h)); };
      const double h = 1e-3;
      return Vec3((4 * D(h / 2) - D(h)) / 3);
    };
    const CartesianState s = cartesian_from_jacobi(m, {s_at(0, 0), s_at(0, 1), sdot(0), sdot(1)});
    double K = 0.0;
    for (int i = 0; i < 3; ++i) K += 0.5 * m[i] * s.v[i].squaredNorm();
    const double E = K + eval_potential(V, context_from_positions(m, s.x));

    const double Vq = potential_at_shape(V, m, q);
    const BodyMomenta mom = shape_momenta(q, w);
    const double H = reduced_hamiltonian(q, mom, Vq);
    const double Hm = reduced_hamiltonian_matrix_form(q, mom, Vq);
    const ReducedEvaluation ev = evaluate_reduced(m, s, V);
    worst_H = worst_of({worst_H, rel_err(H, E), rel_err(ev.H, E)});
    worst_forms = worst_of(worst_forms, rel_err(Hm, H));
  }
  return all_of({below("H vs K+V", worst_H, 1e-10), below("matrix vs expanded", worst_forms, 1e-12)});
}

// 4. Order-two approach to H(0), and H(0) = K(0) + V.
Outcome criterion_collinear_limit() {
  Rng rng(104);
  double worst_slope = 0.0, worst_value = 0.0;
  bool monotone = true;
  for (int n = 0; n < 100; ++n) {
    const double r1 = rng.uniform(0.5, 2), r2 = rng.uniform(0.5, 2);
    BodyVelocityState w = rng.velocities();
    w.omega.x() = rng.uniform(0.5, 1.5);
    w.omega.y() = 0.0;
    const double V = rng.uniform(-1, 1);
    const BodyMomenta m0 = shape_momenta({r1, r2, 0.0}, w);
    const double H0 = collinear_hamiltonian(r1, r2, m0, V);

    // K(0) from the body velocities in long double; omega_1 has no
    // kinetic effect on the collinear shape.
    const auto b = body_vectors_ld(r1, r2, 0);
    const Vec3L om = w.omega.cast<LD>();
    const Vec3L v1 = om.cross(b[0]) + Vec3L(w.qdot[0], 0, 0);
    const Vec3L v2 = om.cross(b[1]) + Vec3L(w.qdot[1], static_cast<LD>(r2) * w.qdot[2], 0);
    const LD K0 = (v1.squaredNorm() + v2.squaredNorm()) / 2;
    worst_value = worst_of(worst_value, rel_err(H0, static_cast<double>(K0) + V));

    double prev = INFINITY;
    for (int k = 1; k <= 6; ++k) {
      const ShapeCoordinates q{r1, r2, std::pow(10.0, -k)};
      const double diff = std::abs(reduced_hamiltonian(q, shape_momenta(q, w), V) - H0);
      monotone = monotone && diff < prev;
      if (k > 1) worst_slope = worst_of(worst_slope, std::abs(std::log10(prev / diff) - 2.0));
      prev = diff;
    }
  }
  Outcome mono{monotone, monotone ? "monotone" : "not monotone"};
  return all_of({mono, below("|slope-2|", worst_slope, 0.2 + 1e-15), below("H(0) vs K(0)+V", worst_value, 1e-12)});
}

// 5. Singular term.
Outcome criterion_singular() {
  Rng rng(105);
  bool exact = true;
  for (int n = 0; n < 100; ++n) {
    const double r2 = rng.uniform(0.3, 2.5);
    const BodyVelocityState w = rng.velocities();
    exact = exact && singular_term({rng.uniform(0.3, 2.5), r2, 0.0}, w) == -r2 * r2 * w.omega.y();
  }
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const ShapeCoordinates q = rng.shape(0.1);
    const BodyVelocityState w = rng.velocities();
    const auto b = body_vectors_ld(q.r1, q.r2, q.phi);
    const Vec3L om = w.omega.cast<LD>();
    const Vec3L v2 = om.cross(b[1]) + Vec3L(std::cos(LD(q.phi)), std::sin(LD(q.phi)), 0) * w.qdot[1] +
                     Vec3L(-std::sin(LD(q.phi)), std::cos(LD(q.phi)), 0) * (LD(q.r2) * w.qdot[2]);
    const Vec3L v1 = om.cross(b[0]) + Vec3L(w.qdot[0], 0, 0);
    const LD J1 = (b[0].cross(v1) + b[1].cross(v2)).x();
    worst = worst_of(worst, rel_err(singular_term(q, w), static_cast<double>(J1 / std::sin(LD(q.phi)))));
  }
  Outcome ex{exact, exact ? "phi=0 exact" : "phi=0 not exact"};
  return all_of({ex, below("J1/sin(phi)", worst, 1e-12)});
}

CartesianState harmonic_state() {
  CartesianState s;
  s.x = {Vec3(1.0, 0.0, 0.0), Vec3(-0.5, 0.9, 0.1), Vec3(-0.5, -0.9, -0.1)};
  s.v = {Vec3(0.0, 0.4, 0.1), Vec3(-0.3, -0.2, 0.0), Vec3(0.3, -0.2, -0.1)};
  Vec3 P = Vec3::Zero();
  const MassTriple m(1.0, 1.5, 0.7);
  for (int i = 0; i < 3; ++i) P += m[i] * s.v[i];
  for (auto& v : s.v) v -= P / m.total();
  return s;
}

IntegratorConfig leapfrog(double dt, std::size_t steps, std::size_t stride) {
  IntegratorConfig c;
  c.dt = dt;
  c.steps = steps;
  c.record_stride = stride;
  return c;
}

// 6. Trajectory-level conservation and the crossing.
Outcome criterion_trajectory() {
  const MassTriple m(1.0, 1.5, 0.7);
  const PotentialSpec V = HarmonicPotential{1.0, {1.0, 1.2, 0.9}};
  const Trajectory t = integrate(m, harmonic_state(), V, leapfrog(1e-3, 10000, 10));
  const ConservationReport rep = conservation_report(t);

  const auto drift = [&](double dt) {
    return conservation_report(integrate(m, harmonic_state(), V,
                                         leapfrog(dt, static_cast<std::size_t>(std::lround(10.0 / dt)), 1)))
        .max_rel_energy_drift;
  };
  const double ratio = drift(0.02) / drift(0.01);

  const MassTriple mc(1.0, 1.3, 0.8);
  const CartesianState start = crossing_start(mc, V, 1e-3, 500);
  const Trajectory tc = integrate(mc, start, V, leapfrog(1e-3, 1000, 1));
  const auto passages = detect_collinear_passages(tc, V, 1e-3);
  double worst_cross = passages.empty() ? INFINITY : 0.0;
  for (const CollinearPassage& p : passages) worst_cross = worst_of(worst_cross, p.delta_H / std::abs(p.H_collinear));
  const ConservationReport crep = conservation_report(tc);

  Outcome r{ratio >= 3.0 && ratio <= 5.0, fmt::format("dt/2 drift ratio={:.3f} in [3,5]", ratio)};
  Outcome one{passages.size() == 1, fmt::format("passages={}", passages.size())};
  return all_of({below("|L| drift", rep.max_rel_angular_momentum_norm_drift, 1e-10), r,
                 below("|H-E| outside band", worst_of(rep.max_H_minus_E_outside_band, crep.max_H_minus_E_outside_band), 1e-8),
                 one, below("crossing |dH|/|H|", worst_cross, 1e-6)});
}

// 7. Rotated initial data.
Outcome criterion_equivariance() {
  const MassTriple m(1.0, 1.5, 0.7);
  const PotentialSpec V = HarmonicPotential{1.0, {1.0, 1.2, 0.9}};
  Rng rng(107);
  const Trajectory a = integrate(m, harmonic_state(), V, leapfrog(1e-3, 5000, 50));
  double worst_shape = 0.0, worst_H = 0.0;
  for (int n = 0; n < 10; ++n) {
    const Trajectory b = integrate(m, rotated(harmonic_state(), rng.rotation()), V, leapfrog(1e-3, 5000, 50));
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      const SampleRecord &x = a.samples[i].record, &y = b.samples[i].record;
      worst_shape = worst_of({worst_shape, std::abs(x.r1 - y.r1), std::abs(x.r2 - y.r2), std::abs(x.phi - y.phi)});
      worst_H = worst_of(worst_H, std::abs(x.H_reduced - y.H_reduced));
    }
  }
  return all_of({below("shape series", worst_shape, 1e-9), below("H series", worst_H, 1e-10)});
}

// 8. Parser corpus and forces.
Outcome criterion_parser() {
  std::ifstream in(TRIREDUCE_TEST_DATA "/potential_corpus.txt");
  std::size_t count = 0, failures = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    ++count;
    try {
      const ExprPtr a = parse_expression(line);
      const ExprPtr b = parse_expression(print_expression(*a));
      const ExprPtr c = parse_expression(print_expression(*b));
      if (!structurally_equal(*a, *b) || !structurally_equal(*b, *c)) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }

  Rng rng(108);
  const MassTriple m(1.0, 2.0, 0.5);
  const std::vector<PotentialSpec> specs = {
      GravityPotential{1.0}, HarmonicPotential{2.0, {1.0, 1.5, 1.2}}, LennardJonesPotential{0.5, 0.8},
      parse_potential("0.5*(r1 - 1)^2 + cos(phi) * r2^2 + exp(-d12)")};
  double worst_grad = 0.0, worst_balance = 0.0;
  for (int n = 0; n < 100; ++n) {
    const std::array<Vec3, 3> x = {rng.vec(1.5), rng.vec(1.5), rng.vec(1.5)};
    for (const PotentialSpec& spec : specs) {
      const auto F = forces_cartesian(spec, m, x);
      const double scale = worst_of({1.0, F[0].norm(), F[1].norm(), F[2].norm()});
      const Vec3 com = (m[0] * x[0] + m[1] * x[1] + m[2] * x[2]) / m.total();
      Vec3 sum = Vec3::Zero(), torque = Vec3::Zero();
      for (int i = 0; i < 3; ++i) {
        sum += F[i];
        torque += (x[i] - com).cross(F[i]);
      }
      worst_balance = worst_of({worst_balance, sum.norm() / scale, torque.norm() / scale});
      for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
          auto xp = x, xm = x;
          const double h = 1e-6;
          xp[i][k] += h;
          xm[i][k] -= h;
          const double fd = -(eval_potential(spec, context_from_positions(m, xp)) -
                              eval_potential(spec, context_from_positions(m, xm))) / (2 * h);
          worst_grad = worst_of(worst_grad, std::abs(fd - F[i][k]) / scale);
        }
      }
    }
  }
  Outcome corpus{count == 50 && failures == 0, fmt::format("corpus {}/{} round trip", count - failures, count)};
  return all_of({corpus, below("force vs gradient", worst_grad, 1e-6),
                 below("net force/torque", worst_balance, 1e-10)});
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"SO(3) chart", criterion_so3},
      {"tensor oracle", criterion_tensors},
      {"energy identity", criterion_energy},
      {"collinear limit", criterion_collinear_limit},
      {"singular term", criterion_singular},
      {"trajectory", criterion_trajectory},
      {"equivariance", criterion_equivariance},
      {"parser and forces", criterion_parser},
  };
  bool ok = true;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    fmt::print("{} criterion {}: {} ({})\n", o.passed ? "PASS" : "FAIL", index++, name, o.detail);
    ok = ok && o.passed;
  }
  return ok ? 0 : 1;
}
