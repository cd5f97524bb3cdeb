#include "trireduce/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/LU>

#include "trireduce/dynamics.hpp"
#include "trireduce/expression.hpp"
#include "trireduce/geometry.hpp"
#include "trireduce/hamiltonian.hpp"
#include "trireduce/potential.hpp"
#include "trireduce/reduction.hpp"

namespace trireduce {

namespace {

constexpr double kPi = std::numbers::pi;

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

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vec3 vec(double scale = 1.0) {
    return Vec3(uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale));
  }

  EulerAngles euler() { return {uniform(0.0, 2 * kPi), uniform(0.0, kPi), uniform(0.0, 2 * kPi)}; }

  ShapeCoordinates shape(double min_sin = 1e-3) {
    while (true) {
      ShapeCoordinates q{uniform(0.3, 2.5), uniform(0.3, 2.5), uniform(0.0, kPi)};
      if (std::sin(q.phi) > min_sin) return q;
    }
  }

  BodyVelocityState velocities() { return {vec(), vec()}; }

 private:
  std::mt19937_64 rng_;
};

double rel(double a, double b) { return std::abs(a - b) / worst_of(1.0, std::abs(b)); }

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

// Inertia tensor from I u = sum r_i x (u x r_i), one basis vector at a time.
Mat3 assembled_inertia(const ShapeCoordinates& q) {
  const BodyVectors b = body_vectors(q);
  Mat3 I;
  for (int k = 0; k < 3; ++k) {
    const Vec3 u = Vec3::Unit(k);
    I.col(k) = b.r[0].cross(u.cross(b.r[0])) + b.r[1].cross(u.cross(b.r[1]));
  }
  return I;
}

double suite_so3(Sampler& rng) {
  double worst = 0.0;
  for (int n = 0; n < 10000; ++n) {
    const Rotation R = rotation_from_euler(rng.euler());
    worst = worst_of({worst, max_abs(R.transpose() * R - Mat3::Identity()),
                      std::abs(R.determinant() - 1.0)});
  }
  return worst;
}

double suite_frame_fit(Sampler& rng) {
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    JacobiVectors j{rng.vec(), rng.vec(), rng.vec(), rng.vec()};
    const Rotation Q = rotation_from_euler(rng.euler());
    const FrameFit a = body_frame_fit(j);
    JacobiVectors jq{Q * j.s1, Q * j.s2, Q * j.sdot1, Q * j.sdot2};
    const FrameFit b = body_frame_fit(jq);
    if (!a.rotation || !b.rotation) continue;
    const ShapeCoordinates& q = a.shape;
    const Vec3 r2(q.r2 * std::cos(q.phi), q.r2 * std::sin(q.phi), 0.0);
    worst = worst_of({worst, std::abs(a.shape.r1 - b.shape.r1), std::abs(a.shape.r2 - b.shape.r2),
                      std::abs(a.shape.phi - b.shape.phi), max_abs(*b.rotation - Q * *a.rotation),
                      (*a.rotation * Vec3(q.r1, 0, 0) - j.s1).norm(),
                      (*a.rotation * r2 - j.s2).norm()});
  }
  return worst;
}

double suite_euler_rates(Sampler& rng) {
  double worst = 0.0;
  const double h = 1e-5;
  for (int n = 0; n < 1000; ++n) {
    EulerAngles e = rng.euler();
    e.beta = rng.uniform(0.1, kPi - 0.1);
    const Vec3 rates = rng.vec();
    auto at = [&](double t) {
      return rotation_from_euler({e.alpha + t * rates[0], e.beta + t * rates[1], e.gamma + t * rates[2]});
    };
    const Mat3 Rdot = (at(h) - at(-h)) / (2 * h);
    const Vec3 fd = omega_from_rotation_rate(at(0.0), Rdot);
    worst = worst_of(worst, (fd - omega_from_euler_rates(e, rates)).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

double suite_inertia(Sampler& rng) {
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const ShapeCoordinates q = rng.shape();
    const Mat3 I = inertia_tensor(q);
    const Mat3 Iinv = inertia_inverse(q).matrix;
    const Eigen::Matrix3<long double> oracle = I.cast<long double>().inverse();
    const double scale = max_abs(Iinv);
    worst = worst_of({worst, max_abs(I - assembled_inertia(q)) / max_abs(I),
                      max_abs(I * Iinv - Mat3::Identity()),
                      static_cast<double>((Iinv.cast<long double>() - oracle).cwiseAbs().maxCoeff()) / scale});
  }
  return worst;
}

double suite_connection(Sampler& rng) {
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const ShapeCoordinates q = rng.shape();
    const Mat3 I = inertia_tensor(q);
    const Mat3 Iinv = inertia_inverse(q).matrix;
    const auto a = gauge_potential(q);
    const auto A = mechanical_connection(q);
    const Mat3 h = shape_metric(q);
    const HorizontalMetric hm = horizontal_metric(q);
    Mat3 g;
    for (int mu = 0; mu < 3; ++mu) {
      worst = worst_of(worst, (Iinv * a[mu] - A[mu]).norm());
      for (int nu = 0; nu < 3; ++nu) g(mu, nu) = h(mu, nu) - A[mu].dot(I * A[nu]);
    }
    worst = worst_of({worst, max_abs(g - hm.g) / max_abs(h), max_abs(hm.g * hm.g_inv - Mat3::Identity())});
  }
  return worst;
}

double suite_kinetic(Sampler& rng) {
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const ShapeCoordinates q = rng.shape();
    const BodyVelocityState w = rng.velocities();
    const auto v = body_velocities(q, w);
    const double direct = 0.5 * (v[0].squaredNorm() + v[1].squaredNorm());
    worst = worst_of({worst, rel(kinetic_energy_body(q, w), direct),
                      rel(kinetic_energy_compact(q, w), direct),
                      (body_angular_momentum(q, w) - (body_vectors(q).r[0].cross(v[0]) +
                                                      body_vectors(q).r[1].cross(v[1]))).norm()});
  }
  return worst;
}

double suite_legendre(Sampler& rng) {
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const ShapeCoordinates q = rng.shape(0.05);
    const BodyVelocityState w = rng.velocities();
    const BodyMomenta m = shape_momenta(q, w);
    const BodyVelocityState back = velocities_from_momenta(q, m);
    const double V = rng.uniform(-1.0, 1.0);
    const double K = kinetic_energy_body(q, w);
    worst = worst_of({worst, (m.p - shape_momenta_via_connection(q, w)).norm(),
                      (back.omega - w.omega).norm(), (back.qdot - w.qdot).norm(),
                      rel(reduced_hamiltonian(q, m, V), K + V),
                      rel(reduced_hamiltonian_matrix_form(q, m, V), reduced_hamiltonian(q, m, V))});
  }
  return worst;
}

// Pure rotation about u1 (omega_2 = 0) on a family approaching phi = 0.
template <typename F>
double over_collinear_families(Sampler& rng, F&& visit) {
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    const double r1 = rng.uniform(0.5, 2.0), r2 = rng.uniform(0.5, 2.0);
    BodyVelocityState w = rng.velocities();
    w.omega.x() = rng.uniform(0.5, 1.5);
    w.omega.y() = 0.0;
    const double V = rng.uniform(-1.0, 1.0);
    const double H0 = collinear_hamiltonian(r1, r2, shape_momenta({r1, r2, 0.0}, w), V);
    worst = worst_of(worst, visit(r1, r2, w, V, H0));
  }
  return worst;
}

double suite_collinear_value(Sampler& rng) {
  return over_collinear_families(rng, [](double r1, double r2, const BodyVelocityState& w,
                                         double V, double H0) {
    return rel(H0, collinear_kinetic_energy(r1, r2, w) + V);
  });
}

double suite_collinear_order(Sampler& rng) {
  return over_collinear_families(rng, [](double r1, double r2, const BodyVelocityState& w,
                                         double V, double H0) {
    double worst = 0.0, prev = 0.0;
    for (int k = 1; k <= 6; ++k) {
      const ShapeCoordinates q{r1, r2, std::pow(10.0, -k)};
      const double diff = std::abs(reduced_hamiltonian(q, shape_momenta(q, w), V) - H0);
      if (k > 1) worst = worst_of(worst, std::abs(std::log10(prev / diff) - 2.0));
      prev = diff;
    }
    return worst;
  });
}

double suite_singular_term(Sampler& rng) {
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const double r2 = rng.uniform(0.3, 2.5);
    const BodyVelocityState w = rng.velocities();
    worst = worst_of(worst, std::abs(singular_term({1.0, r2, 0.0}, w) + r2 * r2 * w.omega.y()));
    ShapeCoordinates q = rng.shape(0.1);
    const double J1 = body_angular_momentum(q, w).x();
    worst = worst_of(worst, rel(singular_term(q, w), J1 / std::sin(q.phi)));
  }
  return worst;
}

double suite_cartesian_energy(Sampler& rng) {
  const MassTriple m(1.0, 2.0, 3.0);
  const PotentialSpec V = HarmonicPotential{1.5, {1.0, 1.2, 0.8}};
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    CartesianState s;
    for (int i = 0; i < 3; ++i) {
      s.x[i] = rng.vec(2.0);
      s.v[i] = rng.vec();
    }
    const ReducedEvaluation ev = evaluate_reduced(m, s, V);
    // The reduced energy excludes center-of-mass motion.
    const JacobiVectors j = jacobi_from_cartesian(m, s);
    const double Kjac = 0.5 * (j.sdot1.squaredNorm() + j.sdot2.squaredNorm());
    worst = worst_of(worst, rel(ev.H, Kjac + eval_potential(V, context_from_positions(m, s.x))));
  }
  return worst;
}

struct LeapfrogRun {
  double angular_momentum_drift;
  double reversal_error;
};

LeapfrogRun leapfrog_run(Sampler& rng) {
  const MassTriple m(1.0, 1.5, 0.7);
  const PotentialSpec V = HarmonicPotential{1.0, {1.0, 1.0, 1.0}};
  CartesianState s;
  for (int i = 0; i < 3; ++i) {
    s.x[i] = rng.vec(1.0);
    s.v[i] = rng.vec(0.5);
  }
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.steps = 1000;
  cfg.record_stride = 1000;
  const Trajectory fwd = integrate(m, s, V, cfg);
  const ConservationReport rep = conservation_report(fwd);
  CartesianState back = fwd.samples.back().state;
  for (auto& v : back.v) v = -v;
  const CartesianState end = integrate(m, back, V, cfg).samples.back().state;
  double rev = 0.0;
  for (int i = 0; i < 3; ++i) {
    rev = worst_of({rev, (end.x[i] - s.x[i]).norm(), (end.v[i] + s.v[i]).norm()});
  }
  return {rep.max_rel_angular_momentum_norm_drift, rev};
}

// Net force and torque (sum_check) or gradient agreement with central
// differences of the potential, relative to the largest force.
double forces_residual(Sampler& rng, bool sum_check) {
  const MassTriple m(1.0, 2.0, 0.5);
  const std::vector<PotentialSpec> specs = {
      GravityPotential{1.0}, HarmonicPotential{2.0, {1.0, 1.5, 1.2}}, LennardJonesPotential{0.5, 0.8},
      parse_potential("0.5*(r1 - 1)^2 + cos(phi) * r2^2 + exp(-d12)")};
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    std::array<Vec3, 3> x = {rng.vec(1.5), rng.vec(1.5), rng.vec(1.5)};
    for (const auto& spec : specs) {
      const auto F = forces_cartesian(spec, m, x);
      const Vec3 com = (m[0] * x[0] + m[1] * x[1] + m[2] * x[2]) / m.total();
      Vec3 sum = Vec3::Zero(), torque = Vec3::Zero();
      double fscale = 0.0;
      for (int i = 0; i < 3; ++i) {
        sum += F[i];
        torque += (x[i] - com).cross(F[i]);
        fscale = worst_of(fscale, F[i].norm());
      }
      if (sum_check) {
        worst = worst_of(worst, (sum.norm() + torque.norm()) / worst_of(1.0, fscale));
        continue;
      }
      // Central differences on the Cartesian positions.
      const double h = 1e-6;
      for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
          auto xp = x, xm = x;
          xp[i][k] += h;
          xm[i][k] -= h;
          const double fd = -(eval_potential(spec, context_from_positions(m, xp)) -
                              eval_potential(spec, context_from_positions(m, xm))) / (2 * h);
          worst = worst_of(worst, std::abs(fd - F[i][k]) / worst_of(1.0, fscale));
        }
      }
    }
  }
  return worst;
}

double suite_parser() {
  static const char* corpus[] = {
      "r1^2 + r2^2", "-1/d12 - 1/d13 - 1/d23", "2^3^2", "-r1^2", "(-r1)^2", "r1 - (r2 - phi)",
      "r1 / (r2 * d12)", "sqrt(abs(cos(phi)))", "exp(-(d12 - 1)^2)", "log(1 + r1) * pi", "e^-r2",
      "--r1", "r1 * -r2", "1.5e-3 * d23^-2"};
  double failures = 0.0;
  for (const char* text : corpus) {
    const ExprPtr a = parse_expression(text);
    const ExprPtr b = parse_expression(print_expression(*a));
    const ExprPtr c = parse_expression(print_expression(*b));
    if (!structurally_equal(*a, *b) || print_expression(*b) != print_expression(*c)) failures += 1.0;
  }
  return failures;
}

}  // namespace

std::vector<SuiteResult> run_checks(std::uint64_t seed, double tolerance_scale) {
  struct Suite {
    const char* name;
    double tolerance;
    std::function<double(Sampler&)> run;
  };
  const std::vector<Suite> suites = {
      {"so3_chart", 1e-12, suite_so3},
      {"frame_fit_equivariance", 1e-12, suite_frame_fit},
      {"euler_rate_kinematics", 1e-8, suite_euler_rates},
      {"inertia_tensor_oracle", 1e-10, suite_inertia},
      {"connection_and_horizontal_metric", 1e-10, suite_connection},
      {"kinetic_energy_forms", 1e-12, suite_kinetic},
      {"legendre_consistency", 1e-10, suite_legendre},
      {"collinear_limit_value", 1e-12, suite_collinear_value},
      // Deviation of the observed convergence order from 2.
      {"collinear_limit_order", 0.2, suite_collinear_order},
      {"singular_term", 1e-12, suite_singular_term},
      {"cartesian_energy_identity", 1e-10, suite_cartesian_energy},
      {"leapfrog_angular_momentum", 1e-10,
       [](Sampler& r) { return leapfrog_run(r).angular_momentum_drift; }},
      {"leapfrog_reversibility", 1e-9, [](Sampler& r) { return leapfrog_run(r).reversal_error; }},
      {"force_balance", 1e-10, [](Sampler& r) { return forces_residual(r, true); }},
      {"force_gradient", 1e-6, [](Sampler& r) { return forces_residual(r, false); }},
      // Count of corpus entries that fail to round trip.
      {"parser_round_trip", 0.5, [](Sampler&) { return suite_parser(); }},
  };

  std::vector<SuiteResult> out;
  Sampler rng(seed);
  for (const Suite& s : suites) {
    const double tol = s.tolerance * tolerance_scale;
    double worst;
    try {
      worst = s.run(rng);
    } catch (const std::exception&) {
      worst = std::numeric_limits<double>::infinity();
    }
    out.push_back({s.name, worst <= tol, worst, tol});
  }
  return out;
}

}  // namespace trireduce
