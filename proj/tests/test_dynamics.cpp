#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "trireduce/dynamics.hpp"
#include "trireduce/errors.hpp"

using namespace trireduce;
using namespace testing;

namespace {

const PotentialSpec kHarmonic = HarmonicPotential{1.0, {1.0, 1.2, 0.9}};

// Zero total momentum for the given masses, so E has no center-of-mass part.
CartesianState harmonic_state(const MassTriple& m = MassTriple(1, 1, 1)) {
  CartesianState s;
  s.x = {Vec3(1.0, 0.0, 0.0), Vec3(-0.5, 0.9, 0.1), Vec3(-0.5, -0.9, -0.1)};
  s.v = {Vec3(0.0, 0.4, 0.1), Vec3(-0.3, -0.2, 0.0), Vec3(0.3, -0.2, -0.1)};
  Vec3 P = Vec3::Zero();
  for (int i = 0; i < 3; ++i) P += m[i] * s.v[i];
  for (auto& v : s.v) v -= P / m.total();
  return s;
}

IntegratorConfig config(double dt, std::size_t steps, std::size_t stride = 1) {
  IntegratorConfig c;
  c.dt = dt;
  c.steps = steps;
  c.record_stride = stride;
  return c;
}

}  // namespace

TEST_CASE("total energy") {
  const MassTriple m(1, 1, 1);
  CartesianState s;
  s.x = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  s.v = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  CHECK(total_energy(m, s, FreePotential{}) == 0.0);
  s.v[1] = Vec3(0, 2, 0);
  CHECK(total_energy(m, s, FreePotential{}) == 2.0);

  Rng rng(41);
  const MassTriple mm(0.8, 1.6, 2.4);
  for (int n = 0; n < 300; ++n) {
    const CartesianState st = rng.state(mm);
    const JacobiVectors j = jacobi_from_cartesian(mm, st);
    const double V = eval_potential(kHarmonic, context_from_positions(mm, st.x));
    CHECK(rel_err(total_energy(mm, st, kHarmonic), 0.5 * (j.sdot1.squaredNorm() + j.sdot2.squaredNorm()) + V) < 1e-13);
  }
}

TEST_CASE("configuration validation") {
  const MassTriple m(1, 1, 1);
  CHECK_THROWS_AS(integrate(m, harmonic_state(), kHarmonic, config(0.0, 10)), InvalidInput);
  CHECK_THROWS_AS(integrate(m, harmonic_state(), kHarmonic, config(-1e-3, 10)), InvalidInput);
  CHECK_THROWS_AS(integrate(m, harmonic_state(), kHarmonic, config(1e-3, 0)), InvalidInput);
  CHECK_THROWS_AS(integrate(m, harmonic_state(), kHarmonic, config(1e-3, 10, 0)), InvalidInput);
}

TEST_CASE("sampling contract") {
  const MassTriple m(1, 1, 1);
  const Trajectory t = integrate(m, harmonic_state(), kHarmonic, config(1e-3, 1000, 10));
  CHECK(t.samples.size() == 101);
  for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].t > t.samples[i - 1].t);
  CHECK(t.samples.back().t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(integrate(m, harmonic_state(), kHarmonic, config(1e-3, 1000, 7)).samples.size() == 1 + 1000 / 7);
}

TEST_CASE("free motion is a straight line") {
  const MassTriple m(1, 2, 3);
  Rng rng(42);
  const CartesianState s0 = rng.state(m);
  const Trajectory t = integrate(m, s0, FreePotential{}, config(0.01, 500, 50));
  for (const Sample& smp : t.samples) {
    for (int i = 0; i < 3; ++i) CHECK((smp.state.x[i] - (s0.x[i] + smp.t * s0.v[i])).norm() < 1e-12);
  }
  const ConservationReport r = conservation_report(t);
  CHECK(r.max_rel_energy_drift < 1e-12);
  CHECK(r.max_angular_momentum_drift < 1e-12);
}

TEST_CASE("leapfrog energy error is second order") {
  const MassTriple m(1, 1, 1);
  const double dt = 0.02;
  const auto drift = [&](double h) {
    return conservation_report(integrate(m, harmonic_state(), kHarmonic,
                                         config(h, static_cast<std::size_t>(std::lround(10.0 / h)))))
        .max_rel_energy_drift;
  };
  const double ratio = drift(dt) / drift(dt / 2);
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("angular momentum conservation") {
  const MassTriple m(1.0, 1.5, 0.7);
  for (const PotentialSpec& V : {kHarmonic, PotentialSpec{parse_potential("0.5*(r1-1)^2 + 0.5*(r2-1)^2 + 0.1*cos(phi)")}}) {
    const ConservationReport r = conservation_report(integrate(m, harmonic_state(m), V, config(1e-3, 10000, 100)));
    CHECK(r.max_rel_angular_momentum_norm_drift < 1e-10);
    CHECK(r.max_H_minus_E_outside_band < 1e-8);
  }
}

TEST_CASE("leapfrog is time reversible") {
  const MassTriple m(1.0, 1.5, 0.7);
  const CartesianState s0 = harmonic_state();
  const IntegratorConfig c = config(1e-3, 1000, 1000);
  CartesianState s = integrate(m, s0, kHarmonic, c).samples.back().state;
  for (auto& v : s.v) v = -v;
  s = integrate(m, s, kHarmonic, c).samples.back().state;
  for (int i = 0; i < 3; ++i) {
    CHECK((s.x[i] - s0.x[i]).norm() < 1e-9);
    CHECK((s.v[i] + s0.v[i]).norm() < 1e-9);
  }
}

TEST_CASE("rk4 agrees with leapfrog") {
  const MassTriple m(1, 1, 1);
  IntegratorConfig c = config(1e-3, 2000, 2000);
  const CartesianState a = integrate(m, harmonic_state(), kHarmonic, c).samples.back().state;
  c.method = Method::Rk4;
  const CartesianState b = integrate(m, harmonic_state(), kHarmonic, c).samples.back().state;
  for (int i = 0; i < 3; ++i) CHECK((a.x[i] - b.x[i]).norm() < 1e-5);
}

TEST_CASE("numerical blowup") {
  const MassTriple m(1, 1, 1);
  CartesianState head_on;
  head_on.x = {Vec3(-1, 0, 0), Vec3(1, 0, 0), Vec3(0, 5, 0)};
  head_on.v = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  CHECK_THROWS_AS(integrate(m, head_on, GravityPotential{1.0}, config(0.01, 10000)), NumericalBlowup);

  IntegratorConfig c = config(0.1, 100);
  c.overflow_guard = 5.0;
  c.energy_guard = 0.0;
  CartesianState fast = harmonic_state();
  fast.v[0] = Vec3(100, 0, 0);
  fast.v[1] = Vec3(-100, 0, 0);
  CHECK_THROWS_AS(integrate(m, fast, FreePotential{}, c), NumericalBlowup);
}

TEST_CASE("collinear samples never abort the integration") {
  const MassTriple m(1, 1, 1);
  CartesianState s;
  s.x = {Vec3(-1, 0, 0), Vec3(0.2, 0, 0), Vec3(1, 0, 0)};
  s.v = {Vec3(-0.1, 0, 0), Vec3(0.2, 0, 0), Vec3(-0.1, 0, 0)};
  const Trajectory t = integrate(m, s, kHarmonic, config(1e-3, 100));
  CHECK(t.samples.size() == 101);
  CHECK_FALSE(t.samples.front().record.branch.has_value());
  CHECK(std::isnan(t.samples.front().record.H_reduced));
  CHECK(conservation_report(t).samples_undefined == 101);
}

TEST_CASE("passage detection") {
  const MassTriple m(1.0, 1.3, 0.8);
  const double dt = 1e-3;
  const CartesianState start = crossing_start(m, kHarmonic, dt, 500);
  const Trajectory t = integrate(m, start, kHarmonic, config(dt, 1000));
  CHECK(t.samples[500].record.sin_phi < 1e-10);
  CHECK(t.samples[500].record.branch == Branch::Collinear);

  const auto passages = detect_collinear_passages(t, kHarmonic, 1e-3);
  REQUIRE(passages.size() == 1);
  const CollinearPassage& p = passages.front();
  CHECK(p.index == 500);
  CHECK(p.t_minus < p.t_plus);
  CHECK(p.t_star == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(p.min_sin_phi < 1e-3);
  CHECK(p.delta_H / std::abs(p.H_collinear) < 1e-6);

  CHECK(detect_collinear_passages(t, kHarmonic, 0.0).empty());

  const ConservationReport r = conservation_report(t);
  CHECK(r.max_H_minus_E_outside_band < 1e-8);
  CHECK(r.max_H_minus_E_inside_band < 1e-8);
  CHECK(r.samples_inside_band > 0);
}

TEST_CASE("no passages when the shape stays open") {
  const MassTriple m(1, 1, 1);
  CartesianState s;
  s.x = {Vec3(1, 0, 0), Vec3(-0.5, 0.87, 0), Vec3(-0.5, -0.87, 0)};
  s.v = {Vec3(0, 0.1, 0), Vec3(-0.087, -0.05, 0), Vec3(0.087, -0.05, 0)};
  const Trajectory t = integrate(m, s, HarmonicPotential{1.0, {1.73, 1.73, 1.73}}, config(1e-2, 1000, 10));
  for (const Sample& smp : t.samples) REQUIRE(smp.record.sin_phi >= 0.5);
  CHECK(detect_collinear_passages(t, kHarmonic, 1e-3).empty());
  CHECK(detect_collinear_passages(t, kHarmonic, 0.4).empty());
}

TEST_CASE("rotated initial data give the same shape history") {
  const MassTriple m(1.0, 1.5, 0.7);
  Rng rng(43);
  const Trajectory a = integrate(m, harmonic_state(), kHarmonic, config(1e-3, 2000, 100));
  for (int n = 0; n < 5; ++n) {
    const Trajectory b = integrate(m, rotated(harmonic_state(), rng.rotation()), kHarmonic, config(1e-3, 2000, 100));
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      CHECK(std::abs(a.samples[i].record.r1 - b.samples[i].record.r1) < 1e-9);
      CHECK(std::abs(a.samples[i].record.r2 - b.samples[i].record.r2) < 1e-9);
      CHECK(std::abs(a.samples[i].record.phi - b.samples[i].record.phi) < 1e-9);
      CHECK(std::abs(a.samples[i].record.H_reduced - b.samples[i].record.H_reduced) < 1e-10);
    }
  }
}
