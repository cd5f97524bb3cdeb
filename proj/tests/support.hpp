#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "trireduce/dynamics.hpp"
#include "trireduce/geometry.hpp"

namespace testing {

using trireduce::Mat3;
using trireduce::Vec3;

inline constexpr double kPi = std::numbers::pi;

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 12345) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  Vec3 vec(double s = 1.0) { return {uniform(-s, s), uniform(-s, s), uniform(-s, s)}; }
  trireduce::EulerAngles euler() {
    return {uniform(0.0, 2 * kPi), uniform(0.0, kPi), uniform(0.0, 2 * kPi)};
  }
  trireduce::Rotation rotation() { return trireduce::rotation_from_euler(euler()); }
  trireduce::ShapeCoordinates shape(double min_sin = 0.1) {
    while (true) {
      trireduce::ShapeCoordinates q{uniform(0.3, 2.5), uniform(0.3, 2.5), uniform(0.0, kPi)};
      if (std::sin(q.phi) > min_sin) return q;
    }
  }
  trireduce::BodyVelocityState velocities() { return {vec(), vec()}; }
  // Random state with zero total momentum.
  trireduce::CartesianState state(const trireduce::MassTriple& m, double spread = 1.5) {
    trireduce::CartesianState s;
    Vec3 P = Vec3::Zero();
    for (int i = 0; i < 3; ++i) {
      s.x[i] = vec(spread);
      s.v[i] = vec();
      P += m[i] * s.v[i];
    }
    for (int i = 0; i < 3; ++i) s.v[i] -= P / m.total();
    return s;
  }

 private:
  std::mt19937_64 gen_;
};

inline double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline trireduce::CartesianState rotated(const trireduce::CartesianState& s, const Mat3& Q) {
  trireduce::CartesianState out;
  for (int i = 0; i < 3; ++i) {
    out.x[i] = Q * s.x[i];
    out.v[i] = Q * s.v[i];
  }
  return out;
}

// Planar state that reaches an exactly collinear configuration after
// `steps` leapfrog steps of size dt: start collinear, run backwards, and
// reverse the velocities.
inline trireduce::CartesianState crossing_start(const trireduce::MassTriple& m,
                                                const trireduce::PotentialSpec& V, double dt,
                                                std::size_t steps) {
  const trireduce::JacobiVectors j{Vec3(1.0, 0, 0), Vec3(0.6, 0, 0), Vec3(0.05, 0.3, 0),
                                   Vec3(-0.02, -0.2, 0)};
  trireduce::CartesianState s = trireduce::cartesian_from_jacobi(m, j);
  for (auto& v : s.v) v = -v;
  trireduce::IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.steps = steps;
  cfg.record_stride = steps;
  s = trireduce::integrate(m, s, V, cfg).samples.back().state;
  for (auto& v : s.v) v = -v;
  return s;
}

}  // namespace testing
