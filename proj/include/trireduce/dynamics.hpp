#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "trireduce/geometry.hpp"
#include "trireduce/hamiltonian.hpp"
#include "trireduce/potential.hpp"
#include "trireduce/types.hpp"

namespace trireduce {

enum class Method { Leapfrog, Rk4 };

struct IntegratorConfig {
  Method method = Method::Leapfrog;
  double dt = 1e-3;
  std::size_t steps = 1000;
  std::size_t record_stride = 1;
  // Any |coordinate| or |velocity component| above this aborts the run.
  double overflow_guard = 1e12;
  // Abort when |E - E0| exceeds this multiple of the initial energy scale
  // (|K0| + |V0|). Zero disables the check.
  double energy_guard = 1.0;
};

/// Derived quantities recorded alongside each sample. `branch` is empty
/// when the reduced evaluation is undefined at the sample (binary
/// collision, collinear with zero angular momentum); the reduced fields are
/// then NaN.
struct SampleRecord {
  double r1;
  double r2;
  double phi;
  double sin_phi;
  Vec3 J;
  Vec3 p;
  Vec3 L;
  double E;
  double H_reduced;
  std::optional<Branch> branch;
};

struct Sample {
  double t;
  CartesianState state;
  SampleRecord record;
};

struct Trajectory {
  MassTriple masses;
  std::vector<Sample> samples;
};

double kinetic_energy(const MassTriple& m, const CartesianState& s);

double total_energy(const MassTriple& m, const CartesianState& s, const PotentialSpec& V);

/// Evaluates every derived field of a sample; never throws for geometric
/// degeneracies.
SampleRecord record_sample(const MassTriple& m, const CartesianState& s, const PotentialSpec& V,
                           const Thresholds& thresholds);

/// Integrates the Cartesian equations of motion. Samples are recorded at
/// step 0 and every record_stride steps. Throws NumericalBlowup or
/// DomainError.
Trajectory integrate(const MassTriple& m, const CartesianState& state0, const PotentialSpec& V,
                     const IntegratorConfig& cfg, const Thresholds& thresholds = {});

struct ConservationReport {
  double max_rel_energy_drift;
  double max_angular_momentum_drift;   // infinity norm
  double max_rel_angular_momentum_norm_drift;
  double max_H_minus_E_outside_band;
  double max_H_minus_E_inside_band;
  std::size_t samples_inside_band;
  std::size_t samples_undefined;
};

ConservationReport conservation_report(const Trajectory& traj, double band = 1e-3);

struct CollinearPassage {
  double t_minus;
  double t_plus;
  double t_star;
  double min_sin_phi;
  std::size_t index;       // sample at the minimum
  double H_before;         // noncollinear branch at index - 1
  double H_after;          // noncollinear branch at index + 1
  double H_collinear;      // collinear branch at index
  std::optional<double> H_noncollinear;  // noncollinear branch at index, if defined
  double delta_H;          // max |H_before - H_collinear|, |H_after - H_collinear|
};

/// One passage per interior local minimum of sin(phi) strictly below
/// `threshold`. The passage time is the vertex of the parabola through the
/// three samples around the minimum.
std::vector<CollinearPassage> detect_collinear_passages(const Trajectory& traj,
                                                        const PotentialSpec& V,
                                                        double threshold,
                                                        const Thresholds& thresholds = {});

}  // namespace trireduce
