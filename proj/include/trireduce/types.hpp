#pragma once

#include <Eigen/Dense>

namespace trireduce {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Columns are the body axes u1, u2, u3 expressed in the space frame.
using Rotation = Mat3;

// Classification thresholds shared by the geometry, reduction and
// hamiltonian layers.
struct Thresholds {
  // |s1 x s2| / (|s1||s2|) at or below this selects the collinear branch.
  double collinear = 1e-8;
  // Noncollinear states with sin(phi) at or below this are flagged as
  // poorly conditioned.
  double band = 1e-3;
  // Allowed |J1|, |J2| relative to |J| for the collinear Hamiltonian.
  double alignment = 1e-9;
};

}  // namespace trireduce
