#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "trireduce/dynamics.hpp"
#include "trireduce/hamiltonian.hpp"

namespace trireduce {

inline constexpr const char* kTrajectoryHeader =
    "t,x1x,x1y,x1z,x2x,x2y,x2z,x3x,x3y,x3z,r1,r2,phi,J1,J2,J3,p1,p2,p3,H_reduced,E_total,L_norm,"
    "branch";

inline constexpr const char* kPassageHeader =
    "t_minus,t_plus,t_star,min_sin_phi,H_before,H_collinear,H_after,abs_delta_H";

inline constexpr const char* kEvaluationHeader =
    "r1,r2,phi,J1,J2,J3,p1,p2,p3,branch,H_reduced,E_total,L_norm,singular_term,abs_delta_H";

/// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_number(double x);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

void write_passages_csv(std::ostream& out, const std::vector<CollinearPassage>& passages);

void write_evaluation_csv(std::ostream& out, const ReducedEvaluation& ev, double E_total,
                          double L_norm);

}  // namespace trireduce
