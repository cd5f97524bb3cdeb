#include "trireduce/csv.hpp"

#include <cmath>

#include <fmt/format.h>

namespace trireduce {

std::string format_number(double x) {
  // fmt ignores the global locale unless asked, so the separator is always '.'.
  return fmt::format("{:.17g}", x);
}

namespace {

void put(std::string& line, double x) {
  line += format_number(x);
  line += ',';
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  std::string line;
  for (const Sample& s : traj.samples) {
    line.clear();
    put(line, s.t);
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) put(line, s.state.x[i][k]);
    }
    const SampleRecord& r = s.record;
    put(line, r.r1);
    put(line, r.r2);
    put(line, r.phi);
    for (int k = 0; k < 3; ++k) put(line, r.J[k]);
    for (int k = 0; k < 3; ++k) put(line, r.p[k]);
    put(line, r.H_reduced);
    put(line, r.E);
    put(line, r.L.norm());
    line += r.branch ? branch_name(*r.branch) : "undefined";
    out << line << '\n';
  }
}

void write_passages_csv(std::ostream& out, const std::vector<CollinearPassage>& passages) {
  out << kPassageHeader << '\n';
  std::string line;
  for (const CollinearPassage& p : passages) {
    line.clear();
    put(line, p.t_minus);
    put(line, p.t_plus);
    put(line, p.t_star);
    put(line, p.min_sin_phi);
    put(line, p.H_before);
    put(line, p.H_collinear);
    put(line, p.H_after);
    line += format_number(p.delta_H);
    out << line << '\n';
  }
}

void write_evaluation_csv(std::ostream& out, const ReducedEvaluation& ev, double E_total,
                          double L_norm) {
  out << kEvaluationHeader << '\n';
  std::string line;
  put(line, ev.q.r1);
  put(line, ev.q.r2);
  put(line, ev.q.phi);
  for (int k = 0; k < 3; ++k) put(line, ev.momenta.J[k]);
  for (int k = 0; k < 3; ++k) put(line, ev.momenta.p[k]);
  line += branch_name(ev.branch);
  line += ',';
  put(line, ev.H);
  put(line, E_total);
  put(line, L_norm);
  put(line, ev.singular_term);
  line += format_number(std::abs(ev.H - E_total));
  out << line << '\n';
}

}  // namespace trireduce
