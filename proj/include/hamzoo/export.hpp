#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "hamzoo/dynamics.hpp"
#include "hamzoo/legendre.hpp"

namespace hamzoo {

/// One row of a trajectory CSV.
struct CsvRow {
  double t = 0.0;
  double x = 0.0;
  double p = 0.0;
  double h = 0.0;
};

/// Header `t,x,p,H`; every number with 17 significant digits so reading the
/// file back reproduces the doubles exactly.
void write_trajectory_csv(const Trajectory& traj, const Potential& pot,
                          std::ostream& out);

/// Throws std::runtime_error on a bad header or malformed row.
std::vector<CsvRow> read_trajectory_csv(std::istream& in);

/// Header `x,v,Lj,pj,legendre_residual`.
void write_legendre_csv(const std::vector<LegendreGridRow>& rows,
                        std::ostream& out);

/// One polyline of a phase portrait.
struct PhaseCurve {
  std::string label;
  std::vector<double> x;
  std::vector<double> p;
};

/// x vs p polylines in a fixed 800x600 viewBox with axes and tick labels.
/// Output depends only on the input values.
std::string phase_portrait_svg(const std::vector<PhaseCurve>& curves,
                               const std::string& title);

PhaseCurve phase_curve(const Trajectory& traj, const std::string& label);

/// Binary PGM (P5, maxval 1). mask entries 1 (odd) are drawn black (0),
/// everything else white (1); rows shorter than the widest are padded white.
void write_mask_pgm(const std::vector<std::vector<std::uint8_t>>& mask,
                    std::ostream& out);

}  // namespace hamzoo
