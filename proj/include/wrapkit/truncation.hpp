#pragma once

// Rigorous truncation radii for Gaussian-type sums over (shifted) lattices.

#include "wrapkit/lie_data.hpp"

namespace wrapkit {

struct LatticeGeometry {
  int rank = 1;
  double covolume = 1.0;
  double cell_diameter = 0.0;  // bound on the diameter of a fundamental cell
};

LatticeGeometry lattice_geometry(const Eigen::MatrixXd& basis);

/// Upper bound for sum_{x in L + c, ||x|| > radius} ||x||^power exp(-rate ||x||^2),
/// uniform in the shift c.
double gaussian_tail_bound(const LatticeGeometry& lattice, double rate, double power, double radius);

/// Smallest radius (found by bisection) whose tail bound is below target.
double radius_for_tail(const LatticeGeometry& lattice, double rate, double power, double target);

}  // namespace wrapkit
