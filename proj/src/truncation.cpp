#include "wrapkit/truncation.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <boost/math/special_functions/gamma.hpp>

#include "wrapkit/errors.hpp"

namespace wrapkit {
namespace {

double unit_ball_volume(int rank) {
  const double r = static_cast<double>(rank);
  return std::pow(std::numbers::pi, 0.5 * r) / std::tgamma(0.5 * r + 1.0);
}

// Upper bound on the number of lattice points in a ball of the given radius.
double count_bound(const LatticeGeometry& l, double s) {
  return unit_ball_volume(l.rank) * std::pow(s + l.cell_diameter, l.rank) / l.covolume;
}

}  // namespace

LatticeGeometry lattice_geometry(const Eigen::MatrixXd& basis) {
  LatticeGeometry l;
  l.rank = static_cast<int>(basis.cols());
  l.covolume = std::abs(basis.determinant());
  for (Eigen::Index i = 0; i < basis.cols(); ++i) l.cell_diameter += basis.col(i).norm();
  return l;
}

double gaussian_tail_bound(const LatticeGeometry& lattice, double rate, double power, double radius) {
  // Summation by parts against N(s) <= c (s + delta)^R, valid where s^p e^{-a s^2}
  // is decreasing, then integration by parts into upper incomplete gammas.
  const double peak = std::sqrt(power / (2.0 * rate));
  double extra = 0.0;
  double r = radius;
  if (r < peak) {
    extra = std::pow(peak, power) * std::exp(-rate * peak * peak) * count_bound(lattice, peak);
    r = peak;
  }
  const int rank = lattice.rank;
  const double delta = lattice.cell_diameter;
  auto moment = [&](double m) {  // int_r^inf s^m e^{-a s^2} ds
    const double shape = 0.5 * (m + 1.0);
    return 0.5 * boost::math::tgamma(shape, rate * r * r) / std::pow(rate, shape);
  };
  double integral = 0.0;
  double binom = 1.0;
  for (int k = 0; k < rank; ++k) {
    integral += binom * std::pow(delta, rank - 1 - k) * moment(power + k);
    binom = binom * (rank - 1 - k) / (k + 1);
  }
  const double c = unit_ball_volume(rank) / lattice.covolume;
  const double boundary = std::pow(r + delta, rank) * std::pow(r, power) * std::exp(-rate * r * r);
  return extra + c * (boundary + rank * integral);
}

double radius_for_tail(const LatticeGeometry& lattice, double rate, double power, double target) {
  if (!(rate > 0.0) || !(target > 0.0)) throw DomainError("radius_for_tail: rate and target must be positive");
  double lo = std::sqrt(power / (2.0 * rate));
  double hi = std::max(lo, 1.0 / std::sqrt(rate)) + 1.0;
  for (int it = 0; gaussian_tail_bound(lattice, rate, power, hi) > target; ++it) {
    if (it > 200) throw ResourceError("radius_for_tail: no finite radius reaches the target");
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gaussian_tail_bound(lattice, rate, power, mid) > target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace wrapkit
