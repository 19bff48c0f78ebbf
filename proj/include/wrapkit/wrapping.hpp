#pragma once

// The wrapping map from Ad-invariant functions on the Lie algebra to central
// functions on the group, in its geodesic-sum and highest-weight forms, and
// the Fourier calculus of central functions.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "wrapkit/lie_data.hpp"

namespace wrapkit {

/// |f(x)| <= amplitude * exp(-||x||^2 / (2 variance)).
struct GaussianBound {
  double amplitude = 0.0;
  double variance = 1.0;
};

/// A radial function on the Lie algebra (dimension dim G), given by its
/// radial profile and optionally by the profile of its Fourier transform
/// nu^(xi) = int nu(x) exp(-i <xi, x>) dx.
class RadialFunction {
 public:
  using Profile = std::function<double(double)>;

  /// When both profiles and both bounds are supplied the pair is spot-checked
  /// by direct quadrature; a mismatch throws ContractError.
  RadialFunction(int algebra_dim, Profile profile, std::optional<Profile> fourier,
                 std::optional<GaussianBound> decay, std::optional<GaussianBound> fourier_decay,
                 bool verify = true);

  int algebra_dim() const { return algebra_dim_; }
  double operator()(const TorusPoint& h) const { return profile_(h.coords.norm()); }
  double at_radius(double r) const { return profile_(r); }

  bool has_fourier() const { return fourier_.has_value(); }
  double fourier(double k) const;
  const GaussianBound& decay() const;
  const GaussianBound& fourier_decay() const;

  /// Fourier side of the flat Laplacian: xi -> -||xi||^2 nu^(xi). Carries no
  /// spatial profile.
  RadialFunction laplacian_fourier_only() const;

 private:
  void verify_fourier_pair() const;

  int algebra_dim_;
  Profile profile_;
  std::optional<Profile> fourier_;
  std::optional<GaussianBound> decay_;
  std::optional<GaussianBound> fourier_decay_;
};

struct GaussianComponent {
  double weight = 1.0;
  double variance = 1.0;  // t in p_t
};
using GaussianMixture = std::vector<GaussianComponent>;

/// sum_k w_k p_{s_k} on R^dim.
RadialFunction gaussian_mixture(int algebra_dim, const GaussianMixture& mix);
/// Flat Laplacian of a mixture, with both contracts.
RadialFunction gaussian_mixture_laplacian(int algebra_dim, const GaussianMixture& mix);
/// The flat heat kernel p_t.
RadialFunction heat_gaussian(int algebra_dim, double t);
/// Euclidean convolution of mixtures: variances add.
GaussianMixture convolve(const GaussianMixture& a, const GaussianMixture& b);
/// "w1:s1,w2:s2,...". Throws DomainError on malformed input or s <= 0.
GaussianMixture parse_mixture(std::string_view text);

/// f = sum_lambda c_lambda chi_lambda with real coefficients.
class CentralFunction {
 public:
  struct Term {
    Weight weight;
    double coeff;
  };

  CentralFunction(GroupSpec group, std::vector<Term> terms, double cutoff);

  const GroupSpec& group() const { return group_; }
  double cutoff() const { return cutoff_; }
  const std::vector<Term>& terms() const { return terms_; }
  /// Zero for weights outside the support.
  double coefficient(const IntVector& coords) const;
  bool contains(const IntVector& coords) const;

  double operator()(const TorusPoint& h) const { return evaluate_complex(h).real(); }
  std::complex<double> evaluate_complex(const TorusPoint& h) const;

 private:
  struct CoordsLess {
    bool operator()(const IntVector& a, const IntVector& b) const;
  };

  GroupSpec group_;
  std::vector<Term> terms_;
  std::map<IntVector, std::size_t, CoordsLess> index_;
  double cutoff_;
};

using CentralEvaluator = std::function<double(const TorusPoint&)>;

struct QuadratureGrid {
  int points_per_dim = 32;
  unsigned threads = 1;
};

/// Geodesic sum sum_{gamma in Gamma} (nu / j)(H + gamma), a density with
/// respect to Riemannian volume on G; neglected tail < tol.
double wrap_lattice(const GroupSpec& g, const RadialFunction& nu, const TorusPoint& h, double tol);

/// Highest-weight form: c_lambda = d_lambda nu^(lambda + rho), a density with
/// respect to normalised Haar measure.
CentralFunction wrap_spectral(const GroupSpec& g, const RadialFunction& nu, double cutoff);

/// Weight cutoff ||lambda+rho||^2 for which the neglected spectral tail of
/// wrap_spectral(nu) is below tol at every point.
double spectral_cutoff(const GroupSpec& g, const RadialFunction& nu, double tol);

/// Smallest grid that integrates products of characters up to the cutoff
/// exactly.
int required_grid_points(const GroupSpec& g, double cutoff);

/// c_lambda = int f conj(chi_lambda) dHaar by the periodic trapezoidal rule on
/// the maximal torus with the Weyl density. Throws ResolutionError when the
/// grid is coarser than required_grid_points.
CentralFunction fourier_coefficients(const GroupSpec& g, const CentralEvaluator& f, double cutoff,
                                     const QuadratureGrid& grid);

/// Group convolution: c_lambda(a) c_lambda(b) / d_lambda.
CentralFunction convolve_central(const CentralFunction& a, const CentralFunction& b);

/// Multiplies c_lambda by -||lambda+rho||^2 (shifted) or
/// -(||lambda+rho||^2 - ||rho||^2) (the group Laplacian).
CentralFunction laplacian_spectral(const CentralFunction& f, bool shifted);

/// max_lambda |c(wrap(L nu)) - c(shifted Laplacian of wrap(nu))|.
double wraplap_check(const GroupSpec& g, const RadialFunction& nu, double cutoff);

struct WrapFormulaGap {
  double coefficient_gap = 0.0;  // relative, exact coefficients
  double pointwise_gap = 0.0;    // through torus quadrature
};

/// Compares wrap(a * b) with wrap(a) *_G wrap(b) for Gaussian mixtures, once
/// with exact coefficients and once with coefficients recovered from point
/// values on the torus grid; the pointwise gap is taken over the given points.
WrapFormulaGap wrap_formula_gap(const GroupSpec& g, const GaussianMixture& a, const GaussianMixture& b,
                                const std::vector<TorusPoint>& points, double tol, unsigned threads = 1);

struct PoissonRow {
  TorusPoint h;
  double lattice = 0.0;   // vol(G) * geodesic sum
  double spectral = 0.0;  // highest-weight sum
  double gap = 0.0;
};

/// Both sides of the Poisson summation identity at each grid point, each
/// truncated with tail below tol.
std::vector<PoissonRow> poisson_rows(const GroupSpec& g, const RadialFunction& nu,
                                     const std::vector<TorusPoint>& grid, double tol);
double poisson_gap(const GroupSpec& g, const RadialFunction& nu, const std::vector<TorusPoint>& grid,
                   double tol);

}  // namespace wrapkit
