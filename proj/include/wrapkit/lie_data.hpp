#pragma once

// Root data, lattices and pointwise special functions for the group catalog.
//
// Conventions used throughout the library:
//  * The Cartan subalgebra t carries orthonormal coordinates for the inner
//    product -2 tr(XY) on su(n) (so every root of su2 and su3 has length 1),
//    -tr(XY) on u(1) and -tr(XY)/2 on so(3).
//  * The integer lattice is Gamma = {H : exp H = e}; for simply connected
//    factors it equals 2*pi times the coroot lattice.
//  * Characters are normalised against Haar measure of total mass one.

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace wrapkit {

using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

enum class FactorKind { circle, su2, so3, su3 };

/// One simple (or circle) factor of a catalog group, with the slices of the
/// torus, algebra and matrix coordinates it occupies.
struct Factor {
  FactorKind kind;
  int torus_offset = 0;
  int rank = 1;
  int algebra_offset = 0;
  int algebra_dim = 1;
  int matrix_offset = 0;
  int matrix_size = 1;
};

struct WeylElement {
  Eigen::MatrixXd matrix;  // orthogonal, acts on orthonormal torus coordinates
  int sign = 1;            // det(matrix)
};

struct GroupSpec {
  std::string name;
  int rank = 0;
  int dim = 0;
  std::vector<Vector> positive_roots;  // covectors in orthonormal coordinates
  std::vector<int> simple_roots;       // indices into positive_roots
  Vector rho;
  double rho_norm_sq = 0.0;
  Eigen::MatrixXd weight_lattice_basis;   // columns generate the weight lattice
  Eigen::MatrixXd integer_lattice_basis;  // columns generate Gamma (2*pi included)
  std::vector<WeylElement> weyl_group;
  std::vector<Factor> factors;
  // Exact integer pairings <basis_i, alpha^vee> (rank x #roots) and
  // <2 rho, alpha^vee>; weyl_dimension works only with these.
  Eigen::MatrixXi coroot_pairing;
  IntVector two_rho_pairing;
  double torus_volume = 0.0;  // covolume of Gamma
  double haar_volume = 0.0;   // Riemannian volume of G
  int matrix_size = 0;        // size of the block-diagonal matrix realisation
};

/// A dominant weight in weight-lattice coordinates.
struct Weight {
  IntVector coords;
  double lambda_plus_rho_norm_sq = 0.0;
  long long dimension = 1;
};

/// A point H of the Cartan subalgebra in orthonormal coordinates.
struct TorusPoint {
  Vector coords;

  TorusPoint() = default;
  explicit TorusPoint(Vector c) : coords(std::move(c)) {}
  TorusPoint(std::initializer_list<double> c)
      : coords(Eigen::Map<const Vector>(c.begin(), static_cast<Eigen::Index>(c.size()))) {}
};

inline constexpr std::size_t kDefaultMaxWeights = 2'000'000;
inline constexpr std::size_t kDefaultMaxLatticePoints = 2'000'000;

/// Catalog: "torus<n>" (also "torus(n)"), "su2", "so3", "su2xsu2", "su3".
GroupSpec make_group(std::string_view name);
std::vector<std::string> catalog_names();

Vector weight_vector(const GroupSpec& g, const IntVector& coords);
bool is_dominant(const GroupSpec& g, const IntVector& coords);
/// Throws DomainError for a non-dominant weight.
Weight make_weight(const GroupSpec& g, const IntVector& coords);

long long weyl_dimension(const GroupSpec& g, const Weight& lambda);
long long weyl_dimension(const GroupSpec& g, const IntVector& coords);

/// Character of the irreducible representation with highest weight lambda,
/// valid at singular H as well.
std::complex<double> character(const GroupSpec& g, const Weight& lambda, const TorusPoint& h);

/// Square root of the Jacobian of exp: prod_{a>0} sin(a(H)/2)/(a(H)/2).
double j_compact(const GroupSpec& g, const TorusPoint& h);
/// Weyl denominator prod_{a>0} 2 sin(a(H)/2).
double weyl_delta(const GroupSpec& g, const TorusPoint& h);
/// |weyl_delta|^2.
double weyl_density(const GroupSpec& g, const TorusPoint& h);
bool is_regular(const GroupSpec& g, const TorusPoint& h, double eps = 1e-12);

/// Dominant weights with ||lambda + rho||^2 <= cutoff, ascending by norm then
/// lexicographically by coordinates.
std::vector<Weight> enumerate_weights(const GroupSpec& g, double cutoff,
                                      std::size_t max_count = kDefaultMaxWeights);

/// Lattice vectors gamma in Gamma with ||center + gamma|| <= radius, ascending
/// by that norm then lexicographically by lattice coordinates.
std::vector<Vector> lattice_points(const GroupSpec& g, const TorusPoint& center, double radius,
                                   std::size_t max_count = kDefaultMaxLatticePoints);

/// Evaluates many characters at a single point; shares the per-point work.
class CharacterEvaluator {
 public:
  CharacterEvaluator(const GroupSpec& g, const TorusPoint& h);

  std::complex<double> operator()(const IntVector& coords) const;
  std::complex<double> operator()(const Weight& w) const { return (*this)(w.coords); }

 private:
  struct FactorState {
    FactorKind kind;
    int offset;
    bool singular;
    double theta = 0.0;                    // rank-one factors
    double phase[3] = {0.0, 0.0, 0.0};     // su3 eigenvalue phases
    std::complex<double> x[3];             // su3 eigenvalues
    std::complex<double> vandermonde{};    // su3 Weyl denominator
  };
  std::vector<FactorState> factors_;
};

/// Alternating sums A_mu(H) = sum_w det(w) exp(i <w mu, H>) over the stored
/// Weyl group; A_{lambda+rho} / A_rho is the Weyl character formula.
class AlternatingSum {
 public:
  AlternatingSum(const GroupSpec& g, const TorusPoint& h);
  std::complex<double> operator()(const Vector& mu) const;

 private:
  std::vector<Vector> transformed_;  // w^T H
  std::vector<int> signs_;
};

/// Fundamental domain for conjugacy classes.
bool in_alcove(const GroupSpec& g, const TorusPoint& h, double eps = 1e-12);
/// Representative in the closed alcove of the conjugacy class of exp(H).
TorusPoint alcove_representative(const GroupSpec& g, const TorusPoint& h);
/// Deterministic regular points in the alcove interior.
std::vector<TorusPoint> alcove_points(const GroupSpec& g, std::size_t count,
                                      double min_root_gap = 0.05);

/// Lifts phases of an SU(3) element (sum in 2 pi Z) to the alcove. Returns
/// torus coordinates (x, y).
Eigen::Vector2d su3_alcove_from_phases(const double phases[3]);
/// Eigenvalue phases h_1..h_3 of exp(H) for an su3 torus point (x, y).
void su3_phases(double x, double y, double out[3]);

}  // namespace wrapkit
