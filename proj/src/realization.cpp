#include "wrapkit/realization.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "wrapkit/errors.hpp"

namespace wrapkit {
namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// Pauli matrices in the order sigma_3, sigma_1, sigma_2.
Eigen::Matrix2cd pauli(int a) {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  switch (a) {
    case 0: s << 1.0, 0.0, 0.0, -1.0; break;
    case 1: s << 0.0, 1.0, 1.0, 0.0; break;
    default: s << 0.0, -kI, kI, 0.0; break;
  }
  return s;
}

// Generators of rotations about z, x, y: (L_a)_{bc} = -eps_{abc}.
Eigen::Matrix3d rotation_generator(int a) {
  const int axis = a == 0 ? 2 : a - 1;
  Eigen::Matrix3d l = Eigen::Matrix3d::Zero();
  const int b = (axis + 1) % 3, c = (axis + 2) % 3;
  l(b, c) = -1.0;
  l(c, b) = 1.0;
  return l;
}

// Gell-Mann matrices with lambda_3, lambda_8 first.
Eigen::Matrix3cd gell_mann(int a) {
  static const int order[8] = {3, 8, 1, 2, 4, 5, 6, 7};
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  switch (order[a]) {
    case 1: m(0, 1) = m(1, 0) = 1.0; break;
    case 2: m(0, 1) = -kI; m(1, 0) = kI; break;
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    case 4: m(0, 2) = m(2, 0) = 1.0; break;
    case 5: m(0, 2) = -kI; m(2, 0) = kI; break;
    case 6: m(1, 2) = m(2, 1) = 1.0; break;
    case 7: m(1, 2) = -kI; m(2, 1) = kI; break;
    default:
      m(0, 0) = m(1, 1) = 1.0 / std::sqrt(3.0);
      m(2, 2) = -2.0 / std::sqrt(3.0);
      break;
  }
  return m;
}

Matrix factor_generator(const Factor& f, int a) {
  switch (f.kind) {
    case FactorKind::circle: return Matrix::Constant(1, 1, kI);
    case FactorKind::su2: return 0.5 * kI * pauli(a);
    case FactorKind::so3: return rotation_generator(a).cast<cd>();
    case FactorKind::su3: return 0.5 * kI * gell_mann(a);
  }
  return {};
}

Matrix factor_exp(const Factor& f, const Vector& c) {
  switch (f.kind) {
    case FactorKind::circle: return Matrix::Constant(1, 1, std::exp(kI * c(0)));
    case FactorKind::su2: {
      const double r = c.norm();
      Eigen::Matrix2cd u = std::cos(0.5 * r) * Eigen::Matrix2cd::Identity();
      if (r > 0.0) {
        for (int a = 0; a < 3; ++a) u += kI * (std::sin(0.5 * r) * c(a) / r) * pauli(a);
      }
      return u;
    }
    case FactorKind::so3: {
      const double r = c.norm();
      Eigen::Matrix3d k = Eigen::Matrix3d::Zero();
      for (int a = 0; a < 3; ++a) k += c(a) * rotation_generator(a);
      Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
      if (r > 0.0) {
        k /= r;
        rot += std::sin(r) * k + (1.0 - std::cos(r)) * k * k;
      }
      return rot.cast<cd>();
    }
    case FactorKind::su3: {
      Eigen::Matrix3cd herm = Eigen::Matrix3cd::Zero();
      for (int a = 0; a < 8; ++a) herm += (0.5 * c(a)) * gell_mann(a);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(herm);
      const Eigen::Vector3cd phases = (kI * es.eigenvalues().cast<cd>()).array().exp();
      return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
  }
  return {};
}

}  // namespace

std::vector<Matrix> algebra_basis(const GroupSpec& g) {
  std::vector<Matrix> basis;
  for (const auto& f : g.factors) {
    for (int a = 0; a < f.algebra_dim; ++a) {
      Matrix x = Matrix::Zero(g.matrix_size, g.matrix_size);
      x.block(f.matrix_offset, f.matrix_offset, f.matrix_size, f.matrix_size) = factor_generator(f, a);
      basis.push_back(std::move(x));
    }
  }
  return basis;
}

Matrix algebra_element(const GroupSpec& g, const Vector& coords) {
  if (coords.size() != g.dim) throw DomainError("algebra_element: expected " + std::to_string(g.dim) + " coordinates");
  Matrix x = Matrix::Zero(g.matrix_size, g.matrix_size);
  const auto basis = algebra_basis(g);
  for (int i = 0; i < g.dim; ++i) x += coords(i) * basis[static_cast<std::size_t>(i)];
  return x;
}

Matrix exp_algebra(const GroupSpec& g, const Vector& coords) {
  if (coords.size() != g.dim) throw DomainError("exp_algebra: expected " + std::to_string(g.dim) + " coordinates");
  Matrix x = Matrix::Zero(g.matrix_size, g.matrix_size);
  for (const auto& f : g.factors)
    x.block(f.matrix_offset, f.matrix_offset, f.matrix_size, f.matrix_size) =
        factor_exp(f, coords.segment(f.algebra_offset, f.algebra_dim));
  return x;
}

Matrix torus_element(const GroupSpec& g, const TorusPoint& h) {
  if (h.coords.size() != g.rank) throw DomainError("torus_element: point has the wrong rank");
  Vector c = Vector::Zero(g.dim);
  for (const auto& f : g.factors) c.segment(f.algebra_offset, f.rank) = h.coords.segment(f.torus_offset, f.rank);
  return exp_algebra(g, c);
}

TorusPoint algebra_to_torus(const GroupSpec& g, const Vector& coords) {
  if (coords.size() != g.dim) throw DomainError("algebra_to_torus: expected " + std::to_string(g.dim) + " coordinates");
  Vector h(g.rank);
  for (const auto& f : g.factors) {
    const Vector c = coords.segment(f.algebra_offset, f.algebra_dim);
    switch (f.kind) {
      case FactorKind::circle: h(f.torus_offset) = c(0); break;
      case FactorKind::su2:
      case FactorKind::so3: h(f.torus_offset) = c.norm(); break;
      case FactorKind::su3: {
        Eigen::Matrix3cd herm = Eigen::Matrix3cd::Zero();
        for (int a = 0; a < 8; ++a) herm += (0.5 * c(a)) * gell_mann(a);
        const Eigen::Vector3d e = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd>(herm, Eigen::EigenvaluesOnly).eigenvalues();
        h(f.torus_offset) = e(0) - e(1);
        h(f.torus_offset + 1) = -std::sqrt(3.0) * e(2);
        break;
      }
    }
  }
  return TorusPoint(std::move(h));
}

double unitarity_defect(const Matrix& x) {
  return (x.adjoint() * x - Matrix::Identity(x.cols(), x.cols())).cwiseAbs().maxCoeff();
}

TorusPoint conjugacy_coordinate(const GroupSpec& g, const Matrix& x) {
  if (x.rows() != g.matrix_size || x.cols() != g.matrix_size)
    throw DomainError("conjugacy_coordinate: matrix has the wrong size");
  Vector h(g.rank);
  for (const auto& f : g.factors) {
    const Matrix b = x.block(f.matrix_offset, f.matrix_offset, f.matrix_size, f.matrix_size);
    if (unitarity_defect(b) > 1e-6) throw NumericalError("conjugacy_coordinate: matrix is not on the group");
    const int o = f.torus_offset;
    switch (f.kind) {
      case FactorKind::circle: h(o) = std::arg(b(0, 0)); break;
      case FactorKind::su2: {
        const cd a = b(0, 0), c = b(1, 0);
        h(o) = 2.0 * std::atan2(std::sqrt(a.imag() * a.imag() + std::norm(c)), a.real());
        break;
      }
      case FactorKind::so3: {
        const Eigen::Matrix3d r = b.real();
        const Eigen::Vector3d axis(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
        h(o) = std::atan2(0.5 * axis.norm(), 0.5 * (r.trace() - 1.0));
        break;
      }
      case FactorKind::su3: {
        Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(b, false);
        if (es.info() != Eigen::Success) throw NumericalError("conjugacy_coordinate: eigenvalue computation failed");
        double phases[3];
        for (int i = 0; i < 3; ++i) phases[i] = std::arg(es.eigenvalues()(i));
        const Eigen::Vector2d xy = su3_alcove_from_phases(phases);
        h(o) = xy(0);
        h(o + 1) = xy(1);
        break;
      }
    }
  }
  return TorusPoint(std::move(h));
}

}  // namespace wrapkit
