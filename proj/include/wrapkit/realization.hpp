#pragma once

// Matrix realisation of the catalog groups: block-diagonal matrices with one
// block per factor (1x1 for a circle, 2x2 for su2, 3x3 for so3 and su3).

#include <vector>

#include <Eigen/Core>

#include "wrapkit/lie_data.hpp"

namespace wrapkit {

using Matrix = Eigen::MatrixXcd;

/// Orthonormal basis X_1..X_dim of the Lie algebra for the inner product
/// fixed in lie_data, as block-diagonal anti-Hermitian matrices. The first
/// basis elements of each factor span its Cartan subalgebra.
std::vector<Matrix> algebra_basis(const GroupSpec& g);

/// sum_i coords_i X_i.
Matrix algebra_element(const GroupSpec& g, const Vector& coords);
/// exp of an algebra element, block by block in closed form.
Matrix exp_algebra(const GroupSpec& g, const Vector& coords);
/// exp(H) for a torus point.
Matrix torus_element(const GroupSpec& g, const TorusPoint& h);

/// Torus point conjugate (under Ad) to the algebra element; not reduced
/// modulo the integer lattice.
TorusPoint algebra_to_torus(const GroupSpec& g, const Vector& coords);

/// Alcove point H with exp(H) conjugate to x. Throws NumericalError when x is
/// not on the group.
TorusPoint conjugacy_coordinate(const GroupSpec& g, const Matrix& x);

/// max |x^* x - I| entry.
double unitarity_defect(const Matrix& x);

}  // namespace wrapkit
