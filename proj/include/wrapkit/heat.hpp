#pragma once

// Heat kernels on the catalog groups (flat, spectral, wrapped) and the bend
// formula for their complexifications.

#include <string>
#include <vector>

#include "wrapkit/lie_data.hpp"
#include "wrapkit/wrapping.hpp"

namespace wrapkit {

/// Spectral series with more terms than this are refused.
inline constexpr std::size_t kMaxSpectralTerms = 200'000;

/// p_t(x) = (2 pi t)^{-n/2} exp(-|x|^2 / 2t).
double flat_heat_kernel(double x_norm_sq, double t, int n);

/// Shifted: q^rho_t = sum d_l chi_l exp(-|l+rho|^2 t/2). Plain: exponent
/// |l+rho|^2 - |rho|^2. Densities against normalised Haar measure. Throws
/// ResourceError when t is too small for the series.
double spectral_heat_kernel(const GroupSpec& g, const TorusPoint& h, double t, bool shifted, double tol);
/// The same series as a CentralFunction.
CentralFunction spectral_heat_series(const GroupSpec& g, double t, bool shifted, double tol);

/// vol(G) sum_gamma p_t(H + gamma) / j(H + gamma); equals the shifted
/// spectral kernel.
double wrapped_heat_kernel(const GroupSpec& g, const TorusPoint& h, double t, double tol);

enum class KernelPath { spectral, wrapped };
std::string to_string(KernelPath p);

struct KernelValue {
  double value = 0.0;
  KernelPath path = KernelPath::spectral;
};

/// Shifted kernel by whichever evaluator is reliable at (H, t): spectral at
/// or near singular H, wrapped for small t, spectral otherwise.
KernelValue heat_kernel_auto(const GroupSpec& g, const TorusPoint& h, double t, double tol);
KernelPath preferred_path(const GroupSpec& g, const TorusPoint& h, double t);

struct SemigroupGap {
  double coefficient_gap = 0.0;  // exact coefficients, relative
  double pointwise_gap = 0.0;    // through torus quadrature
};

/// Compares q_{t+s} with q_t *_G q_s (plain kernels). The quadrature side
/// evaluates q_t and q_s pointwise, recovers their coefficients on the torus
/// grid and convolves.
SemigroupGap semigroup_gap(const GroupSpec& g, double t, double s, const std::vector<TorusPoint>& points, double tol,
                           unsigned threads = 1);

/// Complexification G_C of a catalog group: same root data, real dimension
/// 2 dim G. Points H lie in a = i t with the coordinates of t.
struct ComplexGroupSpec {
  std::string name;
  GroupSpec compact;
  int real_dim = 0;
};

ComplexGroupSpec complexify(const GroupSpec& g);

/// prod_{a>0} sinh(a(H)/2) / (a(H)/2).
double j_complex(const ComplexGroupSpec& gc, const TorusPoint& h);
double log_j_complex(const ComplexGroupSpec& gc, const TorusPoint& h);

/// (2 pi t)^{-n/2} exp(-|H|^2 / 2t) / j_complex(H), n = real_dim.
double bend_complex(const ComplexGroupSpec& gc, const TorusPoint& h, double t);
double log_bend_complex(const ComplexGroupSpec& gc, const TorusPoint& h, double t);

}  // namespace wrapkit
