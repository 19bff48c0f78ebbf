#include "wrapkit/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wrapkit/errors.hpp"

namespace wrapkit {
namespace {

constexpr double kPi = std::numbers::pi;

void check_time(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(what) + ": t must be positive");
}

void check_tol(double tol, const char* what) {
  if (!(tol > 0.0 && tol < 1.0)) throw DomainError(std::string(what) + ": tol must lie in (0, 1)");
}

// p_t with its bounds; the Fourier pair is exact so the quadrature spot check is skipped.
RadialFunction heat_function(int d, double t) {
  return RadialFunction(
      d, [d, t](double r) { return flat_heat_kernel(r * r, t, d); },
      RadialFunction::Profile([t](double k) { return std::exp(-0.5 * k * k * t); }),
      GaussianBound{std::pow(2.0 * kPi * t, -0.5 * d), t}, GaussianBound{1.0, 1.0 / t}, false);
}

double min_half_root_sine(const GroupSpec& g, const TorusPoint& h) {
  double m = 1.0;
  for (const auto& a : g.positive_roots) m = std::min(m, std::abs(std::sin(0.5 * a.dot(h.coords))));
  return m;
}

double log_sinhc(double x) {
  x = std::abs(x);
  if (x < 1e-4) return x * x / 6.0;
  if (x > 20.0) return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0 * x);
  return std::log(std::sinh(x) / x);
}

}  // namespace

double flat_heat_kernel(double x_norm_sq, double t, int n) {
  check_time(t, "flat_heat_kernel");
  if (n < 1) throw DomainError("flat_heat_kernel: dimension must be positive");
  if (!(x_norm_sq >= 0.0)) throw DomainError("flat_heat_kernel: |x|^2 must be nonnegative");
  return std::pow(2.0 * kPi * t, -0.5 * n) * std::exp(-x_norm_sq / (2.0 * t));
}

CentralFunction spectral_heat_series(const GroupSpec& g, double t, bool shifted, double tol) {
  check_time(t, "spectral_heat_kernel");
  check_tol(tol, "spectral_heat_kernel");
  const double unshift = shifted ? 0.0 : g.rho_norm_sq;
  const double cutoff = spectral_cutoff(g, heat_function(g.dim, t), tol * std::exp(-0.5 * unshift * t));
  std::vector<Weight> weights;
  try {
    weights = enumerate_weights(g, cutoff, kMaxSpectralTerms);
  } catch (const ResourceError&) {
    throw ResourceError("spectral_heat_kernel: t = " + std::to_string(t) + " needs more than " +
                        std::to_string(kMaxSpectralTerms) + " terms on " + g.name +
                        "; use the wrapped evaluator for small t");
  }
  std::vector<CentralFunction::Term> terms;
  terms.reserve(weights.size());
  for (auto& w : weights) {
    const double c = static_cast<double>(w.dimension) * std::exp(-0.5 * (w.lambda_plus_rho_norm_sq - unshift) * t);
    terms.push_back({std::move(w), c});
  }
  return CentralFunction(g, std::move(terms), cutoff);
}

double spectral_heat_kernel(const GroupSpec& g, const TorusPoint& h, double t, bool shifted, double tol) {
  return spectral_heat_series(g, t, shifted, tol)(h);
}

double wrapped_heat_kernel(const GroupSpec& g, const TorusPoint& h, double t, double tol) {
  check_time(t, "wrapped_heat_kernel");
  check_tol(tol, "wrapped_heat_kernel");
  return g.haar_volume * wrap_lattice(g, heat_function(g.dim, t), h, tol / g.haar_volume);
}

std::string to_string(KernelPath p) { return p == KernelPath::wrapped ? "wrapped" : "spectral"; }

KernelPath preferred_path(const GroupSpec& g, const TorusPoint& h, double t) {
  if (min_half_root_sine(g, h) < 1e-3) return KernelPath::spectral;
  if (t < 0.05) return KernelPath::wrapped;
  return KernelPath::spectral;
}

KernelValue heat_kernel_auto(const GroupSpec& g, const TorusPoint& h, double t, double tol) {
  const KernelPath path = preferred_path(g, h, t);
  if (path == KernelPath::wrapped) return {wrapped_heat_kernel(g, h, t, tol), path};
  return {spectral_heat_kernel(g, h, t, true, tol), path};
}

SemigroupGap semigroup_gap(const GroupSpec& g, double t, double s, const std::vector<TorusPoint>& points, double tol,
                           unsigned threads) {
  check_time(t, "semigroup_gap");
  check_time(s, "semigroup_gap");
  const auto qt = spectral_heat_series(g, t, false, tol);
  const auto qs = spectral_heat_series(g, s, false, tol);
  const auto qts = spectral_heat_series(g, t + s, false, tol);

  SemigroupGap gap;
  const auto exact = convolve_central(qt, qs);
  for (const auto& term : qts.terms()) {
    if (!exact.contains(term.weight.coords)) continue;
    const double c = exact.coefficient(term.weight.coords);
    gap.coefficient_gap = std::max(gap.coefficient_gap, std::abs(c - term.coeff) / std::abs(term.coeff));
  }

  const double cutoff = std::max(qt.cutoff(), qs.cutoff());
  const QuadratureGrid grid{required_grid_points(g, cutoff), threads};
  const auto ct = fourier_coefficients(g, [&](const TorusPoint& h) { return qt(h); }, cutoff, grid);
  const auto cs = fourier_coefficients(g, [&](const TorusPoint& h) { return qs(h); }, cutoff, grid);
  const auto conv = convolve_central(ct, cs);
  for (const auto& h : points) gap.pointwise_gap = std::max(gap.pointwise_gap, std::abs(conv(h) - qts(h)));
  return gap;
}

ComplexGroupSpec complexify(const GroupSpec& g) { return {g.name + "_C", g, 2 * g.dim}; }

double log_j_complex(const ComplexGroupSpec& gc, const TorusPoint& h) {
  if (h.coords.size() != gc.compact.rank) throw DomainError("j_complex: point has the wrong rank");
  double s = 0.0;
  for (const auto& a : gc.compact.positive_roots) s += log_sinhc(0.5 * a.dot(h.coords));
  return s;
}

double j_complex(const ComplexGroupSpec& gc, const TorusPoint& h) { return std::exp(log_j_complex(gc, h)); }

double log_bend_complex(const ComplexGroupSpec& gc, const TorusPoint& h, double t) {
  check_time(t, "bend_complex");
  return -0.5 * gc.real_dim * std::log(2.0 * kPi * t) - h.coords.squaredNorm() / (2.0 * t) - log_j_complex(gc, h);
}

double bend_complex(const ComplexGroupSpec& gc, const TorusPoint& h, double t) {
  check_time(t, "bend_complex");
  return flat_heat_kernel(h.coords.squaredNorm(), t, gc.real_dim) / j_complex(gc, h);
}

}  // namespace wrapkit
