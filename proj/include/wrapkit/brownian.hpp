#pragma once

// Monte Carlo Brownian motion on the Lie algebra and on the group, and the
// stochastic checks of the wrapping map.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "wrapkit/lie_data.hpp"
#include "wrapkit/realization.hpp"
#include "wrapkit/wrapping.hpp"

namespace wrapkit {

/// Philox4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Standard normals for one path: key = seed, counter = (block, path, stream).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t path, std::uint32_t stream);
  double next();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t path_;
  std::uint32_t stream_;
  std::uint32_t block_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct SdeConfig {
  double t = 1.0;
  double step = 1e-3;
  std::int64_t paths = 100'000;
  std::uint64_t seed = 42;
  std::int64_t chunk = 1000;  // paths per reduction chunk
  unsigned threads = 1;       // does not affect results
  double cost_cap = 2e10;     // paths * steps
};

/// Throws DomainError unless 0 < step <= min(t, 0.01), t/step is an integer,
/// paths and chunk are positive and paths * steps <= cost_cap.
void validate(const SdeConfig& cfg);
std::int64_t step_count(const SdeConfig& cfg);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

/// Exact endpoint zeta_t ~ N(0, t I) of Brownian motion on R^dim for one path.
Vector sample_flat_endpoint(const SdeConfig& cfg, int dim, std::int64_t path);

/// Geodesic Euler endpoint of Brownian motion on G started at the identity,
/// xi_{k+1} = xi_k exp(sqrt(h) sum_i z_i X_i).
Matrix sample_group_endpoint(const GroupSpec& g, const SdeConfig& cfg, std::int64_t path);
/// The same endpoint reduced to its alcove coordinate; reports the largest
/// unitarity defect seen before each renormalisation.
TorusPoint sample_group_coordinate(const GroupSpec& g, const SdeConfig& cfg, std::int64_t path, double* max_defect);

/// exp(-|rho|^2 t/2): the factor relating plain-BM expectations to the
/// shifted semigroup.
double feynman_kac_weight(const GroupSpec& g, double t);

/// E[f(xi_t)] over group endpoints, reduced chunk by chunk in a fixed order.
McEstimate group_expectation(const GroupSpec& g, const CentralEvaluator& f, const SdeConfig& cfg,
                             double* max_defect = nullptr);
/// E[j(zeta_t) f(exp zeta_t)] over flat endpoints.
McEstimate flat_expectation(const GroupSpec& g, const CentralEvaluator& f, const SdeConfig& cfg);

struct WrapBmReport {
  McEstimate lhs;  // E[j f(exp zeta_t)]
  McEstimate rhs;  // feynman_kac_weight * E[f(xi_t)]
  double z = 0.0;
  double bias_allowance = 0.0;  // 5 h
  double max_defect = 0.0;
  bool pass = false;  // |lhs - rhs| <= 3 sigma + 5 h
};

WrapBmReport wrap_bm_check(const GroupSpec& g, const CentralEvaluator& f, const SdeConfig& cfg);

struct DecayReport {
  McEstimate estimate;  // E[Re chi_lambda(xi_t)]
  double exact = 0.0;   // d e^{-(|l+rho|^2 - |rho|^2) t/2}
  double scheme = 0.0;  // exact expectation under the Euler scheme
  double bias_allowance = 0.0;
  double max_defect = 0.0;
  bool pass = false;  // |estimate - exact| <= 3 std_error + 5 h
};

DecayReport spectral_decay_check(const GroupSpec& g, const IntVector& weight, const SdeConfig& cfg);

/// E[chi_lambda(xi_t)] under the geodesic Euler scheme with step h, by
/// quadrature: d (E[chi(exp sqrt(h) Z)] / d)^{t/h}.
double scheme_character_expectation(const GroupSpec& g, const IntVector& weight, double t, double h);
/// bias(h) / bias(h/2) of the scheme; 2 for a first-order scheme.
double weak_order_ratio(const GroupSpec& g, const IntVector& weight, double t, double h);

struct DensityBin {
  double lo = 0.0, hi = 0.0;
  double expected = 0.0;  // expected count
  std::int64_t observed = 0;
  double deviation = 0.0;  // |observed - expected| / expected
  double threshold = 0.0;  // 4 / sqrt(expected)
  bool used = false;       // expected >= 100
};

struct DensityReport {
  std::vector<DensityBin> bins;
  double max_deviation = 0.0;  // over used bins
  double max_defect = 0.0;
  bool pass = false;
};

/// Histogram of alcove coordinates of group endpoints against
/// q_t |delta|^2 / vol(T) on the alcove (rank-one groups). Throws
/// ResolutionError when more than half of the bins expect fewer than 100
/// counts.
DensityReport empirical_density_check(const GroupSpec& g, const SdeConfig& cfg, int bins);

}  // namespace wrapkit
