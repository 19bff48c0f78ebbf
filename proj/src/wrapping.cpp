#include "wrapkit/wrapping.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wrapkit/errors.hpp"
#include "wrapkit/parallel.hpp"
#include "wrapkit/truncation.hpp"

namespace wrapkit {
namespace {

constexpr double kPi = std::numbers::pi;

double gaussian_profile(int d, double s, double r) {
  return std::pow(2.0 * kPi * s, -0.5 * d) * std::exp(-r * r / (2.0 * s));
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-11);
}

// Product over positive roots of ||alpha|| / <rho, alpha>, so d_lambda <= K ||lambda+rho||^P.
double dimension_growth_constant(const GroupSpec& g) {
  double k = 1.0;
  for (const auto& a : g.positive_roots) k *= a.norm() / a.dot(g.rho);
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// RadialFunction

RadialFunction::RadialFunction(int algebra_dim, Profile profile, std::optional<Profile> fourier,
                               std::optional<GaussianBound> decay, std::optional<GaussianBound> fourier_decay,
                               bool verify)
    : algebra_dim_(algebra_dim),
      profile_(std::move(profile)),
      fourier_(std::move(fourier)),
      decay_(decay),
      fourier_decay_(fourier_decay) {
  if (algebra_dim_ < 1) throw DomainError("RadialFunction: algebra dimension must be positive");
  if (verify) verify_fourier_pair();
}

double RadialFunction::fourier(double k) const {
  if (!fourier_) throw ContractError("radial function has no Fourier-transform contract");
  return (*fourier_)(k);
}

const GaussianBound& RadialFunction::decay() const {
  if (!decay_) throw ContractError("radial function has no spatial decay bound");
  return *decay_;
}

const GaussianBound& RadialFunction::fourier_decay() const {
  if (!fourier_decay_) throw ContractError("radial function has no Fourier decay bound");
  return *fourier_decay_;
}

RadialFunction RadialFunction::laplacian_fourier_only() const {
  if (!fourier_) throw ContractError("laplacian: radial function has no Fourier-transform contract");
  Profile ft = *fourier_;
  std::optional<GaussianBound> fd;
  if (fourier_decay_) fd = GaussianBound{fourier_decay_->amplitude * 4.0 * fourier_decay_->variance / std::numbers::e,
                                         2.0 * fourier_decay_->variance};
  Profile none = [](double) -> double { throw ContractError("radial function has no spatial profile"); };
  return RadialFunction(algebra_dim_, none, Profile([ft](double k) { return -k * k * ft(k); }), std::nullopt, fd,
                        false);
}

void RadialFunction::verify_fourier_pair() const {
  if (!fourier_ || !decay_ || !fourier_decay_) return;
  const int d = algebra_dim_;
  const double extent = std::sqrt(2.0 * decay_->variance * 45.0);
  // Marginal of the radial function along one axis.
  std::function<double(double)> marginal;
  if (d == 1) {
    marginal = profile_;
  } else {
    const double sphere = 2.0 * std::pow(kPi, 0.5 * (d - 1)) / std::tgamma(0.5 * (d - 1));
    marginal = [this, d, extent, sphere](double x) {
      return sphere * integrate([&](double r) { return profile_(std::hypot(x, r)) * std::pow(r, d - 2); }, 0.0,
                                extent);
    };
  }
  const double scale = std::sqrt(fourier_decay_->variance);
  for (double k : {0.5 * scale, 1.0 * scale, 2.0 * scale}) {
    const double numeric = 2.0 * integrate([&](double x) { return marginal(x) * std::cos(k * x); }, 0.0, extent);
    const double claimed = (*fourier_)(k);
    if (std::abs(numeric - claimed) > 1e-6 * std::max(fourier_decay_->amplitude, std::abs(claimed)))
      throw ContractError("radial function: Fourier contract disagrees with quadrature at |xi| = " +
                          std::to_string(k) + " (" + std::to_string(claimed) + " vs " + std::to_string(numeric) +
                          ")");
  }
}

// ---------------------------------------------------------------------------
// Gaussian mixtures

RadialFunction gaussian_mixture(int d, const GaussianMixture& mix) {
  if (mix.empty()) throw DomainError("gaussian_mixture: empty mixture");
  double amp = 0.0, var = 0.0, famp = 0.0, smin = 1e300;
  for (const auto& c : mix) {
    if (!(c.variance > 0.0)) throw DomainError("gaussian_mixture: variances must be positive");
    amp += std::abs(c.weight) * std::pow(2.0 * kPi * c.variance, -0.5 * d);
    var = std::max(var, c.variance);
    famp += std::abs(c.weight);
    smin = std::min(smin, c.variance);
  }
  auto profile = [d, mix](double r) {
    double s = 0.0;
    for (const auto& c : mix) s += c.weight * gaussian_profile(d, c.variance, r);
    return s;
  };
  auto ft = [mix](double k) {
    double s = 0.0;
    for (const auto& c : mix) s += c.weight * std::exp(-0.5 * k * k * c.variance);
    return s;
  };
  return RadialFunction(d, profile, RadialFunction::Profile(ft), GaussianBound{amp, var},
                        GaussianBound{famp, 1.0 / smin});
}

RadialFunction gaussian_mixture_laplacian(int d, const GaussianMixture& mix) {
  if (mix.empty()) throw DomainError("gaussian_mixture_laplacian: empty mixture");
  double amp = 0.0, var = 0.0, famp = 0.0, smin = 1e300;
  for (const auto& c : mix) {
    if (!(c.variance > 0.0)) throw DomainError("gaussian_mixture_laplacian: variances must be positive");
    amp += std::abs(c.weight) * (d + 4.0 / std::numbers::e) / c.variance * std::pow(2.0 * kPi * c.variance, -0.5 * d);
    var = std::max(var, 2.0 * c.variance);
    famp += std::abs(c.weight) * 4.0 / (std::numbers::e * c.variance);
    smin = std::min(smin, c.variance);
  }
  auto profile = [d, mix](double r) {
    double s = 0.0;
    for (const auto& c : mix)
      s += c.weight * gaussian_profile(d, c.variance, r) * (r * r / (c.variance * c.variance) - d / c.variance);
    return s;
  };
  auto ft = [mix](double k) {
    double s = 0.0;
    for (const auto& c : mix) s -= c.weight * k * k * std::exp(-0.5 * k * k * c.variance);
    return s;
  };
  return RadialFunction(d, profile, RadialFunction::Profile(ft), GaussianBound{amp, var},
                        GaussianBound{famp, 2.0 / smin});
}

RadialFunction heat_gaussian(int d, double t) {
  if (!(t > 0.0)) throw DomainError("heat_gaussian: t must be positive");
  return gaussian_mixture(d, {{1.0, t}});
}

GaussianMixture convolve(const GaussianMixture& a, const GaussianMixture& b) {
  GaussianMixture out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back({x.weight * y.weight, x.variance + y.variance});
  return out;
}

GaussianMixture parse_mixture(std::string_view text) {
  GaussianMixture mix;
  auto parse_double = [&](std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw DomainError("mixture: cannot parse number '" + std::string(s) + "'");
    return v;
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, end - pos);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw DomainError("mixture: expected weight:variance, got '" + std::string(item) + "'");
    GaussianComponent c{parse_double(item.substr(0, colon)), parse_double(item.substr(colon + 1))};
    if (!(c.variance > 0.0) || !std::isfinite(c.weight)) throw DomainError("mixture: variances must be positive");
    mix.push_back(c);
    pos = end + 1;
  }
  return mix;
}

// ---------------------------------------------------------------------------
// CentralFunction

bool CentralFunction::CoordsLess::operator()(const IntVector& a, const IntVector& b) const {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

CentralFunction::CentralFunction(GroupSpec group, std::vector<Term> terms, double cutoff)
    : group_(std::move(group)), terms_(std::move(terms)), cutoff_(cutoff) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (!is_dominant(group_, t.weight.coords)) throw DomainError("CentralFunction: key is not dominant");
    if (!std::isfinite(t.coeff)) throw DomainError("CentralFunction: non-finite coefficient");
    if (!index_.emplace(t.weight.coords, i).second) throw DomainError("CentralFunction: duplicate weight");
  }
}

double CentralFunction::coefficient(const IntVector& coords) const {
  const auto it = index_.find(coords);
  return it == index_.end() ? 0.0 : terms_[it->second].coeff;
}

bool CentralFunction::contains(const IntVector& coords) const { return index_.count(coords) > 0; }

std::complex<double> CentralFunction::evaluate_complex(const TorusPoint& h) const {
  const CharacterEvaluator chi(group_, h);
  std::complex<double> s = 0.0;
  for (const auto& t : terms_) s += t.coeff * chi(t.weight);
  return s;
}

// ---------------------------------------------------------------------------
// Wrapping

double wrap_lattice(const GroupSpec& g, const RadialFunction& nu, const TorusPoint& h, double tol) {
  if (!(tol > 0.0)) throw DomainError("wrap_lattice: tol must be positive");
  const GaussianBound& decay = nu.decay();

  double sine_product = 1.0, half_root_norms = 1.0;
  for (const auto& a : g.positive_roots) {
    sine_product *= std::abs(std::sin(0.5 * a.dot(h.coords)));
    half_root_norms *= 0.5 * a.norm();
  }
  if (sine_product < 1e-12) {
    double reach = h.coords.norm();
    for (Eigen::Index i = 0; i < g.integer_lattice_basis.cols(); ++i) reach += 2.0 * g.integer_lattice_basis.col(i).norm();
    for (const auto& gamma : lattice_points(g, h, reach)) {
      if (std::abs(j_compact(g, TorusPoint(h.coords + gamma))) <= 1e-12) {
        std::string where;
        for (Eigen::Index i = 0; i < gamma.size(); ++i) where += (i ? "," : "") + std::to_string(gamma(i));
        throw SingularityError("wrap_lattice: j vanishes at H + gamma for gamma = (" + where + "); H is singular");
      }
    }
    throw SingularityError("wrap_lattice: H is singular");
  }

  // |nu/j|(x) <= A prod(||a||/2) / prod|sin(a(H)/2)| * ||x||^P exp(-||x||^2 / 2 var).
  const double scale = decay.amplitude * half_root_norms / sine_product;
  const double power = static_cast<double>(g.positive_roots.size());
  const double target = tol / 10.0;
  double radius = 0.0;
  if (scale > 0.0) {
    radius = radius_for_tail(lattice_geometry(g.integer_lattice_basis), 0.5 / decay.variance, power, target / scale);
  }
  radius = std::max(radius, 1e-9);
  double sum = 0.0;
  for (const auto& gamma : lattice_points(g, h, radius)) {
    const TorusPoint x(h.coords + gamma);
    const double j = j_compact(g, x);
    if (std::abs(j) <= 1e-12) {
      std::string where;
      for (Eigen::Index i = 0; i < gamma.size(); ++i) where += (i ? "," : "") + std::to_string(gamma(i));
      throw SingularityError("wrap_lattice: j vanishes at H + gamma for gamma = (" + where + ")");
    }
    sum += nu(x) / j;
  }
  return sum;
}

double spectral_cutoff(const GroupSpec& g, const RadialFunction& nu, double tol) {
  if (!(tol > 0.0)) throw DomainError("spectral_cutoff: tol must be positive");
  const GaussianBound& fd = nu.fourier_decay();
  const double k = dimension_growth_constant(g);
  const double scale = k * k * fd.amplitude;
  if (scale == 0.0) return g.rho_norm_sq + 1.0;
  const double power = 2.0 * static_cast<double>(g.positive_roots.size());
  const double r = radius_for_tail(lattice_geometry(g.weight_lattice_basis), 0.5 / fd.variance, power, tol / scale);
  return std::max(r * r, g.rho_norm_sq + 1e-9);
}

CentralFunction wrap_spectral(const GroupSpec& g, const RadialFunction& nu, double cutoff) {
  if (!nu.has_fourier()) throw ContractError("wrap_spectral: radial function has no Fourier-transform contract");
  std::vector<CentralFunction::Term> terms;
  for (auto& w : enumerate_weights(g, cutoff)) {
    const double c = static_cast<double>(w.dimension) * nu.fourier(std::sqrt(w.lambda_plus_rho_norm_sq));
    terms.push_back({std::move(w), c});
  }
  return CentralFunction(g, std::move(terms), cutoff);
}

namespace {

// Largest |<w(mu), gamma_k>| / 2 pi over Weyl elements and Gamma generators.
double max_frequency(const GroupSpec& g, const Vector& mu) {
  double f = 0.0;
  for (const auto& w : g.weyl_group) {
    const Vector wm = w.matrix * mu;
    for (Eigen::Index k = 0; k < g.integer_lattice_basis.cols(); ++k)
      f = std::max(f, std::abs(wm.dot(g.integer_lattice_basis.col(k))) / (2.0 * kPi));
  }
  return f;
}

}  // namespace

int required_grid_points(const GroupSpec& g, double cutoff) {
  double f = 0.0;
  for (const auto& w : enumerate_weights(g, cutoff)) f = std::max(f, max_frequency(g, weight_vector(g, w.coords) + g.rho));
  return static_cast<int>(std::floor(2.0 * f + 1e-9)) + 1;
}

CentralFunction fourier_coefficients(const GroupSpec& g, const CentralEvaluator& f, double cutoff,
                                     const QuadratureGrid& grid) {
  const int needed = required_grid_points(g, cutoff);
  if (grid.points_per_dim < needed)
    throw ResolutionError("fourier_coefficients: grid of " + std::to_string(grid.points_per_dim) +
                          " points per dimension cannot resolve cutoff " + std::to_string(cutoff) + "; need at least " +
                          std::to_string(needed));
  const int n = grid.points_per_dim;
  std::size_t total = 1;
  for (int i = 0; i < g.rank; ++i) total *= static_cast<std::size_t>(n);

  // The offset 1/3 keeps every node off the walls of every catalog group.
  struct Node {
    std::vector<Vector> transformed;
    std::complex<double> weight;  // f(H) A_rho(H)
  };
  std::vector<Node> nodes(total);
  parallel_for(total, grid.threads, [&](std::size_t idx) {
    Vector u(g.rank);
    std::size_t rest = idx;
    for (int i = 0; i < g.rank; ++i) {
      u(i) = (static_cast<double>(rest % static_cast<std::size_t>(n)) + 1.0 / 3.0) / n;
      rest /= static_cast<std::size_t>(n);
    }
    const TorusPoint h(g.integer_lattice_basis * u);
    Node node;
    for (const auto& w : g.weyl_group) node.transformed.push_back(w.matrix.transpose() * h.coords);
    std::complex<double> a_rho = 0.0;
    for (std::size_t k = 0; k < g.weyl_group.size(); ++k)
      a_rho += static_cast<double>(g.weyl_group[k].sign) * std::polar(1.0, g.rho.dot(node.transformed[k]));
    node.weight = f(h) * a_rho;
    nodes[idx] = std::move(node);
  });

  auto weights = enumerate_weights(g, cutoff);
  std::vector<double> coeffs(weights.size());
  const double norm = 1.0 / (static_cast<double>(total) * static_cast<double>(g.weyl_group.size()));
  parallel_for(weights.size(), grid.threads, [&](std::size_t i) {
    const Vector mu = weight_vector(g, weights[i].coords) + g.rho;
    std::complex<double> s = 0.0;
    for (const auto& node : nodes) {
      std::complex<double> a = 0.0;
      for (std::size_t k = 0; k < node.transformed.size(); ++k)
        a += static_cast<double>(g.weyl_group[k].sign) * std::polar(1.0, mu.dot(node.transformed[k]));
      s += node.weight * std::conj(a);
    }
    coeffs[i] = s.real() * norm;
  });
  std::vector<CentralFunction::Term> terms;
  for (std::size_t i = 0; i < weights.size(); ++i) terms.push_back({std::move(weights[i]), coeffs[i]});
  return CentralFunction(g, std::move(terms), cutoff);
}

CentralFunction convolve_central(const CentralFunction& a, const CentralFunction& b) {
  if (a.group().name != b.group().name) throw DomainError("convolve_central: group mismatch (" + a.group().name +
                                                          " vs " + b.group().name + ")");
  std::vector<CentralFunction::Term> terms;
  for (const auto& t : a.terms()) {
    if (!b.contains(t.weight.coords)) continue;
    terms.push_back({t.weight, t.coeff * b.coefficient(t.weight.coords) / static_cast<double>(t.weight.dimension)});
  }
  return CentralFunction(a.group(), std::move(terms), std::min(a.cutoff(), b.cutoff()));
}

CentralFunction laplacian_spectral(const CentralFunction& f, bool shifted) {
  const double shift = shifted ? 0.0 : f.group().rho_norm_sq;
  std::vector<CentralFunction::Term> terms;
  for (const auto& t : f.terms()) terms.push_back({t.weight, -(t.weight.lambda_plus_rho_norm_sq - shift) * t.coeff});
  return CentralFunction(f.group(), std::move(terms), f.cutoff());
}

double wraplap_check(const GroupSpec& g, const RadialFunction& nu, double cutoff) {
  const auto lhs = wrap_spectral(g, nu.laplacian_fourier_only(), cutoff);
  const auto rhs = laplacian_spectral(wrap_spectral(g, nu, cutoff), true);
  double gap = 0.0;
  for (const auto& t : lhs.terms()) gap = std::max(gap, std::abs(t.coeff - rhs.coefficient(t.weight.coords)));
  return gap;
}

WrapFormulaGap wrap_formula_gap(const GroupSpec& g, const GaussianMixture& a, const GaussianMixture& b,
                                const std::vector<TorusPoint>& points, double tol, unsigned threads) {
  const auto nu_a = gaussian_mixture(g.dim, a);
  const auto nu_b = gaussian_mixture(g.dim, b);
  const auto nu_ab = gaussian_mixture(g.dim, convolve(a, b));
  const double cutoff = std::max(spectral_cutoff(g, nu_a, tol), spectral_cutoff(g, nu_b, tol));
  const auto fa = wrap_spectral(g, nu_a, cutoff);
  const auto fb = wrap_spectral(g, nu_b, cutoff);
  const auto fab = wrap_spectral(g, nu_ab, cutoff);

  WrapFormulaGap gap;
  const auto exact = convolve_central(fa, fb);
  for (const auto& t : fab.terms()) {
    const double d = std::abs(exact.coefficient(t.weight.coords) - t.coeff);
    if (d > 0.0) gap.coefficient_gap = std::max(gap.coefficient_gap, d / std::abs(t.coeff));
  }

  const QuadratureGrid grid{required_grid_points(g, cutoff), threads};
  const auto qa = fourier_coefficients(g, [&](const TorusPoint& h) { return fa(h); }, cutoff, grid);
  const auto qb = fourier_coefficients(g, [&](const TorusPoint& h) { return fb(h); }, cutoff, grid);
  const auto conv = convolve_central(qa, qb);
  for (const auto& h : points) gap.pointwise_gap = std::max(gap.pointwise_gap, std::abs(conv(h) - fab(h)));
  return gap;
}

std::vector<PoissonRow> poisson_rows(const GroupSpec& g, const RadialFunction& nu,
                                     const std::vector<TorusPoint>& grid, double tol) {
  const auto spectral = wrap_spectral(g, nu, spectral_cutoff(g, nu, tol / 10.0));
  std::vector<PoissonRow> rows;
  for (const auto& h : grid) {
    PoissonRow row;
    row.h = h;
    row.lattice = g.haar_volume * wrap_lattice(g, nu, h, tol / g.haar_volume);
    row.spectral = spectral(h);
    row.gap = std::abs(row.lattice - row.spectral);
    rows.push_back(std::move(row));
  }
  return rows;
}

double poisson_gap(const GroupSpec& g, const RadialFunction& nu, const std::vector<TorusPoint>& grid, double tol) {
  double gap = 0.0;
  for (const auto& r : poisson_rows(g, nu, grid, tol)) gap = std::max(gap, r.gap);
  return gap;
}

}  // namespace wrapkit
