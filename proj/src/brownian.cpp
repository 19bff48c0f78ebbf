#include "wrapkit/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include "wrapkit/errors.hpp"
#include "wrapkit/heat.hpp"
#include "wrapkit/parallel.hpp"

namespace wrapkit {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr int kRenormEvery = 100;
constexpr double kMaxDefect = 1e-6;

// ---------------------------------------------------------------------------
// Per-factor states of the simulator

struct SimState {
  FactorKind kind;
  double angle = 0.0;                                  // circle
  Eigen::Vector4d quat{1.0, 0.0, 0.0, 0.0};           // su2: q0 I + i (q1 s3 + q2 s1 + q3 s2)
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();  // so3
  Eigen::Matrix3cd unit = Eigen::Matrix3cd::Identity();  // su3
};

const std::array<Eigen::Matrix3cd, 8>& gell_mann_halves() {
  // i lambda_a / 2 in the order of the algebra basis (lambda_3, lambda_8, then 1, 2, 4, 5, 6, 7).
  static const std::array<Eigen::Matrix3cd, 8> basis = [] {
    std::array<Eigen::Matrix3cd, 8> out;
    GroupSpec g = make_group("su3");
    const auto b = algebra_basis(g);
    for (int a = 0; a < 8; ++a) out[static_cast<std::size_t>(a)] = b[static_cast<std::size_t>(a)];
    return out;
  }();
  return basis;
}

void quat_mul_right(Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  const Eigen::Vector3d av = a.tail<3>(), bv = b.tail<3>();
  const double w = a(0) * b(0) - av.dot(bv);
  const Eigen::Vector3d v = a(0) * bv + b(0) * av - av.cross(bv);
  a(0) = w;
  a.tail<3>() = v;
}

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& c) {
  // c in the order (z, x, y) of the algebra basis.
  const double r = c.norm();
  Eigen::Matrix3d k;
  k << 0.0, -c(0), c(2), c(0), 0.0, -c(1), -c(2), c(1), 0.0;
  if (r == 0.0) return Eigen::Matrix3d::Identity();
  k /= r;
  return Eigen::Matrix3d::Identity() + std::sin(r) * k + (1.0 - std::cos(r)) * (k * k);
}

Eigen::Matrix3cd su3_step(const double* c) {
  Eigen::Matrix3cd a = Eigen::Matrix3cd::Zero();
  const auto& basis = gell_mann_halves();
  for (int i = 0; i < 8; ++i) a += c[i] * basis[static_cast<std::size_t>(i)];
  Eigen::Matrix3cd e = Eigen::Matrix3cd::Identity();
  for (int k = 16; k >= 1; --k) e = Eigen::Matrix3cd::Identity() + (a * e) / static_cast<double>(k);
  return e;
}

// Returns the defect before renormalisation.
double renormalise(SimState& s) {
  switch (s.kind) {
    case FactorKind::circle:
      s.angle = std::remainder(s.angle, 2.0 * kPi);
      return 0.0;
    case FactorKind::su2: {
      const double n2 = s.quat.squaredNorm();
      s.quat /= std::sqrt(n2);
      return std::abs(n2 - 1.0);
    }
    case FactorKind::so3: {
      const double defect = (s.rot.transpose() * s.rot - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
      Eigen::Vector3d c0 = s.rot.col(0).normalized();
      Eigen::Vector3d c1 = (s.rot.col(1) - c0.dot(s.rot.col(1)) * c0).normalized();
      s.rot.col(0) = c0;
      s.rot.col(1) = c1;
      s.rot.col(2) = c0.cross(c1);
      return defect;
    }
    case FactorKind::su3: {
      const double defect = (s.unit.adjoint() * s.unit - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff();
      for (int i = 0; i < 3; ++i) {
        Eigen::Vector3cd v = s.unit.col(i);
        for (int k = 0; k < i; ++k) v -= s.unit.col(k).dot(v) * s.unit.col(k);
        s.unit.col(i) = v.normalized();
      }
      const cd det = s.unit.determinant();
      s.unit.col(2) *= std::conj(det) / std::abs(det);
      return defect;
    }
  }
  return 0.0;
}

std::vector<SimState> simulate(const GroupSpec& g, const SdeConfig& cfg, std::int64_t path, double* max_defect) {
  std::vector<SimState> states;
  for (const auto& f : g.factors) states.push_back(SimState{f.kind});
  NormalStream rng(cfg.seed, static_cast<std::uint64_t>(path), 1);
  const std::int64_t steps = step_count(cfg);
  const double sq = std::sqrt(cfg.t / static_cast<double>(steps));
  double c[8];
  double defect = 0.0;
  for (std::int64_t k = 1; k <= steps; ++k) {
    for (auto& s : states) {
      switch (s.kind) {
        case FactorKind::circle:
          s.angle += sq * rng.next();
          break;
        case FactorKind::su2: {
          for (int i = 0; i < 3; ++i) c[i] = sq * rng.next();
          const double r = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
          const double sn = r > 0.0 ? std::sin(0.5 * r) / r : 0.5;
          quat_mul_right(s.quat, Eigen::Vector4d(std::cos(0.5 * r), sn * c[0], sn * c[1], sn * c[2]));
          break;
        }
        case FactorKind::so3: {
          for (int i = 0; i < 3; ++i) c[i] = sq * rng.next();
          s.rot = s.rot * rodrigues(Eigen::Vector3d(c[0], c[1], c[2]));
          break;
        }
        case FactorKind::su3: {
          for (int i = 0; i < 8; ++i) c[i] = sq * rng.next();
          s.unit = s.unit * su3_step(c);
          break;
        }
      }
    }
    if (k % kRenormEvery == 0 || k == steps) {
      for (auto& s : states) defect = std::max(defect, renormalise(s));
      if (defect > kMaxDefect)
        throw NumericalError("group path left the manifold: unitarity defect " + std::to_string(defect) +
                             " before renormalisation at step " + std::to_string(k));
    }
  }
  if (max_defect) *max_defect = std::max(*max_defect, defect);
  return states;
}

TorusPoint coordinate_of(const GroupSpec& g, const std::vector<SimState>& states) {
  Vector h(g.rank);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    const int o = g.factors[i].torus_offset;
    switch (s.kind) {
      case FactorKind::circle: h(o) = std::remainder(s.angle, 2.0 * kPi); break;
      case FactorKind::su2: h(o) = 2.0 * std::atan2(s.quat.tail<3>().norm(), s.quat(0)); break;
      case FactorKind::so3: {
        const Eigen::Matrix3d& r = s.rot;
        const Eigen::Vector3d axis(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
        h(o) = std::atan2(0.5 * axis.norm(), 0.5 * (r.trace() - 1.0));
        break;
      }
      case FactorKind::su3: {
        Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(s.unit, false);
        if (es.info() != Eigen::Success) throw NumericalError("su3 endpoint: eigenvalue computation failed");
        double phases[3];
        for (int k = 0; k < 3; ++k) phases[k] = std::arg(es.eigenvalues()(k));
        const Eigen::Vector2d xy = su3_alcove_from_phases(phases);
        h(o) = xy(0);
        h(o + 1) = xy(1);
        break;
      }
    }
  }
  return TorusPoint(std::move(h));
}

// ---------------------------------------------------------------------------
// Chunked reduction

struct Moments {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double max_defect = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
    max_defect = std::max(max_defect, o.max_defect);
  }
};

template <typename Acc, typename Fn>
std::vector<Acc> run_chunks(const SdeConfig& cfg, Fn fn) {
  validate(cfg);
  const std::int64_t chunks = (cfg.paths + cfg.chunk - 1) / cfg.chunk;
  std::vector<Acc> acc(static_cast<std::size_t>(chunks));
  parallel_for(static_cast<std::size_t>(chunks), cfg.threads, [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * cfg.chunk;
    const std::int64_t end = std::min(cfg.paths, begin + cfg.chunk);
    fn(begin, end, acc[c]);
  });
  return acc;
}

McEstimate to_estimate(const std::vector<Moments>& chunks, std::uint64_t seed, double* max_defect) {
  Moments total;
  for (const auto& m : chunks) total.merge(m);
  McEstimate e;
  e.n = total.n;
  e.mean = total.mean;
  e.std_error = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n)) : 0.0;
  e.seed = seed;
  if (max_defect) *max_defect = std::max(*max_defect, total.max_defect);
  return e;
}

double uniform53(std::uint32_t a, std::uint32_t b) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(a >> 5) << 26) | (b >> 6);
  return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

// Composite Gauss-Legendre; the integrands are smooth Gaussian-weighted functions.
template <typename F>
double integrate_line(F f, double a, double b) {
  constexpr int pieces = 16;
  const double w = (b - a) / pieces;
  double s = 0.0;
  for (int i = 0; i < pieces; ++i)
    s += boost::math::quadrature::gauss<double, 30>::integrate(f, a + i * w, a + (i + 1) * w);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Random numbers

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u, w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += w0;
    key[1] += w1;
  }
  return ctr;
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t path, std::uint32_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, path_(path), stream_(stream) {}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const auto r = philox4x32({block_++, static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32), stream_},
                            key_);
  const double u1 = uniform53(r[0], r[1]);
  const double u2 = uniform53(r[2], r[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return radius * std::cos(2.0 * kPi * u2);
}

// ---------------------------------------------------------------------------
// Configuration

std::int64_t step_count(const SdeConfig& cfg) {
  return static_cast<std::int64_t>(std::llround(cfg.t / cfg.step));
}

void validate(const SdeConfig& cfg) {
  if (!(cfg.t > 0.0) || !std::isfinite(cfg.t)) throw DomainError("sde: t must be positive");
  if (!(cfg.step > 0.0) || cfg.step > cfg.t) throw DomainError("sde: step must lie in (0, t]");
  if (cfg.step > 0.01) throw DomainError("sde: step must not exceed 0.01");
  const std::int64_t steps = step_count(cfg);
  if (std::abs(static_cast<double>(steps) * cfg.step - cfg.t) > 1e-9 * cfg.t)
    throw DomainError("sde: t must be an integer multiple of step");
  if (steps >= (std::int64_t{1} << 31)) throw DomainError("sde: too many steps");
  if (cfg.paths < 1) throw DomainError("sde: paths must be positive");
  if (cfg.chunk < 1) throw DomainError("sde: chunk must be positive");
  if (static_cast<double>(cfg.paths) * static_cast<double>(steps) > cfg.cost_cap)
    throw ResourceError("sde: paths * steps = " + std::to_string(static_cast<double>(cfg.paths) * steps) +
                        " exceeds the cost cap " + std::to_string(cfg.cost_cap));
}

// ---------------------------------------------------------------------------
// Sampling

Vector sample_flat_endpoint(const SdeConfig& cfg, int dim, std::int64_t path) {
  if (dim < 1) throw DomainError("sample_flat_endpoint: dimension must be positive");
  NormalStream rng(cfg.seed, static_cast<std::uint64_t>(path), 0);
  const double sd = std::sqrt(cfg.t);
  Vector z(dim);
  for (int i = 0; i < dim; ++i) z(i) = sd * rng.next();
  return z;
}

Matrix sample_group_endpoint(const GroupSpec& g, const SdeConfig& cfg, std::int64_t path) {
  validate(cfg);
  const auto states = simulate(g, cfg, path, nullptr);
  Matrix x = Matrix::Zero(g.matrix_size, g.matrix_size);
  const auto basis = algebra_basis(g);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& f = g.factors[i];
    const auto& s = states[i];
    auto block = x.block(f.matrix_offset, f.matrix_offset, f.matrix_size, f.matrix_size);
    switch (s.kind) {
      case FactorKind::circle: block(0, 0) = std::polar(1.0, s.angle); break;
      case FactorKind::su2: {
        // i s_a / 2 are the basis blocks, so i s_a = 2 X_a.
        Matrix u = s.quat(0) * Matrix::Identity(2, 2);
        for (int a = 0; a < 3; ++a)
          u += 2.0 * s.quat(a + 1) *
               basis[static_cast<std::size_t>(f.algebra_offset + a)].block(f.matrix_offset, f.matrix_offset, 2, 2);
        block = u;
        break;
      }
      case FactorKind::so3: block = s.rot.cast<cd>(); break;
      case FactorKind::su3: block = s.unit; break;
    }
  }
  return x;
}

TorusPoint sample_group_coordinate(const GroupSpec& g, const SdeConfig& cfg, std::int64_t path, double* max_defect) {
  validate(cfg);
  return coordinate_of(g, simulate(g, cfg, path, max_defect));
}

double feynman_kac_weight(const GroupSpec& g, double t) {
  if (!(t >= 0.0)) throw DomainError("feynman_kac_weight: t must be nonnegative");
  return std::exp(-0.5 * g.rho_norm_sq * t);
}

McEstimate group_expectation(const GroupSpec& g, const CentralEvaluator& f, const SdeConfig& cfg, double* max_defect) {
  const auto chunks = run_chunks<Moments>(cfg, [&](std::int64_t begin, std::int64_t end, Moments& m) {
    for (std::int64_t p = begin; p < end; ++p) m.add(f(coordinate_of(g, simulate(g, cfg, p, &m.max_defect))));
  });
  return to_estimate(chunks, cfg.seed, max_defect);
}

McEstimate flat_expectation(const GroupSpec& g, const CentralEvaluator& f, const SdeConfig& cfg) {
  const auto chunks = run_chunks<Moments>(cfg, [&](std::int64_t begin, std::int64_t end, Moments& m) {
    for (std::int64_t p = begin; p < end; ++p) {
      const TorusPoint h = algebra_to_torus(g, sample_flat_endpoint(cfg, g.dim, p));
      m.add(j_compact(g, h) * f(h));
    }
  });
  return to_estimate(chunks, cfg.seed, nullptr);
}

// ---------------------------------------------------------------------------
// Checks

WrapBmReport wrap_bm_check(const GroupSpec& g, const CentralEvaluator& f, const SdeConfig& cfg) {
  WrapBmReport r;
  r.lhs = flat_expectation(g, f, cfg);
  r.rhs = group_expectation(g, f, cfg, &r.max_defect);
  const double w = feynman_kac_weight(g, cfg.t);
  r.rhs.mean *= w;
  r.rhs.std_error *= w;
  const double sigma = std::hypot(r.lhs.std_error, r.rhs.std_error);
  const double diff = std::abs(r.lhs.mean - r.rhs.mean);
  r.z = sigma > 0.0 ? diff / sigma : (diff > 0.0 ? INFINITY : 0.0);
  r.bias_allowance = 5.0 * cfg.step;
  r.pass = diff <= 3.0 * sigma + r.bias_allowance;
  return r;
}

DecayReport spectral_decay_check(const GroupSpec& g, const IntVector& weight, const SdeConfig& cfg) {
  const Weight w = make_weight(g, weight);
  DecayReport r;
  r.estimate = group_expectation(
      g, [&](const TorusPoint& h) { return CharacterEvaluator(g, h)(w).real(); }, cfg, &r.max_defect);
  r.exact = static_cast<double>(w.dimension) * std::exp(-0.5 * (w.lambda_plus_rho_norm_sq - g.rho_norm_sq) * cfg.t);
  r.scheme = scheme_character_expectation(g, weight, cfg.t, cfg.step);
  r.bias_allowance = 5.0 * cfg.step;
  r.pass = std::abs(r.estimate.mean - r.exact) <= 3.0 * r.estimate.std_error + r.bias_allowance;
  return r;
}

double scheme_character_expectation(const GroupSpec& g, const IntVector& weight, double t, double h) {
  if (!(h > 0.0) || !(t > 0.0)) throw DomainError("scheme_character_expectation: t and h must be positive");
  const Weight w = make_weight(g, weight);
  const double n = std::round(t / h);
  if (std::abs(n * h - t) > 1e-9 * t) throw DomainError("scheme_character_expectation: t must be a multiple of h");
  const double d = static_cast<double>(w.dimension);
  const double reach = 14.0 * std::sqrt(h);
  // Each factor contributes E[chi_f(H_f)] / d_f under the density
  // exp(-|H_f|^2 / 2h) prod_{a in f} a(H)^2 on its Cartan subalgebra.
  double ratio = 1.0;
  for (const auto& f : g.factors) {
    std::vector<Vector> roots;
    for (const auto& a : g.positive_roots)
      if (a.segment(f.torus_offset, f.rank).norm() > 0.5 * a.norm()) roots.push_back(a);
    auto point = [&](double x, double y) {
      Vector c = Vector::Zero(g.rank);
      c(f.torus_offset) = x;
      if (f.rank == 2) c(f.torus_offset + 1) = y;
      return TorusPoint(std::move(c));
    };
    auto density = [&](const TorusPoint& p) {
      double v = std::exp(-0.5 * p.coords.squaredNorm() / h);
      for (const auto& a : roots) v *= a.dot(p.coords) * a.dot(p.coords);
      return v;
    };
    auto chi = [&](const TorusPoint& p) { return CharacterEvaluator(g, p)(w).real() / d; };
    double num = 0.0, den = 0.0;
    if (f.rank == 1) {
      num = integrate_line([&](double x) { const auto p = point(x, 0.0); return chi(p) * density(p); }, -reach, reach);
      den = integrate_line([&](double x) { return density(point(x, 0.0)); }, -reach, reach);
    } else {
      auto inner = [&](double x, bool with_chi) {
        return integrate_line(
            [&](double y) {
              const auto p = point(x, y);
              return (with_chi ? chi(p) : 1.0) * density(p);
            },
            -reach, reach);
      };
      num = integrate_line([&](double x) { return inner(x, true); }, -reach, reach);
      den = integrate_line([&](double x) { return inner(x, false); }, -reach, reach);
    }
    ratio *= num / den;
  }
  return d * std::pow(ratio, n);
}

double weak_order_ratio(const GroupSpec& g, const IntVector& weight, double t, double h) {
  const Weight w = make_weight(g, weight);
  const double exact =
      static_cast<double>(w.dimension) * std::exp(-0.5 * (w.lambda_plus_rho_norm_sq - g.rho_norm_sq) * t);
  const double coarse = scheme_character_expectation(g, weight, t, h) - exact;
  const double fine = scheme_character_expectation(g, weight, t, 0.5 * h) - exact;
  if (fine == 0.0) throw NumericalError("weak_order_ratio: the scheme has no measurable bias at h/2");
  return coarse / fine;
}

DensityReport empirical_density_check(const GroupSpec& g, const SdeConfig& cfg, int bins) {
  if (g.rank != 1) throw DomainError("empirical_density_check: binning is implemented for rank-one groups");
  if (bins < 1) throw DomainError("empirical_density_check: bins must be positive");
  if (cfg.t < 0.25) throw DomainError("empirical_density_check: t must be at least 0.25");
  validate(cfg);
  const double period = g.integer_lattice_basis.col(0).norm();
  const bool circle = g.positive_roots.empty();
  const double lo = circle ? -0.5 * period : 0.0;
  const double hi = circle ? 0.5 * period : 0.5 * period;
  const double width = (hi - lo) / bins;

  const auto q = spectral_heat_series(g, cfg.t, false, 1e-12);
  DensityReport report;
  int skipped = 0;
  for (int b = 0; b < bins; ++b) {
    DensityBin bin;
    bin.lo = lo + b * width;
    bin.hi = bin.lo + width;
    const double p = boost::math::quadrature::gauss<double, 30>::integrate(
        [&](double x) { return q({x}) * weyl_density(g, {x}); }, bin.lo, bin.hi) / g.torus_volume;
    bin.expected = p * static_cast<double>(cfg.paths);
    bin.threshold = 4.0 / std::sqrt(bin.expected);
    bin.used = bin.expected >= 100.0;
    if (!bin.used) ++skipped;
    report.bins.push_back(bin);
  }
  if (2 * skipped > bins)
    throw ResolutionError("empirical_density_check: " + std::to_string(skipped) + " of " + std::to_string(bins) +
                          " bins expect fewer than 100 counts; use more paths or fewer bins");

  using Counts = std::pair<std::vector<std::int64_t>, double>;
  const auto chunks = run_chunks<Counts>(cfg, [&](std::int64_t begin, std::int64_t end, Counts& acc) {
    acc.first.assign(static_cast<std::size_t>(bins), 0);
    for (std::int64_t p = begin; p < end; ++p) {
      const double x = coordinate_of(g, simulate(g, cfg, p, &acc.second)).coords(0);
      const int b = std::clamp(static_cast<int>(std::floor((x - lo) / width)), 0, bins - 1);
      ++acc.first[static_cast<std::size_t>(b)];
    }
  });
  for (const auto& c : chunks) {
    report.max_defect = std::max(report.max_defect, c.second);
    for (int b = 0; b < bins; ++b) report.bins[static_cast<std::size_t>(b)].observed += c.first[static_cast<std::size_t>(b)];
  }
  report.pass = true;
  for (auto& bin : report.bins) {
    bin.deviation = std::abs(static_cast<double>(bin.observed) - bin.expected) / bin.expected;
    if (!bin.used) continue;
    report.max_deviation = std::max(report.max_deviation, bin.deviation);
    if (bin.deviation > bin.threshold) report.pass = false;
  }
  return report;
}

}  // namespace wrapkit
