#include "wrapkit/lie_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/LU>

#include "wrapkit/errors.hpp"

namespace wrapkit {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

// Below this |Weyl denominator| of a factor the Weyl formula loses too many
// digits and the regular closed form is used instead.
constexpr double kSingularThreshold = 1e-3;

struct LocalFactor {
  FactorKind kind;
  int rank;
  int algebra_dim;
  int matrix_size;
  std::vector<Vector> roots;
  std::vector<int> simple;
  Eigen::MatrixXd weight_basis;
  Eigen::MatrixXd gamma_basis;
};

LocalFactor local_factor(FactorKind kind) {
  LocalFactor f{kind, 1, 1, 1, {}, {}, Eigen::MatrixXd::Identity(1, 1),
                Eigen::MatrixXd::Constant(1, 1, kTwoPi)};
  switch (kind) {
    case FactorKind::circle:
      break;
    case FactorKind::su2:
      f.algebra_dim = 3;
      f.matrix_size = 2;
      f.roots = {Vector::Constant(1, 1.0)};
      f.simple = {0};
      f.weight_basis(0, 0) = 0.5;
      f.gamma_basis(0, 0) = 2.0 * kTwoPi;
      break;
    case FactorKind::so3:
      f.algebra_dim = 3;
      f.matrix_size = 3;
      f.roots = {Vector::Constant(1, 1.0)};
      f.simple = {0};
      f.weight_basis(0, 0) = 1.0;
      f.gamma_basis(0, 0) = kTwoPi;
      break;
    case FactorKind::su3: {
      f.rank = 2;
      f.algebra_dim = 8;
      f.matrix_size = 3;
      Vector a1(2), a2(2), a12(2);
      a1 << 1.0, 0.0;
      a2 << -0.5, kSqrt3 / 2.0;
      a12 << 0.5, kSqrt3 / 2.0;
      f.roots = {a1, a2, a12};
      f.simple = {0, 1};
      f.weight_basis.resize(2, 2);
      f.weight_basis << 0.5, 0.0, 0.5 / kSqrt3, 1.0 / kSqrt3;
      f.gamma_basis.resize(2, 2);
      f.gamma_basis << 2.0, -1.0, 0.0, kSqrt3;
      f.gamma_basis *= kTwoPi;
      break;
    }
  }
  return f;
}

Eigen::MatrixXd reflection(const Vector& alpha) {
  const auto n = alpha.size();
  return Eigen::MatrixXd::Identity(n, n) - 2.0 * alpha * alpha.transpose() / alpha.squaredNorm();
}

std::vector<WeylElement> generate_weyl_group(int rank, const std::vector<Vector>& simple) {
  std::vector<WeylElement> group{{Eigen::MatrixXd::Identity(rank, rank), 1}};
  std::vector<Eigen::MatrixXd> gens;
  for (const auto& a : simple) gens.push_back(reflection(a));
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const auto& s : gens) {
      Eigen::MatrixXd m = s * group[i].matrix;
      const bool seen = std::any_of(group.begin(), group.end(), [&](const WeylElement& w) {
        return (w.matrix - m).cwiseAbs().maxCoeff() < 1e-9;
      });
      if (!seen) group.push_back({m, -group[i].sign});
    }
  }
  return group;
}

int round_checked(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9) throw std::logic_error("catalog: non-integral coroot pairing");
  return static_cast<int>(r);
}

GroupSpec assemble(std::string name, const std::vector<FactorKind>& kinds) {
  std::vector<LocalFactor> locals;
  GroupSpec g;
  g.name = std::move(name);
  for (auto k : kinds) {
    locals.push_back(local_factor(k));
    g.rank += locals.back().rank;
  }
  g.weight_lattice_basis = Eigen::MatrixXd::Zero(g.rank, g.rank);
  g.integer_lattice_basis = Eigen::MatrixXd::Zero(g.rank, g.rank);
  int toff = 0, aoff = 0, moff = 0;
  for (const auto& lf : locals) {
    g.factors.push_back({lf.kind, toff, lf.rank, aoff, lf.algebra_dim, moff, lf.matrix_size});
    const int base = static_cast<int>(g.positive_roots.size());
    for (const auto& r : lf.roots) {
      Vector full = Vector::Zero(g.rank);
      full.segment(toff, lf.rank) = r;
      g.positive_roots.push_back(full);
    }
    for (int s : lf.simple) g.simple_roots.push_back(base + s);
    g.weight_lattice_basis.block(toff, toff, lf.rank, lf.rank) = lf.weight_basis;
    g.integer_lattice_basis.block(toff, toff, lf.rank, lf.rank) = lf.gamma_basis;
    toff += lf.rank;
    aoff += lf.algebra_dim;
    moff += lf.matrix_size;
  }
  g.dim = aoff;
  g.matrix_size = moff;

  g.rho = Vector::Zero(g.rank);
  for (const auto& a : g.positive_roots) g.rho += 0.5 * a;
  g.rho_norm_sq = g.rho.squaredNorm();

  std::vector<Vector> simple;
  for (int i : g.simple_roots) simple.push_back(g.positive_roots[i]);
  g.weyl_group = generate_weyl_group(g.rank, simple);

  const auto nroots = static_cast<int>(g.positive_roots.size());
  g.coroot_pairing.resize(g.rank, nroots);
  g.two_rho_pairing.resize(nroots);
  for (int r = 0; r < nroots; ++r) {
    const Vector& a = g.positive_roots[r];
    const Vector coroot = 2.0 * a / a.squaredNorm();
    for (int i = 0; i < g.rank; ++i)
      g.coroot_pairing(i, r) = round_checked(g.weight_lattice_basis.col(i).dot(coroot));
    g.two_rho_pairing(r) = round_checked(2.0 * g.rho.dot(coroot));
  }

  g.torus_volume = std::abs(g.integer_lattice_basis.determinant());
  g.haar_volume = g.torus_volume;
  for (const auto& a : g.positive_roots) g.haar_volume *= kTwoPi / a.dot(g.rho);
  return g;
}

// Odometer over the integer box [-bound_i, bound_i].
template <typename Fn>
void scan_box(const std::vector<int>& bound, Fn&& fn) {
  const auto n = bound.size();
  IntVector c(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) c(i) = -bound[i];
  while (true) {
    fn(c);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (c(i) < bound[i]) {
        ++c(i);
        break;
      }
      c(i) = -bound[i];
    }
    if (i == n) return;
  }
}

std::vector<int> box_bounds(const Eigen::MatrixXd& basis, double radius, std::size_t max_count,
                            const char* what) {
  const Eigen::MatrixXd inv = basis.inverse();
  std::vector<int> bound(static_cast<std::size_t>(basis.cols()));
  double box = 1.0;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    const double b = std::floor(inv.row(i).norm() * radius + 1e-9);
    if (b > 1e7) throw ResourceError(std::string(what) + ": enumeration box too large");
    bound[static_cast<std::size_t>(i)] = static_cast<int>(b);
    box *= 2.0 * b + 1.0;
  }
  if (box > 64.0 * static_cast<double>(max_count) + 1e6)
    throw ResourceError(std::string(what) + ": enumeration box of " + std::to_string(box) +
                        " points exceeds the cap");
  return bound;
}

bool lex_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

std::complex<double> su2_closed_form(int n, double theta) {
  double s = 0.0;
  for (int k = 0; k <= n; ++k) s += std::cos((0.5 * n - k) * theta);
  return s;
}

std::complex<double> su3_closed_form(int p, int q, const std::complex<double> x[3]) {
  // Jacobi-Trudi: s_(p+q, q, 0) = h_{p+q} h_q - h_{p+q+1} h_{q-1}.
  const std::complex<double> e1 = x[0] + x[1] + x[2];
  const std::complex<double> e2 = x[0] * x[1] + x[0] * x[2] + x[1] * x[2];
  const std::complex<double> e3 = x[0] * x[1] * x[2];
  const int top = p + q + 1;
  std::vector<std::complex<double>> h(static_cast<std::size_t>(top) + 1);
  auto at = [&](int k) -> std::complex<double> { return k < 0 ? 0.0 : h[static_cast<std::size_t>(k)]; };
  h[0] = 1.0;
  for (int k = 1; k <= top; ++k) h[static_cast<std::size_t>(k)] = e1 * at(k - 1) - e2 * at(k - 2) + e3 * at(k - 3);
  return at(p + q) * at(q) - at(p + q + 1) * at(q - 1);
}

std::complex<double> det3_powers(const int l[3], const double h[3]) {
  std::complex<double> m[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = std::polar(1.0, l[j] * h[i]);
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

GroupSpec make_group(std::string_view name) {
  if (name == "su2") return assemble("su2", {FactorKind::su2});
  if (name == "so3") return assemble("so3", {FactorKind::so3});
  if (name == "su2xsu2") return assemble("su2xsu2", {FactorKind::su2, FactorKind::su2});
  if (name == "su3") return assemble("su3", {FactorKind::su3});
  if (name.starts_with("torus")) {
    std::string_view rest = name.substr(5);
    if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
    int n = 0;
    bool ok = !rest.empty() && rest.size() <= 3;
    for (char c : rest) {
      if (c < '0' || c > '9') ok = false;
      else n = 10 * n + (c - '0');
    }
    if (ok && n >= 1) {
      return assemble("torus" + std::to_string(n), std::vector<FactorKind>(static_cast<std::size_t>(n),
                                                                           FactorKind::circle));
    }
  }
  std::string msg = "unknown group '" + std::string(name) + "'; supported:";
  for (const auto& s : catalog_names()) msg += " " + s;
  throw CatalogError(msg);
}

std::vector<std::string> catalog_names() { return {"torus<n>", "su2", "so3", "su2xsu2", "su3"}; }

Vector weight_vector(const GroupSpec& g, const IntVector& coords) {
  return g.weight_lattice_basis * coords.cast<double>();
}

bool is_dominant(const GroupSpec& g, const IntVector& coords) {
  for (int r : g.simple_roots)
    if (coords.dot(g.coroot_pairing.col(r)) < 0) return false;
  return true;
}

Weight make_weight(const GroupSpec& g, const IntVector& coords) {
  if (coords.size() != g.rank) throw DomainError("weight has wrong rank for " + g.name);
  if (!is_dominant(g, coords)) throw DomainError("weight is not dominant for " + g.name);
  Weight w;
  w.coords = coords;
  w.lambda_plus_rho_norm_sq = (weight_vector(g, coords) + g.rho).squaredNorm();
  w.dimension = weyl_dimension(g, coords);
  return w;
}

long long weyl_dimension(const GroupSpec& g, const IntVector& coords) {
  if (coords.size() != g.rank || !is_dominant(g, coords))
    throw DomainError("weyl_dimension: weight is not dominant for " + g.name);
  // prod <lambda+rho, a^vee> / <rho, a^vee>, doubled to stay integral.
  long long num = 1, den = 1;
  for (Eigen::Index r = 0; r < g.two_rho_pairing.size(); ++r) {
    num *= 2LL * coords.dot(g.coroot_pairing.col(r)) + g.two_rho_pairing(r);
    den *= g.two_rho_pairing(r);
    const long long c = std::gcd(num, den);
    num /= c;
    den /= c;
  }
  if (den != 1) throw std::logic_error("weyl_dimension: non-integral result");
  return num;
}

long long weyl_dimension(const GroupSpec& g, const Weight& lambda) { return weyl_dimension(g, lambda.coords); }

std::complex<double> character(const GroupSpec& g, const Weight& lambda, const TorusPoint& h) {
  return CharacterEvaluator(g, h)(lambda.coords);
}

double j_compact(const GroupSpec& g, const TorusPoint& h) {
  double j = 1.0;
  for (const auto& a : g.positive_roots) {
    const double x = 0.5 * a.dot(h.coords);
    j *= std::abs(x) < 5e-5 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  }
  return j;
}

double weyl_delta(const GroupSpec& g, const TorusPoint& h) {
  double d = 1.0;
  for (const auto& a : g.positive_roots) d *= 2.0 * std::sin(0.5 * a.dot(h.coords));
  return d;
}

double weyl_density(const GroupSpec& g, const TorusPoint& h) {
  const double d = weyl_delta(g, h);
  return d * d;
}

bool is_regular(const GroupSpec& g, const TorusPoint& h, double eps) {
  return std::abs(weyl_delta(g, h)) > eps;
}

std::vector<Weight> enumerate_weights(const GroupSpec& g, double cutoff, std::size_t max_count) {
  if (!(cutoff > 0.0)) throw DomainError("enumerate_weights: cutoff must be positive");
  const double limit = cutoff * (1.0 + 1e-12);
  const double radius = std::sqrt(cutoff) + std::sqrt(g.rho_norm_sq);
  const auto bound = box_bounds(g.weight_lattice_basis, radius, max_count, "enumerate_weights");
  std::vector<Weight> out;
  scan_box(bound, [&](const IntVector& c) {
    if (!is_dominant(g, c)) return;
    const double n2 = (weight_vector(g, c) + g.rho).squaredNorm();
    if (n2 > limit) return;
    if (out.size() >= max_count)
      throw ResourceError("enumerate_weights: more than " + std::to_string(max_count) +
                          " weights below cutoff " + std::to_string(cutoff));
    out.push_back({c, n2, 0});
  });
  std::sort(out.begin(), out.end(), [](const Weight& a, const Weight& b) {
    if (a.lambda_plus_rho_norm_sq != b.lambda_plus_rho_norm_sq)
      return a.lambda_plus_rho_norm_sq < b.lambda_plus_rho_norm_sq;
    return lex_less(a.coords, b.coords);
  });
  for (auto& w : out) w.dimension = weyl_dimension(g, w.coords);
  return out;
}

std::vector<Vector> lattice_points(const GroupSpec& g, const TorusPoint& center, double radius,
                                   std::size_t max_count) {
  if (!(radius > 0.0)) throw DomainError("lattice_points: radius must be positive");
  const auto bound = box_bounds(g.integer_lattice_basis, radius + center.coords.norm(), max_count,
                                "lattice_points");
  struct Entry {
    double norm;
    IntVector m;
    Vector gamma;
  };
  std::vector<Entry> found;
  const double limit = radius * radius;
  scan_box(bound, [&](const IntVector& m) {
    Vector gamma = g.integer_lattice_basis * m.cast<double>();
    const double n2 = (center.coords + gamma).squaredNorm();
    if (n2 > limit) return;
    if (found.size() >= max_count)
      throw ResourceError("lattice_points: more than " + std::to_string(max_count) + " points");
    found.push_back({n2, m, std::move(gamma)});
  });
  std::sort(found.begin(), found.end(), [](const Entry& a, const Entry& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    return lex_less(a.m, b.m);
  });
  std::vector<Vector> out;
  out.reserve(found.size());
  for (auto& e : found) out.push_back(std::move(e.gamma));
  return out;
}

void su3_phases(double x, double y, double out[3]) {
  out[0] = 0.5 * x + 0.5 * y / kSqrt3;
  out[1] = -0.5 * x + 0.5 * y / kSqrt3;
  out[2] = -y / kSqrt3;
}

Eigen::Vector2d su3_alcove_from_phases(const double phases[3]) {
  double phi[3];
  for (int k = 0; k < 3; ++k) phi[k] = std::remainder(phases[k], kTwoPi);
  double best_spread = 1e300;
  std::array<double, 3> best{};
  for (int m0 = -1; m0 <= 1; ++m0)
    for (int m1 = -1; m1 <= 1; ++m1)
      for (int m2 = -1; m2 <= 1; ++m2) {
        std::array<double, 3> h{phi[0] + kTwoPi * m0, phi[1] + kTwoPi * m1, phi[2] + kTwoPi * m2};
        if (std::abs(h[0] + h[1] + h[2]) > 1e-6) continue;
        std::sort(h.begin(), h.end(), std::greater<>());
        const double spread = h[0] - h[2];
        if (spread < best_spread - 1e-12) {
          best_spread = spread;
          best = h;
        }
      }
  if (best_spread > kTwoPi + 1e-6) throw NumericalError("su3: phases do not lie on SU(3)");
  // Remove the residual of the sum so the point sits exactly on t.
  const double shift = (best[0] + best[1] + best[2]) / 3.0;
  for (auto& v : best) v -= shift;
  return {best[0] - best[1], -kSqrt3 * best[2]};
}

CharacterEvaluator::CharacterEvaluator(const GroupSpec& g, const TorusPoint& h) {
  for (const auto& f : g.factors) {
    FactorState s;
    s.kind = f.kind;
    s.offset = f.torus_offset;
    s.singular = false;
    switch (f.kind) {
      case FactorKind::circle:
        s.theta = h.coords(f.torus_offset);
        break;
      case FactorKind::su2:
      case FactorKind::so3:
        s.theta = h.coords(f.torus_offset);
        s.singular = std::abs(2.0 * std::sin(0.5 * s.theta)) < kSingularThreshold;
        break;
      case FactorKind::su3: {
        double ph[3];
        su3_phases(h.coords(f.torus_offset), h.coords(f.torus_offset + 1), ph);
        for (int k = 0; k < 3; ++k) {
          s.phase[k] = ph[k];
          s.x[k] = std::polar(1.0, ph[k]);
        }
        s.vandermonde = (s.x[0] - s.x[1]) * (s.x[0] - s.x[2]) * (s.x[1] - s.x[2]);
        s.singular = std::abs(s.vandermonde) < kSingularThreshold;
        break;
      }
    }
    factors_.push_back(s);
  }
}

std::complex<double> CharacterEvaluator::operator()(const IntVector& coords) const {
  std::complex<double> value = 1.0;
  for (const auto& s : factors_) {
    switch (s.kind) {
      case FactorKind::circle:
        value *= std::polar(1.0, coords(s.offset) * s.theta);
        break;
      case FactorKind::su2:
      case FactorKind::so3: {
        const int n = s.kind == FactorKind::su2 ? coords(s.offset) : 2 * coords(s.offset);
        if (s.singular) {
          value *= su2_closed_form(n, s.theta);
        } else {
          value *= std::sin(0.5 * (n + 1) * s.theta) / std::sin(0.5 * s.theta);
        }
        break;
      }
      case FactorKind::su3: {
        const int p = coords(s.offset), q = coords(s.offset + 1);
        if (s.singular) {
          value *= su3_closed_form(p, q, s.x);
        } else {
          const int l[3] = {p + q + 2, q + 1, 0};
          const int l0[3] = {2, 1, 0};
          value *= det3_powers(l, s.phase) / det3_powers(l0, s.phase);
        }
        break;
      }
    }
  }
  return value;
}

AlternatingSum::AlternatingSum(const GroupSpec& g, const TorusPoint& h) {
  for (const auto& w : g.weyl_group) {
    transformed_.push_back(w.matrix.transpose() * h.coords);
    signs_.push_back(w.sign);
  }
}

std::complex<double> AlternatingSum::operator()(const Vector& mu) const {
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < transformed_.size(); ++i)
    s += static_cast<double>(signs_[i]) * std::polar(1.0, mu.dot(transformed_[i]));
  return s;
}

bool in_alcove(const GroupSpec& g, const TorusPoint& h, double eps) {
  for (const auto& f : g.factors) {
    const double t = h.coords(f.torus_offset);
    switch (f.kind) {
      case FactorKind::circle:
        if (t < -kPi - eps || t > kPi + eps) return false;
        break;
      case FactorKind::su2:
        if (t < -eps || t > kTwoPi + eps) return false;
        break;
      case FactorKind::so3:
        if (t < -eps || t > kPi + eps) return false;
        break;
      case FactorKind::su3: {
        const double y = h.coords(f.torus_offset + 1);
        if (t < -eps || -0.5 * t + 0.5 * kSqrt3 * y < -eps || 0.5 * t + 0.5 * kSqrt3 * y > kTwoPi + eps)
          return false;
        break;
      }
    }
  }
  return true;
}

TorusPoint alcove_representative(const GroupSpec& g, const TorusPoint& h) {
  TorusPoint out(h.coords);
  for (const auto& f : g.factors) {
    double& t = out.coords(f.torus_offset);
    switch (f.kind) {
      case FactorKind::circle:
        t -= kTwoPi * std::floor((t + kPi) / kTwoPi);
        break;
      case FactorKind::su2:
        t -= 2.0 * kTwoPi * std::floor(t / (2.0 * kTwoPi));
        if (t > kTwoPi) t = 2.0 * kTwoPi - t;
        break;
      case FactorKind::so3:
        t -= kTwoPi * std::floor(t / kTwoPi);
        if (t > kPi) t = kTwoPi - t;
        break;
      case FactorKind::su3: {
        double ph[3];
        su3_phases(h.coords(f.torus_offset), h.coords(f.torus_offset + 1), ph);
        const Eigen::Vector2d r = su3_alcove_from_phases(ph);
        out.coords(f.torus_offset) = r(0);
        out.coords(f.torus_offset + 1) = r(1);
        break;
      }
    }
  }
  return out;
}

std::vector<TorusPoint> alcove_points(const GroupSpec& g, std::size_t count, double min_root_gap) {
  // Additive recurrence with generalised golden ratios (R_d sequence).
  const auto d = static_cast<std::size_t>(g.rank);
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(d + 1));
  std::vector<double> alpha(d);
  for (std::size_t i = 0; i < d; ++i) alpha[i] = std::fmod(std::pow(1.0 / phi, static_cast<double>(i + 1)), 1.0);

  std::vector<TorusPoint> out;
  for (std::size_t k = 0; out.size() < count; ++k) {
    if (k > 1000 * count + 1000) throw ResourceError("alcove_points: could not find regular points");
    std::vector<double> u(d);
    for (std::size_t i = 0; i < d; ++i) u[i] = d == 1 ? (static_cast<double>(k) + 0.5) / static_cast<double>(count)
                                                      : std::fmod(0.5 + alpha[i] * static_cast<double>(k + 1), 1.0);
    if (d == 1 && k >= count) throw ResourceError("alcove_points: rank-one grid hit a wall");
    TorusPoint h(Vector::Zero(g.rank));
    for (const auto& f : g.factors) {
      const auto o = static_cast<std::size_t>(f.torus_offset);
      switch (f.kind) {
        case FactorKind::circle:
          h.coords(f.torus_offset) = -kPi + kTwoPi * u[o];
          break;
        case FactorKind::su2:
          h.coords(f.torus_offset) = kTwoPi * u[o];
          break;
        case FactorKind::so3:
          h.coords(f.torus_offset) = kPi * u[o];
          break;
        case FactorKind::su3: {
          double a = u[o], b = u[o + 1];
          if (a + b > 1.0) {
            a = 1.0 - a;
            b = 1.0 - b;
          }
          h.coords(f.torus_offset) = b * kTwoPi;
          h.coords(f.torus_offset + 1) = a * 4.0 * kPi / kSqrt3 + b * kTwoPi / kSqrt3;
          break;
        }
      }
    }
    bool ok = true;
    for (const auto& a : g.positive_roots)
      if (std::abs(2.0 * std::sin(0.5 * a.dot(h.coords))) < min_root_gap) ok = false;
    if (ok) out.push_back(std::move(h));
  }
  return out;
}

}  // namespace wrapkit
