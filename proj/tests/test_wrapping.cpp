#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "wrapkit/errors.hpp"
#include "wrapkit/truncation.hpp"
#include "wrapkit/wrapping.hpp"

using namespace wrapkit;
constexpr double kPi = std::numbers::pi;

namespace {

const std::vector<std::string> kGroups{"torus1", "torus2", "su2", "so3", "su2xsu2", "su3"};

double flat_gaussian(int d, double t, double r) {
  return std::pow(2.0 * kPi * t, -0.5 * d) * std::exp(-r * r / (2.0 * t));
}

// Heat series on SU(2) written out by hand: sum_n (n+1) chi_n(theta) e^{-(n+1)^2 t / 8}.
double su2_heat_series(double theta, double t) {
  double s = 0.0;
  for (int n = 0; n < 400; ++n) {
    const double m = n + 1.0;
    s += m * std::sin(m * theta / 2.0) / std::sin(theta / 2.0) * std::exp(-m * m * t / 8.0);
  }
  return s;
}

}  // namespace

TEST_CASE("torus wrapped gaussian is the periodic sum") {
  const auto g = make_group("torus1");
  for (double t : {0.05, 0.7, 3.0}) {
    const auto nu = heat_gaussian(1, t);
    for (double x : {-3.0, -1.0, 0.0, 0.4, 2.9}) {
      double direct = 0.0;
      for (int n = -60; n <= 60; ++n) direct += flat_gaussian(1, t, x + 2.0 * kPi * n);
      CHECK(wrap_lattice(g, nu, {x}, 1e-14) == doctest::Approx(direct).epsilon(1e-13));
    }
  }
}

TEST_CASE("zero function wraps to zero") {
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    const auto nu = gaussian_mixture(g.dim, {{0.0, 0.5}});
    for (const auto& h : alcove_points(g, 4)) CHECK(wrap_lattice(g, nu, h, 1e-12) == 0.0);
    for (const auto& t : wrap_spectral(g, nu, 20.0).terms()) CHECK(t.coeff == 0.0);
  }
}

TEST_CASE("su2 geodesic sum matches the hand-written heat series") {
  const auto g = make_group("su2");
  for (double t : {0.1, 0.5, 2.0}) {
    const auto nu = heat_gaussian(3, t);
    for (double theta : {0.3, 1.0, 2.5, 4.0, 6.0}) {
      const double lattice = g.haar_volume * wrap_lattice(g, nu, {theta}, 1e-14);
      CHECK(lattice == doctest::Approx(su2_heat_series(theta, t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("wrap_spectral coefficients") {
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    const double t = 0.3;
    const auto f = wrap_spectral(g, heat_gaussian(g.dim, t), 30.0);
    CHECK(!f.terms().empty());
    for (const auto& term : f.terms()) {
      const double expected = term.weight.dimension * std::exp(-term.weight.lambda_plus_rho_norm_sq * t / 2.0);
      CHECK(term.coeff == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("fourier coefficients reproduce the real part of a finite character sum") {
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    const double cutoff = g.rho_norm_sq + 6.0;
    std::vector<CentralFunction::Term> terms;
    int k = 0;
    for (auto& w : enumerate_weights(g, cutoff)) terms.push_back({w, std::cos(1.0 + 0.7 * k++)});
    const CentralFunction f(g, terms, cutoff);
    auto real_part = [&](const TorusPoint& h) { return f.evaluate_complex(h).real(); };
    const auto back = fourier_coefficients(g, real_part, cutoff, {required_grid_points(g, cutoff) + 2, 2});
    INFO(name);
    for (const auto& h : alcove_points(g, 5)) CHECK(back(h) == doctest::Approx(real_part(h)).epsilon(1e-9));
  }
}

TEST_CASE("fourier coefficients of self-dual sums and of the constant") {
  for (const auto& name : {"torus1", "su2", "so3", "su2xsu2"}) {
    const auto g = make_group(name);
    const double cutoff = g.rho_norm_sq + 9.0;
    std::vector<CentralFunction::Term> terms;
    int k = 0;
    for (auto& w : enumerate_weights(g, cutoff)) terms.push_back({w, std::sin(0.3 + 1.3 * k++)});
    const CentralFunction f(g, terms, cutoff);
    if (name == std::string("torus1")) continue;  // characters of the circle are not real
    const int n = required_grid_points(g, cutoff);
    const auto back = fourier_coefficients(g, [&](const TorusPoint& h) { return f(h); }, cutoff, {n, 1});
    for (const auto& t : f.terms()) CHECK(back.coefficient(t.weight.coords) == doctest::Approx(t.coeff).epsilon(1e-10));
  }
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    const double cutoff = g.rho_norm_sq + 5.0;
    const auto one = fourier_coefficients(g, [](const TorusPoint&) { return 1.0; }, cutoff,
                                          {required_grid_points(g, cutoff), 1});
    for (const auto& t : one.terms()) {
      const bool trivial = t.weight.coords.isZero();
      CHECK(std::abs(t.coeff - (trivial ? 1.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("su3 coefficients of a real class function") {
  const auto g = make_group("su3");
  const double cutoff = 8.0;
  // chi_(p,q) + chi_(q,p) is real.
  std::vector<CentralFunction::Term> terms;
  for (auto& w : enumerate_weights(g, cutoff)) {
    const int p = w.coords(0), q = w.coords(1);
    terms.push_back({w, 1.0 / (1.0 + p + 2 * q) + 1.0 / (1.0 + q + 2 * p)});
  }
  const CentralFunction f(g, terms, cutoff);
  for (const auto& h : alcove_points(g, 6)) CHECK(std::abs(f.evaluate_complex(h).imag()) < 1e-12);
  const auto back = fourier_coefficients(g, [&](const TorusPoint& h) { return f(h); }, cutoff,
                                         {required_grid_points(g, cutoff), 2});
  for (const auto& t : f.terms()) CHECK(std::abs(back.coefficient(t.weight.coords) - t.coeff) < 1e-11);
}

TEST_CASE("coarse grid is rejected") {
  const auto g = make_group("su3");
  const double cutoff = 20.0;
  const int n = required_grid_points(g, cutoff);
  CHECK_THROWS_AS(fourier_coefficients(g, [](const TorusPoint&) { return 1.0; }, cutoff, {n - 1, 1}),
                  ResolutionError);
}

TEST_CASE("convolution of wraps is the wrap of the convolution") {
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    const GaussianMixture a{{0.7, 0.2}, {0.3, 0.9}};
    const GaussianMixture b{{1.5, 0.4}, {-0.5, 0.1}};
    const double cutoff = 40.0;
    const auto lhs = convolve_central(wrap_spectral(g, gaussian_mixture(g.dim, a), cutoff),
                                      wrap_spectral(g, gaussian_mixture(g.dim, b), cutoff));
    const auto rhs = wrap_spectral(g, gaussian_mixture(g.dim, convolve(a, b)), cutoff);
    REQUIRE(lhs.terms().size() == rhs.terms().size());
    for (const auto& t : rhs.terms())
      CHECK(std::abs(lhs.coefficient(t.weight.coords) - t.coeff) <= 1e-12 * std::max(1.0, std::abs(t.coeff)));
  }
  CHECK_THROWS_AS(convolve_central(wrap_spectral(make_group("su2"), heat_gaussian(3, 1.0), 5.0),
                                   wrap_spectral(make_group("so3"), heat_gaussian(3, 1.0), 5.0)),
                  DomainError);
}

TEST_CASE("heat semigroup through convolution") {
  const auto g = make_group("su3");
  const double cutoff = 60.0;
  const auto a = wrap_spectral(g, heat_gaussian(g.dim, 0.2), cutoff);
  const auto b = wrap_spectral(g, heat_gaussian(g.dim, 0.5), cutoff);
  const auto c = wrap_spectral(g, heat_gaussian(g.dim, 0.7), cutoff);
  const auto ab = convolve_central(a, b);
  for (const auto& t : c.terms()) CHECK(ab.coefficient(t.weight.coords) == doctest::Approx(t.coeff).epsilon(1e-13));
}

TEST_CASE("laplacian of a mixture") {
  // Spatial profile against a finite-difference radial Laplacian f'' + (d-1) f' / r.
  for (int d : {1, 3, 8}) {
    const GaussianMixture mix{{1.0, 0.5}, {-0.4, 1.7}};
    const auto f = gaussian_mixture(d, mix);
    const auto lf = gaussian_mixture_laplacian(d, mix);
    const double step = 1e-4;
    for (double r : {0.3, 0.9, 1.6}) {
      const double f0 = f.at_radius(r), fp = f.at_radius(r + step), fm = f.at_radius(r - step);
      const double fd = (fp - 2.0 * f0 + fm) / (step * step) + (d - 1) * (fp - fm) / (2.0 * step * r);
      CHECK(lf.at_radius(r) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  // The heat equation on the group: shifted Laplacian of wrap(p_t) = 2 d/dt wrap(p_t).
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    const double t = 0.4, dt = 1e-5, cutoff = 30.0;
    const auto lap = laplacian_spectral(wrap_spectral(g, heat_gaussian(g.dim, t), cutoff), true);
    const auto up = wrap_spectral(g, heat_gaussian(g.dim, t + dt), cutoff);
    const auto down = wrap_spectral(g, heat_gaussian(g.dim, t - dt), cutoff);
    for (const auto& term : lap.terms()) {
      const double derivative = (up.coefficient(term.weight.coords) - down.coefficient(term.weight.coords)) / (2.0 * dt);
      CHECK(term.coeff == doctest::Approx(2.0 * derivative).epsilon(1e-7));
    }
    const auto base = wrap_spectral(g, heat_gaussian(g.dim, t), cutoff);
    const auto plain = laplacian_spectral(base, false);
    for (const auto& term : plain.terms())
      CHECK(term.coeff == doctest::Approx(lap.coefficient(term.weight.coords) +
                                          g.rho_norm_sq * base.coefficient(term.weight.coords))
                              .epsilon(1e-12));
  }
}

TEST_CASE("wrapping intertwines the laplacians") {
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    const auto nu = gaussian_mixture(g.dim, {{0.6, 0.3}, {0.4, 1.1}});
    CHECK(wraplap_check(g, nu, 50.0) < 1e-12);
  }
}

TEST_CASE("poisson identity") {
  SUBCASE("circle") {
    const auto g = make_group("torus1");
    std::vector<TorusPoint> grid;
    for (int i = 0; i < 20; ++i) grid.push_back({-kPi + (i + 0.5) * 2.0 * kPi / 20.0});
    CHECK(poisson_gap(g, heat_gaussian(1, 0.5), grid, 1e-12) < 1e-10);
  }
  SUBCASE("su2 at t = 0.5") {
    const auto g = make_group("su2");
    CHECK(poisson_gap(g, heat_gaussian(3, 0.5), alcove_points(g, 20), 1e-10) < 1e-8);
  }
  SUBCASE("every group, several times") {
    const double tol = 1e-9;
    for (const auto& name : kGroups) {
      const auto g = make_group(name);
      const auto grid = alcove_points(g, 8);
      for (double t : {0.1, 0.5, 2.0}) {
        INFO(name << " t=" << t);
        CHECK(poisson_gap(g, heat_gaussian(g.dim, t), grid, tol) < 10.0 * tol);
      }
      INFO(name << " mixture");
      CHECK(poisson_gap(g, gaussian_mixture(g.dim, {{2.0, 0.3}, {-1.0, 0.8}}), grid, tol) < 10.0 * tol);
    }
  }
}

TEST_CASE("geodesic sum is Weyl invariant") {
  for (const auto& name : {"su2", "su3", "su2xsu2"}) {
    const auto g = make_group(name);
    const auto nu = heat_gaussian(g.dim, 0.6);
    for (const auto& h : alcove_points(g, 4)) {
      const double base = wrap_lattice(g, nu, h, 1e-14);
      for (const auto& w : g.weyl_group)
        CHECK(wrap_lattice(g, nu, TorusPoint(w.matrix * h.coords), 1e-14) == doctest::Approx(base).epsilon(1e-11));
    }
  }
}

TEST_CASE("error paths") {
  const auto su2 = make_group("su2");
  const auto nu = heat_gaussian(3, 0.5);
  CHECK_THROWS_AS(wrap_lattice(su2, nu, {0.0}, 1e-10), SingularityError);
  CHECK_THROWS_AS(wrap_lattice(su2, nu, {2.0 * kPi}, 1e-10), SingularityError);
  CHECK_THROWS_AS(wrap_lattice(su2, nu, {1.0}, 0.0), DomainError);

  const RadialFunction no_fourier(3, [](double r) { return std::exp(-r * r); }, std::nullopt, std::nullopt,
                                  std::nullopt);
  CHECK_THROWS_AS(no_fourier.fourier(1.0), ContractError);
  CHECK_THROWS_AS(wrap_spectral(su2, no_fourier, 5.0), ContractError);
  CHECK_THROWS_AS(wrap_lattice(su2, no_fourier, {1.0}, 1e-8), ContractError);

  // A Fourier profile off by a constant factor is caught.
  const double t = 0.5;
  CHECK_THROWS_AS(RadialFunction(3, [t](double r) { return flat_gaussian(3, t, r); },
                                 RadialFunction::Profile([t](double k) { return 1.01 * std::exp(-k * k * t / 2.0); }),
                                 GaussianBound{flat_gaussian(3, t, 0.0), t}, GaussianBound{1.01, 1.0 / t}),
                  ContractError);
  CHECK_NOTHROW(RadialFunction(3, [t](double r) { return flat_gaussian(3, t, r); },
                               RadialFunction::Profile([t](double k) { return std::exp(-k * k * t / 2.0); }),
                               GaussianBound{flat_gaussian(3, t, 0.0), t}, GaussianBound{1.0, 1.0 / t}));

  CHECK_THROWS_AS(parse_mixture("1:0.5,2"), DomainError);
  CHECK_THROWS_AS(parse_mixture("1:-0.5"), DomainError);
  CHECK_THROWS_AS(parse_mixture("a:1"), DomainError);
  const auto mix = parse_mixture("0.25:1,-2:3.5");
  REQUIRE(mix.size() == 2);
  CHECK(mix[1].weight == -2.0);
  CHECK(mix[1].variance == 3.5);
  CHECK_THROWS_AS(heat_gaussian(3, 0.0), DomainError);
}

TEST_CASE("lattice tail bound dominates the brute-force tail") {
  Eigen::MatrixXd basis(2, 2);
  basis << 1.0, 0.4, 0.0, 0.9;
  const auto geo = lattice_geometry(basis);
  for (double power : {0.0, 2.0, 6.0}) {
    for (double radius : {0.5, 2.0, 4.0}) {
      for (const Eigen::Vector2d shift : {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.37, 0.81)}) {
        double tail = 0.0;
        for (int i = -60; i <= 60; ++i)
          for (int j = -60; j <= 60; ++j) {
            const double r = (basis * Eigen::Vector2d(i, j) + shift).norm();
            if (r > radius) tail += std::pow(r, power) * std::exp(-0.8 * r * r);
          }
        const double bound = gaussian_tail_bound(geo, 0.8, power, radius);
        CHECK(bound >= tail);
        CHECK(bound < 100.0 * tail + 1e-12);
      }
    }
  }
  const double r = radius_for_tail(geo, 0.8, 2.0, 1e-12);
  CHECK(gaussian_tail_bound(geo, 0.8, 2.0, r) <= 1e-12);
  CHECK(gaussian_tail_bound(geo, 0.8, 2.0, 0.98 * r) > 1e-12);
}
