#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wrapkit/errors.hpp"
#include "wrapkit/heat.hpp"

using namespace wrapkit;
constexpr double kPi = std::numbers::pi;

namespace {

const std::vector<std::string> kGroups{"torus1", "torus2", "su2", "so3", "su2xsu2", "su3"};

template <typename F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// Trace of the shifted semigroup, sum d^2 exp(-|l+rho|^2 t/2), from closed-form
// dimensions and norms written out per group.
double trace_oracle(const std::string& name, double t) {
  auto e = [t](double norm_sq) { return std::exp(-0.5 * norm_sq * t); };
  double s = 0.0;
  if (name == "torus1") {
    for (int n = -80; n <= 80; ++n) s += e(n * n);
  } else if (name == "torus2") {
    for (int a = -80; a <= 80; ++a)
      for (int b = -80; b <= 80; ++b) s += e(a * a + b * b);
  } else if (name == "su2") {
    for (int m = 1; m < 400; ++m) s += m * m * e(m * m / 4.0);
  } else if (name == "so3") {
    for (int m = 1; m < 400; m += 2) s += m * m * e(m * m / 4.0);
  } else if (name == "su2xsu2") {
    double one = 0.0;
    for (int m = 1; m < 400; ++m) one += m * m * e(m * m / 4.0);
    s = one * one;
  } else if (name == "su3") {
    for (int a = 1; a < 200; ++a)
      for (int b = 1; b < 200; ++b) {
        const double d = a * b * (a + b) / 2.0;
        s += d * d * e((a * a + a * b + b * b) / 3.0);
      }
  }
  return s;
}

}  // namespace

TEST_CASE("flat heat kernel") {
  CHECK(flat_heat_kernel(0.0, 1.0, 1) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-15));
  CHECK(integrate([](double x) { return flat_heat_kernel(x * x, 0.5, 1); }, -30.0, 30.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  for (double x : {0.0, 0.3, 1.2}) {
    const double conv = integrate(
        [x](double y) { return flat_heat_kernel(y * y, 0.25, 1) * flat_heat_kernel((x - y) * (x - y), 0.25, 1); },
        -20.0, 20.0);
    CHECK(conv == doctest::Approx(flat_heat_kernel(x * x, 0.5, 1)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(flat_heat_kernel(1.0, 0.0, 1), DomainError);
  CHECK_THROWS_AS(flat_heat_kernel(1.0, -1.0, 3), DomainError);
}

TEST_CASE("spectral kernel: classical values") {
  double theta = 0.0;
  for (int n = -60; n <= 60; ++n) theta += std::exp(-0.5 * n * n);
  CHECK(spectral_heat_kernel(make_group("torus1"), {0.0}, 1.0, true, 1e-13) == doctest::Approx(theta).epsilon(1e-13));

  double su2 = 0.0;
  for (int m = 1; m < 200; ++m) su2 += m * m * std::exp(-m * m / 8.0);
  CHECK(spectral_heat_kernel(make_group("su2"), {0.0}, 1.0, true, 1e-12) == doctest::Approx(su2).epsilon(1e-12));
}

TEST_CASE("trace of the semigroup at the identity") {
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    TorusPoint zero(Vector::Zero(g.rank));
    for (double t : {0.3, 1.0}) {
      INFO(name << " t=" << t);
      const double oracle = trace_oracle(name, t);
      CHECK(std::abs(spectral_heat_kernel(g, zero, t, true, 1e-12) - oracle) < 1e-10 * std::max(1.0, oracle));
    }
  }
}

TEST_CASE("shifted and plain kernels differ by a constant factor") {
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    for (double t : {0.2, 1.5}) {
      for (const auto& h : alcove_points(g, 4)) {
        const double shifted = spectral_heat_kernel(g, h, t, true, 1e-13);
        const double plain = spectral_heat_kernel(g, h, t, false, 1e-13);
        CHECK(shifted == doctest::Approx(std::exp(-0.5 * g.rho_norm_sq * t) * plain).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("plain kernel is positive") {
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
      // Where the kernel is below the truncation tolerance only the bound is meaningful.
      for (const auto& h : alcove_points(g, 12)) {
        const double value = spectral_heat_kernel(g, h, t, false, 1e-10);
        if (wrapped_heat_kernel(g, h, t, 1e-10) > 1e-8) CHECK(value > 0.0);
        else CHECK(value > -1e-10);
      }
      // Also at the identity and the far corner of the alcove, where characters hit their limits.
      CHECK(spectral_heat_kernel(g, TorusPoint(Vector::Zero(g.rank)), t, false, 1e-10) > 0.0);
    }
  }
  const auto su2 = make_group("su2");
  CHECK(spectral_heat_kernel(su2, {2.0 * kPi}, 2.0, false, 1e-10) > 0.0);
}

TEST_CASE("normalisation against the Weyl density") {
  // Rank one: (1 / |W| vol T) int_T q_t |delta|^2 over one period.
  for (const auto& name : {"su2", "so3"}) {
    const auto g = make_group(name);
    const double period = g.torus_volume;
    for (double t : {0.25, 1.0}) {
      const auto q = spectral_heat_series(g, t, false, 1e-12);
      const double mass = integrate(
          [&](double x) {
            const double delta = 2.0 * std::sin(x / 2.0);
            return q({x}) * delta * delta;
          },
          0.0, period);
      CHECK(mass / (2.0 * period) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  const auto su3 = make_group("su3");
  const double cutoff = 30.0;
  const auto q = spectral_heat_series(su3, 0.25, false, 1e-10);
  const auto back = fourier_coefficients(su3, [&](const TorusPoint& h) { return q(h); }, cutoff,
                                         {required_grid_points(su3, q.cutoff()), 2});
  CHECK(back.coefficient(IntVector::Zero(2)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("wrapped kernel equals the spectral kernel") {
  const auto su2 = make_group("su2");
  CHECK(std::abs(wrapped_heat_kernel(su2, {kPi / 2.0}, 0.5, 1e-10) -
                 spectral_heat_kernel(su2, {kPi / 2.0}, 0.5, true, 1e-10)) < 1e-8);
  for (const auto& name : {"torus1", "torus2"}) {
    const auto g = make_group(name);
    for (const auto& h : alcove_points(g, 6))
      CHECK(std::abs(wrapped_heat_kernel(g, h, 0.7, 1e-12) - spectral_heat_kernel(g, h, 0.7, true, 1e-12)) < 1e-10);
  }
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    for (double t : {0.1, 1.0}) {
      for (const auto& h : alcove_points(g, 6)) {
        INFO(name << " t=" << t);
        CHECK(std::abs(wrapped_heat_kernel(g, h, t, 1e-10) - spectral_heat_kernel(g, h, t, true, 1e-10)) < 2e-10);
      }
    }
  }
  CHECK_THROWS_AS(wrapped_heat_kernel(su2, {0.0}, 1.0, 1e-10), SingularityError);
}

TEST_CASE("small-time limit of the wrapped kernel") {
  for (const auto& name : {"su2", "su3"}) {
    const auto g = make_group(name);
    const Vector direction = alcove_points(g, 1).front().coords.normalized();
    for (double t : {1e-2, 1e-3}) {
      const TorusPoint small(std::sqrt(2.0 * t) * direction);
      const double leading = flat_heat_kernel(small.coords.squaredNorm(), t, g.dim) / j_compact(g, small);
      const double tol = std::min(0.5, 1e-12 * g.haar_volume * leading);
      CHECK(wrapped_heat_kernel(g, small, t, tol) / (g.haar_volume * leading) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("spectral series refuses tiny times") {
  CHECK_THROWS_AS(spectral_heat_kernel(make_group("su3"), {1.0, 1.0}, 1e-6, true, 1e-10), ResourceError);
  CHECK_THROWS_AS(spectral_heat_kernel(make_group("su2"), {1.0}, 0.0, true, 1e-10), DomainError);
  CHECK_THROWS_AS(spectral_heat_kernel(make_group("su2"), {1.0}, 1.0, true, 0.0), DomainError);
}

TEST_CASE("automatic path selection") {
  const auto su2 = make_group("su2");
  CHECK(preferred_path(su2, {0.0}, 1e-3) == KernelPath::spectral);
  CHECK(preferred_path(su2, {1.0}, 1e-3) == KernelPath::wrapped);
  CHECK(preferred_path(su2, {1.0}, 1.0) == KernelPath::spectral);
  const auto v = heat_kernel_auto(su2, {1.0}, 0.01, 1e-10);
  CHECK(v.path == KernelPath::wrapped);
  CHECK(v.value == doctest::Approx(spectral_heat_kernel(su2, {1.0}, 0.01, true, 1e-12)).epsilon(1e-9));
  CHECK(to_string(KernelPath::wrapped) == "wrapped");
}

TEST_CASE("semigroup property") {
  for (const auto& name : kGroups) {
    const auto g = make_group(name);
    const auto gap = semigroup_gap(g, 0.3, 0.7, alcove_points(g, 6), 1e-10, 2);
    INFO(name);
    CHECK(gap.coefficient_gap < 1e-12);
    CHECK(gap.pointwise_gap < 1e-8);
  }
  const auto su2 = make_group("su2");
  const auto half = semigroup_gap(su2, 0.5, 0.5, alcove_points(su2, 16), 1e-10);
  CHECK(half.pointwise_gap < 1e-6);
  const auto torus = make_group("torus1");
  CHECK(semigroup_gap(torus, 0.3, 0.7, alcove_points(torus, 16), 1e-12).pointwise_gap < 1e-10);
}

TEST_CASE("complex bend formula") {
  for (const auto& name : kGroups) {
    const auto gc = complexify(make_group(name));
    CHECK(gc.real_dim == 2 * gc.compact.dim);
    const TorusPoint zero(Vector::Zero(gc.compact.rank));
    for (double t : {1e-4, 0.5, 3.0})
      CHECK(bend_complex(gc, zero, t) == std::pow(2.0 * kPi * t, -0.5 * gc.real_dim));
  }
  const auto su2c = complexify(make_group("su2"));
  for (double x : {0.05, 0.3, 2.0, 50.0}) {
    CHECK(j_complex(su2c, {x}) == doctest::Approx(std::sinh(x / 2.0) / (x / 2.0)).epsilon(1e-13));
    CHECK(j_complex(su2c, {x}) > 1.0);
  }
  const auto su3c = complexify(make_group("su3"));
  const std::vector<TorusPoint> samples{{0.1, 0.05}, {0.2, -0.1}, {-0.15, 0.25}, {0.02, 0.3}, {0.21, 0.21}};
  for (const auto& h : samples) {
    double j = 1.0;
    for (const auto& a : su3c.compact.positive_roots) {
      const double x = 0.5 * a.dot(h.coords);
      j *= std::sinh(x) / x;
    }
    CHECK(j_complex(su3c, h) == doctest::Approx(j).epsilon(1e-12));
    const double t = 1e-4;
    const double flat = flat_heat_kernel(h.coords.squaredNorm(), t, su3c.real_dim);
    CHECK(flat > 0.0);
    CHECK(std::abs(bend_complex(su3c, h, t) / flat - 1.0 / j) < 1e-4);
    CHECK(bend_complex(su3c, h, t) < flat);
    CHECK(log_bend_complex(su3c, h, t) == doctest::Approx(std::log(bend_complex(su3c, h, t))).epsilon(1e-12));
  }
  CHECK(std::isfinite(log_bend_complex(su2c, {800.0}, 0.1)));
  CHECK_THROWS_AS(bend_complex(su2c, {1.0}, 0.0), DomainError);
}
