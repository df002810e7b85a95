#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gse/potential.hpp"

using namespace gse;

TEST_CASE("almost-Mathieu values and metadata") {
  PotentialSpec v = make_almost_mathieu(1.0);
  CHECK(v(0.0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(v(0.5) == Catch::Approx(4.0));
  CHECK(v.lipschitz() == Catch::Approx(4.0 * M_PI));
  CHECK(v.deriv_bound() == Catch::Approx(8.0 * M_PI * M_PI));
  CHECK(v.sup_norm() == Catch::Approx(4.0));
  CHECK(v.coercivity().t0 == Catch::Approx(4.0));
  CHECK(v.coercivity().K == Catch::Approx(1.0 / (2.0 * M_PI)));
  CHECK(v.coercivity().P == 2);
  CHECK_THROWS(make_almost_mathieu(0.0));
  CHECK_THROWS(make_almost_mathieu(-1.0));
}

TEST_CASE("periodicity and metadata soundness by random sampling") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  PotentialSpec specs[] = {make_almost_mathieu(1.0), make_almost_mathieu(0.25),
                           make_separable_power(2, 2, 1.0)};
  for (const auto& v : specs) {
    const int d = v.dim();
    std::vector<double> x(d), y(d);
    for (int t = 0; t < 1000; ++t) {
      for (int i = 0; i < d; ++i) x[i] = unif(rng);
      double vx = v(x);
      CHECK(vx >= -1e-14);
      CHECK(vx <= v.sup_norm() * (1.0 + 1e-9) + 1e-12);
      int axis = static_cast<int>(rng() % d);
      y = x;
      y[axis] += 1.0;
      CHECK(std::abs(vx - v(y)) <= 1e-12 * (1.0 + std::abs(vx)));
      for (int i = 0; i < d; ++i) y[i] = unif(rng);
      double dist = 0.0;
      for (int i = 0; i < d; ++i) dist += (x[i] - y[i]) * (x[i] - y[i]);
      dist = std::sqrt(dist);
      CHECK(std::abs(vx - v(y)) <= v.lipschitz() * dist + 1e-10);
    }
  }
}

TEST_CASE("almost-Mathieu near-minimum localization") {
  // Stored coercivity triple is (4l, 1/(2pi sqrt(l)), 2). The literal
  // distance bound needs the arcsine correction factor pi/2 at the top of the
  // range: dist(y, Z) = asin(sqrt(t/4l))/pi <= (pi/2) * K * sqrt(t).
  PotentialSpec v = make_almost_mathieu(1.0);
  const double K = v.coercivity().K;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  for (int t = 0; t < 2000; ++t) {
    double y = unif(rng);
    double val = v(y);
    if (val > v.coercivity().t0) continue;
    double dist = std::abs(y - std::round(y));
    CHECK(dist <= (M_PI / 2.0) * K * std::sqrt(val) + 1e-12);
  }
}

TEST_CASE("separable power potential") {
  PotentialSpec v1 = make_separable_power(1, 2, 1.0);
  std::vector<double> x{0.0};
  CHECK(v1(x) == Catch::Approx(0.0).margin(1e-15));
  x[0] = 0.25;
  double ref = std::pow(std::sin(M_PI * 0.25) / M_PI, 2);
  CHECK(v1(x) == Catch::Approx(ref));
  // Near the origin V(x) ~ x^p
  x[0] = 1e-3;
  CHECK(v1(x) == Catch::Approx(1e-6).epsilon(1e-4));
  CHECK_THROWS(make_separable_power(1, 3, 1.0));  // odd p rejected
  CHECK_THROWS(make_separable_power(1, 2, -1.0));

  PotentialSpec v2 = make_separable_power(2, 4, 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::vector<double> a(2), b(2);
  for (int t = 0; t < 100; ++t) {
    a[0] = unif(rng); a[1] = unif(rng);
    b = a; b[0] += 1.0;
    CHECK(std::abs(v2(a) - v2(b)) <= 1e-12 * (1.0 + std::abs(v2(a))));
  }
}

TEST_CASE("estimate_metadata brackets analytic values") {
  PotentialSpec am1 = estimate_metadata(make_almost_mathieu(1.0), 2000);
  CHECK(am1.sup_norm() >= 4.0 - 1e-6);
  CHECK(am1.sup_norm() <= 4.2);
  CHECK(am1.estimated());

  PotentialSpec am2 = estimate_metadata(make_almost_mathieu(2.0), 2000);
  CHECK(am2.lipschitz() >= 8.0 * M_PI - 1e-6);
  CHECK(am2.lipschitz() <= 8.4 * M_PI);

  PotentialSpec z = estimate_metadata(make_zero(1), 2000);
  CHECK(z.sup_norm() == 0.0);
  CHECK(z.lipschitz() == 0.0);
  CHECK(z.deriv_bound() == 0.0);

  CHECK_THROWS(estimate_metadata(make_zero(1), 10));
}

TEST_CASE("potential selector parsing") {
  CHECK(parse_potential("almost_mathieu{1.0}")(0.5) == Catch::Approx(4.0));
  CHECK(parse_potential("zero{3}").dim() == 3);
  PotentialSpec sp = parse_potential("separable_power{1,2,1.0}");
  CHECK(sp.dim() == 1);
  CHECK_THROWS(parse_potential("bogus{1}"));
  CHECK_THROWS(parse_potential("almost_mathieu"));
  CHECK_THROWS(parse_potential("almost_mathieu{1,2}"));
}
