#include <doctest.h>

#include <cmath>

#include "kernelkit/special.hpp"
#include "oracles.hpp"

using namespace kk;

TEST_SUITE("special") {

TEST_CASE("gamma: integers, half-integers, quadrature oracle probes") {
  CHECK(special::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(special::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  double fact = 1.0;
  for (int n = 2; n <= 20; ++n) {
    fact *= n - 1;
    CHECK(special::gamma((double)n) == doctest::Approx(fact).epsilon(1e-12));
  }
  CHECK(special::gamma(0.5) ==
        doctest::Approx(oracles::gamma_by_quadrature(0.5)).epsilon(1e-11));
  // 20 probe points across (0, 50]
  for (int k = 1; k <= 20; ++k) {
    double x = 2.5 * k - 1.3;
    double want = oracles::gamma_by_quadrature(x);
    CHECK(std::abs(special::gamma(x) - want) <= 1e-11 * want);
    // and against the C library as a second, independent route
    CHECK(std::abs(special::gamma(x) - std::tgamma(x)) <=
          1e-12 * std::tgamma(x));
  }
  CHECK_THROWS_AS(special::gamma(0.0), const DomainError&);
  CHECK_THROWS_AS(special::gamma(-2.5), const DomainError&);
}

TEST_CASE("generalized_gamma: closed forms and divergence") {
  CHECK(special::generalized_gamma(2.0, 1.0, WeightedMeasure::lebesgue()) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(special::generalized_gamma(2.0, 1.0, WeightedMeasure::exp_over_u()) ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(
      special::generalized_gamma(1.0, 0.0, WeightedMeasure::lebesgue()),
      const NonIntegrable&);
}

TEST_CASE("generalized_gamma: Lebesgue reduction and recurrence") {
  for (double z : {0.5, 1.0, 2.5}) {
    for (double mu : {0.5, 1.0, 3.0}) {
      double got = special::generalized_gamma(z, mu,
                                              WeightedMeasure::lebesgue());
      double want = special::gamma(z) * std::pow(mu, -z);
      CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, want));
      // Gamma(z+1, mu) = z Gamma(z, mu) / mu for the Lebesgue measure
      double up = special::generalized_gamma(z + 1.0, mu,
                                             WeightedMeasure::lebesgue());
      CHECK(std::abs(up - z * got / mu) <= 1e-9 * std::max(1.0, up));
    }
  }
}

TEST_CASE("v_h: values, limit at 1/2, continuity, domain") {
  CHECK(special::v_h(0.5) == 1.0);
  CHECK(special::v_h(0.25) ==
        doctest::Approx(special::gamma(1.5) * std::cos(M_PI / 4.0) /
                        (M_PI * 0.5 * 0.25))
            .epsilon(1e-13));
  CHECK(special::v_h(0.25) == doctest::Approx(1.5957691216057308).epsilon(1e-12));
  CHECK(special::v_h(0.75) == doctest::Approx(1.0638460810704155).epsilon(1e-10));
  CHECK(std::abs(special::v_h(0.5 + 1e-6) - 1.0) < 1e-4);
  CHECK(std::abs(special::v_h(0.5 - 1e-6) - 1.0) < 1e-4);
  CHECK_THROWS_AS(special::v_h(0.0), const DomainError&);
  CHECK_THROWS_AS(special::v_h(1.0), const DomainError&);
}

TEST_CASE("bernstein_eval: log and power closed forms") {
  special::BernsteinFunction log_phi(WeightedMeasure::exp_over_u());
  CHECK(special::bernstein_eval(log_phi, 1.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(special::bernstein_eval(log_phi, 0.0) == 0.0);

  special::BernsteinFunction pow_phi(WeightedMeasure::fbm_bernstein(0.25));
  CHECK(special::bernstein_eval(pow_phi, 4.0) ==
        doctest::Approx(2.0).epsilon(1e-9));

  CHECK_THROWS_AS(
      special::BernsteinFunction(WeightedMeasure::lebesgue()),
      const NonIntegrable&);
}

TEST_CASE("bernstein_eval: nondecreasing and concave on a probe grid") {
  special::BernsteinFunction phi(WeightedMeasure::exp_over_u());
  std::vector<double> xs, vals;
  for (int k = 0; k <= 12; ++k) xs.push_back(0.25 * k);
  for (double x : xs) vals.push_back(special::bernstein_eval(phi, x));
  CHECK(vals.front() == 0.0);
  for (size_t i = 1; i < vals.size(); ++i)
    CHECK(vals[i] >= vals[i - 1] - 1e-12);
  for (size_t i = 1; i + 1 < vals.size(); ++i)
    CHECK(vals[i + 1] - 2.0 * vals[i] + vals[i - 1] <= 1e-6);
}

}  // TEST_SUITE
