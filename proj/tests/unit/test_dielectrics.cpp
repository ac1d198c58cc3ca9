#include <cmath>
#include <complex>

#include "doctest.h"
#include "mwt/constants.hpp"
#include "mwt/dielectrics.hpp"
#include "mwt/rng.hpp"

using namespace mwt;

namespace {

// Independent oracle for the loss term: sigma from a target eps'' by hand,
// eps'' = sigma / (omega eps0).
double sigma_for_imag(double eps_imag, double freq) {
  return eps_imag * 2.0 * consts::pi * freq * consts::eps0;
}

// Hand-coded Debye oracle, written against the textbook formula rather than
// the Cole-Cole code path.
Complex debye_oracle(double eps_inf, double delta_eps, double tau, double sigma, double freq) {
  const double omega = 2.0 * consts::pi * freq;
  Complex eps = eps_inf + delta_eps / Complex(1.0, omega * tau);
  eps -= Complex(0.0, sigma / (omega * consts::eps0));
  return eps;
}

}  // namespace

TEST_CASE("to_complex basics") {
  const Complex lossless = to_complex(54.8, 0.0, 1e9);
  CHECK(lossless.real() == doctest::Approx(54.8));
  CHECK(lossless.imag() == 0.0);

  // muscle at 1 GHz: eps'' = 17.43 corresponds to sigma ~ 0.9697 S/m
  const double sigma_muscle = sigma_for_imag(17.43, 1e9);
  CHECK(sigma_muscle == doctest::Approx(0.9697).epsilon(1e-3));
  const Complex muscle = to_complex(54.8, sigma_muscle, 1e9);
  CHECK(muscle.real() == doctest::Approx(54.8));
  CHECK(muscle.imag() == doctest::Approx(-17.43).epsilon(1e-12));

  // synovial fluid: eps'' = 29 -> sigma ~ 1.6133 S/m
  const double sigma_sf = sigma_for_imag(29.0, 1e9);
  CHECK(sigma_sf == doctest::Approx(1.6133).epsilon(1e-3));
  const Complex sf = to_complex(68.0, sigma_sf, 1e9);
  CHECK(sf.real() == doctest::Approx(68.0));
  CHECK(sf.imag() == doctest::Approx(-29.0).epsilon(1e-12));

  CHECK_THROWS_AS(to_complex(1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(to_complex(1.0, 0.0, -1e9), std::invalid_argument);
  CHECK_THROWS_AS(to_complex(1.0, -0.5, 1e9), std::invalid_argument);
}

TEST_CASE("to_complex sign convention holds for random draws") {
  SplitMix64 gen(7);
  for (int i = 0; i < 100; ++i) {
    const double eps = 1.0 + 80.0 * gen.next_unit();
    const double sigma = 3.0 * gen.next_unit();
    const double freq = 1e8 + 5e9 * gen.next_unit();
    const Complex value = to_complex(eps, sigma, freq);
    CHECK(value.imag() <= 0.0);
    const double expected = -sigma / (2.0 * consts::pi * freq * consts::eps0);
    CHECK(value.imag() == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("cole_cole_eval") {
  SUBCASE("dispersion-free") {
    ColeColeParams params;
    params.eps_inf = 10.0;
    CHECK(cole_cole_eval(params, 2.4e9) == Complex(10.0, 0.0));
  }
  SUBCASE("single Debye pole at omega tau = 1") {
    ColeColeParams params;
    params.eps_inf = 4.0;
    params.poles.push_back({50.0, 1.0 / (2.0 * consts::pi * 1e9), 0.0});
    const Complex eps = cole_cole_eval(params, 1e9);
    CHECK(eps.real() == doctest::Approx(29.0).epsilon(1e-12));
    CHECK(eps.imag() == doctest::Approx(-25.0).epsilon(1e-12));
  }
  SUBCASE("conductivity term only") {
    ColeColeParams params;
    params.eps_inf = 4.0;
    params.sigma_static = sigma_for_imag(17.43, 1e9);
    const Complex eps = cole_cole_eval(params, 1e9);
    CHECK(eps.real() == doctest::Approx(4.0));
    CHECK(eps.imag() == doctest::Approx(-17.43).epsilon(1e-12));
  }
  SUBCASE("alpha = 0 reduces to Debye for random draws") {
    SplitMix64 gen(11);
    for (int i = 0; i < 20; ++i) {
      const double eps_inf = 1.0 + 9.0 * gen.next_unit();
      const double delta = 60.0 * gen.next_unit();
      const double tau = 1e-12 + 1e-9 * gen.next_unit();
      const double sigma = 2.0 * gen.next_unit();
      const double freq = 1e8 + 4e9 * gen.next_unit();
      ColeColeParams params;
      params.eps_inf = eps_inf;
      params.poles.push_back({delta, tau, 0.0});
      params.sigma_static = sigma;
      const Complex got = cole_cole_eval(params, freq);
      const Complex want = debye_oracle(eps_inf, delta, tau, sigma, freq);
      CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
    }
  }
  SUBCASE("imaginary part stays nonpositive") {
    ColeColeParams params;
    params.eps_inf = 4.0;
    params.poles.push_back({50.0, 1e-10, 0.3});
    params.sigma_static = 0.5;
    for (double f : {1e8, 1e9, 5e9, 2e10}) CHECK(cole_cole_eval(params, f).imag() <= 0.0);
  }
  SUBCASE("parameter validation") {
    ColeColeParams bad;
    bad.poles.push_back({-1.0, 1e-9, 0.0});
    CHECK_THROWS_AS(cole_cole_eval(bad, 1e9), std::invalid_argument);
    bad.poles[0] = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS(cole_cole_eval(bad, 1e9), std::invalid_argument);
    bad.poles[0] = {1.0, 1e-9, 1.0};
    CHECK_THROWS_AS(cole_cole_eval(bad, 1e9), std::invalid_argument);
    ColeColeParams ok;
    CHECK_THROWS_AS(cole_cole_eval(ok, 0.0), std::invalid_argument);
  }
}

TEST_CASE("kraszewski_fraction") {
  const Complex a(54.8, -17.43);
  const Complex b(12.4, -2.79);

  SUBCASE("endpoints") {
    const auto fit_a = kraszewski_fraction(a, a, b);
    CHECK(fit_a.fraction == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit_a.residual <= 1e-12);
    const auto fit_b = kraszewski_fraction(b, a, b);
    CHECK(fit_b.fraction == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit_b.residual <= 1e-12);
  }
  SUBCASE("midpoint construction") {
    const Complex mid = std::pow(0.5 * std::sqrt(a) + 0.5 * std::sqrt(b), 2);
    const auto fit = kraszewski_fraction(mid, a, b);
    CHECK(std::abs(fit.fraction - 0.5) <= 1e-12);
  }
  SUBCASE("fraction recovery at 1e-9") {
    for (const double v0 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const Complex target = std::pow(v0 * std::sqrt(a) + (1.0 - v0) * std::sqrt(b), 2);
      const auto fit = kraszewski_fraction(target, a, b);
      CHECK(std::abs(fit.fraction - v0) <= 1e-9);
    }
  }
  SUBCASE("identical components rejected") {
    CHECK_THROWS_AS(kraszewski_fraction(a, b, b), std::invalid_argument);
  }
}

TEST_CASE("wavenumber_squared") {
  SUBCASE("free space") {
    const double f = 1e9;
    const Complex kappa = wavenumber_squared(Complex(1.0, 0.0), f);
    const double k_expected = 2.0 * consts::pi * f / consts::c0;
    CHECK(kappa.real() == doctest::Approx(k_expected * k_expected).epsilon(1e-14));
    CHECK(kappa.imag() == 0.0);
  }
  SUBCASE("matching medium wavelength") {
    // complex sqrt by hand in polar form as the independent route
    const Complex eps(54.8, -17.43);
    const double mag = std::sqrt(std::abs(eps));
    const double arg = 0.5 * std::arg(eps);
    const Complex sqrt_eps(mag * std::cos(arg), mag * std::sin(arg));
    const double k_re = 2.0 * consts::pi * 1e9 / consts::c0 * sqrt_eps.real();

    const Complex k = wavenumber(eps, 1e9);
    CHECK(k.real() == doctest::Approx(k_re).epsilon(1e-12));
    CHECK(k.imag() < 0.0);
    const double lambda = wavelength_in(eps, 1e9);
    CHECK(lambda == doctest::Approx(0.0400).epsilon(1e-3));  // ~4.00 cm, not the quoted 4.2
  }
  SUBCASE("linear in eps_r, quadratic in frequency") {
    SplitMix64 gen(3);
    for (int i = 0; i < 50; ++i) {
      const Complex eps(1.0 + 70.0 * gen.next_unit(), -30.0 * gen.next_unit());
      const double f = 1e8 + 3e9 * gen.next_unit();
      const Complex k1 = wavenumber_squared(eps, f);
      const Complex k2 = wavenumber_squared(2.0 * eps, f);
      CHECK(std::abs(k2 - 2.0 * k1) <= 1e-12 * std::abs(k2));
      const Complex k4 = wavenumber_squared(eps, 2.0 * f);
      CHECK(std::abs(k4 - 4.0 * k1) <= 1e-12 * std::abs(k4));
      CHECK(k1.imag() <= 0.0);
    }
  }
}

TEST_CASE("tissue table") {
  const TissueTable table = TissueTable::builtin_1ghz();
  CHECK(table.entries().size() == 6);  // five tissues + matching medium
  for (const char* name : {"bone", "tendon", "muscle", "skin", "sf", "matching"})
    CHECK(table.contains(name));
  CHECK(table.at("matching") == table.at("muscle"));
  CHECK(table.at("bone").real() == doctest::Approx(12.4));
  CHECK(table.at("bone").imag() == doctest::Approx(-2.79).epsilon(1e-12));
  CHECK(table.at("tendon") == Complex(45.6, table.at("tendon").imag()));
  CHECK(table.at("tendon").imag() == doctest::Approx(-13.66).epsilon(1e-12));
  CHECK(table.at("skin").imag() == doctest::Approx(-16.17).epsilon(1e-12));
  CHECK(table.at("sf").imag() == doctest::Approx(-29.0).epsilon(1e-12));
  CHECK_THROWS(table.at("cartilage"));

  const TissueTable reparsed = TissueTable::parse(table.serialize(), 1e9);
  CHECK(reparsed.entries().size() == table.entries().size());
  for (const auto& [name, value] : table.entries()) {
    CHECK(std::abs(reparsed.at(name) - value.value()) <= 1e-14 * std::abs(value.value()));
  }
}
