#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <numbers>

#include "epdt/errors.hpp"
#include "epdt/specfun.hpp"
#include "oracles.hpp"

using namespace epdt;
using namespace epdt::specfun;

namespace {
constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double k_half(double z) { return std::sqrt(pi / (2 * z)) * std::exp(-z); }
double k_three_halves(double z) { return k_half(z) * (1 + 1 / z); }
double i_half(double z) { return std::sqrt(2 / (pi * z)) * std::sinh(z); }
}  // namespace

TEST_CASE("gamma") {
    CHECK(gamma_real(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_real(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(gamma_real(5) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_real(0), DomainError);
    CHECK_THROWS_AS(gamma_real(-1.5), DomainError);
}

TEST_CASE("bessel order validation") {
    CHECK_NOTHROW(BesselOrder(0.0));
    CHECK_THROWS_AS(BesselOrder(-0.1), DomainError);
    CHECK_THROWS_AS(BesselOrder(std::nan("")), DomainError);
    CHECK_THROWS_AS(bessel_k(-1, 1), DomainError);
    CHECK_THROWS_AS(bessel_k(0, 0), DomainError);
    CHECK_THROWS_AS(bessel_i(0, -1), DomainError);
}

TEST_CASE("K examples") {
    CHECK(bessel_k(0.5, 1) == doctest::Approx(0.4610685055).epsilon(1e-9));
    CHECK(bessel_k(0.5, 2) == doctest::Approx(0.1199377719).epsilon(1e-9));
    CHECK(bessel_k(0, 1) == doctest::Approx(0.4210244382).epsilon(1e-9));
    CHECK(bessel_k(0, 1) == doctest::Approx(oracle::bessel_k_quad(0, 1)).epsilon(1e-10));
}

TEST_CASE("K matches independent references over the stated range") {
    for (double g : {0.0, 0.1, 0.5, 1.0, 2.3, 5.0, 10.0, 20.0})
        for (double z : {1e-3, 0.01, 0.3, 1.0, 4.0, 17.0, 60.0, 250.0, 700.0}) {
            const double ref = oracle::bessel_k(g, z);
            if (!(ref > DBL_MIN) || !std::isfinite(ref)) continue;
            CAPTURE(g);
            CAPTURE(z);
            CHECK(rel(bessel_k(g, z), ref) <= 1e-8);
            CHECK(std::abs(log_bessel_k(g, z) - std::log(ref)) <= 1e-8);
        }
}

TEST_CASE("K by the integral representation, independently integrated") {
    for (double g : {0.0, 0.3, 1.7})
        for (double z : {0.2, 1.0, 3.0}) CHECK(rel(bessel_k(g, z), oracle::bessel_k_quad(g, z)) <= 1e-9);
}

TEST_CASE("K underflow is flagged") {
    const KValue v = bessel_k_checked(0.5, 800);
    CHECK(v.value == 0.0);
    CHECK(v.underflow);
    const KValue w = bessel_k_checked(0.5, 10);
    CHECK_FALSE(w.underflow);
    CHECK(w.value > 0);
    // log form stays finite
    CHECK(log_bessel_k(0.5, 800) ==
          doctest::Approx(0.5 * std::log(pi / 1600) - 800).epsilon(1e-12));
}

TEST_CASE("half-integer closed forms") {
    for (double z : {0.05, 0.3, 1.0, 2.0, 7.5, 20.0, 60.0}) {
        CHECK(rel(bessel_k(0.5, z), k_half(z)) <= 1e-10);
        CHECK(rel(bessel_k(1.5, z), k_three_halves(z)) <= 1e-10);
        CHECK(rel(bessel_i(0.5, z), i_half(z)) <= 1e-10);
        const double i32 = std::sqrt(2 / (pi * z)) * (std::cosh(z) - std::sinh(z) / z);
        CHECK(rel(bessel_i(1.5, z), i32) <= 1e-9);
    }
}

TEST_CASE("I examples") {
    CHECK(bessel_i(0.5, 1) == doctest::Approx(0.9376748882).epsilon(1e-9));
    CHECK(std::abs(bessel_i(0, 1e-8) - 1) <= 1e-8);
    double series = 0, fact_k = 1;
    for (int k = 0; k < 30; ++k) {
        if (k > 0) fact_k *= k;
        series += std::pow(0.5, 2 * k + 1) / (fact_k * fact_k * (k + 1));
    }
    CHECK(bessel_i(1, 1) == doctest::Approx(series).epsilon(1e-12));
    CHECK(bessel_i(1, 1) == doctest::Approx(0.5651591040).epsilon(1e-9));
}

TEST_CASE("I matches the reference over the stated range") {
    for (double g : {0.0, 0.1, 0.5, 1.0, 2.3, 5.0, 10.0, 20.0})
        for (double z : {1e-3, 0.01, 0.3, 1.0, 4.0, 17.0, 29.0, 31.0, 60.0, 250.0, 700.0}) {
            const double ref = oracle::bessel_i(g, z);
            if (!(ref > DBL_MIN) || !std::isfinite(ref)) continue;
            CAPTURE(g);
            CAPTURE(z);
            CHECK(rel(bessel_i(g, z), ref) <= 1e-8);
        }
}

TEST_CASE("scaled and log forms are consistent") {
    for (double g : {0.0, 1.0, 4.5})
        for (double z : {0.5, 10.0, 100.0}) {
            CHECK(rel(bessel_k_scaled(g, z), oracle::bessel_k(g, z) * std::exp(z)) <= 1e-8);
            CHECK(rel(bessel_i_scaled(g, z), oracle::bessel_i(g, z) * std::exp(-z)) <= 1e-8);
            CHECK(std::abs(log_bessel_i(g, z) - std::log(oracle::bessel_i(g, z))) <= 1e-8);
        }
}

TEST_CASE("K derivative recursion") {
    CHECK(bessel_k_prime(0.5, 1) == doctest::Approx(-0.6916028).epsilon(1e-6));
    CHECK(bessel_k_prime(0.5, 1) ==
          doctest::Approx(-k_three_halves(1) + 0.5 * k_half(1)).epsilon(1e-12));
    CHECK(bessel_k_prime(0, 2) == doctest::Approx(-0.1398658818).epsilon(1e-9));
    CHECK(bessel_k_prime(0, 2) == doctest::Approx(-oracle::bessel_k(1, 2)).epsilon(1e-10));
    const double h = 1e-5;
    for (double g : {0.0, 1.0})
        for (double z : {1.0, 5.0}) {
            const double fd = (bessel_k(g, z + h) - bessel_k(g, z - h)) / (2 * h);
            CHECK(rel(bessel_k_prime(g, z), fd) <= 1e-5);
        }
}

TEST_CASE("I derivative") {
    for (double g : {0.0, 0.7, 3.0})
        for (double z : {0.5, 3.0, 40.0}) {
            const double ref = oracle::bessel_i(g + 1, z) + g / z * oracle::bessel_i(g, z);
            CHECK(rel(bessel_i_prime(g, z), ref) <= 1e-8);
        }
}

TEST_CASE("Wronskian") {
    for (double g : {0.0, 0.3, 1.0, 2.5})
        for (double z : {0.5, 1.0, 5.0, 20.0}) {
            const double w = bessel_i(g, z) * bessel_k_prime(g, z) - bessel_i_prime(g, z) * bessel_k(g, z);
            CHECK(std::abs(w * z + 1) <= 1e-6);
        }
}

TEST_CASE("large-argument law") {
    for (double g : {0.5, 1.0, 1.5, 2.0})
        for (double z : {50.0, 80.0, 200.0, 500.0, 700.0}) {
            const double ratio = bessel_k_scaled(g, z) * std::sqrt(2 * z / pi);
            CHECK(ratio >= 1 - 5 * g * g / z);
            CHECK(ratio <= 1 + 5 * g * g / z);
        }
    // For order 0 the band has zero width; the true ratio is 1 - 1/(8z) + O(z^-2).
    for (double z : {50.0, 200.0}) {
        const double ratio = bessel_k_scaled(0, z) * std::sqrt(2 * z / pi);
        const double ref = oracle::bessel_k(0, z) * std::exp(z) * std::sqrt(2 * z / pi);
        CHECK(rel(ratio, ref) <= 1e-9);
        CHECK(ratio < 1);
        CHECK(std::abs(ratio - (1 - 1 / (8 * z))) <= 1 / (z * z));
    }
}

TEST_CASE("phi_ell") {
    CHECK(phi_ell(0, 2) == 2.0);
    CHECK(phi_ell(-2.0 / 3, 1) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(phi_ell(1, 3) == 4.5);
    oracle::Gen g(5);
    for (int i = 0; i < 200; ++i) {
        const double ell = g.uniform(-0.99, 3), a = g.uniform(0.01, 50), b = a + g.uniform(1e-3, 5);
        CHECK(phi_ell(ell, a) < phi_ell(ell, b));
    }
}
