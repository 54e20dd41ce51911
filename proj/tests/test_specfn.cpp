#include "doctest.h"

#include <cmath>
#include <numbers>

#include "msslab/error.hpp"
#include "msslab/quadrature.hpp"
#include "msslab/specfn.hpp"

using namespace msslab;

namespace {
constexpr double pi = std::numbers::pi;

// Lanczos (g=7, n=9) as an independent check of log_gamma.
cplx lanczos_log_gamma(cplx z) {
    static const double c[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    z -= 1.0;
    cplx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
    cplx t = z + 7.5;
    return 0.5 * std::log(2 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// J_nu(x) = (x/2)^nu / (sqrt(pi) Gamma(nu+1/2)) int_0^pi cos(x cos th) sin^{2nu} th dth
double bessel_by_integral(double nu, double x) {
    const auto& r = gauss_legendre::rule20();
    double total = 0.0;
    const int panels = 200;
    for (int j = 0; j < panels; ++j) {
        double a = pi * j / panels, b = pi * (j + 1) / panels;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < 20; ++i) {
            double th = mid + half * r.nodes[i];
            total += half * r.weights[i] * std::cos(x * std::cos(th)) * std::pow(std::sin(th), 2 * nu);
        }
    }
    return std::pow(x / 2, nu) / (std::sqrt(pi) * std::tgamma(nu + 0.5)) * total;
}
}  // namespace

TEST_CASE("gauss-legendre rule integrates polynomials of degree 39") {
    const auto& r = gauss_legendre::rule20();
    double w = 0, x38 = 0, x39 = 0;
    for (int i = 0; i < 20; ++i) {
        w += r.weights[i];
        x38 += r.weights[i] * std::pow(r.nodes[i], 38);
        x39 += r.weights[i] * std::pow(r.nodes[i], 39);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x38 == doctest::Approx(2.0 / 39).epsilon(1e-12));
    CHECK(std::abs(x39) < 1e-14);
}

TEST_CASE("log_gamma") {
    SUBCASE("closed forms") {
        CHECK(std::abs(log_gamma(0.5) - std::log(std::sqrt(pi))) < 1e-14);
        CHECK(std::abs(log_gamma(5.0) - std::log(24.0)) < 1e-14);
        CHECK(std::abs(log_gamma(1.0)) < 1e-15);
    }
    SUBCASE("agrees with std::lgamma on the positive axis") {
        for (double x = 0.05; x < 60; x *= 1.3) CHECK(std::abs(log_gamma(x).real() - std::lgamma(x)) < 1e-12 * std::max(1.0, std::lgamma(x)));
    }
    SUBCASE("recurrence and reflection of conjugates") {
        for (double re : {-3.7, -0.4, 0.3, 2.2, 11.0}) {
            for (double im : {0.2, 3.0, 40.0, -17.0}) {
                cplx z(re, im);
                cplx d = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
                double wrapped = std::remainder(d.imag(), 2 * pi);
                CHECK(std::abs(d.real()) < 1e-11);
                CHECK(std::abs(wrapped) < 1e-11);
                CHECK(std::abs(log_gamma(std::conj(z)) - std::conj(log_gamma(z))) < 1e-12);
            }
        }
    }
    SUBCASE("Lanczos oracle in the right half plane") {
        for (double re : {0.6, 1.5, 4.0, 9.0}) {
            for (double im : {-25.0, -2.0, 0.0, 1.0, 8.0, 30.0}) {
                cplx z(re, im);
                cplx a = log_gamma(z), b = lanczos_log_gamma(z);
                CHECK(std::abs(std::exp(a - b) - 1.0) < 1e-12);
            }
        }
    }
    SUBCASE("frozen high-precision values") {
        cplx a = log_gamma({0.3, 7.0});
        CHECK(a.real() == doctest::Approx(-10.4656744467029189).epsilon(1e-13));
        CHECK(a.imag() == doctest::Approx(6.31030964704076816).epsilon(1e-13));
        cplx b = log_gamma({-0.485, -150.0});
        CHECK(b.real() == doctest::Approx(-239.635991505662524).epsilon(1e-13));
        CHECK(b.imag() == doctest::Approx(-600.045103438974729).epsilon(1e-13));
        cplx c = log_gamma({-2.5, 0.5});
        CHECK(c.real() == doctest::Approx(-0.935085621298277479).epsilon(1e-13));
        CHECK(std::abs(std::remainder(c.imag() + 8.87096288524745920, 2 * pi)) < 1e-12);
    }
    SUBCASE("poles") {
        CHECK_THROWS_AS(log_gamma(0.0), Error);
        CHECK_THROWS_AS(log_gamma(cplx(-3.0, 1e-12)), Error);
        CHECK_NOTHROW(log_gamma(cplx(-3.0, 1e-6)));
        try {
            log_gamma(-7.0);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::PoleProximity);
        }
    }
}

TEST_CASE("bessel_j") {
    SUBCASE("half-integer closed forms") {
        CHECK(std::abs(bessel_j(0.5, pi)) < 1e-15);
        CHECK(bessel_j(-0.5, 1.0) == doctest::Approx(std::sqrt(2 / pi) * std::cos(1.0)).epsilon(1e-14));
        for (double x : {0.3, 5.0, 10.0, 19.9, 20.1, 45.0, 300.0}) {
            double closed = std::sqrt(2 / (pi * x)) * (std::sin(x) / x - std::cos(x));
            CHECK(std::abs(bessel_j(1.5, x) - closed) < 1e-12);
            CHECK(std::abs(bessel_j(-0.5, x) - std::sqrt(2 / (pi * x)) * std::cos(x)) < 1e-12);
        }
    }
    SUBCASE("integer orders against std::cyl_bessel_j") {
        for (int m = 0; m < 5; ++m)
            for (double x : {0.5, 7.0, 21.0, 80.0}) {
                CHECK(std::abs(bessel_j(m, x) - std::cyl_bessel_j(double(m), x)) < 1e-12);
                double sign = (m % 2) ? -1.0 : 1.0;
                CHECK(std::abs(bessel_j(-m, x) - sign * std::cyl_bessel_j(double(m), x)) < 1e-12);
            }
    }
    SUBCASE("integral representation") {
        for (double nu : {0.5, 0.7, 1.5, 2.5})
            for (double x : {1.0, 3.3, 12.0, 25.0, 30.0}) CHECK(std::abs(bessel_j(nu, x) - bessel_by_integral(nu, x)) < 5e-11);
    }
    SUBCASE("frozen values") {
        CHECK(bessel_j(2.5, 30.0) == doctest::Approx(0.141202858799282120).epsilon(1e-12));
        CHECK(bessel_j(0.7, 3.3) == doctest::Approx(0.0531584604426001472).epsilon(1e-13));
        CHECK(bessel_j(1.5, 25.0) == doctest::Approx(-0.159017895386036580).epsilon(1e-12));
    }
    CHECK_THROWS_AS(bessel_j(1.0, 0.0), Error);
}

TEST_CASE("omega quadrature") {
    SUBCASE("frozen high-precision values") {
        struct Row {
            int nu, k;
            double y, expect;
        };
        for (Row r : {Row{0, 1, 1000.0, -3.16234405719709833}, Row{1, 2, 2000.0, 0.00782554723647070083},
                      Row{0, 1, 3375.0, 6.47885742690585899}}) {
            OmegaParams p;
            p.nu = r.nu;
            p.k = r.k;
            p.y = r.y;
            auto res = omega_quadrature(p);
            CHECK(std::abs(res.value.real() - r.expect) < 1e-7);
            CHECK(std::abs(res.value.imag()) < 1e-9);
            CHECK(res.est_quad_error < 1e-8);
        }
    }
    SUBCASE("tracks the Bessel main term") {
        for (double u : {8.0, 11.0, 14.0}) {
            OmegaParams p;
            p.y = u * u * u;
            auto res = omega_quadrature(p);
            auto main = omega_main_term(0, 1, p.y, 3);
            REQUIRE(main.cosine_form.has_value());
            CHECK(main.cosine_gap < 1e-12 * std::max(1.0, std::abs(*main.cosine_form)));
            // remainder stays within a few units of y^{1/2-1/(2n)-1/n} plus the
            // truncation of the contour near |t| = Y
            CHECK(std::abs(res.value.real() - main.bessel_form) < 5.0 * main.gap_scale + 2.0);
        }
    }
    SUBCASE("hypotheses") {
        OmegaParams p;
        p.y = std::pow(1.5 * p.Y, 3) * 1.01;
        CHECK_THROWS_AS(omega_quadrature(p), Error);
        OmegaParams q;
        q.delta = 0.0;
        try {
            omega_quadrature(q);
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::HypothesisViolated);
        }
    }
}

TEST_CASE("omega main term") {
    auto m = omega_main_term(1, 2, 2000.0, 3);
    CHECK_FALSE(m.cosine_form.has_value());
    double expect = 1.5 * std::pow(2000.0, 0.5 - 2.0 / 3) * bessel_j(1.5, 2 * std::cbrt(2000.0));
    CHECK(m.bessel_form == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("sine square integral") {
    auto s = sine_square_integral(1e4);
    CHECK(std::abs(s.value - pi * pi / 2) < 1e-4);
    // tail is ~ 1/(2 B) up to oscillation
    auto s2 = sine_square_integral(2e4);
    CHECK(s.tail_gap > 0);
    CHECK(s.tail_gap / s2.tail_gap == doctest::Approx(2.0).epsilon(0.01));
    CHECK(s.tail_gap == doctest::Approx(0.5 / 1e4).epsilon(0.01));
    CHECK_THROWS_AS(sine_square_integral(5.0), Error);
}

TEST_CASE("omega envelope and zero alignment") {
    OmegaParams p;
    p.y = 1000.0;
    p.Y = 100.0;
    double e = omega_envelope(p);
    CHECK(e == doctest::Approx(1.0 + std::pow(100.0, 0.53) + std::pow(100.0, 0.5) / std::log(std::pow(150.0, 3) / 1000.0)));
    auto r = omega_quadrature(p);
    CHECK(std::abs(r.value.real() - omega_main_term(0, 1, p.y, 3).bessel_form) < 5 * e);

    double lo = HUGE_VAL, hi = 0.0;
    for (double y : {10.0, 100.0, 1000.0, 10000.0}) {
        double c = omega_envelope_constant(0, 1, y);
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    CHECK(hi / lo < 5.0);

    OmegaParams base;
    base.Y = 100.0;
    auto z = omega_zero_alignment(30.0, 36.0, 0.04, base);
    CHECK(z.cosine_zeros.size() == 4);
    CHECK(z.worst_relative < 0.02);
}
