#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "msslab/error.hpp"
#include "msslab/primes.hpp"
#include "msslab/satake.hpp"
#include "oracles.hpp"

using namespace msslab;

namespace {

bool same_multiset(std::vector<cplx> a, std::vector<cplx> b, double tol) {
    if (a.size() != b.size()) return false;
    for (cplx x : a) {
        auto it = std::find_if(b.begin(), b.end(), [&](cplx y) { return std::abs(x - y) < tol; });
        if (it == b.end()) return false;
        b.erase(it);
    }
    return true;
}

}  // namespace

TEST_CASE("sample_tempered_satake") {
    SUBCASE("n=3 gives a conjugate pair and the fixed point 1") {
        for (std::uint32_t p : {2u, 3u, 101u, 7919u}) {
            auto sp = sample_tempered_satake(3, p, 42);
            REQUIRE(sp.alphas.size() == 3);
            double phi = std::abs(std::arg(sp.alphas[0]));
            CHECK(phi <= std::numbers::pi);
            CHECK(same_multiset(sp.alphas, {std::polar(1.0, phi), std::polar(1.0, -phi), 1.0}, 1e-12));
            CHECK_NOTHROW(validate(sp));
        }
    }
    SUBCASE("product one, unit modulus, conjugation closed for n = 3..8") {
        for (int n = 3; n <= 8; ++n) {
            auto sp = sample_tempered_satake(n, 13, 7);
            cplx prod = 1.0;
            for (cplx a : sp.alphas) prod *= a;
            CHECK(std::abs(prod - 1.0) < 1e-12);
            CHECK_NOTHROW(validate(sp));
        }
    }
    SUBCASE("deterministic in (n, p, seed)") {
        auto a = sample_tempered_satake(4, 31, 99);
        auto b = sample_tempered_satake(4, 31, 99);
        for (int j = 0; j < 4; ++j) CHECK(a.alphas[j] == b.alphas[j]);
        auto c = sample_tempered_satake(4, 31, 100);
        CHECK(c.alphas[0] != a.alphas[0]);
    }
    SUBCASE("rejects bad input") {
        CHECK_THROWS_AS(sample_tempered_satake(2, 3, 1), Error);
        CHECK_THROWS_AS(sample_tempered_satake(3, 4, 1), Error);
        CHECK_THROWS_AS(sample_tempered_satake(3, 1, 1), Error);
    }
    SUBCASE("A(p) has mean ~0 and mean square ~1 over primes") {
        // sym^{n-1} of a Sato-Tate angle: trace of an irreducible representation
        double sum = 0, sum2 = 0;
        auto primes = primes_up_to(200000);
        for (auto p : primes) {
            double a = prime_power_eigenvalue(sample_tempered_satake(3, p, 5), 1).real();
            sum += a;
            sum2 += a * a;
        }
        double N = static_cast<double>(primes.size());
        CHECK(std::abs(sum / N) < 0.02);
        CHECK(std::abs(sum2 / N - 1.0) < 0.03);
    }
}

TEST_CASE("satake_from_gl2_lift") {
    auto one = satake_from_gl2_lift(2.0, 3);
    CHECK(same_multiset(one.alphas, {1.0, 1.0, 1.0}, 1e-12));
    auto zero = satake_from_gl2_lift(0.0, 3);
    CHECK(same_multiset(zero.alphas, {-1.0, 1.0, -1.0}, 1e-12));

    double a2 = -24.0 / std::pow(2.0, 5.5);
    auto delta2 = satake_from_gl2_lift(a2, 3, 2);
    CHECK(prime_power_eigenvalue(delta2, 1).real() == doctest::Approx(-0.71875).epsilon(1e-13));
    CHECK_NOTHROW(validate(delta2));

    auto wild = satake_from_gl2_lift(2.5, 3);
    CHECK_FALSE(wild.tempered);
    CHECK(prime_power_eigenvalue(wild, 1).real() == doctest::Approx(2.5 * 2.5 - 1.0));
}

TEST_CASE("complete_homogeneous") {
    std::vector<cplx> ones{1.0, 1.0, 1.0};
    CHECK(complete_homogeneous(ones, 0) == cplx(1.0));
    CHECK(complete_homogeneous(ones, 2) == cplx(6.0));
    for (int k = 0; k <= 10; ++k) CHECK(complete_homogeneous(ones, k).real() == doctest::Approx((k + 2) * (k + 1) / 2));

    cplx w = std::polar(1.0, 2 * std::numbers::pi / 3);
    std::vector<cplx> roots{1.0, w, w * w};
    CHECK(std::abs(complete_homogeneous(roots, 2)) < 1e-14);
    // 1/(1 - T^3)
    for (int k = 0; k <= 9; ++k) {
        double expect = (k % 3 == 0) ? 1.0 : 0.0;
        CHECK(std::abs(complete_homogeneous(roots, k) - expect) < 1e-13);
    }

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        auto alphas = oracle::random_unitary_product_one(3 + trial % 3, rng);
        for (int k = 0; k <= 6; ++k) {
            CHECK(std::abs(complete_homogeneous(alphas, k) - oracle::homogeneous_by_enumeration(alphas, k)) < 1e-11);
        }
    }
    CHECK_THROWS_AS(complete_homogeneous(ones, -1), Error);
}

TEST_CASE("schur_determinant") {
    std::mt19937_64 rng(11);
    SUBCASE("all-zero subscripts give 1") {
        for (int n = 3; n <= 6; ++n) {
            auto a = oracle::random_unitary_product_one(n, rng);
            std::vector<int> zero(n - 1, 0);
            CHECK(std::abs(schur_determinant(a, zero) - 1.0) < 1e-12);
        }
    }
    SUBCASE("S_{0,...,0,k} agrees with the recurrence") {
        for (int trial = 0; trial < 200; ++trial) {
            int n = 3 + trial % 3;
            auto a = oracle::random_unitary_product_one(n, rng);
            for (int k = 0; k <= 8; ++k) {
                std::vector<int> sub(n - 1, 0);
                sub.back() = k;
                CHECK(std::abs(schur_determinant(a, sub) - complete_homogeneous(a, k)) < 1e-9);
            }
        }
    }
    SUBCASE("duality under subscript reversal") {
        for (int trial = 0; trial < 100; ++trial) {
            int n = 3 + trial % 3;
            auto a = oracle::random_unitary_product_one(n, rng);
            std::vector<int> sub(n - 1);
            for (auto& s : sub) s = static_cast<int>(rng() % 4);
            std::vector<int> rev(sub.rbegin(), sub.rend());
            CHECK(std::abs(schur_determinant(a, sub) - std::conj(schur_determinant(a, rev))) < 1e-9);
        }
    }
    SUBCASE("near-degenerate alphas are refused") {
        std::vector<cplx> a{1.0, 1.0, 1.0};
        std::vector<int> sub{0, 1};
        CHECK_THROWS_AS(schur_determinant(a, sub), Error);
        try {
            schur_determinant(a, sub);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NearDegenerateAlphas);
        }
    }
}

TEST_CASE("prime power and multi-index eigenvalues") {
    auto lift2 = satake_from_gl2_lift(2.0, 3);
    CHECK(prime_power_eigenvalue(lift2, 0) == cplx(1.0));
    CHECK(prime_power_eigenvalue(lift2, 1) == cplx(3.0));
    CHECK(prime_power_eigenvalue(satake_from_gl2_lift(0.0, 3), 1).real() == doctest::Approx(-1.0));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 3 + trial % 3;
        SatakeParams sp;
        sp.p = 2;
        sp.alphas = oracle::random_unitary_product_one(n, rng);
        sp.self_dual = false;
        std::vector<int> zeros(n - 1, 0);
        CHECK(std::abs(multi_index_prime_power(sp, zeros) - 1.0) < 1e-12);
        std::vector<int> first(n - 1, 0);
        first[0] = 1;
        CHECK(std::abs(multi_index_prime_power(sp, first) - prime_power_eigenvalue(sp, 1)) < 1e-12);

        std::vector<int> betas(n - 1);
        for (auto& b : betas) b = static_cast<int>(rng() % 4);
        std::vector<int> rev(betas.rbegin(), betas.rend());
        cplx a = multi_index_prime_power(sp, betas);
        // Jacobi-Trudi against the determinant ratio, subscripts reversed as written
        CHECK(std::abs(a - schur_determinant(sp.alphas, rev)) < 1e-9);
        CHECK(std::abs(a - std::conj(multi_index_prime_power(sp, rev))) < 1e-9);
    }

    SatakeParams bad;
    bad.p = 3;
    bad.alphas = {cplx(0, 1), cplx(0, -1) * cplx(0, 1) * cplx(0, 1), 1.0};
    bad.alphas = {std::polar(1.0, 0.3), std::polar(1.0, 0.4), std::polar(1.0, -0.7)};
    bad.self_dual = true;
    CHECK_THROWS_AS(prime_power_eigenvalue(bad, 1), Error);
}

TEST_CASE("coefficient tables") {
    FormSpec form;
    form.n = 3;
    form.seed = 2024;
    form.label = "synthetic";

    SUBCASE("degenerate form is all ones") {
        FormSpec deg = form;
        deg.source = SourceKind::Degenerate;
        CHECK_FALSE(deg.arithmetic());
        auto t = build_coefficient_table(deg, 1000);
        for (std::uint32_t m = 1; m <= 1000; ++m) CHECK(t.real(m) == 1.0);
        CHECK(t.prefix(1000) == 1000.0);
    }

    auto table = build_coefficient_table(form, 200000);
    SUBCASE("normalisation and coprime construction are exact") {
        CHECK(table.real(1) == 1.0);
        CHECK(table.real(6) == table.real(2) * table.real(3));
        CHECK(table.real(35) == table.real(5) * table.real(7));
        CHECK(table.real(4) == prime_power_eigenvalue(satake_for(form, 2), 2).real());
    }
    SUBCASE("prefix differences reproduce values exactly") {
        for (std::uint32_t m = 1; m <= table.M(); ++m) {
            REQUIRE(table.range_sum(m, m) == table.real(m));
        }
    }
    SUBCASE("multiplicativity on random coprime pairs") {
        std::mt19937_64 rng(17);
        int checked = 0;
        while (checked < 10000) {
            std::uint32_t a = 1 + rng() % 2000;
            std::uint32_t b = 1 + rng() % (table.M() / a);
            if (std::gcd(a, b) != 1) continue;
            CHECK(std::abs(table.real(a * b) - table.real(a) * table.real(b)) < 1e-9);
            ++checked;
        }
    }
    SUBCASE("Hecke bound at primes") {
        for (std::uint32_t p : primes_up_to(table.M())) CHECK(std::abs(table.real(p)) <= 3.0 + 1e-12);
    }
    SUBCASE("agrees with an independent Euler-product expansion") {
        auto oracle_values = oracle::dirichlet_coefficients_by_euler_product(form, 5000);
        for (std::uint32_t m = 1; m <= 5000; ++m) CHECK(std::abs(table.real(m) - oracle_values[m]) < 1e-10);
    }
    SUBCASE("deterministic rebuild is bit-identical") {
        auto again = build_coefficient_table(form, 200000);
        CHECK(std::equal(table.real_values().begin(), table.real_values().end(), again.real_values().begin()));
    }
    SUBCASE("truncation keeps the prefix") {
        auto small = table.truncated(1000);
        CHECK(small.M() == 1000);
        CHECK(small.prefix(1000) == table.prefix(1000));
        CHECK_THROWS_AS(small.prefix(1001), Error);
    }
}

TEST_CASE("a_p files") {
    SUBCASE("single record") {
        std::istringstream in("# Delta\n2 -0.530330\n");
        auto d = parse_ap_stream(in, "mem");
        CHECK(d.at(2) == doctest::Approx(-0.530330));
        CHECK(d.bound_violations().empty());
    }
    SUBCASE("empty file covers no primes") {
        std::istringstream in("");
        FormSpec lift;
        lift.source = SourceKind::SymLift;
        lift.gl2 = std::make_shared<Gl2Data>(parse_ap_stream(in, "empty"));
        try {
            build_coefficient_table(lift, 2);
            FAIL("expected MissingPrime");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::MissingPrime);
        }
    }
    SUBCASE("malformed lines name the line") {
        for (std::string text : {"2 0.1\n3 x\n", "2 0.1\n4 0.2\n", "3 0.1\n2 0.2\n", "2  0.1\n", "2 0.1 7\n"}) {
            std::istringstream in(text);
            try {
                parse_ap_stream(in, "bad");
                FAIL("expected ParseError");
            } catch (const Error& e) {
                CHECK(e.code() == Errc::ParseError);
                CHECK(std::string(e.what()).find("bad:") != std::string::npos);
            }
        }
        std::istringstream in("2 0.1\n3 x\n");
        try {
            parse_ap_stream(in, "f");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("f:2") != std::string::npos);
        }
    }
    SUBCASE("bound violations are recorded") {
        std::istringstream in("2 0.1\n3 2.5\n");
        auto d = parse_ap_stream(in, "mem");
        REQUIRE(d.bound_violations().size() == 1);
        CHECK(d.bound_violations()[0] == 3);
    }
    SUBCASE("lift beyond the data is OutOfRange") {
        std::istringstream in("2 0.1\n3 0.2\n5 -0.3\n");
        FormSpec lift;
        lift.source = SourceKind::SymLift;
        lift.gl2 = std::make_shared<Gl2Data>(parse_ap_stream(in, "short"));
        CHECK_NOTHROW(build_coefficient_table(lift, 6));
        try {
            build_coefficient_table(lift, 7);
            FAIL("expected OutOfRange");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::OutOfRange);
        }
    }
    SUBCASE("round trip through a file") {
        auto path = std::filesystem::temp_directory_path() / "msslab_ap_roundtrip.txt";
        Gl2Data d({2, 3, 5}, {-0.5303300858899107, 0.5, 1.25}, "mem");
        write_ap_file(path, d, "test");
        auto back = ingest_ap_file(path);
        CHECK(back.values() == d.values());
        std::filesystem::remove(path);
    }
}
