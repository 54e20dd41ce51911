#include "msslab/rankin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "msslab/error.hpp"
#include "msslab/parallel.hpp"
#include "msslab/primes.hpp"
#include "msslab/specfn.hpp"
#include "msslab/summation.hpp"

namespace msslab {

namespace {

constexpr double kPi = std::numbers::pi;

double max_modulus(const SatakeParams& params) {
    double r = 0.0;
    for (cplx a : params.alphas) r = std::max(r, std::abs(a));
    return r;
}

double binomial(int top, int bottom) {
    double c = 1.0;
    for (int i = 1; i <= bottom; ++i) c = c * (top - bottom + i) / i;
    return c;
}

// sum_{k > K} C(k+n-1, n-1)^2 q^k
double envelope_tail(int n, int K, double q) {
    double term = std::pow(binomial(K + n, n - 1), 2) * std::pow(q, K + 1);
    double total = 0.0;
    // term ratios decrease towards q, so the remainder after any k with
    // ratio < 1 is dominated by a geometric series
    double ratio = 1.0;
    for (int k = K + 1; k < K + 100000; ++k) {
        ratio = std::pow(static_cast<double>(k + n) / (k + 1), 2) * q;
        if (ratio < 0.9) return total + term / (1.0 - ratio);
        total += term;
        term *= ratio;
    }
    return ratio < 1.0 ? total + term / (1.0 - ratio) : HUGE_VAL;
}

}  // namespace

cplx local_rs_factor(const SatakeParams& params, cplx s) {
    const cplx ps = std::exp(-s * std::log(static_cast<double>(params.p)));
    cplx prod = 1.0;
    for (cplx a : params.alphas) {
        for (cplx b : params.alphas) {
            cplx f = 1.0 - a * std::conj(b) * ps;
            if (std::abs(f) < 1e-12) throw Error(Errc::PoleProximity, "Rankin-Selberg local factor vanishes at p=" + std::to_string(params.p));
            prod *= f;
        }
    }
    return 1.0 / prod;
}

LocalFactorValue local_Pn_value(const SatakeParams& params, double T, int k_max) {
    const int n = params.rank();
    if (!(std::abs(T) < 1.0)) throw Error(Errc::InvalidArgument, "|T| must be < 1");
    if (k_max < n * n) throw Error(Errc::InvalidArgument, "k_max must be >= n^2");
    const double r = max_modulus(params);
    const double q = r * r * std::abs(T);
    if (q >= 1.0) throw Error(Errc::Diverges, "r^2 |T| >= 1 at p=" + std::to_string(params.p));

    auto h = complete_homogeneous_series(params.alphas, k_max);
    cplx series = 0.0;
    double power = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        series += std::norm(h[k]) * power;
        power *= T;
    }
    cplx prod = 1.0;
    for (cplx a : params.alphas)
        for (cplx b : params.alphas) prod *= 1.0 - a * std::conj(b) * T;

    LocalFactorValue out;
    out.p = params.p;
    out.value = series * prod;
    out.truncation_k = k_max;
    out.tail_bound = envelope_tail(n, k_max, q) * std::abs(prod);
    return out;
}

HfOneReport H_f_one(const FormSpec& form, std::uint32_t P_max, int k_max) {
    validate(form);
    if (!form.arithmetic()) throw Error(Errc::InvalidArgument, "H_f(1) is undefined for the degenerate form");
    if (form.theta_assumed >= 0.5) throw Error(Errc::HypothesisViolated, "theta must be < 1/2");
    if (P_max < 20) throw Error(Errc::InvalidArgument, "P_max must be >= 20");

    const auto primes = primes_up_to(P_max);
    std::vector<double> logs(primes.size());
    std::vector<double> tails(primes.size());
    parallel_for(primes.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto sp = satake_for(form, primes[i]);
            auto v = local_Pn_value(sp, 1.0 / primes[i], k_max);
            if (!(v.value.real() > 0.0)) throw Error(Errc::Diverges, "non-positive local factor at p=" + std::to_string(primes[i]));
            logs[i] = std::log(v.value.real());
            tails[i] = v.tail_bound;
        }
    });

    HfOneReport out;
    out.P_max = P_max;
    out.primes = primes.size();
    CompensatedSum total, at_half, at_tenth;
    double scaled_max = 0.0;  // max over the last decade of p^2 |log P_n(1/p)|
    for (std::size_t i = 0; i < primes.size(); ++i) {
        total.add(logs[i]);
        if (primes[i] <= P_max / 2) at_half.add(logs[i]);
        if (primes[i] <= P_max / 10) at_tenth.add(logs[i]);
        if (primes[i] > P_max / 10) scaled_max = std::max(scaled_max, std::abs(logs[i]) * primes[i] * primes[i]);
        out.max_local_tail = std::max(out.max_local_tail, tails[i]);
    }
    out.value = std::exp(total.value());
    out.drift = std::abs(std::expm1(total.value() - at_half.value()));
    out.decade_drift = std::abs(std::expm1(total.value() - at_tenth.value()));
    // sum_{p > P} p^{-2} ~ 1 / (P log P)
    out.log_tail = scaled_max / (P_max * std::log(static_cast<double>(P_max)));
    return out;
}

SlopeEstimate empirical_rs_slope(const HeckeTable& table, std::uint32_t x) {
    if (x < 1 || x > table.M()) throw Error(Errc::RangeExceeded, "slope point outside the table");
    CompensatedSum full, half;
    const std::uint32_t mid = x / 2;
    for (std::uint32_t m = 1; m <= x; ++m) {
        full.add(table.abs2(m));
        if (m == mid) half = full;
    }
    SlopeEstimate out;
    out.x = x;
    out.slope = full.value() / x;
    if (mid >= 1) out.drift = std::abs(out.slope / (half.value() / mid) - 1.0);
    return out;
}

WeightedSinSum weighted_sin_sum(const HeckeTable& table, double X, double theta, double L, double slope) {
    if (!(L >= 2.0)) throw Error(Errc::InvalidArgument, "L must be >= 2");
    const double top = std::pow(X, theta);
    if (top >= static_cast<double>(table.M()) + 1.0) throw Error(Errc::RangeExceeded, "X^theta exceeds the table");
    const int n = table.n();
    const auto last = static_cast<std::uint32_t>(std::floor(top * (1.0 + 1e-15)));

    WeightedSinSum out;
    CompensatedSum sum;
    for (std::uint32_t m = 1; m <= last; ++m) {
        double root = std::pow(static_cast<double>(m), 1.0 / n);
        double s = std::sin(kPi * root / L);
        sum.add(table.abs2(m) * s * s / (m * root));
    }
    out.value = sum.value();
    out.terms = last;
    out.slope = slope > 0.0 ? slope : empirical_rs_slope(table, table.M()).slope;
    out.prediction = out.slope * n * kPi * kPi / (2.0 * L);
    out.ratio = out.value / out.prediction;

    // int_a^b sin^2(pi y)/y^2 dy on fine panels
    const double a = 1.0 / L, b = std::pow(top, 1.0 / n) / L;
    const int panels = 2000;
    CompensatedSum integral;
    for (int j = 0; j < panels; ++j) {
        double lo = a + (b - a) * j / panels, hi = a + (b - a) * (j + 1) / panels;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i : {-1, 1}) {
            double y = mid + i * half / std::sqrt(3.0);
            double s = std::sin(kPi * y) / y;
            integral.add(half * s * s);
        }
    }
    out.finite_prediction = out.slope * n / L * integral.value();
    return out;
}

MultiIndexSum rs_multi_index_sum(const FormSpec& form, std::uint32_t x) {
    validate(form);
    if (form.n != 3) throw Error(Errc::Unsupported, "multi-index sum implemented for n = 3 only");
    if (x < 1 || x > 1000000) throw Error(Errc::InvalidArgument, "x must lie in [1, 10^6]");

    MultiIndexSum out;
    out.x = x;
    const auto m1_max = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(x)) + 1.0);
    std::vector<double> partial(m1_max + 1, 0.0);

    if (form.source == SourceKind::Degenerate) {
        for (std::uint32_t m1 = 1; m1 <= m1_max; ++m1) {
            std::uint64_t sq = static_cast<std::uint64_t>(m1) * m1;
            if (sq <= x) partial[m1] = static_cast<double>(x / sq);
        }
    } else {
        const HeckeTable table = build_coefficient_table(form, x);
        const auto spf = smallest_prime_factors(x);
        parallel_for(m1_max + 1, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = std::max<std::size_t>(begin, 1); i < end; ++i) {
                const auto m1 = static_cast<std::uint32_t>(i);
                const std::uint64_t sq = static_cast<std::uint64_t>(m1) * m1;
                if (sq > x) continue;
                const auto f1 = factorize(m1, spf);
                CompensatedSum acc;
                for (std::uint32_t m2 = 1; m2 <= x / sq; ++m2) {
                    if (std::gcd(m1, m2) == 1) {
                        acc.add(std::norm(table.value(m1) * std::conj(table.value(m2))));
                        continue;
                    }
                    const auto f2 = factorize(m2, spf);
                    cplx a = 1.0;
                    std::size_t j = 0;
                    for (const auto& [p, k] : f1) {
                        while (j < f2.size() && f2[j].p < p) {
                            a *= std::conj(table.value(static_cast<std::uint32_t>(std::pow(f2[j].p, f2[j].k) + 0.5)));
                            ++j;
                        }
                        if (j < f2.size() && f2[j].p == p) {
                            int betas[2] = {k, f2[j].k};
                            a *= multi_index_prime_power(satake_for(form, p), betas);
                            ++j;
                        } else {
                            a *= table.value(static_cast<std::uint32_t>(std::pow(p, k) + 0.5));
                        }
                    }
                    for (; j < f2.size(); ++j) a *= std::conj(table.value(static_cast<std::uint32_t>(std::pow(f2[j].p, f2[j].k) + 0.5)));
                    acc.add(std::norm(a));
                }
                partial[m1] = acc.value();
            }
        });
    }
    CompensatedSum total;
    for (double v : partial) total.add(v);
    out.sum = total.value();
    out.ratio = out.sum / x;
    return out;
}

double zeta(double s) {
    if (!(s > 1.0)) throw Error(Errc::InvalidArgument, "zeta needs s > 1");
    // Euler-Maclaurin with N = 64 and three correction terms
    const int N = 64;
    CompensatedSum sum;
    for (int k = N - 1; k >= 1; --k) sum.add(std::pow(k, -s));
    const double Nd = N;
    double tail = std::pow(Nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nd, -s) + s * std::pow(Nd, -s - 1.0) / 12.0 -
                  s * (s + 1.0) * (s + 2.0) * std::pow(Nd, -s - 3.0) / 720.0 +
                  s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * std::pow(Nd, -s - 5.0) / 30240.0;
    return sum.value() + tail;
}

FactorisationCheck factorisation_check(double slope, double multi_ratio, double H, int n) {
    FactorisationCheck out;
    out.raw = slope / (multi_ratio * H);
    out.corrected = out.raw / zeta(n);
    return out;
}

}  // namespace msslab
