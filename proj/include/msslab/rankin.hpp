#pragma once

#include <cstdint>

#include "msslab/satake.hpp"

namespace msslab {

struct LocalFactorValue {
    std::uint32_t p = 0;
    cplx value;
    int truncation_k = 0;
    double tail_bound = 0.0;
    bool converged() const noexcept { return tail_bound < 1e-10; }
};

// prod_{k,l} (1 - alpha_k conj(alpha_l) p^{-s})^{-1}. PoleProximity when a
// factor falls below 1e-12 in modulus.
cplx local_rs_factor(const SatakeParams& params, cplx s);

// P_n(alpha, conj(alpha), T) = [sum_{k <= k_max} |h_k|^2 T^k] * prod (1 - alpha_k conj(alpha_l) T).
//
// tail_bound majorises the dropped terms with |h_k| <= C(k+n-1, n-1) r^k,
// r = max |alpha|, times the exact |prod (1 - alpha_k conj(alpha_l) T)|. Diverges when r^2 |T| >= 1;
// InvalidArgument when |T| >= 1 or k_max < n^2.
LocalFactorValue local_Pn_value(const SatakeParams& params, double T, int k_max = 64);

struct HfOneReport {
    double value = 0.0;
    std::uint32_t P_max = 0;
    std::size_t primes = 0;
    double drift = 0.0;         // |H(P_max) / H(P_max/2) - 1|
    double decade_drift = 0.0;  // |H(P_max) / H(P_max/10) - 1|
    double log_tail = 0.0;      // estimate of |sum_{p > P_max} log P_n(1/p)|
    double max_local_tail = 0.0;
};

// prod_{p <= P_max} P_n(alpha_p, conj(alpha_p), 1/p). Rejects the degenerate
// form (InvalidArgument) and theta_assumed >= 1/2 (HypothesisViolated).
HfOneReport H_f_one(const FormSpec& form, std::uint32_t P_max = 10000, int k_max = 64);

struct SlopeEstimate {
    std::uint32_t x = 0;
    double slope = 0.0;  // sum_{m <= x} |A(m)|^2 / x
    double drift = 0.0;  // |slope(x) / slope(x/2) - 1|
};

SlopeEstimate empirical_rs_slope(const HeckeTable& table, std::uint32_t x);

struct WeightedSinSum {
    double value = 0.0;
    double prediction = 0.0;         // slope * n * pi^2 / (2L)
    double ratio = 0.0;              // value / prediction
    double finite_prediction = 0.0;  // slope * (n/L) * int_{1/L}^{X^{theta/n}/L} sin^2(pi y)/y^2 dy
    double slope = 0.0;
    std::uint32_t terms = 0;
};

// sum_{m <= X^theta} |A(m)|^2 m^{-1-1/n} sin^2(pi m^{1/n} / L). The slope in
// the predictions is empirical_rs_slope at the full table length unless given.
WeightedSinSum weighted_sin_sum(const HeckeTable& table, double X, double theta, double L, double slope = 0.0);

struct MultiIndexSum {
    std::uint32_t x = 0;
    double sum = 0.0;    // sum_{m1^2 m2 <= x} |A(m1, m2)|^2
    double ratio = 0.0;  // sum / x
};

// n = 3 only (Unsupported otherwise); x <= 10^6. Coprime pairs use
// A(m1, m2) = A(m1, 1) conj(A(m2, 1)); shared primes go through
// multi_index_prime_power. The degenerate form has A = 1 throughout.
MultiIndexSum rs_multi_index_sum(const FormSpec& form, std::uint32_t x);

// zeta(s) for real s > 1.
double zeta(double s);

struct FactorisationCheck {
    double raw = 0.0;        // slope / (ratio * H)
    double corrected = 0.0;  // slope / (zeta(n) * ratio * H)
};

// The multi-index series is L(s, f x f~) / zeta(ns), so its residue is
// r_f / zeta(n); `corrected` restores that factor.
FactorisationCheck factorisation_check(double slope, double multi_ratio, double H, int n);

}  // namespace msslab
