#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace msslab {

using cplx = std::complex<double>;

// log Gamma(z), analytic continuation real on the positive axis (the branch
// that satisfies logG(z+1) = logG(z) + log z with principal logs off the
// real axis). Throws PoleProximity within 1e-10 of a non-positive integer.
cplx log_gamma(cplx z);

// Bessel J of real order. Power series (long double) for x <= 20, Hankel
// asymptotic expansion beyond. Negative integer orders use J_{-m} = (-1)^m J_m.
double bessel_j(double order, double x);

struct OmegaParams {
    int nu = 0;
    int k = 1;
    double y = 100.0;
    double delta = 0.01;
    double Y = 1000.0;
    double Lambda = 10.0;
    int n = 3;
};

struct OmegaResult {
    cplx value;
    long nodes = 0;
    double est_quad_error = 0.0;
    OmegaParams params;
};

// (1/2 pi i) * integral over the segment from -delta - iY to -delta + iY of
//   Gamma((1 - n s)/2) / Gamma((n s + 1)/2 + nu - n/2) * (s + Lambda)^{-k} * y^s ds.
//
// Composite 20-point Gauss-Legendre with panel widths set by the local phase
// derivative |log y - n log(n|t|/2)|, so every panel spans at most one
// oscillation; the error estimate is the change under panel halving.
// Throws HypothesisViolated when y >= (nY/2)^n or a parameter is out of
// range, NonConvergence when halving stalls above 1e-8.
OmegaResult omega_quadrature(const OmegaParams& params);

struct OmegaMainTerm {
    double bessel_form = 0.0;           // (n/2)^{k-1} y^{1/2+(1-nu-k)/n} J_{nu+k-n/2}(2 y^{1/n})
    std::optional<double> cosine_form;  // (nu, k) = (0, 1) only
    double cosine_gap = 0.0;            // |bessel_form - cosine_form|
    double gap_scale = 0.0;             // y^{1/2 - 1/(2n) - 1/n}
};

OmegaMainTerm omega_main_term(int nu, int k, double y, int n);

// Shape of the remainder in Omega = main term + remainder:
//   s + Y^{n/2-nu-k+n delta} + Y^{n/2-nu-k} / log((nY/2)^n / y),
// with s = y^{1/2-1/(2n)-1/n} for (nu, k) = (0, 1) and s = 1 otherwise.
double omega_envelope(const OmegaParams& params);

// max |Omega - main term| / envelope over 12 points spanning one period of
// cos(2 y^{1/n}) starting at y, with Y = 10 (2/n) y^{1/n} (so (nY/2)^n = 10^n y).
double omega_envelope_constant(int nu, int k, double y, int n = 3);

struct ZeroAlignment {
    std::vector<double> cosine_zeros;  // in u = y^{1/n}
    std::vector<double> omega_zeros;   // nearest sign change of Re Omega, NaN if none
    double worst_relative = 0.0;       // max |omega - cosine| / cosine
};

// Scans Re Omega_{0,1}(u^n; delta, Y) for u in [u_lo, u_hi] at the given step
// and pairs each zero of cos(2u + (n-3) pi/4) with the nearest sign change.
// The (s + Lambda)^{-1} factor shifts the phase by about atan(n Lambda / (2u)),
// so the relative offset decays like Lambda / u^2.
ZeroAlignment omega_zero_alignment(double u_lo, double u_hi, double step, const OmegaParams& base);

struct SineSquareIntegral {
    double value = 0.0;     // integral_0^B sin^2(pi y)/y^2 dy
    double tail_gap = 0.0;  // pi^2/2 - value
};

// Requires B >= 10.
SineSquareIntegral sine_square_integral(double B);

}  // namespace msslab
