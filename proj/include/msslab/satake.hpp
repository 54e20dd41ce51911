#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace msslab {

using cplx = std::complex<double>;

// Satake parameters of one form at one prime.
struct SatakeParams {
    std::uint32_t p = 0;
    std::vector<cplx> alphas;
    bool self_dual = true;
    bool tempered = true;

    int rank() const noexcept { return static_cast<int>(alphas.size()); }
};

// Throws InvalidArgument if the rank, central character, self-duality or
// temperedness invariants do not hold.
void validate(const SatakeParams& params);

// Normalised GL(2) Hecke eigenvalues a_p keyed by prime, e.g. tau(p)/p^{11/2}.
class Gl2Data {
public:
    Gl2Data() = default;
    Gl2Data(std::vector<std::uint32_t> primes, std::vector<double> values, std::string origin);

    bool empty() const noexcept { return primes_.empty(); }
    std::size_t size() const noexcept { return primes_.size(); }
    std::uint32_t max_prime() const noexcept { return primes_.empty() ? 0 : primes_.back(); }
    const std::string& origin() const noexcept { return origin_; }

    // a_p; OutOfRange past the last prime, MissingPrime for a gap or an empty set.
    double at(std::uint32_t p) const;
    bool contains(std::uint32_t p) const noexcept;

    // Primes whose |a_p| exceeds 2 + 1e-9 (recorded, not rejected).
    const std::vector<std::uint32_t>& bound_violations() const noexcept { return violations_; }

    std::uint64_t fingerprint() const noexcept;

    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<std::uint32_t> primes_;
    std::vector<double> values_;
    std::vector<std::uint32_t> violations_;
    std::string origin_;
};

// a_p text format: "<prime> <decimal a_p>" per line, '#' comments, primes
// strictly increasing. Throws ParseError naming the offending line.
Gl2Data ingest_ap_file(const std::filesystem::path& path);
Gl2Data parse_ap_stream(std::istream& in, const std::string& origin);
void write_ap_file(const std::filesystem::path& path, const Gl2Data& data, const std::string& comment);

enum class SourceKind { SyntheticTempered, SymLift, Degenerate };

const char* source_name(SourceKind kind) noexcept;

struct FormSpec {
    int n = 3;
    SourceKind source = SourceKind::SyntheticTempered;
    std::uint64_t seed = 1;
    double theta_assumed = 0.0;  // declared Ramanujan exponent
    std::string label = "form";
    std::shared_ptr<const Gl2Data> gl2;  // SymLift only

    // The constant-one test form is not arithmetic and is flagged as such.
    bool arithmetic() const noexcept { return source != SourceKind::Degenerate; }
    bool self_dual() const noexcept { return true; }

    // Stable hash of everything that determines the coefficient table.
    std::uint64_t fingerprint() const noexcept;
};

// Throws InvalidArgument when n < 3, theta_assumed is outside [0, 1/2], or
// a lift source has no GL(2) data.
void validate(const FormSpec& form);

// Deterministic unitary, conjugation-closed, product-one multiset keyed by
// (seed, p): the image {b^{n-1}, b^{n-3}, ..., b^{1-n}} of a Sato-Tate
// distributed b = e^{i phi}, phi ~ (2/pi) sin^2(phi) dphi.
SatakeParams sample_tempered_satake(int n, std::uint32_t p, std::uint64_t seed);

// sym^{n-1} lift of a normalised GL(2) eigenvalue.
SatakeParams satake_from_gl2_lift(double a_p, int n, std::uint32_t p = 0);

// Satake parameters of a form at p, dispatching on its source.
SatakeParams satake_for(const FormSpec& form, std::uint32_t p);

// Elementary symmetric polynomials e_0..e_n.
std::vector<cplx> elementary_symmetric(std::span<const cplx> alphas);

// h_k by the recurrence h_k = sum_{j=1}^{n} (-1)^{j-1} e_j h_{k-j}.
cplx complete_homogeneous(std::span<const cplx> alphas, int k);

// h_0..h_{k_max}.
std::vector<cplx> complete_homogeneous_series(std::span<const cplx> alphas, int k_max);

// S_{s_1,...,s_{n-1}}(alphas) as a ratio of determinants: row i of the
// numerator holds x_j^{lambda_i + n - i} with lambda_i = s_1 + ... + s_{n-i},
// so S_{0,...,0,k} = h_k. Throws NearDegenerateAlphas when two alphas lie
// within 1e-8 or the Vandermonde is below 1e-8 in modulus.
cplx schur_determinant(std::span<const cplx> alphas, std::span<const int> subscripts);

// A(p^k, 1, ..., 1) = h_k(alphas). For self-dual parameters the imaginary
// residue must be below 1e-10 (SelfDualViolation) and the result is real.
cplx prime_power_eigenvalue(const SatakeParams& params, int k);

// A(p^{b_1}, ..., p^{b_{n-1}}) = S_{b_{n-1},...,b_1}(alphas), evaluated with
// the Jacobi-Trudi determinant in the h_k.
cplx multi_index_prime_power(const SatakeParams& params, std::span<const int> betas);

// Dense table of A(m, 1, ..., 1) for 1 <= m <= M with exact prefix sums.
//
// Prefix sums are held in 128-bit fixed point with 96 fractional bits, so
// every range sum is exact before its final rounding to double. Values of
// modulus below 2^-44 are flushed to zero at construction (this is what
// makes them representable); partial sums must stay below 2^30 in modulus.
class HeckeTable {
public:
    static constexpr int kFractionBits = 96;
    using fixed_t = __int128;

    HeckeTable() = default;

    // values[0] is ignored; values.size() == M + 1. imag is empty for
    // self-dual (real) tables.
    static HeckeTable from_values(int n, std::vector<double> real, std::vector<double> imag = {});

    std::uint32_t M() const noexcept { return real_.empty() ? 0 : static_cast<std::uint32_t>(real_.size() - 1); }
    int n() const noexcept { return n_; }
    bool self_dual() const noexcept { return imag_.empty(); }

    double real(std::uint32_t m) const { return real_[m]; }
    cplx value(std::uint32_t m) const { return {real_[m], imag_.empty() ? 0.0 : imag_[m]}; }
    double abs2(std::uint32_t m) const {
        double re = real_[m];
        double im = imag_.empty() ? 0.0 : imag_[m];
        return re * re + im * im;
    }
    std::span<const double> real_values() const noexcept { return real_; }
    std::span<const double> imag_values() const noexcept { return imag_; }

    fixed_t prefix_fixed(std::uint32_t m) const { return prefix_re_[m]; }
    fixed_t prefix_fixed_imag(std::uint32_t m) const { return prefix_im_.empty() ? 0 : prefix_im_[m]; }

    // Real part of sum_{m <= k}; k clamps at 0 from below, RangeExceeded above M.
    double prefix(std::int64_t k) const;
    // Real part of sum_{a <= m <= b}, exact then rounded once; 0 when b < a.
    double range_sum(std::int64_t a, std::int64_t b) const;
    cplx range_sum_complex(std::int64_t a, std::int64_t b) const;

    // Table restricted to 1..M' (M' <= M).
    HeckeTable truncated(std::uint32_t new_M) const;

    static fixed_t to_fixed(double v);
    static double from_fixed(fixed_t v);

private:
    int n_ = 3;
    std::vector<double> real_;
    std::vector<double> imag_;
    std::vector<fixed_t> prefix_re_;
    std::vector<fixed_t> prefix_im_;
};

// Multiplicative extension over a smallest-prime-factor sieve; prime powers
// come from prime_power_eigenvalue. Memory is about 4 bytes/entry for the
// sieve plus 24 bytes/entry for values and prefix sums.
HeckeTable build_coefficient_table(const FormSpec& form, std::uint32_t M);

}  // namespace msslab
