#include "msslab/satake.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "msslab/error.hpp"
#include "msslab/primes.hpp"
#include "msslab/rng.hpp"

namespace msslab {

namespace {

constexpr double kProductTol = 1e-12;
constexpr double kSelfDualTol = 1e-10;
constexpr double kDistinctTol = 1e-8;
constexpr double kFlush = 0x1.0p-44;

double flush(double v) { return std::abs(v) < kFlush ? 0.0 : v; }

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
    auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::vector<cplx> ladder(int n, double phi) {
    std::vector<cplx> out;
    out.reserve(n);
    for (int j = 0; j < n; ++j) out.push_back(std::polar(1.0, (n - 1 - 2 * j) * phi));
    return out;
}

// Determinant by Gaussian elimination with partial pivoting.
cplx determinant(std::vector<cplx> a, int n) {
    cplx det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r) {
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        }
        if (a[piv * n + c] == cplx{}) return 0.0;
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
            det = -det;
        }
        det *= a[c * n + c];
        for (int r = c + 1; r < n; ++r) {
            cplx f = a[r * n + c] / a[c * n + c];
            for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
        }
    }
    return det;
}

cplx ipow(cplx x, int e) {
    cplx r = 1.0;
    while (e > 0) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

double realify(const SatakeParams& params, cplx v) {
    if (std::abs(v.imag()) > kSelfDualTol * std::max(1.0, std::abs(v.real()))) {
        std::ostringstream msg;
        msg << "imaginary residue " << v.imag() << " at p=" << params.p;
        throw Error(Errc::SelfDualViolation, msg.str());
    }
    return v.real();
}

}  // namespace

void validate(const SatakeParams& params) {
    const int n = params.rank();
    if (n < 3) throw Error(Errc::InvalidArgument, "Satake parameters need rank n >= 3");
    cplx prod = 1.0;
    for (cplx a : params.alphas) prod *= a;
    if (std::abs(prod - 1.0) >= kProductTol) {
        throw Error(Errc::InvalidArgument, "product of Satake parameters is not 1");
    }
    if (params.tempered) {
        for (cplx a : params.alphas) {
            if (std::abs(std::abs(a) - 1.0) > 1e-12) {
                throw Error(Errc::InvalidArgument, "tempered parameter off the unit circle");
            }
        }
    }
    if (params.self_dual) {
        std::vector<bool> used(n, false);
        for (cplx a : params.alphas) {
            bool found = false;
            for (int j = 0; j < n && !found; ++j) {
                if (!used[j] && std::abs(std::conj(params.alphas[j]) - a) < kProductTol) {
                    used[j] = true;
                    found = true;
                }
            }
            if (!found) throw Error(Errc::InvalidArgument, "self-dual parameters not closed under conjugation");
        }
    }
}

Gl2Data::Gl2Data(std::vector<std::uint32_t> primes, std::vector<double> values, std::string origin)
    : primes_(std::move(primes)), values_(std::move(values)), origin_(std::move(origin)) {
    if (primes_.size() != values_.size()) throw Error(Errc::InvalidArgument, "prime/value length mismatch");
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        if (std::abs(values_[i]) > 2.0 + 1e-9) violations_.push_back(primes_[i]);
    }
}

bool Gl2Data::contains(std::uint32_t p) const noexcept {
    return std::binary_search(primes_.begin(), primes_.end(), p);
}

double Gl2Data::at(std::uint32_t p) const {
    if (!primes_.empty() && p > primes_.back()) {
        throw Error(Errc::OutOfRange, "prime " + std::to_string(p) + " exceeds GL(2) data bound " +
                                          std::to_string(primes_.back()) + " (" + origin_ + ")");
    }
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p) {
        throw Error(Errc::MissingPrime, "no a_p for p=" + std::to_string(p) + " in " + origin_);
    }
    return values_[static_cast<std::size_t>(it - primes_.begin())];
}

std::uint64_t Gl2Data::fingerprint() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    h = fnv1a(h, primes_.data(), primes_.size() * sizeof(std::uint32_t));
    h = fnv1a(h, values_.data(), values_.size() * sizeof(double));
    return h;
}

Gl2Data parse_ap_stream(std::istream& in, const std::string& origin) {
    std::vector<std::uint32_t> primes;
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw Error(Errc::ParseError, origin + ":" + std::to_string(lineno) + ": " + why + " in '" + line + "'");
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto space = line.find(' ');
        if (space == std::string::npos || space == 0 || line.find(' ', space + 1) != std::string::npos) {
            fail("expected '<prime> <a_p>'");
        }
        std::string ptxt = line.substr(0, space);
        std::string vtxt = line.substr(space + 1);
        if (!std::all_of(ptxt.begin(), ptxt.end(), [](char c) { return c >= '0' && c <= '9'; }) || ptxt.size() > 10) {
            fail("bad prime field");
        }
        unsigned long long p = std::stoull(ptxt);
        if (p > 0xffffffffull || !is_prime(p)) fail("not a prime");
        if (!primes.empty() && p <= primes.back()) fail("primes must be strictly increasing");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(vtxt, &used);
        } catch (const std::exception&) {
            fail("bad a_p field");
        }
        if (used != vtxt.size() || !std::isfinite(v)) fail("bad a_p field");
        primes.push_back(static_cast<std::uint32_t>(p));
        values.push_back(v);
    }
    return Gl2Data(std::move(primes), std::move(values), origin);
}

Gl2Data ingest_ap_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open a_p file " + path.string());
    return parse_ap_stream(in, path.string());
}

void write_ap_file(const std::filesystem::path& path, const Gl2Data& data, const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    if (!comment.empty()) out << "# " << comment << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < data.size(); ++i) out << data.primes()[i] << ' ' << data.values()[i] << '\n';
    if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

const char* source_name(SourceKind kind) noexcept {
    switch (kind) {
        case SourceKind::SyntheticTempered: return "synthetic";
        case SourceKind::SymLift: return "lift";
        case SourceKind::Degenerate: return "degenerate";
    }
    return "?";
}

std::uint64_t FormSpec::fingerprint() const noexcept {
    std::ostringstream key;
    key << "n=" << n << ";source=" << source_name(source);
    if (source == SourceKind::SyntheticTempered) key << ";seed=" << seed;
    if (source == SourceKind::SymLift && gl2) key << ";gl2=" << gl2->fingerprint();
    std::string s = key.str();
    return fnv1a(0xcbf29ce484222325ull, s.data(), s.size());
}

void validate(const FormSpec& form) {
    if (form.n < 3) throw Error(Errc::InvalidArgument, "form rank n must be >= 3");
    if (!(form.theta_assumed >= 0.0 && form.theta_assumed <= 0.5)) {
        throw Error(Errc::InvalidArgument, "declared vartheta must lie in [0, 1/2]");
    }
    if (form.source == SourceKind::SymLift && !form.gl2) {
        throw Error(Errc::InvalidArgument, "lift source needs GL(2) data");
    }
}

SatakeParams sample_tempered_satake(int n, std::uint32_t p, std::uint64_t seed) {
    if (n < 3) throw Error(Errc::InvalidArgument, "rank n must be >= 3");
    if (!is_prime(p)) throw Error(Errc::InvalidArgument, std::to_string(p) + " is not prime");
    KeyedRng rng(hash_combine(seed, p));
    double phi = 0.0;
    for (;;) {
        phi = std::numbers::pi * rng.uniform();
        double s = std::sin(phi);
        if (rng.uniform() < s * s) break;
    }
    SatakeParams out;
    out.p = p;
    out.alphas = ladder(n, phi);
    return out;
}

SatakeParams satake_from_gl2_lift(double a_p, int n, std::uint32_t p) {
    if (n < 3) throw Error(Errc::InvalidArgument, "rank n must be >= 3");
    if (!std::isfinite(a_p)) throw Error(Errc::InvalidArgument, "a_p must be finite");
    SatakeParams out;
    out.p = p;
    if (std::abs(a_p) <= 2.0) {
        out.alphas = ladder(n, std::acos(a_p / 2.0));
        return out;
    }
    double beta = (a_p + std::copysign(std::sqrt(a_p * a_p - 4.0), a_p)) / 2.0;
    for (int j = 0; j < n; ++j) out.alphas.emplace_back(std::pow(beta, n - 1 - 2 * j), 0.0);
    out.tempered = false;
    return out;
}

SatakeParams satake_for(const FormSpec& form, std::uint32_t p) {
    switch (form.source) {
        case SourceKind::SyntheticTempered:
            return sample_tempered_satake(form.n, p, form.seed);
        case SourceKind::SymLift:
            if (!form.gl2) throw Error(Errc::InvalidArgument, "lift source needs GL(2) data");
            return satake_from_gl2_lift(form.gl2->at(p), form.n, p);
        case SourceKind::Degenerate: {
            // {1, 0, ..., 0}-like parameters do not exist with product 1; the
            // constant-one form is handled directly by the table builder.
            throw Error(Errc::Unsupported, "degenerate test form has no Satake parameters");
        }
    }
    throw Error(Errc::InvalidArgument, "unknown source");
}

std::vector<cplx> elementary_symmetric(std::span<const cplx> alphas) {
    std::vector<cplx> e(alphas.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        for (std::size_t j = i + 1; j >= 1; --j) e[j] += alphas[i] * e[j - 1];
    }
    return e;
}

std::vector<cplx> complete_homogeneous_series(std::span<const cplx> alphas, int k_max) {
    if (k_max < 0) throw Error(Errc::InvalidArgument, "k must be >= 0");
    const int n = static_cast<int>(alphas.size());
    auto e = elementary_symmetric(alphas);
    std::vector<cplx> h(static_cast<std::size_t>(k_max) + 1, 0.0);
    h[0] = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        cplx acc = 0.0;
        for (int j = 1; j <= std::min(k, n); ++j) {
            cplx term = e[j] * h[k - j];
            acc += (j % 2 == 1) ? term : -term;
        }
        h[k] = acc;
    }
    return h;
}

cplx complete_homogeneous(std::span<const cplx> alphas, int k) {
    return complete_homogeneous_series(alphas, k).back();
}

cplx schur_determinant(std::span<const cplx> alphas, std::span<const int> subscripts) {
    const int n = static_cast<int>(alphas.size());
    if (static_cast<int>(subscripts.size()) != n - 1) {
        throw Error(Errc::InvalidArgument, "need n-1 Schur subscripts");
    }
    for (int s : subscripts) {
        if (s < 0) throw Error(Errc::InvalidArgument, "Schur subscripts must be non-negative");
    }
    cplx vandermonde = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            cplx d = alphas[i] - alphas[j];
            if (std::abs(d) < kDistinctTol) {
                throw Error(Errc::NearDegenerateAlphas, "alphas closer than 1e-8");
            }
            vandermonde *= d;
        }
    }
    if (std::abs(vandermonde) < kDistinctTol) throw Error(Errc::NearDegenerateAlphas, "Vandermonde below 1e-8");

    // lambda_i = s_1 + ... + s_{n-i} (1-based i), lambda_n = 0.
    std::vector<int> lambda(n, 0);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n - i; ++j) lambda[i - 1] += subscripts[j - 1];
    }
    std::vector<cplx> mat(static_cast<std::size_t>(n) * n);
    for (int i = 1; i <= n; ++i) {
        int exponent = lambda[i - 1] + n - i;
        for (int j = 0; j < n; ++j) mat[(i - 1) * n + j] = ipow(alphas[j], exponent);
    }
    return determinant(std::move(mat), n) / vandermonde;
}

cplx prime_power_eigenvalue(const SatakeParams& params, int k) {
    if (k < 0) throw Error(Errc::InvalidArgument, "k must be >= 0");
    cplx h = complete_homogeneous(params.alphas, k);
    if (params.self_dual) return realify(params, h);
    return h;
}

cplx multi_index_prime_power(const SatakeParams& params, std::span<const int> betas) {
    const int n = params.rank();
    if (static_cast<int>(betas.size()) != n - 1) throw Error(Errc::InvalidArgument, "need n-1 exponents");
    for (int b : betas) {
        if (b < 0) throw Error(Errc::InvalidArgument, "exponents must be non-negative");
    }
    // Partition of S_{b_{n-1},...,b_1}: lambda_i = b_i + ... + b_{n-1}.
    const int parts = n - 1;
    std::vector<int> lambda(parts, 0);
    for (int i = parts - 1; i >= 0; --i) lambda[i] = betas[i] + (i + 1 < parts ? lambda[i + 1] : 0);
    int top = lambda[0] + parts;
    auto h = complete_homogeneous_series(params.alphas, top);
    auto hk = [&](int k) -> cplx { return k < 0 ? cplx{} : h[k]; };
    // Jacobi-Trudi: s_lambda = det[h_{lambda_i - i + j}].
    std::vector<cplx> mat(static_cast<std::size_t>(parts) * parts);
    for (int i = 0; i < parts; ++i) {
        for (int j = 0; j < parts; ++j) mat[i * parts + j] = hk(lambda[i] - i + j);
    }
    return determinant(std::move(mat), parts);
}

HeckeTable::fixed_t HeckeTable::to_fixed(double v) {
    return static_cast<fixed_t>(std::ldexp(v, kFractionBits));
}

double HeckeTable::from_fixed(fixed_t v) { return std::ldexp(static_cast<double>(v), -kFractionBits); }

HeckeTable HeckeTable::from_values(int n, std::vector<double> real, std::vector<double> imag) {
    if (real.empty()) throw Error(Errc::InvalidArgument, "table needs at least index 0");
    if (!imag.empty() && imag.size() != real.size()) throw Error(Errc::InvalidArgument, "real/imag size mismatch");
    constexpr fixed_t kLimit = static_cast<fixed_t>(1) << (30 + kFractionBits);
    HeckeTable t;
    t.n_ = n;
    t.real_ = std::move(real);
    t.imag_ = std::move(imag);
    t.real_[0] = 0.0;
    if (!t.imag_.empty()) t.imag_[0] = 0.0;
    auto accumulate = [&](std::vector<double>& vals, std::vector<fixed_t>& prefix) {
        prefix.assign(vals.size(), 0);
        fixed_t acc = 0;
        for (std::size_t m = 1; m < vals.size(); ++m) {
            if (!std::isfinite(vals[m])) throw Error(Errc::InvalidArgument, "non-finite coefficient");
            vals[m] = flush(vals[m]);
            acc += to_fixed(vals[m]);
            if (acc >= kLimit || acc <= -kLimit) throw Error(Errc::OutOfRange, "partial sums exceed 2^30");
            prefix[m] = acc;
        }
    };
    accumulate(t.real_, t.prefix_re_);
    if (!t.imag_.empty()) accumulate(t.imag_, t.prefix_im_);
    return t;
}

double HeckeTable::prefix(std::int64_t k) const {
    if (k < 0) k = 0;
    if (k > static_cast<std::int64_t>(M())) {
        throw Error(Errc::RangeExceeded, "index " + std::to_string(k) + " beyond table bound " + std::to_string(M()));
    }
    return from_fixed(prefix_re_[static_cast<std::size_t>(k)]);
}

double HeckeTable::range_sum(std::int64_t a, std::int64_t b) const {
    if (a < 1) a = 1;
    if (b < a) return 0.0;
    if (b > static_cast<std::int64_t>(M())) {
        throw Error(Errc::RangeExceeded, "index " + std::to_string(b) + " beyond table bound " + std::to_string(M()));
    }
    return from_fixed(prefix_re_[static_cast<std::size_t>(b)] - prefix_re_[static_cast<std::size_t>(a - 1)]);
}

cplx HeckeTable::range_sum_complex(std::int64_t a, std::int64_t b) const {
    double re = range_sum(a, b);
    if (imag_.empty() || b < std::max<std::int64_t>(a, 1)) return {re, 0.0};
    if (a < 1) a = 1;
    return {re, from_fixed(prefix_im_[static_cast<std::size_t>(b)] - prefix_im_[static_cast<std::size_t>(a - 1)])};
}

HeckeTable HeckeTable::truncated(std::uint32_t new_M) const {
    if (new_M > M()) throw Error(Errc::RangeExceeded, "cannot extend a table by truncation");
    HeckeTable t;
    t.n_ = n_;
    t.real_.assign(real_.begin(), real_.begin() + new_M + 1);
    t.prefix_re_.assign(prefix_re_.begin(), prefix_re_.begin() + new_M + 1);
    if (!imag_.empty()) {
        t.imag_.assign(imag_.begin(), imag_.begin() + new_M + 1);
        t.prefix_im_.assign(prefix_im_.begin(), prefix_im_.begin() + new_M + 1);
    }
    return t;
}

HeckeTable build_coefficient_table(const FormSpec& form, std::uint32_t M) {
    validate(form);
    if (M < 1) throw Error(Errc::InvalidArgument, "M must be >= 1");
    std::vector<double> values(static_cast<std::size_t>(M) + 1, 0.0);
    values[1] = 1.0;
    if (form.source == SourceKind::Degenerate) {
        std::fill(values.begin() + 1, values.end(), 1.0);
        return HeckeTable::from_values(form.n, std::move(values));
    }

    auto spf = smallest_prime_factors(M);
    // p-part of m for p = spf[m]
    std::vector<std::uint32_t> ppart(static_cast<std::size_t>(M) + 1, 1);
    // h_k(alpha_p) for primes with p^2 <= M; larger primes only need h_1.
    std::unordered_map<std::uint32_t, std::vector<double>> powers;

    for (std::uint32_t m = 2; m <= M; ++m) {
        std::uint32_t p = spf[m];
        if (p == m) {
            SatakeParams sp = satake_for(form, p);
            if (static_cast<std::uint64_t>(p) * p <= M) {
                int kmax = 0;
                for (std::uint64_t q = p; q <= M; q *= p) ++kmax;
                std::vector<double> h(kmax + 1);
                auto hs = complete_homogeneous_series(sp.alphas, kmax);
                for (int k = 0; k <= kmax; ++k) h[k] = flush(realify(sp, hs[k]));
                values[m] = h[1];
                powers.emplace(p, std::move(h));
            } else {
                values[m] = flush(prime_power_eigenvalue(sp, 1).real());
            }
            ppart[m] = p;
            continue;
        }
        std::uint32_t q = m / p;
        ppart[m] = (spf[q] == p) ? ppart[q] * p : p;
        std::uint32_t rest = m / ppart[m];
        if (rest == 1) {
            int k = 0;
            for (std::uint32_t t = m; t > 1; t /= p) ++k;
            values[m] = powers.at(p)[k];
        } else {
            values[m] = flush(values[ppart[m]] * values[rest]);
        }
    }
    return HeckeTable::from_values(form.n, std::move(values));
}

}  // namespace msslab
