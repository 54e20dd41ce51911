#include "msslab/modular.hpp"

#include <array>
#include <cmath>

#include "msslab/error.hpp"
#include "msslab/parallel.hpp"
#include "msslab/primes.hpp"

namespace msslab {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// p = c * 2^k + 1 with k >= 24; product ~ 2.2e44 covers |tau(n)| <= d(n) n^{11/2}.
constexpr std::array<u32, 5> kPrimes = {2013265921u, 1811939329u, 469762049u, 754974721u, 167772161u};
constexpr u32 kMaxLog = 24;

u64 pow_mod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = r * a % m;
        a = a * a % m;
        e >>= 1;
    }
    return r;
}

u32 primitive_root(u32 p) {
    std::vector<u32> factors;
    u32 m = p - 1;
    for (u32 q = 2; q * q <= m; ++q) {
        if (m % q == 0) {
            factors.push_back(q);
            while (m % q == 0) m /= q;
        }
    }
    if (m > 1) factors.push_back(m);
    for (u32 g = 2;; ++g) {
        bool ok = true;
        for (u32 q : factors) ok = ok && pow_mod(g, (p - 1) / q, p) != 1;
        if (ok) return g;
    }
}

// Montgomery arithmetic for a fixed odd modulus below 2^31.
struct Montgomery {
    u32 mod;
    u32 inv;  // -mod^{-1} mod 2^32
    u32 r2;   // 2^64 mod mod

    explicit Montgomery(u32 m) : mod(m) {
        u32 x = m;
        for (int i = 0; i < 5; ++i) x *= 2 - m * x;
        inv = static_cast<u32>(0u - x);
        r2 = static_cast<u32>((static_cast<unsigned __int128>(1) << 64) % m);
    }
    u32 reduce(u64 t) const {
        u32 q = static_cast<u32>(t) * inv;
        u32 r = static_cast<u32>((t + static_cast<u64>(q) * mod) >> 32);
        return r >= mod ? r - mod : r;
    }
    u32 mul(u32 a, u32 b) const { return reduce(static_cast<u64>(a) * b); }
    u32 to(u32 a) const { return mul(a % mod, r2); }
    u32 from(u32 a) const { return reduce(a); }
    u32 add(u32 a, u32 b) const {
        u32 s = a + b;
        return s >= mod ? s - mod : s;
    }
    u32 sub(u32 a, u32 b) const { return a >= b ? a - b : a + mod - b; }
};

void ntt(std::vector<u32>& a, const Montgomery& mg, u32 root, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<u32> tw;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        u64 w = pow_mod(root, (mg.mod - 1) / len, mg.mod);
        if (inverse) w = pow_mod(w, mg.mod - 2, mg.mod);
        const std::size_t half = len / 2;
        tw.resize(half);
        tw[0] = mg.to(1);
        u32 wm = mg.to(static_cast<u32>(w));
        for (std::size_t k = 1; k < half; ++k) tw[k] = mg.mul(tw[k - 1], wm);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                u32 u = a[i + k];
                u32 v = mg.mul(a[i + k + half], tw[k]);
                a[i + k] = mg.add(u, v);
                a[i + k + half] = mg.sub(u, v);
            }
        }
    }
    if (inverse) {
        u32 ninv = mg.to(static_cast<u32>(pow_mod(n % mg.mod, mg.mod - 2, mg.mod)));
        for (auto& x : a) x = mg.mul(x, ninv);
    }
}

// Coefficients 0..count-1 of J^8 mod p, J = sum (-1)^j (2j+1) q^{j(j+1)/2}.
std::vector<u32> jacobi_eighth_power(u32 p, std::size_t count) {
    Montgomery mg(p);
    u32 root = primitive_root(p);
    std::size_t len = 1;
    while (len < 2 * count) len <<= 1;
    std::vector<u32> a(len, 0);
    for (u64 j = 0;; ++j) {
        u64 e = j * (j + 1) / 2;
        if (e >= count) break;
        u64 c = (2 * j + 1) % p;
        a[e] = mg.to(static_cast<u32>(j % 2 == 0 ? c : (p - c) % p));
    }
    for (int round = 0; round < 3; ++round) {
        ntt(a, mg, root, false);
        for (auto& x : a) x = mg.mul(x, x);
        ntt(a, mg, root, true);
        std::fill(a.begin() + static_cast<std::ptrdiff_t>(count), a.end(), 0u);
    }
    a.resize(count);
    for (auto& x : a) x = mg.from(x);
    return a;
}

}  // namespace

std::vector<long double> ramanujan_tau(std::uint32_t N) {
    if (N == 0) return {0.0L};
    if (N > (1u << (kMaxLog - 1))) throw Error(Errc::OutOfRange, "tau table limited to 2^23 terms");
    std::array<std::vector<u32>, kPrimes.size()> residues;
    parallel_for(kPrimes.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) residues[i] = jacobi_eighth_power(kPrimes[i], N);
    });

    constexpr std::size_t K = kPrimes.size();
    // inv_prefix[i] = (m_0 ... m_{i-1})^{-1} mod m_i
    std::array<u64, K> inv_prefix{};
    for (std::size_t i = 1; i < K; ++i) {
        u64 prod = 1;
        for (std::size_t j = 0; j < i; ++j) prod = prod * kPrimes[j] % kPrimes[i];
        inv_prefix[i] = pow_mod(prod, kPrimes[i] - 2, kPrimes[i]);
    }
    std::array<long double, K> radix{};
    radix[0] = 1.0L;
    for (std::size_t i = 1; i < K; ++i) radix[i] = radix[i - 1] * kPrimes[i - 1];

    std::vector<long double> tau(static_cast<std::size_t>(N) + 1, 0.0L);
    for (std::uint32_t n = 1; n <= N; ++n) {
        std::array<u64, K> digit{};
        for (std::size_t i = 0; i < K; ++i) {
            // value of the mixed-radix prefix modulo m_i
            u64 acc = 0;
            u64 scale = 1;
            for (std::size_t j = 0; j < i; ++j) {
                acc = (acc + digit[j] % kPrimes[i] * scale) % kPrimes[i];
                scale = scale * kPrimes[j] % kPrimes[i];
            }
            u64 r = residues[i][n - 1];
            digit[i] = (r + kPrimes[i] - acc) % kPrimes[i] * (i == 0 ? 1 : inv_prefix[i]) % kPrimes[i];
        }
        bool negative = digit[K - 1] > kPrimes[K - 1] / 2;
        long double v = 0.0L;
        for (std::size_t i = K; i-- > 0;) {
            u64 d = negative ? kPrimes[i] - 1 - digit[i] : digit[i];
            v += static_cast<long double>(d) * radix[i];
        }
        tau[n] = negative ? -(v + 1.0L) : v;
    }
    return tau;
}

Gl2Data delta_eigenvalues(std::uint32_t prime_bound) {
    auto tau = ramanujan_tau(prime_bound);
    std::vector<std::uint32_t> primes = primes_up_to(prime_bound);
    std::vector<double> values;
    values.reserve(primes.size());
    for (std::uint32_t p : primes) {
        long double scale = std::pow(static_cast<long double>(p), 5.5L);
        values.push_back(static_cast<double>(tau[p] / scale));
    }
    return Gl2Data(std::move(primes), std::move(values), "delta(q) weight 12 level 1");
}

}  // namespace msslab
