#pragma once

#include <cstdint>
#include <vector>

namespace msslab {

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// Smallest-prime-factor table for 0..limit; spf[0] = spf[1] = 0.
std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t limit);

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

struct PrimePower {
    std::uint32_t p;
    int k;
};

// Factorisation of m via an spf table covering m.
std::vector<PrimePower> factorize(std::uint32_t m, const std::vector<std::uint32_t>& spf);

}  // namespace msslab
