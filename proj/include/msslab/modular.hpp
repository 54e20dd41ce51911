#pragma once

#include <cstdint>
#include <vector>

#include "msslab/satake.hpp"

namespace msslab {

// Ramanujan tau(1..N) from Delta = q * prod (1 - q^k)^24, computed exactly as
// the eighth power of Jacobi's series sum (-1)^j (2j+1) q^{j(j+1)/2} modulo five
// NTT primes and lifted by Garner's algorithm. Index 0 is unused. N <= 2^23.
std::vector<long double> ramanujan_tau(std::uint32_t N);

// Normalised eigenvalues tau(p) / p^{11/2} of the weight-12 level-1 cusp form
// for all primes p <= prime_bound.
Gl2Data delta_eigenvalues(std::uint32_t prime_bound);

}  // namespace msslab
