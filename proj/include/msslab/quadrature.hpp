#pragma once

#include <array>

namespace msslab::gauss_legendre {

// 20-point rule on [-1, 1]: nodes and weights, computed once by Newton
// iteration on P_20.
struct Rule {
    std::array<double, 20> nodes;
    std::array<double, 20> weights;
};

const Rule& rule20();

}  // namespace msslab::gauss_legendre
