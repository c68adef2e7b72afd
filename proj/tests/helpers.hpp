#pragma once

#include "sfg/gates.hpp"
#include "sfg/numerics.hpp"

#include <random>

namespace sfg::test {

inline CMat random_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<CMat> qr(a);
    return qr.householderQ();
}

// uniform valid (M, N, branch) with M, N <= 500
inline SfgGateSpec random_spec(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> mn(1, 500);
    std::uniform_int_distribution<int> coin(0, 1);
    for (;;) {
        const int m = mn(rng), n = mn(rng);
        if (m == n || !has_real_branches(m, n)) continue;
        return sfg_params(m, n, coin(rng) ? Branch::plus : Branch::minus);
    }
}

inline CMat swap_gate() {
    CMat s = CMat::Zero(4, 4);
    s(0, 0) = s(3, 3) = 1.0;
    s(1, 2) = s(2, 1) = 1.0;
    return s;
}

}  // namespace sfg::test
