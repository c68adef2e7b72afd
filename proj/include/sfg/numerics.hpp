#pragma once

// Dense complex linear algebra on the 2/4/8-dimensional spaces of a
// three-qubit register, plus qubit embeddings and unit conversion.
//
// Basis convention used everywhere: computational index x = 4*x2 + 2*x1 + x0,
// i.e. qubit 2 is the most significant bit.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace sfg {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kUnitaryTol = 1e-10;

// Planck constant in meV*ns, so energy[meV] / kPlanckMevNs = frequency[GHz].
inline constexpr double kPlanckMevNs = 4.135667e-3;

inline double energy_to_frequency(double energy_mev) {
    if (energy_mev < 0.0)
        throw std::invalid_argument("energy_to_frequency: energy must be >= 0");
    return energy_mev / kPlanckMevNs;
}

inline CMat identity(Eigen::Index dim) { return CMat::Identity(dim, dim); }

inline CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// max-norm of U†U - I; 0 for a perfectly unitary matrix
inline double unitarity_error(const CMat& u) {
    return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

inline bool is_unitary(const CMat& u, double tol = kUnitaryTol) {
    return u.rows() == u.cols() && unitarity_error(u) <= tol;
}

inline bool is_normalized(const CVec& psi, double tol = kUnitaryTol) {
    return std::abs(psi.norm() - 1.0) <= tol;
}

// U2 acting on one qubit of the three-qubit register, identity elsewhere
inline CMat embed_single(const CMat& u2, int qubit) {
    if (u2.rows() != 2 || u2.cols() != 2)
        throw std::invalid_argument("embed_single: gate must be 2x2");
    if (qubit < 0 || qubit > 2)
        throw std::invalid_argument("embed_single: qubit index out of range");
    const CMat i2 = identity(2);
    const CMat& m0 = qubit == 0 ? u2 : i2;
    const CMat& m1 = qubit == 1 ? u2 : i2;
    const CMat& m2 = qubit == 2 ? u2 : i2;
    return kron(m2, kron(m1, m0));
}

// U4 acting on qubits (qa, qb) of the register, with qa providing the high
// bit of U4's two-bit index and qb the low bit; identity on the third qubit.
inline CMat embed_pair(const CMat& u4, int qa, int qb) {
    if (u4.rows() != 4 || u4.cols() != 4)
        throw std::invalid_argument("embed_pair: gate must be 4x4");
    if (qa < 0 || qa > 2 || qb < 0 || qb > 2)
        throw std::invalid_argument("embed_pair: qubit index out of range");
    if (qa == qb)
        throw std::invalid_argument("embed_pair: qubits must differ");
    const int qc = 3 - qa - qb;  // spectator qubit
    CMat out = CMat::Zero(8, 8);
    for (int x = 0; x < 8; ++x) {
        for (int y = 0; y < 8; ++y) {
            if (((x >> qc) & 1) != ((y >> qc) & 1)) continue;
            const int r = (((x >> qa) & 1) << 1) | ((x >> qb) & 1);
            const int s = (((y >> qa) & 1) << 1) | ((y >> qb) & 1);
            out(x, y) = u4(r, s);
        }
    }
    return out;
}

inline CMat mat_power(const CMat& u, int k) {
    if (u.rows() != u.cols())
        throw std::invalid_argument("mat_power: matrix must be square");
    if (k < 0)
        throw std::invalid_argument("mat_power: exponent must be >= 0");
    CMat out = identity(u.rows());
    CMat base = u;
    while (k > 0) {
        if (k & 1) out = out * base;
        base = base * base;
        k >>= 1;
    }
    return out;
}

}  // namespace sfg
