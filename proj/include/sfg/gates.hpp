#pragma once

// Optically controlled two-qubit gates between donor-spin qubits. A gate is
// selected by two positive integers (M, N) that fix the field/exchange ratio
// f = B/J up to a two-branch quadratic and make the control particle end the
// pulse sequence unentangled. The dimensionless products JT and BT determine
// the 4x4 unitary; a physical exchange strength J only sets the duration T.

#include "sfg/numerics.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace sfg {

inline constexpr double kPi = std::numbers::pi;

enum class Branch { plus, minus };

inline const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

inline Branch branch_from_string(const std::string& s) {
    if (s == "plus") return Branch::plus;
    if (s == "minus") return Branch::minus;
    throw std::invalid_argument("unknown branch '" + s + "' (expected plus|minus)");
}

struct DegenerateGate : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NoRealSolution : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SfgGateSpec {
    int m = 0;
    int n = 0;
    Branch branch = Branch::minus;
    double f = 0.0;   // B/J
    double jt = 0.0;  // J[GHz] * T[ns]
    double bt = 0.0;  // f * jt
    std::optional<double> j_ghz;
    std::optional<double> b_ghz;
    std::optional<double> t_ns;
};

// -(M^2+N^2)/(M^2-N^2); a real f branch exists iff |A| >= 3,
// equivalently 2*min(M,N)^2 >= max(M,N)^2
inline double pair_asymmetry(int m, int n) {
    if (m == n) throw DegenerateGate("sfg gate requires M != N");
    const double m2 = static_cast<double>(m) * m;
    const double n2 = static_cast<double>(n) * n;
    return -(m2 + n2) / (m2 - n2);
}

inline bool has_real_branches(int m, int n) {
    return m != n && std::abs(pair_asymmetry(m, n)) >= 3.0;
}

inline SfgGateSpec sfg_params(int m, int n, Branch branch) {
    if (m < 1 || n < 1) throw std::invalid_argument("sfg_params: M, N must be positive");
    const double a = pair_asymmetry(m, n);
    if (std::abs(a) < 3.0)
        throw NoRealSolution("sfg_params: no real f for (M=" + std::to_string(m) +
                             ", N=" + std::to_string(n) + ")");
    const double root = std::sqrt(a * a - 9.0);
    SfgGateSpec s;
    s.m = m;
    s.n = n;
    s.branch = branch;
    s.f = branch == Branch::plus ? a + root : a - root;
    s.jt = m * kPi / std::sqrt((s.f - 1.0) * (s.f - 1.0) + 8.0);
    s.bt = s.f * s.jt;
    return s;
}

inline double physical_time(const SfgGateSpec& s, double j_ghz) {
    if (j_ghz <= 0.0) throw std::invalid_argument("physical_time: J must be positive");
    return s.jt / j_ghz;
}

inline SfgGateSpec bind_physical(SfgGateSpec s, double j_ghz) {
    s.t_ns = physical_time(s, j_ghz);
    s.j_ghz = j_ghz;
    s.b_ghz = s.f * j_ghz;
    return s;
}

// branch whose f(M,N) sits closest to a target ratio B/J
inline Branch match_branch(int m, int n, double f_target) {
    const double dm = std::abs(sfg_params(m, n, Branch::minus).f - f_target);
    const double dp = std::abs(sfg_params(m, n, Branch::plus).f - f_target);
    return dm <= dp ? Branch::minus : Branch::plus;
}

// Block structure: corner phases on |00>,|11>, a symmetric mixing block on
// |01>,|10> with entries (a±b)/2 where a = (-1)^M and b = exp(-i(1-f)JT),
// and a global prefactor exp(i(JT-BT)). Unitary by construction (|a|=|b|=1).
inline CMat sfg_unitary(const SfgGateSpec& s) {
    const Complex i(0.0, 1.0);
    const Complex prefactor = std::exp(i * (s.jt - s.bt));
    const Complex d00 = std::exp(-i * ((3.0 - s.f) * s.jt + 2.0 * s.bt));
    const double a = (s.m % 2 == 0) ? 1.0 : -1.0;
    const Complex b = std::exp(-i * (1.0 - s.f) * s.jt);
    const Complex d11 = ((s.n % 2 == 0) ? 1.0 : -1.0) * std::exp(2.0 * i * s.bt);
    CMat u = CMat::Zero(4, 4);
    u(0, 0) = d00;
    u(1, 1) = u(2, 2) = (a + b) / 2.0;
    u(1, 2) = u(2, 1) = (a - b) / 2.0;
    u(3, 3) = d11;
    return prefactor * u;
}

// fixed gate set

inline CMat cp() {
    CMat u = CMat::Identity(4, 4);
    u(3, 3) = -1.0;
    return u;
}

inline CMat rx(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    CMat u(2, 2);
    u << Complex(c, 0.0), Complex(0.0, -s), Complex(0.0, -s), Complex(c, 0.0);
    return u;
}

inline CMat rz(double theta) {
    const Complex i(0.0, 1.0);
    CMat u = CMat::Zero(2, 2);
    u(0, 0) = std::exp(-i * theta / 2.0);
    u(1, 1) = std::exp(i * theta / 2.0);
    return u;
}

inline CMat phi(double theta) {
    const Complex i(0.0, 1.0);
    return std::exp(-i * theta / 2.0) * CMat::Identity(2, 2);
}

inline CMat hadamard() {
    CMat u(2, 2);
    u << 1.0, 1.0, 1.0, -1.0;
    return u / std::sqrt(2.0);
}

}  // namespace sfg
