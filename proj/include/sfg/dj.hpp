#pragma once

// Refined Deutsch-Jozsa problem on three qubits: the 35 balanced-function
// oracles (canonical f(0)=0 representatives, one hex code per function, bits
// read MSB-first as f(0)..f(7)), the H3 * U_f * H3 pipeline, classification,
// and the reference circuit catalog that realizes every oracle exactly from
// R_z rotations and ideal CP gates.

#include "sfg/circuit.hpp"
#include "sfg/numerics.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace sfg {

struct BalancedFunction {
    std::uint8_t hex = 0;
    std::array<int, 8> outputs{};  // outputs[x] = f(x)
};

inline BalancedFunction decode_function(std::uint8_t hex) {
    BalancedFunction fn;
    fn.hex = hex;
    for (int x = 0; x < 8; ++x) fn.outputs[x] = (hex >> (7 - x)) & 1;
    return fn;
}

inline const std::vector<BalancedFunction>& function_catalog() {
    static const std::vector<BalancedFunction> catalog = [] {
        constexpr std::array<std::uint8_t, 35> codes = {
            0x0F, 0x33, 0x3C, 0x55, 0x5A, 0x66, 0x69,
            0x1E, 0x2D, 0x36, 0x39, 0x4B, 0x56, 0x59, 0x63, 0x65, 0x6A, 0x6C, 0x78,
            0x1B, 0x1D, 0x27, 0x2E, 0x35, 0x3A, 0x47, 0x4E, 0x53, 0x5C, 0x72, 0x74,
            0x17, 0x2B, 0x4D, 0x71};
        std::vector<BalancedFunction> out;
        out.reserve(codes.size());
        for (std::uint8_t code : codes) {
            if (code >= 0x80 || std::popcount(code) != 4)
                throw std::logic_error("catalog entry is not a canonical balanced function");
            out.push_back(decode_function(code));
        }
        return out;
    }();
    return catalog;
}

inline bool in_catalog(std::uint8_t hex) {
    for (const BalancedFunction& fn : function_catalog())
        if (fn.hex == hex) return true;
    return false;
}

// diag((-1)^f(x)) on the computational basis
inline CMat oracle_unitary(const BalancedFunction& fn) {
    CMat u = CMat::Zero(8, 8);
    for (int x = 0; x < 8; ++x) u(x, x) = fn.outputs[x] ? -1.0 : 1.0;
    return u;
}

inline CMat oracle_unitary(std::uint8_t hex) { return oracle_unitary(decode_function(hex)); }

inline CMat hadamard_all() {
    const CMat h = hadamard();
    return kron(h, kron(h, h));
}

// |psi_out> = H^3 * U_f * H^3 |000>
inline CVec dj_run(const CMat& u_f) {
    if (u_f.rows() != 8 || u_f.cols() != 8)
        throw std::invalid_argument("dj_run: oracle must be 8x8");
    CVec psi = CVec::Zero(8);
    psi(0) = 1.0;
    const CMat h3 = hadamard_all();
    return h3 * (u_f * (h3 * psi));
}

struct Classification {
    bool balanced = false;
    double p000 = 0.0;
};

inline Classification classify(const CVec& psi) {
    Classification c;
    c.p000 = std::norm(psi(0));
    c.balanced = c.p000 <= 0.5;
    return c;
}

// The reference circuits, stored in applied order (first op acts first).
// Every sequence reproduces its oracle exactly (up to global phase) from
// R_z(+-pi) rotations and ideal CP gates.
inline const std::map<std::uint8_t, std::vector<GateOp>>& table2_ops() {
    static const std::map<std::uint8_t, std::vector<GateOp>> table = [] {
        const auto Rz = [](int q, double sign) {
            return make_rotation(GateKind::RZ, q, sign * kPi);
        };
        const auto Cp = [](int qa, int qb) { return make_cp(qa, qb); };
        std::map<std::uint8_t, std::vector<GateOp>> t;
        // no two-qubit gates
        t[0x0F] = {Rz(2, 1)};
        t[0x33] = {Rz(1, 1)};
        t[0x3C] = {Rz(2, 1), Rz(1, 1)};
        t[0x55] = {Rz(0, 1)};
        t[0x5A] = {Rz(2, 1), Rz(0, 1)};
        t[0x66] = {Rz(1, 1), Rz(0, 1)};
        t[0x69] = {Rz(2, 1), Rz(1, 1), Rz(0, 1)};
        // one two-qubit gate
        t[0x1E] = {Cp(0, 1), Rz(2, 1)};
        t[0x2D] = {Rz(2, 1), Cp(0, 1), Rz(1, -1)};
        t[0x36] = {Rz(1, 1), Cp(0, 2)};
        t[0x39] = {Rz(2, -1), Rz(1, -1), Cp(0, 2)};
        t[0x4B] = {Rz(2, -1), Rz(0, 1), Cp(0, 1)};
        t[0x56] = {Rz(0, -1), Cp(1, 2)};
        t[0x59] = {Rz(0, -1), Cp(1, 2), Rz(2, 1)};
        t[0x63] = {Rz(1, 1), Rz(0, 1), Cp(0, 2)};
        t[0x65] = {Cp(1, 2), Rz(1, -1), Rz(0, 1)};
        t[0x6A] = {Cp(1, 2), Rz(2, -1), Rz(1, 1), Rz(0, -1)};
        t[0x6C] = {Rz(2, 1), Rz(0, -1), Cp(0, 2), Rz(1, -1)};
        t[0x78] = {Rz(0, -1), Cp(0, 1), Rz(2, 1), Rz(1, -1)};
        // two two-qubit gates
        t[0x1B] = {Rz(2, 1), Cp(0, 2), Cp(0, 1)};
        t[0x1D] = {Cp(1, 2), Cp(0, 1), Rz(2, 1)};
        t[0x27] = {Rz(1, -1), Cp(0, 2), Cp(0, 1)};
        t[0x2E] = {Cp(0, 1), Cp(1, 2), Rz(2, -1), Rz(1, -1)};
        t[0x35] = {Cp(1, 2), Cp(0, 2), Rz(1, 1)};
        t[0x3A] = {Rz(1, 1), Cp(0, 2), Rz(2, 1), Cp(1, 2)};
        t[0x47] = {Cp(1, 2), Rz(0, 1), Cp(0, 1)};
        t[0x4E] = {Rz(0, -1), Cp(0, 2), Cp(0, 1), Rz(2, 1)};
        t[0x53] = {Cp(1, 2), Rz(0, 1), Cp(0, 2)};
        t[0x5C] = {Rz(2, -1), Cp(0, 2), Rz(0, -1), Cp(1, 2)};
        t[0x72] = {Cp(0, 2), Rz(0, -1), Cp(0, 1), Rz(1, -1)};
        t[0x74] = {Rz(0, 1), Cp(1, 2), Cp(0, 1), Rz(1, -1)};
        // three two-qubit gates
        t[0x17] = {Cp(1, 2), Cp(0, 2), Cp(0, 1)};
        t[0x2B] = {Rz(2, 1), Rz(1, -1), Cp(0, 1), Cp(0, 2), Cp(1, 2)};
        t[0x4D] = {Rz(0, 1), Cp(1, 2), Cp(0, 1), Rz(2, 1), Cp(0, 2)};
        t[0x71] = {Rz(0, 1), Cp(0, 2), Cp(0, 1), Rz(1, -1), Cp(1, 2)};
        return t;
    }();
    return table;
}

inline Circuit table2_circuit(std::uint8_t hex) {
    const auto& table = table2_ops();
    const auto it = table.find(hex);
    if (it == table.end())
        throw std::invalid_argument("table2_circuit: unknown function code");
    Circuit c;
    c.ops = it->second;
    return c;
}

inline void write_catalog_csv(std::ostream& os) {
    os << "hex,f0,f1,f2,f3,f4,f5,f6,f7,two_qubit_gate_count\n";
    char hx[8];
    for (const BalancedFunction& fn : function_catalog()) {
        std::snprintf(hx, sizeof hx, "%02X", fn.hex);
        os << hx;
        for (int x = 0; x < 8; ++x) os << ',' << fn.outputs[x];
        os << ',' << table2_circuit(fn.hex).two_qubit_count() << '\n';
    }
}

}  // namespace sfg
