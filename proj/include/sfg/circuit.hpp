#pragma once

// Gate sequences over the three-qubit register: evaluation to an 8x8
// unitary, cleaning, two-qubit time accounting, fidelity metrics, and the
// circuit text format.
//
// Ops apply in list order: the first op acts on the state first. Written
// operator algebra (rightmost factor first) therefore parses into the
// reversed list.

#include "sfg/format.hpp"
#include "sfg/gates.hpp"
#include "sfg/numerics.hpp"

#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfg {

enum class GateKind { RX, RZ, PHI, H, CP, SFG };

inline const char* to_string(GateKind k) {
    switch (k) {
        case GateKind::RX: return "RX";
        case GateKind::RZ: return "RZ";
        case GateKind::PHI: return "PHI";
        case GateKind::H: return "H";
        case GateKind::CP: return "CP";
        case GateKind::SFG: return "SFG";
    }
    return "?";
}

struct GateOp {
    GateKind kind = GateKind::RZ;
    int q0 = 0;
    int q1 = -1;          // second qubit, two-qubit kinds only
    double angle = 0.0;   // rotation kinds only
    std::string ref;      // SFG binding name
    int reps = 1;         // SFG repetition count

    bool is_two_qubit() const { return kind == GateKind::CP || kind == GateKind::SFG; }
    bool is_rotation() const {
        return kind == GateKind::RX || kind == GateKind::RZ || kind == GateKind::PHI;
    }
    bool operator==(const GateOp& o) const = default;
};

inline GateOp make_rotation(GateKind kind, int q, double angle) {
    return {kind, q, -1, angle, {}, 1};
}
inline GateOp make_h(int q) { return {GateKind::H, q, -1, 0.0, {}, 1}; }
inline GateOp make_cp(int qa, int qb) { return {GateKind::CP, qa, qb, 0.0, {}, 1}; }
inline GateOp make_sfg(std::string ref, int qa, int qb, int reps = 1) {
    return {GateKind::SFG, qa, qb, 0.0, std::move(ref), reps};
}

struct Circuit {
    std::vector<GateOp> ops;
    std::map<std::string, SfgGateSpec> bindings;

    int two_qubit_count() const {
        int n = 0;
        for (const GateOp& op : ops)
            if (op.is_two_qubit()) ++n;
        return n;
    }
    bool operator==(const Circuit& o) const {
        if (ops != o.ops || bindings.size() != o.bindings.size()) return false;
        for (auto ita = bindings.begin(), itb = o.bindings.begin(); ita != bindings.end();
             ++ita, ++itb) {
            const SfgGateSpec &a = ita->second, &b = itb->second;
            if (ita->first != itb->first || a.m != b.m || a.n != b.n ||
                a.branch != b.branch || a.j_ghz != b.j_ghz)
                return false;
        }
        return true;
    }
};

inline const SfgGateSpec& resolve_ref(const Circuit& c, const std::string& ref) {
    const auto it = c.bindings.find(ref);
    if (it == c.bindings.end())
        throw std::runtime_error("unresolved gate reference '" + ref + "'");
    return it->second;
}

inline CMat op_unitary(const Circuit& c, const GateOp& op) {
    switch (op.kind) {
        case GateKind::RX: return embed_single(rx(op.angle), op.q0);
        case GateKind::RZ: return embed_single(rz(op.angle), op.q0);
        case GateKind::PHI: return embed_single(phi(op.angle), op.q0);
        case GateKind::H: return embed_single(hadamard(), op.q0);
        case GateKind::CP: return embed_pair(cp(), op.q0, op.q1);
        case GateKind::SFG:
            return embed_pair(mat_power(sfg_unitary(resolve_ref(c, op.ref)), op.reps),
                              op.q0, op.q1);
    }
    throw std::logic_error("op_unitary: bad kind");
}

inline CMat circuit_unitary(const Circuit& c) {
    CMat u = identity(8);
    for (const GateOp& op : c.ops) u = op_unitary(c, op) * u;
    return u;
}

// wrap into (-pi, pi]
inline double wrap_angle(double theta) {
    double w = std::remainder(theta, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

// Merge adjacent same-kind same-qubit rotations (summing angles), drop
// zero-angle rotations, and fold adjacent identical two-qubit repetitions
// into a repetition count. PHI acts as a global phase whatever its qubit, so
// adjacent PHI ops merge regardless of index. The evaluated unitary changes
// by at most a global phase.
inline Circuit clean(const Circuit& c) {
    Circuit out;
    out.bindings = c.bindings;
    for (const GateOp& next : c.ops) {
        GateOp op = next;
        if (op.is_rotation()) {
            op.angle = wrap_angle(op.angle);
            while (!out.ops.empty()) {
                GateOp& last = out.ops.back();
                if (!(last.kind == op.kind &&
                      (last.q0 == op.q0 || op.kind == GateKind::PHI)))
                    break;
                op.q0 = last.q0;
                op.angle = wrap_angle(last.angle + op.angle);
                out.ops.pop_back();
            }
            if (std::abs(op.angle) < 1e-12) continue;
            out.ops.push_back(op);
        } else if (op.kind == GateKind::SFG && !out.ops.empty()) {
            GateOp& last = out.ops.back();
            if (last.kind == GateKind::SFG && last.ref == op.ref && last.q0 == op.q0 &&
                last.q1 == op.q1) {
                last.reps += op.reps;
            } else {
                out.ops.push_back(op);
            }
        } else {
            out.ops.push_back(op);
        }
    }
    return out;
}

// total time spent in two-qubit interactions, in ns; repetitions count as
// reps * T_i, ideal CP gates as 0
inline double two_qubit_time(const Circuit& c) {
    double total = 0.0;
    for (const GateOp& op : c.ops) {
        if (op.kind != GateKind::SFG) continue;
        const SfgGateSpec& s = resolve_ref(c, op.ref);
        if (!s.j_ghz)
            throw std::runtime_error("two_qubit_time: gate '" + op.ref + "' has no J binding");
        total += op.reps * (s.t_ns ? *s.t_ns : s.jt / *s.j_ghz);
    }
    return total;
}

// Squared trace overlap |Tr(A† B)|^2 / dim^2: 1 iff equal up to a global
// phase, insensitive to the order of arguments.
inline double average_fidelity(const CMat& u_comp, const CMat& u_circ) {
    if (u_comp.rows() != u_circ.rows() || u_comp.cols() != u_circ.cols())
        throw std::invalid_argument("average_fidelity: dimension mismatch");
    const double overlap =
        std::abs((u_comp.adjoint() * u_circ).trace()) / static_cast<double>(u_comp.rows());
    return overlap * overlap;
}

inline double state_fidelity(const CVec& ideal, const CVec& actual) {
    const Complex ov = ideal.dot(actual);
    return std::norm(ov);
}

// ---- text format ----------------------------------------------------------
//
//   # comment
//   GATE <ref> M=<int> N=<int> BRANCH=<plus|minus> [J=<GHz>]
//   RX <q> <angle> | RZ <q> <angle> | PHI <q> <angle> | H <q>
//   CP <qa> <qb>  | SFG <ref> <qa> <qb> [x<reps>]

struct CircuitParseError : std::runtime_error {
    int line;
    CircuitParseError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

namespace detail {

inline int parse_qubit(const std::string& tok, int line) {
    if (tok.size() == 1 && tok[0] >= '0' && tok[0] <= '2') return tok[0] - '0';
    throw CircuitParseError(line, "bad qubit index '" + tok + "'");
}

inline double parse_angle(const std::string& tok, int line) {
    try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw CircuitParseError(line, "bad angle '" + tok + "'");
    }
}

}  // namespace detail

inline Circuit parse_circuit(std::istream& in) {
    Circuit c;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream line(raw);
        std::vector<std::string> tok;
        for (std::string t; line >> t;) tok.push_back(t);
        if (tok.empty()) continue;

        const std::string& kw = tok[0];
        if (kw == "GATE") {
            if (tok.size() < 5) throw CircuitParseError(line_no, "GATE needs ref and M=/N=/BRANCH=");
            const std::string ref = tok[1];
            int m = 0, n = 0;
            Branch br = Branch::minus;
            std::optional<double> j;
            for (size_t k = 2; k < tok.size(); ++k) {
                const size_t eq = tok[k].find('=');
                if (eq == std::string::npos)
                    throw CircuitParseError(line_no, "expected key=value, got '" + tok[k] + "'");
                const std::string key = tok[k].substr(0, eq), val = tok[k].substr(eq + 1);
                try {
                    if (key == "M") m = std::stoi(val);
                    else if (key == "N") n = std::stoi(val);
                    else if (key == "BRANCH") br = branch_from_string(val);
                    else if (key == "J") j = std::stod(val);
                    else throw std::invalid_argument("unknown key '" + key + "'");
                } catch (const CircuitParseError&) {
                    throw;
                } catch (const std::exception& e) {
                    throw CircuitParseError(line_no, std::string(e.what()));
                }
            }
            try {
                SfgGateSpec s = sfg_params(m, n, br);
                if (j) s = bind_physical(s, *j);
                c.bindings[ref] = s;
            } catch (const std::exception& e) {
                throw CircuitParseError(line_no, std::string(e.what()));
            }
        } else if (kw == "RX" || kw == "RZ" || kw == "PHI") {
            if (tok.size() != 3) throw CircuitParseError(line_no, kw + " needs <q> <angle>");
            const GateKind kind = kw == "RX"   ? GateKind::RX
                                  : kw == "RZ" ? GateKind::RZ
                                               : GateKind::PHI;
            c.ops.push_back(make_rotation(kind, detail::parse_qubit(tok[1], line_no),
                                          detail::parse_angle(tok[2], line_no)));
        } else if (kw == "H") {
            if (tok.size() != 2) throw CircuitParseError(line_no, "H needs <q>");
            c.ops.push_back(make_h(detail::parse_qubit(tok[1], line_no)));
        } else if (kw == "CP") {
            if (tok.size() != 3) throw CircuitParseError(line_no, "CP needs <qa> <qb>");
            const int qa = detail::parse_qubit(tok[1], line_no);
            const int qb = detail::parse_qubit(tok[2], line_no);
            if (qa == qb) throw CircuitParseError(line_no, "CP qubits must differ");
            c.ops.push_back(make_cp(qa, qb));
        } else if (kw == "SFG") {
            if (tok.size() != 4 && tok.size() != 5)
                throw CircuitParseError(line_no, "SFG needs <ref> <qa> <qb> [x<reps>]");
            const int qa = detail::parse_qubit(tok[2], line_no);
            const int qb = detail::parse_qubit(tok[3], line_no);
            if (qa == qb) throw CircuitParseError(line_no, "SFG qubits must differ");
            int reps = 1;
            if (tok.size() == 5) {
                if (tok[4].size() < 2 || tok[4][0] != 'x')
                    throw CircuitParseError(line_no, "bad repetition '" + tok[4] + "'");
                try {
                    reps = std::stoi(tok[4].substr(1));
                } catch (const std::exception&) {
                    throw CircuitParseError(line_no, "bad repetition '" + tok[4] + "'");
                }
                if (reps < 1) throw CircuitParseError(line_no, "repetition must be >= 1");
            }
            c.ops.push_back(make_sfg(tok[1], qa, qb, reps));
        } else {
            throw CircuitParseError(line_no, "unknown gate kind '" + kw + "'");
        }
    }
    for (const GateOp& op : c.ops)
        if (op.kind == GateKind::SFG && !c.bindings.count(op.ref))
            throw CircuitParseError(0, "unresolved gate reference '" + op.ref + "'");
    return c;
}

inline Circuit parse_circuit(const std::string& text) {
    std::istringstream in(text);
    return parse_circuit(in);
}

inline std::string serialize(const Circuit& c) {
    std::ostringstream os;
    for (const auto& [ref, s] : c.bindings) {
        os << "GATE " << ref << " M=" << s.m << " N=" << s.n << " BRANCH=" << to_string(s.branch);
        if (s.j_ghz) os << " J=" << fmt_g17(*s.j_ghz);
        os << '\n';
    }
    for (const GateOp& op : c.ops) {
        switch (op.kind) {
            case GateKind::RX:
            case GateKind::RZ:
            case GateKind::PHI:
                os << to_string(op.kind) << ' ' << op.q0 << ' ' << fmt_g17(op.angle) << '\n';
                break;
            case GateKind::H: os << "H " << op.q0 << '\n'; break;
            case GateKind::CP: os << "CP " << op.q0 << ' ' << op.q1 << '\n'; break;
            case GateKind::SFG:
                os << "SFG " << op.ref << ' ' << op.q0 << ' ' << op.q1;
                if (op.reps != 1) os << " x" << op.reps;
                os << '\n';
                break;
        }
    }
    return os.str();
}

}  // namespace sfg
