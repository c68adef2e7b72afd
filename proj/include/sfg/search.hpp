#pragma once

// Gate discovery for given physical parameters. The JT equality forces
// M/N = sqrt((f-1)^2+8) / sqrt((f+1)^2+8), so integer pairs realizing a
// target f = B/J are best rational approximations of that ratio: walk the
// continued-fraction convergents for the fastest admissible gates, or scan
// the (M, N) grid for gates approximating an ideal CP.

#include "sfg/circuit.hpp"
#include "sfg/format.hpp"
#include "sfg/gates.hpp"
#include "sfg/weyl.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace sfg {

struct Convergent {
    long long p = 0;
    long long q = 1;
    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

inline double target_ratio(double f) {
    return std::sqrt((f - 1.0) * (f - 1.0) + 8.0) / std::sqrt((f + 1.0) * (f + 1.0) + 8.0);
}

inline std::vector<long long> continued_fraction(double x, int max_terms) {
    if (x <= 0.0) throw std::invalid_argument("continued_fraction: x must be positive");
    std::vector<long long> coeffs;
    for (int k = 0; k < max_terms; ++k) {
        const double a = std::floor(x);
        if (a > 9e15) break;  // numerically exhausted
        coeffs.push_back(static_cast<long long>(a));
        const double frac = x - a;
        if (frac < 1e-12) break;
        x = 1.0 / frac;
    }
    return coeffs;
}

inline std::vector<Convergent> convergents(const std::vector<long long>& coeffs) {
    std::vector<Convergent> out;
    long long p_prev = 0, q_prev = 1;  // h_{-2}/k_{-2}
    long long p_cur = 1, q_cur = 0;    // h_{-1}/k_{-1}
    for (long long a : coeffs) {
        const long long p = a * p_cur + p_prev;
        const long long q = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p;
        q_cur = q;
        out.push_back({p, q});
    }
    return out;
}

struct GateCandidate {
    SfgGateSpec spec;        // physically bound (J, B, T)
    double delta_f_rel = 0;  // |f(M,N) - B/J| / (B/J)
    WeylPoint weyl;
    double af_vs_cp = 0.0;
};

namespace detail {

inline GateCandidate make_candidate(const SfgGateSpec& bound, double f_target) {
    GateCandidate cand;
    cand.spec = bound;
    cand.delta_f_rel = std::abs(bound.f - f_target) / f_target;
    cand.weyl = canonicalize(weyl_raw(bound));
    cand.af_vs_cp = average_fidelity(cp(), sfg_unitary(bound));
    return cand;
}

}  // namespace detail

// Fastest control-ideal gates at (J, B): convergents p/q of the target
// ratio in increasing q, keeping pairs whose branch-matched f sits within
// f_tol relative of B/J. Gates are returned with the exact f(M, N); the
// (J, B) mismatch is reported, not absorbed.
inline std::vector<GateCandidate> fastest_gates(double j_ghz, double b_ghz, double f_tol = 1e-3,
                                                int count = 1, int max_terms = 40) {
    if (j_ghz <= 0.0 || b_ghz <= 0.0)
        throw std::invalid_argument("fastest_gates: J and B must be positive");
    const double f_target = b_ghz / j_ghz;
    std::vector<GateCandidate> hits;
    for (const Convergent& cv : convergents(continued_fraction(target_ratio(f_target), max_terms))) {
        if (cv.p < 1 || cv.q < 1 || cv.p == cv.q) continue;
        const int m = static_cast<int>(cv.p), n = static_cast<int>(cv.q);
        if (cv.p != m || cv.q != n) break;  // beyond int range, done
        if (!has_real_branches(m, n)) continue;
        const SfgGateSpec s = sfg_params(m, n, match_branch(m, n, f_target));
        if (std::abs(s.f - f_target) / f_target > f_tol) continue;
        hits.push_back(detail::make_candidate(bind_physical(s, j_ghz), f_target));
        if (static_cast<int>(hits.size()) >= count) return hits;
    }
    if (hits.empty())
        throw std::runtime_error("fastest_gates: no convergent within f_tol; raise max_terms");
    return hits;
}

// Grid scan for gates approximating an ideal CP: J is fixed by B through
// J = B / f(M,N); keep gates with T <= t_max and fidelity >= af_min, sorted
// by T ascending. An empty result is a valid outcome.
inline std::vector<GateCandidate> cp_approx_search(double b_ghz, double t_max_ns, double af_min,
                                                   int m_max, int n_max) {
    if (b_ghz <= 0.0) throw std::invalid_argument("cp_approx_search: B must be positive");
    if (af_min <= 0.0 || af_min > 1.0)
        throw std::invalid_argument("cp_approx_search: af_min must be in (0, 1]");
    if (t_max_ns <= 0.0) throw std::invalid_argument("cp_approx_search: T_max must be positive");
    std::vector<GateCandidate> hits;
    for (int m = 1; m <= m_max; ++m) {
        for (int n = 1; n <= n_max; ++n) {
            if (m == n || !has_real_branches(m, n)) continue;
            for (Branch br : {Branch::minus, Branch::plus}) {
                const SfgGateSpec s = sfg_params(m, n, br);
                if (s.f <= 0.0) continue;  // would need J < 0
                const double j = b_ghz / s.f;
                if (s.jt / j > t_max_ns) continue;
                if (average_fidelity(cp(), sfg_unitary(s)) < af_min) continue;
                hits.push_back(detail::make_candidate(bind_physical(s, j), s.f));
            }
        }
    }
    std::sort(hits.begin(), hits.end(), [](const GateCandidate& a, const GateCandidate& b) {
        if (*a.spec.t_ns != *b.spec.t_ns) return *a.spec.t_ns < *b.spec.t_ns;
        if (a.spec.m != b.spec.m) return a.spec.m < b.spec.m;
        if (a.spec.n != b.spec.n) return a.spec.n < b.spec.n;
        return a.spec.branch == Branch::minus && b.spec.branch == Branch::plus;
    });
    return hits;
}

inline void write_search_csv(std::ostream& os, const std::vector<GateCandidate>& rows) {
    os << "M,N,branch,f,delta_f_rel,J_GHz,T_ns,c1,c2,c3,AF_vs_CP\n";
    for (const GateCandidate& r : rows) {
        os << r.spec.m << ',' << r.spec.n << ',' << to_string(r.spec.branch) << ','
           << fmt_g9(r.spec.f) << ',' << fmt_g9(r.delta_f_rel) << ',' << fmt_g9(*r.spec.j_ghz)
           << ',' << fmt_g9(*r.spec.t_ns) << ',' << fmt_g9(r.weyl.c1) << ',' << fmt_g9(r.weyl.c2)
           << ',' << fmt_g9(r.weyl.c3) << ',' << fmt_g9(r.af_vs_cp) << '\n';
    }
}

}  // namespace sfg
