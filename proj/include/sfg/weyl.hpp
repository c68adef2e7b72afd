#pragma once

// Entanglement geometry of two-qubit gates: canonical Weyl-chamber
// coordinates (c1, c2, c3), the local invariants (G1, G2), perfect-entangler
// classification, and the chamber sweep over the (M, N) gate family.
//
// For the gate family here the raw coordinates have the closed form
//   c1 = pi + (M+N)*pi/2 - JT,   c2 = c3 = M*pi/2 - JT*(1-f)/2
// which is reduced into the canonical chamber c1 >= c2 >= c3 >= 0,
// c1 + c2 <= pi by mod-pi shifts and Weyl-group reflections.

#include "sfg/format.hpp"
#include "sfg/gates.hpp"
#include "sfg/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <vector>

namespace sfg {

inline constexpr double kPeBand = 1e-3;

struct WeylPoint {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
};

struct MakhlinInvariants {
    Complex g1;
    double g2 = 0.0;
};

inline std::array<double, 3> weyl_raw(const SfgGateSpec& s) {
    const double c1 = kPi + (s.m + s.n) * kPi / 2.0 - s.jt;
    const double c23 = s.m * kPi / 2.0 - s.jt * (1.0 - s.f) / 2.0;
    return {c1, c23, c23};
}

namespace detail {
inline double mod_pi(double x) {
    double r = std::fmod(x, kPi);
    if (r < 0.0) r += kPi;
    return r;
}
}  // namespace detail

inline WeylPoint canonicalize(const std::array<double, 3>& raw) {
    std::array<double, 3> v{detail::mod_pi(raw[0]), detail::mod_pi(raw[1]),
                            detail::mod_pi(raw[2])};
    std::sort(v.begin(), v.end(), std::greater<>());
    if (v[0] + v[1] > kPi) {
        v = {kPi - v[1], kPi - v[0], v[2]};
        std::sort(v.begin(), v.end(), std::greater<>());
    }
    // on the c3 = 0 face the chamber identifies c1 with pi - c1
    if (v[2] < 1e-12 && v[0] > kPi / 2.0) {
        v[0] = kPi - v[0];
        std::sort(v.begin(), v.end(), std::greater<>());
    }
    return {v[0], v[1], v[2]};
}

inline bool is_canonical(const WeylPoint& p, double tol = 1e-12) {
    return p.c1 >= p.c2 && p.c2 >= p.c3 && p.c3 >= 0.0 && p.c1 < kPi &&
           p.c1 + p.c2 <= kPi + tol;
}

inline MakhlinInvariants makhlin_from_c(const std::array<double, 3>& c) {
    const double co1 = std::cos(c[0]), co2 = std::cos(c[1]), co3 = std::cos(c[2]);
    const double si1 = std::sin(c[0]), si2 = std::sin(c[1]), si3 = std::sin(c[2]);
    const double cc = co1 * co1 * co2 * co2 * co3 * co3;
    const double ss = si1 * si1 * si2 * si2 * si3 * si3;
    MakhlinInvariants g;
    g.g1 = Complex(cc - ss,
                   0.25 * std::sin(2 * c[0]) * std::sin(2 * c[1]) * std::sin(2 * c[2]));
    g.g2 = 4.0 * cc - 4.0 * ss - std::cos(2 * c[0]) * std::cos(2 * c[1]) * std::cos(2 * c[2]);
    return g;
}

inline MakhlinInvariants makhlin_from_c(const WeylPoint& p) {
    return makhlin_from_c(std::array<double, 3>{p.c1, p.c2, p.c3});
}

// closed forms in (M, N, JT, f); equal to makhlin_from_c(weyl_raw(s)) to
// roundoff, which the tests cross-validate
inline MakhlinInvariants makhlin_sfg(const SfgGateSpec& s) {
    const Complex i(0.0, 1.0);
    const double sgn_mn = ((s.m + s.n) % 2 == 0) ? 1.0 : -1.0;
    const double sgn_m = (s.m % 2 == 0) ? 1.0 : -1.0;
    const double sgn_n = (s.n % 2 == 0) ? 1.0 : -1.0;
    const double cmix = std::cos((1.0 - s.f) * s.jt);
    const Complex bracket = std::exp(-i * s.jt) + sgn_n * std::exp(i * s.jt) * cmix;
    MakhlinInvariants g;
    g.g1 = sgn_mn * bracket * bracket / 4.0;
    g.g2 = sgn_mn * std::cos(2.0 * s.jt) + 2.0 * sgn_m * cmix;
    return g;
}

// Largest concurrence the local-equivalence class can produce from a product
// state: the magic-basis spectrum puts four phases on the unit circle, and
// the reachable values are radii of circles enclosing them. 1 exactly when
// the origin lies in their convex hull (largest circular gap <= pi),
// otherwise sin(arc_span / 2) from the farthest pair.
inline double max_concurrence(const WeylPoint& p) {
    std::array<double, 4> mu = {p.c1 - p.c2 + p.c3, -p.c1 + p.c2 + p.c3,
                                p.c1 + p.c2 - p.c3, -(p.c1 + p.c2 + p.c3)};
    for (double& m : mu) {
        m = std::fmod(m, 2.0 * kPi);
        if (m < 0.0) m += 2.0 * kPi;
    }
    std::sort(mu.begin(), mu.end());
    double gap = mu[0] + 2.0 * kPi - mu[3];
    for (int k = 1; k < 4; ++k) gap = std::max(gap, mu[k] - mu[k - 1]);
    return gap <= kPi ? 1.0 : std::sin((2.0 * kPi - gap) / 2.0);
}

inline bool is_perfect_entangler(const WeylPoint& p) {
    return max_concurrence(p) >= 1.0 - kPeBand;
}

// Numerical ground truth: maximize the output concurrence C = 2|ad - bc|
// over product inputs, via a coarse grid on the four Bloch angles followed
// by a compass-search refinement. Accurate to well under 1e-3.
inline double pe_oracle(const CMat& u4, int grid_steps = 16) {
    if (!is_unitary(u4)) throw std::invalid_argument("pe_oracle: input must be unitary 4x4");
    if (u4.rows() != 4) throw std::invalid_argument("pe_oracle: input must be 4x4");

    const auto value = [&u4](const std::array<double, 4>& x) {
        const Complex a0(std::cos(x[0] / 2.0), 0.0);
        const Complex a1 = std::polar(std::sin(x[0] / 2.0), x[1]);
        const Complex b0(std::cos(x[2] / 2.0), 0.0);
        const Complex b1 = std::polar(std::sin(x[2] / 2.0), x[3]);
        Eigen::Vector4cd in(a0 * b0, a0 * b1, a1 * b0, a1 * b1);
        Eigen::Vector4cd out = u4 * in;
        return 2.0 * std::abs(out(0) * out(3) - out(1) * out(2));
    };

    double best = -1.0;
    std::array<double, 4> arg{};
    const double dth = kPi / (grid_steps - 1);
    const double dph = 2.0 * kPi / grid_steps;
    for (int ia = 0; ia < grid_steps; ++ia)
        for (int ja = 0; ja < grid_steps; ++ja)
            for (int ib = 0; ib < grid_steps; ++ib)
                for (int jb = 0; jb < grid_steps; ++jb) {
                    const std::array<double, 4> x{ia * dth, ja * dph, ib * dth, jb * dph};
                    const double c = value(x);
                    if (c > best) {
                        best = c;
                        arg = x;
                    }
                }

    double step = dth;
    while (step > 1e-4) {
        bool improved = false;
        for (int k = 0; k < 4; ++k) {
            for (double d : {step, -step}) {
                std::array<double, 4> y = arg;
                y[k] += d;
                const double c = value(y);
                if (c > best) {
                    best = c;
                    arg = y;
                    improved = true;
                }
            }
        }
        if (!improved) step /= 2.0;
    }
    return std::min(best, 1.0);
}

struct SweepRow {
    int m = 0, n = 0;
    Branch branch = Branch::minus;
    double f = 0.0, jt = 0.0;
    WeylPoint weyl;
    MakhlinInvariants inv;
    bool perfect_entangler = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    long skipped_pairs = 0;  // M != N pairs with no real f branch
    double pe_fraction = 0.0;
};

inline SweepResult sweep_chamber(int m_max, int n_max) {
    if (m_max < 1 || n_max < 1)
        throw std::invalid_argument("sweep_chamber: bounds must be >= 1");
    SweepResult res;
    long pe = 0;
    for (int m = 1; m <= m_max; ++m) {
        for (int n = 1; n <= n_max; ++n) {
            if (m == n) continue;
            if (!has_real_branches(m, n)) {
                ++res.skipped_pairs;
                continue;
            }
            for (Branch br : {Branch::minus, Branch::plus}) {
                SweepRow row;
                const SfgGateSpec s = sfg_params(m, n, br);
                row.m = m;
                row.n = n;
                row.branch = br;
                row.f = s.f;
                row.jt = s.jt;
                row.weyl = canonicalize(weyl_raw(s));
                row.inv = makhlin_sfg(s);
                row.perfect_entangler = is_perfect_entangler(row.weyl);
                if (row.perfect_entangler) ++pe;
                res.rows.push_back(row);
            }
        }
    }
    if (!res.rows.empty()) res.pe_fraction = static_cast<double>(pe) / res.rows.size();
    return res;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& res) {
    os << "M,N,branch,f,JT,c1,c2,c3,G1_re,G1_im,G2,perfect_entangler\n";
    for (const SweepRow& r : res.rows) {
        os << r.m << ',' << r.n << ',' << to_string(r.branch) << ',' << fmt_g9(r.f) << ','
           << fmt_g9(r.jt) << ',' << fmt_g9(r.weyl.c1) << ',' << fmt_g9(r.weyl.c2) << ','
           << fmt_g9(r.weyl.c3) << ',' << fmt_g9(r.inv.g1.real()) << ','
           << fmt_g9(r.inv.g1.imag()) << ',' << fmt_g9(r.inv.g2) << ','
           << (r.perfect_entangler ? 1 : 0) << '\n';
    }
}

}  // namespace sfg
