#include "sfg/search.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <sstream>

using namespace sfg;
using Catch::Approx;

TEST_CASE("target_ratio") {
    REQUIRE(target_ratio(1.0) == Approx(std::sqrt(8.0 / 12.0)).margin(1e-12));
    REQUIRE(target_ratio(0.0) == Approx(1.0).margin(1e-12));
    const double f = energy_to_frequency(0.136) / 61.175;
    REQUIRE(target_ratio(f) == Approx(0.8903).margin(2e-4));
    REQUIRE(target_ratio(f) == Approx(0.890243136).margin(1e-7));
}

TEST_CASE("continued fraction and convergents") {
    const auto half = convergents(continued_fraction(0.5, 20));
    REQUIRE(half.size() == 2);
    REQUIRE(half[0].p == 0);
    REQUIRE(half[0].q == 1);
    REQUIRE(half[1].p == 1);
    REQUIRE(half[1].q == 2);

    const double b = energy_to_frequency(0.136);
    const auto conv1 = convergents(continued_fraction(target_ratio(b / 61.175), 20));
    REQUIRE(std::any_of(conv1.begin(), conv1.end(),
                        [](const Convergent& c) { return c.p == 73 && c.q == 82; }));
    const auto conv2 = convergents(continued_fraction(target_ratio(b / 66.175), 20));
    REQUIRE(std::any_of(conv2.begin(), conv2.end(),
                        [](const Convergent& c) { return c.p == 79 && c.q == 88; }));

    REQUIRE_THROWS_AS(continued_fraction(-0.3, 10), std::invalid_argument);
}

TEST_CASE("convergents are coprime, increasing, and best approximations") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 25; ++trial) {
        const double x = u(rng);
        const auto conv = convergents(continued_fraction(x, 12));
        for (size_t k = 0; k < conv.size(); ++k) {
            REQUIRE(std::gcd(conv[k].p, conv[k].q) == 1);
            // q_{k+1} = a_{k+1} q_k + q_{k-1}: strictly increasing except a
            // possible 1 = 1 tie at the very first step
            if (k >= 2) REQUIRE(conv[k].q > conv[k - 1].q);
            if (k == 1) REQUIRE(conv[k].q >= conv[k - 1].q);
        }
        // classical best-approximation property (second kind): |q_k x - p_k|
        // is minimal over all fractions with denominator <= q_k
        for (size_t k = 1; k < conv.size(); ++k) {
            const Convergent& c = conv[k];
            if (c.q > 100) break;
            const double err = std::abs(c.q * x - c.p);
            for (long long q = 1; q <= c.q; ++q) {
                const long long p = std::llround(x * q);
                if (p == c.p && q == c.q) continue;
                REQUIRE(err <= std::abs(q * x - p) + 1e-12);
            }
        }
    }
}

TEST_CASE("fastest gates at the three reference couplings") {
    const double b = energy_to_frequency(0.136);

    const auto g1 = fastest_gates(61.175, b);
    REQUIRE(g1.size() == 1);
    REQUIRE(g1[0].spec.m == 73);
    REQUIRE(g1[0].spec.n == 82);
    REQUIRE(*g1[0].spec.t_ns == Approx(1.308).margin(0.002));

    const auto g2 = fastest_gates(66.175, b);
    REQUIRE(g2[0].spec.m == 79);
    REQUIRE(g2[0].spec.n == 88);
    REQUIRE(*g2[0].spec.t_ns == Approx(1.3055).margin(0.002));

    const auto g3 = fastest_gates(71.175, b);
    REQUIRE(g3[0].spec.m == 85);
    REQUIRE(g3[0].spec.n == 94);
    REQUIRE(*g3[0].spec.t_ns == Approx(1.3031).margin(0.002));

    // returned specs re-verify their own filters
    for (const auto& hits : {g1, g2, g3}) {
        REQUIRE(hits[0].delta_f_rel <= 1e-3);
        REQUIRE(std::abs(hits[0].spec.bt - hits[0].spec.f * hits[0].spec.jt) < 1e-9);
    }

    // tightening the tolerance only moves to later convergents
    const auto tight = fastest_gates(66.175, b, 1e-5);
    REQUIRE(tight[0].spec.n > 88);

    REQUIRE_THROWS_AS(fastest_gates(-1.0, b), std::invalid_argument);
    REQUIRE_THROWS_AS(fastest_gates(61.175, b, 1e-15, 1, 6), std::runtime_error);
}

TEST_CASE("cp approximation scan") {
    const double b = energy_to_frequency(0.136);
    const auto hits = cp_approx_search(b, 10.0, 0.99, 170, 170);
    REQUIRE(!hits.empty());
    const auto contains = [&hits](int m, int n) {
        return std::any_of(hits.begin(), hits.end(), [&](const GateCandidate& g) {
            return g.spec.m == m && g.spec.n == n;
        });
    };
    REQUIRE(contains(124, 142));
    REQUIRE(contains(137, 156));
    REQUIRE(contains(143, 162));

    // sorted by T, filters re-verifiable
    double last_t = 0.0;
    for (const GateCandidate& g : hits) {
        REQUIRE(*g.spec.t_ns >= last_t);
        last_t = *g.spec.t_ns;
        REQUIRE(*g.spec.t_ns <= 10.0);
        REQUIRE(average_fidelity(cp(), sfg_unitary(g.spec)) >= 0.99);
    }

    // no exact CP exists on the grid
    REQUIRE(cp_approx_search(b, 10.0, 1.0, 120, 120).empty());

    REQUIRE_THROWS_AS(cp_approx_search(b, 10.0, 1.5, 50, 50), std::invalid_argument);
    REQUIRE_THROWS_AS(cp_approx_search(-b, 10.0, 0.9, 50, 50), std::invalid_argument);
}

TEST_CASE("search csv") {
    const double b = energy_to_frequency(0.136);
    const auto hits = fastest_gates(61.175, b);
    std::ostringstream os;
    write_search_csv(os, hits);
    std::istringstream is(os.str());
    std::string header, row;
    std::getline(is, header);
    REQUIRE(header == "M,N,branch,f,delta_f_rel,J_GHz,T_ns,c1,c2,c3,AF_vs_CP");
    std::getline(is, row);
    REQUIRE(row.rfind("73,82,minus,", 0) == 0);
}
