#include "sfg/gates.hpp"

#include "helpers.hpp"
#include "sfg/circuit.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace sfg;
using Catch::Approx;

TEST_CASE("sfg_params reference values") {
    const SfgGateSpec a = sfg_params(73, 82, Branch::minus);
    REQUIRE(a.f == Approx(0.5376).margin(5e-4));
    REQUIRE(a.jt == Approx(80.02).margin(1e-2));
    REQUIRE(a.f == Approx(0.537546413).margin(1e-8));
    REQUIRE(a.jt == Approx(80.0200829).margin(1e-6));
    REQUIRE(a.bt == Approx(a.f * a.jt).epsilon(1e-12));

    const SfgGateSpec b = sfg_params(124, 142, Branch::minus);
    REQUIRE(b.f == Approx(0.6335).margin(5e-4));
    REQUIRE(b.f == Approx(0.6332593).margin(1e-6));

    REQUIRE_THROWS_AS(sfg_params(1, 1, Branch::minus), DegenerateGate);
    REQUIRE_THROWS_AS(sfg_params(1, 2, Branch::minus), NoRealSolution);
    REQUIRE_THROWS_AS(sfg_params(0, 5, Branch::minus), std::invalid_argument);
}

TEST_CASE("both JT forms agree, branch duality") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 300; ++trial) {
        const SfgGateSpec s = test::random_spec(rng);
        // independent route: the N-form
        const double jt_n = s.n * kPi / std::sqrt((s.f + 1.0) * (s.f + 1.0) + 8.0);
        REQUIRE(std::abs(s.jt - jt_n) <= 1e-9 * std::abs(s.jt));
        REQUIRE(std::abs(s.bt - s.f * s.jt) <= 1e-9 * std::abs(s.bt));

        // the two branches solve f^2 - 2Af + 9 = 0
        const SfgGateSpec plus = sfg_params(s.m, s.n, Branch::plus);
        const SfgGateSpec minus = sfg_params(s.m, s.n, Branch::minus);
        const double a = pair_asymmetry(s.m, s.n);
        REQUIRE(plus.f + minus.f == Approx(2.0 * a).epsilon(1e-9));
        REQUIRE(plus.f * minus.f == Approx(9.0).epsilon(1e-9));
    }
}

TEST_CASE("sfg_unitary structure") {
    std::mt19937_64 rng(321);
    for (int trial = 0; trial < 200; ++trial) {
        const SfgGateSpec s = test::random_spec(rng);
        const CMat u = sfg_unitary(s);
        REQUIRE(unitarity_error(u) <= 1e-10);
        // mixing-block rows have unit norm by construction
        REQUIRE(std::norm(u(1, 1)) + std::norm(u(1, 2)) == Approx(1.0).margin(1e-12));
        REQUIRE(u(1, 1) == u(2, 2));
        REQUIRE(u(1, 2) == u(2, 1));
        REQUIRE(u(0, 1) == Complex(0.0, 0.0));
        REQUIRE(u(3, 0) == Complex(0.0, 0.0));
    }
}

TEST_CASE("fast CP-approximating gate") {
    const SfgGateSpec s = sfg_params(124, 142, Branch::minus);
    const CMat u = sfg_unitary(s);
    const std::array<double, 4> target_phase{0.0, 0.0, 0.0, kPi};
    for (int k = 0; k < 4; ++k) {
        const double d = std::remainder(std::arg(u(k, k)) - target_phase[k], 2.0 * kPi);
        REQUIRE(std::abs(d) < 0.15);
    }
    REQUIRE(average_fidelity(cp(), u) > 0.99);
}

TEST_CASE("physical_time") {
    REQUIRE(physical_time(sfg_params(124, 142, Branch::minus), 51.93) ==
            Approx(2.63).margin(0.01));
    REQUIRE(physical_time(sfg_params(137, 156, Branch::minus), 54.37) ==
            Approx(2.77).margin(0.01));
    REQUIRE(physical_time(sfg_params(73, 82, Branch::minus), 61.175) ==
            Approx(1.308).margin(0.002));
    REQUIRE_THROWS_AS(physical_time(sfg_params(73, 82, Branch::minus), 0.0),
                      std::invalid_argument);
}

TEST_CASE("bind_physical and match_branch") {
    const SfgGateSpec s = bind_physical(sfg_params(73, 82, Branch::minus), 61.175);
    REQUIRE(*s.t_ns == Approx(1.308052).margin(1e-5));
    REQUIRE(*s.b_ghz == Approx(s.f * 61.175).epsilon(1e-12));

    const double b = energy_to_frequency(0.136);
    REQUIRE(match_branch(124, 142, b / 51.93) == Branch::minus);
    REQUIRE(match_branch(1595, 2137, 5.3) == Branch::plus);
}

TEST_CASE("fixed gate set") {
    const CMat c = cp();
    REQUIRE(c(3, 3).real() == Approx(-1.0));
    REQUIRE((c * c).isApprox(identity(4)));
    REQUIRE(average_fidelity(c, c) == Approx(1.0));

    REQUIRE(rx(0.0).isApprox(identity(2)));
    const CMat z = rz(kPi);
    REQUIRE(z(0, 0) == Complex(std::cos(kPi / 2), -1.0 * std::sin(kPi / 2)));
    REQUIRE(std::abs(z(0, 0) - Complex(0.0, -1.0)) < 1e-15);
    REQUIRE(std::abs(z(1, 1) - Complex(0.0, 1.0)) < 1e-15);

    // additive angles
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int k = 0; k < 20; ++k) {
        const double a = u(rng), b2 = u(rng);
        REQUIRE((rz(a) * rz(b2)).isApprox(rz(a + b2), 1e-12));
    }

    REQUIRE(std::abs(phi(1.3)(0, 0) - std::exp(Complex(0, -0.65))) < 1e-15);
    REQUIRE(phi(1.3)(0, 1) == Complex(0.0, 0.0));

    const CMat h = hadamard();
    REQUIRE((h * h).isApprox(identity(2), 1e-12));
    CVec e0 = CVec::Zero(2);
    e0(0) = 1.0;
    const CVec plus = h * e0;
    REQUIRE(plus(0).real() == Approx(1.0 / std::sqrt(2.0)));
    REQUIRE(plus(1).real() == Approx(1.0 / std::sqrt(2.0)));

    CVec e000 = CVec::Zero(8);
    e000(0) = 1.0;
    const CVec uniform = kron(h, kron(h, h)) * e000;
    for (int k = 0; k < 8; ++k)
        REQUIRE(std::abs(uniform(k)) == Approx(1.0 / std::sqrt(8.0)).margin(1e-12));
}
