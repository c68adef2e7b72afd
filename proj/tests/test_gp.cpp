#include "sfg/gp.hpp"

#include "sfg/dj.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

using namespace sfg;
using Catch::Approx;

namespace {

GateLibrary fast_cp_library() {
    return GateLibrary::sfg_set(bind_physical(sfg_params(124, 142, Branch::minus), 51.93),
                                bind_physical(sfg_params(137, 156, Branch::minus), 54.37),
                                bind_physical(sfg_params(143, 162, Branch::minus), 56.77));
}

}  // namespace

TEST_CASE("random circuits respect the draw contract") {
    GpConfig cfg;
    cfg.TQmax = 3;
    cfg.angle_mode = AngleMode::grid_pi_over_8;
    Rng rng(4);
    for (int trial = 0; trial < 10000; ++trial) {
        const Circuit c = random_circuit(cfg, rng);
        REQUIRE(c.ops.size() >= 1);
        REQUIRE(c.ops.size() <= 2 * static_cast<size_t>(cfg.TQmax));
        REQUIRE(c.two_qubit_count() <= cfg.TQmax);
        for (const GateOp& op : c.ops) {
            if (op.is_rotation()) {
                const double k = op.angle / (kPi / 8.0);
                REQUIRE(std::abs(k - std::round(k)) < 1e-12);
                REQUIRE(std::abs(op.angle) <= kPi + 1e-12);
            }
        }
    }

    // fixed seed, identical draw
    Rng r1(99), r2(99);
    REQUIRE(random_circuit(cfg, r1) == random_circuit(cfg, r2));

    // sfg library marks ops with bindings
    GpConfig sfg_cfg;
    sfg_cfg.library = fast_cp_library();
    Rng r3(5);
    const Circuit c = random_circuit(sfg_cfg, r3);
    REQUIRE(c.bindings.size() == 3);
    for (const GateOp& op : c.ops)
        if (op.is_two_qubit()) REQUIRE(op.kind == GateKind::SFG);
}

TEST_CASE("mutation") {
    GpConfig cfg;
    cfg.TQmax = 3;
    Rng rng(12);

    Circuit empty;
    const Circuit grown = mutate(empty, cfg, rng);
    REQUIRE(grown.ops.size() == 1);

    Circuit one;
    one.ops = {make_cp(0, 1)};
    const Circuit removed = apply_mutation(one, MutationKind::remove, cfg, rng);
    REQUIRE(removed.ops.empty());

    // edit kinds are drawn uniformly
    std::array<int, 4> counts{};
    for (int k = 0; k < 10000; ++k) ++counts[static_cast<int>(draw_mutation_kind(rng))];
    for (int n : counts) REQUIRE(n / 10000.0 == Approx(0.25).margin(0.02));

    // the cap survives any mutation
    Circuit full;
    full.ops = {make_cp(0, 1), make_cp(1, 2), make_cp(0, 2), make_rotation(GateKind::RZ, 0, 1.0)};
    for (int k = 0; k < 2000; ++k) {
        const Circuit m = mutate(full, cfg, rng);
        REQUIRE(m.two_qubit_count() <= cfg.TQmax);
    }

    // perturbation re-draws a rotation angle but keeps kind and qubit
    Circuit rot;
    rot.ops = {make_rotation(GateKind::RX, 2, 0.123)};
    for (int k = 0; k < 50; ++k) {
        const Circuit p = apply_mutation(rot, MutationKind::perturb, cfg, rng);
        REQUIRE(p.ops.size() == 1);
        REQUIRE(p.ops[0].kind == GateKind::RX);
        REQUIRE(p.ops[0].q0 == 2);
    }
}

TEST_CASE("crossover") {
    GpConfig cfg;
    cfg.TQmax = 3;
    Circuit a, b;
    a.ops = {make_rotation(GateKind::RZ, 0, 0.1), make_rotation(GateKind::RZ, 1, 0.2)};
    b.ops = {make_rotation(GateKind::RX, 2, 0.3), make_rotation(GateKind::RX, 0, 0.4)};

    const Circuit join = crossover_at(a, b, 2, 0, cfg.TQmax);
    REQUIRE(join.ops.size() == 4);
    REQUIRE(join.ops[0] == a.ops[0]);
    REQUIRE(join.ops[3] == b.ops[1]);

    const Circuit empty = crossover_at(a, b, 0, 2, cfg.TQmax);
    REQUIRE(empty.ops.empty());

    // cap enforced by truncation
    Circuit heavy;
    heavy.ops = {make_cp(0, 1), make_cp(1, 2), make_cp(0, 2)};
    const Circuit kid = crossover_at(heavy, heavy, 3, 0, cfg.TQmax);
    REQUIRE(kid.two_qubit_count() <= cfg.TQmax);

    Rng rng(3);
    for (int k = 0; k < 10000; ++k) {
        const Circuit child = crossover(heavy, heavy, cfg.TQmax, rng);
        REQUIRE(child.two_qubit_count() <= cfg.TQmax);
    }
}

TEST_CASE("stochastic universal sampling") {
    std::vector<Individual> pop(5);
    for (auto& ind : pop) ind.fitness = 0.0;
    pop[2].fitness = 0.8;
    Rng rng(1);
    for (std::size_t pick : select_sus(pop, 10, rng)) REQUIRE(pick == 2);

    // equal fitness: floor/ceil copies of everyone
    std::vector<Individual> equal(4);
    for (auto& ind : equal) ind.fitness = 0.5;
    const auto picks = select_sus(equal, 10, rng);
    std::array<int, 4> counts{};
    for (std::size_t p : picks) ++counts[p];
    for (int n : counts) {
        REQUIRE(n >= 2);  // floor(10/4)
        REQUIRE(n <= 3);  // ceil(10/4)
    }

    // all-zero fitness degrades to uniform
    std::vector<Individual> zeros(4);
    const auto zpicks = select_sus(zeros, 8, rng);
    std::array<int, 4> zcounts{};
    for (std::size_t p : zpicks) ++zcounts[p];
    for (int n : zcounts) REQUIRE(n == 2);

    Rng ra(7), rb(7);
    REQUIRE(select_sus(equal, 7, ra) == select_sus(equal, 7, rb));
}

TEST_CASE("evolution on the three-CP target") {
    GpConfig cfg;
    cfg.PopL = 200;
    cfg.TQmax = 3;
    cfg.max_generations = 120;
    cfg.angle_mode = AngleMode::grid_pi_over_8;
    cfg.rng_seed = 3;
    const CMat target = oracle_unitary(0x17);

    const EvolveResult res = evolve(cfg, target);
    REQUIRE(res.history.size() == static_cast<size_t>(res.generations_run) + 1);

    // elitism: best fitness never decreases
    for (size_t k = 1; k < res.history.size(); ++k)
        REQUIRE(res.history[k].best_fitness >= res.history[k - 1].best_fitness - 1e-15);

    // cached fitness matches a recomputation
    REQUIRE(res.best.fitness ==
            Approx(average_fidelity(target, circuit_unitary(res.best.circuit))).margin(1e-15));

    // determinism across runs
    const EvolveResult res2 = evolve(cfg, target);
    REQUIRE(res2.best.circuit == res.best.circuit);
    REQUIRE(res2.history.size() == res.history.size());
    for (size_t k = 0; k < res.history.size(); ++k)
        REQUIRE(res2.history[k].best_fitness == res.history[k].best_fitness);

    // every individual in every generation respects the invariants
    GpConfig observed = cfg;
    observed.max_generations = 10;
    observed.fitness_threshold = 1.0;
    bool checked = false;
    evolve(observed, target, [&](int, const std::vector<Individual>& pop) {
        checked = true;
        REQUIRE(pop.size() == static_cast<size_t>(observed.PopL));
        for (const Individual& ind : pop)
            REQUIRE(ind.circuit.two_qubit_count() <= observed.TQmax);
    });
    REQUIRE(checked);
}

TEST_CASE("monotone best fitness with a tiny population") {
    GpConfig cfg;
    cfg.PopL = 2;
    cfg.ElitProb = 0.5;
    cfg.CrossProb = 0.0;
    cfg.MutProb = 0.5;
    cfg.TQmax = 3;
    cfg.max_generations = 60;
    cfg.angle_mode = AngleMode::continuous;  // exact solutions unreachable
    cfg.fitness_threshold = 1.0;
    cfg.rng_seed = 8;
    const EvolveResult res = evolve(cfg, oracle_unitary(0x33));
    for (size_t k = 1; k < res.history.size(); ++k)
        REQUIRE(res.history[k].best_fitness >= res.history[k - 1].best_fitness - 1e-15);
}

TEST_CASE("config validation and parsing") {
    GpConfig bad;
    bad.CrossProb = 0.5;  // sums to 1.15
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

    GpConfig cap;
    cap.TQmax = 2;
    REQUIRE_THROWS_AS(cap.validate(), std::invalid_argument);

    std::istringstream in(
        "PopL = 64\n"
        "CrossProb = 0.3\n"
        "MutProb = 0.69\n"
        "ElitProb = 0.01\n"
        "TQmax = 5\n"
        "max_generations = 42\n"
        "fitness_threshold = 0.99\n"
        "angle_mode = continuous\n"
        "gate_library = sfg:124/142/minus/51.93,137/156/minus/54.37,143/162/minus/56.77\n"
        "rng_seed = 17\n");
    const GpConfig cfg = parse_gp_config(in);
    cfg.validate();
    REQUIRE(cfg.PopL == 64);
    REQUIRE(cfg.TQmax == 5);
    REQUIRE(cfg.angle_mode == AngleMode::continuous);
    REQUIRE(cfg.rng_seed == 17);
    REQUIRE_FALSE(cfg.library.ideal_cp);
    REQUIRE(cfg.library.gates[1].m == 137);

    std::istringstream unknown("PopX = 3\n");
    REQUIRE_THROWS_AS(parse_gp_config(unknown), std::invalid_argument);

    std::istringstream badlib("gate_library = sfg:1/2/minus/1\n");
    REQUIRE_THROWS_AS(parse_gp_config(badlib), std::invalid_argument);
}

TEST_CASE("fast fitness evaluation matches the generic route") {
    const CMat target = oracle_unitary(0x17);
    for (const bool ideal : {true, false}) {
        GpConfig cfg;
        cfg.TQmax = 8;
        cfg.angle_mode = AngleMode::continuous;
        if (!ideal) cfg.library = fast_cp_library();
        const detail::FitnessEvaluator fitness(cfg, target);
        Rng rng(2718);
        for (int trial = 0; trial < 300; ++trial) {
            const Circuit c = clean(random_circuit(cfg, rng));
            REQUIRE(fitness(c) ==
                    Approx(average_fidelity(target, circuit_unitary(c))).margin(1e-12));
        }
    }
}

TEST_CASE("history export") {
    std::vector<GenerationStats> h{{0, 0.5, 0.25, 4, 2}, {1, 0.75, 0.5, 3, 1}};
    std::ostringstream os;
    write_history_csv(os, h);
    REQUIRE(os.str() ==
            "generation,best_fitness,mean_fitness,best_length,best_two_qubit_count\n"
            "0,0.5,0.25,4,2\n"
            "1,0.75,0.5,3,1\n");
}
