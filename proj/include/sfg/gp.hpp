#pragma once

// Genetic-programming synthesis of gate sequences approximating a target 8x8
// unitary. Fitness is the squared trace overlap; parents come from
// stochastic universal sampling over the fitness wheel; the next generation
// is elite copies + crossover children + mutation children, each child
// cleaned before evaluation.
//
// Determinism: one coordinator RNG makes every draw in a fixed order;
// fitness evaluation is pure. Identical (config, target, seed) gives an
// identical run.

#include "sfg/circuit.hpp"
#include "sfg/gates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sfg {

using Rng = std::mt19937_64;

enum class AngleMode { grid_pi_over_8, continuous };

inline const char* to_string(AngleMode m) {
    return m == AngleMode::grid_pi_over_8 ? "grid_pi_over_8" : "continuous";
}

inline AngleMode angle_mode_from_string(const std::string& s) {
    if (s == "grid_pi_over_8") return AngleMode::grid_pi_over_8;
    if (s == "continuous") return AngleMode::continuous;
    throw std::invalid_argument("unknown angle_mode '" + s + "'");
}

// Entangling-gate library: one gate per qubit pair (0,1), (1,2), (0,2),
// either three ideal CP gates or three physically bound gate specs.
struct GateLibrary {
    static constexpr std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {1, 2}, {0, 2}}};

    bool ideal_cp = true;
    std::array<SfgGateSpec, 3> gates{};

    static GateLibrary cp_set() { return GateLibrary{}; }

    static GateLibrary sfg_set(const SfgGateSpec& g01, const SfgGateSpec& g12,
                               const SfgGateSpec& g02) {
        for (const SfgGateSpec* g : {&g01, &g12, &g02})
            if (!g->j_ghz)
                throw std::invalid_argument("GateLibrary: sfg gates need a J binding");
        GateLibrary lib;
        lib.ideal_cp = false;
        lib.gates = {g01, g12, g02};
        return lib;
    }

    static std::string ref_name(int pair_index) { return "g" + std::to_string(pair_index + 1); }

    GateOp make_two_qubit(int pair_index) const {
        const auto [qa, qb] = pairs[pair_index];
        if (ideal_cp) return make_cp(qa, qb);
        return make_sfg(ref_name(pair_index), qa, qb);
    }

    std::map<std::string, SfgGateSpec> bindings() const {
        std::map<std::string, SfgGateSpec> b;
        if (!ideal_cp)
            for (int k = 0; k < 3; ++k) b[ref_name(k)] = gates[k];
        return b;
    }
};

struct GpConfig {
    int PopL = 500;
    double CrossProb = 0.35;
    double MutProb = 0.64;
    double ElitProb = 0.01;
    int TQmax = 3;
    int max_generations = 300;
    double fitness_threshold = 1.0 - 1e-9;
    AngleMode angle_mode = AngleMode::grid_pi_over_8;
    GateLibrary library;
    std::uint64_t rng_seed = 1;

    void validate() const {
        if (PopL < 2) throw std::invalid_argument("GpConfig: PopL must be >= 2");
        if (TQmax < 3 || TQmax > 20)
            throw std::invalid_argument("GpConfig: TQmax must be in [3, 20]");
        if (std::abs(CrossProb + MutProb + ElitProb - 1.0) > 1e-12)
            throw std::invalid_argument("GpConfig: CrossProb + MutProb + ElitProb must sum to 1");
        if (CrossProb < 0 || MutProb < 0 || ElitProb < 0)
            throw std::invalid_argument("GpConfig: probabilities must be >= 0");
        if (fitness_threshold <= 0 || fitness_threshold > 1)
            throw std::invalid_argument("GpConfig: fitness_threshold must be in (0, 1]");
        if (max_generations < 0)
            throw std::invalid_argument("GpConfig: max_generations must be >= 0");
    }
};

struct Individual {
    Circuit circuit;
    double fitness = 0.0;
};

namespace detail {

inline int uniform_int(Rng& rng, int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double draw_angle(AngleMode mode, Rng& rng) {
    if (mode == AngleMode::grid_pi_over_8) return uniform_int(rng, -8, 8) * kPi / 8.0;
    return uniform_real(rng, -kPi, kPi);
}

// one op drawn uniformly from {RX, RZ, PHI, TQ1, TQ2, TQ3}; a two-qubit
// draw at the cap is rejected and redrawn
inline GateOp draw_op(const GpConfig& cfg, Rng& rng, int two_qubit_count) {
    for (;;) {
        const int pick = uniform_int(rng, 0, 5);
        if (pick < 3) {
            const GateKind kind = pick == 0 ? GateKind::RX : pick == 1 ? GateKind::RZ
                                                                       : GateKind::PHI;
            const int q = uniform_int(rng, 0, 2);
            return make_rotation(kind, q, draw_angle(cfg.angle_mode, rng));
        }
        if (two_qubit_count < cfg.TQmax) return cfg.library.make_two_qubit(pick - 3);
    }
}

}  // namespace detail

// circuits produced by the engine stay within 2 * TQmax total ops; without a
// total bound, fitness-driven growth of rotation chains dominates the search
inline int max_ops(const GpConfig& cfg) { return 2 * cfg.TQmax; }

inline Circuit random_circuit(const GpConfig& cfg, Rng& rng) {
    Circuit c;
    c.bindings = cfg.library.bindings();
    const int len = detail::uniform_int(rng, 1, max_ops(cfg));
    int tq = 0;
    for (int k = 0; k < len; ++k) {
        GateOp op = detail::draw_op(cfg, rng, tq);
        if (op.is_two_qubit()) ++tq;
        c.ops.push_back(std::move(op));
    }
    return c;
}

enum class MutationKind { remove, insert, exchange, perturb };

inline MutationKind draw_mutation_kind(Rng& rng) {
    return static_cast<MutationKind>(detail::uniform_int(rng, 0, 3));
}

inline Circuit apply_mutation(const Circuit& c, MutationKind kind, const GpConfig& cfg,
                              Rng& rng) {
    Circuit out = c;
    const int len = static_cast<int>(out.ops.size());
    switch (kind) {
        case MutationKind::remove: {
            const int pos = detail::uniform_int(rng, 0, len - 1);
            out.ops.erase(out.ops.begin() + pos);
            break;
        }
        case MutationKind::insert: {
            const int pos = detail::uniform_int(rng, 0, len);
            GateOp op = detail::draw_op(cfg, rng, out.two_qubit_count());
            out.ops.insert(out.ops.begin() + pos, std::move(op));
            break;
        }
        case MutationKind::exchange: {
            const int pos = detail::uniform_int(rng, 0, len - 1);
            const int others = out.two_qubit_count() - (out.ops[pos].is_two_qubit() ? 1 : 0);
            out.ops[pos] = detail::draw_op(cfg, rng, others);
            break;
        }
        case MutationKind::perturb: {
            const int pos = detail::uniform_int(rng, 0, len - 1);
            GateOp& op = out.ops[pos];
            if (op.is_two_qubit()) {
                const int reps = op.reps;
                op = cfg.library.make_two_qubit(detail::uniform_int(rng, 0, 2));
                op.reps = reps;
            } else if (op.is_rotation()) {
                op.angle = detail::draw_angle(cfg.angle_mode, rng);
            } else {
                op.q0 = detail::uniform_int(rng, 0, 2);
            }
            break;
        }
    }
    return out;
}

// one of the four edits, chosen uniformly; an empty circuit only admits
// insertion, a full-length one excludes it
inline Circuit mutate(const Circuit& c, const GpConfig& cfg, Rng& rng) {
    if (c.ops.empty()) return apply_mutation(c, MutationKind::insert, cfg, rng);
    MutationKind kind = draw_mutation_kind(rng);
    while (kind == MutationKind::insert &&
           static_cast<int>(c.ops.size()) >= max_ops(cfg))
        kind = draw_mutation_kind(rng);
    return apply_mutation(c, kind, cfg, rng);
}

// prefix of a up to cut_a + suffix of b from cut_b; trailing ops dropped
// while the two-qubit count or the total length exceeds its cap
inline Circuit crossover_at(const Circuit& a, const Circuit& b, int cut_a, int cut_b,
                            int tq_max) {
    Circuit child;
    child.bindings = a.bindings;
    child.bindings.insert(b.bindings.begin(), b.bindings.end());
    child.ops.assign(a.ops.begin(), a.ops.begin() + cut_a);
    child.ops.insert(child.ops.end(), b.ops.begin() + cut_b, b.ops.end());
    while (child.two_qubit_count() > tq_max ||
           static_cast<int>(child.ops.size()) > 2 * tq_max)
        child.ops.pop_back();
    return child;
}

inline Circuit crossover(const Circuit& a, const Circuit& b, int tq_max, Rng& rng) {
    const int cut_a = detail::uniform_int(rng, 0, static_cast<int>(a.ops.size()));
    const int cut_b = detail::uniform_int(rng, 0, static_cast<int>(b.ops.size()));
    return crossover_at(a, b, cut_a, cut_b, tq_max);
}

// Fitness-proportionate selection with `count` equally spaced pointers and a
// single uniform offset; expected copies of i are count * f_i / sum(f).
// All-zero fitness degrades to uniform weights.
inline std::vector<std::size_t> select_sus(const std::vector<Individual>& pop, int count,
                                           Rng& rng) {
    if (pop.empty() || count <= 0) return {};
    std::vector<double> w(pop.size());
    double total = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (pop[i].fitness < 0.0)
            throw std::invalid_argument("select_sus: fitness must be >= 0");
        total += pop[i].fitness;
        w[i] = pop[i].fitness;
    }
    if (total <= 0.0) {
        std::fill(w.begin(), w.end(), 1.0);
        total = static_cast<double>(pop.size());
    }
    const double spacing = total / count;
    double pointer = detail::uniform_real(rng, 0.0, spacing);
    std::vector<std::size_t> picks;
    picks.reserve(count);
    std::size_t i = 0;
    double cumulative = w[0];
    for (int k = 0; k < count; ++k) {
        while (cumulative < pointer && i + 1 < pop.size()) cumulative += w[++i];
        picks.push_back(i);
        pointer += spacing;
    }
    return picks;
}

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    int best_length = 0;
    int best_two_qubit_count = 0;
};

struct EvolveResult {
    Individual best;
    std::vector<GenerationStats> history;
    int generations_run = 0;
    bool reached_threshold = false;
};

using GenerationObserver = std::function<void(int, const std::vector<Individual>&)>;

namespace detail {

// fitness descending; ties favor shorter circuits, then fewer two-qubit ops
inline void sort_population(std::vector<Individual>& pop) {
    std::stable_sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
        if (a.fitness != b.fitness) return a.fitness > b.fitness;
        if (a.circuit.ops.size() != b.circuit.ops.size())
            return a.circuit.ops.size() < b.circuit.ops.size();
        return a.circuit.two_qubit_count() < b.circuit.two_qubit_count();
    });
}

using CMat8 = Eigen::Matrix<Complex, 8, 8>;
using CMat4 = Eigen::Matrix<Complex, 4, 4>;

// Allocation-free fitness evaluation for the synthesis loop: gates are
// applied as in-place row transforms on a fixed-size accumulator. Agrees
// with average_fidelity(target, circuit_unitary(c)) to roundoff.
class FitnessEvaluator {
  public:
    FitnessEvaluator(const GpConfig& cfg, const CMat& target) : target_(target) {
        for (int k = 0; k < 3; ++k)
            gate4_[k] = cfg.library.ideal_cp ? CMat4(cp()) : CMat4(sfg_unitary(cfg.library.gates[k]));
    }

    double operator()(const Circuit& c) const {
        CMat8 u = CMat8::Identity();
        for (const GateOp& op : c.ops) {
            switch (op.kind) {
                case GateKind::RX: apply_single(u, rx(op.angle), op.q0); break;
                case GateKind::RZ: apply_single(u, rz(op.angle), op.q0); break;
                case GateKind::PHI: apply_single(u, phi(op.angle), op.q0); break;
                case GateKind::H: apply_single(u, hadamard(), op.q0); break;
                case GateKind::CP:
                case GateKind::SFG: {
                    const CMat4 g = pair_gate(op);
                    for (int rep = 0; rep < op.reps; ++rep) apply_pair(u, g, op.q0, op.q1);
                    break;
                }
            }
        }
        const double overlap = std::abs(target_.conjugate().cwiseProduct(u).sum()) / 8.0;
        return overlap * overlap;
    }

  private:
    CMat4 pair_gate(const GateOp& op) const {
        for (int k = 0; k < 3; ++k) {
            const auto [qa, qb] = GateLibrary::pairs[k];
            if (op.q0 == qa && op.q1 == qb) return gate4_[k];
        }
        // pair outside the library layout (parsed circuits): build directly
        if (op.kind == GateKind::CP) return CMat4(cp());
        throw std::runtime_error("FitnessEvaluator: op does not match the gate library");
    }

    static void apply_single(CMat8& u, const CMat& g, int q) {
        const int bit = 1 << q;
        const Complex g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
        for (int c = 0; c < 8; ++c) {
            for (int r0 = 0; r0 < 8; ++r0) {
                if (r0 & bit) continue;
                const int r1 = r0 | bit;
                const Complex a = u(r0, c), b = u(r1, c);
                u(r0, c) = g00 * a + g01 * b;
                u(r1, c) = g10 * a + g11 * b;
            }
        }
    }

    static void apply_pair(CMat8& u, const CMat4& g, int qa, int qb) {
        const int qc = 3 - qa - qb;
        for (int c = 0; c < 8; ++c) {
            for (int s = 0; s < 2; ++s) {
                int rows[4];
                for (int i = 0; i < 4; ++i)
                    rows[i] = ((i >> 1) << qa) | ((i & 1) << qb) | (s << qc);
                Complex v[4];
                for (int i = 0; i < 4; ++i) v[i] = u(rows[i], c);
                for (int i = 0; i < 4; ++i)
                    u(rows[i], c) = g(i, 0) * v[0] + g(i, 1) * v[1] + g(i, 2) * v[2] + g(i, 3) * v[3];
            }
        }
    }

    CMat8 target_;
    std::array<CMat4, 3> gate4_;
};

inline Individual evaluate(Circuit circ, const FitnessEvaluator& fitness) {
    Individual ind;
    ind.circuit = std::move(circ);
    ind.fitness = fitness(ind.circuit);
    return ind;
}

inline GenerationStats stats_of(int gen, const std::vector<Individual>& pop) {
    GenerationStats st;
    st.generation = gen;
    st.best_fitness = pop.front().fitness;
    double sum = 0.0;
    for (const Individual& ind : pop) sum += ind.fitness;
    st.mean_fitness = sum / static_cast<double>(pop.size());
    st.best_length = static_cast<int>(pop.front().circuit.ops.size());
    st.best_two_qubit_count = pop.front().circuit.two_qubit_count();
    return st;
}

}  // namespace detail

inline EvolveResult evolve(const GpConfig& cfg, const CMat& target,
                           const GenerationObserver& observer = {}) {
    cfg.validate();
    if (target.rows() != 8 || target.cols() != 8 || !is_unitary(target, 1e-9))
        throw std::invalid_argument("evolve: target must be a unitary 8x8 matrix");

    const int n_elite = static_cast<int>(std::ceil(cfg.ElitProb * cfg.PopL));
    const int n_cross = static_cast<int>(std::ceil(cfg.CrossProb * cfg.PopL));
    const int n_mut = cfg.PopL - n_elite - n_cross;
    if (n_mut < 0)
        throw std::invalid_argument("evolve: elite + crossover counts exceed the population");

    const detail::FitnessEvaluator fitness(cfg, target);
    Rng rng(cfg.rng_seed);
    std::vector<Individual> pop;
    pop.reserve(cfg.PopL);
    for (int k = 0; k < cfg.PopL; ++k)
        pop.push_back(detail::evaluate(clean(random_circuit(cfg, rng)), fitness));
    detail::sort_population(pop);

    EvolveResult res;
    res.history.push_back(detail::stats_of(0, pop));
    if (observer) observer(0, pop);

    int gen = 0;
    while (pop.front().fitness < cfg.fitness_threshold && gen < cfg.max_generations) {
        ++gen;
        const std::vector<std::size_t> parents = select_sus(pop, 2 * n_cross + n_mut, rng);
        std::vector<Individual> next;
        next.reserve(cfg.PopL);
        for (int k = 0; k < n_elite; ++k) next.push_back(pop[k]);
        for (int k = 0; k < n_cross; ++k) {
            const Circuit& a = pop[parents[2 * k]].circuit;
            const Circuit& b = pop[parents[2 * k + 1]].circuit;
            next.push_back(detail::evaluate(clean(crossover(a, b, cfg.TQmax, rng)), fitness));
        }
        for (int k = 0; k < n_mut; ++k) {
            const Circuit& a = pop[parents[2 * n_cross + k]].circuit;
            next.push_back(detail::evaluate(clean(mutate(a, cfg, rng)), fitness));
        }
        pop = std::move(next);
        detail::sort_population(pop);
        res.history.push_back(detail::stats_of(gen, pop));
        if (observer) observer(gen, pop);
    }

    res.best = pop.front();
    res.generations_run = gen;
    res.reached_threshold = pop.front().fitness >= cfg.fitness_threshold;
    return res;
}

// ---- config file: `key = value` per line, keys exactly the field names ----

inline GateLibrary parse_gate_library(const std::string& value);

inline GpConfig parse_gp_config(std::istream& in, GpConfig cfg = {}) {
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "PopL") cfg.PopL = std::stoi(val);
            else if (key == "CrossProb") cfg.CrossProb = std::stod(val);
            else if (key == "MutProb") cfg.MutProb = std::stod(val);
            else if (key == "ElitProb") cfg.ElitProb = std::stod(val);
            else if (key == "TQmax") cfg.TQmax = std::stoi(val);
            else if (key == "max_generations") cfg.max_generations = std::stoi(val);
            else if (key == "fitness_threshold") cfg.fitness_threshold = std::stod(val);
            else if (key == "angle_mode") cfg.angle_mode = angle_mode_from_string(val);
            else if (key == "gate_library") cfg.library = parse_gate_library(val);
            else if (key == "rng_seed") cfg.rng_seed = std::stoull(val);
            else
                throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " +
                                        e.what());
        }
    }
    return cfg;
}

// "cp" or "sfg:M/N/branch/J,M/N/branch/J,M/N/branch/J" (pairs (0,1),(1,2),(0,2))
inline GateLibrary parse_gate_library(const std::string& value) {
    if (value == "cp") return GateLibrary::cp_set();
    if (value.rfind("sfg:", 0) != 0)
        throw std::invalid_argument("gate_library must be 'cp' or 'sfg:...'");
    std::vector<SfgGateSpec> specs;
    std::istringstream list(value.substr(4));
    std::string item;
    while (std::getline(list, item, ',')) {
        std::istringstream fields(item);
        std::string m_s, n_s, br_s, j_s;
        if (!std::getline(fields, m_s, '/') || !std::getline(fields, n_s, '/') ||
            !std::getline(fields, br_s, '/') || !std::getline(fields, j_s))
            throw std::invalid_argument("gate_library entry '" + item +
                                        "' is not M/N/branch/J");
        specs.push_back(
            bind_physical(sfg_params(std::stoi(m_s), std::stoi(n_s), branch_from_string(br_s)),
                          std::stod(j_s)));
    }
    if (specs.size() != 3)
        throw std::invalid_argument("gate_library needs exactly 3 sfg entries");
    return GateLibrary::sfg_set(specs[0], specs[1], specs[2]);
}

inline void write_history_csv(std::ostream& os, const std::vector<GenerationStats>& history) {
    os << "generation,best_fitness,mean_fitness,best_length,best_two_qubit_count\n";
    for (const GenerationStats& st : history) {
        os << st.generation << ',' << fmt_g9(st.best_fitness) << ',' << fmt_g9(st.mean_fitness)
           << ',' << st.best_length << ',' << st.best_two_qubit_count << '\n';
    }
}

}  // namespace sfg
