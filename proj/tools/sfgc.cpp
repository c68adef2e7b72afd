// sfgc — synthesize and verify three-qubit circuits built from optically
// controlled two-qubit spin gates.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

#include "sfg/circuit.hpp"
#include "sfg/dj.hpp"
#include "sfg/format.hpp"
#include "sfg/gates.hpp"
#include "sfg/gp.hpp"
#include "sfg/search.hpp"
#include "sfg/weyl.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace sfg;

class Timer {
  public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    }

  private:
    using Clock = std::chrono::steady_clock;
    Clock::time_point start_ = Clock::now();
};

void print_kv(const std::string& key, const std::string& value) {
    std::cout << key << " = " << value << '\n';
}

void print_kv(const std::string& key, double value) { print_kv(key, fmt_g9(value)); }

void print_matrix(const CMat& u) {
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        std::cout << " ";
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            std::cout << " (" << fmt_g9(u(r, c).real()) << "," << fmt_g9(u(r, c).imag()) << ")";
        }
        std::cout << '\n';
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write to '" + path + "'");
    return out;
}

Circuit load_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read circuit file '" + path + "'");
    return parse_circuit(in);
}

// ---- gate ------------------------------------------------------------------

struct GateArgs {
    int m = 0, n = 0;
    std::string branch = "auto";
    std::optional<double> j_ghz;
    std::optional<double> b_mev;
};

int run_gate(const GateArgs& a) {
    Timer timer;
    std::optional<double> b_ghz;
    if (a.b_mev) b_ghz = energy_to_frequency(*a.b_mev);

    Branch branch = Branch::minus;
    if (a.branch == "auto") {
        if (a.j_ghz && b_ghz) branch = match_branch(a.m, a.n, *b_ghz / *a.j_ghz);
    } else {
        branch = branch_from_string(a.branch);
    }

    SfgGateSpec s = sfg_params(a.m, a.n, branch);
    if (a.j_ghz) s = bind_physical(s, *a.j_ghz);

    print_kv("command", "gate");
    std::cout << "M = " << s.m << "\nN = " << s.n << "\nbranch = " << to_string(s.branch)
              << '\n';
    print_kv("f", s.f);
    print_kv("JT", s.jt);
    print_kv("BT", s.bt);
    if (s.j_ghz) {
        print_kv("J_GHz", *s.j_ghz);
        print_kv("T_ns", *s.t_ns);
    }
    if (b_ghz) {
        print_kv("B_GHz", *b_ghz);
        if (a.j_ghz) print_kv("delta_f_rel", std::abs(s.f - *b_ghz / *a.j_ghz) / (*b_ghz / *a.j_ghz));
    }
    const CMat u = sfg_unitary(s);
    std::cout << "unitary:\n";
    print_matrix(u);
    const WeylPoint c = canonicalize(weyl_raw(s));
    print_kv("c1", c.c1);
    print_kv("c2", c.c2);
    print_kv("c3", c.c3);
    const MakhlinInvariants g = makhlin_sfg(s);
    std::cout << "G1 = (" << fmt_g9(g.g1.real()) << "," << fmt_g9(g.g1.imag()) << ")\n";
    print_kv("G2", g.g2);
    print_kv("perfect_entangler", std::string(is_perfect_entangler(c) ? "true" : "false"));
    print_kv("AF_vs_CP", average_fidelity(cp(), u));
    print_kv("wall_ms", timer.elapsed_ms());
    return 0;
}

// ---- sweep -----------------------------------------------------------------

int run_sweep(int m_max, int n_max, const std::string& out_path) {
    Timer timer;
    const SweepResult res = sweep_chamber(m_max, n_max);
    auto out = open_out(out_path);
    write_sweep_csv(out, res);
    print_kv("command", "sweep");
    std::cout << "M_max = " << m_max << "\nN_max = " << n_max << '\n';
    print_kv("gates", static_cast<double>(res.rows.size()));
    print_kv("skipped_pairs", static_cast<double>(res.skipped_pairs));
    print_kv("pe_fraction", res.pe_fraction);
    print_kv("out", out_path);
    print_kv("wall_ms", timer.elapsed_ms());
    return 0;
}

// ---- search ----------------------------------------------------------------

struct SearchArgs {
    bool fast = false;
    bool cp_mode = false;
    double j_ghz = 0.0;
    double b_mev = 0.0;
    double f_tol = 1e-3;
    int count = 1;
    double t_max = 10.0;
    double af_min = 0.99;
    int m_max = 500;
    int n_max = 500;
    std::string out_path;
};

int run_search(const SearchArgs& a) {
    Timer timer;
    const double b_ghz = energy_to_frequency(a.b_mev);
    std::vector<GateCandidate> rows;
    if (a.fast) {
        if (a.j_ghz <= 0.0) throw std::invalid_argument("search --fast needs --J > 0");
        rows = fastest_gates(a.j_ghz, b_ghz, a.f_tol, a.count);
    } else {
        rows = cp_approx_search(b_ghz, a.t_max, a.af_min, a.m_max, a.n_max);
    }
    print_kv("command", a.fast ? "search --fast" : "search --cp");
    print_kv("B_GHz", b_ghz);
    write_search_csv(std::cout, rows);
    if (!a.out_path.empty()) {
        auto out = open_out(a.out_path);
        write_search_csv(out, rows);
        print_kv("out", a.out_path);
    }
    print_kv("wall_ms", timer.elapsed_ms());
    if (rows.empty()) {
        std::cout << "no gate satisfied the filters\n";
        return 1;
    }
    return 0;
}

// ---- verify-table2 ---------------------------------------------------------

int run_verify_table2(const std::string& out_path, const std::string& catalog_path) {
    Timer timer;
    int failures = 0;
    std::array<int, 4> histogram{};
    std::ostringstream csv;
    csv << "hex,af,pass\n";
    char hx[8];
    for (const BalancedFunction& fn : function_catalog()) {
        const Circuit c = table2_circuit(fn.hex);
        const double af = average_fidelity(oracle_unitary(fn), circuit_unitary(c));
        const bool pass = std::abs(af - 1.0) <= 1e-9;
        if (!pass) ++failures;
        ++histogram[c.two_qubit_count()];
        std::snprintf(hx, sizeof hx, "%02X", fn.hex);
        std::cout << "f_" << hx << "  AF = " << fmt_g9(af) << "  " << (pass ? "pass" : "FAIL")
                  << '\n';
        csv << hx << ',' << fmt_g9(af) << ',' << (pass ? 1 : 0) << '\n';
    }
    std::cout << "two_qubit_histogram = (" << histogram[0] << "," << histogram[1] << ","
              << histogram[2] << "," << histogram[3] << ")\n";
    print_kv("failures", static_cast<double>(failures));
    if (!out_path.empty()) {
        open_out(out_path) << csv.str();
        print_kv("out", out_path);
    }
    if (!catalog_path.empty()) {
        auto out = open_out(catalog_path);
        write_catalog_csv(out);
        print_kv("catalog", catalog_path);
    }
    print_kv("wall_ms", timer.elapsed_ms());
    return failures == 0 ? 0 : 1;
}

// ---- synthesize ------------------------------------------------------------

struct SynthArgs {
    std::string target;
    std::string gates = "cp";
    std::string config_path;
    std::uint64_t seed = 1;
    bool seed_set = false;
    std::string out_path = "best.circ";
    std::string history_path = "history.csv";
};

std::uint8_t parse_hex_code(const std::string& s) {
    const unsigned long v = std::stoul(s, nullptr, 16);
    if (v >= 0x80 || !in_catalog(static_cast<std::uint8_t>(v)))
        throw std::invalid_argument("target '" + s + "' is not a catalog function code");
    return static_cast<std::uint8_t>(v);
}

int run_synthesize(const SynthArgs& a) {
    Timer timer;
    GpConfig cfg;
    cfg.library = parse_gate_library(a.gates);
    cfg.fitness_threshold = cfg.library.ideal_cp ? 1.0 - 1e-9 : 0.99;
    cfg.angle_mode =
        cfg.library.ideal_cp ? AngleMode::grid_pi_over_8 : AngleMode::continuous;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw std::invalid_argument("cannot read config '" + a.config_path + "'");
        cfg = parse_gp_config(in, cfg);
    }
    if (a.seed_set || a.config_path.empty()) cfg.rng_seed = a.seed;
    cfg.validate();

    CMat target;
    std::string target_desc;
    if (a.target.size() <= 2) {
        const std::uint8_t code = parse_hex_code(a.target);
        target = oracle_unitary(code);
        char hx[8];
        std::snprintf(hx, sizeof hx, "%02X", code);
        target_desc = std::string("oracle_") + hx;
    } else {
        target = circuit_unitary(load_circuit(a.target));
        target_desc = a.target;
    }

    const EvolveResult res = evolve(cfg, target);

    open_out(a.out_path) << serialize(res.best.circuit);
    auto hist = open_out(a.history_path);
    write_history_csv(hist, res.history);

    print_kv("command", "synthesize");
    print_kv("target", target_desc);
    print_kv("gate_library", a.gates);
    print_kv("seed", static_cast<double>(cfg.rng_seed));
    print_kv("generations", static_cast<double>(res.generations_run));
    print_kv("best_AF", res.best.fitness);
    print_kv("best_length", static_cast<double>(res.best.circuit.ops.size()));
    print_kv("best_two_qubit_count", static_cast<double>(res.best.circuit.two_qubit_count()));
    if (!cfg.library.ideal_cp) print_kv("two_qubit_time_ns", two_qubit_time(res.best.circuit));
    print_kv("reached_threshold", std::string(res.reached_threshold ? "true" : "false"));
    print_kv("out", a.out_path);
    print_kv("history", a.history_path);
    print_kv("wall_ms", timer.elapsed_ms());
    return 0;
}

// ---- dj --------------------------------------------------------------------

int run_dj(const std::string& function, const std::string& circuit_path) {
    Timer timer;
    CMat ideal_oracle;
    std::string desc;
    if (function == "constant") {
        ideal_oracle = identity(8);
        desc = "constant";
    } else {
        ideal_oracle = oracle_unitary(parse_hex_code(function));
        desc = "balanced_" + function;
    }

    CMat u_f = ideal_oracle;
    std::optional<double> time_ns;
    if (!circuit_path.empty()) {
        const Circuit c = load_circuit(circuit_path);
        u_f = circuit_unitary(c);
        time_ns = two_qubit_time(c);
    }

    const CVec out = dj_run(u_f);
    const CVec ideal_out = dj_run(ideal_oracle);
    const Classification cls = classify(out);

    print_kv("command", "dj");
    print_kv("function", desc);
    if (!circuit_path.empty()) print_kv("circuit", circuit_path);
    print_kv("p000", cls.p000);
    print_kv("classification", std::string(cls.balanced ? "balanced" : "constant"));
    print_kv("state_fidelity", state_fidelity(ideal_out, out));
    if (time_ns) print_kv("two_qubit_time_ns", *time_ns);
    print_kv("wall_ms", timer.elapsed_ms());
    return 0;
}

// ---- rep-compare -----------------------------------------------------------

// repetition diagnostic: the k-th matrix power against the gate with scaled
// integers (kM, kN) on the same branch
int run_rep_compare(int m, int n, int k, const std::string& branch) {
    Timer timer;
    const Branch br = branch_from_string(branch);
    const SfgGateSpec base = sfg_params(m, n, br);
    const SfgGateSpec scaled = sfg_params(k * m, k * n, br);
    const double af = average_fidelity(mat_power(sfg_unitary(base), k), sfg_unitary(scaled));
    print_kv("command", "rep-compare");
    std::cout << "M = " << m << "\nN = " << n << "\nk = " << k << "\nbranch = " << branch
              << '\n';
    print_kv("JT_power", k * base.jt);
    print_kv("JT_scaled", scaled.jt);
    print_kv("AF", af);
    print_kv("wall_ms", timer.elapsed_ms());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-qubit circuit synthesis with optically controlled spin gates"};
    app.require_subcommand(1);

    GateArgs gate_args;
    double gate_j = 0.0, gate_b = 0.0;
    auto* gate_cmd = app.add_subcommand("gate", "parameters, unitary and geometry of one gate");
    gate_cmd->add_option("M", gate_args.m, "first gate integer")->required();
    gate_cmd->add_option("N", gate_args.n, "second gate integer")->required();
    gate_cmd->add_option("--branch", gate_args.branch, "plus|minus|auto")
        ->check(CLI::IsMember({"plus", "minus", "auto"}));
    auto* gj = gate_cmd->add_option("--J", gate_j, "exchange strength in GHz");
    auto* gb = gate_cmd->add_option("--B", gate_b, "magnetic field in meV");

    int sweep_m = 0, sweep_n = 0;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "chamber sweep over the (M, N) grid");
    sweep_cmd->add_option("Mmax", sweep_m, "")->required();
    sweep_cmd->add_option("Nmax", sweep_n, "")->required();
    sweep_cmd->add_option("--out", sweep_out, "CSV output path")->required();

    SearchArgs search_args;
    auto* search_cmd = app.add_subcommand("search", "gate search for physical parameters");
    search_cmd->add_flag("--fast", search_args.fast, "fastest gates from convergents");
    search_cmd->add_flag("--cp", search_args.cp_mode, "CP-approximating gates from a grid scan");
    search_cmd->add_option("--J", search_args.j_ghz, "exchange strength in GHz");
    search_cmd->add_option("--B", search_args.b_mev, "magnetic field in meV")->required();
    search_cmd->add_option("--ftol", search_args.f_tol, "relative f tolerance (fast)");
    search_cmd->add_option("--count", search_args.count, "number of gates to return (fast)");
    search_cmd->add_option("--Tmax", search_args.t_max, "max gate time in ns (cp)");
    search_cmd->add_option("--afmin", search_args.af_min, "min fidelity vs CP (cp)");
    search_cmd->add_option("--Mmax", search_args.m_max, "grid bound (cp)");
    search_cmd->add_option("--Nmax", search_args.n_max, "grid bound (cp)");
    search_cmd->add_option("--out", search_args.out_path, "CSV output path");

    std::string vt_out, vt_catalog;
    auto* verify_cmd =
        app.add_subcommand("verify-table2", "replay the reference circuit catalog");
    verify_cmd->add_option("--out", vt_out, "CSV of per-function results");
    verify_cmd->add_option("--catalog", vt_catalog, "CSV export of the function catalog");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synthesize", "evolve a circuit for a target");
    synth_cmd->add_option("--target", synth_args.target, "function hex code or circuit file")
        ->required();
    synth_cmd->add_option("--gates", synth_args.gates,
                          "cp | sfg:M/N/branch/J,M/N/branch/J,M/N/branch/J");
    synth_cmd->add_option("--config", synth_args.config_path, "key = value config file");
    auto* seed_opt = synth_cmd->add_option("--seed", synth_args.seed, "RNG seed");
    synth_cmd->add_option("--out", synth_args.out_path, "best circuit output");
    synth_cmd->add_option("--history", synth_args.history_path, "per-generation CSV");

    std::string dj_function, dj_circuit;
    auto* dj_cmd = app.add_subcommand("dj", "run the three-qubit decision pipeline");
    dj_cmd->add_option("function", dj_function, "function hex code or 'constant'")->required();
    dj_cmd->add_option("--circuit", dj_circuit, "circuit file implementing the oracle");

    int rep_m = 0, rep_n = 0, rep_k = 1;
    std::string rep_branch = "minus";
    auto* rep_cmd = app.add_subcommand("rep-compare",
                                       "matrix power vs scaled-integer gate diagnostic");
    rep_cmd->add_option("M", rep_m, "")->required();
    rep_cmd->add_option("N", rep_n, "")->required();
    rep_cmd->add_option("k", rep_k, "repetition count")->required();
    rep_cmd->add_option("--branch", rep_branch, "plus|minus")
        ->check(CLI::IsMember({"plus", "minus"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gate_cmd->parsed()) {
            if (*gj) gate_args.j_ghz = gate_j;
            if (*gb) gate_args.b_mev = gate_b;
            return run_gate(gate_args);
        }
        if (sweep_cmd->parsed()) return run_sweep(sweep_m, sweep_n, sweep_out);
        if (search_cmd->parsed()) {
            if (search_args.fast == search_args.cp_mode)
                throw std::invalid_argument("search needs exactly one of --fast / --cp");
            return run_search(search_args);
        }
        if (verify_cmd->parsed()) return run_verify_table2(vt_out, vt_catalog);
        if (synth_cmd->parsed()) {
            synth_args.seed_set = seed_opt->count() > 0;
            return run_synthesize(synth_args);
        }
        if (dj_cmd->parsed()) return run_dj(dj_function, dj_circuit);
        if (rep_cmd->parsed()) return run_rep_compare(rep_m, rep_n, rep_k, rep_branch);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
