#include "aprep/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "aprep/adaptive_prep.hpp"
#include "aprep/error.hpp"
#include "aprep/fidelity.hpp"

namespace aprep {

namespace {

constexpr double kTol = 1e-12;

void sv_gate(StateVector &s, const GateOp &g) {
    s.apply(g.gate, std::span<const uint32_t>(g.qubits.data(), g.arity()));
}

}  // namespace

ExecutionResult execute_statevector(const AdaptiveCircuit &c, StateVector &state, ShotRng &rng) {
    if (state.num_qubits() != c.num_qubits()) throw InvalidArgument("state does not match circuit qubit count");
    ExecutionResult res;
    res.cbits.assign(c.num_cbits(), 0);
    const auto &prog = c.instructions();
    for (size_t i = 0; i < prog.size(); ++i) {
        std::visit(
            [&](const auto &op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, GateOp>) {
                    sv_gate(state, op);
                } else if constexpr (std::is_same_v<T, MeasureOp>) {
                    auto m = state.measure(op.qubit, Basis::kZ, rng);
                    res.cbits[op.cbit] = m.bit();
                    res.measurements.push_back({i, op.qubit, op.cbit, m, m.bit()});
                } else if constexpr (std::is_same_v<T, ResetOp>) {
                    if (state.measure(op.qubit, Basis::kZ, rng).value < 0) {
                        uint32_t q = op.qubit;
                        state.apply(Gate::kX, std::span<const uint32_t>(&q, 1));
                    }
                } else if constexpr (std::is_same_v<T, CondGateOp>) {
                    if (res.cbits[op.cbit] == op.value) {
                        sv_gate(state, op.gate);
                        res.fired_conditionals.push_back(i);
                    }
                } else if constexpr (std::is_same_v<T, AssignOp>) {
                    uint8_t v = 0;
                    for (const auto &t : op.terms) v ^= t.is_constant ? static_cast<uint8_t>(t.value) : res.cbits[t.value];
                    res.cbits[op.cbit] = v;
                }
            },
            prog[i]);
    }
    return res;
}

std::vector<double> measurement_marginals(const StateVector &state, const std::vector<uint32_t> &qubits) {
    std::vector<double> table(size_t{1} << qubits.size(), 0.0);
    auto amps = state.amplitudes();
    for (size_t idx = 0; idx < amps.size(); ++idx) {
        size_t key = 0;
        for (size_t k = 0; k < qubits.size(); ++k) key |= ((idx >> qubits[k]) & 1u) << k;
        table[key] += std::norm(amps[idx]);
    }
    return table;
}

double total_variation(const std::vector<double> &p, const std::vector<double> &q) {
    if (p.size() != q.size()) throw InvalidArgument("distributions differ in size");
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

int max_oracle_length() {
    int best = 1;
    for (int L = 1; L < 64; L += 2) {
        if (build_strip(L).num_qubits() > StateVector::kMaxQubits) break;
        best = L;
    }
    return best;
}

namespace {

// Draws the block sequentially from the exact joint table, one rng bit per fair
// coin, the same rule a sequence of single-qubit measurements follows.
size_t sample_from_marginals(const std::vector<double> &table, size_t m, ShotRng &rng) {
    size_t prefix = 0;
    for (size_t k = 0; k < m; ++k) {
        double mass = 0.0, ones = 0.0;
        for (size_t key = 0; key < table.size(); ++key) {
            if ((key & ((size_t{1} << k) - 1)) != prefix) continue;
            mass += table[key];
            if ((key >> k) & 1u) ones += table[key];
        }
        double p1 = ones / mass;
        bool bit;
        if (p1 < kTol) {
            bit = false;
        } else if (p1 > 1.0 - kTol) {
            bit = true;
        } else if (std::abs(p1 - 0.5) < kTol) {
            bit = rng.next_bit();
        } else {
            bit = rng.next_double() < p1;
        }
        if (bit) prefix |= size_t{1} << k;
    }
    return prefix;
}

void enumerate_branches(const StabilizerTableau &t, const std::vector<uint32_t> &qubits, size_t k, size_t key,
                        double prob, std::vector<double> &out) {
    if (k == qubits.size()) {
        out[key] += prob;
        return;
    }
    auto z = PauliString::single(t.num_qubits(), qubits[k], 'Z');
    for (int value : {1, -1}) {
        StabilizerTableau branch = t;
        auto r = branch.measure_forced(z, value);
        if (r.deterministic && r.value != value) continue;
        size_t next = value < 0 ? key | (size_t{1} << k) : key;
        enumerate_branches(branch, qubits, k + 1, next, r.deterministic ? prob : prob * 0.5, out);
        if (r.deterministic) break;
    }
}

struct Comparison {
    size_t compared = 0;
    size_t deterministic = 0;
    size_t random = 0;
};

void compare_records(const ExecutionResult &a, const ExecutionResult &b, Comparison &cmp) {
    if (a.measurements.size() != b.measurements.size()) {
        ++cmp.deterministic;
        return;
    }
    for (size_t i = 0; i < a.measurements.size(); ++i) {
        const auto &x = a.measurements[i].outcome;
        const auto &y = b.measurements[i].outcome;
        ++cmp.compared;
        if (x.deterministic != y.deterministic || (x.deterministic && x.value != y.value)) {
            ++cmp.deterministic;
        } else if (x.value != y.value) {
            ++cmp.random;
        }
    }
}

// Product of projection probabilities onto the +1 space of each generator.
double projector_expectation(StateVector s, const std::vector<PauliString> &generators) {
    double f = 1.0;
    for (const auto &g : generators) {
        f *= s.project(g, 1);
        if (f < 1e-300) return 0.0;
    }
    return f;
}

AdaptiveCircuit random_clifford_program(size_t n, ShotRng &rng) {
    AdaptiveCircuit c;
    c.add_qreg("q", static_cast<uint32_t>(n));
    c.add_creg("c", static_cast<uint32_t>(n));
    const Gate singles[] = {Gate::kH, Gate::kS, Gate::kX, Gate::kZ};
    for (int step = 0; step < 80; ++step) {
        uint32_t a = static_cast<uint32_t>(rng.below(n));
        switch (rng.below(8)) {
            case 0: case 1: case 2: c.gate(singles[rng.below(4)], a); break;
            case 3: case 4: case 5: {
                if (n < 2) break;
                uint32_t b = static_cast<uint32_t>(rng.below(n - 1));
                if (b >= a) ++b;
                c.cx(a, b);
                break;
            }
            case 6: c.measure(a, a); break;
            default: {
                uint32_t b = static_cast<uint32_t>(rng.below(n));
                c.push(CondGateOp{a, 1, GateOp{Gate::kX, {b, 0}}});
                break;
            }
        }
    }
    for (uint32_t q = 0; q < n; ++q) c.measure(q, q);
    return c;
}

AdaptiveCircuit strip_conditionals(const AdaptiveCircuit &c) {
    AdaptiveCircuit out;
    for (const auto &r : c.qregs()) out.add_qreg(r.name, r.width);
    for (const auto &r : c.cregs()) out.add_creg(r.name, r.width);
    for (const auto &inst : c.instructions())
        if (!std::holds_alternative<CondGateOp>(inst)) out.push(inst);
    return out;
}

}  // namespace

OracleReport oracle_check(const OracleOptions &opt) {
    if (opt.length < 1 || opt.length % 2 == 0) throw InvalidArgument("length must be a positive odd integer");
    if (opt.length > max_oracle_length()) {
        throw InvalidArgument("length " + std::to_string(opt.length) + " exceeds the oracle ceiling of " +
                              std::to_string(StateVector::kMaxQubits) + " qubits (max length " +
                              std::to_string(max_oracle_length()) + ")");
    }
    if (opt.shots == 0) throw InvalidArgument("shots must be positive");

    const CodeLayout layout = build_strip(opt.length);
    const size_t n = layout.num_qubits();
    const auto target = plus_state_generators(layout);
    const PrepRunner runner(layout, NoiseModel{});
    const AdaptiveCircuit &prep = runner.circuit();

    OracleReport rep;
    rep.length = opt.length;
    rep.num_qubits = n;
    rep.shots = opt.shots;
    rep.seed = opt.seed;
    Comparison cmp;

    auto tableau_phase_bug = [&](StabilizerTableau &t) {
        if (opt.inject_phase_bug) t.z(0);
    };

    // Syndrome law: state just before the ancilla measurements.
    const auto &prog = prep.instructions();
    size_t first_measure = 0;
    while (first_measure < prog.size() && !std::holds_alternative<MeasureOp>(prog[first_measure])) ++first_measure;
    std::vector<uint32_t> measured;
    for (size_t i = first_measure; i < prog.size() && std::holds_alternative<MeasureOp>(prog[i]); ++i)
        measured.push_back(std::get<MeasureOp>(prog[i]).qubit);

    AdaptiveCircuit prefix;
    for (const auto &r : prep.qregs()) prefix.add_qreg(r.name, r.width);
    for (const auto &r : prep.cregs()) prefix.add_creg(r.name, r.width);
    for (size_t i = 0; i < first_measure; ++i) prefix.push(prog[i]);

    StateVector pre_sv(n);
    StabilizerTableau pre_t(n);
    {
        ShotRng r1(opt.seed, 0, Stream::kCircuitSampling), r2(opt.seed, 0, Stream::kCircuitSampling);
        execute_statevector(prefix, pre_sv, r1);
        execute(prefix, pre_t, r2);
        tableau_phase_bug(pre_t);
    }
    const auto oracle_table = measurement_marginals(pre_sv, measured);
    std::vector<double> tableau_exact(oracle_table.size(), 0.0);
    enumerate_branches(pre_t, measured, 0, 0, 1.0, tableau_exact);
    rep.tvd_exact = total_variation(oracle_table, tableau_exact);

    const size_t m = measured.size();
    std::vector<double> hist_t(oracle_table.size(), 0.0), hist_o(oracle_table.size(), 0.0),
        hist_i(oracle_table.size(), 0.0);
    for (uint64_t s = 0; s < opt.shots; ++s) {
        StabilizerTableau t = pre_t;
        ShotRng rt(opt.seed, s, Stream::kMeasurement);
        size_t key = 0;
        for (size_t k = 0; k < m; ++k)
            if (t.measure_qubit(measured[k], Basis::kZ, rt).bit()) key |= size_t{1} << k;
        hist_t[key] += 1.0;
        ShotRng ro(opt.seed, s, Stream::kMeasurement);
        hist_o[sample_from_marginals(oracle_table, m, ro)] += 1.0;
        ShotRng ri(opt.seed ^ 0x9e3779b97f4a7c15ull, s, Stream::kCircuitSampling);
        hist_i[sample_from_marginals(oracle_table, m, ri)] += 1.0;
    }
    for (size_t k = 0; k < hist_t.size(); ++k) {
        hist_t[k] /= static_cast<double>(opt.shots);
        hist_o[k] /= static_cast<double>(opt.shots);
        hist_i[k] /= static_cast<double>(opt.shots);
    }
    rep.tvd_sampled = total_variation(hist_t, hist_o);
    rep.tvd_independent = total_variation(hist_t, hist_i);

    // End-to-end runs, with and without the feed-forward, plus an X readout of the data.
    StateVector ideal(n);
    for (const auto &g : target) ideal.project(g, 1);
    const AdaptiveCircuit open_loop = strip_conditionals(prep);
    for (unsigned run = 0; run < opt.full_runs; ++run) {
        for (const AdaptiveCircuit *circ : {&prep, &open_loop}) {
            StateVector sv(n);
            StabilizerTableau t(n);
            ShotRng ra(opt.seed, run, Stream::kMeasurement), rb(opt.seed, run, Stream::kMeasurement);
            auto res_sv = execute_statevector(*circ, sv, ra);
            auto res_t = execute(*circ, t, rb);
            tableau_phase_bug(t);
            compare_records(res_t, res_sv, cmp);
            double f_t = exact_fidelity(t, layout);
            double f_sv = projector_expectation(sv, target);
            rep.max_fidelity_diff = std::max(rep.max_fidelity_diff, std::abs(f_t - f_sv));
            if (circ == &prep) {
                rep.max_overlap_diff = std::max(rep.max_overlap_diff, std::abs(f_t - overlap(sv, ideal)));
            }
            ExecutionResult rd_t, rd_sv;
            for (uint32_t q = 0; q < layout.num_data(); ++q) {
                rd_t.measurements.push_back({0, q, 0, t.measure_qubit(q, Basis::kX, rb), false});
                rd_sv.measurements.push_back({0, q, 0, sv.measure(q, Basis::kX, ra), false});
            }
            compare_records(rd_t, rd_sv, cmp);
        }
    }

    // Random Clifford programs with mid-circuit measurement and feed-forward.
    const size_t rn = std::min<size_t>(n, 12);
    for (unsigned i = 0; i < opt.random_circuits; ++i) {
        ShotRng gen(opt.seed, i, Stream::kCircuitSampling);
        auto circ = random_clifford_program(rn, gen);
        StateVector sv(rn);
        StabilizerTableau t(rn);
        ShotRng ra(opt.seed, 1000000 + i, Stream::kMeasurement), rb(opt.seed, 1000000 + i, Stream::kMeasurement);
        auto res_sv = execute_statevector(circ, sv, ra);
        auto res_t = execute(circ, t, rb);
        compare_records(res_t, res_sv, cmp);
        rep.max_overlap_diff = std::max(rep.max_overlap_diff, std::abs(1.0 - overlap(StateVector::from_tableau(t), sv)));
    }

    rep.compared_outcomes = cmp.compared;
    rep.deterministic_mismatches = cmp.deterministic;
    rep.random_mismatches = cmp.random;
    rep.passed = rep.deterministic_mismatches == 0 && rep.random_mismatches == 0 && rep.tvd_sampled < 0.02 &&
                 rep.tvd_exact < 1e-9 && rep.max_fidelity_diff <= 1e-10 && rep.max_overlap_diff <= 1e-10;
    return rep;
}

nlohmann::json oracle_report_to_json(const OracleReport &r) {
    return {{"length", r.length},
            {"num_qubits", r.num_qubits},
            {"shots", r.shots},
            {"seed", r.seed},
            {"compared_outcomes", r.compared_outcomes},
            {"deterministic_mismatches", r.deterministic_mismatches},
            {"random_mismatches", r.random_mismatches},
            {"tvd_sampled", r.tvd_sampled},
            {"tvd_independent", r.tvd_independent},
            {"tvd_exact", r.tvd_exact},
            {"max_fidelity_diff", r.max_fidelity_diff},
            {"max_overlap_diff", r.max_overlap_diff},
            {"passed", r.passed}};
}

}  // namespace aprep
