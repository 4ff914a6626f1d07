#include <gtest/gtest.h>

#include "aprep/adaptive_prep.hpp"
#include "aprep/error.hpp"
#include "aprep/oracle.hpp"

using namespace aprep;

TEST(Oracle, SmallStripsPass) {
    for (int L : {1, 3}) {
        OracleOptions o;
        o.length = L;
        o.shots = 2000;
        o.seed = 4;
        auto r = oracle_check(o);
        EXPECT_TRUE(r.passed) << oracle_report_to_json(r).dump();
        EXPECT_EQ(r.deterministic_mismatches, 0u);
        EXPECT_EQ(r.random_mismatches, 0u);
        EXPECT_LT(r.tvd_exact, 1e-9);
        EXPECT_GT(r.compared_outcomes, 0u);
    }
}

TEST(Oracle, CatchesAPhaseBug) {
    OracleOptions o;
    o.length = 3;
    o.shots = 500;
    o.inject_phase_bug = true;
    EXPECT_FALSE(oracle_check(o).passed);
}

TEST(Oracle, Ceiling) {
    EXPECT_EQ(max_oracle_length(), 5);
    OracleOptions o;
    o.length = 7;
    EXPECT_THROW(oracle_check(o), InvalidArgument);
}

TEST(Oracle, TotalVariation) {
    EXPECT_DOUBLE_EQ(total_variation({0.5, 0.5}, {1, 0}), 0.5);
    EXPECT_DOUBLE_EQ(total_variation({0.25, 0.75}, {0.25, 0.75}), 0.0);
    EXPECT_THROW(total_variation({1}, {0.5, 0.5}), InvalidArgument);
}

TEST(Oracle, Marginals) {
    StateVector sv(3);
    std::array<uint32_t, 1> q0{0};
    sv.apply(Gate::kH, q0);
    auto m = measurement_marginals(sv, {0, 1});
    ASSERT_EQ(m.size(), 4u);
    EXPECT_NEAR(m[0], 0.5, 1e-15);
    EXPECT_NEAR(m[1], 0.5, 1e-15);
    EXPECT_NEAR(m[2], 0.0, 1e-15);
    EXPECT_NEAR(m[3], 0.0, 1e-15);
}

TEST(Oracle, PrepSyndromeMarginalsAreUniform) {
    auto l = build_strip(3);
    auto c = build_prep_circuit(l);
    AdaptiveCircuit pre;
    for (const auto &r : c.qregs()) pre.add_qreg(r.name, r.width);
    for (const auto &r : c.cregs()) pre.add_creg(r.name, r.width);
    for (const auto &inst : c.instructions()) {
        if (std::holds_alternative<MeasureOp>(inst)) break;
        pre.push(inst);
    }
    StateVector sv(l.num_qubits());
    ShotRng rng(1, 0);
    execute_statevector(pre, sv, rng);
    std::vector<uint32_t> anc;
    for (const auto &a : l.ancillas) anc.push_back(a.index);
    auto m = measurement_marginals(sv, anc);
    for (double p : m) EXPECT_NEAR(p, 1.0 / m.size(), 1e-12);
}

TEST(Oracle, StatevectorExecutionFollowsTheSharedStream) {
    auto c = parse_circuit("qreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q[0] -> c[0];\n"
                           "measure q[1] -> c[1];\n");
    for (uint64_t s = 0; s < 20; ++s) {
        StateVector sv(2);
        StabilizerTableau t(2);
        ShotRng r1(3, s), r2(3, s);
        auto a = execute_statevector(c, sv, r1);
        auto b = execute(c, t, r2);
        EXPECT_EQ(a.cbits, b.cbits);
        EXPECT_EQ(a.cbits[0], a.cbits[1]);
    }
}
