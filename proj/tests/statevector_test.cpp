#include <gtest/gtest.h>

#include <cmath>

#include "aprep/error.hpp"
#include "aprep/statevector.hpp"

using namespace aprep;

namespace {
void gate(StateVector &s, Gate g, std::vector<uint32_t> t) { s.apply(g, t); }
}  // namespace

TEST(StateVector, HadamardOnZero) {
    StateVector s(1);
    gate(s, Gate::kH, {0});
    EXPECT_NEAR(s.amplitudes()[0].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s.amplitudes()[1].real(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(StateVector, CnotOnOneZero) {
    // |10> with the first qubit (q0) set: index 1.
    StateVector s(2);
    gate(s, Gate::kX, {0});
    gate(s, Gate::kCX, {0, 1});
    EXPECT_NEAR(std::abs(s.amplitudes()[3]), 1.0, 1e-15);
}

TEST(StateVector, BellCorrelation) {
    for (uint64_t seed = 0; seed < 50; ++seed) {
        StateVector s(2);
        gate(s, Gate::kH, {0});
        gate(s, Gate::kCX, {0, 1});
        ShotRng rng(seed, 0);
        auto a = s.measure(0, Basis::kZ, rng);
        auto b = s.measure(1, Basis::kZ, rng);
        EXPECT_FALSE(a.deterministic);
        EXPECT_TRUE(b.deterministic);
        EXPECT_EQ(a.value, b.value);
    }
}

TEST(StateVector, EigenstateMeasurementIsDeterministic) {
    StateVector s(1);
    gate(s, Gate::kH, {0});
    ShotRng rng(1, 1);
    auto m = s.measure(0, Basis::kX, rng);
    EXPECT_TRUE(m.deterministic);
    EXPECT_EQ(m.value, 1);
}

TEST(StateVector, NormIsPreserved) {
    StateVector s(4);
    for (uint32_t qb = 0; qb < 4; ++qb) gate(s, Gate::kH, {qb});
    gate(s, Gate::kS, {1});
    gate(s, Gate::kCX, {1, 3});
    gate(s, Gate::kZ, {2});
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(StateVector, OverlapExamples) {
    StateVector a(3), b(3);
    EXPECT_NEAR(overlap(a, b), 1.0, 1e-15);
    gate(b, Gate::kX, {2});
    EXPECT_NEAR(overlap(a, b), 0.0, 1e-15);
    EXPECT_THROW(overlap(a, StateVector(2)), InvalidArgument);
}

TEST(StateVector, ProjectReturnsProbability) {
    StateVector s(2);
    gate(s, Gate::kH, {0});
    EXPECT_NEAR(s.project(PauliString::parse("Z_"), -1), 0.5, 1e-15);
    EXPECT_NEAR(s.expectation(PauliString::parse("Z_")), -1.0, 1e-12);
}

TEST(StateVector, PauliApplicationIncludesPhase) {
    StateVector s(1);
    s.apply_pauli(PauliString::parse("Y"));
    EXPECT_NEAR(std::abs(s.amplitudes()[1] - std::complex<double>(0, 1)), 0.0, 1e-15);
}

TEST(StateVector, QubitCeiling) {
    EXPECT_THROW(StateVector(StateVector::kMaxQubits + 1), InvalidArgument);
}
