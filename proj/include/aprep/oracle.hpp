#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aprep/circuit.hpp"
#include "aprep/statevector.hpp"
#include "aprep/surface_code.hpp"

namespace aprep {

/// Runs a noiseless program on a statevector with the tableau engine's
/// randomness conventions, so equal streams give equal outcomes when the two
/// engines agree.
ExecutionResult execute_statevector(const AdaptiveCircuit &c, StateVector &state, ShotRng &rng);

/// Exact distribution of the bits written by a consecutive block of Z
/// measurements on `state`, indexed with the first measurement as bit 0.
std::vector<double> measurement_marginals(const StateVector &state, const std::vector<uint32_t> &qubits);

/// Total-variation distance between two distributions of equal size.
double total_variation(const std::vector<double> &p, const std::vector<double> &q);

struct OracleOptions {
    int length = 5;
    uint64_t shots = 10000;
    uint64_t seed = 1;
    unsigned full_runs = 4;         // shots simulated end to end on the statevector
    unsigned random_circuits = 20;  // random Clifford programs compared step by step
    bool inject_phase_bug = false;  // negative control: a stray Z in the tableau engine only
};

struct OracleReport {
    int length = 0;
    size_t num_qubits = 0;
    uint64_t shots = 0;
    uint64_t seed = 0;
    size_t compared_outcomes = 0;
    size_t deterministic_mismatches = 0;  // deterministic flag or value differs
    size_t random_mismatches = 0;         // random outcomes that did not follow the shared stream
    double tvd_sampled = 0.0;             // syndrome histograms, shared per-shot streams
    double tvd_independent = 0.0;         // oracle histogram from an unrelated stream (informational)
    double tvd_exact = 0.0;               // tableau branch enumeration vs oracle marginals
    double max_fidelity_diff = 0.0;       // exact_fidelity vs statevector projector expectation
    double max_overlap_diff = 0.0;        // ideal runs: 1 - overlap with the projected target
    bool passed = false;
};

/// Largest strip that fits the oracle's qubit ceiling.
int max_oracle_length();

/// Throws InvalidArgument when the layout exceeds the oracle's qubit ceiling.
OracleReport oracle_check(const OracleOptions &options);
nlohmann::json oracle_report_to_json(const OracleReport &r);

}  // namespace aprep
