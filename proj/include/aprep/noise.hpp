#pragma once

#include "aprep/rng.hpp"
#include "aprep/tableau.hpp"

namespace aprep {

/// Pauli fault probabilities. Each fault lands right after the operation it
/// belongs to and is supported on exactly that operation's qubits.
struct NoiseModel {
    double p1 = 0.0;  // uniform non-identity single-qubit Pauli after a single-qubit gate
    double p2 = 0.0;  // uniform non-identity two-qubit Pauli (15 cases) after a CNOT
    double pm = 0.0;  // classical flip of a recorded measurement bit
    double pi = 0.0;  // X after a qubit initialization (reset)

    /// Throws InvalidArgument unless every probability is in [0, 1].
    void validate() const;
    bool is_noiseless() const { return p1 == 0.0 && p2 == 0.0 && pm == 0.0 && pi == 0.0; }

    friend bool operator==(const NoiseModel &, const NoiseModel &) = default;
};

/// Draws faults from its own stream, so the measurement stream is unaffected
/// by whether noise is on.
class NoiseSampler {
public:
    NoiseSampler(const NoiseModel &model, ShotRng rng);

    const NoiseModel &model() const { return model_; }

    void after_single(StabilizerTableau &t, size_t q);
    void after_two(StabilizerTableau &t, size_t a, size_t b);
    void after_reset(StabilizerTableau &t, size_t q);
    /// True when the recorded bit should be flipped.
    bool flip_measurement();

private:
    bool fires(double p);
    static void apply_pauli_code(StabilizerTableau &t, size_t q, unsigned code);

    NoiseModel model_;
    ShotRng rng_;
};

}  // namespace aprep
