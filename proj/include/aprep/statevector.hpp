#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "aprep/pauli.hpp"
#include "aprep/rng.hpp"
#include "aprep/tableau.hpp"

namespace aprep {

/// Dense amplitude vector; qubit 0 is the least-significant index bit.
/// Brute-force reference for the tableau engine. 2^n complex doubles, so 19
/// qubits take 8 MiB and the 20-qubit ceiling 16 MiB.
class StateVector {
public:
    static constexpr size_t kMaxQubits = 20;

    /// |0...0>.
    explicit StateVector(size_t n);
    /// The state stabilized by the tableau, with an arbitrary global phase.
    static StateVector from_tableau(const StabilizerTableau &t);

    size_t num_qubits() const { return n_; }
    std::span<const std::complex<double>> amplitudes() const { return amp_; }
    std::span<std::complex<double>> amplitudes() { return amp_; }

    void apply(Gate g, std::span<const uint32_t> targets);
    /// psi <- P psi.
    void apply_pauli(const PauliString &p);

    double norm_squared() const;
    void normalize();

    /// Probability that measuring the qubit in `basis` yields -1.
    double probability_minus(size_t q, Basis basis) const;
    /// Born-rule measurement with collapse. An outcome with probability exactly 1/2
    /// (within 1e-12) is drawn with one rng bit, the same convention as the
    /// tableau engine; otherwise one uniform double decides.
    MeasurementOutcome measure(size_t q, Basis basis, ShotRng &rng);
    /// Applies (1 + value*P)/2, returns the probability of that outcome, renormalizes
    /// unless the probability is zero.
    double project(const PauliString &p, int value);
    /// <psi|P|psi>, real for Hermitian P.
    double expectation(const PauliString &p) const;

private:
    size_t n_;
    std::vector<std::complex<double>> amp_;
};

/// |<a|b>|^2.
double overlap(const StateVector &a, const StateVector &b);

}  // namespace aprep
