#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aprep/pauli.hpp"
#include "aprep/rng.hpp"

namespace aprep {

enum class Gate : uint8_t { kH, kX, kZ, kS, kCX };
enum class Basis : uint8_t { kX, kZ };
enum class InitBasis : uint8_t { kZPlus, kXPlus };

inline size_t gate_arity(Gate g) { return g == Gate::kCX ? 2 : 1; }

struct MeasurementOutcome {
    int value = 1;  // +1 or -1
    bool deterministic = false;

    bool bit() const { return value < 0; }
    friend bool operator==(const MeasurementOutcome &, const MeasurementOutcome &) = default;
};

/// Stabilizer state of n qubits held as stabilizer and destabilizer generators
/// (Aaronson-Gottesman frame). Single owner, mutated in place.
class StabilizerTableau {
public:
    StabilizerTableau(size_t n, std::span<const InitBasis> basis_per_qubit);
    /// |0...0>.
    explicit StabilizerTableau(size_t n);

    size_t num_qubits() const { return n_; }
    const PauliString &stabilizer(size_t i) const { return stabs_[i]; }
    const PauliString &destabilizer(size_t i) const { return destabs_[i]; }

    void h(size_t q);
    void s(size_t q);
    void x(size_t q);
    void z(size_t q);
    void cx(size_t control, size_t target);
    /// Checked entry point: targets distinct and in range, count = gate arity.
    void apply(Gate g, std::span<const uint32_t> targets);
    /// Conjugation by a Pauli operator: flips signs of anticommuting rows.
    void apply_pauli(const PauliString &p);

    /// Projective measurement of a Hermitian Pauli. A random outcome draws exactly one bit.
    MeasurementOutcome measure(const PauliString &p, ShotRng &rng);
    /// As measure, but a random outcome is forced to `value` instead of sampled.
    MeasurementOutcome measure_forced(const PauliString &p, int value);
    MeasurementOutcome measure_qubit(size_t q, Basis basis, ShotRng &rng);
    /// Z measurement followed by X on a -1 outcome.
    MeasurementOutcome reset(size_t q, ShotRng &rng);

    /// Sign of p if +-p is in the stabilizer group, nullopt otherwise. Does not mutate.
    std::optional<int> peek(const PauliString &p) const;
    /// <p> in {-1, 0, +1}.
    int expectation(const PauliString &p) const;

    /// <prod_i (1+G_i)/2>. Generators must commute pairwise, be independent, and Hermitian.
    double overlap(std::span<const PauliString> generators) const;

    /// Throws InternalError when a frame invariant is broken.
    void validate() const;

    friend bool operator==(const StabilizerTableau &, const StabilizerTableau &) = default;

private:
    MeasurementOutcome measure_impl(const PauliString &p, const std::function<bool()> &draw);
    void check_qubit(size_t q) const;
    void check_hermitian(const PauliString &p) const;

    size_t n_;
    std::vector<PauliString> stabs_;
    std::vector<PauliString> destabs_;
};

}  // namespace aprep
