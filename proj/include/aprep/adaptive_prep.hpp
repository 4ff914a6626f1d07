#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aprep/circuit.hpp"
#include "aprep/noise.hpp"
#include "aprep/surface_code.hpp"

namespace aprep {

/// One step of the purge walk: flip `data_qubit` when syndrome bit `left` is set,
/// moving that defect to `right` (or off the boundary when right is empty).
struct ChainStep {
    uint32_t data_qubit = 0;
    uint32_t left = 0;
    std::optional<uint32_t> right;
    friend bool operator==(const ChainStep &, const ChainStep &) = default;
};

/// The walk T1 - P0 - B1 - P2 - T3 - P4 - B3 ... over every Z stabilizer, with
/// leaf stabilizers visited out and back, closed by a boundary qubit of the last
/// full plaquette. Stabilizer positions index CodeLayout::z_stabilizers.
std::vector<ChainStep> correction_chain(const CodeLayout &layout);

struct ChainOutcome {
    std::vector<uint32_t> flips;     // data qubits flipped an odd number of times, ascending
    std::vector<uint8_t> remaining;  // syndrome after the walk
};

/// Classical greedy walk over a syndrome (bit k belongs to z_stabilizers[k]).
ChainOutcome run_chain(const std::vector<ChainStep> &chain, const CodeLayout &layout,
                       const std::vector<uint8_t> &syndrome);

/// A solution x of H_Z x = syndrome over GF(2), free variables zero. Ascending data indices.
std::vector<uint32_t> solve_correction_gf2(const CodeLayout &layout, const std::vector<uint8_t> &syndrome);

enum class CorrectionStrategy : uint8_t {
    kChain,  // conditional X + XOR updates along correction_chain
    kGf2,    // X on each qubit whose GF(2) solution bit (a fixed XOR of syndrome bits) is set
};

/// reset all; H on data; four CNOT layers; measure ancillas into s[k]; reset
/// ancillas; unrolled feed-forward corrections.
AdaptiveCircuit build_prep_circuit(const CodeLayout &layout, CorrectionStrategy strategy = CorrectionStrategy::kChain);

struct ShotRecord {
    uint64_t shot_index = 0;
    Basis basis = Basis::kX;
    std::vector<uint8_t> syndrome;             // recorded bits, 1 = -1 outcome, chain order
    std::vector<uint32_t> correction_support;  // data qubits with a net X correction
    std::vector<uint8_t> final_bits;           // per data qubit, 1 = -1 outcome
    uint64_t rng_seed = 0;
    std::optional<double> exact_fidelity;  // of the prepared state, before readout

    friend bool operator==(const ShotRecord &, const ShotRecord &) = default;
};

/// Runs preparation shots for one layout and noise model. Const after construction;
/// run_shot may be called concurrently.
class PrepRunner {
public:
    PrepRunner(CodeLayout layout, NoiseModel noise, CorrectionStrategy strategy = CorrectionStrategy::kChain);

    const CodeLayout &layout() const { return layout_; }
    const AdaptiveCircuit &circuit() const { return circuit_; }
    const NoiseModel &noise() const { return noise_; }

    /// Streams are (seed, shot_index); `with_exact_fidelity` also evaluates the
    /// exact overlap of the prepared state with the target before readout.
    ShotRecord run_shot(Basis basis, uint64_t seed, uint64_t shot_index, bool with_exact_fidelity = false) const;

    /// Prepared state (before readout) for one stream, plus the execution trace.
    StabilizerTableau prepare(uint64_t seed, uint64_t shot_index, ExecutionResult *trace = nullptr) const;

    /// X-basis shots get indices [0, shots_x), Z-basis shots [shots_x, shots_x + shots_z).
    /// Output is independent of `threads`.
    std::vector<ShotRecord> run_shots(uint64_t seed, uint64_t shots_x, uint64_t shots_z, unsigned threads = 1,
                                      bool with_exact_fidelity = false) const;

private:
    CodeLayout layout_;
    NoiseModel noise_;
    AdaptiveCircuit circuit_;
    std::vector<PauliString> target_;
    size_t num_syndrome_bits_;
};

/// Worker count from ADAPTIVE_PREP_THREADS, defaulting to 1.
unsigned threads_from_env();

nlohmann::json shot_to_json(const ShotRecord &r);
/// Throws DataError on missing or malformed fields.
ShotRecord shot_from_json(const nlohmann::json &j);

/// First line of a shot file.
struct RunManifest {
    std::string version;
    int length = 5;
    std::string layout_hash;
    uint64_t seed = 0;
    NoiseModel noise;
    uint64_t shots_x = 0;
    uint64_t shots_z = 0;
    std::string correction = "chain";
};

/// 64-bit FNV-1a of the compact layout JSON, as 16 hex digits.
std::string layout_hash(const CodeLayout &layout);

/// Manifest line followed by one record per line, each newline-terminated.
std::string write_shot_stream(const RunManifest &manifest, const std::vector<ShotRecord> &records);

struct ShotStream {
    std::optional<RunManifest> manifest;
    std::vector<ShotRecord> records;
};

/// Inverse of write_shot_stream; the manifest line is optional. Throws DataError
/// with the offending line number.
ShotStream read_shot_stream(std::string_view text);

}  // namespace aprep
