#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "aprep/noise.hpp"
#include "aprep/rng.hpp"
#include "aprep/tableau.hpp"

namespace aprep {

// Qubit and classical-bit operands are flat indices; registers map names onto
// contiguous index ranges.

struct GateOp {
    Gate gate = Gate::kH;
    std::array<uint32_t, 2> qubits{};  // qubits[1] is 0 for single-qubit gates

    size_t arity() const { return gate_arity(gate); }
    friend bool operator==(const GateOp &, const GateOp &) = default;
};

struct MeasureOp {
    uint32_t qubit = 0;
    uint32_t cbit = 0;
    friend bool operator==(const MeasureOp &, const MeasureOp &) = default;
};

struct ResetOp {
    uint32_t qubit = 0;
    friend bool operator==(const ResetOp &, const ResetOp &) = default;
};

/// `if (c == value) gate`
struct CondGateOp {
    uint32_t cbit = 0;
    uint8_t value = 1;
    GateOp gate;
    friend bool operator==(const CondGateOp &, const CondGateOp &) = default;
};

/// One XOR operand: a classical bit or the constant 0/1.
struct ClassicalTerm {
    bool is_constant = false;
    uint32_t value = 0;  // bit index, or the constant
    friend bool operator==(const ClassicalTerm &, const ClassicalTerm &) = default;
};

/// `c = t0 ^ t1 ^ ...`
struct AssignOp {
    uint32_t cbit = 0;
    std::vector<ClassicalTerm> terms;
    friend bool operator==(const AssignOp &, const AssignOp &) = default;
};

struct BarrierOp {
    friend bool operator==(const BarrierOp &, const BarrierOp &) = default;
};

using Instruction = std::variant<GateOp, MeasureOp, ResetOp, CondGateOp, AssignOp, BarrierOp>;

struct Register {
    std::string name;
    uint32_t offset = 0;
    uint32_t width = 0;
    friend bool operator==(const Register &, const Register &) = default;
};

class AdaptiveCircuit {
public:
    uint32_t add_qreg(const std::string &name, uint32_t width);
    uint32_t add_creg(const std::string &name, uint32_t width);

    /// Appends after checking operand ranges and duplicate gate targets.
    void push(Instruction inst);

    void gate(Gate g, uint32_t q) { push(GateOp{g, {q, 0}}); }
    void cx(uint32_t control, uint32_t target) { push(GateOp{Gate::kCX, {control, target}}); }
    void measure(uint32_t q, uint32_t c) { push(MeasureOp{q, c}); }
    void reset(uint32_t q) { push(ResetOp{q}); }
    void barrier() { push(BarrierOp{}); }

    size_t num_qubits() const { return num_qubits_; }
    size_t num_cbits() const { return num_cbits_; }
    const std::vector<Register> &qregs() const { return qregs_; }
    const std::vector<Register> &cregs() const { return cregs_; }
    const std::vector<Instruction> &instructions() const { return instructions_; }

    std::string qubit_name(uint32_t q) const;
    std::string cbit_name(uint32_t c) const;

    friend bool operator==(const AdaptiveCircuit &, const AdaptiveCircuit &) = default;

private:
    void check_name(const std::string &name) const;
    void check_gate(const GateOp &g) const;

    std::vector<Register> qregs_;
    std::vector<Register> cregs_;
    std::vector<Instruction> instructions_;
    uint32_t num_qubits_ = 0;
    uint32_t num_cbits_ = 0;
};

/// Throws ParseError (line:column) on syntax or resolution errors.
AdaptiveCircuit parse_circuit(std::string_view text);
std::string serialize(const AdaptiveCircuit &c);

/// Number of two-qubit-gate layers along the longest qubit-sharing chain, in
/// program order. Single-qubit gates, measurements, resets and classical ops
/// contribute nothing; conditional CNOTs count.
size_t depth(const AdaptiveCircuit &c);

/// Undirected qubit-pair edge set.
class Connectivity {
public:
    void add(uint32_t a, uint32_t b) { edges_.insert(key(a, b)); }
    bool contains(uint32_t a, uint32_t b) const { return edges_.count(key(a, b)) > 0; }
    size_t size() const { return edges_.size(); }
    const std::set<std::pair<uint32_t, uint32_t>> &edges() const { return edges_; }
    /// Neighbours of q, ascending.
    std::vector<uint32_t> neighbours(uint32_t q) const;

    friend bool operator==(const Connectivity &, const Connectivity &) = default;

private:
    static std::pair<uint32_t, uint32_t> key(uint32_t a, uint32_t b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }
    std::set<std::pair<uint32_t, uint32_t>> edges_;
};

/// Indices of instructions whose two-qubit gate is not on an edge. Empty means ok.
std::vector<size_t> validate_connectivity(const AdaptiveCircuit &c, const Connectivity &edges);

struct RecordedMeasurement {
    size_t instruction = 0;
    uint32_t qubit = 0;
    uint32_t cbit = 0;
    MeasurementOutcome outcome;  // physical outcome
    bool recorded_bit = false;   // bit written to the register, after any readout flip
};

struct ExecutionResult {
    std::vector<uint8_t> cbits;
    std::vector<RecordedMeasurement> measurements;
    std::vector<size_t> fired_conditionals;  // instruction indices whose guard held
};

/// Runs the program on `state` (which must have exactly c.num_qubits() qubits).
/// Classical registers start at 0.
ExecutionResult execute(const AdaptiveCircuit &c, StabilizerTableau &state, ShotRng &rng,
                        NoiseSampler *noise = nullptr);

}  // namespace aprep
