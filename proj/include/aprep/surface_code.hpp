#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aprep/circuit.hpp"
#include "aprep/gf2.hpp"
#include "aprep/pauli.hpp"
#include "aprep/tableau.hpp"

namespace aprep {

enum class PauliType : uint8_t { kX, kZ };

/// Where a stabilizer sits on the strip.
enum class PlaquetteShape : uint8_t {
    kFull,    // weight 4, spans both rows of columns c, c+1
    kTop,     // weight 2 on row 1 (above an X plaquette)
    kBottom,  // weight 2 on row 0 (below an X plaquette)
    kLeft,    // weight-2 X boundary on column 0
    kRight,   // weight-2 X boundary on column L
};

struct Stabilizer {
    std::string id;  // "P0", "T1", "B1", "XL", "XR", ...
    PauliType type = PauliType::kZ;
    PlaquetteShape shape = PlaquetteShape::kFull;
    uint32_t column = 0;            // left column of the plaquette
    std::vector<uint32_t> support;  // data-qubit indices, ascending
};

struct DataQubit {
    uint32_t index = 0;
    uint32_t row = 0;  // 0 = bottom, 1 = top
    uint32_t col = 0;
};

struct AncillaQubit {
    uint32_t index = 0;
    uint32_t stabilizer = 0;  // position in CodeLayout::z_stabilizers
    double x = 0.0;           // drawing coordinates only
    double y = 0.0;
};

struct ScheduledCnot {
    uint32_t data = 0;
    uint32_t ancilla = 0;
    uint32_t stabilizer = 0;
    int layer = 0;  // 1..4
};

/// Rotated-surface-code strip of 2 x (L+1) data qubits with one ancilla per
/// Z stabilizer. Data qubit (r, c) has index r*(L+1) + c; ancillas follow the
/// data qubits in Z-stabilizer order. Immutable once built.
struct CodeLayout {
    uint32_t length = 0;
    std::vector<DataQubit> data;
    std::vector<AncillaQubit> ancillas;
    /// Ordered along the correction chain; syndrome bit k belongs to z_stabilizers[k].
    std::vector<Stabilizer> z_stabilizers;
    std::vector<Stabilizer> x_stabilizers;
    std::vector<uint32_t> logical_x;        // bottom row
    std::vector<uint32_t> logical_z_left;   // column 0
    std::vector<uint32_t> logical_z_right;  // column L
    Connectivity connectivity;
    std::vector<ScheduledCnot> schedule;

    size_t num_data() const { return data.size(); }
    size_t num_qubits() const { return data.size() + ancillas.size(); }
    uint32_t data_index(uint32_t row, uint32_t col) const { return row * (length + 1) + col; }
    std::string id() const { return "strip-L" + std::to_string(length); }
    /// Position of the Z stabilizer with this id; throws if absent.
    size_t z_position(const std::string &stabilizer_id) const;
};

/// L odd, L >= 1.
CodeLayout build_strip(int length);

/// Throws InternalError if any structural invariant fails.
void validate_layout(const CodeLayout &layout);

struct StabilizerSet {
    std::vector<PauliString> x;
    std::vector<PauliString> z;
};

/// Generators over the full data+ancilla index space, identity on ancillas.
StabilizerSet stabilizer_generators(const CodeLayout &layout);
PauliString logical_x_operator(const CodeLayout &layout);
PauliString logical_z_left_operator(const CodeLayout &layout);
PauliString logical_z_right_operator(const CodeLayout &layout);
/// S^X, S^Z and X-bar together: the stabilizer group of the logical |+> state on the data.
std::vector<PauliString> plus_state_generators(const CodeLayout &layout);

/// Z-stabilizer / data-qubit incidence matrix.
BitMatrix z_check_matrix(const CodeLayout &layout);

/// -sum<S> - sum<S'> with each expectation read from the stabilizer group.
double energy(const StabilizerTableau &t, const CodeLayout &layout);

/// The layout's CNOT schedule after checking layer disjointness and coverage.
std::vector<ScheduledCnot> measurement_schedule(const CodeLayout &layout);

/// The scheduled CNOTs alone as a program (qreg q[N]), ordered by layer.
AdaptiveCircuit schedule_circuit(const CodeLayout &layout);

nlohmann::json layout_to_json(const CodeLayout &layout);

}  // namespace aprep
