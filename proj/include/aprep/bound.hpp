#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "aprep/rng.hpp"
#include "aprep/surface_code.hpp"
#include "aprep/tableau.hpp"

namespace aprep {

using Distribution4 = std::array<double, 4>;

/// Qubits within `depth` hops of `support` on the layout's connectivity graph, ascending.
std::vector<uint32_t> past_cone(const CodeLayout &layout, std::span<const uint32_t> support, unsigned depth);

struct ConeReport {
    bool disjoint = true;
    unsigned depth = 0;
    std::vector<uint32_t> left;   // cone of Z_L
    std::vector<uint32_t> right;  // cone of Z_R
};

ConeReport cones_disjoint(const CodeLayout &layout, unsigned depth);
nlohmann::json cone_report_to_json(const ConeReport &r, const CodeLayout &layout);

/// (sum_j sqrt(p_j q_j))^2. Inputs must be probability vectors (sum within 1e-12).
double bhattacharyya_bound(const Distribution4 &p, const Distribution4 &q);

/// POVM {pi_L^+ pi_R^+, pi_L^+ pi_R^-, pi_L^- pi_R^+, pi_L^- pi_R^-} on the logical |+>.
inline constexpr Distribution4 kIdealPovm = {0.5, 0.0, 0.0, 0.5};

/// (ab, a(1-b), (1-a)b, (1-a)(1-b)).
Distribution4 product_form(double a, double b);

/// 1/2 (sqrt(ab) + sqrt((1-a)(1-b)))^2, the bound for product-form outcomes.
double product_form_bound_closed(double a, double b);

struct GridMaximum {
    double value = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Maximum of bhattacharyya_bound(kIdealPovm, product_form(a, b)) on the grid
/// a, b in {0, step, 2 step, ..., 1}. 0 < step <= 0.01.
GridMaximum max_product_form_bound(double grid_step);

/// Exact POVM outcome probabilities of the state, from <Z_L>, <Z_R>, <Z_L Z_R>.
Distribution4 povm_probabilities(const StabilizerTableau &t, const CodeLayout &layout);

/// <Z_L Z_R> - <Z_L><Z_R>.
double connected_correlation(const StabilizerTableau &t, const CodeLayout &layout);

/// The 11520 two-qubit Cliffords (720 symplectic classes x 16 sign choices), each
/// stored as a word over {H, S, X, Z, CX} found by breadth-first search.
class TwoQubitCliffords {
public:
    static const TwoQubitCliffords &instance();

    size_t size() const { return words_.size(); }
    /// Index of the element equal to `t` as a conjugation map (t acts on 2 qubits).
    size_t find(const StabilizerTableau &t) const;
    /// The six CNOT/SWAP circuits (GL(2, F2)), identity first.
    const std::vector<uint16_t> &linear() const { return linear_; }
    /// Applies element `index` with local qubits 0, 1 mapped to a, b.
    void apply(StabilizerTableau &t, size_t index, uint32_t a, uint32_t b) const;

private:
    struct Op {
        Gate gate;
        uint8_t q0;
        uint8_t q1;
    };
    TwoQubitCliffords();
    std::vector<std::vector<Op>> words_;
    std::unordered_map<std::string, size_t> index_;
    std::vector<uint16_t> linear_;
};

/// One of the six single-qubit stabilizer states |0>,|1>,|+>,|->,|+i>,|-i>.
enum class ProductInput : uint8_t { kZero, kOne, kPlus, kMinus, kPlusI, kMinusI };

struct LocalGate {
    uint32_t a = 0;
    uint32_t b = 0;
    uint16_t clifford = 0;
};

/// Product input followed by layers of two-qubit Cliffords on connectivity edges,
/// each layer a matching.
struct LocalCircuit {
    std::vector<ProductInput> inputs;
    std::vector<std::vector<LocalGate>> layers;
};

/// Uniform product input; each layer is a greedy maximal matching over the edges
/// in random order, with a uniformly random Clifford on every matched edge.
LocalCircuit random_local_circuit(const CodeLayout &layout, unsigned depth, ShotRng &rng);

/// Throws InvalidArgument if a gate is off the connectivity or a layer reuses a qubit.
void check_local_circuit(const LocalCircuit &c, const CodeLayout &layout);

StabilizerTableau run_local_circuit(const LocalCircuit &c, size_t num_qubits);

struct LocalCircuitSample {
    double fidelity = 0.0;  // exact overlap of the data state with the logical |+>
    Distribution4 povm{};   // exact POVM outcome probabilities
    double bound = 0.0;     // bhattacharyya_bound(kIdealPovm, povm)
    double connected = 0.0; // connected Z_L Z_R correlation
};

LocalCircuitSample evaluate_local_circuit(const LocalCircuit &c, const CodeLayout &layout);

struct BoundProbe {
    size_t samples = 0;
    size_t uniform_samples = 0;
    double max_fidelity = 0.0;
    double max_uniform_fidelity = 0.0;
    double max_connected = 0.0;       // largest |connected correlation| seen
    double max_bound_excess = 0.0;    // largest fidelity - bhattacharyya bound
    size_t above_half = 0;            // samples with fidelity > 1/2 + 1e-12
    LocalCircuit best;
};

/// Probes the depth bound with `samples` connectivity-respecting circuits: the
/// first `uniform_samples` are independent draws of random_local_circuit, the
/// rest a stochastic hill climb (single-gate or single-input mutations, keeping
/// any candidate with equal or higher fidelity) started from the best of them.
BoundProbe probe_local_bound(const CodeLayout &layout, unsigned depth, size_t samples, size_t uniform_samples,
                             uint64_t seed);

}  // namespace aprep
