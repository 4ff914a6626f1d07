#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aprep/adaptive_prep.hpp"
#include "aprep/surface_code.hpp"
#include "aprep/tableau.hpp"

namespace aprep {

inline constexpr unsigned kDefaultResamples = 100;

struct FidelityEstimate {
    double px_hat = 0.0;
    double pz_hat = 0.0;
    double lower_bound = 0.0;  // px_hat + pz_hat - 1
    double sigma = 0.0;        // bootstrap 1-sigma of lower_bound
    uint64_t n_x = 0;
    uint64_t n_z = 0;
    unsigned n_resamples = 0;
    /// <(1+S)/2> per stabilizer id, X stabilizers then Z stabilizers in layout order.
    std::vector<std::pair<std::string, double>> per_stabilizer;
    double logical_x_fid = 0.0;  // <(1+X-bar)/2>
};

/// 1 iff every listed support has even parity in `bits` (1 = -1 outcome).
bool projector_indicator(std::span<const uint8_t> bits, std::span<const std::vector<uint32_t>> supports);

/// Point estimates; sigma and n_resamples are left at zero.
FidelityEstimate estimate(std::span<const ShotRecord> records, const CodeLayout &layout);

/// Resamples X and Z shots independently with replacement; sample standard
/// deviation of the lower bound across resamples.
double bootstrap_sigma(std::span<const ShotRecord> records, const CodeLayout &layout, unsigned n_resamples,
                       uint64_t seed);

/// estimate() plus bootstrap_sigma().
FidelityEstimate estimate_with_bootstrap(std::span<const ShotRecord> records, const CodeLayout &layout,
                                         unsigned n_resamples = kDefaultResamples, uint64_t seed = 0);

/// Overlap with the logical |+> state on the data qubits; ancillas are traced out.
double exact_fidelity(const StabilizerTableau &t, const CodeLayout &layout);

/// "0.769(13)": sigma rounded to two significant digits, in units of the last
/// printed digit of value. sigma == 0 prints three decimals and "(0)".
std::string format_with_uncertainty(double value, double sigma);

nlohmann::json estimate_to_json(const FidelityEstimate &e, const CodeLayout &layout);

}  // namespace aprep
