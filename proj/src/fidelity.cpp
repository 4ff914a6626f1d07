#include "aprep/fidelity.hpp"

#include <cmath>
#include <cstdio>

#include "aprep/error.hpp"

namespace aprep {

bool projector_indicator(std::span<const uint8_t> bits, std::span<const std::vector<uint32_t>> supports) {
    for (const auto &s : supports) {
        uint8_t parity = 0;
        for (uint32_t q : s) {
            if (q >= bits.size()) {
                throw InvalidArgument("support index " + std::to_string(q) + " out of range");
            }
            parity ^= bits[q] & 1u;
        }
        if (parity) {
            return false;
        }
    }
    return true;
}

namespace {

struct Indicators {
    std::vector<uint8_t> px;  // per X-basis shot
    std::vector<uint8_t> pz;  // per Z-basis shot
};

struct Supports {
    std::vector<std::vector<uint32_t>> x_sector;  // S^X then X-bar
    std::vector<std::vector<uint32_t>> z_sector;  // S^Z
};

Supports sector_supports(const CodeLayout &layout) {
    Supports s;
    for (const auto &st : layout.x_stabilizers) s.x_sector.push_back(st.support);
    s.x_sector.push_back(layout.logical_x);
    for (const auto &st : layout.z_stabilizers) s.z_sector.push_back(st.support);
    return s;
}

void check_record(const ShotRecord &r, const CodeLayout &layout) {
    if (r.final_bits.size() != layout.num_data()) {
        throw DataError("shot " + std::to_string(r.shot_index) + " has " + std::to_string(r.final_bits.size()) +
                        " data bits, layout has " + std::to_string(layout.num_data()));
    }
}

Indicators indicators(std::span<const ShotRecord> records, const CodeLayout &layout, const Supports &sup) {
    Indicators ind;
    for (const auto &r : records) {
        check_record(r, layout);
        if (r.basis == Basis::kX) {
            ind.px.push_back(projector_indicator(r.final_bits, sup.x_sector));
        } else {
            ind.pz.push_back(projector_indicator(r.final_bits, sup.z_sector));
        }
    }
    if (ind.px.empty()) throw DataError("zero shots in basis X");
    if (ind.pz.empty()) throw DataError("zero shots in basis Z");
    return ind;
}

double mean(const std::vector<uint8_t> &v) {
    uint64_t s = 0;
    for (uint8_t b : v) s += b;
    return static_cast<double>(s) / static_cast<double>(v.size());
}

}  // namespace

FidelityEstimate estimate(std::span<const ShotRecord> records, const CodeLayout &layout) {
    Supports sup = sector_supports(layout);
    Indicators ind = indicators(records, layout, sup);
    FidelityEstimate e;
    e.n_x = ind.px.size();
    e.n_z = ind.pz.size();
    e.px_hat = mean(ind.px);
    e.pz_hat = mean(ind.pz);
    e.lower_bound = e.px_hat + e.pz_hat - 1.0;

    auto marginal = [&](const std::vector<uint32_t> &support, Basis basis) {
        uint64_t good = 0;
        uint64_t total = 0;
        const std::vector<uint32_t> one[1] = {support};
        for (const auto &r : records) {
            if (r.basis != basis) continue;
            ++total;
            good += projector_indicator(r.final_bits, one);
        }
        return static_cast<double>(good) / static_cast<double>(total);
    };
    for (const auto &s : layout.x_stabilizers) e.per_stabilizer.emplace_back(s.id, marginal(s.support, Basis::kX));
    for (const auto &s : layout.z_stabilizers) e.per_stabilizer.emplace_back(s.id, marginal(s.support, Basis::kZ));
    e.logical_x_fid = marginal(layout.logical_x, Basis::kX);
    return e;
}

double bootstrap_sigma(std::span<const ShotRecord> records, const CodeLayout &layout, unsigned n_resamples,
                       uint64_t seed) {
    if (n_resamples < 2) {
        throw InvalidArgument("bootstrap needs at least 2 resamples");
    }
    if (records.empty()) {
        throw DataError("no shot records");
    }
    Supports sup = sector_supports(layout);
    Indicators ind = indicators(records, layout, sup);
    std::vector<double> bounds;
    bounds.reserve(n_resamples);
    for (unsigned r = 0; r < n_resamples; ++r) {
        ShotRng rng(seed, r, Stream::kBootstrap);
        auto resampled_mean = [&rng](const std::vector<uint8_t> &v) {
            uint64_t s = 0;
            for (size_t i = 0; i < v.size(); ++i) s += v[rng.below(v.size())];
            return static_cast<double>(s) / static_cast<double>(v.size());
        };
        double px = resampled_mean(ind.px);
        double pz = resampled_mean(ind.pz);
        bounds.push_back(px + pz - 1.0);
    }
    double m = 0.0;
    for (double b : bounds) m += b;
    m /= static_cast<double>(bounds.size());
    double ss = 0.0;
    for (double b : bounds) ss += (b - m) * (b - m);
    return std::sqrt(ss / static_cast<double>(bounds.size() - 1));
}

FidelityEstimate estimate_with_bootstrap(std::span<const ShotRecord> records, const CodeLayout &layout,
                                         unsigned n_resamples, uint64_t seed) {
    FidelityEstimate e = estimate(records, layout);
    e.sigma = bootstrap_sigma(records, layout, n_resamples, seed);
    e.n_resamples = n_resamples;
    return e;
}

double exact_fidelity(const StabilizerTableau &t, const CodeLayout &layout) {
    if (t.num_qubits() != layout.num_qubits()) {
        throw InvalidArgument("tableau does not match layout qubit count");
    }
    return t.overlap(plus_state_generators(layout));
}

std::string format_with_uncertainty(double value, double sigma) {
    char buf[64];
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        std::snprintf(buf, sizeof buf, "%.3f(0)", value);
        return buf;
    }
    int decimals = std::max(0, 1 - static_cast<int>(std::floor(std::log10(sigma))));
    long digits = std::lround(sigma * std::pow(10.0, decimals));
    if (digits >= 100 && decimals > 0) {
        --decimals;
        digits = std::lround(sigma * std::pow(10.0, decimals));
    }
    std::snprintf(buf, sizeof buf, "%.*f(%ld)", decimals, value, digits);
    return buf;
}

nlohmann::json estimate_to_json(const FidelityEstimate &e, const CodeLayout &layout) {
    nlohmann::json per = nlohmann::json::object();
    for (const auto &[id, v] : e.per_stabilizer) per[id] = v;
    return {{"layout_id", layout.id()},
            {"px_hat", e.px_hat},
            {"pz_hat", e.pz_hat},
            {"lower_bound", e.lower_bound},
            {"sigma", e.sigma},
            {"formatted", format_with_uncertainty(e.lower_bound, e.sigma)},
            {"n_x", e.n_x},
            {"n_z", e.n_z},
            {"n_resamples", e.n_resamples},
            {"per_stabilizer", per},
            {"logical_x_fid", e.logical_x_fid}};
}

}  // namespace aprep
