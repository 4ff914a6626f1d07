#include "aprep/noise.hpp"

#include "aprep/error.hpp"

namespace aprep {

void NoiseModel::validate() const {
    for (double p : {p1, p2, pm, pi}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidArgument("noise probabilities must lie in [0, 1]");
        }
    }
}

NoiseSampler::NoiseSampler(const NoiseModel &model, ShotRng rng) : model_(model), rng_(rng) { model_.validate(); }

bool NoiseSampler::fires(double p) {
    if (p <= 0.0) {
        return false;
    }
    return rng_.next_double() < p;
}

// code: 0 = I, 1 = X, 2 = Z, 3 = Y (global phase dropped).
void NoiseSampler::apply_pauli_code(StabilizerTableau &t, size_t q, unsigned code) {
    if (code & 1u) t.x(q);
    if (code & 2u) t.z(q);
}

void NoiseSampler::after_single(StabilizerTableau &t, size_t q) {
    if (fires(model_.p1)) {
        apply_pauli_code(t, q, 1 + static_cast<unsigned>(rng_.below(3)));
    }
}

void NoiseSampler::after_two(StabilizerTableau &t, size_t a, size_t b) {
    if (fires(model_.p2)) {
        unsigned code = 1 + static_cast<unsigned>(rng_.below(15));
        apply_pauli_code(t, a, code & 3u);
        apply_pauli_code(t, b, code >> 2);
    }
}

void NoiseSampler::after_reset(StabilizerTableau &t, size_t q) {
    if (fires(model_.pi)) {
        t.x(q);
    }
}

bool NoiseSampler::flip_measurement() { return fires(model_.pm); }

}  // namespace aprep
