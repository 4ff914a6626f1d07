#include "aprep/statevector.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "aprep/error.hpp"

namespace aprep {

namespace {

constexpr double kHalfTolerance = 1e-12;

uint64_t mask_of(const BitVector &v) {
    uint64_t m = 0;
    for (size_t q = 0; q < v.size(); ++q) {
        if (v.get(q)) {
            m |= uint64_t{1} << q;
        }
    }
    return m;
}

}  // namespace

StateVector::StateVector(size_t n) : n_(n) {
    if (n == 0 || n > kMaxQubits) {
        throw InvalidArgument("statevector supports 1.." + std::to_string(kMaxQubits) + " qubits, got " +
                              std::to_string(n));
    }
    amp_.assign(size_t{1} << n, {0.0, 0.0});
    amp_[0] = 1.0;
}

StateVector StateVector::from_tableau(const StabilizerTableau &t) {
    size_t n = t.num_qubits();
    // Find one computational basis state in the support: collapse Z on a copy,
    // forcing +1 whenever the outcome is random.
    StabilizerTableau work = t;
    uint64_t basis_index = 0;
    for (size_t q = 0; q < n; ++q) {
        auto m = work.measure_forced(PauliString::single(n, q, 'Z'), 1);
        if (m.value < 0) {
            basis_index |= uint64_t{1} << q;
        }
    }
    StateVector sv(n);
    sv.amp_[0] = 0.0;
    sv.amp_[basis_index] = 1.0;
    for (size_t i = 0; i < n; ++i) {
        double p = sv.project(t.stabilizer(i), 1);
        if (p < 1e-9) {
            throw InternalError("basis state outside tableau support");
        }
    }
    return sv;
}

void StateVector::apply(Gate g, std::span<const uint32_t> targets) {
    if (targets.size() != gate_arity(g)) {
        throw InvalidArgument("wrong number of targets for gate");
    }
    for (uint32_t t : targets) {
        if (t >= n_) {
            throw InvalidArgument("qubit out of range");
        }
    }
    const size_t dim = amp_.size();
    const uint64_t b0 = uint64_t{1} << targets[0];
    switch (g) {
        case Gate::kH: {
            const double r = 1.0 / std::sqrt(2.0);
            for (size_t k = 0; k < dim; ++k) {
                if (!(k & b0)) {
                    auto a = amp_[k];
                    auto b = amp_[k | b0];
                    amp_[k] = (a + b) * r;
                    amp_[k | b0] = (a - b) * r;
                }
            }
            break;
        }
        case Gate::kX:
            for (size_t k = 0; k < dim; ++k) {
                if (!(k & b0)) std::swap(amp_[k], amp_[k | b0]);
            }
            break;
        case Gate::kZ:
            for (size_t k = 0; k < dim; ++k) {
                if (k & b0) amp_[k] = -amp_[k];
            }
            break;
        case Gate::kS:
            for (size_t k = 0; k < dim; ++k) {
                if (k & b0) amp_[k] *= std::complex<double>(0.0, 1.0);
            }
            break;
        case Gate::kCX: {
            if (targets[0] == targets[1]) {
                throw InvalidArgument("CNOT control and target coincide");
            }
            const uint64_t b1 = uint64_t{1} << targets[1];
            for (size_t k = 0; k < dim; ++k) {
                if ((k & b0) && !(k & b1)) std::swap(amp_[k], amp_[k | b1]);
            }
            break;
        }
    }
}

void StateVector::apply_pauli(const PauliString &p) {
    if (p.size() != n_) {
        throw InvalidArgument("Pauli length does not match state");
    }
    const uint64_t xm = mask_of(p.xs());
    const uint64_t zm = mask_of(p.zs());
    // i^e * prod(Y) = i^(e + #Y) X^x Z^z with Z acting first.
    const unsigned ys = static_cast<unsigned>(std::popcount(xm & zm));
    static const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const auto global = kIPow[(p.phase_exp() + ys) & 3u];
    std::vector<std::complex<double>> out(amp_.size());
    for (size_t k = 0; k < amp_.size(); ++k) {
        double sgn = (std::popcount(k & zm) & 1) ? -1.0 : 1.0;
        out[k ^ xm] = global * sgn * amp_[k];
    }
    amp_ = std::move(out);
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amp_) s += std::norm(a);
    return s;
}

void StateVector::normalize() {
    double s = std::sqrt(norm_squared());
    for (auto &a : amp_) a /= s;
}

double StateVector::probability_minus(size_t q, Basis basis) const {
    if (q >= n_) {
        throw InvalidArgument("qubit out of range");
    }
    return (1.0 - expectation(PauliString::single(n_, q, basis == Basis::kX ? 'X' : 'Z'))) / 2.0;
}

MeasurementOutcome StateVector::measure(size_t q, Basis basis, ShotRng &rng) {
    double pm = probability_minus(q, basis);
    MeasurementOutcome out;
    if (pm < kHalfTolerance) {
        out = {1, true};
    } else if (pm > 1.0 - kHalfTolerance) {
        out = {-1, true};
    } else if (std::abs(pm - 0.5) < kHalfTolerance) {
        out = {rng.next_bit() ? -1 : 1, false};
    } else {
        out = {rng.next_double() < pm ? -1 : 1, false};
    }
    project(PauliString::single(n_, q, basis == Basis::kX ? 'X' : 'Z'), out.value);
    return out;
}

double StateVector::project(const PauliString &p, int value) {
    StateVector pp = *this;
    pp.apply_pauli(p);
    for (size_t k = 0; k < amp_.size(); ++k) {
        amp_[k] = 0.5 * (amp_[k] + static_cast<double>(value) * pp.amp_[k]);
    }
    double prob = norm_squared();
    if (prob > 1e-300) {
        normalize();
    }
    return prob;
}

double StateVector::expectation(const PauliString &p) const {
    StateVector pp = *this;
    pp.apply_pauli(p);
    std::complex<double> acc = 0.0;
    for (size_t k = 0; k < amp_.size(); ++k) {
        acc += std::conj(amp_[k]) * pp.amp_[k];
    }
    return acc.real();
}

double overlap(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw InvalidArgument("overlap of states with different qubit counts");
    }
    std::complex<double> acc = 0.0;
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (size_t k = 0; k < x.size(); ++k) {
        acc += std::conj(x[k]) * y[k];
    }
    return std::norm(acc);
}

}  // namespace aprep
