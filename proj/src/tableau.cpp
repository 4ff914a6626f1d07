#include "aprep/tableau.hpp"

#include <string>
#include <vector>

#include "aprep/error.hpp"

namespace aprep {

namespace {

void row_h(PauliString &p, size_t q) {
    bool x = p.x(q);
    bool z = p.z(q);
    if (x && z) {
        p.negate();
    }
    p.set(q, z, x);
}

void row_s(PauliString &p, size_t q) {
    bool x = p.x(q);
    bool z = p.z(q);
    if (x && z) {
        p.negate();
    }
    p.set(q, x, z ^ x);
}

void row_cx(PauliString &p, size_t c, size_t t) {
    bool xc = p.x(c);
    bool zc = p.z(c);
    bool xt = p.x(t);
    bool zt = p.z(t);
    if (xc && zt && !(xt ^ zc)) {
        p.negate();
    }
    p.set(t, xt ^ xc, zt);
    p.set(c, xc, zc ^ zt);
}

}  // namespace

StabilizerTableau::StabilizerTableau(size_t n, std::span<const InitBasis> basis_per_qubit) : n_(n) {
    if (n == 0) {
        throw InvalidArgument("tableau needs at least one qubit");
    }
    if (basis_per_qubit.size() != n) {
        throw InvalidArgument("basis list length " + std::to_string(basis_per_qubit.size()) +
                              " does not match qubit count " + std::to_string(n));
    }
    stabs_.reserve(n);
    destabs_.reserve(n);
    for (size_t q = 0; q < n; ++q) {
        bool plus_x = basis_per_qubit[q] == InitBasis::kXPlus;
        stabs_.push_back(PauliString::single(n, q, plus_x ? 'X' : 'Z'));
        destabs_.push_back(PauliString::single(n, q, plus_x ? 'Z' : 'X'));
    }
}

StabilizerTableau::StabilizerTableau(size_t n)
    : StabilizerTableau(n, std::vector<InitBasis>(n, InitBasis::kZPlus)) {}

void StabilizerTableau::check_qubit(size_t q) const {
    if (q >= n_) {
        throw InvalidArgument("qubit " + std::to_string(q) + " out of range for " + std::to_string(n_) +
                              " qubits");
    }
}

void StabilizerTableau::check_hermitian(const PauliString &p) const {
    if (p.size() != n_) {
        throw InvalidArgument("Pauli length does not match tableau");
    }
    if (!p.is_hermitian()) {
        throw InvalidArgument("cannot measure non-Hermitian Pauli " + p.str());
    }
}

void StabilizerTableau::h(size_t q) {
    for (auto &r : stabs_) row_h(r, q);
    for (auto &r : destabs_) row_h(r, q);
}

void StabilizerTableau::s(size_t q) {
    for (auto &r : stabs_) row_s(r, q);
    for (auto &r : destabs_) row_s(r, q);
}

void StabilizerTableau::x(size_t q) {
    for (auto &r : stabs_) {
        if (r.z(q)) r.negate();
    }
    for (auto &r : destabs_) {
        if (r.z(q)) r.negate();
    }
}

void StabilizerTableau::z(size_t q) {
    for (auto &r : stabs_) {
        if (r.x(q)) r.negate();
    }
    for (auto &r : destabs_) {
        if (r.x(q)) r.negate();
    }
}

void StabilizerTableau::cx(size_t control, size_t target) {
    for (auto &r : stabs_) row_cx(r, control, target);
    for (auto &r : destabs_) row_cx(r, control, target);
}

void StabilizerTableau::apply(Gate g, std::span<const uint32_t> targets) {
    if (targets.size() != gate_arity(g)) {
        throw InvalidArgument("wrong number of targets for gate");
    }
    for (uint32_t t : targets) {
        check_qubit(t);
    }
    switch (g) {
        case Gate::kH: h(targets[0]); break;
        case Gate::kX: x(targets[0]); break;
        case Gate::kZ: z(targets[0]); break;
        case Gate::kS: s(targets[0]); break;
        case Gate::kCX:
            if (targets[0] == targets[1]) {
                throw InvalidArgument("CNOT control and target coincide");
            }
            cx(targets[0], targets[1]);
            break;
    }
}

void StabilizerTableau::apply_pauli(const PauliString &p) {
    if (p.size() != n_) {
        throw InvalidArgument("Pauli length does not match tableau");
    }
    for (auto &r : stabs_) {
        if (!r.commutes(p)) r.negate();
    }
    for (auto &r : destabs_) {
        if (!r.commutes(p)) r.negate();
    }
}

std::optional<int> StabilizerTableau::peek(const PauliString &p) const {
    check_hermitian(p);
    for (const auto &s : stabs_) {
        if (!s.commutes(p)) {
            return std::nullopt;
        }
    }
    // p commutes with the group, so it is +-(product of the stabilizers whose
    // destabilizer partners anticommute with it).
    PauliString acc(n_);
    for (size_t i = 0; i < n_; ++i) {
        if (!destabs_[i].commutes(p)) {
            acc *= stabs_[i];
        }
    }
    if (!acc.same_operator(p)) {
        throw InternalError("deterministic Pauli not generated by stabilizers: " + p.str());
    }
    return acc.phase_exp() == p.phase_exp() ? 1 : -1;
}

int StabilizerTableau::expectation(const PauliString &p) const {
    auto v = peek(p);
    return v ? *v : 0;
}

MeasurementOutcome StabilizerTableau::measure_impl(const PauliString &p, const std::function<bool()> &draw) {
    check_hermitian(p);
    size_t pivot = n_;
    for (size_t i = 0; i < n_; ++i) {
        if (!stabs_[i].commutes(p)) {
            pivot = i;
            break;
        }
    }
    if (pivot == n_) {
        return {*peek(p), true};
    }
    for (size_t i = 0; i < n_; ++i) {
        if (i != pivot && !stabs_[i].commutes(p)) {
            stabs_[i] *= stabs_[pivot];
        }
        if (i != pivot && !destabs_[i].commutes(p)) {
            destabs_[i] *= stabs_[pivot];
        }
    }
    destabs_[pivot] = stabs_[pivot];
    bool bit = draw();
    stabs_[pivot] = p;
    if (bit) {
        stabs_[pivot].negate();
    }
    return {bit ? -1 : 1, false};
}

MeasurementOutcome StabilizerTableau::measure(const PauliString &p, ShotRng &rng) {
    return measure_impl(p, [&rng] { return rng.next_bit(); });
}

MeasurementOutcome StabilizerTableau::measure_forced(const PauliString &p, int value) {
    if (value != 1 && value != -1) {
        throw InvalidArgument("forced outcome must be +1 or -1");
    }
    return measure_impl(p, [value] { return value < 0; });
}

MeasurementOutcome StabilizerTableau::measure_qubit(size_t q, Basis basis, ShotRng &rng) {
    check_qubit(q);
    return measure(PauliString::single(n_, q, basis == Basis::kX ? 'X' : 'Z'), rng);
}

MeasurementOutcome StabilizerTableau::reset(size_t q, ShotRng &rng) {
    auto m = measure_qubit(q, Basis::kZ, rng);
    if (m.value < 0) {
        x(q);
    }
    return m;
}

double StabilizerTableau::overlap(std::span<const PauliString> generators) const {
    for (size_t i = 0; i < generators.size(); ++i) {
        check_hermitian(generators[i]);
        for (size_t j = i + 1; j < generators.size(); ++j) {
            if (!generators[i].commutes(generators[j])) {
                throw InvalidArgument("target generators " + std::to_string(i) + " and " + std::to_string(j) +
                                      " do not commute");
            }
        }
    }
    std::vector<BitVector> rows;
    rows.reserve(generators.size());
    for (const auto &g : generators) {
        BitVector row(2 * n_);
        for (size_t q = 0; q < n_; ++q) {
            row.set(q, g.x(q));
            row.set(n_ + q, g.z(q));
        }
        rows.push_back(std::move(row));
    }
    if (gf2_rank(rows) != generators.size()) {
        throw InvalidArgument("target generators are not independent");
    }

    StabilizerTableau work = *this;
    double prob = 1.0;
    for (const auto &g : generators) {
        auto m = work.measure_forced(g, 1);
        if (m.deterministic) {
            if (m.value < 0) {
                return 0.0;
            }
        } else {
            prob *= 0.5;
        }
    }
    return prob;
}

void StabilizerTableau::validate() const {
    if (stabs_.size() != n_ || destabs_.size() != n_) {
        throw InternalError("tableau row count mismatch");
    }
    std::vector<BitVector> rows;
    for (size_t i = 0; i < n_; ++i) {
        if (!stabs_[i].is_hermitian() || !destabs_[i].is_hermitian()) {
            throw InternalError("tableau row " + std::to_string(i) + " has imaginary phase");
        }
        for (size_t j = 0; j < n_; ++j) {
            if (!stabs_[i].commutes(stabs_[j])) {
                throw InternalError("stabilizers " + std::to_string(i) + "," + std::to_string(j) + " anticommute");
            }
            bool anti = !destabs_[i].commutes(stabs_[j]);
            if (anti != (i == j)) {
                throw InternalError("destabilizer " + std::to_string(i) + " has wrong pairing with stabilizer " +
                                    std::to_string(j));
            }
        }
        for (const PauliString *p : {&stabs_[i], &destabs_[i]}) {
            BitVector row(2 * n_);
            for (size_t q = 0; q < n_; ++q) {
                row.set(q, p->x(q));
                row.set(n_ + q, p->z(q));
            }
            rows.push_back(std::move(row));
        }
    }
    if (gf2_rank(rows) != 2 * n_) {
        throw InternalError("tableau rows are not independent");
    }
}

}  // namespace aprep
