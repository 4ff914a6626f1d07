#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "aprep/gf2.hpp"

namespace aprep {

/// i^phase_exp * (tensor product of I/X/Y/Z), with Y = iXZ Hermitian.
///
/// Qubit j carries (x_j, z_j): (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z.
class PauliString {
public:
    PauliString() = default;
    explicit PauliString(size_t n) : xs_(n), zs_(n) {}

    /// Parses "+XZ_Y", "-ZZ", "iX", "-iY". '_' and 'I' are identity.
    static PauliString parse(std::string_view text);
    static PauliString single(size_t n, size_t qubit, char pauli);
    static PauliString x_on(size_t n, std::span<const uint32_t> support);
    static PauliString z_on(size_t n, std::span<const uint32_t> support);

    size_t size() const { return xs_.size(); }
    uint8_t phase_exp() const { return phase_; }
    void set_phase_exp(uint8_t e) { phase_ = e & 3u; }
    bool is_hermitian() const { return (phase_ & 1u) == 0; }
    /// +1 or -1; only meaningful for Hermitian strings.
    int sign() const { return phase_ == 2 ? -1 : 1; }
    void negate() { phase_ ^= 2u; }

    bool x(size_t q) const { return xs_.get(q); }
    bool z(size_t q) const { return zs_.get(q); }
    void set(size_t q, bool x, bool z) {
        xs_.set(q, x);
        zs_.set(q, z);
    }
    char at(size_t q) const;

    BitVector &xs() { return xs_; }
    BitVector &zs() { return zs_; }
    const BitVector &xs() const { return xs_; }
    const BitVector &zs() const { return zs_; }

    size_t weight() const;
    bool is_identity_up_to_phase() const { return !xs_.any() && !zs_.any(); }
    bool commutes(const PauliString &other) const { return xs_.dot(other.zs_) == zs_.dot(other.xs_); }

    /// this <- this * rhs, phase tracked exactly.
    PauliString &operator*=(const PauliString &rhs);
    friend PauliString operator*(PauliString a, const PauliString &b) { return a *= b; }

    bool same_operator(const PauliString &o) const { return xs_ == o.xs_ && zs_ == o.zs_; }
    friend bool operator==(const PauliString &, const PauliString &) = default;

    std::string str() const;

private:
    BitVector xs_;
    BitVector zs_;
    uint8_t phase_ = 0;
};

}  // namespace aprep
