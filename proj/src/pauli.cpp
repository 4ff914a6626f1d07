#include "aprep/pauli.hpp"

#include <bit>

#include "aprep/error.hpp"

namespace aprep {

PauliString PauliString::parse(std::string_view text) {
    uint8_t phase = 0;
    size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        phase = text[pos] == '-' ? 2 : 0;
        ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
        phase += 1;
        ++pos;
    }
    PauliString p(text.size() - pos);
    for (size_t q = 0; pos < text.size(); ++pos, ++q) {
        switch (text[pos]) {
            case 'I':
            case '_': break;
            case 'X': p.set(q, true, false); break;
            case 'Y': p.set(q, true, true); break;
            case 'Z': p.set(q, false, true); break;
            default: throw InvalidArgument("bad Pauli character '" + std::string(1, text[pos]) + "'");
        }
    }
    p.phase_ = phase & 3u;
    return p;
}

PauliString PauliString::single(size_t n, size_t qubit, char pauli) {
    if (qubit >= n) {
        throw InvalidArgument("qubit index out of range");
    }
    PauliString p(n);
    switch (pauli) {
        case 'X': p.set(qubit, true, false); break;
        case 'Y': p.set(qubit, true, true); break;
        case 'Z': p.set(qubit, false, true); break;
        default: throw InvalidArgument("bad Pauli character");
    }
    return p;
}

PauliString PauliString::x_on(size_t n, std::span<const uint32_t> support) {
    PauliString p(n);
    p.xs_ = BitVector::from_indices(n, support);
    return p;
}

PauliString PauliString::z_on(size_t n, std::span<const uint32_t> support) {
    PauliString p(n);
    p.zs_ = BitVector::from_indices(n, support);
    return p;
}

char PauliString::at(size_t q) const {
    static constexpr char kNames[4] = {'_', 'X', 'Z', 'Y'};
    return kNames[static_cast<int>(x(q)) | (static_cast<int>(z(q)) << 1)];
}

size_t PauliString::weight() const {
    size_t w = 0;
    auto xw = xs_.words();
    auto zw = zs_.words();
    for (size_t k = 0; k < xw.size(); ++k) {
        w += static_cast<size_t>(std::popcount(xw[k] | zw[k]));
    }
    return w;
}

PauliString &PauliString::operator*=(const PauliString &rhs) {
    if (rhs.size() != size()) {
        throw InvalidArgument("Pauli product of different lengths");
    }
    // Per-lane mod-4 counters of the i-powers picked up at each qubit.
    uint64_t cnt1 = 0;
    uint64_t cnt2 = 0;
    auto x1w = xs_.words();
    auto z1w = zs_.words();
    auto x2w = rhs.xs_.words();
    auto z2w = rhs.zs_.words();
    for (size_t k = 0; k < x1w.size(); ++k) {
        uint64_t old_x1 = x1w[k];
        uint64_t old_z1 = z1w[k];
        uint64_t x2 = x2w[k];
        uint64_t z2 = z2w[k];
        uint64_t x1 = old_x1 ^ x2;
        uint64_t z1 = old_z1 ^ z2;
        x1w[k] = x1;
        z1w[k] = z1;
        uint64_t x1z2 = old_x1 & z2;
        uint64_t anti = (x2 & old_z1) ^ x1z2;
        cnt2 ^= (cnt1 ^ x1 ^ z1 ^ x1z2) & anti;
        cnt1 ^= anti;
    }
    unsigned s = static_cast<unsigned>(std::popcount(cnt1)) + 2u * static_cast<unsigned>(std::popcount(cnt2));
    phase_ = static_cast<uint8_t>((phase_ + rhs.phase_ + s) & 3u);
    return *this;
}

std::string PauliString::str() const {
    static constexpr const char *kPhase[4] = {"+", "i", "-", "-i"};
    std::string out = kPhase[phase_];
    for (size_t q = 0; q < size(); ++q) {
        out.push_back(at(q));
    }
    return out;
}

}  // namespace aprep
