#include "aprep/rng.hpp"

namespace aprep {

namespace {

constexpr uint32_t kWeylA = 0x9E3779B9;
constexpr uint32_t kWeylB = 0xBB67AE85;
constexpr uint32_t kMulA = 0xD2511F53;
constexpr uint32_t kMulB = 0xCD9E8D57;

inline void mul_hi_lo(uint32_t a, uint32_t b, uint32_t &hi, uint32_t &lo) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
}

}  // namespace

std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeylA;
            key[1] += kWeylB;
        }
        uint32_t hi0, lo0, hi1, lo1;
        mul_hi_lo(kMulA, ctr[0], hi0, lo0);
        mul_hi_lo(kMulB, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

ShotRng::ShotRng(uint64_t seed, uint64_t index, Stream stream)
    : seed_(seed), index_(index), stream_(static_cast<uint32_t>(stream)) {}

void ShotRng::refill() {
    words_ = philox4x32_10(
        {block_, stream_, static_cast<uint32_t>(index_), static_cast<uint32_t>(index_ >> 32)},
        {static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32)});
    ++block_;
    word_pos_ = 0;
}

uint32_t ShotRng::next_u32() {
    if (word_pos_ == 4) {
        refill();
    }
    return words_[word_pos_++];
}

bool ShotRng::next_bit() {
    if (bits_left_ == 0) {
        bit_word_ = next_u32();
        bits_left_ = 32;
    }
    bool b = bit_word_ & 1u;
    bit_word_ >>= 1;
    --bits_left_;
    return b;
}

double ShotRng::next_double() {
    uint64_t hi = next_u32() >> 5;  // 27 bits
    uint64_t lo = next_u32() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

uint64_t ShotRng::below(uint64_t n) {
    if (n <= 1) {
        return 0;
    }
    if (n <= (uint64_t{1} << 32)) {
        uint64_t limit = (uint64_t{1} << 32) - ((uint64_t{1} << 32) % n);
        while (true) {
            uint64_t v = next_u32();
            if (v < limit) {
                return v % n;
            }
        }
    }
    uint64_t limit = std::numeric_limits<uint64_t>::max() - (std::numeric_limits<uint64_t>::max() % n);
    while (true) {
        uint64_t v = (static_cast<uint64_t>(next_u32()) << 32) | next_u32();
        if (v < limit) {
            return v % n;
        }
    }
}

}  // namespace aprep
