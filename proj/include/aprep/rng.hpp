#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace aprep {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure; no state.
std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

/// Independent substreams of one (seed, index) pair. Values are part of the
/// output format: changing them changes every golden file.
enum class Stream : uint32_t {
    kMeasurement = 0,
    kNoise = 1,
    kBootstrap = 2,
    kCircuitSampling = 3,
};

/// Counter-based generator addressed by (master_seed, index, stream).
///
/// Block b of a stream is philox4x32_10(counter = {b, stream, index_lo, index_hi},
/// key = {seed_lo, seed_hi}); its four words are returned in order. Bits are
/// taken least-significant first from successive words. Since every stream is
/// a pure function of its address, shots can run on any thread in any order.
class ShotRng {
public:
    using result_type = uint32_t;

    ShotRng(uint64_t seed, uint64_t index, Stream stream = Stream::kMeasurement);

    uint32_t next_u32();
    bool next_bit();
    /// Uniform on [0, 1) with 53 random bits.
    double next_double();
    /// Uniform on [0, n); n > 0. Rejection sampling, no modulo bias.
    uint64_t below(uint64_t n);

    result_type operator()() { return next_u32(); }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<uint32_t>::max(); }

    uint64_t seed() const { return seed_; }
    uint64_t index() const { return index_; }

private:
    void refill();

    uint64_t seed_;
    uint64_t index_;
    uint32_t stream_;
    uint32_t block_ = 0;
    std::array<uint32_t, 4> words_{};
    int word_pos_ = 4;
    uint32_t bit_word_ = 0;
    int bits_left_ = 0;
};

}  // namespace aprep
