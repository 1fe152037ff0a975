#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every
// (seed, counter) pair maps to an independent block of four 32-bit words, so
// per-shot streams need no shared state.

#include <array>
#include <cstdint>

namespace triwork {

class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    Block operator()(Block counter) const {
        std::array<std::uint32_t, 2> key = key_;
        for (int round = 0; round < 10; ++round) {
            counter = single_round(counter, key);
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return counter;
    }

    // Uniform doubles in [0, 1) for (stream, index); two per call.
    std::array<double, 2> uniforms(std::uint64_t index, std::uint32_t stream = 0) const {
        const Block out = (*this)({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, 0});
        const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
        return {static_cast<double>(a >> 11) * 0x1.0p-53, static_cast<double>(b >> 11) * 0x1.0p-53};
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

    static Block single_round(const Block& c, const std::array<std::uint32_t, 2>& k) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }

    std::array<std::uint32_t, 2> key_;
};

} // namespace triwork
