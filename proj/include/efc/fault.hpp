#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "efc/rng.hpp"

namespace efc {

// The elastic datapath is a 32-bit bus; all arithmetic wraps.
using word32 = std::uint32_t;

// Contiguous span of bus bits eligible for flips, lo = LSB, hi inclusive.
struct BitRange {
    std::uint8_t lo = 0;
    std::uint8_t hi = 31;

    BitRange() = default;
    BitRange(unsigned l, unsigned h) : lo(static_cast<std::uint8_t>(l)),
                                       hi(static_cast<std::uint8_t>(h)) {
        if (l > h || h > 31)
            throw std::invalid_argument("BitRange: need 0 <= lo <= hi <= 31");
    }

    unsigned width() const { return static_cast<unsigned>(hi - lo) + 1u; }

    bool contains(unsigned bit) const { return bit >= lo && bit <= hi; }

    word32 mask() const {
        word32 m = (hi == 31) ? 0xFFFFFFFFu : ((1u << (hi + 1)) - 1u);
        return m & ~((1u << lo) - 1u);
    }
};

enum class FlipModel : std::uint8_t {
    SingleBitUniform,  // an injection event flips exactly one bit in the range
    PerBitIndependent, // every in-range bit flips independently
};

// One elastic unit's unreliability: event rate, eligible bits, flip model.
struct FaultSpec {
    double rate = 0.0;
    BitRange range{};
    FlipModel model = FlipModel::SingleBitUniform;

    FaultSpec() = default;
    FaultSpec(double r, BitRange b, FlipModel m = FlipModel::SingleBitUniform)
        : rate(r), range(b), model(m) {
        if (!(r >= 0.0 && r <= 1.0))
            throw std::invalid_argument("FaultSpec: rate must be in [0,1]");
    }

    bool reliable() const { return rate <= 0.0; }

    static FaultSpec reliable_spec() { return FaultSpec{}; }
};

// Applies one injection opportunity to a bus value using a single 64-bit
// draw. The high 53 bits decide the event; remaining entropy is re-mixed
// for bit selection so the two decisions stay decorrelated.
inline word32 inject_word_with(word32 value, const FaultSpec& spec, std::uint64_t draw) {
    if (spec.reliable()) return value;
    switch (spec.model) {
    case FlipModel::SingleBitUniform: {
        const double u = static_cast<double>(draw >> 11) * 0x1.0p-53;
        if (u >= spec.rate) return value;
        const std::uint64_t src = detail::mix64(draw ^ 0xA5A5A5A55A5A5A5Aull);
        const std::uint32_t off = static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(src) * spec.range.width()) >> 64);
        return value ^ (word32{1} << (spec.range.lo + off));
    }
    case FlipModel::PerBitIndependent: {
        // Expand the single draw into one uniform per in-range bit.
        std::uint64_t s = detail::mix64(draw ^ 0xC3C3C3C33C3C3C3Cull);
        word32 out = value;
        for (unsigned bit = spec.range.lo; bit <= spec.range.hi; ++bit) {
            s += detail::kGolden;
            const double u = static_cast<double>(detail::mix64(s) >> 11) * 0x1.0p-53;
            if (u < spec.rate) out ^= word32{1} << bit;
        }
        return out;
    }
    }
    return value;
}

// Consumes exactly one draw from the stream.
inline word32 inject_word(word32 value, const FaultSpec& spec, RngStream& rng) {
    return inject_word_with(value, spec, rng.next_u64());
}

// Analytic marginal: probability that a given bus bit flips per operation.
inline double flip_probability(const FaultSpec& spec, unsigned bit) {
    if (bit > 31) throw std::invalid_argument("flip_probability: bit > 31");
    if (!spec.range.contains(bit) || spec.reliable()) return 0.0;
    switch (spec.model) {
    case FlipModel::SingleBitUniform:
        return spec.rate / static_cast<double>(spec.range.width());
    case FlipModel::PerBitIndependent:
        return spec.rate;
    }
    return 0.0;
}

inline const char* flip_model_name(FlipModel m) {
    return m == FlipModel::SingleBitUniform ? "single" : "perbit";
}

inline FlipModel flip_model_from_name(const std::string& s) {
    if (s == "single") return FlipModel::SingleBitUniform;
    if (s == "perbit") return FlipModel::PerBitIndependent;
    throw std::invalid_argument("unknown flip model: " + s);
}

} // namespace efc
