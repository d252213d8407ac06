#pragma once

#include <cstdint>

#include "efc/bitstream.hpp"
#include "efc/fidelity.hpp"
#include "efc/media.hpp"

namespace efc {

// Step-table ADPCM, 4 bits per sample. The decoder splits each sample into
// four fidelity regions: "quantization" rebuilds the difference magnitude,
// "predictor" forms the predicted sample from the two previous outputs with
// a leak term so injected errors decay, "reconstruction" adds prediction
// and difference (saturated), "step_size" adapts the quantizer scale.
// Every arithmetic site uses 16-bit elastic ops; the encoder runs the same
// code path under an all-reliable context, so the reliable round trip is
// exactly reproducible.
//
// Scale adaptation keeps a wide fixed-point accumulator (64 units per table
// index) with a 1/128 leak, and derives the clamped table index from it.
// Adapting in the wide domain bounds a single bus flip to a couple of index
// steps, and the leak forgets any surviving offset; both properties come
// straight from how production speech codecs adapt their scale factor.

namespace adpcm_detail {

inline constexpr std::int16_t kStepTable[89] = {
    7,     8,     9,     10,    11,    12,    13,    14,    16,    17,
    19,    21,    23,    25,    28,    31,    34,    37,    41,    45,
    50,    55,    60,    66,    73,    80,    88,    97,    107,   118,
    130,   143,   157,   173,   190,   209,   230,   253,   279,   307,
    337,   371,   408,   449,   494,   544,   598,   658,   724,   796,
    876,   963,   1060,  1166,  1282,  1411,  1552,  1707,  1878,  2066,
    2272,  2499,  2749,  3024,  3327,  3660,  4026,  4428,  4871,  5358,
    5894,  6484,  7132,  7845,  8630,  9493,  10442, 11487, 12635, 13899,
    15289, 16818, 18500, 20350, 22385, 24623, 27086, 29794, 32767,
};

inline constexpr std::int16_t kIndexAdjust[16] = {
    -1, -1, -1, -1, 2, 4, 6, 8,
    -1, -1, -1, -1, 2, 4, 6, 8,
};

inline constexpr std::int16_t kScaleShift = 8;            // 256 ylog units per index
inline constexpr std::int16_t kScaleMax = 88 << kScaleShift;

struct State {
    std::int16_t s1 = 0;   // previous output sample
    std::int16_t s2 = 0;   // sample before that
    std::int16_t ylog = 0; // wide-domain scale accumulator
    std::int16_t index = 0;
};

// Region handles resolved once per stream; the per-sample loop is hot.
struct Regions {
    FidelityContext::RegionHandle quantization;
    FidelityContext::RegionHandle predictor;
    FidelityContext::RegionHandle reconstruction;
    FidelityContext::RegionHandle step_size;

    explicit Regions(FidelityContext& ctx)
        : quantization(ctx.resolve("quantization")),
          predictor(ctx.resolve("predictor")),
          reconstruction(ctx.resolve("reconstruction")),
          step_size(ctx.resolve("step_size")) {}
};

inline std::int16_t predict(const State& st, FidelityContext& ctx, const Regions& rg) {
    RegionScope r(ctx, rg.predictor);
    const std::int16_t d = elastic_sub16(st.s1, st.s2, ctx);
    const std::int16_t trend = elastic_shr16(d, 1, ctx);
    const std::int16_t leak = elastic_shr16(st.s1, 4, ctx);
    std::int16_t pred = elastic_add16(st.s1, trend, ctx);
    return elastic_sub16(pred, leak, ctx);
}

// Applies one 4-bit code; shared verbatim between decoder and the
// encoder's reconstruction replica.
inline std::int16_t decode_step(State& st, unsigned code, FidelityContext& ctx,
                                const Regions& rg) {
    const std::int16_t step = kStepTable[st.index];

    std::int16_t dq;
    {
        RegionScope r(ctx, rg.quantization);
        std::int16_t d = elastic_shr16(step, 3, ctx);
        if (code & 4) d = elastic_add16(d, step, ctx);
        if (code & 2) d = elastic_add16(d, elastic_shr16(step, 1, ctx), ctx);
        if (code & 1) d = elastic_add16(d, elastic_shr16(step, 2, ctx), ctx);
        dq = (code & 8) ? elastic_sub16(0, d, ctx) : d;
    }

    const std::int16_t pred = predict(st, ctx, rg);

    std::int16_t sample;
    {
        RegionScope r(ctx, rg.reconstruction);
        std::int32_t exact = static_cast<std::int32_t>(pred) + dq;
        if (exact > 32767) exact = 32767;
        if (exact < -32768) exact = -32768;
        sample = elastic_value16(exact, ctx);
    }

    {
        RegionScope r(ctx, rg.step_size);
        const std::int16_t leak = elastic_shr16(st.ylog, 7, ctx);
        std::int16_t y = elastic_sub16(st.ylog, leak, ctx);
        y = elastic_add16(y, static_cast<std::int16_t>(kIndexAdjust[code & 15] << kScaleShift), ctx);
        if (y < 0) y = 0;
        if (y > kScaleMax) y = kScaleMax;
        st.ylog = y;
        // Table addressing is excluded from injection, like all pointer
        // arithmetic; the clamp keeps the lookup in bounds regardless of
        // what the adaptation ops were hit with.
        std::int16_t idx = static_cast<std::int16_t>(y >> kScaleShift);
        if (idx < 0) idx = 0;
        if (idx > 88) idx = 88;
        st.index = idx;
    }

    st.s2 = st.s1;
    st.s1 = sample;
    return sample;
}

} // namespace adpcm_detail

inline Bitstream adpcm_encode(const PcmAudio& audio) {
    if (audio.samples.empty())
        throw std::invalid_argument("adpcm_encode: empty input");

    FidelityContext ctx = FidelityContext::all_reliable();
    const adpcm_detail::Regions rg(ctx);
    adpcm_detail::State st;
    BitWriter bw;
    for (const std::int16_t sample : audio.samples) {
        const std::int16_t pred = adpcm_detail::predict(st, ctx, rg);
        std::int32_t diff = static_cast<std::int32_t>(sample) - pred;
        unsigned code = 0;
        if (diff < 0) {
            code = 8;
            diff = -diff;
        }
        std::int32_t s = adpcm_detail::kStepTable[st.index];
        if (diff >= s) { code |= 4; diff -= s; }
        s >>= 1;
        if (diff >= s) { code |= 2; diff -= s; }
        s >>= 1;
        if (diff >= s) code |= 1;
        adpcm_detail::decode_step(st, code, ctx, rg);
        bw.put(code, 4);
    }

    Bitstream bs;
    bs.codec = CodecId::Adpcm;
    HeaderWriter hw;
    hw.u32(static_cast<std::uint32_t>(audio.sample_rate));
    hw.u32(static_cast<std::uint32_t>(audio.samples.size()));
    bs.header = std::move(hw.bytes);
    bs.payload = bw.finish();
    return bs;
}

inline constexpr std::size_t kAdpcmHeaderLen = 8;

inline PcmAudio adpcm_decode(const Bitstream& bs, FidelityContext& ctx) {
    if (bs.codec != CodecId::Adpcm)
        throw decode_error(FailureKind::InvalidCode, "header");
    HeaderReader hr{bs.header};
    PcmAudio out;
    out.sample_rate = static_cast<int>(hr.u32());
    const std::uint32_t count = hr.u32();
    out.samples.reserve(count);

    const adpcm_detail::Regions rg(ctx);
    adpcm_detail::State st;
    BitReader br(bs.payload);
    for (std::uint32_t i = 0; i < count; ++i) {
        const unsigned code = br.get(4, "adpcm");
        out.samples.push_back(adpcm_detail::decode_step(st, code, ctx, rg));
    }
    return out;
}

} // namespace efc
