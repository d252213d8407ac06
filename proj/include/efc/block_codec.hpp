#pragma once

#include <cstdint>

#include "efc/bitstream.hpp"
#include "efc/dct.hpp"
#include "efc/fidelity.hpp"

namespace efc {

// Fixed canonical entropy code for quantized 8x8 blocks, shared by the
// image and video kernels and baked into the container version:
//   DC    -> 4-bit magnitude category (0..11) + category mantissa bits,
//            differentially coded against the previous block's DC
//   AC    -> (run nibble, category nibble) pairs in zigzag order,
//            (0,0) = end of block, (15,0) = run of 16 zeros
// Negative mantissas use the usual one's-complement-offset convention.

namespace block_codec {

inline unsigned category_of(std::int32_t v) {
    std::uint32_t m = static_cast<std::uint32_t>(v < 0 ? -v : v);
    unsigned c = 0;
    while (m) {
        ++c;
        m >>= 1;
    }
    return c;
}

inline void write_value(BitWriter& bw, std::int32_t v, unsigned category) {
    std::int32_t mant = v;
    if (v < 0) mant = v + (1 << category) - 1;
    bw.put(static_cast<std::uint32_t>(mant), category);
}

// Encoder side, always reliable. Coefficients in raster order.
inline void write_block(BitWriter& bw, const std::int16_t coeffs[64],
                        std::int16_t& dc_pred) {
    std::int16_t zz[64];
    for (int i = 0; i < 64; ++i) zz[i] = coeffs[kZigzag[i]];

    const std::int32_t diff = zz[0] - dc_pred;
    dc_pred = zz[0];
    const unsigned dc_cat = category_of(diff);
    bw.put(dc_cat, 4);
    write_value(bw, diff, dc_cat);

    int last_nz = 0;
    for (int i = 63; i >= 1; --i)
        if (zz[i] != 0) {
            last_nz = i;
            break;
        }
    int run = 0;
    for (int i = 1; i <= last_nz; ++i) {
        if (zz[i] == 0) {
            ++run;
            continue;
        }
        while (run > 15) {
            bw.put(15, 4);
            bw.put(0, 4);
            run -= 16;
        }
        const unsigned cat = category_of(zz[i]);
        bw.put(static_cast<std::uint32_t>(run), 4);
        bw.put(cat, 4);
        write_value(bw, zz[i], cat);
        run = 0;
    }
    if (last_nz < 63) {
        bw.put(0, 4); // EOB
        bw.put(0, 4);
    }
}

// Mantissa back to a signed value; the reconstructed result crosses the
// elastic bus once.
inline std::int32_t extend_value(std::uint32_t mant, unsigned category,
                                 FidelityContext& ctx) {
    std::int32_t exact = static_cast<std::int32_t>(mant);
    if (category > 0 && mant < (1u << (category - 1)))
        exact = static_cast<std::int32_t>(mant) - ((1 << category) - 1);
    return elastic_value32(exact, ctx);
}

// Decoder side; caller must have entered the entropy region. Bounds checks
// run on the injected values, so a flipped position or category surfaces as
// a detected failure instead of memory corruption.
inline void read_block(BitReader& br, FidelityContext& ctx,
                       std::int32_t coeffs[64], std::int32_t& dc_pred) {
    for (int i = 0; i < 64; ++i) coeffs[i] = 0;

    const unsigned dc_cat = br.get(4, "entropy");
    if (dc_cat > 11) ctx.fail(FailureKind::InvalidCode);
    const std::uint32_t dc_mant = dc_cat ? br.get(dc_cat, "entropy") : 0;
    const std::int32_t diff = extend_value(dc_mant, dc_cat, ctx);
    const std::int32_t dc = elastic_add(dc_pred, diff, ctx);
    dc_pred = dc;
    coeffs[0] = dc;

    // A corrupted position that stays inside the block desyncs the scan
    // (coefficients land in the wrong slot); one that escapes the block is
    // the crash.
    std::int32_t pos = 0;
    while (pos < 63) {
        const unsigned run = br.get(4, "entropy");
        const unsigned cat = br.get(4, "entropy");
        if (run == 0 && cat == 0) break; // EOB
        if (cat == 0) {                  // ZRL: skip 16 zeros
            pos = elastic_add(pos, 16, ctx);
            if (pos < 0 || pos > 63) ctx.fail(FailureKind::IndexOutOfRange);
            continue;
        }
        if (cat > 11) ctx.fail(FailureKind::InvalidCode);
        const std::uint32_t mant = br.get(cat, "entropy");
        pos = elastic_add(pos, static_cast<std::int32_t>(run) + 1, ctx);
        if (pos < 0 || pos > 63) ctx.fail(FailureKind::IndexOutOfRange);
        coeffs[kZigzag[pos]] = extend_value(mant, cat, ctx);
    }
}

} // namespace block_codec

// The clipping table every sample-building stage indexes into. Legal sums
// live in [-384, 639]; a wilder index is the model's "crash" and aborts the
// trial as a detected failure in the active region.
inline constexpr int kClipTableLo = -384;
inline constexpr int kClipTableHi = 639;

inline std::uint8_t clip_table_lookup(std::int32_t v, FidelityContext& ctx) {
    if (v < kClipTableLo || v > kClipTableHi)
        ctx.fail(FailureKind::IndexOutOfRange);
    if (v < 0) return 0;
    if (v > 255) return 255;
    return static_cast<std::uint8_t>(v);
}

} // namespace efc
