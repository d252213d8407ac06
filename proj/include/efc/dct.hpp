#pragma once

#include <cstdint>

#include "efc/fidelity.hpp"

namespace efc {

// Fixed-point 8x8 DCT-II/DCT-III pair. Basis rows are scaled by 2^11 per
// axis (2^22 in 2-D): B[u][x] = round(2048 * c_u * cos((2x+1)u*pi/16)),
// c_0 = 1/(2*sqrt(2)), c_u = 1/2. No floating point anywhere in the path.
inline constexpr std::int32_t kDctBasis[8][8] = {
    {  724,   724,   724,   724,   724,   724,   724,   724},
    { 1004,   851,   569,   200,  -200,  -569,  -851, -1004},
    {  946,   392,  -392,  -946,  -946,  -392,   392,   946},
    {  851,  -200, -1004,  -569,   569,  1004,   200,  -851},
    {  724,  -724,  -724,   724,   724,  -724,  -724,   724},
    {  569, -1004,   200,   851,  -851,  -200,  1004,  -569},
    {  392,  -946,   946,  -392,  -392,   946,  -946,   392},
    {  200,  -569,   851, -1004,  1004,  -851,   569,  -200},
};

inline constexpr int kDctScaleBits = 22;
inline constexpr std::int64_t kDctRound = 1ll << (kDctScaleBits - 1);

inline constexpr int kZigzag[64] = {
     0,  1,  8, 16,  9,  2,  3, 10,
    17, 24, 32, 25, 18, 11,  4,  5,
    12, 19, 26, 33, 40, 48, 41, 34,
    27, 20, 13,  6,  7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36,
    29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46,
    53, 60, 61, 54, 47, 55, 62, 63,
};

// Standard quantization tables, scaled by the usual quality mapping.
inline constexpr int kLumaQuant[64] = {
    16, 11, 10, 16, 24, 40, 51, 61,
    12, 12, 14, 19, 26, 58, 60, 55,
    14, 13, 16, 24, 40, 57, 69, 56,
    14, 17, 22, 29, 51, 87, 80, 62,
    18, 22, 37, 56, 68, 109, 103, 77,
    24, 35, 55, 64, 81, 104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101,
    72, 92, 95, 98, 112, 100, 103, 99,
};

inline constexpr int kChromaQuant[64] = {
    17, 18, 24, 47, 99, 99, 99, 99,
    18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99,
    47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
};

struct QuantTable {
    std::int32_t step[64]; // raster order
};

inline QuantTable make_quant_table(const int* base, int quality) {
    if (quality < 1) quality = 1;
    if (quality > 100) quality = 100;
    const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
    QuantTable t{};
    for (int i = 0; i < 64; ++i) {
        int q = (base[i] * scale + 50) / 100;
        if (q < 1) q = 1;
        if (q > 255) q = 255;
        t.step[i] = q;
    }
    return t;
}

// Forward transform + quantization (encoder side, always reliable).
// Input in raster order; output quantized coefficients in raster order.
// Deadzone mode truncates instead of rounding, the usual choice for inter
// residuals so closed-loop coding converges instead of limit-cycling.
inline void fdct_quant_block(const std::int16_t in[64], const QuantTable& qt,
                             std::int16_t out[64], bool deadzone = false) {
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            std::int64_t acc = 0;
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    acc += static_cast<std::int64_t>(in[y * 8 + x]) *
                           kDctBasis[u][x] * kDctBasis[v][y];
            const std::int32_t coeff =
                static_cast<std::int32_t>((acc + kDctRound) >> kDctScaleBits);
            const std::int32_t qs = qt.step[v * 8 + u];
            const std::int32_t round = deadzone ? 0 : qs / 2;
            const std::int32_t q =
                coeff >= 0 ? (coeff + round) / qs : -((-coeff + round) / qs);
            out[v * 8 + u] = static_cast<std::int16_t>(q);
        }
    }
}

struct IdctParams {
    int level_shift = 0; // added in the accumulator domain (e.g. 128 for intra)
    int clamp_lo = 0;
    int clamp_hi = 255;
};

// Inverse transform of dequantized coefficients (raster order). Per output
// sample the full-scale accumulator crosses the elastic bus once; the
// descale shift and saturation are part of the hardened store path, so a
// flip at bus bit b perturbs the sample by at most 2^(b-22) before the
// output clamp. Nonzero coefficients drive a sparse accumulation.
template <typename OutFn>
void idct_block(const std::int32_t dequant[64], FidelityContext& ctx,
                const IdctParams& p, OutFn&& emit) {
    int nz_idx[64];
    std::int32_t nz_val[64];
    int nnz = 0;
    for (int i = 0; i < 64; ++i)
        if (dequant[i] != 0) {
            nz_idx[nnz] = i;
            nz_val[nnz] = dequant[i];
            ++nnz;
        }

    const std::int64_t base = kDctRound +
        (static_cast<std::int64_t>(p.level_shift) << kDctScaleBits);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            std::int64_t acc = base;
            for (int k = 0; k < nnz; ++k) {
                const int u = nz_idx[k] & 7;
                const int v = nz_idx[k] >> 3;
                acc += static_cast<std::int64_t>(nz_val[k]) *
                       kDctBasis[u][x] * kDctBasis[v][y];
            }
            // 32-bit bus truncation, then reliable descale/saturate.
            const std::int32_t bus =
                elastic_value32(static_cast<std::int32_t>(acc), ctx);
            std::int32_t s = bus >> kDctScaleBits;
            if (s < p.clamp_lo) s = p.clamp_lo;
            if (s > p.clamp_hi) s = p.clamp_hi;
            emit(x, y, s);
        }
    }
}

} // namespace efc
