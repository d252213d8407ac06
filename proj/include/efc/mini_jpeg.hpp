#pragma once

#include <cstdint>
#include <vector>

#include "efc/block_codec.hpp"
#include "efc/bitstream.hpp"
#include "efc/dct.hpp"
#include "efc/fidelity.hpp"
#include "efc/media.hpp"

namespace efc {

// Block-transform image codec over 8x8 fixed-point DCT blocks. Luma is
// coded at full resolution; chroma is coded at half the stored 4:2:0
// resolution and interpolated back on decode, which is where the
// "upsample" fidelity region lives. Planes are coded sequentially (all Y
// blocks, then Cb, then Cr) with per-plane DC prediction.
//
// Decoder regions: "entropy_decode", "dequantize", "idct", "upsample".

namespace jpeg_detail {

inline int pad8(int v) { return (v + 7) & ~7; }

// Gathers one 8x8 block with edge replication.
inline void gather_block(const std::vector<std::uint8_t>& plane, int w, int h,
                         int bx, int by, std::int16_t out[64]) {
    for (int y = 0; y < 8; ++y) {
        const int sy = std::min(by * 8 + y, h - 1);
        for (int x = 0; x < 8; ++x) {
            const int sx = std::min(bx * 8 + x, w - 1);
            out[y * 8 + x] = static_cast<std::int16_t>(
                plane[static_cast<std::size_t>(sy) * w + sx] - 128);
        }
    }
}

inline void encode_plane(BitWriter& bw, const std::vector<std::uint8_t>& plane,
                         int w, int h, const QuantTable& qt) {
    const int bw8 = pad8(w) / 8, bh8 = pad8(h) / 8;
    std::int16_t dc_pred = 0;
    std::int16_t pix[64];
    std::int16_t q[64];
    for (int by = 0; by < bh8; ++by)
        for (int bx = 0; bx < bw8; ++bx) {
            gather_block(plane, w, h, bx, by, pix);
            fdct_quant_block(pix, qt, q);
            block_codec::write_block(bw, q, dc_pred);
        }
}

inline void decode_plane(BitReader& br, FidelityContext& ctx,
                         std::vector<std::uint8_t>& plane, int w, int h,
                         const QuantTable& qt) {
    const int bw8 = pad8(w) / 8, bh8 = pad8(h) / 8;
    std::int32_t dc_pred = 0;
    std::int32_t raw[64];
    std::int32_t dq[64];
    for (int by = 0; by < bh8; ++by)
        for (int bx = 0; bx < bw8; ++bx) {
            {
                RegionScope r(ctx, "entropy_decode");
                block_codec::read_block(br, ctx, raw, dc_pred);
            }
            {
                RegionScope r(ctx, "dequantize");
                for (int i = 0; i < 64; ++i)
                    dq[i] = raw[i] ? elastic_mul(raw[i], qt.step[i], ctx) : 0;
            }
            {
                RegionScope r(ctx, "idct");
                idct_block(dq, ctx, IdctParams{128, 0, 255},
                           [&](int x, int y, std::int32_t s) {
                               const int px = bx * 8 + x, py = by * 8 + y;
                               if (px < w && py < h)
                                   plane[static_cast<std::size_t>(py) * w + px] =
                                       static_cast<std::uint8_t>(s);
                           });
            }
        }
}

inline std::uint8_t at_clamped(const std::vector<std::uint8_t>& p, int w, int h,
                               int x, int y) {
    if (x >= w) x = w - 1;
    if (y >= h) y = h - 1;
    return p[static_cast<std::size_t>(y) * w + x];
}

// Quarter-res coded plane -> half-res stored plane, 2x bilinear. Each
// interpolated sample is one fused elastic op whose result indexes the
// clipping table.
inline void upsample_plane(const std::vector<std::uint8_t>& q, int qw, int qh,
                           std::vector<std::uint8_t>& out, int ow, int oh,
                           FidelityContext& ctx) {
    for (int y = 0; y < qh; ++y) {
        for (int x = 0; x < qw; ++x) {
            const int a = q[static_cast<std::size_t>(y) * qw + x];
            const int b = at_clamped(q, qw, qh, x + 1, y);
            const int c = at_clamped(q, qw, qh, x, y + 1);
            const int d = at_clamped(q, qw, qh, x + 1, y + 1);
            const int ox = 2 * x, oy = 2 * y;
            out[static_cast<std::size_t>(oy) * ow + ox] = static_cast<std::uint8_t>(a);
            if (ox + 1 < ow)
                out[static_cast<std::size_t>(oy) * ow + ox + 1] =
                    clip_table_lookup(elastic_value32((a + b + 1) >> 1, ctx), ctx);
            if (oy + 1 < oh)
                out[static_cast<std::size_t>(oy + 1) * ow + ox] =
                    clip_table_lookup(elastic_value32((a + c + 1) >> 1, ctx), ctx);
            if (ox + 1 < ow && oy + 1 < oh)
                out[static_cast<std::size_t>(oy + 1) * ow + ox + 1] =
                    clip_table_lookup(elastic_value32((a + b + c + d + 2) >> 2, ctx), ctx);
        }
    }
}

} // namespace jpeg_detail

inline Bitstream mini_jpeg_encode(const ImageYCbCr& img, int quality) {
    if (img.width % 16 || img.height % 16 || img.width <= 0 || img.height <= 0)
        throw std::invalid_argument("mini_jpeg_encode: dimensions must be multiples of 16");
    if (quality < 1 || quality > 100)
        throw std::invalid_argument("mini_jpeg_encode: quality must be in 1..100");

    const QuantTable lq = make_quant_table(kLumaQuant, quality);
    const QuantTable cq = make_quant_table(kChromaQuant, quality);

    // Chroma is coded at half the stored resolution (2x2 box filter).
    const int cw = img.chroma_width(), ch = img.chroma_height();
    const int qw = cw / 2, qh = ch / 2;
    auto downsample = [&](const std::vector<std::uint8_t>& p) {
        std::vector<std::uint8_t> q(static_cast<std::size_t>(qw) * qh);
        for (int y = 0; y < qh; ++y)
            for (int x = 0; x < qw; ++x) {
                const int s = p[static_cast<std::size_t>(2 * y) * cw + 2 * x] +
                              p[static_cast<std::size_t>(2 * y) * cw + 2 * x + 1] +
                              p[static_cast<std::size_t>(2 * y + 1) * cw + 2 * x] +
                              p[static_cast<std::size_t>(2 * y + 1) * cw + 2 * x + 1];
                q[static_cast<std::size_t>(y) * qw + x] =
                    static_cast<std::uint8_t>((s + 2) >> 2);
            }
        return q;
    };

    BitWriter bw;
    jpeg_detail::encode_plane(bw, img.y, img.width, img.height, lq);
    jpeg_detail::encode_plane(bw, downsample(img.cb), qw, qh, cq);
    jpeg_detail::encode_plane(bw, downsample(img.cr), qw, qh, cq);

    Bitstream bs;
    bs.codec = CodecId::MiniJpeg;
    HeaderWriter hw;
    hw.u16(static_cast<std::uint16_t>(img.width));
    hw.u16(static_cast<std::uint16_t>(img.height));
    hw.u8(static_cast<std::uint8_t>(quality));
    bs.header = std::move(hw.bytes);
    bs.payload = bw.finish();
    return bs;
}

inline constexpr std::size_t kMiniJpegHeaderLen = 5;

inline ImageYCbCr mini_jpeg_decode(const Bitstream& bs, FidelityContext& ctx) {
    if (bs.codec != CodecId::MiniJpeg)
        throw decode_error(FailureKind::InvalidCode, "header");
    HeaderReader hr{bs.header};
    const int w = hr.u16();
    const int h = hr.u16();
    const int quality = hr.u8();
    if (w % 16 || h % 16 || w == 0 || h == 0)
        throw decode_error(FailureKind::InvalidCode, "header");

    const QuantTable lq = make_quant_table(kLumaQuant, quality);
    const QuantTable cq = make_quant_table(kChromaQuant, quality);
    const int cw = w / 2, chh = h / 2;
    const int qw = cw / 2, qh = chh / 2;

    ImageYCbCr img = ImageYCbCr::sized(w, h);
    BitReader br(bs.payload);
    jpeg_detail::decode_plane(br, ctx, img.y, w, h, lq);

    std::vector<std::uint8_t> qcb(static_cast<std::size_t>(qw) * qh);
    std::vector<std::uint8_t> qcr(static_cast<std::size_t>(qw) * qh);
    jpeg_detail::decode_plane(br, ctx, qcb, qw, qh, cq);
    jpeg_detail::decode_plane(br, ctx, qcr, qw, qh, cq);

    {
        RegionScope r(ctx, "upsample");
        jpeg_detail::upsample_plane(qcb, qw, qh, img.cb, cw, chh, ctx);
        jpeg_detail::upsample_plane(qcr, qw, qh, img.cr, cw, chh, ctx);
    }
    return img;
}

} // namespace efc
