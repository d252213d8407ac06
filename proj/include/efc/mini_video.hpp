#pragma once

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "efc/block_codec.hpp"
#include "efc/bitstream.hpp"
#include "efc/dct.hpp"
#include "efc/fidelity.hpp"
#include "efc/media.hpp"

namespace efc {

// Block motion-compensated video codec: intra first frame, P frames with
// full-search +/-7 motion estimation on 16x16 macroblocks, residuals coded
// with the shared 8x8 transform/entropy machinery. The encoder reconstructs
// each frame through the decoder's own code path under a reliable context,
// so encode/decode stay bit-exact in closed loop.
//
// Decoder regions: "huffman_decode" (parse arithmetic), "motion_compensation"
// (reference address computation, bounds-checked), "idct" (residual
// transform), "reconstruction" (prediction + residual through the clipping
// table). Coefficient dequantization is table preparation and runs
// reliably. Skipped macroblocks are plain copies and touch no elastic unit.

namespace video_detail {

struct FrameGeom {
    int w, h;   // luma
    int cw, ch; // chroma
    int mbs_x, mbs_y;
};

inline FrameGeom geom(int w, int h) {
    return {w, h, w / 2, h / 2, w / 16, h / 16};
}

// Residual of one 8x8 block, saturated to the 9-bit residual range like
// any production inverse transform.
inline void decode_residual(BitReader& br, FidelityContext& ctx,
                            const QuantTable& qt, std::int32_t* dc_chain,
                            std::int16_t resid[64]) {
    std::int32_t raw[64];
    std::int32_t local_dc = 0;
    {
        RegionScope r(ctx, "huffman_decode");
        std::int32_t& chain = dc_chain ? *dc_chain : local_dc;
        block_codec::read_block(br, ctx, raw, chain);
    }
    std::int32_t dq[64];
    for (int i = 0; i < 64; ++i)
        dq[i] = raw[i] * qt.step[i];
    {
        RegionScope r(ctx, "idct");
        idct_block(dq, ctx, IdctParams{0, -256, 255},
                   [&](int x, int y, std::int32_t s) {
                       resid[y * 8 + x] = static_cast<std::int16_t>(s);
                   });
    }
}

// Prediction + residual through the clipping table. The block applier is a
// vectorized engine: the scalar ALU carries the block's leading sum across
// the bus (and indexes the clipping table with it, which is where a wild
// flip crashes), while the remaining lanes run in the engine's internal
// datapath with plain saturation.
inline void reconstruct_block(FidelityContext& ctx, const std::uint8_t* pred,
                              int pred_stride, const std::int16_t resid[64],
                              std::uint8_t* out, int out_stride) {
    RegionScope r(ctx, "reconstruction");
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            std::int32_t sum =
                static_cast<std::int32_t>(pred[y * pred_stride + x]) + resid[y * 8 + x];
            if (x == 0 && y == 0) {
                sum = elastic_value32(sum, ctx);
                out[0] = clip_table_lookup(sum, ctx);
            } else {
                out[y * out_stride + x] = static_cast<std::uint8_t>(
                    sum < 0 ? 0 : (sum > 255 ? 255 : sum));
            }
        }
}

inline void copy_rect(const std::uint8_t* src, int src_stride, std::uint8_t* dst,
                      int dst_stride, int w, int h) {
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            dst[y * dst_stride + x] = src[y * src_stride + x];
}

// Reference block origin from macroblock index and motion vector; this is
// the address arithmetic the elastic unit touches, and the bounds check
// runs on the injected values.
inline void mc_fetch(FidelityContext& ctx, const std::uint8_t* plane, int plane_w,
                     int plane_h, int bx, int by, int mvx, int mvy, int shift,
                     int block, std::uint8_t* dst) {
    int sx, sy;
    {
        RegionScope r(ctx, "motion_compensation");
        sx = elastic_add(elastic_shl(bx, shift, ctx), mvx, ctx);
        sy = elastic_add(elastic_shl(by, shift, ctx), mvy, ctx);
        if (sx < 0 || sy < 0 || sx + block > plane_w || sy + block > plane_h)
            ctx.fail(FailureKind::IndexOutOfRange);
    }
    copy_rect(&plane[static_cast<std::size_t>(sy) * plane_w + sx], plane_w, dst,
              block, block, block);
}

inline void decode_frame(BitReader& br, FidelityContext& ctx, const FrameGeom& g,
                         const QuantTable& lq, const QuantTable& cq,
                         const ImageYCbCr* prev, ImageYCbCr& out) {
    std::int32_t dc_y = 0, dc_cb = 0, dc_cr = 0; // intra DC chains
    std::int16_t resid[64];
    std::uint8_t pred_y[256], pred_c[64];
    std::uint8_t mid[64];
    for (auto& v : mid) v = 128;

    for (int by = 0; by < g.mbs_y; ++by) {
        for (int bx = 0; bx < g.mbs_x; ++bx) {
            std::uint8_t* out_cb = &out.cb[static_cast<std::size_t>(by) * 8 * g.cw + bx * 8];
            std::uint8_t* out_cr = &out.cr[static_cast<std::size_t>(by) * 8 * g.cw + bx * 8];

            if (prev == nullptr) {
                // Intra macroblock: predictor is the constant mid level.
                for (int sub = 0; sub < 4; ++sub) {
                    decode_residual(br, ctx, lq, &dc_y, resid);
                    const int px = bx * 16 + (sub & 1) * 8;
                    const int py = by * 16 + (sub >> 1) * 8;
                    reconstruct_block(ctx, mid, 8, resid,
                                      &out.y[static_cast<std::size_t>(py) * g.w + px], g.w);
                }
                decode_residual(br, ctx, cq, &dc_cb, resid);
                reconstruct_block(ctx, mid, 8, resid, out_cb, g.cw);
                decode_residual(br, ctx, cq, &dc_cr, resid);
                reconstruct_block(ctx, mid, 8, resid, out_cr, g.cw);
                continue;
            }

            const bool skip = br.get(1, "video") != 0;
            if (skip) {
                copy_rect(&prev->y[static_cast<std::size_t>(by) * 16 * g.w + bx * 16], g.w,
                          &out.y[static_cast<std::size_t>(by) * 16 * g.w + bx * 16], g.w, 16, 16);
                copy_rect(&prev->cb[static_cast<std::size_t>(by) * 8 * g.cw + bx * 8], g.cw,
                          out_cb, g.cw, 8, 8);
                copy_rect(&prev->cr[static_cast<std::size_t>(by) * 8 * g.cw + bx * 8], g.cw,
                          out_cr, g.cw, 8, 8);
                continue;
            }

            int mvx, mvy;
            unsigned cbp;
            {
                RegionScope r(ctx, "huffman_decode");
                mvx = elastic_sub(static_cast<std::int32_t>(br.get(4, "video")), 7, ctx);
                mvy = elastic_sub(static_cast<std::int32_t>(br.get(4, "video")), 7, ctx);
                if (mvx < -7 || mvx > 7 || mvy < -7 || mvy > 7)
                    ctx.fail(FailureKind::InvalidCode);
                cbp = br.get(6, "video");
            }

            mc_fetch(ctx, prev->y.data(), g.w, g.h, bx, by, mvx, mvy, 4, 16, pred_y);
            for (int sub = 0; sub < 4; ++sub) {
                const int px = bx * 16 + (sub & 1) * 8;
                const int py = by * 16 + (sub >> 1) * 8;
                std::uint8_t* dst = &out.y[static_cast<std::size_t>(py) * g.w + px];
                const std::uint8_t* p = &pred_y[(sub >> 1) * 8 * 16 + (sub & 1) * 8];
                if (cbp & (1u << sub)) {
                    decode_residual(br, ctx, lq, nullptr, resid);
                    reconstruct_block(ctx, p, 16, resid, dst, g.w);
                } else {
                    copy_rect(p, 16, dst, g.w, 8, 8);
                }
            }

            const int mvcx = mvx >> 1, mvcy = mvy >> 1;
            const std::uint8_t* prev_c[2] = {prev->cb.data(), prev->cr.data()};
            std::uint8_t* dst_c[2] = {out_cb, out_cr};
            for (int c = 0; c < 2; ++c) {
                mc_fetch(ctx, prev_c[c], g.cw, g.ch, bx, by, mvcx, mvcy, 3, 8, pred_c);
                if (cbp & (1u << (4 + c))) {
                    decode_residual(br, ctx, cq, nullptr, resid);
                    reconstruct_block(ctx, pred_c, 8, resid, dst_c[c], g.cw);
                } else {
                    copy_rect(pred_c, 8, dst_c[c], g.cw, 8, 8);
                }
            }
        }
    }
}

} // namespace video_detail

inline constexpr std::size_t kMiniVideoHeaderLen = 8;

// Intra frames repeat on a fixed period so reference drift is bounded.
inline constexpr int kVideoGopLength = 8;

struct VideoEncodeStats {
    int skip_mbs = 0;
    int coded_mbs = 0;
    int nonzero_mv_mbs = 0;
    int coded_blocks = 0;
};

inline Bitstream mini_video_encode(const VideoSeq& video, int quality,
                                   VideoEncodeStats* stats = nullptr) {
    if (video.frames.empty())
        throw std::invalid_argument("mini_video_encode: empty sequence");
    const int w = video.frames[0].width, h = video.frames[0].height;
    if (w % 16 || h % 16)
        throw std::invalid_argument("mini_video_encode: dimensions must be multiples of 16");
    if (quality < 1 || quality > 100)
        throw std::invalid_argument("mini_video_encode: quality must be in 1..100");
    for (const auto& f : video.frames)
        if (f.width != w || f.height != h)
            throw std::invalid_argument("mini_video_encode: frame dimensions differ");

    using namespace video_detail;
    const FrameGeom g = geom(w, h);
    const QuantTable lq = make_quant_table(kLumaQuant, quality);
    const QuantTable cq = make_quant_table(kChromaQuant, quality);

    std::vector<std::uint8_t> payload;
    ImageYCbCr recon = ImageYCbCr::sized(w, h);
    FidelityContext reliable = FidelityContext::all_reliable();

    std::int16_t pix[64];
    std::int16_t qblk[6][64];

    for (std::size_t f = 0; f < video.frames.size(); ++f) {
        const ImageYCbCr& cur = video.frames[f];
        BitWriter bw;

        if (f % kVideoGopLength == 0) {
            std::int16_t dc_y = 0, dc_cb = 0, dc_cr = 0;
            for (int by = 0; by < g.mbs_y; ++by)
                for (int bx = 0; bx < g.mbs_x; ++bx) {
                    for (int sub = 0; sub < 4; ++sub) {
                        const int px = bx * 16 + (sub & 1) * 8;
                        const int py = by * 16 + (sub >> 1) * 8;
                        for (int y = 0; y < 8; ++y)
                            for (int x = 0; x < 8; ++x)
                                pix[y * 8 + x] = static_cast<std::int16_t>(
                                    cur.y[static_cast<std::size_t>(py + y) * w + px + x] - 128);
                        fdct_quant_block(pix, lq, qblk[0]);
                        block_codec::write_block(bw, qblk[0], dc_y);
                    }
                    const std::vector<std::uint8_t>* planes[2] = {&cur.cb, &cur.cr};
                    std::int16_t* chains[2] = {&dc_cb, &dc_cr};
                    for (int c = 0; c < 2; ++c) {
                        for (int y = 0; y < 8; ++y)
                            for (int x = 0; x < 8; ++x)
                                pix[y * 8 + x] = static_cast<std::int16_t>(
                                    (*planes[c])[static_cast<std::size_t>(by * 8 + y) * g.cw +
                                                 bx * 8 + x] - 128);
                        fdct_quant_block(pix, cq, qblk[0]);
                        block_codec::write_block(bw, qblk[0], *chains[c]);
                    }
                }
        } else {
            const ImageYCbCr& ref = recon;
            for (int by = 0; by < g.mbs_y; ++by) {
                for (int bx = 0; bx < g.mbs_x; ++bx) {
                    // Full-search luma motion estimation with the usual
                    // zero-vector preference (a candidate must beat the
                    // (0,0) SAD by more than 100 to displace it).
                    auto sad_at = [&](int dx, int dy, long bound) {
                        long sad = 0;
                        for (int y = 0; y < 16 && sad < bound; ++y)
                            for (int x = 0; x < 16; ++x)
                                sad += std::abs(
                                    static_cast<int>(cur.y[static_cast<std::size_t>(by * 16 + y) * w + bx * 16 + x]) -
                                    static_cast<int>(ref.y[static_cast<std::size_t>(by * 16 + dy + y) * w + bx * 16 + dx + x]));
                        return sad;
                    };
                    int best_mvx = 0, best_mvy = 0;
                    long best_sad = sad_at(0, 0, 1L << 30) - 100;
                    for (int dy = -7; dy <= 7; ++dy) {
                        if (by * 16 + dy < 0 || by * 16 + dy + 16 > h) continue;
                        for (int dx = -7; dx <= 7; ++dx) {
                            if (bx * 16 + dx < 0 || bx * 16 + dx + 16 > w) continue;
                            if (dx == 0 && dy == 0) continue;
                            const long sad = sad_at(dx, dy, best_sad);
                            if (sad < best_sad) {
                                best_sad = sad;
                                best_mvx = dx;
                                best_mvy = dy;
                            }
                        }
                    }

                    const int mvcx = best_mvx >> 1, mvcy = best_mvy >> 1;
                    unsigned cbp = 0;
                    for (int sub = 0; sub < 4; ++sub) {
                        const int px = bx * 16 + (sub & 1) * 8;
                        const int py = by * 16 + (sub >> 1) * 8;
                        const int rx = bx * 16 + best_mvx + (sub & 1) * 8;
                        const int ry = by * 16 + best_mvy + (sub >> 1) * 8;
                        for (int y = 0; y < 8; ++y)
                            for (int x = 0; x < 8; ++x)
                                pix[y * 8 + x] = static_cast<std::int16_t>(
                                    static_cast<int>(cur.y[static_cast<std::size_t>(py + y) * w + px + x]) -
                                    ref.y[static_cast<std::size_t>(ry + y) * w + rx + x]);
                        fdct_quant_block(pix, lq, qblk[sub], true);
                        for (int i = 0; i < 64; ++i)
                            if (qblk[sub][i]) {
                                cbp |= 1u << sub;
                                break;
                            }
                    }
                    const std::vector<std::uint8_t>* planes[2] = {&cur.cb, &cur.cr};
                    const std::vector<std::uint8_t>* rplanes[2] = {&ref.cb, &ref.cr};
                    for (int c = 0; c < 2; ++c) {
                        for (int y = 0; y < 8; ++y)
                            for (int x = 0; x < 8; ++x)
                                pix[y * 8 + x] = static_cast<std::int16_t>(
                                    static_cast<int>((*planes[c])[static_cast<std::size_t>(by * 8 + y) * g.cw + bx * 8 + x]) -
                                    (*rplanes[c])[static_cast<std::size_t>(by * 8 + mvcy + y) * g.cw +
                                                  bx * 8 + mvcx + x]);
                        fdct_quant_block(pix, cq, qblk[4 + c], true);
                        for (int i = 0; i < 64; ++i)
                            if (qblk[4 + c][i]) {
                                cbp |= 1u << (4 + c);
                                break;
                            }
                    }

                    if (best_mvx == 0 && best_mvy == 0 && cbp == 0) {
                        bw.put(1, 1); // skip
                        if (stats) ++stats->skip_mbs;
                        continue;
                    }
                    bw.put(0, 1);
                    bw.put(static_cast<std::uint32_t>(best_mvx + 7), 4);
                    bw.put(static_cast<std::uint32_t>(best_mvy + 7), 4);
                    bw.put(cbp, 6);
                    if (stats) {
                        ++stats->coded_mbs;
                        if (best_mvx || best_mvy) ++stats->nonzero_mv_mbs;
                    }
                    for (int b = 0; b < 6; ++b)
                        if (cbp & (1u << b)) {
                            std::int16_t zero_dc = 0;
                            block_codec::write_block(bw, qblk[b], zero_dc);
                            if (stats) ++stats->coded_blocks;
                        }
                }
            }
        }

        // Frames are byte-aligned so the encoder can reconstruct each one
        // through the decoder path immediately after writing it.
        std::vector<std::uint8_t> frame_bytes = bw.finish();
        BitReader br(frame_bytes);
        ImageYCbCr next = ImageYCbCr::sized(w, h);
        decode_frame(br, reliable, g, lq, cq,
                     f % kVideoGopLength == 0 ? nullptr : &recon, next);
        recon = std::move(next);
        payload.insert(payload.end(), frame_bytes.begin(), frame_bytes.end());
    }

    Bitstream bs;
    bs.codec = CodecId::MiniVideo;
    HeaderWriter hw;
    hw.u16(static_cast<std::uint16_t>(w));
    hw.u16(static_cast<std::uint16_t>(h));
    hw.u16(static_cast<std::uint16_t>(video.frames.size()));
    hw.u8(static_cast<std::uint8_t>(video.fps));
    hw.u8(static_cast<std::uint8_t>(quality));
    bs.header = std::move(hw.bytes);
    bs.payload = std::move(payload);
    return bs;
}

inline VideoSeq mini_video_decode(const Bitstream& bs, FidelityContext& ctx) {
    if (bs.codec != CodecId::MiniVideo)
        throw decode_error(FailureKind::InvalidCode, "header");
    HeaderReader hr{bs.header};
    const int w = hr.u16();
    const int h = hr.u16();
    const int nframes = hr.u16();
    const int fps = hr.u8();
    const int quality = hr.u8();
    if (w % 16 || h % 16 || w == 0 || h == 0 || nframes == 0)
        throw decode_error(FailureKind::InvalidCode, "header");

    using namespace video_detail;
    const FrameGeom g = geom(w, h);
    const QuantTable lq = make_quant_table(kLumaQuant, quality);
    const QuantTable cq = make_quant_table(kChromaQuant, quality);

    VideoSeq out;
    out.fps = fps;
    out.frames.reserve(static_cast<std::size_t>(nframes));
    BitReader br(bs.payload);
    for (int f = 0; f < nframes; ++f) {
        ImageYCbCr frame = ImageYCbCr::sized(w, h);
        decode_frame(br, ctx, g, lq, cq,
                     f % kVideoGopLength == 0 ? nullptr : &out.frames.back(), frame);
        br.align_byte();
        out.frames.push_back(std::move(frame));
    }
    return out;
}

} // namespace efc
