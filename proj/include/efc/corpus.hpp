#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "efc/media.hpp"
#include "efc/rng.hpp"

namespace efc {

// Deterministic synthetic inputs standing in for raw media samples.
// Same spec -> bit-identical output.
enum class CorpusKind : std::uint8_t {
    AudioSineMix,
    ImageGradient,
    ImagePlasma,
    VideoMovingBlocks,
};

struct CorpusSpec {
    CorpusKind kind = CorpusKind::AudioSineMix;
    std::uint64_t seed = 1;
    // audio
    int sample_rate = 16000;
    double duration_s = 1.0;
    // image / video
    int width = 128;
    int height = 128;
    int frames = 16;
    int fps = 12;
};

namespace detail {

// Quarter-wave-symmetric sine table; audio synthesis is pure integer math
// from here on, so generated samples do not depend on per-sample libm calls.
inline const std::array<std::int16_t, 4096>& sine_table() {
    static const std::array<std::int16_t, 4096> table = [] {
        std::array<std::int16_t, 4096> t{};
        for (int i = 0; i < 4096; ++i)
            t[i] = static_cast<std::int16_t>(
                std::lround(32767.0 * std::sin(2.0 * 3.14159265358979323846 * i / 4096.0)));
        return t;
    }();
    return table;
}

// Seeded integer value-noise lattice, bilinearly interpolated; cell size is
// a power of two so interpolation stays exact in integers.
class ValueNoise {
public:
    ValueNoise(RngStream s, int cell_shift) : cell_shift_(cell_shift) {
        for (auto& row : lattice_)
            for (auto& v : row)
                v = static_cast<int>(s.next_below(256));
    }

    // Returns a value in [0, 255].
    int at(int x, int y) const {
        const int cs = 1 << cell_shift_;
        const int gx = (x >> cell_shift_) & 15, gy = (y >> cell_shift_) & 15;
        const int fx = x & (cs - 1), fy = y & (cs - 1);
        const int v00 = lattice_[gy][gx];
        const int v10 = lattice_[gy][(gx + 1) & 15];
        const int v01 = lattice_[(gy + 1) & 15][gx];
        const int v11 = lattice_[(gy + 1) & 15][(gx + 1) & 15];
        const int top = v00 * (cs - fx) + v10 * fx;
        const int bot = v01 * (cs - fx) + v11 * fx;
        return (top * (cs - fy) + bot * fy) >> (2 * cell_shift_);
    }

private:
    int cell_shift_;
    int lattice_[16][16];
};

inline std::uint8_t clamp_u8(int v) {
    return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
}

} // namespace detail

// Sum of three seeded sinusoids (200-3000 Hz) plus low-amplitude noise;
// peak bounded by 0.70 of full scale by construction.
inline PcmAudio gen_audio(const CorpusSpec& spec) {
    if (spec.duration_s <= 0.0 || spec.sample_rate <= 0)
        throw std::invalid_argument("gen_audio: duration and rate must be positive");
    RngStream rng = RngStream::root(spec.seed).child("audio");
    const auto& tbl = detail::sine_table();

    // Amplitudes sum to 0.66 FS; noise adds at most 0.04 FS.
    const std::int32_t amps[3] = {
        static_cast<std::int32_t>(0.36 * 32767),
        static_cast<std::int32_t>(0.18 * 32767),
        static_cast<std::int32_t>(0.12 * 32767),
    };
    std::uint32_t phase[3], step[3];
    for (int k = 0; k < 3; ++k) {
        const std::uint32_t freq_hz = 200 + rng.next_below(2801);
        // Phase accumulator: 4096-entry table indexed by top bits of a
        // 32-bit phase; step = freq * 2^32 / rate.
        step[k] = static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(freq_hz) << 32) / static_cast<std::uint32_t>(spec.sample_rate));
        phase[k] = rng.next_u64() & 0xFFFFFFFFu;
    }
    const std::int32_t noise_amp = static_cast<std::int32_t>(0.04 * 32767);

    PcmAudio out;
    out.sample_rate = spec.sample_rate;
    const std::size_t n = static_cast<std::size_t>(spec.duration_s * spec.sample_rate);
    out.samples.reserve(n);
    RngStream noise = RngStream::root(spec.seed).child("audio").child("noise");
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t acc = 0;
        for (int k = 0; k < 3; ++k) {
            acc += static_cast<std::int64_t>(amps[k]) * tbl[phase[k] >> 20] / 32767;
            phase[k] += step[k];
        }
        const std::int32_t nz = static_cast<std::int32_t>(noise.next_below(2 * noise_amp + 1)) - noise_amp;
        out.samples.push_back(static_cast<std::int16_t>(acc + nz));
    }
    return out;
}

// Smooth diagonal gradient plus seeded plasma texture; chroma planes are
// gentle seeded fields so the color channels carry signal too.
inline ImageYCbCr gen_image(const CorpusSpec& spec) {
    if (spec.width % 16 || spec.height % 16 || spec.width <= 0 || spec.height <= 0)
        throw std::invalid_argument("gen_image: dimensions must be positive multiples of 16");
    RngStream rng = RngStream::root(spec.seed).child("image");
    const detail::ValueNoise coarse(rng.child("coarse"), 5);
    const detail::ValueNoise fine(rng.child("fine"), 3);
    const bool textured = spec.kind != CorpusKind::ImageGradient;

    ImageYCbCr img = ImageYCbCr::sized(spec.width, spec.height);
    for (int yy = 0; yy < spec.height; ++yy) {
        for (int xx = 0; xx < spec.width; ++xx) {
            const int grad = ((xx + yy) * 160) / (spec.width + spec.height - 2) + 32;
            int v = grad;
            if (textured)
                v += (coarse.at(xx, yy) - 128) / 3 + (fine.at(xx, yy) - 128) / 6;
            img.y[static_cast<std::size_t>(yy) * spec.width + xx] = detail::clamp_u8(v);
        }
    }
    const detail::ValueNoise cbn(rng.child("cb"), 5);
    const detail::ValueNoise crn(rng.child("cr"), 5);
    const int cw = img.chroma_width(), ch = img.chroma_height();
    for (int yy = 0; yy < ch; ++yy) {
        for (int xx = 0; xx < cw; ++xx) {
            img.cb[static_cast<std::size_t>(yy) * cw + xx] =
                detail::clamp_u8(128 + (cbn.at(xx, yy) - 128) / 4 + (xx * 24) / cw - 12);
            img.cr[static_cast<std::size_t>(yy) * cw + xx] =
                detail::clamp_u8(128 + (crn.at(xx, yy) - 128) / 4 + (yy * 24) / ch - 12);
        }
    }
    return img;
}

// Static textured background with two seeded rectangles in rigid integer
// motion. One rectangle slides horizontally through the frame interior; the
// other hugs the right edge moving vertically, so edge macroblocks stay in
// play for motion compensation.
inline VideoSeq gen_video(const CorpusSpec& spec) {
    if (spec.frames < 8)
        throw std::invalid_argument("gen_video: need at least 8 frames");
    CorpusSpec base = spec;
    base.kind = CorpusKind::ImagePlasma;
    const ImageYCbCr background = gen_image(base);

    RngStream rng = RngStream::root(spec.seed).child("video");
    struct Rect {
        int x, y, w, h, vx, vy, fill, cbf, crf;
    };
    Rect rects[2];
    rects[0] = {8 + static_cast<int>(rng.next_below(16)),
                24 + static_cast<int>(rng.next_below(32)),
                40, 28,
                2, 1,
                220, 90, 160};
    rects[1] = {spec.width - 24,
                8 + static_cast<int>(rng.next_below(24)),
                20, 36,
                0, 2,
                48, 170, 100};

    VideoSeq seq;
    seq.fps = spec.fps;
    seq.frames.reserve(static_cast<std::size_t>(spec.frames));
    for (int f = 0; f < spec.frames; ++f) {
        ImageYCbCr frame = background;
        for (const Rect& r0 : rects) {
            Rect r = r0;
            r.x += r.vx * f;
            r.y += r.vy * f;
            // wrap motion keeps rectangles inside the frame
            r.x = ((r.x % spec.width) + spec.width) % spec.width;
            r.y = ((r.y % spec.height) + spec.height) % spec.height;
            for (int dy = 0; dy < r.h; ++dy) {
                const int py = r.y + dy;
                if (py >= spec.height) break;
                for (int dx = 0; dx < r.w; ++dx) {
                    const int px = r.x + dx;
                    if (px >= spec.width) break;
                    frame.y[static_cast<std::size_t>(py) * spec.width + px] =
                        static_cast<std::uint8_t>(r.fill);
                    frame.cb[static_cast<std::size_t>(py / 2) * frame.chroma_width() + px / 2] =
                        static_cast<std::uint8_t>(r.cbf);
                    frame.cr[static_cast<std::size_t>(py / 2) * frame.chroma_width() + px / 2] =
                        static_cast<std::uint8_t>(r.crf);
                }
            }
        }
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

// The version-pinned standard corpus referenced by the acceptance suite.
inline CorpusSpec standard_audio_spec() {
    CorpusSpec s;
    s.kind = CorpusKind::AudioSineMix;
    s.seed = 1001;
    s.sample_rate = 16000;
    s.duration_s = 1.0;
    return s;
}

inline CorpusSpec standard_image_spec() {
    CorpusSpec s;
    s.kind = CorpusKind::ImagePlasma;
    s.seed = 2002;
    s.width = 128;
    s.height = 128;
    return s;
}

inline CorpusSpec standard_video_spec() {
    CorpusSpec s;
    s.kind = CorpusKind::VideoMovingBlocks;
    s.seed = 3003;
    s.width = 128;
    s.height = 128;
    s.frames = 16;
    s.fps = 12;
    return s;
}

} // namespace efc
