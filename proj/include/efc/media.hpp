#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace efc {

struct PcmAudio {
    std::vector<std::int16_t> samples;
    int sample_rate = 16000;
};

// 4:2:0 planar image: full-res Y, half-res Cb/Cr.
struct ImageYCbCr {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> y;  // width * height
    std::vector<std::uint8_t> cb; // (width/2) * (height/2)
    std::vector<std::uint8_t> cr;

    int chroma_width() const { return width / 2; }
    int chroma_height() const { return height / 2; }

    static ImageYCbCr sized(int w, int h) {
        if (w <= 0 || h <= 0 || w % 2 || h % 2)
            throw std::invalid_argument("ImageYCbCr: dimensions must be positive and even");
        ImageYCbCr img;
        img.width = w;
        img.height = h;
        img.y.assign(static_cast<std::size_t>(w) * h, 0);
        img.cb.assign(static_cast<std::size_t>(w / 2) * (h / 2), 128);
        img.cr.assign(static_cast<std::size_t>(w / 2) * (h / 2), 128);
        return img;
    }

    bool same_shape(const ImageYCbCr& o) const {
        return width == o.width && height == o.height;
    }

    bool operator==(const ImageYCbCr& o) const {
        return width == o.width && height == o.height &&
               y == o.y && cb == o.cb && cr == o.cr;
    }
};

struct VideoSeq {
    std::vector<ImageYCbCr> frames;
    int fps = 12;

    bool same_shape(const VideoSeq& o) const {
        if (frames.size() != o.frames.size()) return false;
        for (std::size_t i = 0; i < frames.size(); ++i)
            if (!frames[i].same_shape(o.frames[i])) return false;
        return true;
    }

    bool operator==(const VideoSeq& o) const {
        return fps == o.fps && frames == o.frames;
    }
};

} // namespace efc
