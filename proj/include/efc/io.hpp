#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "efc/media.hpp"

namespace efc {

// Writes via a temp file in the target directory plus rename, so consumers
// never observe a partial file.
inline void atomic_write_file(const std::string& path, const void* data,
                              std::size_t size) {
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open for write: " + tmp);
    const std::size_t written = size ? std::fwrite(data, 1, size, f) : 0;
    const bool ok = written == size && std::fclose(f) == 0;
    if (!ok) {
        std::remove(tmp.c_str());
        throw std::runtime_error("short write: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed: " + path);
    }
}

inline void atomic_write_file(const std::string& path, const std::string& text) {
    atomic_write_file(path, text.data(), text.size());
}

inline void atomic_write_file(const std::string& path,
                              const std::vector<std::uint8_t>& bytes) {
    atomic_write_file(path, bytes.data(), bytes.size());
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::fseek(f, 0, SEEK_END);
    const long n = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    std::vector<std::uint8_t> out(n > 0 ? static_cast<std::size_t>(n) : 0);
    if (!out.empty() && std::fread(out.data(), 1, out.size(), f) != out.size()) {
        std::fclose(f);
        throw std::runtime_error("short read: " + path);
    }
    std::fclose(f);
    return out;
}

// --- human-inspection exports ----------------------------------------------

inline std::vector<std::uint8_t> wav_bytes(const PcmAudio& audio) {
    const std::uint32_t data_size =
        static_cast<std::uint32_t>(audio.samples.size() * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size);
    auto put32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
    };
    auto put16 = [&](std::uint16_t v) {
        out.push_back(v & 0xFF);
        out.push_back(v >> 8);
    };
    auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
    tag("RIFF");
    put32(36 + data_size);
    tag("WAVE");
    tag("fmt ");
    put32(16);
    put16(1); // PCM
    put16(1); // mono
    put32(static_cast<std::uint32_t>(audio.sample_rate));
    put32(static_cast<std::uint32_t>(audio.sample_rate) * 2);
    put16(2);
    put16(16);
    tag("data");
    put32(data_size);
    for (const std::int16_t s : audio.samples)
        put16(static_cast<std::uint16_t>(s));
    return out;
}

inline std::vector<std::uint8_t> pgm_bytes(const std::vector<std::uint8_t>& plane,
                                           int w, int h) {
    std::string hdr = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    std::vector<std::uint8_t> out(hdr.begin(), hdr.end());
    out.insert(out.end(), plane.begin(), plane.end());
    return out;
}

// BT.601 full-range conversion, integer math, for viewing only.
inline std::vector<std::uint8_t> ppm_bytes(const ImageYCbCr& img) {
    std::string hdr = "P6\n" + std::to_string(img.width) + " " +
                      std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(hdr.begin(), hdr.end());
    out.reserve(out.size() + static_cast<std::size_t>(img.width) * img.height * 3);
    const int cw = img.chroma_width();
    auto clamp8 = [](int v) {
        return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
    };
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const int Y = img.y[static_cast<std::size_t>(y) * img.width + x];
            const int Cb = img.cb[static_cast<std::size_t>(y / 2) * cw + x / 2] - 128;
            const int Cr = img.cr[static_cast<std::size_t>(y / 2) * cw + x / 2] - 128;
            out.push_back(clamp8(Y + ((91881 * Cr) >> 16)));
            out.push_back(clamp8(Y - ((22554 * Cb + 46802 * Cr) >> 16)));
            out.push_back(clamp8(Y + ((116130 * Cb) >> 16)));
        }
    return out;
}

} // namespace efc
