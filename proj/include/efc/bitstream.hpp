#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "efc/error.hpp"
#include "efc/version.hpp"

namespace efc {

enum class CodecId : std::uint8_t {
    Adpcm = 1,
    MiniJpeg = 2,
    MiniVideo = 3,
};

// Container layout (all multi-byte integers little-endian):
//   0..3   magic "EFC1"
//   4      container version (1)
//   5      codec id
//   6..    codec header fields, fixed width per codec:
//            adpcm:  u32 sample_rate, u32 sample_count
//            jpeg:   u16 width, u16 height, u8 quality
//            video:  u16 width, u16 height, u16 frames, u8 fps, u8 quality
//   then   payload bytes (MSB-first bit packing)
struct Bitstream {
    CodecId codec;
    std::vector<std::uint8_t> header; // codec header fields, already packed
    std::vector<std::uint8_t> payload;

    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out;
        out.reserve(6 + header.size() + payload.size());
        const char* m = kBitstreamMagic;
        out.insert(out.end(), m, m + 4);
        out.push_back(1);
        out.push_back(static_cast<std::uint8_t>(codec));
        out.insert(out.end(), header.begin(), header.end());
        out.insert(out.end(), payload.begin(), payload.end());
        return out;
    }

    std::size_t size_bytes() const { return 6 + header.size() + payload.size(); }

    static Bitstream from_bytes(const std::vector<std::uint8_t>& bytes,
                                std::size_t header_len) {
        if (bytes.size() < 6 + header_len ||
            std::memcmp(bytes.data(), kBitstreamMagic, 4) != 0 || bytes[4] != 1)
            throw decode_error(FailureKind::InvalidCode, "header");
        Bitstream bs;
        bs.codec = static_cast<CodecId>(bytes[5]);
        bs.header.assign(bytes.begin() + 6, bytes.begin() + 6 + header_len);
        bs.payload.assign(bytes.begin() + 6 + header_len, bytes.end());
        return bs;
    }
};

// Little-endian field packing for codec headers.
struct HeaderWriter {
    std::vector<std::uint8_t> bytes;
    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u16(std::uint16_t v) {
        bytes.push_back(v & 0xFF);
        bytes.push_back(v >> 8);
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xFF);
    }
};

struct HeaderReader {
    const std::vector<std::uint8_t>& bytes;
    std::size_t pos = 0;

    std::uint8_t u8() {
        if (pos >= bytes.size()) throw decode_error(FailureKind::StreamExhausted, "header");
        return bytes[pos++];
    }
    std::uint16_t u16() {
        std::uint16_t lo = u8();
        return static_cast<std::uint16_t>(lo | (u8() << 8));
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return v;
    }
};

// MSB-first bit packing for payloads.
class BitWriter {
public:
    void put(std::uint32_t value, unsigned nbits) {
        for (unsigned i = nbits; i-- > 0;) {
            acc_ = (acc_ << 1) | ((value >> i) & 1u);
            if (++fill_ == 8) {
                bytes_.push_back(static_cast<std::uint8_t>(acc_));
                acc_ = 0;
                fill_ = 0;
            }
        }
    }

    std::vector<std::uint8_t> finish() {
        if (fill_ > 0) {
            bytes_.push_back(static_cast<std::uint8_t>(acc_ << (8 - fill_)));
            acc_ = 0;
            fill_ = 0;
        }
        return std::move(bytes_);
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint32_t acc_ = 0;
    unsigned fill_ = 0;
};

class BitReader {
public:
    explicit BitReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::uint32_t get(unsigned nbits, const char* where = "payload") {
        std::uint32_t v = 0;
        for (unsigned i = 0; i < nbits; ++i) {
            const std::size_t byte = bit_ >> 3;
            if (byte >= bytes_.size())
                throw decode_error(FailureKind::StreamExhausted, where);
            v = (v << 1) | ((bytes_[byte] >> (7 - (bit_ & 7))) & 1u);
            ++bit_;
        }
        return v;
    }

    void align_byte() { bit_ = (bit_ + 7) & ~std::size_t{7}; }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t bit_ = 0;
};

} // namespace efc
