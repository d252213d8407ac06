#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace efc {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// FNV-1a over a tag byte plus payload, so string and integer labels can
// never collide with each other.
inline constexpr std::uint64_t fnv1a(char tag, const char* data, std::size_t n) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    h = (h ^ static_cast<std::uint8_t>(tag)) * 0x100000001B3ull;
    for (std::size_t i = 0; i < n; ++i)
        h = (h ^ static_cast<std::uint8_t>(data[i])) * 0x100000001B3ull;
    return h;
}

inline constexpr std::uint64_t hash_label(std::string_view s) {
    return fnv1a('s', s.data(), s.size());
}

inline constexpr std::uint64_t hash_label(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    return fnv1a('i', b, 8);
}

inline constexpr std::uint64_t combine(std::uint64_t key, std::uint64_t label_hash) {
    return mix64(key ^ (label_hash + kGolden + (key << 6) + (key >> 2)));
}

} // namespace detail

// Deterministic splittable stream: the key identifies the stream, derived
// purely from (master seed, label path); draws advance a splitmix64 walk.
// Identical (seed, labels) gives an identical stream on any host or build.
class RngStream {
public:
    static RngStream root(std::uint64_t master_seed) {
        return RngStream(detail::mix64(master_seed ^ 0xE7C1A9D2B85C4F6Bull));
    }

    RngStream child(std::string_view label) const {
        return RngStream(detail::combine(key_, detail::hash_label(label)));
    }

    RngStream child(std::uint64_t index) const {
        return RngStream(detail::combine(key_, detail::hash_label(index)));
    }

    std::uint64_t next_u64() {
        state_ += detail::kGolden;
        return detail::mix64(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound); bound > 0. Lemire multiply-shift, bias < 2^-32.
    std::uint32_t next_below(std::uint32_t bound) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    std::uint64_t key() const { return key_; }

private:
    explicit RngStream(std::uint64_t key) : key_(key), state_(key) {}

    std::uint64_t key_;
    std::uint64_t state_;
};

// Label path element: either a name or an index.
struct RngLabel {
    RngLabel(const char* s) : is_string(true), str(s) {}
    RngLabel(std::string_view s) : is_string(true), str(s) {}
    RngLabel(std::uint64_t v) : is_string(false), num(v) {}
    RngLabel(int v) : is_string(false), num(static_cast<std::uint64_t>(v)) {}

    bool is_string;
    std::string_view str{};
    std::uint64_t num = 0;
};

inline RngStream derive_stream(std::uint64_t master_seed,
                               std::initializer_list<RngLabel> labels) {
    RngStream s = RngStream::root(master_seed);
    for (const RngLabel& l : labels)
        s = l.is_string ? s.child(l.str) : s.child(l.num);
    return s;
}

} // namespace efc
