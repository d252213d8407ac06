#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "efc/error.hpp"
#include "efc/fault.hpp"
#include "efc/rng.hpp"

namespace efc {

using RegionTable = std::map<std::string, FaultSpec>;

inline constexpr const char* kReliableRegion = "reliable";

// Steers elastic arithmetic to the fault spec of the innermost active
// region. Unknown region names resolve to the reliable spec; the stack
// bottom is always "reliable". One context serves one decode trial.
class FidelityContext {
public:
    // Pre-resolved region identity; lets hot decode loops enter and leave
    // regions without string or map traffic.
    using RegionHandle = int;

    FidelityContext(RegionTable regions, RngStream rng,
                    std::uint64_t draw_budget = kDefaultDrawBudget)
        : regions_(std::move(regions)), rng_(rng), draw_budget_(draw_budget) {
        auto it = regions_.find(kReliableRegion);
        if (it != regions_.end() && !it->second.reliable())
            throw std::invalid_argument("region \"reliable\" must have rate 0");
        resolved_.push_back({kReliableRegion, FaultSpec::reliable_spec(), false});
        stack_.push_back(0);
    }

    static FidelityContext all_reliable(std::uint64_t seed = 0) {
        return FidelityContext({}, RngStream::root(seed));
    }

    RegionHandle resolve(const std::string& name) {
        if (name.empty()) throw std::invalid_argument("empty region name");
        for (std::size_t i = 0; i < resolved_.size(); ++i)
            if (resolved_[i].name == name) return static_cast<RegionHandle>(i);
        auto it = regions_.find(name);
        resolved_.push_back({name,
                             it == regions_.end() ? FaultSpec::reliable_spec()
                                                  : it->second,
                             false});
        return static_cast<RegionHandle>(resolved_.size() - 1);
    }

    void enter(RegionHandle h) {
        resolved_[static_cast<std::size_t>(h)].touched = true;
        stack_.push_back(h);
    }

    void enter_region(const std::string& name) { enter(resolve(name)); }

    void exit_region() {
        if (stack_.size() <= 1)
            throw std::logic_error("exit_region on bottom of stack");
        stack_.pop_back();
    }

    const FaultSpec& active() const { return resolved_[stack_.back()].spec; }
    const std::string& active_region() const { return resolved_[stack_.back()].name; }
    std::size_t depth() const { return stack_.size(); }

    // One injection opportunity for a computed bus value. Ops under a
    // nonzero-rate spec consume exactly one draw whether or not a flip
    // lands; reliable regions bypass the stream entirely.
    word32 inject(word32 value) {
        const FaultSpec& s = resolved_[stack_.back()].spec;
        if (s.reliable()) return value;
        if (++draws_ > draw_budget_)
            throw decode_error(FailureKind::LimitExceeded, active_region());
        return inject_word_with(value, s, rng_.next_u64());
    }

    [[noreturn]] void fail(FailureKind kind) const {
        throw decode_error(kind, active_region());
    }

    std::set<std::string> touched_regions() const {
        std::set<std::string> out;
        for (std::size_t i = 1; i < resolved_.size(); ++i)
            if (resolved_[i].touched) out.insert(resolved_[i].name);
        return out;
    }

    std::uint64_t draws() const { return draws_; }
    const RegionTable& regions() const { return regions_; }

    static constexpr std::uint64_t kDefaultDrawBudget = 1ull << 33;

private:
    struct Resolved {
        std::string name;
        FaultSpec spec;
        bool touched;
    };

    RegionTable regions_;
    std::vector<Resolved> resolved_; // [0] is the reliable bottom
    std::vector<int> stack_;
    RngStream rng_;
    std::uint64_t draws_ = 0;
    std::uint64_t draw_budget_;
};

// Scoped enter/exit.
class RegionScope {
public:
    RegionScope(FidelityContext& ctx, const std::string& name) : ctx_(ctx) {
        ctx_.enter_region(name);
    }
    RegionScope(FidelityContext& ctx, FidelityContext::RegionHandle h) : ctx_(ctx) {
        ctx_.enter(h);
    }
    ~RegionScope() { ctx_.exit_region(); }
    RegionScope(const RegionScope&) = delete;
    RegionScope& operator=(const RegionScope&) = delete;

private:
    FidelityContext& ctx_;
};

// ---------------------------------------------------------------------------
// Elastic arithmetic. Only value-producing ops exist; comparisons, loop
// counters and pointer math have no elastic variants by construction.
// 32-bit ops wrap; 16-bit ops compute on the 32-bit bus and truncate, so
// flips landing in bits 16..31 are discarded.
// ---------------------------------------------------------------------------

// Injects an exactly-computed 32-bit result. This is the primitive every
// elastic op reduces to; kernels also use it directly where a fused
// operation's result is what crosses the bus.
inline std::int32_t elastic_value32(std::int32_t exact, FidelityContext& ctx) {
    return static_cast<std::int32_t>(ctx.inject(static_cast<word32>(exact)));
}

inline std::int32_t elastic_add(std::int32_t a, std::int32_t b, FidelityContext& ctx) {
    return elastic_value32(static_cast<std::int32_t>(
        static_cast<word32>(a) + static_cast<word32>(b)), ctx);
}

inline std::int32_t elastic_sub(std::int32_t a, std::int32_t b, FidelityContext& ctx) {
    return elastic_value32(static_cast<std::int32_t>(
        static_cast<word32>(a) - static_cast<word32>(b)), ctx);
}

inline std::int32_t elastic_mul(std::int32_t a, std::int32_t b, FidelityContext& ctx) {
    return elastic_value32(static_cast<std::int32_t>(
        static_cast<word32>(a) * static_cast<word32>(b)), ctx);
}

inline std::int32_t elastic_shl(std::int32_t a, unsigned n, FidelityContext& ctx) {
    return elastic_value32(static_cast<std::int32_t>(static_cast<word32>(a) << (n & 31)), ctx);
}

// Logical shift on the bus value.
inline std::int32_t elastic_shr(std::int32_t a, unsigned n, FidelityContext& ctx) {
    return elastic_value32(static_cast<std::int32_t>(static_cast<word32>(a) >> (n & 31)), ctx);
}

// Injects an exactly-computed 16-bit result: the value rides the 32-bit
// bus, then the store truncates to 16 bits.
inline std::int16_t elastic_value16(std::int32_t exact, FidelityContext& ctx) {
    const word32 bus = ctx.inject(static_cast<word32>(exact));
    return static_cast<std::int16_t>(static_cast<std::uint16_t>(bus & 0xFFFFu));
}

inline std::int16_t elastic_add16(std::int16_t a, std::int16_t b, FidelityContext& ctx) {
    return elastic_value16(static_cast<std::int32_t>(a) + b, ctx);
}

inline std::int16_t elastic_sub16(std::int16_t a, std::int16_t b, FidelityContext& ctx) {
    return elastic_value16(static_cast<std::int32_t>(a) - b, ctx);
}

inline std::int16_t elastic_mul16(std::int16_t a, std::int16_t b, FidelityContext& ctx) {
    return elastic_value16(static_cast<std::int32_t>(a) * b, ctx);
}

// Arithmetic shift, matching short-int semantics in the kernels.
inline std::int16_t elastic_shr16(std::int16_t a, unsigned n, FidelityContext& ctx) {
    return elastic_value16(static_cast<std::int32_t>(a) >> (n & 15), ctx);
}

inline std::int16_t elastic_shl16(std::int16_t a, unsigned n, FidelityContext& ctx) {
    return elastic_value16(static_cast<std::int32_t>(a) << (n & 15), ctx);
}

} // namespace efc
