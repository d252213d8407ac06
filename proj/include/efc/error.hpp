#pragma once

#include <exception>
#include <string>

namespace efc {

enum class FailureKind : std::uint8_t {
    InvalidCode,
    IndexOutOfRange,
    StreamExhausted,
    LimitExceeded,
};

inline const char* failure_kind_name(FailureKind k) {
    switch (k) {
    case FailureKind::InvalidCode:     return "invalid_code";
    case FailureKind::IndexOutOfRange: return "index_out_of_range";
    case FailureKind::StreamExhausted: return "stream_exhausted";
    case FailureKind::LimitExceeded:   return "limit_exceeded";
    }
    return "?";
}

// A detected decode abort. Trials catch this and record it as data; it must
// never leave partial output behind.
struct DecodeFailure {
    FailureKind kind;
    std::string location; // region active at the failure site
};

class decode_error : public std::exception {
public:
    decode_error(FailureKind kind, std::string location)
        : failure_{kind, std::move(location)},
          what_(std::string(failure_kind_name(kind)) + " in " + failure_.location) {}

    const DecodeFailure& failure() const { return failure_; }
    const char* what() const noexcept override { return what_.c_str(); }

private:
    DecodeFailure failure_;
    std::string what_;
};

} // namespace efc
