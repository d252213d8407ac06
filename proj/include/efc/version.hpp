#pragma once

namespace efc {

// Stamped into every generated artifact so a run can be replayed exactly.
inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kRngAlgorithmId  = "splitmix64-v1";
inline constexpr const char* kBitstreamMagic  = "EFC1";

} // namespace efc
