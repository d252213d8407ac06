#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "efc/media.hpp"

namespace efc {

enum class Metric : std::uint8_t { PSNR, SNRseg };

/// Quality score in dB. PSNR clamps to [0, 99] (99 means identical);
/// SNRseg clamps each segment to [-10, 35] before averaging.
struct QualityScore {
    Metric metric;
    double value_db;
    bool clamped;
};

inline constexpr double kPsnrMaxDb = 99.0;
inline constexpr double kPsnrMinDb = 0.0;
inline constexpr double kSnrSegMaxDb = 35.0;
inline constexpr double kSnrSegMinDb = -10.0;
inline constexpr int kSnrSegSegmentLen = 256;

/// Mean squared difference of two equally sized sequences.
template <typename T>
double mse(std::span<const T> ref, std::span<const T> test) {
    if (ref.size() != test.size() || ref.empty())
        throw std::invalid_argument("mse: sequences must be nonempty and equal length");
    double acc = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double d = static_cast<double>(ref[i]) - static_cast<double>(test[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(ref.size());
}

namespace detail {

inline void accumulate_sq_err(std::span<const std::uint8_t> a,
                              std::span<const std::uint8_t> b,
                              double& sum_sq, std::size_t& n) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sum_sq += d * d;
    }
    n += a.size();
}

inline QualityScore psnr_from_pooled(double sum_sq, std::size_t n) {
    const double m = sum_sq / static_cast<double>(n);
    if (m == 0.0) return {Metric::PSNR, kPsnrMaxDb, true};
    const double db = 10.0 * std::log10(255.0 * 255.0 / m);
    if (db > kPsnrMaxDb) return {Metric::PSNR, kPsnrMaxDb, true};
    if (db < kPsnrMinDb) return {Metric::PSNR, kPsnrMinDb, true};
    return {Metric::PSNR, db, false};
}

} // namespace detail

/// PSNR over all three planes, 8-bit peak 255.
inline QualityScore psnr(const ImageYCbCr& ref, const ImageYCbCr& test) {
    if (!ref.same_shape(test))
        throw std::invalid_argument("psnr: image shape mismatch");
    double sum_sq = 0.0;
    std::size_t n = 0;
    detail::accumulate_sq_err(ref.y, test.y, sum_sq, n);
    detail::accumulate_sq_err(ref.cb, test.cb, sum_sq, n);
    detail::accumulate_sq_err(ref.cr, test.cr, sum_sq, n);
    return detail::psnr_from_pooled(sum_sq, n);
}

/// Video PSNR pools squared error across every frame and plane rather than
/// averaging per-frame PSNR values.
inline QualityScore psnr(const VideoSeq& ref, const VideoSeq& test) {
    if (!ref.same_shape(test))
        throw std::invalid_argument("psnr: video shape mismatch");
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (std::size_t f = 0; f < ref.frames.size(); ++f) {
        detail::accumulate_sq_err(ref.frames[f].y, test.frames[f].y, sum_sq, n);
        detail::accumulate_sq_err(ref.frames[f].cb, test.frames[f].cb, sum_sq, n);
        detail::accumulate_sq_err(ref.frames[f].cr, test.frames[f].cr, sum_sq, n);
    }
    return detail::psnr_from_pooled(sum_sq, n);
}

/// Segmented SNR: per full segment 10*log10(sum(ref^2)/sum((ref-test)^2)),
/// clamped to [-10, 35]; zero-signal segments are skipped, a zero-error
/// segment scores the upper clamp, the trailing partial segment is dropped.
/// Not symmetric in its arguments: the reference normalizes each segment.
inline QualityScore snr_seg(const PcmAudio& ref, const PcmAudio& test,
                            int segment_len = kSnrSegSegmentLen) {
    if (ref.samples.size() != test.samples.size())
        throw std::invalid_argument("snr_seg: length mismatch");
    if (segment_len <= 0 ||
        ref.samples.size() < static_cast<std::size_t>(segment_len))
        throw std::invalid_argument("snr_seg: input shorter than one segment");

    const std::size_t nseg = ref.samples.size() / static_cast<std::size_t>(segment_len);
    double total = 0.0;
    std::size_t scored = 0;
    bool any_clamped = false;
    for (std::size_t s = 0; s < nseg; ++s) {
        double sig = 0.0, err = 0.0;
        const std::size_t base = s * static_cast<std::size_t>(segment_len);
        for (int i = 0; i < segment_len; ++i) {
            const double r = ref.samples[base + i];
            const double d = r - static_cast<double>(test.samples[base + i]);
            sig += r * r;
            err += d * d;
        }
        if (sig == 0.0) continue; // silent segment carries no information
        double db;
        if (err == 0.0) {
            db = kSnrSegMaxDb;
            any_clamped = true;
        } else {
            db = 10.0 * std::log10(sig / err);
            if (db > kSnrSegMaxDb) { db = kSnrSegMaxDb; any_clamped = true; }
            if (db < kSnrSegMinDb) { db = kSnrSegMinDb; any_clamped = true; }
        }
        total += db;
        ++scored;
    }
    if (scored == 0)
        throw std::invalid_argument("snr_seg: every segment was silent");
    return {Metric::SNRseg, total / static_cast<double>(scored), any_clamped};
}

} // namespace efc
