#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "efc/adpcm.hpp"
#include "efc/corpus.hpp"
#include "efc/fidelity.hpp"
#include "efc/media.hpp"
#include "efc/metrics.hpp"
#include "efc/mini_jpeg.hpp"
#include "efc/mini_video.hpp"
#include "efc/rng.hpp"

namespace efc {

enum class KernelId : std::uint8_t { Adpcm, MiniJpeg, MiniVideo };

inline const char* kernel_name(KernelId k) {
    switch (k) {
    case KernelId::Adpcm:     return "adpcm";
    case KernelId::MiniJpeg:  return "mini_jpeg";
    case KernelId::MiniVideo: return "mini_video";
    }
    return "?";
}

inline KernelId kernel_from_name(const std::string& s) {
    if (s == "adpcm") return KernelId::Adpcm;
    if (s == "mini_jpeg" || s == "jpeg") return KernelId::MiniJpeg;
    if (s == "mini_video" || s == "video") return KernelId::MiniVideo;
    throw std::invalid_argument("unknown kernel: " + s);
}

// The documented fidelity regions of each kernel; the coverage tests pin
// decoders to exactly these.
inline std::vector<std::string> kernel_regions(KernelId k) {
    switch (k) {
    case KernelId::Adpcm:
        return {"quantization", "predictor", "reconstruction", "step_size"};
    case KernelId::MiniJpeg:
        return {"entropy_decode", "dequantize", "idct", "upsample"};
    case KernelId::MiniVideo:
        return {"huffman_decode", "motion_compensation", "idct", "reconstruction"};
    }
    return {};
}

// Regions kept reliable when a whole-kernel ("all") rate sweep runs; these
// lose so much quality under injection that sweeping them drowns the rest.
inline std::vector<std::string> default_pinned(KernelId k) {
    switch (k) {
    case KernelId::Adpcm:
        return {};
    case KernelId::MiniJpeg:
        return {"entropy_decode"};
    case KernelId::MiniVideo:
        return {"motion_compensation", "huffman_decode"};
    }
    return {};
}

struct TrialConfig {
    KernelId kernel = KernelId::Adpcm;
    CorpusSpec corpus = standard_audio_spec();
    int quality = 75;
    RegionTable regions;
    std::uint64_t master_seed = 7;
    std::uint64_t trial_index = 0;
};

struct TrialResult {
    bool success = false;
    QualityScore quality{Metric::PSNR, 0.0, false};
    DecodeFailure failure{FailureKind::InvalidCode, ""};
};

// Reliable encode of one corpus input, reusable across trials: the encoder
// is deterministic, so preparing once per sweep is identical to encoding
// inside every trial.
class PreparedKernel {
public:
    static PreparedKernel prepare(KernelId kernel, const CorpusSpec& corpus,
                                  int quality) {
        PreparedKernel p;
        p.kernel_ = kernel;
        switch (kernel) {
        case KernelId::Adpcm:
            p.ref_audio_ = gen_audio(corpus);
            p.bs_ = adpcm_encode(p.ref_audio_);
            break;
        case KernelId::MiniJpeg:
            p.ref_image_ = gen_image(corpus);
            p.bs_ = mini_jpeg_encode(p.ref_image_, quality);
            break;
        case KernelId::MiniVideo:
            p.ref_video_ = gen_video(corpus);
            p.bs_ = mini_video_encode(p.ref_video_, quality);
            break;
        }
        return p;
    }

    // One injected decode, scored against the pre-compression reference.
    // Decode failures are data, not errors.
    TrialResult run(const RegionTable& regions, std::uint64_t master_seed,
                    std::uint64_t trial_index) const {
        FidelityContext ctx(regions, derive_stream(master_seed, {trial_index}));
        TrialResult r;
        try {
            switch (kernel_) {
            case KernelId::Adpcm: {
                const PcmAudio got = adpcm_decode(bs_, ctx);
                r.quality = snr_seg(ref_audio_, got);
                break;
            }
            case KernelId::MiniJpeg: {
                const ImageYCbCr got = mini_jpeg_decode(bs_, ctx);
                r.quality = psnr(ref_image_, got);
                break;
            }
            case KernelId::MiniVideo: {
                const VideoSeq got = mini_video_decode(bs_, ctx);
                r.quality = psnr(ref_video_, got);
                break;
            }
            }
            r.success = true;
        } catch (const decode_error& e) {
            r.success = false;
            r.failure = e.failure();
        }
        return r;
    }

    KernelId kernel() const { return kernel_; }
    const Bitstream& bitstream() const { return bs_; }
    const PcmAudio& ref_audio() const { return ref_audio_; }
    const ImageYCbCr& ref_image() const { return ref_image_; }
    const VideoSeq& ref_video() const { return ref_video_; }

private:
    KernelId kernel_ = KernelId::Adpcm;
    Bitstream bs_{};
    PcmAudio ref_audio_{};
    ImageYCbCr ref_image_{};
    VideoSeq ref_video_{};
};

inline TrialResult run_trial(const TrialConfig& cfg) {
    return PreparedKernel::prepare(cfg.kernel, cfg.corpus, cfg.quality)
        .run(cfg.regions, cfg.master_seed, cfg.trial_index);
}

struct SweepRow {
    std::string swept_param; // "bits" or "rate"
    double value = 0.0;
    int trials = 0;
    int successes = 0;
    double success_fraction = 0.0;
    double mean_quality_db = 0.0; // meaningful only when successes > 0
    double std_quality_db = 0.0;
    int fail_invalid_code = 0;
    int fail_index = 0;
    int fail_stream = 0;
    int fail_limit = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct SweepConfig {
    KernelId kernel = KernelId::Adpcm;
    CorpusSpec corpus = standard_audio_spec();
    int quality = 75;
    std::string target = "all"; // region name or "all"
    FlipModel model = FlipModel::SingleBitUniform;
    int trials = 1000;
    std::uint64_t seed = 7;
    int threads = 0; // 0: hardware concurrency (or EFID_THREADS)

    // bit-range sweep
    double rate = 0.04;
    // error-rate sweep
    std::vector<double> rates{0.0, 0.01, 0.02, 0.04, 0.07, 0.10};
    BitRange range{0, 7};
    std::optional<std::vector<std::string>> pinned; // default: per kernel
};

namespace sweep_detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("EFID_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

inline void validate_target(KernelId kernel, const std::string& target) {
    if (target == "all") return;
    for (const auto& r : kernel_regions(kernel))
        if (r == target) return;
    throw std::invalid_argument("unknown region \"" + target + "\" for kernel " +
                                kernel_name(kernel));
}

// Trials are embarrassingly parallel; aggregation is an ordered reduction
// over trial indices, so the result is independent of thread scheduling.
inline SweepRow run_row(const PreparedKernel& pk, const RegionTable& regions,
                        const char* param, double value, int trials,
                        std::uint64_t seed, int threads) {
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= trials) return;
            results[static_cast<std::size_t>(i)] =
                pk.run(regions, seed, static_cast<std::uint64_t>(i));
        }
    };
    const int nt = std::min(resolve_threads(threads), trials > 0 ? trials : 1);
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nt));
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SweepRow row;
    row.swept_param = param;
    row.value = value;
    row.trials = trials;
    double sum = 0.0;
    for (const TrialResult& r : results) {
        if (r.success) {
            ++row.successes;
            sum += r.quality.value_db;
        } else {
            switch (r.failure.kind) {
            case FailureKind::InvalidCode:     ++row.fail_invalid_code; break;
            case FailureKind::IndexOutOfRange: ++row.fail_index; break;
            case FailureKind::StreamExhausted: ++row.fail_stream; break;
            case FailureKind::LimitExceeded:   ++row.fail_limit; break;
            }
        }
    }
    row.success_fraction =
        trials > 0 ? static_cast<double>(row.successes) / trials : 0.0;
    if (row.successes > 0) {
        row.mean_quality_db = sum / row.successes;
        double sq = 0.0;
        for (const TrialResult& r : results)
            if (r.success) {
                const double d = r.quality.value_db - row.mean_quality_db;
                sq += d * d;
            }
        row.std_quality_db =
            row.successes > 1 ? std::sqrt(sq / (row.successes - 1)) : 0.0;
    }
    return row;
}

inline RegionTable table_for(KernelId kernel, const std::string& target,
                             const FaultSpec& spec,
                             const std::vector<std::string>& pinned) {
    RegionTable t;
    if (target == "all") {
        for (const auto& r : kernel_regions(kernel)) t[r] = spec;
        for (const auto& p : pinned) t[p] = FaultSpec::reliable_spec();
    } else {
        t[target] = spec;
    }
    return t;
}

} // namespace sweep_detail

// One row per range [0,0]..[0,31] (or the given widths) at a fixed rate.
inline SweepResult bit_range_sweep(const SweepConfig& cfg,
                                   const std::vector<int>& his = {}) {
    sweep_detail::validate_target(cfg.kernel, cfg.target);
    const PreparedKernel pk = PreparedKernel::prepare(cfg.kernel, cfg.corpus, cfg.quality);
    std::vector<int> widths = his;
    if (widths.empty())
        for (int hi = 0; hi <= 31; ++hi) widths.push_back(hi);

    SweepResult out;
    for (const int hi : widths) {
        const FaultSpec spec(cfg.rate, BitRange(0, static_cast<unsigned>(hi)), cfg.model);
        const RegionTable regions =
            sweep_detail::table_for(cfg.kernel, cfg.target, spec, {});
        out.rows.push_back(sweep_detail::run_row(pk, regions, "bits",
                                                 static_cast<double>(hi),
                                                 cfg.trials, cfg.seed, cfg.threads));
    }
    return out;
}

// One row per error rate at a fixed bit range; in "all" mode the pinned
// regions stay reliable.
inline SweepResult error_rate_sweep(const SweepConfig& cfg) {
    sweep_detail::validate_target(cfg.kernel, cfg.target);
    for (const double r : cfg.rates)
        if (!(r >= 0.0 && r <= 1.0))
            throw std::invalid_argument("error_rate_sweep: rate out of [0,1]");
    const std::vector<std::string> pinned =
        cfg.pinned ? *cfg.pinned : default_pinned(cfg.kernel);
    const PreparedKernel pk = PreparedKernel::prepare(cfg.kernel, cfg.corpus, cfg.quality);

    SweepResult out;
    for (const double rate : cfg.rates) {
        const FaultSpec spec(rate, cfg.range, cfg.model);
        const RegionTable regions =
            sweep_detail::table_for(cfg.kernel, cfg.target, spec, pinned);
        out.rows.push_back(sweep_detail::run_row(pk, regions, "rate", rate,
                                                 cfg.trials, cfg.seed, cfg.threads));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tabulation. The CSV is byte-deterministic for a given result: fixed %.6f
// formatting, LF endings, empty quality cells when a row had no successes.
// ---------------------------------------------------------------------------

inline std::string summarize_csv(const SweepResult& result) {
    if (result.rows.empty())
        throw std::invalid_argument("summarize_csv: empty result");
    std::string out =
        "swept_param,value,trials,successes,success_fraction,mean_quality_db,"
        "std_quality_db,fail_invalid_code,fail_index,fail_stream,fail_limit\n";
    char buf[256];
    for (const SweepRow& r : result.rows) {
        std::snprintf(buf, sizeof buf, "%s,%.6f,%d,%d,%.6f,", r.swept_param.c_str(),
                      r.value, r.trials, r.successes, r.success_fraction);
        out += buf;
        if (r.successes > 0) {
            std::snprintf(buf, sizeof buf, "%.6f,%.6f,", r.mean_quality_db,
                          r.std_quality_db);
            out += buf;
        } else {
            out += ",,";
        }
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%d\n", r.fail_invalid_code,
                      r.fail_index, r.fail_stream, r.fail_limit);
        out += buf;
    }
    return out;
}

// Line chart of mean quality and success fraction against the swept value:
// one polyline per series plus axes. Deterministic text output.
inline std::string plot_svg(const SweepResult& result) {
    if (result.rows.empty())
        throw std::invalid_argument("plot_svg: empty result");

    const double W = 640, H = 400, ml = 56, mr = 56, mt = 24, mb = 40;
    double xmin = result.rows.front().value, xmax = result.rows.back().value;
    if (xmax == xmin) xmax = xmin + 1.0;
    double qmin = 0.0, qmax = 1.0;
    bool any_q = false;
    for (const auto& r : result.rows)
        if (r.successes > 0) {
            if (!any_q) {
                qmin = qmax = r.mean_quality_db;
                any_q = true;
            } else {
                qmin = std::min(qmin, r.mean_quality_db);
                qmax = std::max(qmax, r.mean_quality_db);
            }
        }
    if (!any_q) { qmin = 0.0; qmax = 1.0; }
    if (qmax - qmin < 1e-9) qmax = qmin + 1.0;

    auto fx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto fq = [&](double v) { return H - mb - (v - qmin) / (qmax - qmin) * (H - mt - mb); };
    auto fs = [&](double v) { return H - mb - v * (H - mt - mb); };

    char buf[192];
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
                  "height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n", W, H, W, H);
    svg += buf;
    svg += "<desc>quality and success fraction vs " +
           result.rows.front().swept_param + "</desc>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"black\"/>\n", ml, H - mb, W - mr, H - mb);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"black\"/>\n", ml, mt, ml, H - mb);
    svg += buf;

    std::string qpts, spts;
    for (const auto& r : result.rows) {
        if (r.successes > 0) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", fx(r.value),
                          fq(r.mean_quality_db));
            qpts += buf;
        }
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", fx(r.value),
                      fs(r.success_fraction));
        spts += buf;
    }
    svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"" +
           qpts + "\"/>\n";
    svg += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"" +
           spts + "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"#1f77b4\">"
                  "mean quality (dB)</text>\n", ml + 8, mt + 14);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"#d62728\">"
                  "success fraction</text>\n", ml + 8, mt + 30);
    svg += buf;
    svg += "</svg>\n";
    return svg;
}

} // namespace efc
