#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "efc/corpus.hpp"
#include "efc/fault.hpp"
#include "efc/fidelity.hpp"
#include "efc/power.hpp"
#include "efc/sweep.hpp"
#include "efc/version.hpp"

namespace efc {

using json = nlohmann::json;

// "lo-hi" (or a single bit index) -> BitRange.
inline BitRange parse_bit_range(const std::string& s) {
    const auto dash = s.find('-');
    try {
        if (dash == std::string::npos) {
            const int b = std::stoi(s);
            return BitRange(static_cast<unsigned>(b), static_cast<unsigned>(b));
        }
        const int lo = std::stoi(s.substr(0, dash));
        const int hi = std::stoi(s.substr(dash + 1));
        return BitRange(static_cast<unsigned>(lo), static_cast<unsigned>(hi));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad bit range \"" + s + "\" (want \"lo-hi\")");
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("bad bit range \"" + s + "\" (want \"lo-hi\")");
    }
}

inline std::string bit_range_string(const BitRange& r) {
    return std::to_string(r.lo) + "-" + std::to_string(r.hi);
}

inline FaultSpec parse_fault_spec(const json& j) {
    FaultSpec s;
    const double rate = j.value("rate", 0.0);
    const BitRange range = parse_bit_range(j.value("bits", std::string("0-31")));
    const FlipModel model = flip_model_from_name(j.value("model", std::string("single")));
    return FaultSpec(rate, range, model);
}

inline json fault_spec_json(const FaultSpec& s) {
    return json{{"rate", s.rate},
                {"bits", bit_range_string(s.range)},
                {"model", flip_model_name(s.model)}};
}

inline RegionTable parse_region_table(const json& j) {
    RegionTable t;
    for (auto it = j.begin(); it != j.end(); ++it)
        t[it.key()] = parse_fault_spec(it.value());
    return t;
}

inline json region_table_json(const RegionTable& t) {
    json j = json::object();
    for (const auto& [name, spec] : t) j[name] = fault_spec_json(spec);
    return j;
}

inline CorpusKind corpus_kind_from_name(const std::string& s) {
    if (s == "audio_sine_mix") return CorpusKind::AudioSineMix;
    if (s == "image_gradient") return CorpusKind::ImageGradient;
    if (s == "image_plasma") return CorpusKind::ImagePlasma;
    if (s == "video_moving_blocks") return CorpusKind::VideoMovingBlocks;
    throw std::invalid_argument("unknown corpus kind: " + s);
}

inline const char* corpus_kind_name(CorpusKind k) {
    switch (k) {
    case CorpusKind::AudioSineMix:      return "audio_sine_mix";
    case CorpusKind::ImageGradient:     return "image_gradient";
    case CorpusKind::ImagePlasma:       return "image_plasma";
    case CorpusKind::VideoMovingBlocks: return "video_moving_blocks";
    }
    return "?";
}

// The standard corpus spec for a kernel unless the config overrides it.
inline CorpusSpec default_corpus(KernelId k) {
    switch (k) {
    case KernelId::Adpcm:     return standard_audio_spec();
    case KernelId::MiniJpeg:  return standard_image_spec();
    case KernelId::MiniVideo: return standard_video_spec();
    }
    return standard_audio_spec();
}

inline CorpusSpec parse_corpus(const json& j, CorpusSpec base) {
    if (j.contains("kind")) base.kind = corpus_kind_from_name(j["kind"]);
    base.seed = j.value("seed", base.seed);
    base.sample_rate = j.value("sample_rate", base.sample_rate);
    base.duration_s = j.value("duration_s", base.duration_s);
    base.width = j.value("width", base.width);
    base.height = j.value("height", base.height);
    base.frames = j.value("frames", base.frames);
    base.fps = j.value("fps", base.fps);
    return base;
}

inline json corpus_json(const CorpusSpec& c) {
    return json{{"kind", corpus_kind_name(c.kind)}, {"seed", c.seed},
                {"sample_rate", c.sample_rate},     {"duration_s", c.duration_s},
                {"width", c.width},                 {"height", c.height},
                {"frames", c.frames},               {"fps", c.fps}};
}

struct ExperimentConfig {
    SweepConfig sweep;
    std::string mode = "rate"; // "bits" or "rate"
    RegionTable regions;       // for plain injected decodes
    std::string csv_path;
    std::string svg_path;
};

// Parses and fully validates a config document before any work starts.
inline ExperimentConfig parse_experiment_config(const json& j) {
    ExperimentConfig cfg;
    cfg.sweep.kernel = kernel_from_name(j.value("kernel", std::string("adpcm")));
    cfg.sweep.corpus = default_corpus(cfg.sweep.kernel);
    if (j.contains("corpus")) cfg.sweep.corpus = parse_corpus(j["corpus"], cfg.sweep.corpus);
    cfg.sweep.quality = j.value("quality", 75);
    if (cfg.sweep.quality < 1 || cfg.sweep.quality > 100)
        throw std::invalid_argument("quality must be in 1..100");
    if (j.contains("regions")) cfg.regions = parse_region_table(j["regions"]);

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        cfg.mode = s.value("mode", cfg.mode);
        if (cfg.mode != "bits" && cfg.mode != "rate")
            throw std::invalid_argument("sweep.mode must be \"bits\" or \"rate\"");
        cfg.sweep.target = s.value("region", cfg.sweep.target);
        cfg.sweep.rate = s.value("rate", cfg.sweep.rate);
        if (s.contains("rates"))
            cfg.sweep.rates = s["rates"].get<std::vector<double>>();
        if (s.contains("bits")) cfg.sweep.range = parse_bit_range(s["bits"]);
        cfg.sweep.trials = s.value("trials", cfg.sweep.trials);
        cfg.sweep.seed = s.value("seed", cfg.sweep.seed);
        if (s.contains("model"))
            cfg.sweep.model = flip_model_from_name(s["model"]);
        if (s.contains("pinned"))
            cfg.sweep.pinned = s["pinned"].get<std::vector<std::string>>();
        if (cfg.sweep.trials <= 0)
            throw std::invalid_argument("sweep.trials must be positive");
    }
    if (j.contains("output")) {
        cfg.csv_path = j["output"].value("csv", std::string());
        cfg.svg_path = j["output"].value("svg", std::string());
    }
    return cfg;
}

// Replay stamp attached to generated artifacts (deterministic: no clocks).
inline json run_stamp(const ExperimentConfig& cfg) {
    json j;
    j["artifact_version"] = kArtifactVersion;
    j["rng_algorithm"] = kRngAlgorithmId;
    j["master_seed"] = cfg.sweep.seed;
    j["config"] = {
        {"kernel", kernel_name(cfg.sweep.kernel)},
        {"corpus", corpus_json(cfg.sweep.corpus)},
        {"quality", cfg.sweep.quality},
        {"mode", cfg.mode},
        {"region", cfg.sweep.target},
        {"rate", cfg.sweep.rate},
        {"rates", cfg.sweep.rates},
        {"bits", bit_range_string(cfg.sweep.range)},
        {"model", flip_model_name(cfg.sweep.model)},
        {"trials", cfg.sweep.trials},
        {"pinned", cfg.sweep.pinned ? json(*cfg.sweep.pinned) : json(nullptr)},
        {"regions", region_table_json(cfg.regions)},
    };
    return j;
}

// --- power model workload files ---------------------------------------------

inline PowerParams parse_power_params(const json& j) {
    PowerParams p;
    p.v_rated = j.value("v_rated", p.v_rated);
    p.v_crit = j.value("v_crit", p.v_crit);
    p.eps_max = j.value("eps_max", p.eps_max);
    p.alu_share = j.value("alu_share", p.alu_share);
    if (j.contains("curve")) {
        const std::string c = j["curve"];
        if (c == "linear") p.curve = VoltageCurve::Linear;
        else if (c == "exponential") p.curve = VoltageCurve::Exponential;
        else throw std::invalid_argument("unknown curve: " + c);
    }
    p.validate();
    return p;
}

struct WorkloadFile {
    PowerParams params;
    WorkloadMix mix;
};

inline WorkloadFile parse_workload(const json& j) {
    WorkloadFile w;
    if (j.contains("params")) w.params = parse_power_params(j["params"]);
    if (!j.contains("regions"))
        throw std::invalid_argument("workload file: missing \"regions\"");
    for (const json& r : j["regions"])
        w.mix.regions.push_back(WorkloadRegion{
            r.value("name", std::string("?")), r.at("fraction").get<double>(),
            r.at("rate").get<double>()});
    w.mix.validate(w.params);
    return w;
}

} // namespace efc
