// efc - elastic fidelity codec simulator command line.
//
// Subcommands: gen-corpus, encode, decode, sweep, power, plot, reproduce.
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.
// Every generated artifact gets a deterministic .meta.json replay stamp.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "efc/adpcm.hpp"
#include "efc/config.hpp"
#include "efc/corpus.hpp"
#include "efc/io.hpp"
#include "efc/metrics.hpp"
#include "efc/mini_jpeg.hpp"
#include "efc/mini_video.hpp"
#include "efc/sweep.hpp"
#include "efc/version.hpp"

namespace {

using namespace efc;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

void write_stamp(const std::string& artifact_path, const json& stamp) {
    atomic_write_file(artifact_path + ".meta.json", stamp.dump(2) + "\n");
}

Bitstream load_bitstream(const std::string& path) {
    const auto bytes = read_file(path);
    if (bytes.size() < 6) throw std::invalid_argument("not a bitstream: " + path);
    switch (static_cast<CodecId>(bytes[5])) {
    case CodecId::Adpcm:     return Bitstream::from_bytes(bytes, kAdpcmHeaderLen);
    case CodecId::MiniJpeg:  return Bitstream::from_bytes(bytes, kMiniJpegHeaderLen);
    case CodecId::MiniVideo: return Bitstream::from_bytes(bytes, kMiniVideoHeaderLen);
    default: throw std::invalid_argument("unknown codec id in " + path);
    }
}

struct SweepCli {
    std::string config_path;
    std::string kernel = "adpcm";
    std::string mode = "rate";
    std::string region = "all";
    std::string bits;
    std::string rates_csv;
    std::string model;
    double rate = -1.0;
    int trials = -1;
    long long seed = -1;
    int threads = 0;
    std::string csv_path, svg_path;
};

ExperimentConfig resolve_sweep_config(const SweepCli& c, const CLI::App* cmd) {
    ExperimentConfig cfg;
    if (!c.config_path.empty()) {
        cfg = parse_experiment_config(load_json(c.config_path));
        if (cmd->count("--kernel")) {
            cfg.sweep.kernel = kernel_from_name(c.kernel);
            cfg.sweep.corpus = default_corpus(cfg.sweep.kernel);
        }
    } else {
        cfg = parse_experiment_config(json{{"kernel", c.kernel}});
    }
    // flags override file values
    if (cmd->count("--mode")) cfg.mode = c.mode;
    if (cmd->count("--region")) cfg.sweep.target = c.region;
    if (cmd->count("--rate")) cfg.sweep.rate = c.rate;
    if (cmd->count("--bits")) cfg.sweep.range = parse_bit_range(c.bits);
    if (cmd->count("--model")) cfg.sweep.model = flip_model_from_name(c.model);
    if (cmd->count("--trials")) cfg.sweep.trials = c.trials;
    if (cmd->count("--seed")) cfg.sweep.seed = static_cast<std::uint64_t>(c.seed);
    if (cmd->count("--threads")) cfg.sweep.threads = c.threads;
    if (cmd->count("--rates")) {
        cfg.sweep.rates.clear();
        std::stringstream ss(c.rates_csv);
        std::string tok;
        while (std::getline(ss, tok, ','))
            cfg.sweep.rates.push_back(std::stod(tok));
    }
    if (cmd->count("--csv")) cfg.csv_path = c.csv_path;
    if (cmd->count("--svg")) cfg.svg_path = c.svg_path;
    if (cfg.mode != "bits" && cfg.mode != "rate")
        throw std::invalid_argument("mode must be bits or rate");
    if (cfg.sweep.trials <= 0) throw std::invalid_argument("trials must be positive");
    return cfg;
}

void run_one_sweep(const ExperimentConfig& cfg) {
    const SweepResult result =
        cfg.mode == "bits" ? bit_range_sweep(cfg.sweep) : error_rate_sweep(cfg.sweep);
    const json stamp = run_stamp(cfg);
    if (!cfg.csv_path.empty()) {
        atomic_write_file(cfg.csv_path, summarize_csv(result));
        write_stamp(cfg.csv_path, stamp);
    }
    if (!cfg.svg_path.empty()) {
        atomic_write_file(cfg.svg_path, plot_svg(result));
        write_stamp(cfg.svg_path, stamp);
    }
    if (cfg.csv_path.empty() && cfg.svg_path.empty())
        std::fputs(summarize_csv(result).c_str(), stdout);
}

SweepResult csv_to_result(const std::string& text) {
    SweepResult r;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line); // header
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string f[11];
        for (auto& cell : f) std::getline(ls, cell, ',');
        SweepRow row;
        row.swept_param = f[0];
        row.value = std::stod(f[1]);
        row.trials = std::stoi(f[2]);
        row.successes = std::stoi(f[3]);
        row.success_fraction = std::stod(f[4]);
        if (!f[5].empty()) {
            row.mean_quality_db = std::stod(f[5]);
            row.std_quality_db = std::stod(f[6]);
        }
        row.fail_invalid_code = std::stoi(f[7]);
        row.fail_index = std::stoi(f[8]);
        row.fail_stream = std::stoi(f[9]);
        row.fail_limit = std::stoi(f[10]);
        r.rows.push_back(row);
    }
    return r;
}

int main_inner(int argc, char** argv) {
    CLI::App app{"elastic fidelity codec simulator"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen-corpus", "generate synthetic media for inspection");
    std::string gen_kind = "audio_sine_mix";
    std::string gen_out = "corpus";
    long long gen_seed = -1;
    gen->add_option("--kind", gen_kind,
                    "audio_sine_mix|image_gradient|image_plasma|video_moving_blocks");
    gen->add_option("--seed", gen_seed, "corpus seed (default: standard corpus)");
    gen->add_option("--out", gen_out, "output path prefix");

    auto* enc = app.add_subcommand("encode", "encode a generated corpus input");
    std::string enc_kernel = "adpcm";
    std::string enc_out = "stream.efc";
    long long enc_seed = -1;
    int enc_quality = 75;
    enc->add_option("--kernel", enc_kernel, "adpcm|mini_jpeg|mini_video");
    enc->add_option("--seed", enc_seed, "corpus seed (default: standard corpus)");
    enc->add_option("--quality", enc_quality, "encoder quality 1..100");
    enc->add_option("--out", enc_out, "output bitstream path");

    auto* dec = app.add_subcommand("decode", "decode a bitstream to media files");
    std::string dec_in, dec_out = "decoded", dec_regions;
    long long dec_seed = 7;
    dec->add_option("--in", dec_in, "input .efc bitstream")->required();
    dec->add_option("--out", dec_out, "output path prefix");
    dec->add_option("--regions", dec_regions, "JSON file with a region fault table");
    dec->add_option("--seed", dec_seed, "injection seed");

    auto* swp = app.add_subcommand("sweep", "run a bit-range or error-rate sweep");
    SweepCli sc;
    swp->add_option("--config", sc.config_path, "experiment config JSON");
    swp->add_option("--kernel", sc.kernel, "adpcm|mini_jpeg|mini_video");
    swp->add_option("--mode", sc.mode, "bits|rate");
    swp->add_option("--region", sc.region, "region name or all");
    swp->add_option("--rate", sc.rate, "error rate for bit sweeps");
    swp->add_option("--rates", sc.rates_csv, "comma list of rates for rate sweeps");
    swp->add_option("--bits", sc.bits, "bit range lo-hi for rate sweeps");
    swp->add_option("--model", sc.model, "single|perbit");
    swp->add_option("--trials", sc.trials, "trials per row");
    swp->add_option("--seed", sc.seed, "master seed");
    swp->add_option("--threads", sc.threads, "worker threads (0 = auto)");
    swp->add_option("--csv", sc.csv_path, "CSV output path");
    swp->add_option("--svg", sc.svg_path, "SVG output path");

    auto* pow = app.add_subcommand("power", "normalized power of a workload mix");
    std::string pow_workload, pow_out;
    pow->add_option("--workload", pow_workload, "workload JSON file")->required();
    pow->add_option("--out", pow_out, "write the report as JSON");

    auto* plt = app.add_subcommand("plot", "render a sweep CSV as SVG");
    std::string plt_csv, plt_svg = "sweep.svg";
    plt->add_option("--csv", plt_csv, "input CSV produced by sweep")->required();
    plt->add_option("--svg", plt_svg, "output SVG path");

    auto* rep = app.add_subcommand("reproduce", "run every sweep in a manifest");
    std::string rep_manifest, rep_outdir = "out";
    int rep_trials = 0;
    rep->add_option("--manifest", rep_manifest, "manifest JSON")->required();
    rep->add_option("--outdir", rep_outdir, "output directory");
    rep->add_option("--trials", rep_trials, "override trials for every run");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        const CorpusKind kind = corpus_kind_from_name(gen_kind);
        CorpusSpec spec;
        switch (kind) {
        case CorpusKind::AudioSineMix: spec = standard_audio_spec(); break;
        case CorpusKind::ImageGradient:
        case CorpusKind::ImagePlasma: spec = standard_image_spec(); break;
        case CorpusKind::VideoMovingBlocks: spec = standard_video_spec(); break;
        }
        spec.kind = kind;
        if (gen_seed >= 0) spec.seed = static_cast<std::uint64_t>(gen_seed);
        if (kind == CorpusKind::AudioSineMix) {
            atomic_write_file(gen_out + ".wav", wav_bytes(gen_audio(spec)));
            std::printf("wrote %s.wav\n", gen_out.c_str());
        } else if (kind == CorpusKind::VideoMovingBlocks) {
            const VideoSeq v = gen_video(spec);
            for (std::size_t i = 0; i < v.frames.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof name, "_%03zu.ppm", i);
                atomic_write_file(gen_out + name, ppm_bytes(v.frames[i]));
            }
            std::printf("wrote %zu frames to %s_*.ppm\n", v.frames.size(), gen_out.c_str());
        } else {
            const ImageYCbCr img = gen_image(spec);
            atomic_write_file(gen_out + ".ppm", ppm_bytes(img));
            atomic_write_file(gen_out + ".pgm", pgm_bytes(img.y, img.width, img.height));
            std::printf("wrote %s.ppm / %s.pgm\n", gen_out.c_str(), gen_out.c_str());
        }
        return 0;
    }

    if (enc->parsed()) {
        const KernelId kernel = kernel_from_name(enc_kernel);
        CorpusSpec spec = default_corpus(kernel);
        if (enc_seed >= 0) spec.seed = static_cast<std::uint64_t>(enc_seed);
        Bitstream bs;
        switch (kernel) {
        case KernelId::Adpcm:     bs = adpcm_encode(gen_audio(spec)); break;
        case KernelId::MiniJpeg:  bs = mini_jpeg_encode(gen_image(spec), enc_quality); break;
        case KernelId::MiniVideo: bs = mini_video_encode(gen_video(spec), enc_quality); break;
        }
        atomic_write_file(enc_out, bs.to_bytes());
        json stamp;
        stamp["artifact_version"] = kArtifactVersion;
        stamp["rng_algorithm"] = kRngAlgorithmId;
        stamp["kernel"] = kernel_name(kernel);
        stamp["corpus"] = corpus_json(spec);
        stamp["quality"] = enc_quality;
        write_stamp(enc_out, stamp);
        std::printf("wrote %s (%zu bytes)\n", enc_out.c_str(), bs.size_bytes());
        return 0;
    }

    if (dec->parsed()) {
        const Bitstream bs = load_bitstream(dec_in);
        RegionTable regions;
        if (!dec_regions.empty()) {
            const json j = load_json(dec_regions);
            regions = parse_region_table(j.contains("regions") ? j["regions"] : j);
        }
        FidelityContext ctx(regions, RngStream::root(static_cast<std::uint64_t>(dec_seed)));
        try {
            switch (bs.codec) {
            case CodecId::Adpcm:
                atomic_write_file(dec_out + ".wav", wav_bytes(adpcm_decode(bs, ctx)));
                std::printf("wrote %s.wav\n", dec_out.c_str());
                break;
            case CodecId::MiniJpeg: {
                const ImageYCbCr img = mini_jpeg_decode(bs, ctx);
                atomic_write_file(dec_out + ".ppm", ppm_bytes(img));
                std::printf("wrote %s.ppm\n", dec_out.c_str());
                break;
            }
            case CodecId::MiniVideo: {
                const VideoSeq v = mini_video_decode(bs, ctx);
                for (std::size_t i = 0; i < v.frames.size(); ++i) {
                    char name[32];
                    std::snprintf(name, sizeof name, "_%03zu.ppm", i);
                    atomic_write_file(dec_out + name, ppm_bytes(v.frames[i]));
                }
                std::printf("wrote %zu frames to %s_*.ppm\n", v.frames.size(),
                            dec_out.c_str());
                break;
            }
            }
        } catch (const decode_error& e) {
            std::fprintf(stderr, "decode failed: %s\n", e.what());
            return 2;
        }
        return 0;
    }

    if (swp->parsed()) {
        run_one_sweep(resolve_sweep_config(sc, swp));
        return 0;
    }

    if (pow->parsed()) {
        const WorkloadFile w = parse_workload(load_json(pow_workload));
        json report;
        report["artifact_version"] = kArtifactVersion;
        report["workload"] = pow_workload;
        json regions = json::array();
        for (const auto& r : w.mix.regions)
            regions.push_back({{"name", r.name},
                               {"fraction", r.fraction},
                               {"rate", r.rate},
                               {"voltage", voltage_for_error_rate(r.rate, w.params)}});
        report["regions"] = regions;
        const double p = normalized_power(w.mix, w.params);
        report["normalized_power"] = p;
        std::printf("normalized_power %.6f\n", p);
        if (!pow_out.empty()) atomic_write_file(pow_out, report.dump(2) + "\n");
        return 0;
    }

    if (plt->parsed()) {
        const auto bytes = read_file(plt_csv);
        const SweepResult r = csv_to_result(std::string(bytes.begin(), bytes.end()));
        atomic_write_file(plt_svg, plot_svg(r));
        std::printf("wrote %s\n", plt_svg.c_str());
        return 0;
    }

    if (rep->parsed()) {
        const json manifest = load_json(rep_manifest);
        std::filesystem::create_directories(rep_outdir);
        for (const json& entry : manifest.at("runs")) {
            const std::string name = entry.at("name");
            ExperimentConfig cfg = parse_experiment_config(entry.at("config"));
            if (rep_trials > 0) cfg.sweep.trials = rep_trials;
            cfg.csv_path = rep_outdir + "/" + name + ".csv";
            cfg.svg_path = rep_outdir + "/" + name + ".svg";
            run_one_sweep(cfg);
            std::printf("%s done\n", name.c_str());
        }
        return 0;
    }

    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return main_inner(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
