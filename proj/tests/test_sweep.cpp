#include <doctest.h>

#include "efc/sweep.hpp"

using namespace efc;

TEST_CASE("kernel names and region lists") {
    CHECK(kernel_from_name("adpcm") == KernelId::Adpcm);
    CHECK(kernel_from_name("jpeg") == KernelId::MiniJpeg);
    CHECK(kernel_from_name("mini_video") == KernelId::MiniVideo);
    CHECK_THROWS_AS(kernel_from_name("mp3"), std::invalid_argument);
    CHECK(kernel_regions(KernelId::Adpcm).size() == 4);
    CHECK(default_pinned(KernelId::MiniJpeg) == std::vector<std::string>{"entropy_decode"});
}

TEST_CASE("all-reliable trial succeeds at the reliable baseline") {
    TrialConfig cfg;
    cfg.kernel = KernelId::Adpcm;
    const TrialResult r = run_trial(cfg);
    REQUIRE(r.success);
    CHECK(r.quality.value_db == doctest::Approx(22.199338).epsilon(1e-6));
}

TEST_CASE("identical trial configs give identical results") {
    TrialConfig cfg;
    cfg.kernel = KernelId::MiniJpeg;
    cfg.corpus = standard_image_spec();
    cfg.regions = {{"dequantize", FaultSpec(0.06, BitRange(0, 7))}};
    cfg.trial_index = 3;
    const TrialResult a = run_trial(cfg);
    const TrialResult b = run_trial(cfg);
    REQUIRE(a.success);
    REQUIRE(b.success);
    CHECK(a.quality.value_db == b.quality.value_db); // bit-equal
}

// Injecting into a region the kernel never executes must leave the trial
// at the reliable baseline: per-region sweeps partition blame.
TEST_CASE("unexecuted regions cannot affect a trial") {
    TrialConfig cfg;
    cfg.kernel = KernelId::Adpcm;
    cfg.regions = {{"upsample", FaultSpec(1.0, BitRange(0, 31))}};
    const TrialResult r = run_trial(cfg);
    REQUIRE(r.success);
    CHECK(r.quality.value_db == doctest::Approx(22.199338).epsilon(1e-6));
}

TEST_CASE("decode failures are data") {
    TrialConfig cfg;
    cfg.kernel = KernelId::MiniJpeg;
    cfg.corpus = standard_image_spec();
    cfg.regions = {{"entropy_decode", FaultSpec(0.5, BitRange(0, 31))}};
    int failures = 0;
    for (int t = 0; t < 50; ++t) {
        cfg.trial_index = static_cast<std::uint64_t>(t);
        if (!run_trial(cfg).success) ++failures;
    }
    CHECK(failures >= 45);
}

TEST_CASE("unknown sweep region is rejected") {
    SweepConfig cfg;
    cfg.kernel = KernelId::Adpcm;
    cfg.target = "idct"; // not an adpcm region
    cfg.trials = 1;
    CHECK_THROWS_AS(bit_range_sweep(cfg, {0}), std::invalid_argument);
    CHECK_THROWS_AS(error_rate_sweep(cfg), std::invalid_argument);
}

TEST_CASE("rate validation") {
    SweepConfig cfg;
    cfg.rates = {0.5, 1.5};
    CHECK_THROWS_AS(error_rate_sweep(cfg), std::invalid_argument);
}

TEST_CASE("zero-rate sweep rows are perfect") {
    SweepConfig cfg;
    cfg.kernel = KernelId::Adpcm;
    cfg.trials = 8;
    cfg.rates = {0.0};
    const SweepResult r = error_rate_sweep(cfg);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].success_fraction == 1.0);
    CHECK(r.rows[0].successes == 8);
    CHECK(r.rows[0].mean_quality_db == doctest::Approx(22.199338).epsilon(1e-6));
}

TEST_CASE("bit sweep covers all 32 widths by default") {
    SweepConfig cfg;
    cfg.kernel = KernelId::Adpcm;
    cfg.trials = 2;
    cfg.rate = 0.0;
    const SweepResult r = bit_range_sweep(cfg);
    REQUIRE(r.rows.size() == 32);
    CHECK(r.rows.front().value == 0.0);
    CHECK(r.rows.back().value == 31.0);
    for (const auto& row : r.rows) CHECK(row.success_fraction == 1.0);
}

TEST_CASE("aggregation is independent of the parallelism degree") {
    SweepConfig cfg;
    cfg.kernel = KernelId::Adpcm;
    cfg.target = "all";
    cfg.trials = 24;
    cfg.rates = {0.0, 0.04};
    cfg.threads = 1;
    const std::string csv1 = summarize_csv(error_rate_sweep(cfg));
    cfg.threads = 8;
    const std::string csv8 = summarize_csv(error_rate_sweep(cfg));
    CHECK(csv1 == csv8);
}

TEST_CASE("csv bytes are frozen") {
    SweepResult r;
    SweepRow a;
    a.swept_param = "rate";
    a.value = 0.04;
    a.trials = 10;
    a.successes = 8;
    a.success_fraction = 0.8;
    a.mean_quality_db = 25.5;
    a.std_quality_db = 1.25;
    a.fail_invalid_code = 1;
    a.fail_index = 1;
    SweepRow b;
    b.swept_param = "rate";
    b.value = 0.5;
    b.trials = 10;
    b.successes = 0;
    b.success_fraction = 0.0;
    b.fail_invalid_code = 5;
    b.fail_index = 3;
    b.fail_stream = 2;
    r.rows = {a, b};

    const std::string expected =
        "swept_param,value,trials,successes,success_fraction,mean_quality_db,"
        "std_quality_db,fail_invalid_code,fail_index,fail_stream,fail_limit\n"
        "rate,0.040000,10,8,0.800000,25.500000,1.250000,1,1,0,0\n"
        "rate,0.500000,10,0,0.000000,,,5,3,2,0\n";
    CHECK(summarize_csv(r) == expected);
}

TEST_CASE("csv and svg reject empty results") {
    CHECK_THROWS_AS(summarize_csv(SweepResult{}), std::invalid_argument);
    CHECK_THROWS_AS(plot_svg(SweepResult{}), std::invalid_argument);
}

TEST_CASE("single-row result renders as header plus one line") {
    SweepResult r;
    SweepRow row;
    row.swept_param = "bits";
    row.trials = 1;
    row.successes = 1;
    row.success_fraction = 1.0;
    row.mean_quality_db = 10.0;
    r.rows = {row};
    const std::string csv = summarize_csv(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

// Widening the injected range can only add failure modes for the motion
// compensation address path.
TEST_CASE("mc success fraction non-increasing in range width") {
    SweepConfig cfg;
    cfg.kernel = KernelId::MiniVideo;
    cfg.corpus = standard_video_spec();
    cfg.target = "motion_compensation";
    cfg.rate = 0.04;
    cfg.trials = 60;
    const SweepResult r = bit_range_sweep(cfg, {0, 1, 3, 7, 15, 31});
    double prev = 1.1;
    for (const auto& row : r.rows) {
        const double sigma = std::sqrt(std::max(
            row.success_fraction * (1 - row.success_fraction) / row.trials, 1e-6));
        CHECK(row.success_fraction <= prev + 3 * sigma);
        prev = row.success_fraction;
    }
}

TEST_CASE("svg is well formed with one polyline per series") {
    SweepConfig cfg;
    cfg.kernel = KernelId::Adpcm;
    cfg.trials = 4;
    cfg.rates = {0.0, 0.02, 0.04};
    const std::string svg = plot_svg(error_rate_sweep(cfg));
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    std::size_t count = 0, at = 0;
    while ((at = svg.find("<polyline", at)) != std::string::npos) {
        ++count;
        ++at;
    }
    CHECK(count == 2);
}

TEST_CASE("failure histogram adds up") {
    SweepConfig cfg;
    cfg.kernel = KernelId::MiniJpeg;
    cfg.corpus = standard_image_spec();
    cfg.target = "entropy_decode";
    cfg.trials = 40;
    cfg.rates = {0.5};
    cfg.range = BitRange(0, 31);
    const SweepResult r = error_rate_sweep(cfg);
    const SweepRow& row = r.rows[0];
    CHECK(row.successes + row.fail_invalid_code + row.fail_index + row.fail_stream +
              row.fail_limit == row.trials);
    CHECK(row.success_fraction <= 0.1);
}
