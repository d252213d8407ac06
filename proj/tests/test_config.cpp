#include <doctest.h>

#include "efc/config.hpp"

using namespace efc;

TEST_CASE("bit range strings") {
    CHECK(parse_bit_range("0-7").lo == 0);
    CHECK(parse_bit_range("0-7").hi == 7);
    CHECK(parse_bit_range("5").lo == 5);
    CHECK(parse_bit_range("5").hi == 5);
    CHECK(bit_range_string(BitRange(3, 19)) == "3-19");
    CHECK_THROWS_AS(parse_bit_range("7-0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_bit_range("x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_bit_range("0-40"), std::invalid_argument);
}

TEST_CASE("fault spec serialization round trip") {
    const FaultSpec s(0.04, BitRange(0, 7), FlipModel::PerBitIndependent);
    const FaultSpec back = parse_fault_spec(fault_spec_json(s));
    CHECK(back.rate == s.rate);
    CHECK(back.range.lo == s.range.lo);
    CHECK(back.range.hi == s.range.hi);
    CHECK(back.model == s.model);
}

TEST_CASE("region table parse") {
    const json j = json::parse(R"({
        "idct": {"rate": 0.04, "bits": "0-7", "model": "single"},
        "upsample": {"rate": 0.05, "bits": "0-7"}
    })");
    const RegionTable t = parse_region_table(j);
    REQUIRE(t.size() == 2);
    CHECK(t.at("idct").rate == 0.04);
    CHECK(t.at("upsample").range.hi == 7);
}

TEST_CASE("experiment config defaults and overrides") {
    const json j = json::parse(R"({
        "kernel": "mini_video",
        "quality": 80,
        "sweep": {"mode": "bits", "region": "idct", "rate": 0.04,
                  "trials": 50, "seed": 9}
    })");
    const ExperimentConfig cfg = parse_experiment_config(j);
    CHECK(cfg.sweep.kernel == KernelId::MiniVideo);
    CHECK(cfg.sweep.corpus.seed == standard_video_spec().seed);
    CHECK(cfg.sweep.quality == 80);
    CHECK(cfg.mode == "bits");
    CHECK(cfg.sweep.target == "idct");
    CHECK(cfg.sweep.trials == 50);
    CHECK(cfg.sweep.seed == 9);
}

TEST_CASE("experiment config validation") {
    CHECK_THROWS_AS(parse_experiment_config(json::parse(R"({"kernel": "mp3"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_config(json::parse(R"({"quality": 0})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_experiment_config(json::parse(R"({"sweep": {"mode": "zigzag"}})")),
        std::invalid_argument);
    CHECK_THROWS_AS(
        parse_experiment_config(json::parse(R"({"sweep": {"trials": 0}})")),
        std::invalid_argument);
}

TEST_CASE("run stamp carries replay data and no clocks") {
    const ExperimentConfig cfg = parse_experiment_config(
        json::parse(R"({"kernel": "adpcm", "sweep": {"seed": 123}})"));
    const json stamp = run_stamp(cfg);
    CHECK(stamp["rng_algorithm"] == kRngAlgorithmId);
    CHECK(stamp["master_seed"] == 123);
    CHECK(stamp["config"]["kernel"] == "adpcm");
    // byte-deterministic across calls
    CHECK(run_stamp(cfg).dump() == stamp.dump());
}

TEST_CASE("workload file parse") {
    const json j = json::parse(R"({
        "params": {"v_rated": 1.0, "v_crit": 0.7, "eps_max": 0.5,
                   "alu_share": 0.61, "curve": "exponential"},
        "regions": [
            {"name": "idct", "fraction": 0.35, "rate": 0.10},
            {"name": "all_else", "fraction": 0.292, "rate": 0.06}
        ]
    })");
    const WorkloadFile w = parse_workload(j);
    CHECK(w.params.alu_share == 0.61);
    CHECK(w.params.curve == VoltageCurve::Exponential);
    REQUIRE(w.mix.regions.size() == 2);
    CHECK(w.mix.regions[0].name == "idct");

    CHECK_THROWS_AS(parse_workload(json::parse(R"({"params": {}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_workload(json::parse(
                        R"({"regions": [{"name": "a", "fraction": 0.5, "rate": 0.9}]})")),
                    std::invalid_argument);
}
