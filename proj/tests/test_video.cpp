#include <doctest.h>

#include <set>

#include "efc/corpus.hpp"
#include "efc/metrics.hpp"
#include "efc/mini_video.hpp"

using namespace efc;

namespace {

double failure_fraction(const Bitstream& bs, const RegionTable& table, int trials,
                        std::uint64_t seed) {
    int failures = 0;
    for (int t = 0; t < trials; ++t) {
        FidelityContext ctx(table, derive_stream(seed, {t}));
        try {
            mini_video_decode(bs, ctx);
        } catch (const decode_error&) {
            ++failures;
        }
    }
    return static_cast<double>(failures) / trials;
}

} // namespace

TEST_CASE("reliable round trip is reproducible with frozen quality") {
    const VideoSeq vid = gen_video(standard_video_spec());
    VideoEncodeStats stats;
    const Bitstream bs = mini_video_encode(vid, 75, &stats);

    FidelityContext c1 = FidelityContext::all_reliable();
    FidelityContext c2 = FidelityContext::all_reliable();
    const VideoSeq a = mini_video_decode(bs, c1);
    const VideoSeq b = mini_video_decode(bs, c2);
    CHECK(a == b);

    const double db = psnr(vid, a).value_db;
    CHECK(db == doctest::Approx(41.540576).epsilon(1e-6)); // frozen baseline

    // Frozen structural regression for the standard clip: moving content
    // must force motion vectors and residual blocks.
    CHECK(stats.nonzero_mv_mbs >= 1);
    CHECK(stats.nonzero_mv_mbs == 170);
    CHECK(stats.skip_mbs == 715);
    CHECK(stats.coded_mbs == 181);
    CHECK(stats.coded_blocks == 784);
}

TEST_CASE("encode is deterministic") {
    const VideoSeq vid = gen_video(standard_video_spec());
    CHECK(mini_video_encode(vid, 75).to_bytes() == mini_video_encode(vid, 75).to_bytes());
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(mini_video_encode(VideoSeq{}, 75), std::invalid_argument);
    VideoSeq bad;
    bad.frames.push_back(ImageYCbCr::sized(120, 128));
    CHECK_THROWS_AS(mini_video_encode(bad, 75), std::invalid_argument);
}

TEST_CASE("decode exercises exactly the documented regions") {
    const Bitstream bs = mini_video_encode(gen_video(standard_video_spec()), 75);
    FidelityContext ctx = FidelityContext::all_reliable();
    mini_video_decode(bs, ctx);
    CHECK(ctx.touched_regions() == std::set<std::string>{
        "huffman_decode", "motion_compensation", "idct", "reconstruction"});
}

// Motion compensation dies on even the narrowest flips while the inverse
// transform shrugs off a much wider range.
TEST_CASE("motion compensation is far more failure-prone than idct") {
    const Bitstream bs = mini_video_encode(gen_video(standard_video_spec()), 75);
    const double mc = failure_fraction(
        bs, {{"motion_compensation", FaultSpec(0.04, BitRange(0, 1))}}, 150, 31);
    const double idct = failure_fraction(
        bs, {{"idct", FaultSpec(0.04, BitRange(0, 7))}}, 150, 32);
    CHECK(mc > idct);
    CHECK(mc > 0.9);
    CHECK(idct == 0.0);
}

// Reconstruction indexes the clipping table: safe through the low byte,
// fails once flips clear the table margin.
TEST_CASE("reconstruction crash onset") {
    const Bitstream bs = mini_video_encode(gen_video(standard_video_spec()), 75);
    CHECK(failure_fraction(
              bs, {{"reconstruction", FaultSpec(0.06, BitRange(0, 7))}}, 50, 33) == 0.0);
    CHECK(failure_fraction(
              bs, {{"reconstruction", FaultSpec(0.04, BitRange(0, 10))}}, 50, 34) > 0.5);
}

TEST_CASE("heavy huffman injection fails with parse-shaped errors") {
    const Bitstream bs = mini_video_encode(gen_video(standard_video_spec()), 75);
    int failures = 0;
    std::set<FailureKind> kinds;
    for (int t = 0; t < 100; ++t) {
        FidelityContext ctx({{"huffman_decode", FaultSpec(0.5, BitRange(0, 31))}},
                            derive_stream(35, {t}));
        try {
            mini_video_decode(bs, ctx);
        } catch (const decode_error& e) {
            ++failures;
            kinds.insert(e.failure().kind);
        }
    }
    CHECK(failures >= 90);
    for (const auto k : kinds)
        CHECK((k == FailureKind::InvalidCode || k == FailureKind::IndexOutOfRange ||
               k == FailureKind::StreamExhausted));
}

// No injected trial may corrupt simulator state: under maximal injection
// every trial either succeeds or surfaces a detected failure.
TEST_CASE("decode survives saturation injection on every region") {
    const VideoSeq vid = gen_video(standard_video_spec());
    const Bitstream bs = mini_video_encode(vid, 75);
    const FaultSpec wild(0.9, BitRange(0, 31));
    RegionTable table;
    for (const auto& r : {"huffman_decode", "motion_compensation", "idct", "reconstruction"})
        table[r] = wild;
    for (int t = 0; t < 50; ++t) {
        FidelityContext ctx(table, derive_stream(98, {t}));
        try {
            const VideoSeq out = mini_video_decode(bs, ctx);
            CHECK(out.same_shape(vid));
        } catch (const decode_error&) {
        }
    }
}

// Per-function operating point from the power-estimation study; the
// acceptance suite runs the full-trial version.
TEST_CASE("study operating point keeps PSNR above 30 dB") {
    const VideoSeq vid = gen_video(standard_video_spec());
    const Bitstream bs = mini_video_encode(vid, 75);
    const RegionTable table{
        {"motion_compensation", FaultSpec::reliable_spec()},
        {"huffman_decode", FaultSpec::reliable_spec()},
        {"idct", FaultSpec(0.10, BitRange(0, 28))},
        {"reconstruction", FaultSpec(0.06, BitRange(0, 7))},
    };
    double sum = 0;
    int successes = 0;
    const int trials = 30;
    for (int t = 0; t < trials; ++t) {
        FidelityContext ctx(table, derive_stream(6, {t}));
        try {
            sum += psnr(vid, mini_video_decode(bs, ctx)).value_db;
            ++successes;
        } catch (const decode_error&) {
        }
    }
    REQUIRE(successes == trials); // this configuration has no failure path
    CHECK(sum / successes >= 30.0);
}
