#include <doctest.h>

#include <cmath>

#include "efc/power.hpp"

using namespace efc;

namespace {

PowerParams linear_params() {
    PowerParams p;
    p.curve = VoltageCurve::Linear;
    return p;
}

PowerParams calibrated() { return PowerParams{}; } // exponential, alu_share 0.61

// Within-row splits are estimates (only the row totals are published
// inputs); these mixes ship as the bundled workload files.
WorkloadMix g721_mix() {
    return {{{"quantization", 0.010, 0.10},
             {"step_size", 0.010, 0.10},
             {"predictors", 0.010, 0.10},
             {"all_else", 0.777, 0.04}}};
}

WorkloadMix jpeg_mix() {
    return {{{"quantization", 0.600, 0.06},
             {"upsampling", 0.100, 0.05},
             {"all_else", 0.005, 0.04}}};
}

WorkloadMix h263_mix() {
    return {{{"idct", 0.350, 0.10},
             {"all_else", 0.292, 0.06}}};
}

} // namespace

TEST_CASE("curve boundaries") {
    for (const auto curve : {VoltageCurve::Linear, VoltageCurve::Exponential}) {
        PowerParams p;
        p.curve = curve;
        CHECK(error_rate_at_voltage(p.v_rated, p) == doctest::Approx(0.0));
        CHECK(error_rate_at_voltage(p.v_crit, p) == doctest::Approx(p.eps_max));
        CHECK(voltage_for_error_rate(0.0, p) == doctest::Approx(p.v_rated));
        CHECK(voltage_for_error_rate(p.eps_max, p) == doctest::Approx(p.v_crit));
    }
}

TEST_CASE("linear curve midpoint") {
    const PowerParams p = linear_params();
    CHECK(error_rate_at_voltage(0.85, p) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(voltage_for_error_rate(0.25, p) == doctest::Approx(0.85).epsilon(1e-12));
}

TEST_CASE("domain validation") {
    const PowerParams p = linear_params();
    CHECK_THROWS_AS(error_rate_at_voltage(0.69, p), std::invalid_argument);
    CHECK_THROWS_AS(error_rate_at_voltage(1.01, p), std::invalid_argument);
    CHECK_THROWS_AS(voltage_for_error_rate(0.51, p), std::invalid_argument);
    CHECK_THROWS_AS(voltage_for_error_rate(-0.1, p), std::invalid_argument);

    PowerParams bad;
    bad.v_crit = 1.2;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("round trip is the identity within 1e-12") {
    for (const auto curve : {VoltageCurve::Linear, VoltageCurve::Exponential}) {
        PowerParams p;
        p.curve = curve;
        for (const double eps : {0.01, 0.04, 0.1}) {
            const double v = voltage_for_error_rate(eps, p);
            CHECK(std::abs(error_rate_at_voltage(v, p) - eps) < 1e-12);
        }
        for (double v = p.v_crit; v <= p.v_rated + 1e-9; v += 0.01) {
            const double vv = std::min(v, p.v_rated);
            const double eps = error_rate_at_voltage(vv, p);
            CHECK(std::abs(voltage_for_error_rate(eps, p) - vv) < 1e-12);
        }
    }
}

TEST_CASE("error rate is monotone decreasing in voltage") {
    for (const auto curve : {VoltageCurve::Linear, VoltageCurve::Exponential}) {
        PowerParams p;
        p.curve = curve;
        double prev = 1.0;
        for (double v = p.v_crit; v <= p.v_rated + 1e-9; v += 0.005) {
            const double eps = error_rate_at_voltage(std::min(v, p.v_rated), p);
            CHECK(eps <= prev + 1e-15);
            prev = eps;
        }
    }
}

TEST_CASE("normalized power boundaries") {
    const PowerParams p = calibrated();
    WorkloadMix zero{{{"a", 0.5, 0.0}, {"b", 0.3, 0.0}}};
    CHECK(normalized_power(zero, p) == 1.0);

    PowerParams no_share = p;
    no_share.alu_share = 0.0;
    CHECK(normalized_power(g721_mix(), no_share) == 1.0);
}

TEST_CASE("normalized power stays in [1 - alu_share, 1]") {
    const PowerParams p = calibrated();
    WorkloadMix maxed{{{"all", 1.0, p.eps_max}}};
    const double lo = normalized_power(maxed, p);
    CHECK(lo >= 1.0 - p.alu_share - 1e-12);
    for (const auto& mix : {g721_mix(), jpeg_mix(), h263_mix()}) {
        const double v = normalized_power(mix, p);
        CHECK(v <= 1.0);
        CHECK(v >= 1.0 - p.alu_share);
    }
}

TEST_CASE("normalized power weakly decreases in rate and in share") {
    PowerParams p = calibrated();
    double prev = 1.0;
    for (const double rate : {0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5}) {
        WorkloadMix m{{{"x", 0.6, rate}}};
        const double v = normalized_power(m, p);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    prev = 1.0;
    for (const double share : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        p.alu_share = share;
        const double v = normalized_power(g721_mix(), p);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("workload validation") {
    const PowerParams p = calibrated();
    WorkloadMix over{{{"a", 0.8, 0.01}, {"b", 0.3, 0.01}}};
    CHECK_THROWS_AS(normalized_power(over, p), std::invalid_argument);
    WorkloadMix hot{{{"a", 0.5, 0.6}}}; // rate above eps_max
    CHECK_THROWS_AS(normalized_power(hot, p), std::invalid_argument);
}

// The three bundled workload mixes against the published estimates, under
// the calibrated defaults; ordering must match exactly.
TEST_CASE("workload study power estimates") {
    const PowerParams p = calibrated();
    const double g721 = normalized_power(g721_mix(), p);
    const double jpeg = normalized_power(jpeg_mix(), p);
    const double h263 = normalized_power(h263_mix(), p);
    CHECK(std::abs(g721 - 0.89) <= 0.03);
    CHECK(std::abs(jpeg - 0.88) <= 0.03);
    CHECK(std::abs(h263 - 0.87) <= 0.03);
    CHECK(h263 < jpeg);
    CHECK(jpeg < g721);
}
