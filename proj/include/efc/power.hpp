#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace efc {

enum class VoltageCurve : std::uint8_t { Linear, Exponential };

// Parameterized stand-in for a hardware error-vs-voltage model. Between
// the rated and critical supply points the unit's error rate climbs from 0
// to eps_max along the chosen curve; dynamic power of the elastic share
// scales with the square of the voltage.
struct PowerParams {
    double v_rated = 1.0;
    double v_crit = 0.7;
    double eps_max = 0.5;
    // Fraction of processor dynamic power attributable to the elastic
    // units. Calibrated once against the bundled workload files; see the
    // README calibration note.
    double alu_share = 0.61;
    VoltageCurve curve = VoltageCurve::Exponential;

    void validate() const {
        if (!(v_crit > 0.0 && v_crit < v_rated))
            throw std::invalid_argument("PowerParams: need 0 < v_crit < v_rated");
        if (!(eps_max > 0.0 && eps_max <= 1.0))
            throw std::invalid_argument("PowerParams: eps_max must be in (0,1]");
        if (!(alu_share >= 0.0 && alu_share <= 1.0))
            throw std::invalid_argument("PowerParams: alu_share must be in [0,1]");
    }
};

inline constexpr double kExpCurveK = 4.0;

/// Error rate of an elastic unit at supply voltage v in [v_crit, v_rated]:
/// 0 at the rated point, eps_max at the critical point, monotone between.
inline double error_rate_at_voltage(double v, const PowerParams& p) {
    p.validate();
    if (!(v >= p.v_crit && v <= p.v_rated))
        throw std::invalid_argument("error_rate_at_voltage: v outside [v_crit, v_rated]");
    const double t = (p.v_rated - v) / (p.v_rated - p.v_crit);
    switch (p.curve) {
    case VoltageCurve::Linear:
        return p.eps_max * t;
    case VoltageCurve::Exponential:
        return p.eps_max * (std::exp(kExpCurveK * t) - 1.0) /
               (std::exp(kExpCurveK) - 1.0);
    }
    return 0.0;
}

/// Closed-form inverse of error_rate_at_voltage.
inline double voltage_for_error_rate(double eps, const PowerParams& p) {
    p.validate();
    if (!(eps >= 0.0 && eps <= p.eps_max))
        throw std::invalid_argument("voltage_for_error_rate: eps outside [0, eps_max]");
    const double span = p.v_rated - p.v_crit;
    switch (p.curve) {
    case VoltageCurve::Linear:
        return p.v_rated - span * eps / p.eps_max;
    case VoltageCurve::Exponential:
        return p.v_rated - span / kExpCurveK *
               std::log1p(eps / p.eps_max * (std::exp(kExpCurveK) - 1.0));
    }
    return p.v_rated;
}

// Per-region share of dynamic instructions and the error rate that region
// tolerates; the remainder of the workload runs at full reliability.
struct WorkloadRegion {
    std::string name;
    double fraction = 0.0;
    double rate = 0.0;
};

struct WorkloadMix {
    std::vector<WorkloadRegion> regions;

    void validate(const PowerParams& p) const {
        double total = 0.0;
        for (const auto& r : regions) {
            if (r.fraction < 0.0)
                throw std::invalid_argument("WorkloadMix: negative fraction");
            if (!(r.rate >= 0.0 && r.rate <= p.eps_max))
                throw std::invalid_argument("WorkloadMix: rate outside [0, eps_max]");
            total += r.fraction;
        }
        if (total > 1.0 + 1e-9)
            throw std::invalid_argument("WorkloadMix: fractions sum past 1");
    }
};

/// Normalized processor power: instructions running on an elastic unit at
/// tolerated rate eps scale that unit's share quadratically with its
/// voltage, everything else stays at nominal.
///   P = 1 - alu_share * sum_i frac_i * (1 - (v(eps_i)/v_rated)^2)
inline double normalized_power(const WorkloadMix& mix, const PowerParams& p) {
    mix.validate(p);
    double saved = 0.0;
    for (const auto& r : mix.regions) {
        const double vr = voltage_for_error_rate(r.rate, p) / p.v_rated;
        saved += r.fraction * (1.0 - vr * vr);
    }
    return 1.0 - p.alu_share * saved;
}

} // namespace efc
