#pragma once

#include <utility>
#include <vector>

namespace svrqsts {

/// Piecewise-linear curve over time. Breakpoint times are strictly
/// increasing; evaluation outside the covered span is an error.
struct PiecewiseLinear {
    std::vector<std::pair<double, double>> points;  // (time_s, value)

    double front_time() const { return points.front().first; }
    double back_time() const { return points.back().first; }

    /// Linear interpolation at t. Throws std::out_of_range outside the span.
    double value_at(double t) const;

    /// Trapezoidal integral over the full span.
    double integral() const;

    /// Time average over the full span.
    double mean() const;

    /// Checks strictly increasing times and at least two points.
    void validate(const char* what) const;
};

/// Daily load shape in MW. Loads reference profiles by name and apply a
/// share factor.
using LoadProfile = PiecewiseLinear;

/// Daily DG active-power export curve in MW, covering [0, 86400].
struct DispatchSchedule {
    PiecewiseLinear curve;

    double value_at(double t) const { return curve.value_at(t); }
};

double interpolate_profile(const LoadProfile& profile, double t_s);

/// Samples a daily curve at offset+t, wrapping at the profile span so
/// simulations can start at any hour.
double sample_daily(const PiecewiseLinear& curve, double offset_s, double t_s);

/// Built-in normalized daily shape (low night plateau, evening peak),
/// values in [0, 1] over [0, 86400].
PiecewiseLinear default_daily_shape();

/// Scales a normalized shape to the [min_mw, max_mw] demand range.
PiecewiseLinear scale_shape(const PiecewiseLinear& shape, double min_mw, double max_mw);

/// Constant profile over 24 h.
PiecewiseLinear constant_profile(double value, double duration_s = 86400.0);

}  // namespace svrqsts
