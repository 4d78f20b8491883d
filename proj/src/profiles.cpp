#include "svrqsts/profiles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "svrqsts/errors.hpp"

namespace svrqsts {

void PiecewiseLinear::validate(const char* what) const {
    if (points.size() < 2) throw ConfigError(std::string(what) + ": needs at least two breakpoints");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].first > points[i - 1].first))
            throw ConfigError(std::string(what) + ": breakpoint times must be strictly increasing");
    }
}

double PiecewiseLinear::value_at(double t) const {
    if (points.empty()) throw std::out_of_range("empty profile");
    if (t < points.front().first || t > points.back().first)
        throw std::out_of_range("profile sampled at t=" + std::to_string(t) + " outside [" +
                                std::to_string(points.front().first) + ", " +
                                std::to_string(points.back().first) + "]");
    // Breakpoint counts are small; linear scan keeps this simple.
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (t <= points[i].first) {
            const auto& [t0, v0] = points[i - 1];
            const auto& [t1, v1] = points[i];
            if (t1 == t0) return v1;
            double w = (t - t0) / (t1 - t0);
            return v0 + w * (v1 - v0);
        }
    }
    return points.back().second;
}

double PiecewiseLinear::integral() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        acc += 0.5 * (points[i].second + points[i - 1].second) * (points[i].first - points[i - 1].first);
    }
    return acc;
}

double PiecewiseLinear::mean() const {
    double span = back_time() - front_time();
    if (span <= 0.0) throw std::out_of_range("profile span is empty");
    return integral() / span;
}

double interpolate_profile(const LoadProfile& profile, double t_s) {
    return profile.value_at(t_s);
}

double sample_daily(const PiecewiseLinear& curve, double offset_s, double t_s) {
    double span = curve.back_time() - curve.front_time();
    double t = curve.front_time() + std::fmod(offset_s + t_s - curve.front_time(), span);
    if (t < curve.front_time()) t += span;
    return curve.value_at(t);
}

PiecewiseLinear default_daily_shape() {
    // Night trough at 5 h, evening peak at 19 h, cyclic endpoints. Spans
    // [0, 1] so scaled profiles hit their demand range exactly.
    constexpr double h = 3600.0;
    return PiecewiseLinear{{
        {0 * h, 0.30},
        {2 * h, 0.12},
        {5 * h, 0.00},
        {7 * h, 0.30},
        {9 * h, 0.60},
        {12 * h, 0.72},
        {15 * h, 0.66},
        {17 * h, 0.82},
        {19 * h, 1.00},
        {21 * h, 0.92},
        {22 * h, 0.78},
        {24 * h, 0.30},
    }};
}

PiecewiseLinear scale_shape(const PiecewiseLinear& shape, double min_mw, double max_mw) {
    PiecewiseLinear out = shape;
    for (auto& [t, v] : out.points) {
        (void)t;
        v = min_mw + v * (max_mw - min_mw);
    }
    return out;
}

PiecewiseLinear constant_profile(double value, double duration_s) {
    return PiecewiseLinear{{{0.0, value}, {duration_s, value}}};
}

}  // namespace svrqsts
