#pragma once

#include <string>

#include "svrqsts/predispatch.hpp"
#include "svrqsts/qsts_engine.hpp"

namespace svrqsts {

/// Writes voltages.csv, flows.csv, taps.csv, summary.txt and runmeta.json.
/// Fixed 6-decimal formatting keeps reruns bitwise identical.
void write_run_outputs(const std::string& dir,
                       const TimeSeries& ts,
                       const RunMeta& meta,
                       const SummaryReport& summary);

struct LoadedRun {
    TimeSeries series;
    RunMeta meta;
};

/// Reads a run directory back. Throws IoError on missing files, ragged
/// rows or malformed values.
LoadedRun read_run_dir(const std::string& dir);

std::string format_summary(const SummaryReport& summary);

/// Forecast CSV: header "time_s,demand_mw".
PiecewiseLinear read_forecast_csv(const std::string& path);

/// Schedule CSV: header "time_s,p_mw".
void write_schedule_csv(const std::string& path, const DispatchSchedule& schedule);
DispatchSchedule read_schedule_csv(const std::string& path);

}  // namespace svrqsts
