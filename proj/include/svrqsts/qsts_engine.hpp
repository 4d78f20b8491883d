#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "svrqsts/grid_model.hpp"
#include "svrqsts/powerflow.hpp"
#include "svrqsts/svr_control.hpp"

namespace svrqsts {

struct ScenarioEvent {
    double time_s = 0.0;
    std::string device;  // switch or breaker id
    SwitchState new_state = SwitchState::Open;
};

/// Empty selections fall back to defaults: every SVR, both terminals of
/// every SVR, every source branch. SVR terminals and source branches are
/// always recorded even with explicit selections, so summaries stay
/// derivable from the persisted series.
struct RecordSelection {
    std::vector<std::string> buses;
    std::vector<std::string> branches;
    std::vector<std::string> svrs;
};

struct SimulationConfig {
    double dt_s = 1.0;
    double duration_s = 86400.0;
    double start_offset_s = 0.0;  // profiles sampled at offset + t, wrapped daily
    RecordSelection record;
    double band_low_pu = 0.93;
    double band_high_pu = 1.05;
    bool svrs_enabled = true;     // false bypasses taps (neutral) and controllers
    SolveOptions solve;
    double runaway_window_s = 10.0;
};

struct RecordedBus {
    std::string id;
    std::vector<double> vmag_pu;  // rounded to the persisted precision
};

struct RecordedBranch {
    std::string id;
    std::vector<double> p_mw;
    std::vector<double> q_mvar;
    std::vector<std::uint8_t> direction;  // Direction per step
};

struct RecordedSvr {
    std::string id;
    std::vector<int> tap;
    std::vector<std::uint8_t> event;  // 1 when a command was issued this step
};

/// Exactly duration/dt + 1 rows, no gaps.
struct TimeSeries {
    double dt_s = 1.0;
    std::vector<double> time_s;
    std::vector<RecordedBus> buses;
    std::vector<RecordedBranch> branches;
    std::vector<RecordedSvr> svrs;

    std::size_t steps() const { return time_s.size(); }
    const RecordedBus* find_bus(const std::string& id) const;
    const RecordedBranch* find_branch(const std::string& id) const;
    const RecordedSvr* find_svr(const std::string& id) const;
};

/// Controller metadata needed to rebuild the summary from persisted series.
struct SvrMeta {
    std::string id;
    std::string source_bus;
    std::string load_bus;
    double v_ref_pu = 1.0;
    double deadband_pu = 0.01;
    double hysteresis_pu = 0.0;
    double step_size_pu = kTapStepPu;
    ControlMode mode = ControlMode::Bidirectional;
};

struct RunMeta {
    double dt_s = 1.0;
    double duration_s = 0.0;
    double band_low_pu = 0.93;
    double band_high_pu = 1.05;
    double runaway_window_s = 10.0;
    bool svrs_enabled = true;
    std::vector<SvrMeta> svrs;
};

struct BusStats {
    double vmin_pu = 0.0;
    double vmax_pu = 0.0;
    double minutes_outside = 0.0;
};

struct SummaryReport {
    long steps = 0;
    double dt_s = 1.0;
    double band_low_pu = 0.93;
    double band_high_pu = 1.05;
    std::map<std::string, long> svr_tap_ops;
    std::vector<RunawayEvent> runaway_events;
    std::map<std::string, BusStats> bus_stats;
    double source_energy_mwh = 0.0;  // net substation energy over the run
};

struct RunResult {
    TimeSeries series;
    RunMeta meta;
    SummaryReport summary;
};

/// Advances the coupled system in fixed steps: apply due events and
/// re-validate topology, sample profiles and dispatch, solve the power
/// flow with the current taps, step every controller in PS-to-far-end
/// order, then apply emitted tap deltas so they become visible at the
/// next step. Runaway detection runs on the recorded series afterwards.
/// Throws NonConvergenceError with the failing step index; topology
/// errors after an event propagate.
RunResult run(const Network& net,
              const SwitchStates& initial_states,
              const std::vector<ScenarioEvent>& events,
              const SimulationConfig& cfg);

/// Aggregates the recorded series. Shared by the engine and by report
/// regeneration from persisted CSVs, so both produce identical text.
SummaryReport summarize(const TimeSeries& ts, const RunMeta& meta);

}  // namespace svrqsts
