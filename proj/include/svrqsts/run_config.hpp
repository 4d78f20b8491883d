#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svrqsts/qsts_engine.hpp"
#include "svrqsts/scenarios.hpp"

namespace svrqsts {

/// Resolved run description: network source, scenario, overrides, outputs.
struct RunConfig {
    std::optional<std::string> builtin_case;   // "pr09-pr11"
    std::optional<std::string> network_file;   // JSON network document
    CaseParams case_params;                    // builtin-case overrides
    std::optional<PresetName> scenario;
    std::optional<ControlMode> mode_override;  // applied to every SVR
    std::vector<ScenarioEvent> events;

    enum class DispatchKind { Default, None, Constant, ScheduleFile };
    DispatchKind dispatch_kind = DispatchKind::Default;
    double dispatch_constant_mw = 0.0;
    std::string dispatch_file;

    SimulationConfig sim;
    std::string out_dir = "out";
};

/// Parses the JSON run config. Numbers are SI units (ohm, MW, kV, s);
/// conversion to per-unit happens inside the solver.
RunConfig load_run_config(const std::string& path);

/// Builtin twin-feeder case with default settings.
RunConfig default_builtin_config();

/// Network document loader (buses, lines, switches, sources, loads,
/// generators, svrs, profiles).
Network load_network_file(const std::string& path);

struct PreparedRun {
    Network net;
    SwitchStates states;
    std::vector<ScenarioEvent> events;
    SimulationConfig sim;
};

/// Resolves the config into a runnable description: builds or loads the
/// network, applies preset/mode/dispatch overrides, validates events.
PreparedRun prepare_run(const RunConfig& cfg);

/// prepare + engine run + outputs written to cfg.out_dir.
RunResult execute_run(const RunConfig& cfg);

}  // namespace svrqsts
