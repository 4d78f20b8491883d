#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svrqsts/grid_model.hpp"
#include "svrqsts/powerflow.hpp"

namespace svrqsts {

enum class Terminal : std::uint8_t { Source, Load };

/// Regulation point selection. Bidirectional follows the power direction,
/// cogeneration stays at the load terminal.
Terminal regulation_side(ControlMode mode, Direction dir);

/// Sign the controller assumes for d(v_regulated)/d(tap).
/// Load terminal: +1 (V_load = ratio * V_source). Source terminal: -1.
int assumed_gain_sign(Terminal side);

struct SvrControllerState {
    double timer_s = 0.0;
    bool correcting = false;  // a violation episode is in progress
    enum class Stage : std::uint8_t { First, Subsequent } stage = Stage::First;
    std::optional<double> at_limit_since;
};

struct TapCommand {
    std::string svr;
    int delta = 0;  // +1 or -1
    double issued_at_s = 0.0;
};

/// One controller evaluation at time now_s against the regulated-terminal
/// voltage. Violation uses |err| > D/2, shrunk by the hysteresis band while
/// an episode is active. The first command of an episode fires T1 after
/// onset, later ones every T2. Commands that would push the tap past the
/// end stops are suppressed and at_limit_since is recorded instead.
std::optional<TapCommand> controller_step(SvrControllerState& state,
                                          const SvrControllerParams& params,
                                          std::string_view svr_id,
                                          double v_reg_pu,
                                          Terminal side,
                                          int tap,
                                          double dt_s,
                                          double now_s);

/// First-tap delays for a main-branch cascade ordered by electrical
/// distance from the primary substation: t1[i] = base + i * increment.
std::vector<double> assign_cascade_delays(std::size_t svr_count,
                                          double t1_base_s,
                                          double increment_s);

enum class RunawayKind : std::uint8_t {
    TapLimitOvervoltage,
    TapLimitUndervoltage,
    IneffectiveRegulation,
};

struct RunawayEvent {
    std::string svr;
    double start_s = 0.0;
    double end_s = 0.0;
    Terminal terminal_regulated = Terminal::Load;
    int final_tap = 0;
    RunawayKind classification = RunawayKind::TapLimitOvervoltage;
};

/// Per-SVR recorded series, one sample per engine step.
struct RunawaySeries {
    std::vector<int> tap;
    std::vector<double> v_reg;        // regulated-terminal |V| pu
    std::vector<double> v_opp;        // opposite-terminal |V| pu
    std::vector<std::uint8_t> side;   // Terminal per step
    std::vector<std::uint8_t> command;  // 1 when a tap command was issued
};

struct RunawayParams {
    double v_ref_pu = 1.0;
    double deadband_pu = 0.01;
    double step_size_pu = kTapStepPu;
    double dt_s = 1.0;
    double window_s = 10.0;
};

const char* runaway_kind_name(RunawayKind k);

/// Post-processing scan. Emits TapLimit events when the tap sits at an end
/// stop with the violation persisting for at least window_s (classified by
/// the opposite-terminal error sign), and IneffectiveRegulation when three
/// or more consecutive taps each move the regulated voltage by less than
/// 20% of the ideal step effect while the violation persists.
std::vector<RunawayEvent> detect_runaway(std::string_view svr_id,
                                         const RunawaySeries& series,
                                         const RunawayParams& params);

}  // namespace svrqsts
