#include "svrqsts/svr_control.hpp"

#include <cmath>

namespace svrqsts {

Terminal regulation_side(ControlMode mode, Direction dir) {
    if (mode == ControlMode::Cogeneration) return Terminal::Load;
    return dir == Direction::Reverse ? Terminal::Source : Terminal::Load;
}

int assumed_gain_sign(Terminal side) {
    // V_load = ratio * V_source: raising the tap raises the load terminal
    // and, in the controller's internal model, lowers the source terminal.
    return side == Terminal::Load ? +1 : -1;
}

std::optional<TapCommand> controller_step(SvrControllerState& state,
                                          const SvrControllerParams& params,
                                          std::string_view svr_id,
                                          double v_reg_pu,
                                          Terminal side,
                                          int tap,
                                          double dt_s,
                                          double now_s) {
    const double err = v_reg_pu - params.v_ref_pu;
    const double half_band = params.deadband_pu / 2.0;
    const double release = state.correcting ? half_band - params.hysteresis_pu : half_band;
    const bool violating = std::abs(err) > release;

    if (!violating) {
        state.timer_s = 0.0;
        state.stage = SvrControllerState::Stage::First;
        state.correcting = false;
        state.at_limit_since.reset();
        return std::nullopt;
    }

    const double active_delay =
        state.stage == SvrControllerState::Stage::First ? params.t1_s : params.t2_s;

    // The timer must have accumulated a full delay of violation before a
    // command fires; the interval ending now still counts afterwards.
    if (state.timer_s >= active_delay) {
        int delta = (err > 0.0 ? -1 : +1) * assumed_gain_sign(side);
        int target = tap + delta;
        state.stage = SvrControllerState::Stage::Subsequent;
        state.correcting = true;
        state.timer_s = dt_s;
        if (target < kTapMin || target > kTapMax) {
            // End stop: the violation persists but no command can help.
            if (!state.at_limit_since) state.at_limit_since = now_s;
            state.timer_s = active_delay;  // hold, re-check as conditions change
            return std::nullopt;
        }
        state.at_limit_since.reset();
        return TapCommand{std::string(svr_id), delta, now_s};
    }

    state.timer_s += dt_s;
    return std::nullopt;
}

std::vector<double> assign_cascade_delays(std::size_t svr_count,
                                          double t1_base_s,
                                          double increment_s) {
    if (t1_base_s <= 0.0 || increment_s <= 0.0)
        throw ConfigError("cascade delays must be positive");
    std::vector<double> out(svr_count);
    for (std::size_t i = 0; i < svr_count; ++i) out[i] = t1_base_s + static_cast<double>(i) * increment_s;
    return out;
}

const char* runaway_kind_name(RunawayKind k) {
    switch (k) {
        case RunawayKind::TapLimitOvervoltage: return "TapLimitOvervoltage";
        case RunawayKind::TapLimitUndervoltage: return "TapLimitUndervoltage";
        case RunawayKind::IneffectiveRegulation: return "IneffectiveRegulation";
    }
    return "?";
}

std::vector<RunawayEvent> detect_runaway(std::string_view svr_id,
                                         const RunawaySeries& series,
                                         const RunawayParams& params) {
    std::vector<RunawayEvent> events;
    const std::size_t n = series.tap.size();
    if (series.v_reg.size() != n || series.v_opp.size() != n || series.side.size() != n ||
        series.command.size() != n) {
        throw ConfigError("runaway series are not time-aligned");
    }
    const double half_band = params.deadband_pu / 2.0;
    auto violating = [&](std::size_t k) {
        return std::abs(series.v_reg[k] - params.v_ref_pu) > half_band;
    };

    // Tap pinned at an end stop with the violation persisting.
    const auto window_steps =
        static_cast<std::size_t>(std::ceil(params.window_s / params.dt_s));
    std::size_t run_start = 0;
    std::size_t run_len = 0;
    auto close_run = [&](std::size_t end_index) {
        if (run_len >= window_steps && run_len > 0) {
            RunawayEvent ev;
            ev.svr = std::string(svr_id);
            ev.start_s = static_cast<double>(run_start) * params.dt_s;
            ev.end_s = static_cast<double>(end_index) * params.dt_s;
            ev.terminal_regulated = static_cast<Terminal>(series.side[end_index]);
            ev.final_tap = series.tap[end_index];
            ev.classification = series.v_opp[end_index] - params.v_ref_pu > 0.0
                                    ? RunawayKind::TapLimitOvervoltage
                                    : RunawayKind::TapLimitUndervoltage;
            events.push_back(ev);
        }
        run_len = 0;
    };
    for (std::size_t k = 0; k < n; ++k) {
        bool at_limit = (series.tap[k] == kTapMin || series.tap[k] == kTapMax) && violating(k);
        if (at_limit) {
            if (run_len == 0) run_start = k;
            ++run_len;
        } else if (run_len > 0) {
            close_run(k - 1);
        }
    }
    if (run_len > 0) close_run(n - 1);

    // Taps that visibly fail to move the regulated voltage. A command at
    // step k takes effect at k+1, so its effect is v_reg[k+1] - v_reg[k].
    const double min_effect = 0.2 * params.step_size_pu;
    std::vector<std::size_t> cmds;
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (series.command[k]) cmds.push_back(k);
    auto ineffective = [&](std::size_t k) {
        return std::abs(series.v_reg[k + 1] - series.v_reg[k]) < min_effect && violating(k) &&
               violating(k + 1);
    };
    std::size_t i = 0;
    while (i < cmds.size()) {
        if (!ineffective(cmds[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < cmds.size() && ineffective(cmds[j])) ++j;
        if (j - i >= 3) {
            RunawayEvent ev;
            ev.svr = std::string(svr_id);
            ev.start_s = static_cast<double>(cmds[i]) * params.dt_s;
            ev.end_s = static_cast<double>(cmds[j - 1] + 1) * params.dt_s;
            ev.terminal_regulated = static_cast<Terminal>(series.side[cmds[j - 1]]);
            ev.final_tap = series.tap[cmds[j - 1] + 1];
            ev.classification = RunawayKind::IneffectiveRegulation;
            events.push_back(ev);
        }
        i = j;
    }

    return events;
}

}  // namespace svrqsts
