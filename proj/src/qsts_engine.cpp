#include "svrqsts/qsts_engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace svrqsts {

namespace {

double round6(double v) { return std::round(v * 1e6) / 1e6; }

// SVR evaluation order, primary-substation side first, plus an energized
// flag per device. Recomputed after every switching event.
struct SvrOrdering {
    std::vector<std::size_t> order;   // indices into net.svrs
    std::vector<bool> energized;      // per net.svrs index
};

SvrOrdering svr_ordering(const Network& net, const SwitchStates& states) {
    auto g = detail::contract(net, states);

    std::vector<std::vector<std::pair<int, std::size_t>>> adj(
        static_cast<std::size_t>(g.node_count));
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        adj[static_cast<std::size_t>(g.edges[e].a)].push_back({g.edges[e].b, e});
        adj[static_cast<std::size_t>(g.edges[e].b)].push_back({g.edges[e].a, e});
    }

    SvrOrdering out;
    out.energized.assign(net.svrs.size(), false);
    std::vector<bool> visited(static_cast<std::size_t>(g.node_count), false);
    std::vector<bool> edge_seen(g.edges.size(), false);

    for (const auto& src : net.sources) {
        int start = g.node_of_bus[static_cast<std::size_t>(net.bus_index(src.bus))];
        if (visited[static_cast<std::size_t>(start)]) continue;
        std::deque<int> queue{start};
        visited[static_cast<std::size_t>(start)] = true;
        while (!queue.empty()) {
            int node = queue.front();
            queue.pop_front();
            for (const auto& [other, e] : adj[static_cast<std::size_t>(node)]) {
                if (edge_seen[e]) continue;
                edge_seen[e] = true;
                if (g.edges[e].is_svr) {
                    auto idx = static_cast<std::size_t>(g.edges[e].element_index);
                    if (!out.energized[idx]) {
                        out.energized[idx] = true;
                        out.order.push_back(idx);
                    }
                }
                if (!visited[static_cast<std::size_t>(other)]) {
                    visited[static_cast<std::size_t>(other)] = true;
                    queue.push_back(other);
                }
            }
        }
    }
    return out;
}

}  // namespace

const RecordedBus* TimeSeries::find_bus(const std::string& id) const {
    for (const auto& b : buses)
        if (b.id == id) return &b;
    return nullptr;
}

const RecordedBranch* TimeSeries::find_branch(const std::string& id) const {
    for (const auto& b : branches)
        if (b.id == id) return &b;
    return nullptr;
}

const RecordedSvr* TimeSeries::find_svr(const std::string& id) const {
    for (const auto& s : svrs)
        if (s.id == id) return &s;
    return nullptr;
}

RunResult run(const Network& net,
              const SwitchStates& initial_states,
              const std::vector<ScenarioEvent>& events,
              const SimulationConfig& cfg) {
    net.validate();
    if (cfg.dt_s <= 0.0) throw ConfigError("dt must be positive");
    double steps_exact = cfg.duration_s / cfg.dt_s;
    auto step_count = static_cast<long>(std::llround(steps_exact));
    if (std::abs(steps_exact - static_cast<double>(step_count)) > 1e-9)
        throw ConfigError("duration must be a multiple of dt");

    for (const auto& ev : events) {
        if (!net.find_switch(ev.device))
            throw ConfigError("event references unknown device '" + ev.device + "'");
        if (ev.time_s < 0.0 || ev.time_s > cfg.duration_s)
            throw ConfigError("event at t=" + std::to_string(ev.time_s) + " outside the horizon");
    }

    SwitchStates states = initial_states;
    validate_topology(net, states);

    std::vector<ScenarioEvent> pending = events;
    std::stable_sort(pending.begin(), pending.end(),
                     [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.time_s < b.time_s; });
    std::size_t next_event = 0;

    std::map<std::string, int> taps;
    std::map<std::string, SvrControllerState> ctrl_state;
    for (const auto& s : net.svrs) {
        taps[s.id] = cfg.svrs_enabled ? s.tap : 0;
        ctrl_state[s.id] = SvrControllerState{};
    }

    SvrOrdering ordering = svr_ordering(net, states);

    // Recording set: user selections plus everything summaries need.
    std::set<std::string> bus_set(cfg.record.buses.begin(), cfg.record.buses.end());
    std::set<std::string> branch_set(cfg.record.branches.begin(), cfg.record.branches.end());
    for (const auto& id : cfg.record.buses) {
        if (net.bus_index(id) < 0) throw ConfigError("recorded bus '" + id + "' not in network");
    }
    for (const auto& s : net.svrs) {
        bus_set.insert(s.source_bus);
        bus_set.insert(s.load_bus);
        branch_set.insert(s.id);
    }
    for (const auto& s : net.sources) branch_set.insert("SRC:" + s.bus);
    if (cfg.record.buses.empty()) {
        for (const auto& b : net.buses) bus_set.insert(b.id);
    }

    RunResult result;
    TimeSeries& ts = result.series;
    ts.dt_s = cfg.dt_s;
    const auto rows = static_cast<std::size_t>(step_count + 1);
    ts.time_s.reserve(rows);
    for (const auto& b : net.buses) {
        if (bus_set.count(b.id)) ts.buses.push_back({b.id, {}});
    }
    for (const auto& s : net.svrs) {
        if (branch_set.count(s.id)) ts.branches.push_back({s.id, {}, {}, {}});
    }
    for (const auto& l : net.lines) {
        if (branch_set.count(l.id)) ts.branches.push_back({l.id, {}, {}, {}});
    }
    for (const auto& s : net.sources) {
        std::string id = "SRC:" + s.bus;
        if (branch_set.count(id)) ts.branches.push_back({id, {}, {}, {}});
    }
    for (const auto& s : net.svrs) ts.svrs.push_back({s.id, {}, {}});
    for (auto& col : ts.buses) col.vmag_pu.reserve(rows);

    for (long step = 0; step <= step_count; ++step) {
        double t = static_cast<double>(step) * cfg.dt_s;

        // Events due now apply atomically, then one re-validate.
        bool switched = false;
        while (next_event < pending.size() && pending[next_event].time_s <= t) {
            states[pending[next_event].device] = pending[next_event].new_state;
            switched = true;
            ++next_event;
        }
        if (switched) {
            validate_topology(net, states);
            ordering = svr_ordering(net, states);
        }

        InjectionSet inj = sample_injections(net, cfg.start_offset_s + t);
        PowerFlowSolution sol = solve_radial(net, states, taps, inj, cfg.solve);
        if (!sol.converged) {
            throw NonConvergenceError("power flow did not converge at step " +
                                          std::to_string(step) + " (t=" + std::to_string(t) + " s)",
                                      step, sol.mismatch_pu);
        }

        std::map<std::string, int> deltas;
        std::map<std::string, bool> issued;
        if (cfg.svrs_enabled) {
            for (std::size_t idx : ordering.order) {
                const auto& svr = net.svrs[idx];
                Direction dir = flow_direction_at_svr(sol, svr);
                Terminal side = regulation_side(svr.controller.mode, dir);
                const std::string& reg_bus =
                    side == Terminal::Source ? svr.source_bus : svr.load_bus;
                double v_reg = std::abs(sol.v_at(net, reg_bus));
                auto cmd = controller_step(ctrl_state[svr.id], svr.controller, svr.id, v_reg, side,
                                           taps[svr.id], cfg.dt_s, t);
                if (cmd) {
                    deltas[svr.id] = cmd->delta;
                    issued[svr.id] = true;
                }
            }
        }

        // Record with the taps used by this step's solve.
        ts.time_s.push_back(t);
        for (auto& col : ts.buses) {
            col.vmag_pu.push_back(round6(std::abs(sol.v_at(net, col.id))));
        }
        for (auto& col : ts.branches) {
            Complex s = sol.branch_s_mva.at(col.id);
            col.p_mw.push_back(round6(s.real()));
            col.q_mvar.push_back(round6(s.imag()));
            col.direction.push_back(static_cast<std::uint8_t>(flow_direction(s.real())));
        }
        for (auto& col : ts.svrs) {
            col.tap.push_back(taps[col.id]);
            col.event.push_back(issued.count(col.id) ? 1 : 0);
        }

        // Tap deltas become visible at the next step.
        for (const auto& [id, d] : deltas) taps[id] += d;
    }

    RunMeta& meta = result.meta;
    meta.dt_s = cfg.dt_s;
    meta.duration_s = cfg.duration_s;
    meta.band_low_pu = cfg.band_low_pu;
    meta.band_high_pu = cfg.band_high_pu;
    meta.runaway_window_s = cfg.runaway_window_s;
    meta.svrs_enabled = cfg.svrs_enabled;
    for (const auto& s : net.svrs) {
        meta.svrs.push_back({s.id, s.source_bus, s.load_bus, s.controller.v_ref_pu,
                             s.controller.deadband_pu, s.controller.hysteresis_pu, s.step_size_pu,
                             s.controller.mode});
    }

    result.summary = summarize(ts, meta);
    return result;
}

SummaryReport summarize(const TimeSeries& ts, const RunMeta& meta) {
    SummaryReport rep;
    rep.steps = static_cast<long>(ts.steps());
    rep.dt_s = meta.dt_s;
    rep.band_low_pu = meta.band_low_pu;
    rep.band_high_pu = meta.band_high_pu;

    for (const auto& svr : ts.svrs) {
        long ops = 0;
        for (auto e : svr.event) ops += e;
        rep.svr_tap_ops[svr.id] = ops;
    }

    for (const auto& bus : ts.buses) {
        if (bus.vmag_pu.empty()) continue;
        BusStats st;
        st.vmin_pu = *std::min_element(bus.vmag_pu.begin(), bus.vmag_pu.end());
        st.vmax_pu = *std::max_element(bus.vmag_pu.begin(), bus.vmag_pu.end());
        long outside = 0;
        for (double v : bus.vmag_pu) {
            if (v < meta.band_low_pu || v > meta.band_high_pu) ++outside;
        }
        st.minutes_outside = static_cast<double>(outside) * meta.dt_s / 60.0;
        rep.bus_stats[bus.id] = st;
    }

    for (const auto& br : ts.branches) {
        if (br.id.rfind("SRC:", 0) != 0) continue;
        double acc = 0.0;
        for (double p : br.p_mw) acc += p;
        rep.source_energy_mwh += acc * meta.dt_s / 3600.0;
    }

    // Runaway detection over the recorded series: regulated side per step
    // comes from the flow direction and the control mode.
    for (const auto& sm : meta.svrs) {
        const auto* tap_col = ts.find_svr(sm.id);
        const auto* branch = ts.find_branch(sm.id);
        const auto* src_bus = ts.find_bus(sm.source_bus);
        const auto* load_bus = ts.find_bus(sm.load_bus);
        if (!tap_col || !branch || !src_bus || !load_bus)
            throw IoError("series for SVR '" + sm.id + "' incomplete; cannot summarize");

        RunawaySeries series;
        const std::size_t n = ts.steps();
        series.tap = tap_col->tap;
        series.command = tap_col->event;
        series.v_reg.resize(n);
        series.v_opp.resize(n);
        series.side.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            Terminal side =
                regulation_side(sm.mode, static_cast<Direction>(branch->direction[k]));
            series.side[k] = static_cast<std::uint8_t>(side);
            bool reg_is_source = side == Terminal::Source;
            series.v_reg[k] = reg_is_source ? src_bus->vmag_pu[k] : load_bus->vmag_pu[k];
            series.v_opp[k] = reg_is_source ? load_bus->vmag_pu[k] : src_bus->vmag_pu[k];
        }

        RunawayParams params;
        params.v_ref_pu = sm.v_ref_pu;
        params.deadband_pu = sm.deadband_pu;
        params.step_size_pu = sm.step_size_pu;
        params.dt_s = meta.dt_s;
        params.window_s = meta.runaway_window_s;
        auto events = detect_runaway(sm.id, series, params);
        rep.runaway_events.insert(rep.runaway_events.end(), events.begin(), events.end());
    }

    return rep;
}

}  // namespace svrqsts
