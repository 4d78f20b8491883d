#pragma once

#include <map>
#include <string>

#include "svrqsts/profiles.hpp"
#include "svrqsts/qsts_engine.hpp"

namespace svrqsts {

struct PredispatchParams {
    double contract_avg_mw = 3.0;
    double margin = 0.9;                // export may not exceed margin * demand
    double ramp_limit_mw_per_min = 0.5;
    double p_min_mw = 0.0;
    double p_max_mw = 12.5;
    double avg_tolerance = 1e-3;        // relative, on the daily average
};

/// Ramp-limited daily export schedule tracking the demand forecast.
/// Shape: clamp(beta * L(t)) bisected on beta to hit the contract average,
/// ramp-rate clipped, then one corrective bisection on a uniform offset.
/// Output is cyclic (p(0) = p(86400)), never exceeds margin * L(t), and
/// honors the ramp limit between all breakpoints. Throws InfeasibleError
/// carrying the best achievable average when the contract cannot be met.
DispatchSchedule compute_schedule(const PiecewiseLinear& forecast,
                                  const PredispatchParams& params);

/// Exact piecewise-linear (trapezoidal) time average over 24 h.
double average_power(const DispatchSchedule& schedule);

struct SvrFlowStats {
    long reverse_steps = 0;
    double min_p_mw = 0.0;  // direct-flow margin over the day
};

struct DirectFlowReport {
    std::map<std::string, SvrFlowStats> svr;
    bool all_direct = false;
};

/// Runs a full QSTS with the schedule applied to the dispatchable DG and
/// reports, per SVR, the count of reverse-direction steps plus the minimum
/// active-power margin seen over the day.
DirectFlowReport verify_direct_flow(const DispatchSchedule& schedule,
                                    const Network& net,
                                    const SwitchStates& states,
                                    const SimulationConfig& cfg);

/// Copy of net with the export schedule installed on dispatchable
/// generators (gross output stays p_self + export).
Network with_dispatch(const Network& net, const DispatchSchedule& schedule);

}  // namespace svrqsts
