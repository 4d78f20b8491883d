#pragma once

#include <map>
#include <string>
#include <vector>

#include "svrqsts/grid_model.hpp"

namespace svrqsts {

enum class Direction { Direct, Reverse };

/// Dead zone for flow direction classification at an SVR, in MW.
inline constexpr double kFlowDeadZoneMw = 0.001;

struct SolveOptions {
    double tol = 1e-6;   // max complex power mismatch, pu
    int max_iter = 100;
};

/// Per-bus complex powers sampled for one time step, in MW/MVar,
/// aligned with Network::buses.
struct InjectionSet {
    std::vector<Complex> load_mva;
    std::vector<Complex> gen_mva;
};

struct PowerFlowSolution {
    std::vector<Complex> v;            // per-unit, aligned with Network::buses; 0 when de-energized
    bool converged = false;
    int iterations = 0;
    double mismatch_pu = 0.0;
    /// Complex power at the source-side terminal of each branch, MW/MVar,
    /// positive from source_bus/from toward load_bus/to. Keys are line and
    /// SVR ids plus one "SRC:<bus>" entry per grid source.
    std::map<std::string, Complex> branch_s_mva;

    Complex v_at(const Network& net, const std::string& bus) const;
};

/// Backward/forward sweep over every energized radial island. SVR branches
/// are ideal: V_load = ratio * V_source, I_source = ratio * I_load. The
/// slack is the source setpoint behind its Thevenin impedance, realized as
/// an internal bus plus one series branch. De-energized buses get 0 V.
/// Throws topology errors from validate-equivalent checks; a non-converged
/// solve returns the best iterate with converged = false.
PowerFlowSolution solve_radial(const Network& net,
                               const SwitchStates& states,
                               const std::map<std::string, int>& taps,
                               const InjectionSet& injections,
                               const SolveOptions& opt = {});

/// Signed MW at the branch source-side terminal. Throws std::out_of_range
/// for unknown branch ids.
double branch_active_power(const PowerFlowSolution& sol, const std::string& branch_id);

/// Reverse iff active power < -dead zone; ties and small flows are Direct.
Direction flow_direction(double p_mw, double dead_zone_mw = kFlowDeadZoneMw);

Direction flow_direction_at_svr(const PowerFlowSolution& sol, const SvrDevice& svr);

/// Builds the per-bus injection set from load profiles and generator
/// schedules sampled at profile time t_profile_s.
InjectionSet sample_injections(const Network& net, double t_profile_s);

}  // namespace svrqsts
