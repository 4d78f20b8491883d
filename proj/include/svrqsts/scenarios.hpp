#pragma once

#include <string>
#include <vector>

#include "svrqsts/grid_model.hpp"
#include "svrqsts/qsts_engine.hpp"

namespace svrqsts {

/// Published parameters of the PR-09 / PR-11 twin-feeder case plus the
/// surrogate knobs (segment impedances are representative, not survey data).
struct CaseParams {
    Complex thevenin_z1_ohm{1.369, 17.633};
    Complex thevenin_z0_ohm{0.002, 12.13};
    double base_kv = 34.5;
    double base_mva = 10.0;
    double source_v_setpoint_pu = 1.03;

    double pr09_min_mw = 2.13;   // feeder demand range, industry excluded
    double pr09_max_mw = 2.55;
    double pr11_min_mw = 1.22;
    double pr11_max_mw = 4.03;
    double load_power_factor = 0.92;

    bool with_dg = true;              // industry + DG interconnect together
    double industry_p_mw = 4.3;
    double industry_q_mvar = 1.83;
    double dg_rating_mva = 12.5;
    double dg_contract_export_mw = 3.0;

    double t1_ps_side_s = 30.0;       // cascade delays per feeder
    double t1_increment_s = 15.0;
    double t2_s = 5.0;
    double deadband_pu = 0.01;
    double hysteresis_pu = 0.0;
    double pr09_svr_v_ref = 0.97;     // both PR-09 SVRs
    double svr23_v_ref = 0.975;
    double svr1516_v_ref = 1.0;
    ControlMode mode = ControlMode::Cogeneration;

    /// Surrogate conductor constants, ohm per km.
    double r_336 = 0.20, x_336 = 0.37;
    double r_4_0 = 0.30, x_4_0 = 0.44;
    double r_1_0 = 0.55, x_1_0 = 0.47;
    double r_2awg = 0.88, x_2awg = 0.49;
};

enum class PresetName { Independent, FullToPR09, FullToPR11, PartialTransfer };

PresetName preset_from_name(const std::string& name);
const char* preset_name(PresetName p);

/// Switch states for the four operational scenarios
/// (CB1, CB2, SW1, SW2): Independent 1,1,1,0; FullToPR09 1,0,1,1;
/// FullToPR11 0,1,1,1; PartialTransfer 1,1,0,1.
SwitchStates preset(PresetName name);

/// Two radial chains from a common substation bus. PR-09 carries the two
/// cascaded SVRs, the SW1 sectionalizer and the far section with bus 1050
/// and the IPP bus; PR-11 carries SVR 2/3 and SVR 15/16 with the SW2 tie
/// landing between them.
Network build_case_feeders(const CaseParams& params = {});

/// An Open event for one of CB1, CB2, SW1, SW2.
ScenarioEvent trip_event(const std::string& device, double t_s);

/// Switching actions that move `current` to the target preset at t_s,
/// applied atomically in one step (a breaker trip with its load-transfer
/// closures).
std::vector<ScenarioEvent> reconfiguration_events(PresetName target,
                                                  double t_s,
                                                  const SwitchStates& current);

/// Demand downstream of SVR 2/3 under PartialTransfer, MW, net of the
/// industry's self-supplied block: the binding curve for keeping flow
/// through SVR 2/3 direct.
PiecewiseLinear partial_transfer_forecast(const CaseParams& params = {});

}  // namespace svrqsts
