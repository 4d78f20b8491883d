#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svrqsts/errors.hpp"
#include "svrqsts/profiles.hpp"

namespace svrqsts {

using Complex = std::complex<double>;

inline constexpr int kTapMin = -16;
inline constexpr int kTapMax = 16;
inline constexpr double kTapStepPu = 0.00625;

/// Ideal tap ratio: V_load_terminal = ratio * V_source_terminal.
/// Throws std::out_of_range for taps outside [-16, +16].
double tap_ratio(int tap, double step_size_pu = kTapStepPu);

/// Impedance base conversion, z_pu = z_ohm * s_base / v_base^2.
/// Throws std::invalid_argument for non-positive bases.
Complex to_per_unit(Complex z_ohm, double v_base_kv, double s_base_mva);

struct Bus {
    std::string id;
    double nominal_kv = 34.5;
};

struct Line {
    std::string id;
    std::string from;
    std::string to;
    double r_ohm = 0.0;
    double x_ohm = 0.0;
    double length_km = 0.0;  // informational
};

enum class SwitchState { Open, Closed };
enum class SwitchKind { Breaker, Switch };

/// Zero impedance when closed; closed switches merge their end buses.
struct SwitchDevice {
    std::string id;
    std::string from;
    std::string to;
    SwitchState normal_state = SwitchState::Closed;
    SwitchKind kind = SwitchKind::Switch;
};

/// Slack of its island: ideal source v_setpoint behind z1.
struct GridSource {
    std::string bus;
    double v_setpoint_pu = 1.0;
    Complex z1_ohm;
    Complex z0_ohm;  // recorded, unused in balanced studies
};

struct LoadPoint {
    std::string bus;
    std::string profile;              // name in Network::profiles
    double scale = 1.0;               // share of the profile MW
    double power_factor = 0.92;       // lagging, derives Q from P
    std::optional<double> q_mvar;     // explicit constant Q overrides the pf
};

/// Constant-PQ machine. Gross output p_self_mw + export(t) at q_mvar.
struct Generator {
    std::string bus;
    double q_mvar = 0.0;
    double rating_mva = 0.0;
    double p_self_mw = 0.0;           // locally consumed share (collocated plant)
    DispatchSchedule export_schedule; // net export into the grid, MW
    bool dispatchable = true;         // target of dispatch overrides
};

enum class ControlMode { Bidirectional, Cogeneration };

struct SvrControllerParams {
    double v_ref_pu = 1.0;
    double deadband_pu = 0.01;   // total band width D
    double hysteresis_pu = 0.0;  // episode release shrink, 0 <= eps < D/2
    double t1_s = 30.0;          // first tap delay
    double t2_s = 5.0;           // subsequent tap delay
    ControlMode mode = ControlMode::Bidirectional;
};

struct SvrDevice {
    std::string id;
    std::string source_bus;  // nominal PS side
    std::string load_bus;
    int tap = 0;
    double step_size_pu = kTapStepPu;
    SvrControllerParams controller;
};

/// Immutable grid description. Mutable operating state (switch states,
/// taps) lives with each simulation, never here.
struct Network {
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<SwitchDevice> switches;
    std::vector<GridSource> sources;
    std::vector<LoadPoint> loads;
    std::vector<Generator> generators;
    std::vector<SvrDevice> svrs;
    std::map<std::string, LoadProfile> profiles;
    double base_mva = 10.0;

    /// Checks id uniqueness, reference integrity and field invariants.
    /// Throws ConfigError on the first violation found.
    void validate() const;

    int bus_index(const std::string& id) const;  // -1 when unknown
    const Bus& bus_at(const std::string& id) const;
    const SvrDevice* find_svr(const std::string& id) const;
    const SwitchDevice* find_switch(const std::string& id) const;
    double voltage_base_kv() const;  // from the first bus
};

using SwitchStates = std::map<std::string, SwitchState>;

/// Normal-state map of every switch in the network.
SwitchStates normal_switch_states(const Network& net);

struct Island {
    std::vector<std::string> buses;        // original bus ids, sorted
    std::vector<std::string> source_buses;
    bool energized = false;                // exactly one source
    bool radial = false;                   // no cycles among closed elements
};

struct TopologyReport {
    std::vector<Island> islands;
    std::vector<std::string> deenergized_buses;  // sorted
};

/// Pure function of (net, switch_states). Closed switches contract their
/// end buses into one node; lines and SVRs are the graph edges. Throws
/// LoopError if a source-fed island contains a cycle, MultiSourceError
/// if it contains more than one source, ConfigError for unknown switch ids.
TopologyReport validate_topology(const Network& net, const SwitchStates& states);

namespace detail {

/// Bus contraction under a switch-state assignment plus the tree structure
/// used by both the topology check and the sweep solver.
struct ContractedGraph {
    std::vector<int> node_of_bus;          // bus index -> contracted node
    int node_count = 0;
    struct Edge {
        int a = -1, b = -1;                // contracted endpoints
        bool is_svr = false;
        int element_index = -1;            // into net.lines or net.svrs
    };
    std::vector<Edge> edges;
    std::vector<int> island_of_node;       // node -> island index
    int island_count = 0;
};

ContractedGraph contract(const Network& net, const SwitchStates& states);

}  // namespace detail

}  // namespace svrqsts
