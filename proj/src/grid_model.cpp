#include "svrqsts/grid_model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace svrqsts {

double tap_ratio(int tap, double step_size_pu) {
    if (tap < kTapMin || tap > kTapMax) {
        std::ostringstream os;
        os << "tap " << tap << " outside [" << kTapMin << ", " << kTapMax << "]";
        throw std::out_of_range(os.str());
    }
    return 1.0 + tap * step_size_pu;
}

Complex to_per_unit(Complex z_ohm, double v_base_kv, double s_base_mva) {
    if (v_base_kv <= 0.0 || s_base_mva <= 0.0) {
        throw std::invalid_argument("per-unit bases must be positive");
    }
    return z_ohm * s_base_mva / (v_base_kv * v_base_kv);
}

int Network::bus_index(const std::string& id) const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

const Bus& Network::bus_at(const std::string& id) const {
    int i = bus_index(id);
    if (i < 0) throw ConfigError("unknown bus '" + id + "'");
    return buses[static_cast<std::size_t>(i)];
}

const SvrDevice* Network::find_svr(const std::string& id) const {
    for (const auto& s : svrs)
        if (s.id == id) return &s;
    return nullptr;
}

const SwitchDevice* Network::find_switch(const std::string& id) const {
    for (const auto& s : switches)
        if (s.id == id) return &s;
    return nullptr;
}

double Network::voltage_base_kv() const {
    if (buses.empty()) throw ConfigError("network has no buses");
    return buses.front().nominal_kv;
}

void Network::validate() const {
    if (buses.empty()) throw ConfigError("network has no buses");
    if (base_mva <= 0.0) throw ConfigError("base_mva must be positive");

    std::set<std::string> bus_ids;
    for (const auto& b : buses) {
        if (b.nominal_kv <= 0.0) throw ConfigError("bus '" + b.id + "': nominal_kv must be positive");
        if (!bus_ids.insert(b.id).second) throw ConfigError("duplicate bus id '" + b.id + "'");
    }

    std::set<std::string> element_ids;
    auto check_element_id = [&element_ids](const std::string& id, const char* what) {
        if (id.empty()) throw ConfigError(std::string(what) + " with empty id");
        if (!element_ids.insert(id).second) throw ConfigError("duplicate element id '" + id + "'");
    };
    auto check_bus_ref = [&bus_ids](const std::string& id, const std::string& owner) {
        if (!bus_ids.count(id)) throw ConfigError(owner + " references unknown bus '" + id + "'");
    };

    for (const auto& l : lines) {
        check_element_id(l.id, "line");
        check_bus_ref(l.from, "line '" + l.id + "'");
        check_bus_ref(l.to, "line '" + l.id + "'");
        if (l.from == l.to) throw ConfigError("line '" + l.id + "' connects a bus to itself");
        if (l.r_ohm < 0.0) throw ConfigError("line '" + l.id + "': negative resistance");
    }
    for (const auto& s : switches) {
        check_element_id(s.id, "switch");
        check_bus_ref(s.from, "switch '" + s.id + "'");
        check_bus_ref(s.to, "switch '" + s.id + "'");
        if (s.from == s.to) throw ConfigError("switch '" + s.id + "' connects a bus to itself");
    }
    for (const auto& s : sources) {
        check_bus_ref(s.bus, "source");
        if (std::abs(s.z1_ohm) <= 0.0) throw ConfigError("source at '" + s.bus + "': |z1| must be positive");
        if (s.v_setpoint_pu <= 0.0) throw ConfigError("source at '" + s.bus + "': setpoint must be positive");
    }
    for (const auto& l : loads) {
        check_bus_ref(l.bus, "load");
        if (l.power_factor <= 0.0 || l.power_factor > 1.0)
            throw ConfigError("load at '" + l.bus + "': power factor outside (0, 1]");
        if (!profiles.count(l.profile))
            throw ConfigError("load at '" + l.bus + "' references unknown profile '" + l.profile + "'");
    }
    for (const auto& g : generators) {
        check_bus_ref(g.bus, "generator");
        if (g.rating_mva <= 0.0) throw ConfigError("generator at '" + g.bus + "': rating must be positive");
        g.export_schedule.curve.validate("generator export schedule");
        for (const auto& [t, p] : g.export_schedule.curve.points) {
            (void)t;
            if (std::abs(g.p_self_mw + p) > g.rating_mva + 1e-9)
                throw ConfigError("generator at '" + g.bus + "': schedule exceeds rating");
        }
    }
    for (const auto& s : svrs) {
        check_element_id(s.id, "svr");
        check_bus_ref(s.source_bus, "svr '" + s.id + "'");
        check_bus_ref(s.load_bus, "svr '" + s.id + "'");
        if (s.source_bus == s.load_bus) throw ConfigError("svr '" + s.id + "' connects a bus to itself");
        if (s.tap < kTapMin || s.tap > kTapMax) throw ConfigError("svr '" + s.id + "': tap out of range");
        if (s.step_size_pu <= 0.0) throw ConfigError("svr '" + s.id + "': step size must be positive");
        const auto& c = s.controller;
        if (c.deadband_pu <= 0.0) throw ConfigError("svr '" + s.id + "': deadband must be positive");
        if (c.hysteresis_pu < 0.0 || c.hysteresis_pu >= c.deadband_pu / 2.0)
            throw ConfigError("svr '" + s.id + "': hysteresis outside [0, D/2)");
        if (!(c.t1_s >= c.t2_s && c.t2_s > 0.0))
            throw ConfigError("svr '" + s.id + "': delays must satisfy t1 >= t2 > 0");
    }
    for (const auto& [name, p] : profiles) {
        p.validate(("profile '" + name + "'").c_str());
    }
}

SwitchStates normal_switch_states(const Network& net) {
    SwitchStates out;
    for (const auto& s : net.switches) out[s.id] = s.normal_state;
    return out;
}

namespace detail {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ContractedGraph contract(const Network& net, const SwitchStates& states) {
    for (const auto& [id, st] : states) {
        (void)st;
        if (!net.find_switch(id)) throw ConfigError("switch state for unknown device '" + id + "'");
    }

    UnionFind uf(net.buses.size());
    for (const auto& sw : net.switches) {
        auto it = states.find(sw.id);
        SwitchState st = it != states.end() ? it->second : sw.normal_state;
        if (st == SwitchState::Closed) {
            uf.unite(net.bus_index(sw.from), net.bus_index(sw.to));
        }
    }

    ContractedGraph g;
    g.node_of_bus.assign(net.buses.size(), -1);
    std::map<int, int> root_to_node;
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        int root = uf.find(static_cast<int>(i));
        auto [it, inserted] = root_to_node.emplace(root, g.node_count);
        if (inserted) ++g.node_count;
        g.node_of_bus[i] = it->second;
    }

    for (std::size_t i = 0; i < net.lines.size(); ++i) {
        const auto& l = net.lines[i];
        g.edges.push_back({g.node_of_bus[static_cast<std::size_t>(net.bus_index(l.from))],
                           g.node_of_bus[static_cast<std::size_t>(net.bus_index(l.to))], false,
                           static_cast<int>(i)});
    }
    for (std::size_t i = 0; i < net.svrs.size(); ++i) {
        const auto& s = net.svrs[i];
        g.edges.push_back({g.node_of_bus[static_cast<std::size_t>(net.bus_index(s.source_bus))],
                           g.node_of_bus[static_cast<std::size_t>(net.bus_index(s.load_bus))], true,
                           static_cast<int>(i)});
    }

    // Island labeling over contracted nodes.
    UnionFind nf(static_cast<std::size_t>(g.node_count));
    for (const auto& e : g.edges) nf.unite(e.a, e.b);
    g.island_of_node.assign(static_cast<std::size_t>(g.node_count), -1);
    std::map<int, int> root_to_island;
    for (int n = 0; n < g.node_count; ++n) {
        int root = nf.find(n);
        auto [it, inserted] = root_to_island.emplace(root, g.island_count);
        if (inserted) ++g.island_count;
        g.island_of_node[static_cast<std::size_t>(n)] = it->second;
    }
    return g;
}

}  // namespace detail

TopologyReport validate_topology(const Network& net, const SwitchStates& states) {
    auto g = detail::contract(net, states);

    std::vector<int> node_count_per_island(static_cast<std::size_t>(g.island_count), 0);
    for (int n = 0; n < g.node_count; ++n)
        ++node_count_per_island[static_cast<std::size_t>(g.island_of_node[static_cast<std::size_t>(n)])];

    // A connected component is a tree iff |edges| = |nodes| - 1; self-loops
    // (both ends contracted together) and parallel paths both break it.
    std::vector<int> edge_count_per_island(static_cast<std::size_t>(g.island_count), 0);
    for (const auto& e : g.edges)
        ++edge_count_per_island[static_cast<std::size_t>(g.island_of_node[static_cast<std::size_t>(e.a)])];

    TopologyReport report;
    report.islands.resize(static_cast<std::size_t>(g.island_count));
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        int isl = g.island_of_node[static_cast<std::size_t>(g.node_of_bus[i])];
        report.islands[static_cast<std::size_t>(isl)].buses.push_back(net.buses[i].id);
    }
    for (const auto& s : net.sources) {
        int isl = g.island_of_node[static_cast<std::size_t>(
            g.node_of_bus[static_cast<std::size_t>(net.bus_index(s.bus))])];
        report.islands[static_cast<std::size_t>(isl)].source_buses.push_back(s.bus);
    }

    for (std::size_t i = 0; i < report.islands.size(); ++i) {
        auto& isl = report.islands[i];
        std::sort(isl.buses.begin(), isl.buses.end());
        std::sort(isl.source_buses.begin(), isl.source_buses.end());
        // Tree property: connected with |edges| = |nodes| - 1, self-loops never allowed.
        isl.radial = edge_count_per_island[i] == node_count_per_island[i] - 1;
        isl.energized = isl.source_buses.size() == 1;

        if (!isl.source_buses.empty()) {
            if (isl.source_buses.size() > 1) {
                throw MultiSourceError("island with buses {" + isl.buses.front() + ", ...} has " +
                                       std::to_string(isl.source_buses.size()) + " sources");
            }
            if (!isl.radial) {
                throw LoopError("energized island containing bus '" + isl.buses.front() +
                                "' is meshed");
            }
        }
        if (!isl.energized) {
            for (const auto& b : isl.buses) report.deenergized_buses.push_back(b);
        }
    }
    std::sort(report.deenergized_buses.begin(), report.deenergized_buses.end());

    // Deterministic island order: by first bus id.
    std::sort(report.islands.begin(), report.islands.end(),
              [](const Island& a, const Island& b) { return a.buses.front() < b.buses.front(); });
    return report;
}

}  // namespace svrqsts
