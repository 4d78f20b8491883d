#include "svrqsts/powerflow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace svrqsts {

namespace {

// Solver-internal tree over contracted nodes plus one internal node per
// grid source (the setpoint bus behind z1).
struct SweepModel {
    struct Branch {
        int parent = -1;
        int child = -1;
        Complex z_pu;          // series impedance, lines and source branches
        bool is_svr = false;
        double gain = 1.0;     // V_child = gain * V_parent for SVR branches
        int element_index = -1;  // net.lines / net.svrs index, -1 for source
        bool forward_orientation = true;  // parent side == from/source side
        std::string id;
    };

    int node_count = 0;                  // contracted nodes + internal source nodes
    std::vector<int> node_of_bus;        // network bus -> node
    std::vector<int> order;              // nodes, root first (BFS)
    std::vector<int> parent_branch;      // node -> branch index, -1 at roots
    std::vector<Branch> branches;
    std::vector<Complex> s_spec_pu;      // load - generation per node
    std::vector<Complex> v_init;         // ratio-aware flat start
    std::vector<bool> energized;
    std::vector<double> root_voltage;    // per node, setpoint of its island root
};

SweepModel build_sweep_model(const Network& net,
                             const SwitchStates& states,
                             const std::map<std::string, int>& taps,
                             const InjectionSet& inj) {
    auto g = detail::contract(net, states);

    SweepModel m;
    m.node_of_bus = g.node_of_bus;
    m.node_count = g.node_count;

    // Adjacency over contracted nodes.
    struct Adj {
        int other;
        std::size_t edge;
    };
    std::vector<std::vector<Adj>> adj(static_cast<std::size_t>(g.node_count));
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        adj[static_cast<std::size_t>(g.edges[e].a)].push_back({g.edges[e].b, e});
        adj[static_cast<std::size_t>(g.edges[e].b)].push_back({g.edges[e].a, e});
    }

    double v_base = net.voltage_base_kv();

    // Internal source nodes appended after the contracted ones.
    std::vector<int> source_node(net.sources.size(), -1);
    for (std::size_t s = 0; s < net.sources.size(); ++s) {
        source_node[s] = m.node_count++;
    }

    m.s_spec_pu.assign(static_cast<std::size_t>(m.node_count), Complex{0.0, 0.0});
    m.energized.assign(static_cast<std::size_t>(m.node_count), false);
    m.root_voltage.assign(static_cast<std::size_t>(m.node_count), 0.0);
    m.parent_branch.assign(static_cast<std::size_t>(m.node_count), -1);
    m.v_init.assign(static_cast<std::size_t>(m.node_count), Complex{0.0, 0.0});

    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        Complex s_mva = inj.load_mva[i] - inj.gen_mva[i];
        m.s_spec_pu[static_cast<std::size_t>(g.node_of_bus[i])] += s_mva / net.base_mva;
    }

    // BFS from each source through the contracted graph; every reached
    // island becomes a rooted tree. Multi-source and meshed islands were
    // rejected by topology validation, but guard anyway.
    std::vector<int> visited_by(static_cast<std::size_t>(m.node_count), -1);
    for (std::size_t s = 0; s < net.sources.size(); ++s) {
        const auto& src = net.sources[s];
        int attach = g.node_of_bus[static_cast<std::size_t>(net.bus_index(src.bus))];
        int root = source_node[s];
        if (visited_by[static_cast<std::size_t>(attach)] >= 0) {
            throw MultiSourceError("bus '" + src.bus + "' reachable from two sources");
        }

        m.order.push_back(root);
        visited_by[static_cast<std::size_t>(root)] = static_cast<int>(s);
        m.energized[static_cast<std::size_t>(root)] = true;
        m.root_voltage[static_cast<std::size_t>(root)] = src.v_setpoint_pu;
        m.v_init[static_cast<std::size_t>(root)] = Complex{src.v_setpoint_pu, 0.0};

        SweepModel::Branch src_branch;
        src_branch.parent = root;
        src_branch.child = attach;
        src_branch.z_pu = to_per_unit(src.z1_ohm, v_base, net.base_mva);
        src_branch.id = "SRC:" + src.bus;
        m.branches.push_back(src_branch);
        m.parent_branch[static_cast<std::size_t>(attach)] = static_cast<int>(m.branches.size() - 1);

        std::deque<int> queue;
        queue.push_back(attach);
        visited_by[static_cast<std::size_t>(attach)] = static_cast<int>(s);
        m.energized[static_cast<std::size_t>(attach)] = true;
        m.root_voltage[static_cast<std::size_t>(attach)] = src.v_setpoint_pu;
        m.v_init[static_cast<std::size_t>(attach)] = Complex{src.v_setpoint_pu, 0.0};
        m.order.push_back(attach);

        while (!queue.empty()) {
            int node = queue.front();
            queue.pop_front();
            for (const auto& a : adj[static_cast<std::size_t>(node)]) {
                if (visited_by[static_cast<std::size_t>(a.other)] == static_cast<int>(s)) continue;
                if (visited_by[static_cast<std::size_t>(a.other)] >= 0) {
                    throw MultiSourceError("islands of two sources touch");
                }
                const auto& edge = g.edges[a.edge];

                SweepModel::Branch b;
                b.parent = node;
                b.child = a.other;
                b.element_index = edge.element_index;
                b.is_svr = edge.is_svr;
                if (edge.is_svr) {
                    const auto& svr = net.svrs[static_cast<std::size_t>(edge.element_index)];
                    auto it = taps.find(svr.id);
                    int tap = it != taps.end() ? it->second : svr.tap;
                    double ratio = tap_ratio(tap, svr.step_size_pu);
                    // Feed entering at the load terminal inverts the ratio.
                    b.forward_orientation = edge.a == node;
                    b.gain = b.forward_orientation ? ratio : 1.0 / ratio;
                    b.id = svr.id;
                } else {
                    const auto& line = net.lines[static_cast<std::size_t>(edge.element_index)];
                    b.z_pu = to_per_unit(Complex{line.r_ohm, line.x_ohm}, v_base, net.base_mva);
                    b.forward_orientation = edge.a == node;
                    b.id = line.id;
                }
                m.branches.push_back(b);
                m.parent_branch[static_cast<std::size_t>(a.other)] =
                    static_cast<int>(m.branches.size() - 1);

                visited_by[static_cast<std::size_t>(a.other)] = static_cast<int>(s);
                m.energized[static_cast<std::size_t>(a.other)] = true;
                m.root_voltage[static_cast<std::size_t>(a.other)] = src.v_setpoint_pu;
                double gain = b.is_svr ? b.gain : 1.0;
                m.v_init[static_cast<std::size_t>(a.other)] =
                    m.v_init[static_cast<std::size_t>(node)] * gain;
                m.order.push_back(a.other);
                queue.push_back(a.other);
            }
        }
    }
    return m;
}

}  // namespace

PowerFlowSolution solve_radial(const Network& net,
                               const SwitchStates& states,
                               const std::map<std::string, int>& taps,
                               const InjectionSet& inj,
                               const SolveOptions& opt) {
    if (opt.tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
    if (inj.load_mva.size() != net.buses.size() || inj.gen_mva.size() != net.buses.size())
        throw std::invalid_argument("injection vectors must align with network buses");

    SweepModel m = build_sweep_model(net, states, taps, inj);

    std::vector<Complex> v = m.v_init;
    std::vector<Complex> i_inj(static_cast<std::size_t>(m.node_count));
    std::vector<Complex> i_branch(m.branches.size());  // at the child side

    PowerFlowSolution sol;
    sol.v.assign(net.buses.size(), Complex{0.0, 0.0});

    double mismatch = 0.0;
    int iter = 0;
    bool converged = false;
    while (iter < opt.max_iter) {
        ++iter;

        // Injection currents from the present voltage estimate.
        for (int n : m.order) {
            auto ni = static_cast<std::size_t>(n);
            if (std::abs(v[ni]) < 1e-9) {
                i_inj[ni] = Complex{0.0, 0.0};
            } else {
                i_inj[ni] = std::conj(m.s_spec_pu[ni] / v[ni]);
            }
        }

        // Backward sweep, leaves to root: accumulate branch currents.
        std::vector<Complex> subtree_current(static_cast<std::size_t>(m.node_count), Complex{0.0, 0.0});
        for (auto it = m.order.rbegin(); it != m.order.rend(); ++it) {
            int n = *it;
            auto ni = static_cast<std::size_t>(n);
            int pb = m.parent_branch[ni];
            if (pb < 0) continue;
            const auto& b = m.branches[static_cast<std::size_t>(pb)];
            Complex through = i_inj[ni] + subtree_current[ni];
            i_branch[static_cast<std::size_t>(pb)] = through;
            // Ideal ratio branch scales the current by its voltage gain.
            Complex parent_side = b.is_svr ? through * b.gain : through;
            subtree_current[static_cast<std::size_t>(b.parent)] += parent_side;
        }

        // Forward sweep, root to leaves: update voltages.
        for (int n : m.order) {
            auto ni = static_cast<std::size_t>(n);
            int pb = m.parent_branch[ni];
            if (pb < 0) {
                v[ni] = Complex{m.root_voltage[ni], 0.0};
                continue;
            }
            const auto& b = m.branches[static_cast<std::size_t>(pb)];
            auto pi = static_cast<std::size_t>(b.parent);
            if (b.is_svr) {
                v[ni] = v[pi] * b.gain;
            } else {
                v[ni] = v[pi] - b.z_pu * i_branch[static_cast<std::size_t>(pb)];
            }
        }

        // Convergence: complex power mismatch of the injections actually
        // applied, evaluated at the updated voltages.
        mismatch = 0.0;
        for (int n : m.order) {
            auto ni = static_cast<std::size_t>(n);
            if (m.parent_branch[ni] < 0) continue;  // slack supplies the balance
            Complex s_calc = v[ni] * std::conj(i_inj[ni]);
            mismatch = std::max(mismatch, std::abs(s_calc - m.s_spec_pu[ni]));
        }
        if (mismatch <= opt.tol) {
            converged = true;
            break;
        }
    }

    sol.converged = converged;
    sol.iterations = iter;
    sol.mismatch_pu = mismatch;
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        auto n = static_cast<std::size_t>(m.node_of_bus[i]);
        sol.v[i] = m.energized[n] ? v[n] : Complex{0.0, 0.0};
    }

    // Branch powers at the from/source terminal, signed from/source -> to/load.
    for (std::size_t bi = 0; bi < m.branches.size(); ++bi) {
        const auto& b = m.branches[bi];
        Complex s;
        if (b.forward_orientation || b.element_index < 0) {
            auto pi = static_cast<std::size_t>(b.parent);
            Complex i_parent_side = b.is_svr ? i_branch[bi] * b.gain : i_branch[bi];
            s = v[pi] * std::conj(i_parent_side);
        } else {
            // Tree feeds this branch from its to/load end; measure at the
            // child, which is the declared from/source terminal.
            auto ci = static_cast<std::size_t>(b.child);
            s = -v[ci] * std::conj(i_branch[bi]);
        }
        sol.branch_s_mva[b.id] = s * net.base_mva;
    }
    // De-energized elements report zero flow.
    for (const auto& l : net.lines) sol.branch_s_mva.emplace(l.id, Complex{0.0, 0.0});
    for (const auto& s : net.svrs) sol.branch_s_mva.emplace(s.id, Complex{0.0, 0.0});

    return sol;
}

Complex PowerFlowSolution::v_at(const Network& net, const std::string& bus) const {
    int i = net.bus_index(bus);
    if (i < 0) throw std::out_of_range("unknown bus '" + bus + "'");
    return v[static_cast<std::size_t>(i)];
}

double branch_active_power(const PowerFlowSolution& sol, const std::string& branch_id) {
    auto it = sol.branch_s_mva.find(branch_id);
    if (it == sol.branch_s_mva.end()) throw std::out_of_range("unknown branch '" + branch_id + "'");
    return it->second.real();
}

Direction flow_direction(double p_mw, double dead_zone_mw) {
    return p_mw < -dead_zone_mw ? Direction::Reverse : Direction::Direct;
}

Direction flow_direction_at_svr(const PowerFlowSolution& sol, const SvrDevice& svr) {
    return flow_direction(branch_active_power(sol, svr.id));
}

InjectionSet sample_injections(const Network& net, double t_profile_s) {
    InjectionSet inj;
    inj.load_mva.assign(net.buses.size(), Complex{0.0, 0.0});
    inj.gen_mva.assign(net.buses.size(), Complex{0.0, 0.0});

    for (const auto& l : net.loads) {
        const auto& profile = net.profiles.at(l.profile);
        double p = sample_daily(profile, 0.0, t_profile_s) * l.scale;
        double q;
        if (l.q_mvar) {
            q = *l.q_mvar;
        } else {
            double pf = l.power_factor;
            q = p * std::tan(std::acos(pf));
        }
        inj.load_mva[static_cast<std::size_t>(net.bus_index(l.bus))] += Complex{p, q};
    }
    for (const auto& g : net.generators) {
        double p = g.p_self_mw + sample_daily(g.export_schedule.curve, 0.0, t_profile_s);
        inj.gen_mva[static_cast<std::size_t>(net.bus_index(g.bus))] += Complex{p, g.q_mvar};
    }
    return inj;
}

}  // namespace svrqsts
