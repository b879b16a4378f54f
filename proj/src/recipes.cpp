#include "ringlight/runner.hpp"

#include "ringlight/errors.hpp"

#include <map>

namespace ringlight {

namespace {

// Figure recipes. Each one lists the scenario documents ("parts") whose
// outputs together make up the figure.
const std::map<std::string, const char*>& recipe_table() {
    static const std::map<std::string, const char*> table = {
        {"fig1c", R"({
  "title": "Transport efficiency of a 10-ring chain versus emitters per ring",
  "parts": [{
    "name": "fig1c", "analysis": "transport",
    "geometry": {"kind": "ring_chain", "rings_x": 10, "spacing": 0.05, "ring_gap_ratio": 0.9},
    "physics": {"detuning": 0, "trap_rate": 2, "t_max": 150},
    "sweep": [{"parameter": "geometry.ring_size", "values": {"start": 3, "stop": 12, "step": 1}}]
  }]})"},
        {"fig2a", R"({
  "title": "Band structure of a chain of 10 rings, N_R = 9",
  "parts": [{
    "name": "fig2a", "analysis": "bands",
    "geometry": {"kind": "ring_chain", "ring_size": 9, "rings_x": 10, "spacing": 0.05, "ring_gap_ratio": 0.9}
  }]})"},
        {"fig2b", R"({
  "title": "Minimal band gap versus inter-ring spacing, ordered and with random ring rotations",
  "parts": [{
    "name": "ordered", "analysis": "bands",
    "geometry": {"kind": "ring_chain", "rings_x": 10, "spacing": 0.05},
    "sweep": [{"parameter": "geometry.ring_size", "values": [8, 9]},
              {"parameter": "geometry.ring_gap_ratio", "values": {"start": 0.3, "stop": 1.5, "step": 0.1}}]
  }, {
    "name": "rotated", "analysis": "bands",
    "geometry": {"kind": "ring_chain", "rings_x": 10, "spacing": 0.05},
    "disorder": {"type": "rotation", "realizations": 50, "seed": 2000},
    "sweep": [{"parameter": "geometry.ring_size", "values": [8, 9]},
              {"parameter": "geometry.ring_gap_ratio", "values": {"start": 0.3, "stop": 1.5, "step": 0.1}}]
  }]})"},
        {"fig2c", R"({
  "title": "Edge-state localization and decay for N_R = 9 with decreasing inter-ring spacing",
  "parts": [{
    "name": "fig2c", "analysis": "edges",
    "geometry": {"kind": "ring_chain", "ring_size": 9, "rings_x": 10, "spacing": 0.05},
    "sweep": [{"parameter": "geometry.ring_gap_ratio", "values": {"start": 0.2, "stop": 1.2, "num": 21}}]
  }]})"},
        {"fig2d", R"({
  "title": "Bulk weight of the in-gap edge states versus inter-ring spacing",
  "parts": [{
    "name": "fig2d", "analysis": "bands",
    "geometry": {"kind": "ring_chain", "rings_x": 10, "spacing": 0.05},
    "sweep": [{"parameter": "geometry.ring_size", "values": [8, 9]},
              {"parameter": "geometry.ring_gap_ratio", "values": {"start": 0.2, "stop": 1.2, "num": 51}}]
  }]})"},
        {"fig2e", R"({
  "title": "Transport efficiency versus inter-ring spacing with the detuning optimized",
  "parts": [{
    "name": "fig2e", "analysis": "transport",
    "geometry": {"kind": "ring_chain", "rings_x": 10, "spacing": 0.05},
    "physics": {"trap_rate": 1, "t_max": 150, "optimize_detuning": true, "detuning_step": 0.5},
    "sweep": [{"parameter": "geometry.ring_size", "values": [8, 9]},
              {"parameter": "geometry.ring_gap_ratio", "values": {"start": 0.2, "stop": 1.2, "num": 21}}]
  }]})"},
        {"fig2f", R"({
  "title": "Transport dynamics and eigenstate fidelities for N_R = 9 at zero detuning",
  "parts": [{
    "name": "fig2f", "analysis": "transport",
    "geometry": {"kind": "ring_chain", "ring_size": 9, "rings_x": 10, "spacing": 0.05, "ring_gap_ratio": 0.9},
    "physics": {"detuning": 0, "trap_rate": 1, "t_max": 150, "time_steps": 600},
    "output": {"fidelity": true}
  }]})"},
        {"fig3", R"({
  "title": "Transport efficiency over emitters per ring and detuning for three inter-ring spacings",
  "parts": [{
    "name": "gap_0.9", "analysis": "transport",
    "geometry": {"kind": "ring_chain", "rings_x": 10, "spacing": 0.05, "ring_gap_ratio": 0.9},
    "physics": {"trap_rate": 2, "t_max": 150},
    "sweep": [{"parameter": "geometry.ring_size", "values": {"start": 3, "stop": 12, "step": 1}},
              {"parameter": "physics.detuning", "values": {"start": -15, "stop": 15, "num": 61}}]
  }, {
    "name": "gap_0.6", "analysis": "transport",
    "geometry": {"kind": "ring_chain", "rings_x": 10, "spacing": 0.05, "ring_gap_ratio": 0.6},
    "physics": {"trap_rate": 2, "t_max": 150},
    "sweep": [{"parameter": "geometry.ring_size", "values": {"start": 3, "stop": 12, "step": 1}},
              {"parameter": "physics.detuning", "values": {"start": -15, "stop": 15, "num": 61}}]
  }, {
    "name": "gap_0.3", "analysis": "transport",
    "geometry": {"kind": "ring_chain", "rings_x": 10, "spacing": 0.05, "ring_gap_ratio": 0.3},
    "physics": {"trap_rate": 2, "t_max": 150},
    "sweep": [{"parameter": "geometry.ring_size", "values": {"start": 3, "stop": 12, "step": 1}},
              {"parameter": "physics.detuning", "values": {"start": -15, "stop": 15, "num": 61}}]
  }]})"},
        {"fig4a", R"({
  "title": "Transport with frequency disorder: hexagonal lattice, linear chain and free pair",
  "parts": [{
    "name": "hexagonal", "analysis": "transport",
    "geometry": {"kind": "hexagonal", "sites_x": 18, "sites_y": 4, "spacing": 0.06, "donor_acceptor_distance": 1.0},
    "physics": {"detuning": 0, "t_max": 150},
    "disorder": {"type": "frequency", "realizations": 25, "seed": 4100},
    "sweep": [{"parameter": "disorder.sigma_over_coupling", "values": [0, 0.25, 0.5]},
              {"parameter": "physics.trap_over_coupling", "values": {"start": 0.01, "stop": 10, "num": 13, "scale": "log"}}]
  }, {
    "name": "chain", "analysis": "transport",
    "geometry": {"kind": "linear_chain", "sites_x": 20, "spacing": 0.06, "donor_acceptor_distance": 1.0},
    "physics": {"detuning": 0, "t_max": 150},
    "disorder": {"type": "frequency", "realizations": 25, "seed": 4200},
    "sweep": [{"parameter": "disorder.sigma_over_coupling", "values": [0, 0.25, 0.5]},
              {"parameter": "physics.trap_over_coupling", "values": {"start": 0.01, "stop": 10, "num": 13, "scale": "log"}}]
  }, {
    "name": "free_pair_lambda", "analysis": "transport",
    "geometry": {"kind": "free_pair", "spacing": 0.06, "pair_separation": 1.0},
    "physics": {"detuning": 0, "t_max": 150},
    "sweep": [{"parameter": "physics.trap_over_coupling", "values": {"start": 0.01, "stop": 10, "num": 13, "scale": "log"}}]
  }, {
    "name": "free_pair_d", "analysis": "transport",
    "geometry": {"kind": "free_pair", "spacing": 0.06},
    "physics": {"detuning": 0, "t_max": 150},
    "sweep": [{"parameter": "physics.trap_over_coupling", "values": {"start": 0.01, "stop": 10, "num": 13, "scale": "log"}}]
  }]})"},
        {"fig4b", R"({
  "title": "Transport with frequency disorder: honeycomb lattice",
  "parts": [{
    "name": "honeycomb", "analysis": "transport",
    "geometry": {"kind": "honeycomb", "sites_x": 13, "sites_y": 5, "spacing": 0.06, "donor_acceptor_distance": 1.0},
    "physics": {"detuning": 4.5, "t_max": 150},
    "disorder": {"type": "frequency", "realizations": 25, "seed": 4300},
    "sweep": [{"parameter": "disorder.sigma_over_coupling", "values": [0, 0.25, 0.5]},
              {"parameter": "physics.trap_over_coupling", "values": {"start": 0.01, "stop": 10, "num": 13, "scale": "log"}}]
  }, {
    "name": "free_pair_d", "analysis": "transport",
    "geometry": {"kind": "free_pair", "spacing": 0.06},
    "physics": {"detuning": 0, "t_max": 150},
    "sweep": [{"parameter": "physics.trap_over_coupling", "values": {"start": 0.01, "stop": 10, "num": 13, "scale": "log"}}]
  }]})"},
        {"fig4c", R"({
  "title": "Transport with frequency disorder: chain of 5 rings, N_R = 9",
  "parts": [{
    "name": "ring_chain", "analysis": "transport",
    "geometry": {"kind": "ring_chain", "ring_size": 9, "rings_x": 5, "spacing": 0.06, "ring_gap_ratio": 0.9},
    "physics": {"detuning": -1, "t_max": 150},
    "disorder": {"type": "frequency", "realizations": 25, "seed": 4400},
    "sweep": [{"parameter": "disorder.sigma_over_coupling", "values": [0, 0.25, 0.5]},
              {"parameter": "physics.trap_over_coupling", "values": {"start": 0.01, "stop": 10, "num": 13, "scale": "log"}}]
  }, {
    "name": "free_pair_d", "analysis": "transport",
    "geometry": {"kind": "free_pair", "spacing": 0.06},
    "physics": {"detuning": 0, "t_max": 150},
    "sweep": [{"parameter": "physics.trap_over_coupling", "values": {"start": 0.01, "stop": 10, "num": 13, "scale": "log"}}]
  }]})"},
        {"fig5a", R"({
  "title": "Steady-state trapping under weak driving: hexagonal lattice, linear chain, free pair",
  "parts": [{
    "name": "hexagonal", "analysis": "steady",
    "geometry": {"kind": "hexagonal", "sites_x": 18, "sites_y": 4, "spacing": 0.06, "donor_acceptor_distance": 1.0},
    "physics": {"detuning": -18, "rabi": 0.001},
    "sweep": [{"parameter": "physics.waist", "values": [0.3, 3]},
              {"parameter": "physics.trap_over_coupling", "values": {"start": 0.001, "stop": 10, "num": 25, "scale": "log"}}]
  }, {
    "name": "chain", "analysis": "steady",
    "geometry": {"kind": "linear_chain", "sites_x": 20, "spacing": 0.06, "donor_acceptor_distance": 1.0},
    "physics": {"detuning": 0, "rabi": 0.001},
    "sweep": [{"parameter": "physics.waist", "values": [0.3, 3]},
              {"parameter": "physics.trap_over_coupling", "values": {"start": 0.001, "stop": 10, "num": 25, "scale": "log"}}]
  }, {
    "name": "free_pair", "analysis": "steady",
    "geometry": {"kind": "free_pair", "spacing": 0.06, "pair_separation": 1.0},
    "physics": {"detuning": 0, "rabi": 0.001},
    "sweep": [{"parameter": "physics.waist", "values": [0.3, 3]},
              {"parameter": "physics.trap_over_coupling", "values": {"start": 0.001, "stop": 10, "num": 25, "scale": "log"}}]
  }]})"},
        {"fig5b", R"({
  "title": "Steady-state trapping under weak driving: honeycomb lattice",
  "parts": [{
    "name": "honeycomb", "analysis": "steady",
    "geometry": {"kind": "honeycomb", "sites_x": 13, "sites_y": 5, "spacing": 0.06, "donor_acceptor_distance": 1.0},
    "physics": {"detuning": -20, "rabi": 0.001},
    "sweep": [{"parameter": "physics.waist", "values": [0.3, 3]},
              {"parameter": "physics.trap_over_coupling", "values": {"start": 0.001, "stop": 10, "num": 25, "scale": "log"}}]
  }]})"},
        {"fig5c", R"({
  "title": "Steady-state trapping under weak driving: chain of 5 rings",
  "parts": [{
    "name": "ring_chain", "analysis": "steady",
    "geometry": {"kind": "ring_chain", "ring_size": 9, "rings_x": 5, "spacing": 0.06, "ring_gap_ratio": 0.9},
    "physics": {"detuning": -3.85, "rabi": 0.001},
    "sweep": [{"parameter": "physics.waist", "values": [0.3, 3]},
              {"parameter": "physics.trap_over_coupling", "values": {"start": 0.001, "stop": 10, "num": 25, "scale": "log"}}]
  }]})"},
        {"fig5d", R"({
  "title": "Steady-state trapping under weak driving: 3 x 3 hexagonal ring lattice",
  "parts": [{
    "name": "ring_lattice", "analysis": "steady",
    "geometry": {"kind": "ring_lattice_hexagonal", "ring_size": 9, "rings_x": 3, "rings_y": 3, "spacing": 0.06, "ring_gap_ratio": 0.9},
    "physics": {"detuning": -4.63, "rabi": 0.001},
    "sweep": [{"parameter": "physics.waist", "values": [0.3, 3]},
              {"parameter": "physics.trap_over_coupling", "values": {"start": 0.001, "stop": 10, "num": 25, "scale": "log"}}]
  }]})"},
        {"figM1", R"({
  "title": "Transport over emitters per ring and trapping rate at fixed ring radius, with the Bloch group-velocity estimate",
  "parts": [{
    "name": "figM1", "analysis": "transport",
    "geometry": {"kind": "ring_chain", "rings_x": 10, "radius": 0.08},
    "physics": {"t_max": 150, "optimize_detuning": true, "detuning_step": 1.0, "detuning_tolerance": 0.01},
    "bands": {"group_velocity": true},
    "sweep": [{"parameter": "geometry.ring_size", "values": [6, 7, 8, 9, 10, 11, 12],
               "linked": {"geometry.ring_gap_ratio": [1, 0.8660254037844386, 1, 0.8660254037844386, 1, 0.8660254037844386, 1]}},
              {"parameter": "physics.trap_rate", "values": {"start": 0.01, "stop": 100, "num": 17, "scale": "log"}}]
  }]})"},
        {"figM2", R"({
  "title": "Edge and corner states in 1D and 2D ring lattices, N_R = 8",
  "parts": [{
    "name": "chain", "analysis": "edges",
    "geometry": {"kind": "ring_chain", "ring_size": 8, "rings_x": 10, "spacing": 0.05},
    "sweep": [{"parameter": "geometry.ring_gap_ratio", "values": {"start": 0.3, "stop": 1.2, "num": 19}}]
  }, {
    "name": "square", "analysis": "edges",
    "geometry": {"kind": "ring_lattice_square", "ring_size": 8, "rings_x": 4, "rings_y": 4, "spacing": 0.05, "donor_acceptor": false},
    "sweep": [{"parameter": "geometry.ring_gap_ratio", "values": {"start": 0.3, "stop": 1.2, "num": 19}}]
  }, {
    "name": "hexagonal", "analysis": "edges",
    "geometry": {"kind": "ring_lattice_hexagonal", "ring_size": 8, "rings_x": 4, "rings_y": 4, "spacing": 0.05, "donor_acceptor": false},
    "sweep": [{"parameter": "geometry.ring_gap_ratio", "values": {"start": 0.3, "stop": 1.2, "num": 19}}]
  }]})"},
    };
    return table;
}

} // namespace

std::vector<std::string> recipe_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, text] : recipe_table()) {
        ids.push_back(id);
    }
    return ids;
}

json recipe(const std::string& id) {
    const auto& table = recipe_table();
    const auto it = table.find(id);
    if (it == table.end()) {
        std::string known;
        for (const auto& [k, v] : table) {
            known += (known.empty() ? "" : ", ") + k;
        }
        throw ConfigError("unknown figure id '" + id + "' (known: " + known + ")");
    }
    json r = json::parse(it->second);
    r["id"] = id;
    return r;
}

} // namespace ringlight
