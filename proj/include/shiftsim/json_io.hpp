#ifndef SHIFTSIM_JSON_IO_HPP
#define SHIFTSIM_JSON_IO_HPP

#include <string>

#include "shiftsim/cells.hpp"
#include "shiftsim/sim.hpp"

namespace shiftsim {

/// Netlist JSON, format 1. Deterministic output; parse -> serialize is a
/// fixed point. Subcircuits are collected by name into a top-level map
/// and referenced from "instance" components. The loaded netlist is
/// validated; diagnostics raise Error.
Netlist parse_netlist(const std::string &text);
std::string serialize_netlist(const Netlist &nl);

/// Stimulus JSON: either a bare array of {"t_ns","port","v"} entries
/// (optionally including one {"clock": {...}} element) or the object
/// form {"format":1,"events":[...],"clock":{...}}. Events are sorted.
Stimulus parse_stimulus(const std::string &text);
std::string serialize_stimulus(const Stimulus &st);

/// Delay config JSON: {"format":1,"clk_to_q_ns":{...},"gate_ns":{...}}.
CellDelayConfig parse_delay_config(const std::string &text);
std::string serialize_delay_config(const CellDelayConfig &cfg);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

} // namespace shiftsim

#endif
