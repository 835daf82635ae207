#ifndef SHIFTSIM_CELLS_HPP
#define SHIFTSIM_CELLS_HPP

#include <map>

#include "shiftsim/netlist.hpp"
#include "shiftsim/sim.hpp"

namespace shiftsim {

/// Per-variant clk-to-q delays plus per-primitive gate delays for
/// structural cells. The shipped defaults() carry the reference
/// clk-to-q calibration (9/14/22/9 ns) with uniform 1 ns gates;
/// structural_calibrated() scales the gate delays so the gate-level
/// cells reproduce the same four numbers.
struct CellDelayConfig {
    std::map<FlipFlopVariant, Ps> clk_to_q_ps;
    std::map<PrimitiveKind, Ps> gate_ps;

    Ps clk_to_q(FlipFlopVariant v) const;
    Ps gate(PrimitiveKind k) const;
    void check() const; // all delays > 0

    static CellDelayConfig defaults();
    static CellDelayConfig structural_calibrated();
};

/// Conservative settle bound for one evaluation wave through cells built
/// from this config (used to size clock half-periods).
Ps slowest_path_ps(const CellDelayConfig &cfg);

/// 4:1 path selector: (s1,s0) = 00 -> d, 01 -> c, 10 -> b, 11 -> a.
/// Unknown selects give X unless all four data inputs agree on a strong
/// value.
LogicValue mux4(LogicValue s1, LogicValue s0, LogicValue path_d, LogicValue path_c,
                LogicValue path_b, LogicValue path_a);

/// Sum and carry of three bits with enumeration-sharp X handling: an
/// output only goes X when some consistent assignment of the unknown
/// inputs could change it.
std::pair<LogicValue, LogicValue> full_adder(LogicValue a, LogicValue b, LogicValue cin);

/// Captured Q for a rising clock edge. Strong data is stored, X/Z data
/// stores X. Between edges Q holds q_prev (not modeled here).
LogicValue ff_step(FlipFlopVariant variant, LogicValue d, LogicValue q_prev);

enum class CellMode { Behavioral, Structural };

Netlist build_mux4(const CellDelayConfig &cfg);
Netlist build_full_adder(const CellDelayConfig &cfg);

/// Gate-level flip-flop cells, all rising-edge:
///  - dff:   TG master-slave with a local clock inverter.
///  - dtgms: clocked-inverter master-slave storing on floating nodes;
///           takes both phases (clk, clkb) from outside.
///  - mtspc: single-phase clocked-inverter pipeline; the precharge stage
///           is gated on both rails by clk, which is the blocking device.
///  - tgms:  like dff plus a static feedback path from q back to the
///           master node through exactly two inverting stages, engaged
///           by a delayed enable so it never fights the capture.
Netlist build_ff_structural(FlipFlopVariant variant, const CellDelayConfig &cfg);

enum class OverlapOutcome { Holds, Corrupts };

/// Drives CLK and CLKB both high for overlap_ps in the middle of a hold
/// phase (the CLKB track only reaches cells that expose the port) and
/// compares Q against the ff_step prediction.
OverlapOutcome overlap_stress(FlipFlopVariant variant, Ps overlap_ps,
                              const CellDelayConfig &cfg = CellDelayConfig::defaults());

} // namespace shiftsim

#endif
