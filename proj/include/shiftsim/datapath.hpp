#ifndef SHIFTSIM_DATAPATH_HPP
#define SHIFTSIM_DATAPATH_HPP

#include "shiftsim/cells.hpp"

namespace shiftsim {

/// Register mode per the 4:1 select encoding: 00 hold, 01 shift right,
/// 10 shift left, 11 parallel load.
enum class UsrMode : std::uint8_t { NoChange = 0, ShiftRight = 1, ShiftLeft = 2, ParallelLoad = 3 };

const char *mode_name(UsrMode m);
inline UsrMode mode_from_selects(bool s1, bool s0) {
    return static_cast<UsrMode>((s1 ? 2 : 0) | (s0 ? 1 : 0));
}

struct UsrState {
    Word4 f;
    bool operator==(const UsrState &) const = default;
};

/// One clock of the shift register. Shift right moves F1 toward F4 with
/// serial entry at F1; shift left mirrors it.
UsrState usr_step(UsrState state, UsrMode mode, LogicValue serial_right_in,
                  LogicValue serial_left_in, Word4 parallel_in);

/// One of the eight arithmetic microoperations, indexed by (s1, s0, cin).
struct AluControl {
    bool s1 = false, s0 = false, cin = false;

    int index() const { return (s1 ? 4 : 0) | (s0 ? 2 : 0) | (cin ? 1 : 0); }
    static AluControl from_index(int i) {
        return {(i & 4) != 0, (i & 2) != 0, (i & 1) != 0};
    }
    const char *op_name() const;
};

struct AluResult {
    Word4 d;
    LogicValue cout = LX;
};

/// Second adder operand: 00 -> B, 01 -> ~B, 10 -> 0000, 11 -> 1111.
Word4 alu_select_y(AluControl ctrl, Word4 b);

/// D = A + Y + cin over 4 bits, F1 the MSB, ripple carry from F4.
/// Implemented with integer arithmetic on strong operands; unknown bits
/// fall back to a bitwise adder chain with the same X rules as the gates.
AluResult alu_eval(AluControl ctrl, Word4 a, Word4 b);

/// Accumulator organization: the register doubles as operand A, the ALU
/// result feeds the parallel-load inputs.
struct SystemState {
    UsrState reg;
    Word4 operand_b;
    LogicValue last_cout = LX;
};

SystemState system_cycle(SystemState state, AluControl ctrl, UsrMode mode,
                         LogicValue sr_in, LogicValue sl_in);

/// Catalog circuits. Behavioral mode uses leaf flip-flop cells with the
/// configured clk-to-q; structural mode expands the gate-level variants.
Netlist build_usr(FlipFlopVariant variant, const CellDelayConfig &cfg,
                  CellMode mode = CellMode::Structural);
Netlist build_alu(const CellDelayConfig &cfg);
Netlist build_system(FlipFlopVariant variant, const CellDelayConfig &cfg,
                     CellMode mode = CellMode::Structural);

} // namespace shiftsim

#endif
