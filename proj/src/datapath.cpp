#include "shiftsim/datapath.hpp"

#include <memory>

namespace shiftsim {

const char *mode_name(UsrMode m) {
    switch (m) {
    case UsrMode::NoChange: return "no-change";
    case UsrMode::ShiftRight: return "shift-right";
    case UsrMode::ShiftLeft: return "shift-left";
    case UsrMode::ParallelLoad: return "parallel-load";
    }
    return "?";
}

const char *AluControl::op_name() const {
    switch (index()) {
    case 0: return "add";
    case 1: return "add-with-carry";
    case 2: return "subtract-with-borrow";
    case 3: return "subtract";
    case 4: return "transfer-a";
    case 5: return "increment-a";
    case 6: return "decrement-a";
    default: return "transfer-a";
    }
}

UsrState usr_step(UsrState state, UsrMode mode, LogicValue sr_in, LogicValue sl_in,
                  Word4 parallel_in) {
    const Word4 &f = state.f;
    switch (mode) {
    case UsrMode::NoChange:
        return state;
    case UsrMode::ShiftRight:
        return {Word4{{sr_in, f[0], f[1], f[2]}}};
    case UsrMode::ShiftLeft:
        return {Word4{{f[1], f[2], f[3], sl_in}}};
    case UsrMode::ParallelLoad:
        return {parallel_in};
    }
    return state;
}

Word4 alu_select_y(AluControl ctrl, Word4 b) {
    Word4 y;
    for (int i = 0; i < 4; ++i) {
        if (!ctrl.s1 && !ctrl.s0) y[i] = b[i];
        else if (!ctrl.s1 && ctrl.s0) y[i] = lnot(b[i]);
        else if (ctrl.s1 && !ctrl.s0) y[i] = L0;
        else y[i] = L1;
    }
    return y;
}

AluResult alu_eval(AluControl ctrl, Word4 a, Word4 b) {
    Word4 y = alu_select_y(ctrl, b);
    auto av = a.to_uint();
    auto yv = y.to_uint();
    if (av && yv) {
        unsigned sum = *av + *yv + (ctrl.cin ? 1u : 0u);
        return {Word4::from_uint(sum & 0xfu), sum >= 16 ? L1 : L0};
    }
    // X-propagating ripple chain, least significant bit (F4) first.
    AluResult r;
    LogicValue carry = ctrl.cin ? L1 : L0;
    for (int i = 3; i >= 0; --i) {
        auto [s, c] = full_adder(a[i], y[i], carry);
        r.d[i] = s;
        carry = c;
    }
    r.cout = carry;
    return r;
}

SystemState system_cycle(SystemState state, AluControl ctrl, UsrMode mode,
                         LogicValue sr_in, LogicValue sl_in) {
    AluResult alu = alu_eval(ctrl, state.reg.f, state.operand_b);
    SystemState next = state;
    next.reg = usr_step(state.reg, mode, sr_in, sl_in, alu.d);
    next.last_cout = alu.cout;
    return next;
}

Netlist build_usr(FlipFlopVariant variant, const CellDelayConfig &cfg, CellMode mode) {
    cfg.check();
    bool ext_phases = mode == CellMode::Structural && variant == FlipFlopVariant::Dtgms;

    Netlist nl(std::string("usr_") + variant_name(variant));
    NetId s1 = nl.add_input("s1"), s0 = nl.add_input("s0");
    NetId sr = nl.add_input("sr_in"), sl = nl.add_input("sl_in");
    NetId m[4];
    for (int i = 0; i < 4; ++i) m[i] = nl.add_input("m" + std::to_string(i + 1));
    NetId clk = nl.add_input("clk");
    NetId clkb = ext_phases ? nl.add_input("clkb") : kNoNet;
    NetId f[4];
    for (int i = 0; i < 4; ++i) f[i] = nl.add_output("f" + std::to_string(i + 1));
    NetId y[4];
    for (int i = 0; i < 4; ++i) y[i] = nl.add_net("y" + std::to_string(i + 1));

    auto mux = std::make_shared<const Netlist>(build_mux4(cfg));
    std::shared_ptr<const Netlist> ff;
    if (mode == CellMode::Structural)
        ff = std::make_shared<const Netlist>(build_ff_structural(variant, cfg));

    for (int i = 0; i < 4; ++i) {
        std::string bit = "bit" + std::to_string(i + 1);
        NetId right = i == 0 ? sr : f[i - 1]; // serial-right chain enters at F1
        NetId left = i == 3 ? sl : f[i + 1];
        nl.add_instance(bit + ".mux", mux,
                        {{"s1", s1},
                         {"s0", s0},
                         {"d", f[i]},
                         {"c", right},
                         {"b", left},
                         {"a", m[i]},
                         {"y", y[i]}});
        if (mode == CellMode::Behavioral) {
            nl.add_ff(bit + ".ff", variant, {{"d", y[i]}, {"clk", clk}, {"q", f[i]}},
                      cfg.clk_to_q(variant));
        } else {
            std::map<std::string, NetId> conn = {{"d", y[i]}, {"clk", clk}, {"q", f[i]}};
            if (ext_phases) conn.emplace("clkb", clkb);
            nl.add_instance(bit + ".ff", ff, conn);
        }
    }
    return nl;
}

Netlist build_alu(const CellDelayConfig &cfg) {
    cfg.check();
    Netlist nl("alu");
    NetId s1 = nl.add_input("s1"), s0 = nl.add_input("s0"), cin = nl.add_input("cin");
    NetId a[4], b[4];
    for (int i = 0; i < 4; ++i) a[i] = nl.add_input("a" + std::to_string(i + 1));
    for (int i = 0; i < 4; ++i) b[i] = nl.add_input("b" + std::to_string(i + 1));
    NetId d[4];
    for (int i = 0; i < 4; ++i) d[i] = nl.add_output("d" + std::to_string(i + 1));
    NetId cout = nl.add_output("cout");

    NetId zero = nl.add_net("zero"), one = nl.add_net("one");
    NetId bn[4], y[4];
    for (int i = 0; i < 4; ++i) bn[i] = nl.add_net("bn" + std::to_string(i + 1));
    for (int i = 0; i < 4; ++i) y[i] = nl.add_net("y" + std::to_string(i + 1));
    // Ripple carries, F4 is the least significant bit.
    NetId c43 = nl.add_net("c43"), c32 = nl.add_net("c32"), c21 = nl.add_net("c21");

    nl.add_gate("tie0", PrimitiveKind::Const0, {{"out", zero}}, 0);
    nl.add_gate("tie1", PrimitiveKind::Const1, {{"out", one}}, 0);

    auto mux = std::make_shared<const Netlist>(build_mux4(cfg));
    auto fa = std::make_shared<const Netlist>(build_full_adder(cfg));

    Ps tn = cfg.gate(PrimitiveKind::Not);
    for (int i = 0; i < 4; ++i) {
        std::string bit = "bit" + std::to_string(i + 1);
        nl.add_gate(bit + ".binv", PrimitiveKind::Not, {{"in", b[i]}, {"out", bn[i]}}, tn);
        nl.add_instance(bit + ".ymux", mux,
                        {{"s1", s1},
                         {"s0", s0},
                         {"d", b[i]},
                         {"c", bn[i]},
                         {"b", zero},
                         {"a", one},
                         {"y", y[i]}});
    }
    NetId carry_in[4] = {c21, c32, c43, cin};
    NetId carry_out[4] = {cout, c21, c32, c43};
    for (int i = 0; i < 4; ++i) {
        std::string bit = "bit" + std::to_string(i + 1);
        nl.add_instance(bit + ".fa", fa,
                        {{"a", a[i]},
                         {"b", y[i]},
                         {"cin", carry_in[i]},
                         {"sum", d[i]},
                         {"cout", carry_out[i]}});
    }
    return nl;
}

Netlist build_system(FlipFlopVariant variant, const CellDelayConfig &cfg, CellMode mode) {
    cfg.check();
    bool ext_phases = mode == CellMode::Structural && variant == FlipFlopVariant::Dtgms;

    Netlist nl(std::string("system_") + variant_name(variant));
    NetId as1 = nl.add_input("alu_s1"), as0 = nl.add_input("alu_s0"), cin = nl.add_input("cin");
    NetId b[4];
    for (int i = 0; i < 4; ++i) b[i] = nl.add_input("b" + std::to_string(i + 1));
    NetId us1 = nl.add_input("usr_s1"), us0 = nl.add_input("usr_s0");
    NetId sr = nl.add_input("sr_in"), sl = nl.add_input("sl_in");
    NetId clk = nl.add_input("clk");
    NetId clkb = ext_phases ? nl.add_input("clkb") : kNoNet;
    NetId f[4];
    for (int i = 0; i < 4; ++i) f[i] = nl.add_output("f" + std::to_string(i + 1));
    NetId cout = nl.add_output("cout");
    NetId d[4];
    for (int i = 0; i < 4; ++i) d[i] = nl.add_net("d" + std::to_string(i + 1));

    auto alu = std::make_shared<const Netlist>(build_alu(cfg));
    auto usr = std::make_shared<const Netlist>(build_usr(variant, cfg, mode));

    std::map<std::string, NetId> aconn = {{"s1", as1}, {"s0", as0}, {"cin", cin}, {"cout", cout}};
    for (int i = 0; i < 4; ++i) {
        aconn.emplace("a" + std::to_string(i + 1), f[i]); // register doubles as operand A
        aconn.emplace("b" + std::to_string(i + 1), b[i]);
        aconn.emplace("d" + std::to_string(i + 1), d[i]);
    }
    nl.add_instance("alu", alu, aconn);

    std::map<std::string, NetId> uconn = {
        {"s1", us1}, {"s0", us0}, {"sr_in", sr}, {"sl_in", sl}, {"clk", clk}};
    for (int i = 0; i < 4; ++i) {
        uconn.emplace("m" + std::to_string(i + 1), d[i]); // ALU result feeds parallel load
        uconn.emplace("f" + std::to_string(i + 1), f[i]);
    }
    if (ext_phases) uconn.emplace("clkb", clkb);
    nl.add_instance("usr", usr, uconn);
    return nl;
}

} // namespace shiftsim
