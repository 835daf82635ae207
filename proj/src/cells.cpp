#include "shiftsim/cells.hpp"

#include <algorithm>

namespace shiftsim {

Ps CellDelayConfig::clk_to_q(FlipFlopVariant v) const {
    auto it = clk_to_q_ps.find(v);
    if (it == clk_to_q_ps.end())
        throw Error(std::string("delay config: no clk_to_q for ") + variant_name(v));
    return it->second;
}

Ps CellDelayConfig::gate(PrimitiveKind k) const {
    if (k == PrimitiveKind::Const0 || k == PrimitiveKind::Const1) return 0;
    auto it = gate_ps.find(k);
    if (it == gate_ps.end())
        throw Error(std::string("delay config: no gate delay for ") + kind_name(k));
    return it->second;
}

void CellDelayConfig::check() const {
    for (auto v : {FlipFlopVariant::Dff, FlipFlopVariant::Dtgms, FlipFlopVariant::Mtspc,
                   FlipFlopVariant::Tgms})
        if (clk_to_q(v) <= 0)
            throw Error(std::string("delay config: clk_to_q(") + variant_name(v) +
                        ") must be positive");
    for (const auto &[k, d] : gate_ps)
        if (d <= 0)
            throw Error(std::string("delay config: gate delay for ") + kind_name(k) +
                        " must be positive");
}

CellDelayConfig CellDelayConfig::defaults() {
    CellDelayConfig c;
    c.clk_to_q_ps = {
        {FlipFlopVariant::Dff, 9 * kNsToPs},
        {FlipFlopVariant::Dtgms, 14 * kNsToPs},
        {FlipFlopVariant::Mtspc, 22 * kNsToPs},
        {FlipFlopVariant::Tgms, 9 * kNsToPs},
    };
    for (auto k : {PrimitiveKind::Not, PrimitiveKind::Buf, PrimitiveKind::And2,
                   PrimitiveKind::Nand2, PrimitiveKind::Or2, PrimitiveKind::Nor2,
                   PrimitiveKind::Xor2, PrimitiveKind::Tgate, PrimitiveKind::Cinv})
        c.gate_ps[k] = 1 * kNsToPs;
    return c;
}

CellDelayConfig CellDelayConfig::structural_calibrated() {
    // Critical paths from the clock edge: dff/tgms = tgate+not,
    // dtgms = cinv+buf, mtspc = 2*cinv+not. Solved against the shipped
    // clk-to-q calibration.
    CellDelayConfig c = defaults();
    c.gate_ps[PrimitiveKind::Not] = 6 * kNsToPs;
    c.gate_ps[PrimitiveKind::Buf] = 6 * kNsToPs;
    c.gate_ps[PrimitiveKind::And2] = 6 * kNsToPs;
    c.gate_ps[PrimitiveKind::Nand2] = 6 * kNsToPs;
    c.gate_ps[PrimitiveKind::Or2] = 6 * kNsToPs;
    c.gate_ps[PrimitiveKind::Nor2] = 6 * kNsToPs;
    c.gate_ps[PrimitiveKind::Xor2] = 6 * kNsToPs;
    c.gate_ps[PrimitiveKind::Tgate] = 3 * kNsToPs;
    c.gate_ps[PrimitiveKind::Cinv] = 8 * kNsToPs;
    return c;
}

Ps slowest_path_ps(const CellDelayConfig &cfg) {
    Ps cq = 0, g = 0;
    for (const auto &[v, d] : cfg.clk_to_q_ps) cq = std::max(cq, d);
    for (const auto &[k, d] : cfg.gate_ps) g = std::max(g, d);
    return cq + 12 * g;
}

LogicValue mux4(LogicValue s1, LogicValue s0, LogicValue path_d, LogicValue path_c,
                LogicValue path_b, LogicValue path_a) {
    s1 = as_input(s1);
    s0 = as_input(s0);
    if (is_strong(s1) && is_strong(s0)) {
        int idx = (s1 == L1 ? 2 : 0) | (s0 == L1 ? 1 : 0);
        switch (idx) {
        case 0: return path_d;
        case 1: return path_c;
        case 2: return path_b;
        default: return path_a;
        }
    }
    if (is_strong(path_d) && path_d == path_c && path_c == path_b && path_b == path_a)
        return path_d;
    return LX;
}

std::pair<LogicValue, LogicValue> full_adder(LogicValue a, LogicValue b, LogicValue cin) {
    LogicValue sum = lxor(lxor(a, b), cin);
    int ones = 0, zeros = 0;
    for (LogicValue v : {as_input(a), as_input(b), as_input(cin)}) {
        if (v == L1) ++ones;
        if (v == L0) ++zeros;
    }
    LogicValue cout = ones >= 2 ? L1 : (zeros >= 2 ? L0 : LX);
    return {sum, cout};
}

LogicValue ff_step(FlipFlopVariant, LogicValue d, LogicValue) {
    return is_strong(d) ? d : LX;
}

Netlist build_mux4(const CellDelayConfig &cfg) {
    Netlist nl("mux4");
    NetId s1 = nl.add_input("s1"), s0 = nl.add_input("s0");
    NetId d = nl.add_input("d"), c = nl.add_input("c"), b = nl.add_input("b"),
          a = nl.add_input("a");
    NetId y = nl.add_output("y");
    NetId s1b = nl.add_net("s1_b"), s0b = nl.add_net("s0_b");
    NetId seld = nl.add_net("sel_d"), selc = nl.add_net("sel_c"), selb = nl.add_net("sel_b"),
          sela = nl.add_net("sel_a");
    NetId td = nl.add_net("t_d"), tc = nl.add_net("t_c"), tb = nl.add_net("t_b"),
          ta = nl.add_net("t_a");
    NetId odc = nl.add_net("or_dc"), oba = nl.add_net("or_ba");

    Ps tn = cfg.gate(PrimitiveKind::Not);
    Ps ta2 = cfg.gate(PrimitiveKind::And2);
    Ps to2 = cfg.gate(PrimitiveKind::Or2);
    nl.add_gate("inv_s1", PrimitiveKind::Not, {{"in", s1}, {"out", s1b}}, tn);
    nl.add_gate("inv_s0", PrimitiveKind::Not, {{"in", s0}, {"out", s0b}}, tn);
    nl.add_gate("sel_d", PrimitiveKind::And2, {{"a", s1b}, {"b", s0b}, {"out", seld}}, ta2);
    nl.add_gate("sel_c", PrimitiveKind::And2, {{"a", s1b}, {"b", s0}, {"out", selc}}, ta2);
    nl.add_gate("sel_b", PrimitiveKind::And2, {{"a", s1}, {"b", s0b}, {"out", selb}}, ta2);
    nl.add_gate("sel_a", PrimitiveKind::And2, {{"a", s1}, {"b", s0}, {"out", sela}}, ta2);
    nl.add_gate("and_d", PrimitiveKind::And2, {{"a", seld}, {"b", d}, {"out", td}}, ta2);
    nl.add_gate("and_c", PrimitiveKind::And2, {{"a", selc}, {"b", c}, {"out", tc}}, ta2);
    nl.add_gate("and_b", PrimitiveKind::And2, {{"a", selb}, {"b", b}, {"out", tb}}, ta2);
    nl.add_gate("and_a", PrimitiveKind::And2, {{"a", sela}, {"b", a}, {"out", ta}}, ta2);
    nl.add_gate("or_dc", PrimitiveKind::Or2, {{"a", td}, {"b", tc}, {"out", odc}}, to2);
    nl.add_gate("or_ba", PrimitiveKind::Or2, {{"a", tb}, {"b", ta}, {"out", oba}}, to2);
    nl.add_gate("or_y", PrimitiveKind::Or2, {{"a", odc}, {"b", oba}, {"out", y}}, to2);
    return nl;
}

Netlist build_full_adder(const CellDelayConfig &cfg) {
    Netlist nl("fulladder");
    NetId a = nl.add_input("a"), b = nl.add_input("b"), cin = nl.add_input("cin");
    NetId sum = nl.add_output("sum"), cout = nl.add_output("cout");
    NetId x1 = nl.add_net("x_ab"), a1 = nl.add_net("and_ab"), a2 = nl.add_net("and_xc");

    Ps tx = cfg.gate(PrimitiveKind::Xor2);
    Ps ta = cfg.gate(PrimitiveKind::And2);
    Ps to = cfg.gate(PrimitiveKind::Or2);
    nl.add_gate("xor_ab", PrimitiveKind::Xor2, {{"a", a}, {"b", b}, {"out", x1}}, tx);
    nl.add_gate("xor_sum", PrimitiveKind::Xor2, {{"a", x1}, {"b", cin}, {"out", sum}}, tx);
    nl.add_gate("and_ab", PrimitiveKind::And2, {{"a", a}, {"b", b}, {"out", a1}}, ta);
    nl.add_gate("and_xc", PrimitiveKind::And2, {{"a", x1}, {"b", cin}, {"out", a2}}, ta);
    nl.add_gate("or_cout", PrimitiveKind::Or2, {{"a", a1}, {"b", a2}, {"out", cout}}, to);
    return nl;
}

namespace {

Netlist build_dff(const CellDelayConfig &cfg) {
    Netlist nl("ff_dff");
    NetId d = nl.add_input("d"), clk = nl.add_input("clk");
    NetId q = nl.add_output("q");
    NetId clkb = nl.add_net("clkb");
    NetId m = nl.add_net("m", true);
    NetId mb = nl.add_net("mb");
    NetId s = nl.add_net("s", true);

    Ps tn = cfg.gate(PrimitiveKind::Not);
    Ps tt = cfg.gate(PrimitiveKind::Tgate);
    nl.add_gate("clkgen", PrimitiveKind::Not, {{"in", clk}, {"out", clkb}}, tn);
    nl.add_gate("tg_m", PrimitiveKind::Tgate,
                {{"in", d}, {"en", clkb}, {"en_b", clk}, {"out", m}}, tt);
    nl.add_gate("inv_m", PrimitiveKind::Not, {{"in", m}, {"out", mb}}, tn);
    nl.add_gate("tg_s", PrimitiveKind::Tgate,
                {{"in", mb}, {"en", clk}, {"en_b", clkb}, {"out", s}}, tt);
    nl.add_gate("inv_q", PrimitiveKind::Not, {{"in", s}, {"out", q}}, tn);
    return nl;
}

Netlist build_dtgms(const CellDelayConfig &cfg) {
    // Both clock phases come from outside; storage is dynamic.
    Netlist nl("ff_dtgms");
    NetId d = nl.add_input("d"), clk = nl.add_input("clk"), clkb = nl.add_input("clkb");
    NetId q = nl.add_output("q");
    NetId m = nl.add_net("m", true);
    NetId qi = nl.add_net("qi", true);

    Ps tc = cfg.gate(PrimitiveKind::Cinv);
    Ps tb = cfg.gate(PrimitiveKind::Buf);
    nl.add_gate("cinv_m", PrimitiveKind::Cinv,
                {{"in", d}, {"en", clkb}, {"en_b", clk}, {"out", m}}, tc);
    nl.add_gate("cinv_s", PrimitiveKind::Cinv,
                {{"in", m}, {"en", clk}, {"en_b", clkb}, {"out", qi}}, tc);
    nl.add_gate("buf_q", PrimitiveKind::Buf, {{"in", qi}, {"out", q}}, tb);
    return nl;
}

Netlist build_mtspc(const CellDelayConfig &cfg) {
    Netlist nl("ff_mtspc");
    NetId d = nl.add_input("d"), clk = nl.add_input("clk");
    NetId q = nl.add_output("q");
    NetId c0 = nl.add_net("gnd"), c1 = nl.add_net("vdd");
    NetId x = nl.add_net("x", true);
    NetId b = nl.add_net("b", true);
    NetId qi = nl.add_net("qi", true);

    Ps tc = cfg.gate(PrimitiveKind::Cinv);
    Ps tn = cfg.gate(PrimitiveKind::Not);
    nl.add_gate("tie0", PrimitiveKind::Const0, {{"out", c0}}, 0);
    nl.add_gate("tie1", PrimitiveKind::Const1, {{"out", c1}}, 0);
    // Input stage: transparent-low inverting latch (pull-down by d alone).
    nl.add_gate("cinv_x", PrimitiveKind::Cinv,
                {{"in", d}, {"en", c1}, {"en_b", clk}, {"out", x}}, tc);
    // Precharge stage with clk on both rails: charging is blocked whenever
    // the pull-down condition holds.
    nl.add_gate("cinv_b", PrimitiveKind::Cinv,
                {{"in", x}, {"en", clk}, {"en_b", clk}, {"out", b}}, tc);
    // Output latch: pull-up by b alone, pull-down gated by clk.
    nl.add_gate("cinv_q", PrimitiveKind::Cinv,
                {{"in", b}, {"en", clk}, {"en_b", c0}, {"out", qi}}, tc);
    nl.add_gate("inv_q", PrimitiveKind::Not, {{"in", qi}, {"out", q}}, tn);
    return nl;
}

Netlist build_tgms(const CellDelayConfig &cfg) {
    Netlist nl("ff_tgms");
    NetId d = nl.add_input("d"), clk = nl.add_input("clk");
    NetId q = nl.add_output("q");
    NetId clkb = nl.add_net("clkb");
    NetId m = nl.add_net("m", true);
    NetId mb = nl.add_net("mb");
    NetId s = nl.add_net("s", true);
    NetId qb = nl.add_net("qb"), fbv = nl.add_net("fbv");
    NetId c1 = nl.add_net("vdd"), en_fb = nl.add_net("en_fb");

    Ps tn = cfg.gate(PrimitiveKind::Not);
    Ps tt = cfg.gate(PrimitiveKind::Tgate);
    Ps tb = cfg.gate(PrimitiveKind::Buf);
    Ps ta = cfg.gate(PrimitiveKind::And2);
    nl.add_gate("clkgen", PrimitiveKind::Not, {{"in", clk}, {"out", clkb}}, tn);
    nl.add_gate("tg_m", PrimitiveKind::Tgate,
                {{"in", d}, {"en", clkb}, {"en_b", clk}, {"out", m}}, tt);
    nl.add_gate("inv_m", PrimitiveKind::Not, {{"in", m}, {"out", mb}}, tn);
    nl.add_gate("tg_s", PrimitiveKind::Tgate,
                {{"in", mb}, {"en", clk}, {"en_b", clkb}, {"out", s}}, tt);
    nl.add_gate("inv_q", PrimitiveKind::Not, {{"in", s}, {"out", q}}, tn);

    // Static feedback q -> m with exactly two inversions. Its enable rises
    // only after the capture has gone all the way around (tg_s, inv_q,
    // inv_fb1, inv_fb2), so the gate never passes a stale value into the
    // master node; it drops with the short AND path at the clock fall.
    nl.add_gate("inv_fb1", PrimitiveKind::Not, {{"in", q}, {"out", qb}}, tn);
    nl.add_gate("inv_fb2", PrimitiveKind::Not, {{"in", qb}, {"out", fbv}}, tn);
    nl.add_gate("tie1", PrimitiveKind::Const1, {{"out", c1}}, 0);

    Ps refresh = tt + 3 * tn;
    int k = 1;
    if (refresh > ta) k = static_cast<int>((refresh - ta + tb - 1) / tb);
    if (k < 1) k = 1;
    NetId prev = clk;
    for (int i = 1; i <= k; ++i) {
        NetId next = nl.add_net("dly" + std::to_string(i));
        nl.add_gate("fb_dly" + std::to_string(i), PrimitiveKind::Buf,
                    {{"in", prev}, {"out", next}}, tb);
        prev = next;
    }
    nl.add_gate("fb_en", PrimitiveKind::And2, {{"a", clk}, {"b", prev}, {"out", en_fb}}, ta);
    nl.add_gate("tg_fb", PrimitiveKind::Tgate,
                {{"in", fbv}, {"en", en_fb}, {"en_b", c1}, {"out", m}}, tt);
    return nl;
}

} // namespace

Netlist build_ff_structural(FlipFlopVariant variant, const CellDelayConfig &cfg) {
    cfg.check();
    switch (variant) {
    case FlipFlopVariant::Dff: return build_dff(cfg);
    case FlipFlopVariant::Dtgms: return build_dtgms(cfg);
    case FlipFlopVariant::Mtspc: return build_mtspc(cfg);
    case FlipFlopVariant::Tgms: return build_tgms(cfg);
    }
    throw Error("build_ff_structural: unknown variant");
}

OverlapOutcome overlap_stress(FlipFlopVariant variant, Ps overlap_ps,
                              const CellDelayConfig &cfg) {
    if (overlap_ps < 0) throw Error("overlap_stress: negative overlap");
    Netlist flat = flatten(build_ff_structural(variant, cfg));
    if (!validate(flat).empty()) throw Error("overlap_stress: cell failed validation");

    Ps h = 2 * slowest_path_ps(cfg);
    if (overlap_ps * 4 > h) h = overlap_ps * 4;
    bool phases = flat.has_input("clkb");

    // Two clean capture edges with d=0, then d flips mid hold phase and
    // the CLKB track glitches high while CLK is already high. No further
    // rising edge follows, so the prediction stays at the captured 0.
    Stimulus st;
    st.set(0, "d", L0);
    st.set(0, "clk", L0);
    st.set(h, "clk", L1);
    st.set(2 * h, "clk", L0);
    st.set(3 * h, "clk", L1);
    st.set(4 * h, "clk", L0);
    if (phases) {
        st.set(0, "clkb", L1);
        st.set(h, "clkb", L0);
        st.set(2 * h, "clkb", L1);
        st.set(3 * h, "clkb", L0);
        st.set(4 * h, "clkb", L1);
    }
    st.set(3 * h + h / 4, "d", L1);
    if (overlap_ps > 0 && phases) {
        st.set(3 * h + h / 2, "clkb", L1);
        st.set(3 * h + h / 2 + overlap_ps, "clkb", L0);
    }

    SimOptions opt;
    opt.until_ps = 5 * h;
    SimResult res = simulate(flat, st, opt);
    LogicValue predicted = ff_step(variant, L0, LX);
    LogicValue got = res.waveform.final_value(flat.net("q"));
    return got == predicted ? OverlapOutcome::Holds : OverlapOutcome::Corrupts;
}

} // namespace shiftsim
