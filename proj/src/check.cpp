#include "shiftsim/check.hpp"

#include <algorithm>

namespace shiftsim {

namespace {

void require_ports(const Netlist &flat, std::span<const std::string> ins,
                   std::span<const std::string> outs, const char *what) {
    auto fail = [&] { throw Error(std::string("not ") + what + " interface"); };
    for (const auto &p : ins)
        if (!flat.has_input(p)) fail();
    for (const auto &p : outs) {
        NetId n = flat.find_net(p);
        if (n == kNoNet) fail();
        if (std::find(flat.outputs.begin(), flat.outputs.end(), n) == flat.outputs.end()) fail();
    }
}

std::string ctrl_str(AluControl c) {
    return std::string("ctrl=(") + (c.s1 ? "1" : "0") + "," + (c.s0 ? "1" : "0") + "," +
           (c.cin ? "1" : "0") + ") op=" + c.op_name();
}

void set_word(Stimulus &st, Ps t, const char *prefix, Word4 w) {
    for (int i = 0; i < 4; ++i)
        st.set(t, std::string(prefix) + std::to_string(i + 1), w[i]);
}

Word4 read_word(const Waveform &w, const Netlist &nl, const char *prefix, Ps t) {
    Word4 out;
    for (int i = 0; i < 4; ++i)
        out[i] = w.value_at(nl.net(std::string(prefix) + std::to_string(i + 1)), t);
    return out;
}

} // namespace

Ps estimate_path_ps(const Netlist &flat) {
    std::vector<std::vector<std::uint32_t>> readers(flat.nets.size());
    for (std::uint32_t ci = 0; ci < flat.components.size(); ++ci) {
        const auto &c = flat.components[ci];
        if (c.kind == ComponentKind::Primitive) {
            for (const char *p : primitive_inputs(c.prim)) {
                NetId n = c.port(p);
                if (n != kNoNet) readers[n].push_back(ci);
            }
        } else if (c.kind == ComponentKind::BehavioralFf) {
            for (const char *p : {"d", "clk"}) {
                NetId n = c.port(p);
                if (n != kNoNet) readers[n].push_back(ci);
            }
        }
    }
    std::vector<std::uint8_t> state(flat.components.size(), 0); // 0 new, 1 stack, 2 done
    std::vector<Ps> memo(flat.components.size(), 0);
    auto dfs = [&](auto &&self, std::uint32_t ci) -> Ps {
        if (state[ci] == 1) return 0; // feedback edge: cut
        if (state[ci] == 2) return memo[ci];
        state[ci] = 1;
        const auto &c = flat.components[ci];
        NetId out = c.kind == ComponentKind::BehavioralFf ? c.port("q") : c.port("out");
        Ps tail = 0;
        if (out != kNoNet)
            for (std::uint32_t next : readers[out]) tail = std::max(tail, self(self, next));
        memo[ci] = c.delay_ps + tail;
        state[ci] = 2;
        return memo[ci];
    };
    Ps best = 0;
    for (std::uint32_t ci = 0; ci < flat.components.size(); ++ci)
        best = std::max(best, dfs(dfs, ci));
    return best;
}

Ps settle_ps(const Netlist &flat) {
    Ps p = 2 * estimate_path_ps(flat);
    Ps ns = (p + kNsToPs - 1) / kNsToPs; // round up to whole ns
    return std::max<Ps>(4, ns) * kNsToPs;
}

CheckReport check_alu_exhaustive(const Netlist &flat) {
    if (!flat.is_flat()) throw Error("check_alu_exhaustive: netlist is not flattened");
    const std::string ins[] = {"s1", "s0", "cin", "a1", "a2", "a3", "a4",
                               "b1", "b2", "b3", "b4"};
    const std::string outs[] = {"d1", "d2", "d3", "d4", "cout"};
    require_ports(flat, ins, outs, "an ALU");

    Ps T = settle_ps(flat);
    Stimulus st;
    for (int k = 0; k < 2048; ++k) {
        AluControl ctrl = AluControl::from_index(k >> 8);
        Word4 a = Word4::from_uint(static_cast<unsigned>((k >> 4) & 15));
        Word4 b = Word4::from_uint(static_cast<unsigned>(k & 15));
        Ps t = static_cast<Ps>(k) * T;
        st.set(t, "s1", ctrl.s1 ? L1 : L0);
        st.set(t, "s0", ctrl.s0 ? L1 : L0);
        st.set(t, "cin", ctrl.cin ? L1 : L0);
        set_word(st, t, "a", a);
        set_word(st, t, "b", b);
    }
    SimOptions opt;
    opt.until_ps = 2048 * T;
    SimResult res = simulate(flat, st, opt);

    CheckReport rep;
    rep.circuit = flat.name;
    rep.cases = 2048;
    NetId cout_net = flat.net("cout");
    for (int k = 0; k < 2048; ++k) {
        AluControl ctrl = AluControl::from_index(k >> 8);
        Word4 a = Word4::from_uint(static_cast<unsigned>((k >> 4) & 15));
        Word4 b = Word4::from_uint(static_cast<unsigned>(k & 15));
        Ps sample = static_cast<Ps>(k + 1) * T - 1;
        Word4 d = read_word(res.waveform, flat, "d", sample);
        LogicValue cout = res.waveform.value_at(cout_net, sample);
        AluResult want = alu_eval(ctrl, a, b);
        if (d != want.d || cout != want.cout) {
            rep.failures.push_back({static_cast<std::uint64_t>(k),
                                    ctrl_str(ctrl) + " a=" + a.str() + " b=" + b.str(),
                                    "d=" + want.d.str() + " cout=" + std::string(1, to_char(want.cout)),
                                    "d=" + d.str() + " cout=" + std::string(1, to_char(cout))});
        }
    }
    return rep;
}

AluResult simulate_alu_vector(const Netlist &flat, AluControl ctrl, Word4 a, Word4 b) {
    Ps T = settle_ps(flat);
    Stimulus st;
    st.set(0, "s1", ctrl.s1 ? L1 : L0);
    st.set(0, "s0", ctrl.s0 ? L1 : L0);
    st.set(0, "cin", ctrl.cin ? L1 : L0);
    set_word(st, 0, "a", a);
    set_word(st, 0, "b", b);
    SimOptions opt;
    opt.until_ps = 2 * T;
    SimResult res = simulate(flat, st, opt);
    AluResult out;
    out.d = read_word(res.waveform, flat, "d", 2 * T);
    out.cout = res.waveform.final_value(flat.net("cout"));
    return out;
}

CheckReport check_usr_random(const Netlist &flat, std::uint64_t seed, int steps) {
    if (steps < 1) throw Error("check_usr_random: steps must be >= 1");
    if (!flat.is_flat()) throw Error("check_usr_random: netlist is not flattened");
    const std::string ins[] = {"s1", "s0", "sr_in", "sl_in", "m1", "m2", "m3", "m4", "clk"};
    const std::string outs[] = {"f1", "f2", "f3", "f4"};
    require_ports(flat, ins, outs, "a USR");
    bool phases = flat.has_input("clkb");

    Ps T = settle_ps(flat);
    Ps period = 2 * T;
    SplitMix64 rng(seed);

    struct Cycle {
        UsrMode mode;
        LogicValue sr, sl;
        Word4 m;
    };
    std::vector<Cycle> cycles;
    Word4 w0 = Word4::from_uint(rng.bits(4));
    cycles.push_back({UsrMode::ParallelLoad, L0, L0, w0}); // preload flushes X
    for (int k = 0; k < steps; ++k) {
        Cycle c;
        c.mode = static_cast<UsrMode>(rng.bits(2));
        c.sr = rng.bits(1) ? L1 : L0;
        c.sl = rng.bits(1) ? L1 : L0;
        c.m = Word4::from_uint(rng.bits(4));
        cycles.push_back(c);
    }

    Stimulus st;
    st.set(0, "clk", L0);
    if (phases) st.set(0, "clkb", L1);
    for (std::size_t k = 0; k < cycles.size(); ++k) {
        Ps t = static_cast<Ps>(k) * period;
        const Cycle &c = cycles[k];
        st.set(t, "s1", (static_cast<int>(c.mode) & 2) ? L1 : L0);
        st.set(t, "s0", (static_cast<int>(c.mode) & 1) ? L1 : L0);
        st.set(t, "sr_in", c.sr);
        st.set(t, "sl_in", c.sl);
        set_word(st, t, "m", c.m);
        st.set(t + T, "clk", L1);
        st.set(t + period, "clk", L0);
        if (phases) {
            st.set(t + T, "clkb", L0);
            st.set(t + period, "clkb", L1);
        }
    }
    SimOptions opt;
    opt.until_ps = static_cast<Ps>(cycles.size()) * period;
    SimResult res = simulate(flat, st, opt);

    CheckReport rep;
    rep.circuit = flat.name;
    rep.cases = cycles.size();
    UsrState golden;
    for (std::size_t k = 0; k < cycles.size(); ++k) {
        const Cycle &c = cycles[k];
        golden = usr_step(golden, c.mode, c.sr, c.sl, c.m);
        Ps sample = static_cast<Ps>(k + 1) * period - 1;
        Word4 got = read_word(res.waveform, flat, "f", sample);
        if (got != golden.f) {
            rep.failures.push_back({k,
                                    std::string("step=") + std::to_string(k) + " mode=" +
                                        mode_name(c.mode) + " sr=" + to_char(c.sr) +
                                        " sl=" + to_char(c.sl) + " m=" + c.m.str(),
                                    "f=" + golden.f.str(), "f=" + got.str()});
        }
    }
    return rep;
}

CheckReport check_system_random(const Netlist &flat, std::uint64_t seed, int steps) {
    if (steps < 1) throw Error("check_system_random: steps must be >= 1");
    if (!flat.is_flat()) throw Error("check_system_random: netlist is not flattened");
    const std::string ins[] = {"alu_s1", "alu_s0", "cin",    "b1", "b2", "b3", "b4",
                               "usr_s1", "usr_s0", "sr_in", "sl_in", "clk"};
    const std::string outs[] = {"f1", "f2", "f3", "f4", "cout"};
    require_ports(flat, ins, outs, "a system");
    bool phases = flat.has_input("clkb");

    Ps T = settle_ps(flat);
    Ps period = 2 * T;
    SplitMix64 rng(seed);

    struct Cycle {
        AluControl ctrl;
        UsrMode mode;
        LogicValue sr, sl;
        Word4 b;
    };
    std::vector<Cycle> cycles;
    // Serial preload: the register is only writable through the ALU, so a
    // known word is shifted in from the right.
    Word4 w0 = Word4::from_uint(rng.bits(4));
    for (int j = 0; j < 4; ++j)
        cycles.push_back({AluControl{}, UsrMode::ShiftRight, w0[3 - j], L0, Word4::from_uint(0)});
    for (int k = 0; k < steps; ++k) {
        Cycle c;
        c.ctrl = AluControl::from_index(static_cast<int>(rng.bits(3)));
        c.mode = static_cast<UsrMode>(rng.bits(2));
        c.sr = rng.bits(1) ? L1 : L0;
        c.sl = rng.bits(1) ? L1 : L0;
        c.b = Word4::from_uint(rng.bits(4));
        cycles.push_back(c);
    }

    Stimulus st;
    st.set(0, "clk", L0);
    if (phases) st.set(0, "clkb", L1);
    for (std::size_t k = 0; k < cycles.size(); ++k) {
        Ps t = static_cast<Ps>(k) * period;
        const Cycle &c = cycles[k];
        st.set(t, "alu_s1", c.ctrl.s1 ? L1 : L0);
        st.set(t, "alu_s0", c.ctrl.s0 ? L1 : L0);
        st.set(t, "cin", c.ctrl.cin ? L1 : L0);
        st.set(t, "usr_s1", (static_cast<int>(c.mode) & 2) ? L1 : L0);
        st.set(t, "usr_s0", (static_cast<int>(c.mode) & 1) ? L1 : L0);
        st.set(t, "sr_in", c.sr);
        st.set(t, "sl_in", c.sl);
        set_word(st, t, "b", c.b);
        st.set(t + T, "clk", L1);
        st.set(t + period, "clk", L0);
        if (phases) {
            st.set(t + T, "clkb", L0);
            st.set(t + period, "clkb", L1);
        }
    }
    SimOptions opt;
    opt.until_ps = static_cast<Ps>(cycles.size()) * period;
    SimResult res = simulate(flat, st, opt);

    CheckReport rep;
    rep.circuit = flat.name;
    rep.cases = static_cast<std::uint64_t>(steps);
    SystemState golden;
    NetId cout_net = flat.net("cout");
    for (std::size_t k = 0; k < cycles.size(); ++k) {
        const Cycle &c = cycles[k];
        golden.operand_b = c.b;
        SystemState before = golden;
        golden = system_cycle(golden, c.ctrl, c.mode, c.sr, c.sl);
        if (k < 4) continue; // preload cycles are plumbing, not cases
        Ps t = static_cast<Ps>(k) * period;
        // cout reflects the pre-edge register, so sample it before the edge.
        LogicValue cout_got = res.waveform.value_at(cout_net, t + T - 1);
        AluResult pre = alu_eval(c.ctrl, before.reg.f, c.b);
        Word4 got = read_word(res.waveform, flat, "f", t + period - 1);
        if (got != golden.reg.f || cout_got != pre.cout) {
            rep.failures.push_back(
                {k,
                 std::string("cycle=") + std::to_string(k) + " " + ctrl_str(c.ctrl) +
                     " mode=" + mode_name(c.mode) + " sr=" + to_char(c.sr) + " sl=" +
                     to_char(c.sl) + " b=" + c.b.str() + " reg_before=" + before.reg.f.str(),
                 "f=" + golden.reg.f.str() + " cout=" + std::string(1, to_char(pre.cout)),
                 "f=" + got.str() + " cout=" + std::string(1, to_char(cout_got))});
        }
    }
    return rep;
}

DelayReport delay_report(const CellDelayConfig &cfg, CellMode mode) {
    cfg.check();
    DelayReport rep;
    CellDelayConfig shipped = CellDelayConfig::defaults();
    for (auto v : {FlipFlopVariant::Dff, FlipFlopVariant::Dtgms, FlipFlopVariant::Mtspc,
                   FlipFlopVariant::Tgms}) {
        DelayEntry entry;
        entry.variant = v;
        entry.reference_ps = shipped.clk_to_q(v);
        Netlist flat = flatten(build_usr(v, cfg, mode));
        if (!validate(flat).empty()) throw Error("delay_report: USR failed validation");
        bool phases = flat.has_input("clkb");

        Ps T = settle_ps(flat);
        Stimulus st;
        st.set(0, "clk", L0);
        st.set(0, "s1", L1);
        st.set(0, "s0", L1); // parallel load
        st.set(0, "sr_in", L0);
        st.set(0, "sl_in", L0);
        set_word(st, 0, "m", Word4::from_uint(0x5));
        st.set(T, "clk", L1);
        st.set(2 * T, "clk", L0);
        set_word(st, 2 * T + T / 2, "m", Word4::from_uint(0xa)); // every bit flips
        st.set(3 * T, "clk", L1);
        st.set(4 * T, "clk", L0);
        if (phases)
            for (int i = 0; i <= 4; ++i) st.set(i * T, "clkb", (i % 2) ? L0 : L1);

        SimOptions opt;
        opt.until_ps = 5 * T;
        try {
            SimResult res = simulate(flat, st, opt);
            NetId clk = flat.net("clk");
            std::optional<Ps> worst;
            for (int i = 0; i < 4; ++i) {
                auto d = measure_delay(res.waveform, clk, 3 * T,
                                       flat.net("f" + std::to_string(i + 1)));
                if (d && (!worst || *d > *worst)) worst = *d;
            }
            entry.delay_ps = worst;
        } catch (const OscillationError &) {
            entry.oscillatory = true;
        }
        rep.entries.push_back(entry);
    }
    return rep;
}

std::vector<FlipFlopVariant> DelayReport::min_delay_set() const {
    std::optional<Ps> best;
    for (const auto &e : entries)
        if (!e.oscillatory && e.delay_ps && (!best || *e.delay_ps < *best)) best = *e.delay_ps;
    std::vector<FlipFlopVariant> out;
    if (!best) return out;
    for (const auto &e : entries)
        if (!e.oscillatory && e.delay_ps == best) out.push_back(e.variant);
    return out;
}

std::vector<WaveDiff> diff_waveforms(const Waveform &a, const Waveform &b,
                                     std::span<const std::string> nets) {
    std::vector<WaveDiff> out;
    for (const auto &name : nets) {
        auto ia = a.find(name), ib = b.find(name);
        if (!ia || !ib) throw Error("diff_waveforms: unknown net '" + name + "'");
        WaveDiff d;
        d.net = name;
        LogicValue va = a.initial[*ia], vb = b.initial[*ib];
        if (va != vb) {
            d.first_divergence = {0, va, vb};
        } else {
            const auto &ca = a.changes[*ia];
            const auto &cb = b.changes[*ib];
            std::size_t i = 0, j = 0;
            while (i < ca.size() || j < cb.size()) {
                Ps t;
                if (j >= cb.size() || (i < ca.size() && ca[i].t_ps <= cb[j].t_ps))
                    t = ca[i].t_ps;
                else
                    t = cb[j].t_ps;
                while (i < ca.size() && ca[i].t_ps == t) va = ca[i++].v;
                while (j < cb.size() && cb[j].t_ps == t) vb = cb[j++].v;
                if (va != vb) {
                    d.first_divergence = {t, va, vb};
                    break;
                }
            }
        }
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace shiftsim
