// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <vector>

#include "shiftsim/check.hpp"
#include "shiftsim/json_io.hpp"
#include "shiftsim/vcd.hpp"

using namespace shiftsim;

namespace {

struct Criterion {
    int num;
    std::string name;
    double limit_s; // 0 = untimed
    std::function<void(std::ostringstream &)> body;
};

struct Failure : Error {
    using Error::Error;
};

void expect(bool ok, const std::string &what) {
    if (!ok) throw Failure(what);
}

const FlipFlopVariant kVariants[] = {FlipFlopVariant::Dff, FlipFlopVariant::Dtgms,
                                     FlipFlopVariant::Mtspc, FlipFlopVariant::Tgms};

// ---- criterion bodies ------------------------------------------------

void calibration_reproduction(std::ostringstream &msg) {
    DelayReport rep = delay_report(CellDelayConfig::defaults(), CellMode::Behavioral);
    const Ps want[] = {9000, 14000, 22000, 9000};
    expect(rep.entries.size() == 4, "expected four variants");
    for (int i = 0; i < 4; ++i) {
        const DelayEntry &e = rep.entries[i];
        expect(!e.oscillatory, std::string(variant_name(e.variant)) + " oscillated");
        expect(e.delay_ps.has_value(), std::string(variant_name(e.variant)) + " no response");
        expect(*e.delay_ps == want[i], std::string(variant_name(e.variant)) + " reported " +
                                           std::to_string(*e.delay_ps) + " ps");
    }
    msg << "dff=9 dtgms=14 mtspc=22 tgms=9 ns, exact";
}

void ranking_claim(std::ostringstream &msg) {
    DelayReport rep = delay_report(CellDelayConfig::defaults(), CellMode::Behavioral);
    auto min_set = rep.min_delay_set();
    expect(min_set.size() == 2, "min-delay set size");
    expect(min_set[0] == FlipFlopVariant::Dff && min_set[1] == FlipFlopVariant::Tgms,
           "min-delay set members");
    msg << "min-delay set = {dff, tgms}";
}

void alu_exhaustive(std::ostringstream &msg) {
    CellDelayConfig cfg = CellDelayConfig::defaults();
    Netlist flat = flatten(build_alu(cfg));
    CheckReport rep = check_alu_exhaustive(flat);
    expect(rep.cases == 2048, "case count");
    expect(rep.pass(), std::to_string(rep.failures.size()) + " gate/oracle mismatches");
    // Defining identity on the golden model the gates were checked against.
    for (int idx = 0; idx < 8; ++idx)
        for (unsigned a = 0; a < 16; ++a)
            for (unsigned b = 0; b < 16; ++b) {
                AluControl ctrl = AluControl::from_index(idx);
                AluResult r = alu_eval(ctrl, Word4::from_uint(a), Word4::from_uint(b));
                unsigned y = *alu_select_y(ctrl, Word4::from_uint(b)).to_uint();
                unsigned lhs = *r.d.to_uint() + 16u * (r.cout == L1);
                expect(lhs == a + y + (ctrl.cin ? 1u : 0u), "identity violated");
            }
    msg << "2048/2048 gate vectors equal the oracle; identity holds on all";
}

void subtract_semantics(std::ostringstream &msg) {
    for (unsigned a = 0; a < 16; ++a)
        for (unsigned b = 0; b < 16; ++b) {
            AluResult r = alu_eval(AluControl::from_index(3), Word4::from_uint(a),
                                   Word4::from_uint(b));
            expect(*r.d.to_uint() == ((a - b) & 0xfu), "difference wrong");
            expect((r.cout == L1) == (a >= b), "borrow flag wrong");
        }
    msg << "256/256 pairs: D=(A-B) mod 16, cout=1 iff A>=B";
}

// Exhaustive single-step run for one variant, chained into one long
// simulation: each case is a parallel-load preload cycle followed by the
// stepped mode cycle.
int usr_single_step_cases(FlipFlopVariant v, const CellDelayConfig &cfg) {
    Netlist flat = flatten(build_usr(v, cfg, CellMode::Structural));
    bool phases = flat.has_input("clkb");
    Ps T = settle_ps(flat);
    Ps period = 2 * T;

    struct Case {
        UsrMode mode;
        unsigned state, m;
        LogicValue sr, sl;
    };
    std::vector<Case> cases;
    for (unsigned st = 0; st < 16; ++st)
        for (int sr = 0; sr < 2; ++sr)
            for (int sl = 0; sl < 2; ++sl) {
                LogicValue vsr = sr ? L1 : L0, vsl = sl ? L1 : L0;
                for (UsrMode mode : {UsrMode::NoChange, UsrMode::ShiftRight, UsrMode::ShiftLeft})
                    cases.push_back({mode, st, 0, vsr, vsl});
                for (unsigned m = 0; m < 16; ++m)
                    cases.push_back({UsrMode::ParallelLoad, st, m, vsr, vsl});
            }

    Stimulus stim;
    stim.set(0, "clk", L0);
    if (phases) stim.set(0, "clkb", L1);
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const Case &c = cases[k];
        Ps t0 = static_cast<Ps>(2 * k) * period;     // preload cycle
        Ps t1 = t0 + period;                         // stepped cycle
        stim.set(t0, "s1", L1);
        stim.set(t0, "s0", L1);
        for (int i = 0; i < 4; ++i)
            stim.set(t0, "m" + std::to_string(i + 1), (c.state >> (3 - i)) & 1 ? L1 : L0);
        stim.set(t0, "sr_in", L0);
        stim.set(t0, "sl_in", L0);
        stim.set(t1, "s1", (static_cast<int>(c.mode) & 2) ? L1 : L0);
        stim.set(t1, "s0", (static_cast<int>(c.mode) & 1) ? L1 : L0);
        for (int i = 0; i < 4; ++i)
            stim.set(t1, "m" + std::to_string(i + 1), (c.m >> (3 - i)) & 1 ? L1 : L0);
        stim.set(t1, "sr_in", c.sr);
        stim.set(t1, "sl_in", c.sl);
        for (Ps t : {t0, t1}) {
            stim.set(t + T, "clk", L1);
            stim.set(t + period, "clk", L0);
            if (phases) {
                stim.set(t + T, "clkb", L0);
                stim.set(t + period, "clkb", L1);
            }
        }
    }
    SimOptions opt;
    opt.until_ps = static_cast<Ps>(2 * cases.size()) * period;
    opt.max_events = 100'000'000;
    SimResult res = simulate(flat, stim, opt);

    for (std::size_t k = 0; k < cases.size(); ++k) {
        const Case &c = cases[k];
        UsrState golden = usr_step({Word4::from_uint(c.state)}, c.mode, c.sr, c.sl,
                                   Word4::from_uint(c.m));
        Ps sample = static_cast<Ps>(2 * k + 2) * period - 1;
        Word4 got;
        for (int i = 0; i < 4; ++i)
            got[i] = res.waveform.value_at(flat.net("f" + std::to_string(i + 1)), sample);
        if (got != golden.f)
            throw Failure(std::string(variant_name(v)) + " case " + std::to_string(k) +
                          " mode=" + mode_name(c.mode) + ": expected " + golden.f.str() +
                          ", got " + got.str());
    }
    return static_cast<int>(cases.size());
}

void usr_mode_semantics(std::ostringstream &msg) {
    CellDelayConfig cfg = CellDelayConfig::defaults();
    int total = 0;
    for (auto v : kVariants) total += usr_single_step_cases(v, cfg);
    msg << total << " structural single-step cases across all four variants";
}

void system_composition(std::ostringstream &msg) {
    CellDelayConfig cfg = CellDelayConfig::defaults();
    Netlist flat = flatten(build_system(FlipFlopVariant::Dff, cfg, CellMode::Structural));
    CheckReport rep = check_system_random(flat, 2026, 1000);
    expect(rep.cases == 1000, "case count");
    expect(rep.pass(), std::to_string(rep.failures.size()) + " trace mismatches");
    msg << "1000-step seeded run matches the golden cycle model";
}

LogicValue capture_via_kernel(const Netlist &flat, bool phases, Ps h, LogicValue d,
                              LogicValue q_prev, bool edge) {
    Stimulus st;
    st.set(0, "clk", L0);
    st.set(0, "d", q_prev);
    st.set(h, "clk", L1);
    st.set(2 * h, "clk", L0);
    st.set(2 * h + h / 2, "d", d);
    if (edge) {
        st.set(3 * h, "clk", L1);
        st.set(4 * h, "clk", L0);
    }
    if (phases) {
        st.set(0, "clkb", L1);
        st.set(h, "clkb", L0);
        st.set(2 * h, "clkb", L1);
        if (edge) {
            st.set(3 * h, "clkb", L0);
            st.set(4 * h, "clkb", L1);
        }
    }
    SimOptions opt;
    opt.until_ps = 5 * h;
    SimResult res = simulate(flat, st, opt);
    return res.waveform.final_value(flat.net("q"));
}

void ff_truth_table(std::ostringstream &msg) {
    CellDelayConfig cfg = CellDelayConfig::defaults();
    int scenarios = 0;
    for (auto v : kVariants) {
        Ps h = 2 * slowest_path_ps(cfg);
        Netlist structural = flatten(build_ff_structural(v, cfg));
        Netlist behavioral("ff_behav");
        {
            NetId d = behavioral.add_input("d");
            NetId clk = behavioral.add_input("clk");
            NetId q = behavioral.add_output("q");
            behavioral.add_ff("u", v, {{"d", d}, {"clk", clk}, {"q", q}}, cfg.clk_to_q(v));
        }
        for (const Netlist *cell : {&behavioral, &structural}) {
            bool phases = cell->has_input("clkb");
            for (LogicValue d : {L0, L1})
                for (LogicValue q_prev : {L0, L1})
                    for (bool edge : {false, true}) {
                        LogicValue want = edge ? ff_step(v, d, q_prev) : q_prev;
                        LogicValue got = capture_via_kernel(*cell, phases, h, d, q_prev, edge);
                        if (got != want)
                            throw Failure(std::string(variant_name(v)) +
                                          (cell == &behavioral ? " behavioral" : " structural") +
                                          " d=" + to_char(d) + " q=" + to_char(q_prev) +
                                          (edge ? " edge" : " no-edge") + ": expected " +
                                          to_char(want) + ", got " + to_char(got));
                        ++scenarios;
                    }
        }
    }
    msg << scenarios << " scenarios (4 variants x 2 models x 8)";
}

void clock_overlap(std::ostringstream &msg) {
    CellDelayConfig cfg = CellDelayConfig::defaults();
    Ps ext = 4 * cfg.gate(PrimitiveKind::Cinv); // well past two gate delays
    expect(overlap_stress(FlipFlopVariant::Dtgms, ext, cfg) == OverlapOutcome::Corrupts,
           "dtgms must corrupt under extended overlap");
    expect(overlap_stress(FlipFlopVariant::Tgms, ext, cfg) == OverlapOutcome::Holds,
           "tgms must hold");
    expect(overlap_stress(FlipFlopVariant::Dff, ext, cfg) == OverlapOutcome::Holds,
           "dff must hold");
    for (auto v : kVariants)
        expect(overlap_stress(v, 0, cfg) == OverlapOutcome::Holds,
               std::string(variant_name(v)) + " must hold at zero overlap");
    msg << "dtgms corrupts at 4x gate delay; dff/tgms hold; all hold at zero";
}

void kernel_properties(std::ostringstream &msg) {
    CellDelayConfig cfg = CellDelayConfig::defaults();

    // Determinism: byte-identical VCD across repeated runs.
    Netlist usr = flatten(build_usr(FlipFlopVariant::Tgms, cfg, CellMode::Structural));
    Stimulus st;
    st.set(0, "clk", L0);
    st.set(0, "s1", L1);
    st.set(0, "s0", L1);
    st.set(0, "sr_in", L1);
    st.set(0, "sl_in", L0);
    for (int i = 1; i <= 4; ++i) st.set(0, "m" + std::to_string(i), i % 2 ? L1 : L0);
    st.set(200000, "s0", L0); // shift-left phase
    st.clock = ClockSpec{"clk", 80000, 40000, 0.5};
    SimOptions opt;
    // The last expanded clock edge lands at 600 ns; leave settle room so
    // the run ends in quiescence rather than at the horizon.
    opt.until_ps = 617000;
    SimResult r1 = simulate(usr, st, opt);
    SimResult r2 = simulate(usr, st, opt);
    expect(write_vcd(r1.waveform, usr) == write_vcd(r2.waveform, usr), "nondeterministic vcd");

    // Causality: a lone inverter responds exactly one delay after its cause.
    Netlist inv("inv");
    NetId in = inv.add_input("in");
    NetId out = inv.add_output("out");
    inv.add_gate("u", PrimitiveKind::Not, {{"in", in}, {"out", out}}, 2000);
    Stimulus si;
    si.set(0, "in", L0);
    si.set(10000, "in", L1);
    SimOptions oi;
    oi.until_ps = 20000;
    SimResult ri = simulate(inv, si, oi);
    expect(ri.waveform.changes[out].size() == 2 &&
               ri.waveform.changes[out][1].t_ps == 12000,
           "causality/delay broken");
    for (const Waveform *w : {&ri.waveform, &r1.waveform})
        for (NetId n = 0; n < w->changes.size(); ++n) {
            const auto &ch = w->changes[n];
            for (std::size_t i = 0; i < ch.size(); ++i) {
                expect(ch[i].t_ps >= 0, "event before time zero");
                LogicValue prev = i ? ch[i - 1].v : w->initial[n];
                if (i) expect(ch[i - 1].t_ps < ch[i].t_ps, "waveform not strictly ordered");
                expect(prev != ch[i].v, "consecutive equal values recorded");
            }
        }

    // Inertial pulse rejection.
    Netlist nand2("nand2");
    NetId a = nand2.add_input("a");
    NetId b = nand2.add_input("b");
    NetId y = nand2.add_output("y");
    nand2.add_gate("u", PrimitiveKind::Nand2, {{"a", a}, {"b", b}, {"out", y}}, 3000);
    Stimulus sp;
    sp.set(0, "a", L0);
    sp.set(0, "b", L1);
    sp.set(10000, "a", L1);
    sp.set(11000, "a", L0);
    SimOptions op;
    op.until_ps = 30000;
    SimResult rp = simulate(nand2, sp, op);
    expect(rp.waveform.changes[y].size() == 1, "short pulse not rejected");

    // Hierarchical vs flattened equivalence on the ports.
    Netlist hier = build_usr(FlipFlopVariant::Dff, cfg, CellMode::Structural);
    SimResult rh = simulate(flatten(hier), st, opt);
    SimResult rf = simulate(flatten(flatten(hier)), st, opt);
    std::vector<std::string> ports = {"f1", "f2", "f3", "f4"};
    for (const auto &d : diff_waveforms(rh.waveform, rf.waveform, ports))
        expect(!d.first_divergence, "hierarchy/flat divergence on " + d.net);

    // Quiescence soundness.
    expect(r1.quiescent && verify_quiescent(usr, r1), "not quiescent after settling");

    msg << "determinism, causality, inertial rejection, flatten equivalence, quiescence";
}

void mutation_sensitivity(std::ostringstream &msg) {
    CellDelayConfig cfg = CellDelayConfig::defaults();

    Netlist alu = build_alu(cfg);
    NetId cut = alu.add_net("cut_carry");
    for (auto &c : alu.components)
        if (c.id == "bit3.fa") c.conn["cin"] = cut;
    CheckReport broken_alu = check_alu_exhaustive(flatten(alu));
    expect(!broken_alu.pass(), "cut carry wire went unnoticed");

    Netlist usr = build_usr(FlipFlopVariant::Dff, cfg, CellMode::Structural);
    for (auto &c : usr.components)
        if (c.id.find(".mux") != std::string::npos) std::swap(c.conn["s1"], c.conn["s0"]);
    CheckReport broken_usr = check_usr_random(flatten(usr), 42, 100);
    expect(!broken_usr.pass(), "swapped selects went unnoticed");

    msg << "cut carry: " << broken_alu.failures.size() << " failing vectors; swapped selects: "
        << broken_usr.failures.size() << " failing steps";
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "reference delay calibration reproduced exactly", 1.0, calibration_reproduction},
        {2, "ranking claim: minimum-delay set is {dff, tgms}", 1.0, ranking_claim},
        {3, "ALU exhaustive equivalence, 2048 vectors + identity", 5.0, alu_exhaustive},
        {4, "subtract semantics over all 256 pairs", 1.0, subtract_semantics},
        {5, "USR mode semantics, exhaustive single-step, all variants", 10.0,
         usr_mode_semantics},
        {6, "system composition, 1000-step random trace", 10.0, system_composition},
        {7, "flip-flop truth table, behavioral and structural", 0.0, ff_truth_table},
        {8, "clock-overlap property", 0.0, clock_overlap},
        {9, "kernel properties", 0.0, kernel_properties},
        {10, "mutation sensitivity", 0.0, mutation_sensitivity},
    };

    int failed = 0;
    for (const auto &c : criteria) {
        std::ostringstream msg;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string why;
        try {
            c.body(msg);
        } catch (const std::exception &e) {
            ok = false;
            why = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && c.limit_s > 0 && secs > c.limit_s) {
            ok = false;
            why = "exceeded the " + std::to_string(c.limit_s) + " s budget";
        }
        if (ok) {
            std::printf("[PASS] criterion %2d: %s — %s (%.2f s)\n", c.num, c.name.c_str(),
                        msg.str().c_str(), secs);
        } else {
            std::printf("[FAIL] criterion %2d: %s — %s (%.2f s)\n", c.num, c.name.c_str(),
                        why.c_str(), secs);
            ++failed;
        }
    }
    if (failed) std::printf("%d criterion(s) failed\n", failed);
    return failed ? 1 : 0;
}
