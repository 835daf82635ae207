#include <doctest.h>

#include "shiftsim/check.hpp"
#include "shiftsim/json_io.hpp"
#include "shiftsim/vcd.hpp"

using namespace shiftsim;

namespace {
const std::string kDataDir = std::string(SHIFTSIM_SOURCE_DIR) + "/data/";
const std::string kFixtureDir = std::string(SHIFTSIM_SOURCE_DIR) + "/tests/data/";
}

TEST_CASE("netlist serialization is a fixed point") {
    CellDelayConfig cfg = CellDelayConfig::defaults();

    SUBCASE("hierarchical") {
        Netlist alu = build_alu(cfg);
        std::string s1 = serialize_netlist(alu);
        Netlist back = parse_netlist(s1);
        CHECK(back == alu);
        CHECK(serialize_netlist(back) == s1);
    }
    SUBCASE("flattened") {
        Netlist flat = flatten(build_usr(FlipFlopVariant::Dtgms, cfg, CellMode::Structural));
        std::string s1 = serialize_netlist(flat);
        Netlist back = parse_netlist(s1);
        CHECK(back == flat);
        CHECK(serialize_netlist(back) == s1);
    }
    SUBCASE("nested hierarchy") {
        Netlist sys = build_system(FlipFlopVariant::Tgms, cfg, CellMode::Behavioral);
        std::string s1 = serialize_netlist(sys);
        Netlist back = parse_netlist(s1);
        CHECK(back == sys);
        CHECK(serialize_netlist(back) == s1);
    }
}

TEST_CASE("netlist schema errors carry context") {
    CHECK_THROWS_AS(parse_netlist("not json at all"), Error);

    std::string unknown_kind = R"({
      "format": 1, "name": "t",
      "ports": {"in": ["a"], "out": ["y"]},
      "nets": [{"name": "a", "resolved": false}, {"name": "y", "resolved": false}],
      "components": [{"id": "g", "kind": "NAND9", "conn": {"a": "a", "b": "a", "out": "y"},
                      "delay_ps": 1000}]
    })";
    CHECK_THROWS_WITH_AS(parse_netlist(unknown_kind),
                         doctest::Contains("unknown kind 'NAND9'"), Error);

    std::string missing_net = R"({
      "format": 1, "name": "t",
      "ports": {"in": ["a"], "out": ["y"]},
      "nets": [{"name": "a", "resolved": false}, {"name": "y", "resolved": false}],
      "components": [{"id": "g", "kind": "not", "conn": {"in": "ghost", "out": "y"},
                      "delay_ps": 1000}]
    })";
    CHECK_THROWS_WITH_AS(parse_netlist(missing_net),
                         doctest::Contains("port bound to missing net"), Error);

    std::string unbound = R"({
      "format": 1, "name": "t",
      "ports": {"in": ["a"], "out": ["y"]},
      "nets": [{"name": "a", "resolved": false}, {"name": "y", "resolved": false}],
      "components": [{"id": "g", "kind": "not", "conn": {"out": "y"}, "delay_ps": 1000}]
    })";
    CHECK_THROWS_WITH_AS(parse_netlist(unbound), doctest::Contains("unbound-port"), Error);
}

TEST_CASE("stimulus parsing") {
    SUBCASE("bare array form") {
        Stimulus st = parse_stimulus(
            R"([{"t_ns":0,"port":"clk","v":"0"},{"t_ns":5,"port":"clk","v":"1"}])");
        REQUIRE(st.events.size() == 2);
        CHECK(st.events[0].t_ps == 0);
        CHECK(st.events[1].t_ps == 5000);
        CHECK(st.events[1].v == L1);
        CHECK(!st.clock);
    }
    SUBCASE("clock element") {
        Stimulus st = parse_stimulus(
            R"([{"clock": {"port":"clk","period_ns":10,"start_ns":0}}])");
        REQUIRE(st.clock);
        CHECK(st.clock->period_ps == 10000);
        CHECK(st.clock->duty == 0.5);
    }
    SUBCASE("object form with format") {
        Stimulus st = parse_stimulus(
            R"({"format":1,"events":[{"t_ns":1.5,"port":"a","v":"x"}],
                "clock":{"port":"clk","period_ns":4}})");
        REQUIRE(st.events.size() == 1);
        CHECK(st.events[0].t_ps == 1500);
        CHECK(st.events[0].v == LX);
        REQUIRE(st.clock);
    }
    SUBCASE("unsorted events are accepted and sorted") {
        Stimulus st = parse_stimulus(
            R"([{"t_ns":7,"port":"a","v":"1"},{"t_ns":2,"port":"a","v":"0"}])");
        CHECK(st.events[0].t_ps == 2000);
        CHECK(st.events[1].t_ps == 7000);
    }
    SUBCASE("value domain is 0/1/x/z") {
        CHECK_THROWS_WITH_AS(parse_stimulus(R"([{"t_ns":0,"port":"a","v":"q"}])"),
                             doctest::Contains("0/1/x/z"), Error);
    }
    SUBCASE("round trip") {
        Stimulus st;
        st.set(0, "clk", L0);
        st.set(2500, "d", LX);
        st.clock = ClockSpec{"clk", 10000, 5000, 0.5};
        std::string s = serialize_stimulus(st);
        Stimulus back = parse_stimulus(s);
        CHECK(serialize_stimulus(back) == s);
    }
}

TEST_CASE("clock expansion is deterministic arithmetic") {
    Netlist nl("clkprobe");
    NetId clk = nl.add_input("clk");
    NetId y = nl.add_output("y");
    nl.add_gate("b", PrimitiveKind::Buf, {{"in", clk}, {"out", y}}, 1);

    Stimulus st;
    st.clock = ClockSpec{"clk", 10000, 0, 0.5};
    SimOptions opt;
    opt.until_ps = 35000;
    SimResult res = simulate(nl, st, opt);

    const auto &ch = res.waveform.changes[clk];
    REQUIRE(ch.size() == 8); // edges at 0,5,10,...,35 ns
    for (std::size_t i = 0; i < ch.size(); ++i) {
        CHECK(ch[i].t_ps == static_cast<Ps>(i) * 5000);
        CHECK(ch[i].v == (i % 2 == 0 ? L1 : L0));
    }
}

TEST_CASE("delay config files") {
    SUBCASE("round trip") {
        std::string s = serialize_delay_config(CellDelayConfig::defaults());
        CellDelayConfig back = parse_delay_config(s);
        CHECK(back.clk_to_q_ps == CellDelayConfig::defaults().clk_to_q_ps);
        CHECK(back.gate_ps == CellDelayConfig::defaults().gate_ps);
        CHECK(serialize_delay_config(back) == s);
    }
    SUBCASE("shipped default file matches the built-in calibration") {
        CellDelayConfig cfg = parse_delay_config(read_file(kDataDir + "delays_default.json"));
        CHECK(cfg.clk_to_q_ps == CellDelayConfig::defaults().clk_to_q_ps);
        CHECK(cfg.gate_ps == CellDelayConfig::defaults().gate_ps);
    }
    SUBCASE("shipped structural file matches the built-in calibration") {
        CellDelayConfig cfg =
            parse_delay_config(read_file(kDataDir + "delays_structural.json"));
        CHECK(cfg.clk_to_q_ps == CellDelayConfig::structural_calibrated().clk_to_q_ps);
        CHECK(cfg.gate_ps == CellDelayConfig::structural_calibrated().gate_ps);
    }
    SUBCASE("zero delays are rejected") {
        CHECK_THROWS_AS(
            parse_delay_config(
                R"({"clk_to_q_ns":{"dff":0,"dtgms":14,"mtspc":22,"tgms":9},
                    "gate_ns":{"not":1,"buf":1,"and2":1,"nand2":1,"or2":1,"nor2":1,
                               "xor2":1,"tgate":1,"cinv":1}})"),
            Error);
        CHECK_THROWS_WITH_AS(
            parse_delay_config(
                R"({"clk_to_q_ns":{"dff":9,"dtgms":14,"mtspc":22,"tgms":9},
                    "gate_ns":{"not":1,"buf":1,"and2":1,"nand2":1,"or2":1,"nor2":1,
                               "xor2":1,"tgate":1,"cinv":1,"nand9":1}})"),
            doctest::Contains("unknown gate kind"), Error);
    }
}

TEST_CASE("vcd output") {
    Netlist nl("g");
    NetId in = nl.add_input("in");
    NetId out = nl.add_output("out");
    nl.add_gate("u", PrimitiveKind::Not, {{"in", in}, {"out", out}}, 2000);

    SUBCASE("inverter run shows both transitions") {
        Stimulus st;
        st.set(0, "in", L0);
        st.set(10000, "in", L1);
        SimOptions opt;
        opt.until_ps = 20000;
        SimResult res = simulate(nl, st, opt);
        std::string vcd = write_vcd(res.waveform, nl);
        CHECK(vcd.find("$timescale 1ps $end") != std::string::npos);
        CHECK(vcd.find("$var wire 1 ! in $end") != std::string::npos);
        CHECK(vcd.find("$var wire 1 \" out $end") != std::string::npos);
        CHECK(vcd.find("#10000\n1!") != std::string::npos);
        CHECK(vcd.find("#12000\n0\"") != std::string::npos);
    }
    SUBCASE("an empty waveform is still a valid dump") {
        SimOptions opt;
        opt.until_ps = 1000;
        SimResult res = simulate(nl, Stimulus{}, opt);
        std::string vcd = write_vcd(res.waveform, nl);
        CHECK(vcd.find("$dumpvars") != std::string::npos);
        CHECK(vcd.find("$enddefinitions $end") != std::string::npos);
        CHECK(vcd.find("x!") != std::string::npos); // everything unknown
    }
    SUBCASE("x and z are emitted as x and z") {
        Netlist tg("t");
        NetId a = tg.add_input("a");
        NetId y = tg.add_output("y");
        tg.add_gate("u", PrimitiveKind::Tgate,
                    {{"in", a}, {"en", a}, {"en_b", a}, {"out", y}}, 1000);
        Stimulus st;
        st.set(0, "a", L0); // en=0, en_b=0: still conducting through the P side
        st.set(5000, "a", LZ);
        SimOptions opt;
        opt.until_ps = 10000;
        SimResult res = simulate(tg, st, opt);
        std::string vcd = write_vcd(res.waveform, tg);
        CHECK(vcd.find("z!") != std::string::npos);
    }
}

TEST_CASE("golden vcd fixture for the parallel-load run") {
    CellDelayConfig cfg = CellDelayConfig::defaults();
    Netlist flat = flatten(build_usr(FlipFlopVariant::Dff, cfg, CellMode::Behavioral));
    Stimulus st;
    st.set(0, "clk", L0);
    st.set(0, "s1", L1);
    st.set(0, "s0", L1);
    st.set(0, "sr_in", L0);
    st.set(0, "sl_in", L0);
    for (int i = 1; i <= 4; ++i) st.set(0, "m" + std::to_string(i), (0x5 >> (4 - i)) & 1 ? L1 : L0);
    st.set(40000, "clk", L1);
    st.set(80000, "clk", L0);
    for (int i = 1; i <= 4; ++i)
        st.set(100000, "m" + std::to_string(i), (0xa >> (4 - i)) & 1 ? L1 : L0);
    st.set(120000, "clk", L1);
    st.set(160000, "clk", L0);
    SimOptions opt;
    opt.until_ps = 200000;
    SimResult res = simulate(flat, st, opt);
    std::string vcd = write_vcd(res.waveform, flat);

    std::string fixture = read_file(kFixtureDir + "usr_load_dff.vcd");
    CHECK(vcd == fixture);
}

TEST_CASE("transport components round-trip") {
    Netlist nl("t");
    NetId a = nl.add_input("a");
    NetId y = nl.add_output("y");
    nl.add_gate("line", PrimitiveKind::Buf, {{"in", a}, {"out", y}}, 5000,
                DelayModel::Transport);
    std::string s = serialize_netlist(nl);
    CHECK(s.find("\"model\": \"transport\"") != std::string::npos);
    Netlist back = parse_netlist(s);
    CHECK(back == nl);
    CHECK(back.components[0].model == DelayModel::Transport);
}
