#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiftsim/check.hpp"
#include "shiftsim/json_io.hpp"
#include "shiftsim/vcd.hpp"

using namespace shiftsim;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitUsage = 2;

CellDelayConfig load_config(const std::string &path) {
    if (path.empty()) return CellDelayConfig::defaults();
    return parse_delay_config(read_file(path));
}

FlipFlopVariant parse_variant(const std::string &s) {
    auto v = variant_from_name(s);
    if (!v) throw Error("unknown flip-flop variant '" + s + "' (dff|dtgms|mtspc|tgms)");
    return *v;
}

CellMode parse_cells(const std::string &s) {
    if (s == "behavioral") return CellMode::Behavioral;
    if (s == "structural") return CellMode::Structural;
    throw Error("unknown cell mode '" + s + "' (behavioral|structural)");
}

int cmd_build(const std::string &circuit, const std::string &ff, const std::string &cells,
              const std::string &config_path, const std::string &out_path, bool hier) {
    CellDelayConfig cfg = load_config(config_path);
    FlipFlopVariant v = parse_variant(ff);
    CellMode mode = parse_cells(cells);

    Netlist nl;
    if (circuit == "usr")
        nl = build_usr(v, cfg, mode);
    else if (circuit == "alu")
        nl = build_alu(cfg);
    else if (circuit == "system")
        nl = build_system(v, cfg, mode);
    else if (circuit == "mux4")
        nl = build_mux4(cfg);
    else if (circuit == "fulladder")
        nl = build_full_adder(cfg);
    else if (auto fv = variant_from_name(circuit))
        nl = build_ff_structural(*fv, cfg);
    else
        throw Error("unknown circuit '" + circuit +
                    "' (dff|dtgms|mtspc|tgms|mux4|fulladder|usr|alu|system)");

    if (!hier) nl = flatten(nl);
    write_file(out_path, serialize_netlist(nl));
    std::cout << "wrote " << out_path << " (" << nl.components.size() << " components, "
              << nl.nets.size() << " nets)\n";
    return kExitPass;
}

int cmd_simulate(const std::string &netlist_path, const std::string &stimulus_path,
                 double until_ns, const std::string &vcd_path, bool as_json) {
    Netlist nl = parse_netlist(read_file(netlist_path));
    if (!nl.is_flat()) nl = flatten(nl);
    Stimulus st = parse_stimulus(read_file(stimulus_path));

    SimOptions opt;
    opt.until_ps = static_cast<Ps>(std::llround(until_ns * 1000.0));
    SimResult res = simulate(nl, st, opt);

    if (!vcd_path.empty()) write_file(vcd_path, write_vcd(res.waveform, nl));

    if (as_json) {
        ojson j;
        j["format"] = 1;
        j["events"] = res.events;
        j["quiescent"] = res.quiescent;
        j["quiescent_at_ns"] = static_cast<double>(res.quiescent_at) / 1000.0;
        ojson outs;
        for (NetId p : nl.outputs)
            outs[nl.net_name(p)] = std::string(1, to_char(res.final_nets[p]));
        j["outputs"] = outs;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << res.events << " events, "
                  << (res.quiescent ? "quiescent at " + std::to_string(res.quiescent_at) + " ps"
                                    : "still active at the horizon")
                  << "\n";
        for (NetId p : nl.outputs)
            std::cout << "  " << nl.net_name(p) << " = " << to_char(res.final_nets[p]) << "\n";
        if (!vcd_path.empty()) std::cout << "wrote " << vcd_path << "\n";
    }
    return kExitPass;
}

int report_check(const CheckReport &rep, bool as_json) {
    if (as_json) {
        ojson j;
        j["format"] = 1;
        j["circuit"] = rep.circuit;
        j["cases"] = rep.cases;
        j["pass"] = rep.pass();
        ojson fails = ojson::array();
        for (const auto &f : rep.failures) {
            ojson jf;
            jf["case"] = f.case_index;
            jf["stimulus"] = f.stimulus;
            jf["expected"] = f.expected;
            jf["observed"] = f.observed;
            fails.push_back(jf);
        }
        j["failures"] = fails;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << rep.circuit << ": " << (rep.cases - rep.failures.size()) << "/"
                  << rep.cases << " pass\n";
        std::size_t shown = 0;
        for (const auto &f : rep.failures) {
            if (shown++ == 10) {
                std::cout << "  ... " << rep.failures.size() - 10 << " more\n";
                break;
            }
            std::cout << "  FAIL " << f.stimulus << ": expected " << f.expected << ", got "
                      << f.observed << "\n";
        }
    }
    return rep.pass() ? kExitPass : kExitCheckFail;
}

int cmd_check(const std::string &circuit, const std::string &ff, const std::string &cells,
              const std::string &config_path, std::uint64_t seed, int steps, bool as_json) {
    CellDelayConfig cfg = load_config(config_path);
    FlipFlopVariant v = parse_variant(ff);
    CellMode mode = parse_cells(cells);

    CheckReport rep;
    if (circuit == "alu")
        rep = check_alu_exhaustive(flatten(build_alu(cfg)));
    else if (circuit == "usr")
        rep = check_usr_random(flatten(build_usr(v, cfg, mode)), seed, steps);
    else if (circuit == "system")
        rep = check_system_random(flatten(build_system(v, cfg, mode)), seed, steps);
    else
        throw Error("unknown check '" + circuit + "' (alu|usr|system)");
    return report_check(rep, as_json);
}

int cmd_delay(const std::string &config_path, const std::string &cells, bool as_json) {
    CellDelayConfig cfg = load_config(config_path);
    DelayReport rep = delay_report(cfg, parse_cells(cells));
    auto min_set = rep.min_delay_set();

    if (as_json) {
        ojson j;
        j["format"] = 1;
        ojson entries = ojson::array();
        for (const auto &e : rep.entries) {
            ojson je;
            je["variant"] = variant_name(e.variant);
            if (e.oscillatory)
                je["oscillatory"] = true;
            else if (e.delay_ps)
                je["delay_ns"] = static_cast<double>(*e.delay_ps) / 1000.0;
            else
                je["no_response"] = true;
            je["reference_ns"] = static_cast<double>(e.reference_ps) / 1000.0;
            entries.push_back(je);
        }
        j["entries"] = entries;
        ojson ms = ojson::array();
        for (auto v : min_set) ms.push_back(variant_name(v));
        j["min_delay_set"] = ms;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "variant  delay_ns\n";
        for (const auto &e : rep.entries) {
            std::cout << variant_name(e.variant);
            for (std::size_t i = std::string(variant_name(e.variant)).size(); i < 9; ++i)
                std::cout << ' ';
            if (e.oscillatory)
                std::cout << "oscillatory\n";
            else if (e.delay_ps)
                std::cout << static_cast<double>(*e.delay_ps) / 1000.0 << "\n";
            else
                std::cout << "no response\n";
        }
        std::cout << "min-delay set: {";
        for (std::size_t i = 0; i < min_set.size(); ++i)
            std::cout << (i ? ", " : "") << variant_name(min_set[i]);
        std::cout << "}\n";
    }
    return kExitPass;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"event-driven four-valued gate-level logic simulator"};
    app.require_subcommand(1);

    std::string circuit, ff = "dff", cells = "structural", config_path, out_path;
    bool hier = false;
    auto *build = app.add_subcommand("build", "emit a catalog circuit as netlist JSON");
    build->add_option("circuit", circuit, "dff|dtgms|mtspc|tgms|mux4|fulladder|usr|alu|system")
        ->required();
    build->add_option("--ff", ff, "flip-flop variant for usr/system");
    build->add_option("--cells", cells, "behavioral|structural");
    build->add_option("--config", config_path, "delay config JSON");
    build->add_option("-o,--output", out_path, "output path")->required();
    build->add_flag("--hier", hier, "keep the hierarchy instead of flattening");

    std::string netlist_path, stimulus_path, vcd_path;
    double until_ns = 0;
    bool as_json = false;
    auto *sim = app.add_subcommand("simulate", "run a netlist against a stimulus file");
    sim->add_option("netlist", netlist_path, "netlist JSON")->required();
    sim->add_option("stimulus", stimulus_path, "stimulus JSON")->required();
    sim->add_option("--until", until_ns, "simulation horizon in ns")->required();
    sim->add_option("--vcd", vcd_path, "write a VCD waveform here");
    sim->add_flag("--json", as_json, "machine-readable output");

    std::string check_circuit;
    std::uint64_t seed = 42;
    int steps = 1000;
    bool check_json = false;
    std::string check_ff = "dff", check_cells = "structural", check_config;
    auto *check = app.add_subcommand("check", "oracle equivalence checks");
    check->add_option("circuit", check_circuit, "alu|usr|system")->required();
    check->add_option("--ff", check_ff, "flip-flop variant");
    check->add_option("--cells", check_cells, "behavioral|structural");
    check->add_option("--config", check_config, "delay config JSON");
    check->add_option("--seed", seed, "random seed");
    check->add_option("--steps", steps, "random steps");
    check->add_flag("--json", check_json, "machine-readable output");

    std::string delay_config, delay_cells = "behavioral";
    bool delay_json = false;
    auto *delay = app.add_subcommand("delay", "per-variant clock-to-settle report");
    delay->add_option("--config", delay_config, "delay config JSON");
    delay->add_option("--cells", delay_cells, "behavioral|structural");
    delay->add_flag("--json", delay_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (build->parsed())
            return cmd_build(circuit, ff, cells, config_path, out_path, hier);
        if (sim->parsed())
            return cmd_simulate(netlist_path, stimulus_path, until_ns, vcd_path, as_json);
        if (check->parsed())
            return cmd_check(check_circuit, check_ff, check_cells, check_config, seed, steps,
                             check_json);
        if (delay->parsed()) return cmd_delay(delay_config, delay_cells, delay_json);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
