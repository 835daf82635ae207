#include "shiftsim/json_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace shiftsim {

using json = nlohmann::ordered_json;

namespace {

std::optional<PrimitiveKind> prim_from_name(const std::string &s) {
    for (auto k : {PrimitiveKind::Not, PrimitiveKind::Buf, PrimitiveKind::And2,
                   PrimitiveKind::Nand2, PrimitiveKind::Or2, PrimitiveKind::Nor2,
                   PrimitiveKind::Xor2, PrimitiveKind::Tgate, PrimitiveKind::Cinv,
                   PrimitiveKind::Const0, PrimitiveKind::Const1})
        if (s == kind_name(k)) return k;
    return std::nullopt;
}

Ps ns_to_ps(double ns) { return static_cast<Ps>(std::llround(ns * 1000.0)); }

void collect_subcircuits(const Netlist &nl, std::map<std::string, const Netlist *> &out) {
    for (const auto &c : nl.components) {
        if (c.kind != ComponentKind::Instance) continue;
        auto [it, inserted] = out.emplace(c.circuit->name, c.circuit.get());
        if (!inserted && !(*it->second == *c.circuit))
            throw Error("serialize: two different subcircuits named '" + c.circuit->name + "'");
        if (inserted) collect_subcircuits(*c.circuit, out);
    }
}

json netlist_body(const Netlist &nl) {
    json j;
    j["name"] = nl.name;
    json ports;
    json in = json::array(), outp = json::array();
    for (NetId p : nl.inputs) in.push_back(nl.net_name(p));
    for (NetId p : nl.outputs) outp.push_back(nl.net_name(p));
    ports["in"] = in;
    ports["out"] = outp;
    j["ports"] = ports;

    json nets = json::array();
    for (const auto &n : nl.nets) nets.push_back({{"name", n.name}, {"resolved", n.resolved}});
    j["nets"] = nets;

    json comps = json::array();
    for (const auto &c : nl.components) {
        json jc;
        jc["id"] = c.id;
        if (c.kind == ComponentKind::Primitive)
            jc["kind"] = kind_name(c.prim);
        else if (c.kind == ComponentKind::BehavioralFf)
            jc["kind"] = std::string("ff_") + variant_name(c.ff);
        else {
            jc["kind"] = "instance";
            jc["ref"] = c.circuit->name;
        }
        json conn;
        for (const auto &[port, net] : c.conn) conn[port] = nl.net_name(net);
        jc["conn"] = conn;
        if (c.kind != ComponentKind::Instance) jc["delay_ps"] = c.delay_ps;
        if (c.model == DelayModel::Transport) jc["model"] = "transport";
        comps.push_back(jc);
    }
    j["components"] = comps;
    return j;
}

Netlist netlist_from_body(const json &j, const std::string &where,
                          const std::map<std::string, std::shared_ptr<const Netlist>> &subs);

std::shared_ptr<const Netlist> resolve_sub(
    const std::string &ref, const std::string &where,
    const std::map<std::string, std::shared_ptr<const Netlist>> &subs) {
    auto it = subs.find(ref);
    if (it == subs.end())
        throw Error(where + ": unresolved subcircuit reference '" + ref + "'");
    return it->second;
}

Netlist netlist_from_body(const json &j, const std::string &where,
                          const std::map<std::string, std::shared_ptr<const Netlist>> &subs) {
    if (!j.is_object()) throw Error(where + ": netlist must be an object");
    Netlist nl(j.at("name").get<std::string>());

    for (const auto &jn : j.at("nets")) {
        if (jn.is_string())
            nl.add_net(jn.get<std::string>());
        else
            nl.add_net(jn.at("name").get<std::string>(), jn.value("resolved", false));
    }
    const json &ports = j.at("ports");
    for (const auto &p : ports.at("in")) {
        NetId n = nl.find_net(p.get<std::string>());
        if (n == kNoNet)
            throw Error(where + ": input port '" + p.get<std::string>() + "' is not a net");
        nl.inputs.push_back(n);
    }
    for (const auto &p : ports.at("out")) {
        NetId n = nl.find_net(p.get<std::string>());
        if (n == kNoNet)
            throw Error(where + ": output port '" + p.get<std::string>() + "' is not a net");
        nl.outputs.push_back(n);
    }

    std::size_t ci = 0;
    for (const auto &jc : j.at("components")) {
        std::string cwhere = where + ".components[" + std::to_string(ci++) + "]";
        std::string id = jc.at("id").get<std::string>();
        std::string kind = jc.at("kind").get<std::string>();
        std::map<std::string, NetId> conn;
        for (const auto &[port, jnet] : jc.at("conn").items()) {
            std::string net = jnet.get<std::string>();
            NetId n = nl.find_net(net);
            if (n == kNoNet)
                throw Error(cwhere + ".conn." + port + ": port bound to missing net '" + net +
                            "'");
            conn.emplace(port, n);
        }
        DelayModel model = DelayModel::Inertial;
        if (jc.contains("model")) {
            std::string m = jc.at("model").get<std::string>();
            if (m == "transport")
                model = DelayModel::Transport;
            else if (m != "inertial")
                throw Error(cwhere + ": unknown delay model '" + m + "'");
        }
        if (kind == "instance") {
            nl.add_instance(id, resolve_sub(jc.at("ref").get<std::string>(), cwhere, subs),
                            conn);
        } else if (kind.rfind("ff_", 0) == 0) {
            auto v = variant_from_name(kind.substr(3));
            if (!v) throw Error(cwhere + ": unknown kind '" + kind + "'");
            nl.add_ff(id, *v, conn, jc.at("delay_ps").get<Ps>());
        } else {
            auto k = prim_from_name(kind);
            if (!k) throw Error(cwhere + ": unknown kind '" + kind + "'");
            nl.add_gate(id, *k, conn, jc.at("delay_ps").get<Ps>(), model);
        }
    }
    return nl;
}

} // namespace

std::string serialize_netlist(const Netlist &nl) {
    json j;
    j["format"] = 1;
    json body = netlist_body(nl);
    for (auto &[key, val] : body.items()) j[key] = val;

    std::map<std::string, const Netlist *> subs;
    collect_subcircuits(nl, subs);
    if (!subs.empty()) {
        json js;
        for (const auto &[name, sub] : subs) js[name] = netlist_body(*sub);
        j["subcircuits"] = js;
    }
    return j.dump(2) + "\n";
}

Netlist parse_netlist(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw Error(std::string("netlist JSON: ") + e.what());
    }
    try {
        if (j.value("format", 1) != 1) throw Error("netlist JSON: unsupported format");

        // Subcircuit bodies may reference each other; resolve in passes.
        std::map<std::string, std::shared_ptr<const Netlist>> subs;
        if (j.contains("subcircuits")) {
            const json &js = j.at("subcircuits");
            std::vector<std::string> todo;
            for (const auto &[name, body] : js.items()) todo.push_back(name);
            bool progress = true;
            while (!todo.empty() && progress) {
                progress = false;
                for (auto it = todo.begin(); it != todo.end();) {
                    try {
                        Netlist sub = netlist_from_body(js.at(*it), "subcircuits." + *it, subs);
                        subs.emplace(*it, std::make_shared<const Netlist>(std::move(sub)));
                        it = todo.erase(it);
                        progress = true;
                    } catch (const Error &) {
                        ++it; // possibly a forward reference; retry next pass
                    }
                }
            }
            if (!todo.empty()) // re-parse one to surface its real error
                netlist_from_body(js.at(todo.front()), "subcircuits." + todo.front(), subs);
        }
        Netlist nl = netlist_from_body(j, "netlist", subs);

        auto diags = validate(nl);
        if (!diags.empty()) {
            std::string msg = "netlist failed validation:";
            for (const auto &d : diags) msg += "\n  [" + d.code + "] " + d.detail;
            throw Error(msg);
        }
        return nl;
    } catch (const json::exception &e) {
        throw Error(std::string("netlist JSON: ") + e.what());
    }
}

std::string serialize_stimulus(const Stimulus &st) {
    json j;
    j["format"] = 1;
    json evs = json::array();
    for (const auto &e : st.events) {
        json je;
        je["t_ns"] = static_cast<double>(e.t_ps) / 1000.0;
        je["port"] = e.port;
        je["v"] = std::string(1, to_char(e.v));
        evs.push_back(je);
    }
    j["events"] = evs;
    if (st.clock) {
        json jc;
        jc["port"] = st.clock->port;
        jc["period_ns"] = static_cast<double>(st.clock->period_ps) / 1000.0;
        jc["start_ns"] = static_cast<double>(st.clock->start_ps) / 1000.0;
        jc["duty"] = st.clock->duty;
        j["clock"] = jc;
    }
    return j.dump(2) + "\n";
}

namespace {

StimulusEvent event_from_json(const json &je, const std::string &where) {
    StimulusEvent ev;
    ev.t_ps = ns_to_ps(je.at("t_ns").get<double>());
    ev.port = je.at("port").get<std::string>();
    std::string v = je.at("v").get<std::string>();
    auto lv = v.size() == 1 ? logic_from_char(v[0]) : std::nullopt;
    if (!lv) throw Error(where + ": value must be one of 0/1/x/z, got '" + v + "'");
    ev.v = *lv;
    return ev;
}

ClockSpec clock_from_json(const json &jc) {
    ClockSpec ck;
    ck.port = jc.at("port").get<std::string>();
    ck.period_ps = ns_to_ps(jc.at("period_ns").get<double>());
    ck.start_ps = ns_to_ps(jc.value("start_ns", 0.0));
    ck.duty = jc.value("duty", 0.5);
    if (ck.period_ps <= 0) throw Error("stimulus clock: period must be positive");
    if (ck.duty <= 0.0 || ck.duty >= 1.0) throw Error("stimulus clock: duty must be in (0,1)");
    return ck;
}

} // namespace

Stimulus parse_stimulus(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw Error(std::string("stimulus JSON: ") + e.what());
    }
    try {
        Stimulus st;
        if (j.is_array()) {
            std::size_t i = 0;
            for (const auto &je : j) {
                std::string where = "stimulus[" + std::to_string(i++) + "]";
                if (je.contains("clock")) {
                    if (st.clock) throw Error(where + ": more than one clock spec");
                    st.clock = clock_from_json(je.at("clock"));
                } else {
                    st.events.push_back(event_from_json(je, where));
                }
            }
        } else if (j.is_object()) {
            if (j.value("format", 1) != 1) throw Error("stimulus JSON: unsupported format");
            std::size_t i = 0;
            for (const auto &je : j.value("events", json::array()))
                st.events.push_back(event_from_json(je, "events[" + std::to_string(i++) + "]"));
            if (j.contains("clock")) st.clock = clock_from_json(j.at("clock"));
        } else {
            throw Error("stimulus JSON: expected array or object");
        }
        std::stable_sort(st.events.begin(), st.events.end(),
                         [](const StimulusEvent &a, const StimulusEvent &b) {
                             return a.t_ps < b.t_ps;
                         });
        return st;
    } catch (const json::exception &e) {
        throw Error(std::string("stimulus JSON: ") + e.what());
    }
}

std::string serialize_delay_config(const CellDelayConfig &cfg) {
    json j;
    j["format"] = 1;
    json cq;
    for (auto v : {FlipFlopVariant::Dff, FlipFlopVariant::Dtgms, FlipFlopVariant::Mtspc,
                   FlipFlopVariant::Tgms})
        cq[variant_name(v)] = static_cast<double>(cfg.clk_to_q(v)) / 1000.0;
    j["clk_to_q_ns"] = cq;
    json g;
    for (const auto &[k, d] : cfg.gate_ps) g[kind_name(k)] = static_cast<double>(d) / 1000.0;
    j["gate_ns"] = g;
    return j.dump(2) + "\n";
}

CellDelayConfig parse_delay_config(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw Error(std::string("delay config JSON: ") + e.what());
    }
    try {
        if (j.value("format", 1) != 1) throw Error("delay config JSON: unsupported format");
        CellDelayConfig cfg;
        const json &cq = j.at("clk_to_q_ns");
        for (auto v : {FlipFlopVariant::Dff, FlipFlopVariant::Dtgms, FlipFlopVariant::Mtspc,
                       FlipFlopVariant::Tgms})
            cfg.clk_to_q_ps[v] = ns_to_ps(cq.at(variant_name(v)).get<double>());
        const json &g = j.at("gate_ns");
        for (const auto &[name, val] : g.items()) {
            auto k = prim_from_name(name);
            if (!k) throw Error("delay config JSON: unknown gate kind '" + name + "'");
            cfg.gate_ps[*k] = ns_to_ps(val.get<double>());
        }
        for (auto k : {PrimitiveKind::Not, PrimitiveKind::Buf, PrimitiveKind::And2,
                       PrimitiveKind::Nand2, PrimitiveKind::Or2, PrimitiveKind::Nor2,
                       PrimitiveKind::Xor2, PrimitiveKind::Tgate, PrimitiveKind::Cinv})
            if (!cfg.gate_ps.count(k))
                throw Error(std::string("delay config JSON: missing gate_ns entry for ") +
                            kind_name(k));
        cfg.check();
        return cfg;
    } catch (const json::exception &e) {
        throw Error(std::string("delay config JSON: ") + e.what());
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

} // namespace shiftsim
