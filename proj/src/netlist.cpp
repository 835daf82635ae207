#include "shiftsim/netlist.hpp"

#include <algorithm>
#include <array>

namespace shiftsim {

namespace {

constexpr const char *kIn1[] = {"in"};
constexpr const char *kIn2[] = {"a", "b"};
constexpr const char *kInSw[] = {"in", "en", "en_b"};
constexpr const char *kInFf[] = {"d", "clk"};

} // namespace

const char *kind_name(PrimitiveKind k) {
    switch (k) {
    case PrimitiveKind::Not: return "not";
    case PrimitiveKind::Buf: return "buf";
    case PrimitiveKind::And2: return "and2";
    case PrimitiveKind::Nand2: return "nand2";
    case PrimitiveKind::Or2: return "or2";
    case PrimitiveKind::Nor2: return "nor2";
    case PrimitiveKind::Xor2: return "xor2";
    case PrimitiveKind::Tgate: return "tgate";
    case PrimitiveKind::Cinv: return "cinv";
    case PrimitiveKind::Const0: return "const0";
    case PrimitiveKind::Const1: return "const1";
    }
    return "?";
}

const char *variant_name(FlipFlopVariant v) {
    switch (v) {
    case FlipFlopVariant::Dff: return "dff";
    case FlipFlopVariant::Dtgms: return "dtgms";
    case FlipFlopVariant::Mtspc: return "mtspc";
    case FlipFlopVariant::Tgms: return "tgms";
    }
    return "?";
}

std::optional<FlipFlopVariant> variant_from_name(std::string_view s) {
    if (s == "dff") return FlipFlopVariant::Dff;
    if (s == "dtgms") return FlipFlopVariant::Dtgms;
    if (s == "mtspc") return FlipFlopVariant::Mtspc;
    if (s == "tgms") return FlipFlopVariant::Tgms;
    return std::nullopt;
}

std::span<const char *const> primitive_inputs(PrimitiveKind k) {
    switch (k) {
    case PrimitiveKind::Not:
    case PrimitiveKind::Buf:
        return kIn1;
    case PrimitiveKind::And2:
    case PrimitiveKind::Nand2:
    case PrimitiveKind::Or2:
    case PrimitiveKind::Nor2:
    case PrimitiveKind::Xor2:
        return kIn2;
    case PrimitiveKind::Tgate:
    case PrimitiveKind::Cinv:
        return kInSw;
    case PrimitiveKind::Const0:
    case PrimitiveKind::Const1:
        return {};
    }
    return {};
}

LogicValue eval_primitive(PrimitiveKind k, std::span<const LogicValue> in) {
    if (in.size() != primitive_inputs(k).size())
        throw Error(std::string("eval_primitive: arity mismatch for ") + kind_name(k));
    switch (k) {
    case PrimitiveKind::Not: return lnot(in[0]);
    case PrimitiveKind::Buf: return lnot(lnot(in[0]));
    case PrimitiveKind::And2: return land(in[0], in[1]);
    case PrimitiveKind::Nand2: return lnot(land(in[0], in[1]));
    case PrimitiveKind::Or2: return lor(in[0], in[1]);
    case PrimitiveKind::Nor2: return lnot(lor(in[0], in[1]));
    case PrimitiveKind::Xor2: return lxor(in[0], in[1]);
    case PrimitiveKind::Tgate: {
        // Conducts when either pass device is on: en high or en_b low.
        LogicValue cond = lor(in[1], lnot(in[2]));
        if (cond == L1) return in[0];
        if (cond == L0) return LZ;
        return LX;
    }
    case PrimitiveKind::Cinv: {
        // Switch-level tristate inverter: pull-down via (en AND in),
        // pull-up via (NOT en_b AND NOT in). The rails can be enabled
        // asymmetrically, which models the single-phase cells.
        LogicValue pd = land(in[1], in[0]);
        LogicValue pu = land(lnot(in[2]), lnot(in[0]));
        if (pd == L1) return L0;
        if (pu == L1) return L1;
        if (pd == L0 && pu == L0) return LZ;
        return LX;
    }
    case PrimitiveKind::Const0: return L0;
    case PrimitiveKind::Const1: return L1;
    }
    return LX;
}

NetId Component::port(const std::string &port_name) const {
    auto it = conn.find(port_name);
    return it == conn.end() ? kNoNet : it->second;
}

NetId Netlist::add_net(const std::string &net_name, bool resolved) {
    if (net_index_.count(net_name))
        throw Error("duplicate net name '" + net_name + "' in " + name);
    NetId id = static_cast<NetId>(nets.size());
    nets.push_back(Net{net_name, resolved});
    net_index_.emplace(net_name, id);
    return id;
}

NetId Netlist::add_input(const std::string &net_name) {
    NetId id = add_net(net_name);
    inputs.push_back(id);
    return id;
}

NetId Netlist::add_output(NetId net) {
    outputs.push_back(net);
    return net;
}

NetId Netlist::add_output(const std::string &net_name) {
    return add_output(add_net(net_name));
}

void Netlist::check_conn(const std::string &id, ComponentKind kind, PrimitiveKind prim,
                         const std::map<std::string, NetId> &conn,
                         const std::shared_ptr<const Netlist> &circuit) const {
    for (const auto &[port, net] : conn) {
        bool known = false;
        if (kind == ComponentKind::Primitive) {
            known = port == "out";
            for (const char *p : primitive_inputs(prim))
                known = known || port == p;
        } else if (kind == ComponentKind::BehavioralFf) {
            known = port == "d" || port == "clk" || port == "q";
        } else {
            for (NetId p : circuit->inputs) known = known || circuit->net_name(p) == port;
            for (NetId p : circuit->outputs) known = known || circuit->net_name(p) == port;
        }
        if (!known)
            throw Error("component '" + id + "': unknown port '" + port + "'");
        if (net >= nets.size())
            throw Error("component '" + id + "': port '" + port + "' bound to invalid net");
    }
}

void Netlist::add_gate(const std::string &id, PrimitiveKind k,
                       const std::map<std::string, NetId> &conn, std::int64_t delay_ps,
                       DelayModel model) {
    Component c;
    c.id = id;
    c.kind = ComponentKind::Primitive;
    c.prim = k;
    c.conn = conn;
    c.delay_ps = delay_ps;
    c.model = model;
    check_conn(id, c.kind, k, conn, nullptr);
    components.push_back(std::move(c));
}

void Netlist::add_ff(const std::string &id, FlipFlopVariant v,
                     const std::map<std::string, NetId> &conn, std::int64_t clk_to_q_ps) {
    Component c;
    c.id = id;
    c.kind = ComponentKind::BehavioralFf;
    c.ff = v;
    c.conn = conn;
    c.delay_ps = clk_to_q_ps;
    check_conn(id, c.kind, PrimitiveKind::Not, conn, nullptr);
    components.push_back(std::move(c));
}

void Netlist::add_instance(const std::string &id, std::shared_ptr<const Netlist> circuit,
                           const std::map<std::string, NetId> &conn) {
    if (!circuit) throw Error("instance '" + id + "': null subcircuit reference");
    Component c;
    c.id = id;
    c.kind = ComponentKind::Instance;
    c.circuit = std::move(circuit);
    c.conn = conn;
    check_conn(id, c.kind, PrimitiveKind::Not, conn, c.circuit);
    components.push_back(std::move(c));
}

NetId Netlist::find_net(const std::string &net_name) const {
    auto it = net_index_.find(net_name);
    return it == net_index_.end() ? kNoNet : it->second;
}

NetId Netlist::net(const std::string &net_name) const {
    NetId id = find_net(net_name);
    if (id == kNoNet) throw Error("no net named '" + net_name + "' in " + name);
    return id;
}

bool Netlist::has_input(const std::string &net_name) const {
    NetId id = find_net(net_name);
    return id != kNoNet && std::find(inputs.begin(), inputs.end(), id) != inputs.end();
}

bool Netlist::is_flat() const {
    for (const auto &c : components)
        if (c.kind == ComponentKind::Instance) return false;
    return true;
}

bool Netlist::operator==(const Netlist &o) const {
    auto net_eq = [](const Net &a, const Net &b) {
        return a.name == b.name && a.resolved == b.resolved;
    };
    if (name != o.name || nets.size() != o.nets.size() ||
        components.size() != o.components.size() || inputs != o.inputs || outputs != o.outputs)
        return false;
    for (std::size_t i = 0; i < nets.size(); ++i)
        if (!net_eq(nets[i], o.nets[i])) return false;
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto &a = components[i], &b = o.components[i];
        if (a.id != b.id || a.kind != b.kind || a.conn != b.conn || a.delay_ps != b.delay_ps ||
            a.model != b.model)
            return false;
        if (a.kind == ComponentKind::Primitive && a.prim != b.prim) return false;
        if (a.kind == ComponentKind::BehavioralFf && a.ff != b.ff) return false;
        if (a.kind == ComponentKind::Instance && !(*a.circuit == *b.circuit)) return false;
    }
    return true;
}

namespace {

void expected_ports(const Component &c, std::vector<std::string> &out) {
    out.clear();
    if (c.kind == ComponentKind::Primitive) {
        for (const char *p : primitive_inputs(c.prim)) out.emplace_back(p);
        out.emplace_back("out");
    } else if (c.kind == ComponentKind::BehavioralFf) {
        out = {"d", "clk", "q"};
    } else {
        for (NetId p : c.circuit->inputs) out.push_back(c.circuit->net_name(p));
        for (NetId p : c.circuit->outputs) out.push_back(c.circuit->net_name(p));
    }
}

bool drives(const Component &c, const std::string &port) {
    if (c.kind == ComponentKind::Primitive) return port == "out";
    if (c.kind == ComponentKind::BehavioralFf) return port == "q";
    for (NetId p : c.circuit->outputs)
        if (c.circuit->net_name(p) == port) return true;
    return false;
}

} // namespace

std::vector<Diagnostic> validate(const Netlist &nl) {
    std::vector<Diagnostic> diags;
    std::vector<int> driver_count(nl.nets.size(), 0);
    std::vector<int> touch_count(nl.nets.size(), 0);

    for (NetId p : nl.inputs) ++driver_count[p], ++touch_count[p];
    for (NetId p : nl.outputs) ++touch_count[p];

    std::vector<std::string> ports;
    for (const auto &c : nl.components) {
        expected_ports(c, ports);
        for (const auto &p : ports) {
            NetId n = c.port(p);
            if (n == kNoNet) {
                diags.push_back({"unbound-port", c.id + "." + p});
                continue;
            }
            ++touch_count[n];
            if (drives(c, p)) ++driver_count[n];
        }
    }

    for (NetId n = 0; n < nl.nets.size(); ++n) {
        if (driver_count[n] > 1 && !nl.nets[n].resolved)
            diags.push_back({"multiple-drivers",
                             nl.net_name(n) + " has " + std::to_string(driver_count[n]) +
                                 " drivers but is not marked resolved"});
        if (touch_count[n] == 0)
            diags.push_back({"dangling-net", nl.net_name(n)});
    }

    // Zero-delay combinational cycles: walk edges contributed only by
    // zero-delay non-source components.
    std::vector<std::vector<std::uint32_t>> readers(nl.nets.size());
    for (std::uint32_t ci = 0; ci < nl.components.size(); ++ci) {
        const auto &c = nl.components[ci];
        if (c.kind != ComponentKind::Primitive) continue;
        if (c.delay_ps != 0) continue;
        if (c.prim == PrimitiveKind::Const0 || c.prim == PrimitiveKind::Const1) continue;
        for (const char *p : primitive_inputs(c.prim)) {
            NetId n = c.port(p);
            if (n != kNoNet) readers[n].push_back(ci);
        }
    }
    // DFS over components; 0 = unvisited, 1 = on stack, 2 = done.
    std::vector<std::uint8_t> mark(nl.components.size(), 0);
    bool cycle = false;
    auto dfs = [&](auto &&self, std::uint32_t ci) -> void {
        if (mark[ci] == 1) {
            cycle = true;
            return;
        }
        if (mark[ci] == 2 || cycle) return;
        mark[ci] = 1;
        NetId out = nl.components[ci].port("out");
        if (out != kNoNet)
            for (std::uint32_t next : readers[out]) self(self, next);
        mark[ci] = 2;
    };
    for (std::uint32_t ci = 0; ci < nl.components.size() && !cycle; ++ci) {
        const auto &c = nl.components[ci];
        if (c.kind == ComponentKind::Primitive && c.delay_ps == 0 &&
            c.prim != PrimitiveKind::Const0 && c.prim != PrimitiveKind::Const1 && mark[ci] == 0)
            dfs(dfs, ci);
    }
    if (cycle) diags.push_back({"zero-delay-cycle", "combinational loop without delay"});

    for (const auto &c : nl.components)
        if (c.kind == ComponentKind::Instance) {
            auto sub = validate(*c.circuit);
            for (auto &d : sub)
                diags.push_back({d.code, c.id + ": " + d.detail});
        }

    return diags;
}

namespace {

void flatten_into(const Netlist &src, const std::string &prefix,
                  const std::vector<NetId> &port_map_src_to_dst, Netlist &dst) {
    // Map every src net to a dst net: ports splice onto the parent's nets,
    // internals get prefixed copies.
    std::vector<NetId> net_map(src.nets.size(), kNoNet);
    for (std::size_t i = 0; i < src.inputs.size() + src.outputs.size(); ++i) {
        NetId srcn = i < src.inputs.size() ? src.inputs[i]
                                           : src.outputs[i - src.inputs.size()];
        net_map[srcn] = port_map_src_to_dst[i];
    }
    for (NetId n = 0; n < src.nets.size(); ++n) {
        if (net_map[n] != kNoNet) continue;
        net_map[n] = dst.add_net(prefix + src.net_name(n), src.nets[n].resolved);
    }

    for (const auto &c : src.components) {
        std::map<std::string, NetId> conn;
        for (const auto &[port, net] : c.conn) conn.emplace(port, net_map[net]);
        if (c.kind == ComponentKind::Primitive) {
            dst.add_gate(prefix + c.id, c.prim, conn, c.delay_ps, c.model);
        } else if (c.kind == ComponentKind::BehavioralFf) {
            dst.add_ff(prefix + c.id, c.ff, conn, c.delay_ps);
        } else {
            const Netlist &sub = *c.circuit;
            std::vector<NetId> sub_ports;
            for (std::size_t i = 0; i < sub.inputs.size() + sub.outputs.size(); ++i) {
                NetId p = i < sub.inputs.size() ? sub.inputs[i]
                                                : sub.outputs[i - sub.inputs.size()];
                NetId bound = c.port(sub.net_name(p));
                if (bound == kNoNet)
                    throw Error("flatten: instance '" + prefix + c.id + "' leaves port '" +
                                sub.net_name(p) + "' unbound");
                sub_ports.push_back(net_map[bound]);
            }
            flatten_into(sub, prefix + c.id + ".", sub_ports, dst);
        }
    }
}

} // namespace

Netlist flatten(const Netlist &nl) {
    Netlist flat(nl.name);
    for (NetId n = 0; n < nl.nets.size(); ++n)
        flat.add_net(nl.net_name(n), nl.nets[n].resolved);
    flat.inputs = nl.inputs;
    flat.outputs = nl.outputs;

    for (const auto &c : nl.components) {
        if (c.kind == ComponentKind::Primitive) {
            flat.add_gate(c.id, c.prim, c.conn, c.delay_ps, c.model);
        } else if (c.kind == ComponentKind::BehavioralFf) {
            flat.add_ff(c.id, c.ff, c.conn, c.delay_ps);
        } else {
            const Netlist &sub = *c.circuit;
            std::vector<NetId> sub_ports;
            for (std::size_t i = 0; i < sub.inputs.size() + sub.outputs.size(); ++i) {
                NetId p = i < sub.inputs.size() ? sub.inputs[i]
                                                : sub.outputs[i - sub.inputs.size()];
                NetId bound = c.port(sub.net_name(p));
                if (bound == kNoNet)
                    throw Error("flatten: instance '" + c.id + "' leaves port '" +
                                sub.net_name(p) + "' unbound");
                sub_ports.push_back(bound);
            }
            flatten_into(sub, c.id + ".", sub_ports, flat);
        }
    }
    return flat;
}

} // namespace shiftsim
