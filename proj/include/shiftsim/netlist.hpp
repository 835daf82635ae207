#ifndef SHIFTSIM_NETLIST_HPP
#define SHIFTSIM_NETLIST_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "shiftsim/logic.hpp"

namespace shiftsim {

using NetId = std::uint32_t;
inline constexpr NetId kNoNet = 0xffffffffu;

/// Leaf gate kinds. TGATE and CINV are switch-level: they conduct when
/// either clock device is on (en high or en_b low) and float when both
/// are off; CINV inverts and can drive one rail alone under a skewed
/// enable pair, which is what the TSPC-style cells rely on.
enum class PrimitiveKind : std::uint8_t {
    Not, Buf, And2, Nand2, Or2, Nor2, Xor2, Tgate, Cinv, Const0, Const1,
};

enum class FlipFlopVariant : std::uint8_t { Dff, Dtgms, Mtspc, Tgms };

enum class DelayModel : std::uint8_t { Inertial, Transport };

enum class ComponentKind : std::uint8_t { Primitive, BehavioralFf, Instance };

const char *kind_name(PrimitiveKind k);
const char *variant_name(FlipFlopVariant v);
std::optional<FlipFlopVariant> variant_from_name(std::string_view s);

/// Canonical input port names for a primitive, in evaluation order.
std::span<const char *const> primitive_inputs(PrimitiveKind k);

/// Gate function over already-resolved input values (arity must match).
LogicValue eval_primitive(PrimitiveKind k, std::span<const LogicValue> inputs);

struct Net {
    std::string name;
    bool resolved = false; // multi-driver legal; floats retain their last value
};

struct Component {
    std::string id;
    ComponentKind kind = ComponentKind::Primitive;
    PrimitiveKind prim = PrimitiveKind::Not;
    FlipFlopVariant ff = FlipFlopVariant::Dff;
    std::shared_ptr<const class Netlist> circuit; // when kind == Instance
    std::map<std::string, NetId> conn;            // port -> net
    std::int64_t delay_ps = 0;                    // clk-to-q for behavioral FFs
    DelayModel model = DelayModel::Inertial;

    NetId port(const std::string &name) const; // kNoNet when unbound
};

struct Diagnostic {
    std::string code; // "unbound-port", "multiple-drivers", "dangling-net", "zero-delay-cycle", ...
    std::string detail;
};

/// Directed graph of components and nets. Hierarchical via Instance
/// components; flatten() reduces to leaf cells with `parent.child` names.
class Netlist {
public:
    std::string name;
    std::vector<Net> nets;
    std::vector<Component> components;
    std::vector<NetId> inputs;  // port order is part of the interface
    std::vector<NetId> outputs;

    Netlist() = default;
    explicit Netlist(std::string n) : name(std::move(n)) {}

    NetId add_net(const std::string &net_name, bool resolved = false);
    NetId add_input(const std::string &net_name);
    NetId add_output(NetId net);
    NetId add_output(const std::string &net_name);

    // Construction validates port names/arity; missing bindings are left
    // to validate() so partially built netlists can be inspected.
    void add_gate(const std::string &id, PrimitiveKind k,
                  const std::map<std::string, NetId> &conn, std::int64_t delay_ps,
                  DelayModel model = DelayModel::Inertial);
    void add_ff(const std::string &id, FlipFlopVariant v,
                const std::map<std::string, NetId> &conn, std::int64_t clk_to_q_ps);
    void add_instance(const std::string &id, std::shared_ptr<const Netlist> circuit,
                      const std::map<std::string, NetId> &conn);

    NetId find_net(const std::string &net_name) const; // kNoNet if absent
    NetId net(const std::string &net_name) const;      // throws if absent
    const std::string &net_name(NetId id) const { return nets[id].name; }
    bool has_input(const std::string &net_name) const;

    bool is_flat() const;
    bool operator==(const Netlist &other) const;

private:
    std::unordered_map<std::string, NetId> net_index_;
    void check_conn(const std::string &id, ComponentKind kind, PrimitiveKind prim,
                    const std::map<std::string, NetId> &conn,
                    const std::shared_ptr<const Netlist> &circuit) const;
};

/// Structural checks: unbound ports, multi-driven unresolved nets,
/// dangling nets, zero-delay combinational cycles. Recurses into
/// subcircuits. Empty result means ok.
std::vector<Diagnostic> validate(const Netlist &nl);

/// Expands Instance components recursively. Top-level nets keep their
/// names; subcircuit internals get `instance.name`. Idempotent.
Netlist flatten(const Netlist &nl);

} // namespace shiftsim

#endif
