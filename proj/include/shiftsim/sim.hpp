#ifndef SHIFTSIM_SIM_HPP
#define SHIFTSIM_SIM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftsim/netlist.hpp"

namespace shiftsim {

using Ps = std::int64_t; // all kernel times are integer picoseconds

inline constexpr Ps kNsToPs = 1000;

struct StimulusEvent {
    Ps t_ps = 0;
    std::string port;
    LogicValue v = LX;
};

struct ClockSpec {
    std::string port;
    Ps period_ps = 0;
    Ps start_ps = 0;
    double duty = 0.5; // fraction of the period spent high
};

struct Stimulus {
    std::vector<StimulusEvent> events; // sorted by time at parse/build time
    std::optional<ClockSpec> clock;

    void set(Ps t_ps, const std::string &port, LogicValue v) {
        events.push_back({t_ps, port, v});
    }
};

/// Per-net value-change history. Times are strictly increasing per net
/// and consecutive values always differ.
struct Waveform {
    struct Change {
        Ps t_ps;
        LogicValue v;
    };

    std::vector<std::string> net_names;
    std::vector<LogicValue> initial;
    std::vector<std::vector<Change>> changes;
    Ps end_ps = 0;

    std::optional<NetId> find(const std::string &name) const;
    LogicValue value_at(NetId net, Ps t) const; // value after all changes <= t
    LogicValue final_value(NetId net) const;
    bool has_change_at(NetId net, Ps t) const;
};

struct SimOptions {
    Ps until_ps = 0;
    std::uint64_t max_events = 10'000'000; // runaway-oscillation budget
};

struct SimResult {
    Waveform waveform;
    std::uint64_t events = 0;
    bool quiescent = false;       // queue drained before `until`
    Ps quiescent_at = 0;          // time of the last applied event
    std::vector<LogicValue> final_nets;
    std::vector<LogicValue> final_drivers; // per component, its driven value
};

/// Event budget exhaustion, with the busiest nets for diagnosis.
struct OscillationError : Error {
    std::vector<std::string> nets;
    OscillationError(const std::string &msg, std::vector<std::string> hot)
        : Error(msg), nets(std::move(hot)) {}
};

/// Deterministic event-driven evaluation of a flattened netlist.
/// Identical inputs give bit-identical waveforms.
SimResult simulate(const Netlist &flat, const Stimulus &stim, const SimOptions &opt);

/// True if re-evaluating every gate against the settled net values
/// produces no new activity (checks the quiescence contract).
bool verify_quiescent(const Netlist &flat, const SimResult &res);

/// Propagation delay per the settling-burst rule: the last transition of
/// `output` after the `input` transition at `input_t` (and before the next
/// input transition), minus `input_t`. nullopt when the output never
/// responds; throws if `input` has no transition at `input_t`.
std::optional<Ps> measure_delay(const Waveform &w, NetId input, Ps input_t, NetId output);

struct FfTimingSpec {
    std::string name;
    NetId d = kNoNet;
    NetId clk = kNoNet;
};

struct TimingViolation {
    enum class Kind { Setup, Hold };
    std::string ff;
    Ps clk_edge_ps = 0;
    Ps d_change_ps = 0;
    Kind kind = Kind::Setup;
};

/// Reports every D transition inside [edge - setup, edge + hold] around
/// each rising clock edge.
std::vector<TimingViolation> check_timing(const Waveform &w,
                                          std::span<const FfTimingSpec> ffs,
                                          Ps setup_ps, Ps hold_ps);

/// Timing specs for the behavioral flip-flops of a flat netlist.
std::vector<FfTimingSpec> ff_timing_specs(const Netlist &flat);

} // namespace shiftsim

#endif
