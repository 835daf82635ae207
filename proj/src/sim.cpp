#include "shiftsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace shiftsim {

std::optional<NetId> Waveform::find(const std::string &name) const {
    for (NetId i = 0; i < net_names.size(); ++i)
        if (net_names[i] == name) return i;
    return std::nullopt;
}

LogicValue Waveform::value_at(NetId net, Ps t) const {
    const auto &ch = changes[net];
    auto it = std::upper_bound(ch.begin(), ch.end(), t,
                               [](Ps x, const Change &c) { return x < c.t_ps; });
    return it == ch.begin() ? initial[net] : std::prev(it)->v;
}

LogicValue Waveform::final_value(NetId net) const {
    const auto &ch = changes[net];
    return ch.empty() ? initial[net] : ch.back().v;
}

bool Waveform::has_change_at(NetId net, Ps t) const {
    const auto &ch = changes[net];
    auto it = std::lower_bound(ch.begin(), ch.end(), t,
                               [](const Change &c, Ps x) { return c.t_ps < x; });
    return it != ch.end() && it->t_ps == t;
}

namespace {

struct SimComponent {
    ComponentKind kind;
    PrimitiveKind prim;
    DelayModel model;
    Ps delay;
    std::vector<NetId> in; // canonical order; FFs: [d, clk]
    NetId out;
};

struct Event {
    Ps t;
    std::uint64_t seq;
    std::uint32_t driver;
    LogicValue v;
};

struct EventLater {
    bool operator()(const Event &a, const Event &b) const {
        return a.t != b.t ? a.t > b.t : a.seq > b.seq;
    }
};

class Engine {
public:
    Engine(const Netlist &nl, const Stimulus &stim, const SimOptions &opt)
        : nl_(nl), opt_(opt) {
        if (!nl.is_flat()) throw Error("simulate: netlist is not flattened");
        build();
        schedule_stimulus(stim);
        initial_evaluation();
    }

    SimResult run() {
        SimResult res;
        res.waveform.net_names.reserve(nl_.nets.size());
        for (const auto &n : nl_.nets) res.waveform.net_names.push_back(n.name);
        res.waveform.initial = net_value_;
        res.waveform.changes.assign(nl_.nets.size(), {});
        res.waveform.end_ps = opt_.until_ps;
        wave_ = &res.waveform;

        std::uint64_t applied = 0;
        Ps last_t = 0;
        while (!queue_.empty() && queue_.top().t <= opt_.until_ps) {
            Event ev = queue_.top();
            queue_.pop();
            auto &dr = drivers_[ev.driver];
            if (dr.model == DelayModel::Inertial) {
                if (!dr.pending || dr.pend_seq != ev.seq) continue; // cancelled
                dr.pending = false;
            } else {
                --dr.queued;
            }
            if (++applied > opt_.max_events) throw budget_error(res.waveform);
            last_t = ev.t;
            if (dr.value == ev.v) continue;
            dr.value = ev.v;
            update_net(dr.net, ev.t);
        }

        res.events = applied;
        // Cancelled inertial events past the horizon are not activity.
        res.quiescent = true;
        while (!queue_.empty()) {
            const Event &ev = queue_.top();
            const Driver &dr = drivers_[ev.driver];
            bool live = dr.model == DelayModel::Transport ||
                        (dr.pending && dr.pend_seq == ev.seq);
            if (live) {
                res.quiescent = false;
                break;
            }
            queue_.pop();
        }
        res.quiescent_at = last_t;
        res.final_nets = net_value_;
        res.final_drivers.resize(nl_.components.size());
        for (std::size_t i = 0; i < nl_.components.size(); ++i)
            res.final_drivers[i] = drivers_[i].value;
        wave_ = nullptr;
        return res;
    }

private:
    struct Driver {
        NetId net = kNoNet;
        DelayModel model = DelayModel::Inertial;
        LogicValue value = LX;
        // inertial bookkeeping
        bool pending = false;
        std::uint64_t pend_seq = 0;
        Ps pend_t = 0;
        LogicValue pend_v = LX;
        // transport bookkeeping
        int queued = 0;
        LogicValue last_sched = LX;
    };

    const Netlist &nl_;
    const SimOptions &opt_;
    std::vector<SimComponent> comps_;
    std::vector<Driver> drivers_; // components first, then one per input port
    std::vector<std::vector<std::uint32_t>> net_drivers_;
    std::vector<std::vector<std::uint32_t>> net_readers_;
    std::vector<LogicValue> net_value_;
    std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
    std::uint64_t next_seq_ = 0;
    Waveform *wave_ = nullptr;
    std::vector<LogicValue> scratch_;

    void build() {
        net_value_.assign(nl_.nets.size(), LX);
        net_drivers_.assign(nl_.nets.size(), {});
        net_readers_.assign(nl_.nets.size(), {});
        comps_.reserve(nl_.components.size());

        for (std::uint32_t ci = 0; ci < nl_.components.size(); ++ci) {
            const auto &c = nl_.components[ci];
            SimComponent sc;
            sc.kind = c.kind;
            sc.prim = c.prim;
            sc.model = c.model;
            sc.delay = c.delay_ps;
            if (c.kind == ComponentKind::Primitive) {
                for (const char *p : primitive_inputs(c.prim)) {
                    NetId n = c.port(p);
                    if (n == kNoNet) throw Error("simulate: unbound port " + c.id + "." + p);
                    sc.in.push_back(n);
                }
                sc.out = c.port("out");
            } else { // BehavioralFf
                sc.in = {c.port("d"), c.port("clk")};
                sc.out = c.port("q");
                if (sc.in[0] == kNoNet || sc.in[1] == kNoNet)
                    throw Error("simulate: unbound flip-flop port on " + c.id);
            }
            if (sc.out == kNoNet) throw Error("simulate: unbound output on " + c.id);

            Driver dr;
            dr.net = sc.out;
            dr.model = sc.model;
            drivers_.push_back(dr);
            net_drivers_[sc.out].push_back(ci);
            for (NetId n : sc.in) net_readers_[n].push_back(ci);
            comps_.push_back(std::move(sc));
        }

        for (NetId p : nl_.inputs) {
            Driver dr;
            dr.net = p;
            // Stimulus is a full schedule, not a reevaluation stream, so
            // queued entries must never cancel each other.
            dr.model = DelayModel::Transport;
            drivers_.push_back(dr);
            net_drivers_[p].push_back(static_cast<std::uint32_t>(drivers_.size() - 1));
        }

        // Nets with no driver at all float from the start.
        for (NetId n = 0; n < nl_.nets.size(); ++n)
            if (net_drivers_[n].empty()) net_value_[n] = LZ;
    }

    std::uint32_t input_driver(const std::string &port) const {
        for (std::size_t i = 0; i < nl_.inputs.size(); ++i)
            if (nl_.net_name(nl_.inputs[i]) == port)
                return static_cast<std::uint32_t>(comps_.size() + i);
        throw Error("stimulus drives unknown input port '" + port + "'");
    }

    void schedule_stimulus(const Stimulus &stim) {
        std::vector<StimulusEvent> evs = stim.events;
        if (stim.clock) {
            const ClockSpec &ck = *stim.clock;
            if (ck.period_ps <= 0) throw Error("clock spec needs a positive period");
            Ps high = std::llround(static_cast<double>(ck.period_ps) * ck.duty);
            for (Ps t = ck.start_ps; t <= opt_.until_ps; t += ck.period_ps) {
                evs.push_back({t, ck.port, L1});
                if (t + high <= opt_.until_ps) evs.push_back({t + high, ck.port, L0});
            }
        }
        std::stable_sort(evs.begin(), evs.end(),
                         [](const StimulusEvent &a, const StimulusEvent &b) {
                             return a.t_ps < b.t_ps;
                         });
        for (const auto &ev : evs) {
            if (ev.t_ps < 0) throw Error("stimulus event before time zero");
            schedule(input_driver(ev.port), ev.t_ps, ev.v);
        }
    }

    // Power-on pass: every component is evaluated once against the all-X /
    // floating state so constant sources and X-independent gates settle.
    void initial_evaluation() {
        for (std::uint32_t ci = 0; ci < comps_.size(); ++ci)
            evaluate(ci, 0, kNoNet, LX);
    }

    OscillationError budget_error(const Waveform &w) {
        std::vector<std::pair<std::size_t, NetId>> counts;
        for (NetId n = 0; n < w.changes.size(); ++n)
            counts.push_back({w.changes[n].size(), n});
        std::sort(counts.begin(), counts.end(), [](auto &a, auto &b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        std::vector<std::string> hot;
        std::string msg = "event budget exceeded (" + std::to_string(opt_.max_events) +
                          "); most active nets:";
        for (std::size_t i = 0; i < counts.size() && i < 5; ++i) {
            if (counts[i].first == 0) break;
            hot.push_back(nl_.net_name(counts[i].second));
            msg += " " + hot.back() + "(" + std::to_string(counts[i].first) + ")";
        }
        return OscillationError(msg, std::move(hot));
    }

    void schedule(std::uint32_t driver, Ps t, LogicValue v) {
        Driver &dr = drivers_[driver];
        if (dr.model == DelayModel::Inertial) {
            if (dr.pending) {
                if (dr.pend_v == v) return; // earlier event already heading there
                dr.pending = false;         // pulse rejection
            }
            if (dr.value == v) return;
            dr.pending = true;
            dr.pend_t = t;
            dr.pend_v = v;
            dr.pend_seq = next_seq_;
            queue_.push({t, next_seq_++, driver, v});
        } else {
            LogicValue last = dr.queued > 0 ? dr.last_sched : dr.value;
            if (last == v) return;
            dr.last_sched = v;
            ++dr.queued;
            queue_.push({t, next_seq_++, driver, v});
        }
    }

    void update_net(NetId n, Ps t) {
        scratch_.clear();
        for (std::uint32_t d : net_drivers_[n]) scratch_.push_back(drivers_[d].value);
        LogicValue v = resolve(scratch_);
        if (v == LZ && nl_.nets[n].resolved) v = net_value_[n]; // charge retention
        LogicValue old = net_value_[n];
        if (v == old) return;
        net_value_[n] = v;
        record(n, t, v);
        for (std::uint32_t ci : net_readers_[n]) evaluate(ci, t, n, old);
    }

    void record(NetId n, Ps t, LogicValue v) {
        auto &ch = wave_->changes[n];
        if (!ch.empty() && ch.back().t_ps == t) {
            ch.back().v = v;
            LogicValue prev = ch.size() >= 2 ? ch[ch.size() - 2].v : wave_->initial[n];
            if (prev == v) ch.pop_back();
        } else {
            ch.push_back({t, v});
        }
    }

    void evaluate(std::uint32_t ci, Ps t, NetId changed, LogicValue old_value) {
        const SimComponent &sc = comps_[ci];
        if (sc.kind == ComponentKind::Primitive) {
            scratch_.clear();
            for (NetId n : sc.in) scratch_.push_back(net_value_[n]);
            LogicValue v = eval_primitive(sc.prim, scratch_);
            schedule(ci, t + sc.delay, v);
            return;
        }
        // Behavioral flip-flop: reacts to its clock net only.
        if (changed != sc.in[1]) return;
        LogicValue nv = net_value_[sc.in[1]];
        bool clean_edge = old_value == L0 && nv == L1;
        bool murky_edge = (old_value == L0 && !is_strong(nv)) ||
                          (!is_strong(old_value) && nv == L1);
        if (!clean_edge && !murky_edge) return;
        LogicValue d = net_value_[sc.in[0]];
        LogicValue q = (clean_edge && is_strong(d)) ? d : LX;
        schedule(ci, t + sc.delay, q);
    }
};

} // namespace

SimResult simulate(const Netlist &flat, const Stimulus &stim, const SimOptions &opt) {
    Engine engine(flat, stim, opt);
    return engine.run();
}

bool verify_quiescent(const Netlist &flat, const SimResult &res) {
    std::vector<LogicValue> in;
    for (std::size_t ci = 0; ci < flat.components.size(); ++ci) {
        const auto &c = flat.components[ci];
        if (c.kind != ComponentKind::Primitive) continue; // FFs hold between edges
        in.clear();
        for (const char *p : primitive_inputs(c.prim))
            in.push_back(res.final_nets[c.port(p)]);
        if (eval_primitive(c.prim, in) != res.final_drivers[ci]) return false;
    }
    return true;
}

std::optional<Ps> measure_delay(const Waveform &w, NetId input, Ps input_t, NetId output) {
    if (!w.has_change_at(input, input_t))
        throw Error("measure_delay: no transition on '" + w.net_names[input] + "' at " +
                    std::to_string(input_t) + " ps");
    Ps bound = w.end_ps + 1;
    for (const auto &c : w.changes[input])
        if (c.t_ps > input_t) {
            bound = c.t_ps;
            break;
        }
    std::optional<Ps> last;
    for (const auto &c : w.changes[output]) {
        if (c.t_ps <= input_t) continue;
        if (c.t_ps >= bound) break;
        last = c.t_ps;
    }
    if (!last) return std::nullopt;
    return *last - input_t;
}

std::vector<TimingViolation> check_timing(const Waveform &w,
                                          std::span<const FfTimingSpec> ffs,
                                          Ps setup_ps, Ps hold_ps) {
    std::vector<TimingViolation> out;
    for (const auto &ff : ffs) {
        LogicValue prev = w.initial[ff.clk];
        for (const auto &edge : w.changes[ff.clk]) {
            bool rising = prev == L0 && edge.v == L1;
            prev = edge.v;
            if (!rising) continue;
            for (const auto &dc : w.changes[ff.d]) {
                if (dc.t_ps < edge.t_ps - setup_ps) continue;
                if (dc.t_ps > edge.t_ps + hold_ps) break;
                out.push_back({ff.name, edge.t_ps, dc.t_ps,
                               dc.t_ps < edge.t_ps ? TimingViolation::Kind::Setup
                                                   : TimingViolation::Kind::Hold});
            }
        }
    }
    return out;
}

std::vector<FfTimingSpec> ff_timing_specs(const Netlist &flat) {
    std::vector<FfTimingSpec> specs;
    for (const auto &c : flat.components)
        if (c.kind == ComponentKind::BehavioralFf)
            specs.push_back({c.id, c.port("d"), c.port("clk")});
    return specs;
}

} // namespace shiftsim
