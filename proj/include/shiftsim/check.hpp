#ifndef SHIFTSIM_CHECK_HPP
#define SHIFTSIM_CHECK_HPP

#include "shiftsim/datapath.hpp"

namespace shiftsim {

/// Fixed, documented pseudo-random stream so seeds reproduce everywhere:
/// splitmix64 (state += 0x9e3779b97f4a7c15; two xor-multiply finalizer
/// rounds with 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb).
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint32_t bits(int n) { return static_cast<std::uint32_t>(next() >> (64 - n)); }
};

struct CheckFailure {
    std::uint64_t case_index = 0;
    std::string stimulus; // human-readable replay key
    std::string expected;
    std::string observed;
};

struct CheckReport {
    std::string circuit;
    std::uint64_t cases = 0;
    std::vector<CheckFailure> failures;
    bool pass() const { return failures.empty(); }
};

/// All 8 x 16 x 16 input combinations of a flattened gate-level ALU
/// against the integer golden model, with settle time between vectors.
CheckReport check_alu_exhaustive(const Netlist &flat);

/// Observed outputs for a single ALU vector (replay support).
AluResult simulate_alu_vector(const Netlist &flat, AluControl ctrl, Word4 a, Word4 b);

/// Seeded random mode/data sequence on a flattened shift register vs the
/// iterated golden step, after a parallel-load preload.
CheckReport check_usr_random(const Netlist &flat, std::uint64_t seed, int steps);

/// Seeded random run of the combined system vs the golden cycle model,
/// after a serial preload (the register is only reachable through the
/// ALU, so known state is shifted in).
CheckReport check_system_random(const Netlist &flat, std::uint64_t seed, int steps);

struct DelayEntry {
    FlipFlopVariant variant;
    std::optional<Ps> delay_ps; // empty when the output never settles/responds
    bool oscillatory = false;
    Ps reference_ps = 0; // shipped calibration value
};

struct DelayReport {
    std::vector<DelayEntry> entries;
    std::vector<FlipFlopVariant> min_delay_set() const;
};

/// Parallel-load clock-to-settle delay of the shift register for every
/// flip-flop variant, measured from the load edge to the last output
/// transition of the settling burst.
DelayReport delay_report(const CellDelayConfig &cfg,
                         CellMode mode = CellMode::Behavioral);

struct WaveDiff {
    std::string net;
    // (time, value in a, value in b); empty when identical
    std::optional<std::tuple<Ps, LogicValue, LogicValue>> first_divergence;
};

std::vector<WaveDiff> diff_waveforms(const Waveform &a, const Waveform &b,
                                     std::span<const std::string> nets);

/// Longest component-delay path, with feedback edges cut; the harness
/// settle time is twice this, rounded up to whole nanoseconds.
Ps estimate_path_ps(const Netlist &flat);
Ps settle_ps(const Netlist &flat);

} // namespace shiftsim

#endif
