#include "shiftsim/vcd.hpp"

#include <algorithm>
#include <sstream>

namespace shiftsim {

namespace {

std::string vcd_id(std::size_t n) {
    std::string s;
    do {
        s.push_back(static_cast<char>('!' + n % 94));
        n /= 94;
    } while (n > 0);
    return s;
}

} // namespace

std::string write_vcd(const Waveform &w, const Netlist &nl) {
    std::ostringstream out;
    out << "$version shiftsim $end\n";
    out << "$timescale 1ps $end\n";

    std::string scope = nl.name.empty() ? "top" : nl.name;
    std::replace(scope.begin(), scope.end(), ' ', '_');
    out << "$scope module " << scope << " $end\n";
    for (std::size_t i = 0; i < w.net_names.size(); ++i)
        out << "$var wire 1 " << vcd_id(i) << " " << w.net_names[i] << " $end\n";
    out << "$upscope $end\n";
    out << "$enddefinitions $end\n";

    out << "$dumpvars\n";
    for (std::size_t i = 0; i < w.net_names.size(); ++i)
        out << to_char(w.initial[i]) << vcd_id(i) << "\n";
    out << "$end\n";

    // Merge per-net histories into one monotone timeline.
    std::vector<std::size_t> pos(w.changes.size(), 0);
    for (;;) {
        Ps t = -1;
        for (std::size_t i = 0; i < w.changes.size(); ++i)
            if (pos[i] < w.changes[i].size() &&
                (t < 0 || w.changes[i][pos[i]].t_ps < t))
                t = w.changes[i][pos[i]].t_ps;
        if (t < 0) break;
        out << "#" << t << "\n";
        for (std::size_t i = 0; i < w.changes.size(); ++i)
            if (pos[i] < w.changes[i].size() && w.changes[i][pos[i]].t_ps == t) {
                out << to_char(w.changes[i][pos[i]].v) << vcd_id(i) << "\n";
                ++pos[i];
            }
    }
    return out.str();
}

} // namespace shiftsim
