#ifndef SHIFTSIM_VCD_HPP
#define SHIFTSIM_VCD_HPP

#include <string>

#include "shiftsim/sim.hpp"

namespace shiftsim {

/// Standard Value Change Dump at 1 ps timescale. Identifier assignment
/// follows net-id order and the output is byte-identical for identical
/// waveforms.
std::string write_vcd(const Waveform &w, const Netlist &nl);

} // namespace shiftsim

#endif
