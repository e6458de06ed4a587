#ifndef IFM_PARSER_HPP
#define IFM_PARSER_HPP

#include <string>
#include <vector>

#include "ifm/circuit.hpp"
#include "ifm/measurement.hpp"

namespace ifm {

/// Line-oriented circuit description, one statement per line, `#` comments:
///
///   channel <name> <photon|excited|loss>
///   bs <mode1> <mode2> <theta>          # theta accepts pi, pi/4, 0.785...
///   absorber <mode> <excited> [@object]
///   partial <mode> <loss> <t> <chi> [@object]
///   mirror <mode> <out> [@object]
///   input <mode>                        # default: first declared photon mode
///   detector <name> <channel> [efficiency]
///
/// Without an @object tag the object slot falls to the single lossy element,
/// if there is exactly one.
struct ParsedCircuit {
    Circuit circuit;
    DetectorConfig detectors;
    std::string input_mode;
};

ParsedCircuit parse_circuit(const std::string& text);

/// Serializes back to the statement format; parse(print(c)) rebuilds an
/// equivalent circuit.
std::string print_circuit(const ParsedCircuit& parsed);

}  // namespace ifm

#endif
