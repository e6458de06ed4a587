#include "ifm/parser.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace ifm {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream in(body);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

double parse_number(const std::string& tok, int line, const char* what) {
    // Angles accept pi, pi/N and N*pi shorthands.
    if (tok == "pi") return M_PI;
    if (tok.rfind("pi/", 0) == 0) {
        return M_PI / parse_number(tok.substr(3), line, what);
    }
    if (tok.size() > 2 && tok.compare(tok.size() - 3, 3, "*pi") == 0) {
        return M_PI * parse_number(tok.substr(0, tok.size() - 3), line, what);
    }
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != tok.size()) {
        throw ParseError(line, std::string("cannot parse ") + what + " '" + tok + "'");
    }
    return v;
}

struct LineChecker {
    int line;
    void count(const std::vector<std::string>& tokens, std::size_t min,
               std::size_t max, const char* usage) const {
        if (tokens.size() < min || tokens.size() > max) {
            throw ParseError(line, std::string("expected: ") + usage);
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ParsedCircuit parse_circuit(const std::string& text) {
    std::map<std::string, ChannelLabel> channels;
    std::vector<ChannelLabel> channel_order;
    std::vector<Element> elements;
    std::map<std::string, int> ancilla_use;  // ancilla channel -> line
    std::map<std::string, int> detector_use;
    DetectorConfig detectors;
    std::string input_mode;
    int object_line = 0;
    std::optional<std::size_t> object_slot;

    auto lookup = [&](const std::string& name, ChannelKind kind, int line,
                      const char* role) -> const ChannelLabel& {
        auto it = channels.find(name);
        if (it == channels.end()) {
            throw ParseError(line, "unknown channel '" + name + "'");
        }
        if (it->second.kind != kind) {
            throw ParseError(line, std::string(role) + " channel '" + name +
                                       "' must have kind " + to_string(kind) +
                                       ", got " + to_string(it->second.kind));
        }
        return it->second;
    };

    auto claim_ancilla = [&](const std::string& name, int line) {
        auto [it, inserted] = ancilla_use.emplace(name, line);
        if (!inserted) {
            throw ParseError(line, "loss channel '" + name +
                                       "' already used by the element on line " +
                                       std::to_string(it->second));
        }
    };

    auto take_object_tag = [&](std::vector<std::string>& tokens, int line) {
        if (!tokens.empty() && tokens.back() == "@object") {
            tokens.pop_back();
            if (object_slot) {
                throw ParseError(line, "second @object tag; only one allowed");
            }
            object_slot = elements.size();  // index of the element being built
            object_line = line;
            return true;
        }
        return false;
    };

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto tokens = tokenize(raw);
        if (tokens.empty()) continue;
        const LineChecker at{line};
        const std::string stmt = tokens.front();
        tokens.erase(tokens.begin());
        try {
            if (stmt == "channel") {
                at.count(tokens, 2, 2, "channel <name> <photon|excited|loss>");
                ChannelKind kind;
                if (tokens[1] == "photon") kind = ChannelKind::PhotonMode;
                else if (tokens[1] == "excited") kind = ChannelKind::AbsorberExcited;
                else if (tokens[1] == "loss") kind = ChannelKind::LossOrOutgoing;
                else throw ParseError(line, "unknown channel kind '" + tokens[1] + "'");
                ChannelLabel label{kind, tokens[0]};
                if (!channels.emplace(tokens[0], label).second) {
                    throw ParseError(line, "duplicate channel name '" + tokens[0] + "'");
                }
                channel_order.push_back(label);
            } else if (stmt == "bs") {
                at.count(tokens, 3, 3, "bs <mode1> <mode2> <theta>");
                const auto& m1 = lookup(tokens[0], ChannelKind::PhotonMode, line, "beamsplitter");
                const auto& m2 = lookup(tokens[1], ChannelKind::PhotonMode, line, "beamsplitter");
                elements.push_back(make_beamsplitter(
                    m1, m2, parse_number(tokens[2], line, "angle")));
            } else if (stmt == "absorber") {
                take_object_tag(tokens, line);
                at.count(tokens, 2, 2, "absorber <mode> <excited> [@object]");
                const auto& mode = lookup(tokens[0], ChannelKind::PhotonMode, line, "absorber");
                const auto& exc = lookup(tokens[1], ChannelKind::AbsorberExcited, line, "excitation");
                claim_ancilla(exc.name, line);
                elements.push_back(make_perfect_absorber(mode, exc));
            } else if (stmt == "partial") {
                take_object_tag(tokens, line);
                at.count(tokens, 4, 4, "partial <mode> <loss> <t> <chi> [@object]");
                const auto& mode = lookup(tokens[0], ChannelKind::PhotonMode, line, "object");
                const auto& loss = lookup(tokens[1], ChannelKind::LossOrOutgoing, line, "loss");
                claim_ancilla(loss.name, line);
                elements.push_back(make_partial_object(
                    mode, parse_number(tokens[2], line, "transmission t"),
                    parse_number(tokens[3], line, "phase chi"), loss));
            } else if (stmt == "mirror") {
                take_object_tag(tokens, line);
                at.count(tokens, 2, 2, "mirror <mode> <out> [@object]");
                const auto& mode = lookup(tokens[0], ChannelKind::PhotonMode, line, "mirror");
                const auto& out = lookup(tokens[1], ChannelKind::LossOrOutgoing, line, "outgoing");
                claim_ancilla(out.name, line);
                elements.push_back(make_mirror_redirect(mode, out));
            } else if (stmt == "input") {
                at.count(tokens, 1, 1, "input <mode>");
                input_mode =
                    lookup(tokens[0], ChannelKind::PhotonMode, line, "input").name;
            } else if (stmt == "detector") {
                at.count(tokens, 2, 3, "detector <name> <channel> [efficiency]");
                auto it = channels.find(tokens[1]);
                if (it == channels.end()) {
                    throw ParseError(line, "unknown channel '" + tokens[1] + "'");
                }
                if (!detector_use.emplace(tokens[0], line).second) {
                    throw ParseError(line, "duplicate detector name '" + tokens[0] + "'");
                }
                double eff = 1.0;
                if (tokens.size() == 3) {
                    eff = parse_number(tokens[2], line, "efficiency");
                    if (eff <= 0.0 || eff > 1.0) {
                        throw ParseError(line, "efficiency must lie in (0, 1]");
                    }
                }
                detectors.assignments.push_back({tokens[0], tokens[1], eff});
            } else {
                throw ParseError(line, "unknown statement '" + stmt + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(line, e.what());
        }
    }

    if (channel_order.empty()) throw ParseError(1, "no channels declared");

    if (!object_slot) {
        // Fall back to the unique lossy element.
        std::optional<std::size_t> lossy;
        for (std::size_t i = 0; i < elements.size(); ++i) {
            const auto kind = elements[i].kind();
            if (kind == ElementKind::PerfectAbsorber ||
                kind == ElementKind::PartialObject ||
                kind == ElementKind::MirrorRedirect) {
                if (lossy) {
                    throw ParseError(line, "multiple lossy elements; tag one with @object");
                }
                lossy = i;
            }
        }
        object_slot = lossy;
    }
    if (!elements.empty() && !object_slot) {
        throw ParseError(line, "no @object tag and no lossy element to infer it from");
    }

    if (input_mode.empty()) {
        for (const auto& label : channel_order) {
            if (label.kind == ChannelKind::PhotonMode) {
                input_mode = label.name;
                break;
            }
        }
        if (input_mode.empty()) throw ParseError(line, "no photon mode declared");
    }

    try {
        Circuit circuit(make_registry(channel_order), std::move(elements),
                        object_slot.value_or(0));
        return ParsedCircuit{std::move(circuit), std::move(detectors),
                             std::move(input_mode)};
    } catch (const Error& e) {
        throw ParseError(line, e.what());
    }
}

std::string print_circuit(const ParsedCircuit& parsed) {
    std::string out;
    const auto& registry = parsed.circuit.registry();
    for (std::size_t i = 0; i < registry.size(); ++i) {
        const auto& label = registry.at(i);
        out += "channel " + label.name + " " + to_string(label.kind) + "\n";
    }
    const auto& elements = parsed.circuit.elements();
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const auto& e = elements[i];
        const std::string tag =
            (!elements.empty() && i == parsed.circuit.object_slot() &&
             e.kind() != ElementKind::Beamsplitter)
                ? " @object"
                : "";
        switch (e.kind()) {
            case ElementKind::Beamsplitter: {
                const double theta =
                    std::atan2(e.entry(0, 1).imag(), e.entry(0, 0).real());
                out += "bs " + e.touched()[0].name + " " + e.touched()[1].name +
                       " " + fmt(theta) + "\n";
                break;
            }
            case ElementKind::PerfectAbsorber:
                out += "absorber " + e.touched()[0].name + " " +
                       e.touched()[1].name + tag + "\n";
                break;
            case ElementKind::MirrorRedirect:
                out += "mirror " + e.touched()[0].name + " " +
                       e.touched()[1].name + tag + "\n";
                break;
            case ElementKind::PartialObject: {
                const double t = e.entry(1, 1).real();
                const double chi = t > 0.0 ? std::arg(e.entry(0, 0))
                                           : std::arg(-e.entry(0, 1));
                out += "partial " + e.touched()[0].name + " " +
                       e.touched()[1].name + " " + fmt(t) + " " + fmt(chi) +
                       tag + "\n";
                break;
            }
            default:
                throw InvalidParameter(
                    "circuit contains an element the statement format cannot express");
        }
    }
    out += "input " + parsed.input_mode + "\n";
    for (const auto& d : parsed.detectors.assignments) {
        out += "detector " + d.detector + " " + d.channel + " " +
               fmt(d.efficiency) + "\n";
    }
    return out;
}

}  // namespace ifm
