#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ifm/circuit.hpp"
#include "ifm/estimation.hpp"
#include "ifm/parser.hpp"

namespace {

using namespace ifm;

constexpr int kExitParseError = 1;
constexpr int kExitPhysicsError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        out << text;
    }
}

// Human-readable output rounds to 6 digits; json keeps full precision.
std::string pretty_complex(cdouble z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%+.6f%+.6fi", z.real(), z.imag());
    return buf;
}

nlohmann::json complex_json(cdouble z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

std::string element_name(const Element& e) {
    switch (e.kind()) {
        case ElementKind::Beamsplitter: return "beamsplitter";
        case ElementKind::PerfectAbsorber: return "absorber";
        case ElementKind::PartialObject: return "partial object";
        case ElementKind::MirrorRedirect: return "mirror";
        case ElementKind::Identity: return "identity";
        case ElementKind::Custom: return "custom";
    }
    return "?";
}

std::string trace_pretty(const ParsedCircuit& parsed, const StateVector& input,
                         const EvolutionResult& result) {
    const auto& reg = parsed.circuit.registry();
    std::string out = "input:\n";
    auto print_state = [&](const StateVector& s) {
        std::string block;
        for (std::size_t c = 0; c < reg.size(); ++c) {
            block += "  " + reg.at(c).name + ": " +
                     pretty_complex(s.amplitudes()[c]) + "\n";
        }
        return block;
    };
    out += print_state(input);
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        out += "after " + element_name(parsed.circuit.elements()[i]) + ":\n";
        out += print_state(result.trace[i]);
    }
    return out;
}

nlohmann::json trace_json(const ParsedCircuit& parsed, const StateVector& input,
                          const EvolutionResult& result) {
    const auto& reg = parsed.circuit.registry();
    nlohmann::json j;
    for (std::size_t c = 0; c < reg.size(); ++c) {
        j["channels"].push_back(reg.at(c).name);
    }
    auto state_json = [&](const StateVector& s) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& z : s.amplitudes()) a.push_back(complex_json(z));
        return a;
    };
    j["input"] = state_json(input);
    j["trace"] = nlohmann::json::array();
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        j["trace"].push_back({{"element", element_name(parsed.circuit.elements()[i])},
                              {"state", state_json(result.trace[i])}});
    }
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"Single-photon interferometer simulator and estimator"};
    app.require_subcommand(1);

    std::string circuit_path, out_path, format = "pretty";
    std::string object_path, reference_path;
    std::string detector_a = "D_a", detector_b = "D_b";
    std::uint64_t shots = 1000000, seed = 1;
    bool with_reference = false, allow_undefined_phase = false;
    std::size_t t_steps = 20, chi_steps = 20;
    double t_min = 0.0, t_max = 1.0, chi_min = 0.0, chi_max = M_PI;

    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "pretty|json (sweep: csv|jsonl)");
        cmd->add_option("--out", out_path, "write output to file instead of stdout");
    };

    auto* simulate = app.add_subcommand(
        "simulate", "print the amplitude trace of a circuit file");
    simulate->add_option("circuit", circuit_path)->required();
    simulate->add_flag("--reference", with_reference,
                       "evolve with the object removed");
    add_io(simulate);

    auto* sil = app.add_subcommand(
        "silhouette", "print the scattering-amplitude decomposition");
    sil->add_option("circuit", circuit_path)->required();
    add_io(sil);

    auto* smp = app.add_subcommand("sample", "Monte Carlo detector counts");
    smp->add_option("circuit", circuit_path)->required();
    smp->add_option("--shots", shots);
    smp->add_option("--seed", seed);
    smp->add_flag("--reference", with_reference,
                  "sample the object-removed run");
    smp->add_option("--out", out_path);

    auto* est = app.add_subcommand(
        "estimate", "reconstruct W and chi from two count-record files");
    est->add_option("object_counts", object_path)->required();
    est->add_option("reference_counts", reference_path)->required();
    est->add_option("--detector-a", detector_a, "dark-port detector name");
    est->add_option("--detector-b", detector_b, "bright-port detector name");
    est->add_flag("--allow-undefined-phase", allow_undefined_phase);
    est->add_option("--out", out_path);

    auto* swp = app.add_subcommand("sweep",
                                   "round-trip estimates over a (t, chi) grid");
    swp->add_option("--t-steps", t_steps);
    swp->add_option("--chi-steps", chi_steps);
    swp->add_option("--t-min", t_min);
    swp->add_option("--t-max", t_max);
    swp->add_option("--chi-min", chi_min);
    swp->add_option("--chi-max", chi_max);
    swp->add_option("--shots", shots);
    swp->add_option("--seed", seed);
    swp->add_option("--format", format, "csv|jsonl");
    swp->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    if (*simulate || *sil || *smp) {
        const auto parsed = parse_circuit(read_file(circuit_path));
        const auto input =
            StateVector::basis(parsed.circuit.registry_ptr(), parsed.input_mode);

        if (*simulate) {
            const auto result = with_reference
                                    ? reference_evolution(parsed.circuit, input)
                                    : evolve(parsed.circuit, input);
            write_output(out_path, format == "json"
                                       ? trace_json(parsed, input, result).dump(2) + "\n"
                                       : trace_pretty(parsed, input, result));
        } else if (*sil) {
            const auto s = silhouette(parsed.circuit, input);
            if (format == "json") {
                nlohmann::json j;
                for (const auto& c : s.breakdown) {
                    j["components"].push_back(
                        {{"channel", c.channel.name},
                         {"amplitude", complex_json(c.amplitude)},
                         {"part", c.forward_scattered ? "forward_scattered"
                                                      : "reaction"}});
                }
                write_output(out_path, j.dump(2) + "\n");
            } else {
                std::string text = "scattering amplitude (with object minus reference):\n";
                for (const auto& c : s.breakdown) {
                    text += "  " + c.channel.name + ": " +
                            pretty_complex(c.amplitude) +
                            (c.forward_scattered ? "   [forward-scattered]"
                                                 : "   [reaction/absorption]") +
                            "\n";
                }
                write_output(out_path, text);
            }
        } else {
            const auto result = with_reference
                                    ? reference_evolution(parsed.circuit, input)
                                    : evolve(parsed.circuit, input);
            const auto record =
                sample(result.final_state, parsed.detectors, shots, seed);
            write_output(out_path, to_json(record) + "\n");
        }
        return 0;
    }

    if (*est) {
        const auto object_counts = count_record_from_json(read_file(object_path));
        const auto reference_counts =
            count_record_from_json(read_file(reference_path));
        const auto estimate = reconstruct_object(object_counts, reference_counts,
                                                 detector_a, detector_b);
        write_output(out_path, to_json(estimate) + "\n");
        if (estimate.phase_undefined && !allow_undefined_phase) {
            std::cerr << "error: phase undefined (W = 1); pass "
                         "--allow-undefined-phase to accept\n";
            return kExitPhysicsError;
        }
        return 0;
    }

    // sweep
    auto grid = [](double lo, double hi, std::size_t n) {
        std::vector<double> g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1);
        }
        return g;
    };
    const auto rows = sweep(grid(t_min, t_max, t_steps),
                            grid(chi_min, chi_max, chi_steps), shots, seed);
    write_output(out_path,
                 format == "jsonl" ? sweep_to_jsonl(rows) : sweep_to_csv(rows));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ifm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParseError;
    } catch (const ifm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPhysicsError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParseError;
    }
}
