#include "ifm/circuit.hpp"

#include <set>

namespace ifm {

Circuit::Circuit(RegistryPtr registry, std::vector<Element> elements,
                 std::size_t object_slot)
    : registry_(std::move(registry)),
      elements_(std::move(elements)),
      object_slot_(object_slot) {
    if (!registry_) throw InvalidParameter("null registry");
    // An element-less circuit is allowed (evolution is the identity); the
    // slot must be valid whenever there are elements.
    if (!elements_.empty() && object_slot_ >= elements_.size()) {
        throw InvalidParameter("object_slot out of range");
    }
    std::set<std::string> claimed_ancillas;
    for (const auto& e : elements_) {
        for (const auto& label : e.touched()) {
            const auto idx = registry_->index_of(label.name);
            if (registry_->at(idx).kind != label.kind) {
                throw InvalidChannelKind("channel '" + label.name +
                                         "' kind differs from registry");
            }
            // Each lossy element owns its ancilla channels exclusively.
            if (label.kind != ChannelKind::PhotonMode) {
                if (!claimed_ancillas.insert(label.name).second) {
                    throw SharedLossChannel("loss channel '" + label.name +
                                            "' shared between elements");
                }
            }
        }
    }
}

Circuit build_mach_zehnder(const Element& object, double theta1,
                           double theta2) {
    if (object.touches("a")) {
        throw InvalidObjectPlacement("object must sit on mode b, not a");
    }
    if (!object.touches("b")) {
        throw InvalidObjectPlacement("object must act on mode b");
    }
    const ChannelLabel a{ChannelKind::PhotonMode, "a"};
    const ChannelLabel b{ChannelKind::PhotonMode, "b"};
    std::vector<ChannelLabel> labels = {a, b};
    for (const auto& label : object.touched()) {
        if (label.name != "b") labels.push_back(label);
    }
    auto registry = make_registry(std::move(labels));
    std::vector<Element> elements;
    elements.push_back(make_beamsplitter(a, b, theta1));
    elements.push_back(object);
    elements.push_back(make_beamsplitter(a, b, theta2));
    return Circuit(std::move(registry), std::move(elements), 1);
}

namespace {

EvolutionResult run(const Circuit& circuit, const StateVector& input,
                    bool object_removed) {
    if (!(input.registry() == circuit.registry())) {
        throw ChannelNotInRegistry("input state registry differs from circuit");
    }
    EvolutionResult result{input, {}};
    result.trace.reserve(circuit.elements().size());
    for (std::size_t i = 0; i < circuit.elements().size(); ++i) {
        if (!(object_removed && i == circuit.object_slot())) {
            result.final_state = apply(circuit.elements()[i], result.final_state);
        }
        result.trace.push_back(result.final_state);
    }
    return result;
}

}  // namespace

EvolutionResult evolve(const Circuit& circuit, const StateVector& input) {
    return run(circuit, input, false);
}

EvolutionResult reference_evolution(const Circuit& circuit,
                                    const StateVector& input) {
    return run(circuit, input, true);
}

Silhouette silhouette(const Circuit& circuit, const StateVector& input) {
    const auto with_object = evolve(circuit, input);
    const auto reference = reference_evolution(circuit, input);
    std::vector<cdouble> diff(with_object.final_state.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = with_object.final_state.amplitudes()[i] -
                  reference.final_state.amplitudes()[i];
    }
    Silhouette s{StateVector(circuit.registry_ptr(), std::move(diff),
                             /*normalized=*/false),
                 {}};
    for (std::size_t i = 0; i < circuit.registry().size(); ++i) {
        const auto& label = circuit.registry().at(i);
        s.breakdown.push_back({label, s.difference.amplitudes()[i],
                               label.kind == ChannelKind::PhotonMode});
    }
    return s;
}

}  // namespace ifm
