#ifndef IFM_CIRCUIT_HPP
#define IFM_CIRCUIT_HPP

#include <optional>
#include <vector>

#include "ifm/core.hpp"

namespace ifm {

/// Ordered element list over a registry, with exactly one designated
/// "object" slot used for the reference (object-removed) comparison.
class Circuit {
public:
    Circuit(RegistryPtr registry, std::vector<Element> elements,
            std::size_t object_slot);

    const ChannelRegistry& registry() const { return *registry_; }
    RegistryPtr registry_ptr() const { return registry_; }
    const std::vector<Element>& elements() const { return elements_; }
    std::size_t object_slot() const { return object_slot_; }
    const Element& object() const { return elements_[object_slot_]; }

private:
    RegistryPtr registry_;
    std::vector<Element> elements_;
    std::size_t object_slot_;
};

/// [BS(a,b,theta1), object, BS(a,b,theta2)] with the photon conventionally
/// injected on mode "a". The object must act on mode "b" plus its own
/// ancilla channels.
Circuit build_mach_zehnder(const Element& object, double theta1 = M_PI / 4,
                           double theta2 = M_PI / 4);

struct EvolutionResult {
    StateVector final_state;
    std::vector<StateVector> trace;  // one entry per element
};

EvolutionResult evolve(const Circuit& circuit, const StateVector& input);

/// Same circuit with the object-slot element replaced by identity.
EvolutionResult reference_evolution(const Circuit& circuit,
                                    const StateVector& input);

/// Per-channel piece of the scattering amplitude. Photon-mode components are
/// the forward-scattered wave; ancilla components are the absorption /
/// reaction amplitude.
struct SilhouetteComponent {
    ChannelLabel channel;
    cdouble amplitude;
    bool forward_scattered;
};

struct Silhouette {
    StateVector difference;  // evolve final minus reference final, not normalized
    std::vector<SilhouetteComponent> breakdown;
};

Silhouette silhouette(const Circuit& circuit, const StateVector& input);

}  // namespace ifm

#endif
