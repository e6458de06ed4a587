#ifndef IFM_CORE_HPP
#define IFM_CORE_HPP

#include <complex>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ifm/errors.hpp"

namespace ifm {

using cdouble = std::complex<double>;

enum class ChannelKind {
    PhotonMode,      // hosts a photon detector
    AbsorberExcited, // hosts the absorber ("bomb") detector
    LossOrOutgoing   // hosts an optional external detector
};

struct ChannelLabel {
    ChannelKind kind;
    std::string name;

    bool operator==(const ChannelLabel&) const = default;
};

std::string to_string(ChannelKind kind);

/// Ordered set of channels; the order fixes the basis ordering used by all
/// matrices and state vectors.
class ChannelRegistry {
public:
    explicit ChannelRegistry(std::vector<ChannelLabel> labels);

    std::size_t size() const { return labels_.size(); }
    const ChannelLabel& at(std::size_t i) const { return labels_.at(i); }
    const std::vector<ChannelLabel>& labels() const { return labels_; }

    bool contains(const std::string& name) const;
    std::size_t index_of(const std::string& name) const;

    bool operator==(const ChannelRegistry& other) const {
        return labels_ == other.labels_;
    }

private:
    std::vector<ChannelLabel> labels_;
    std::unordered_map<std::string, std::size_t> index_;
};

using RegistryPtr = std::shared_ptr<const ChannelRegistry>;

RegistryPtr make_registry(std::vector<ChannelLabel> labels);

/// Complex amplitudes over an ordered channel registry. Physical states are
/// unit-norm; amplitude differences (silhouettes) carry normalized() == false.
class StateVector {
public:
    StateVector(RegistryPtr registry, std::vector<cdouble> amplitudes,
                bool normalized = true);

    /// Photon injected on a single channel, amplitude 1.
    static StateVector basis(RegistryPtr registry, const std::string& channel);

    const ChannelRegistry& registry() const { return *registry_; }
    RegistryPtr registry_ptr() const { return registry_; }
    std::size_t size() const { return amps_.size(); }
    const std::vector<cdouble>& amplitudes() const { return amps_; }
    cdouble amplitude(const std::string& channel) const;
    bool normalized() const { return normalized_; }

    double norm_squared() const;

private:
    RegistryPtr registry_;
    std::vector<cdouble> amps_;
    bool normalized_;
};

enum class ElementKind {
    Beamsplitter,
    PerfectAbsorber,
    PartialObject,
    MirrorRedirect,
    Identity,
    Custom
};

/// A unitary acting on a named subset of channels; channels outside `touched`
/// are acted on as identity.
class Element {
public:
    Element(ElementKind kind, std::vector<ChannelLabel> touched,
            std::vector<cdouble> matrix);

    ElementKind kind() const { return kind_; }
    const std::vector<ChannelLabel>& touched() const { return touched_; }
    std::size_t dim() const { return touched_.size(); }

    /// Row-major dim x dim block over the touched channels.
    const std::vector<cdouble>& matrix() const { return matrix_; }
    cdouble entry(std::size_t row, std::size_t col) const {
        return matrix_[row * touched_.size() + col];
    }

    bool touches(const std::string& name) const;

private:
    ElementKind kind_;
    std::vector<ChannelLabel> touched_;
    std::vector<cdouble> matrix_;
};

/// Symmetric beamsplitter with mixing angle theta, i phase on reflection.
/// theta = pi/4 is the 50% splitter.
Element make_beamsplitter(const ChannelLabel& mode1, const ChannelLabel& mode2,
                          double theta);

/// Photon amplitude on `mode` transfers entirely to the absorber excitation
/// channel; block [[0, -1], [1, 0]] on (mode, excited).
Element make_perfect_absorber(const ChannelLabel& mode,
                              const ChannelLabel& excited);

/// Unitary dilation of the transmission amplitude t e^{i chi}: the photon
/// keeps amplitude t e^{i chi} on `mode` and sqrt(1-t^2) leaks to `loss`.
/// The free dilation phase is fixed so t=0, chi=0 matches the perfect
/// absorber's column structure.
Element make_partial_object(const ChannelLabel& mode, double t, double chi,
                            const ChannelLabel& loss);

/// Perfect mirror: amplitude moves from `mode` to the outgoing channel with
/// the same sign structure as the perfect absorber.
Element make_mirror_redirect(const ChannelLabel& mode, const ChannelLabel& out);

/// Identity placeholder on one mode (used as the removed-object element).
Element make_identity(const ChannelLabel& mode);

StateVector apply(const Element& element, const StateVector& state);

struct UnitarityCheck {
    bool ok;
    double max_deviation;  // max |(U^dag U - I)_{jk}|
};

UnitarityCheck verify_unitary(const Element& element, double tol = 1e-10);

}  // namespace ifm

#endif
