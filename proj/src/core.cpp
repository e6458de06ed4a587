#include "ifm/core.hpp"

#include <algorithm>
#include <cmath>

namespace ifm {

namespace {
constexpr double kUnitarityTol = 1e-10;

void check_unitary_on_construction(const Element& e) {
    auto check = verify_unitary(e, kUnitarityTol);
    if (!check.ok) {
        throw InvalidParameter("constructed element is not unitary, deviation " +
                               std::to_string(check.max_deviation));
    }
}
}  // namespace

std::string to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::PhotonMode: return "photon";
        case ChannelKind::AbsorberExcited: return "excited";
        case ChannelKind::LossOrOutgoing: return "loss";
    }
    return "?";
}

ChannelRegistry::ChannelRegistry(std::vector<ChannelLabel> labels)
    : labels_(std::move(labels)) {
    if (labels_.empty()) {
        throw InvalidParameter("registry needs at least one channel");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        auto [it, inserted] = index_.emplace(labels_[i].name, i);
        if (!inserted) {
            throw DuplicateChannel("duplicate channel name '" + labels_[i].name + "'");
        }
    }
}

bool ChannelRegistry::contains(const std::string& name) const {
    return index_.count(name) > 0;
}

std::size_t ChannelRegistry::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
        throw ChannelNotInRegistry("channel '" + name + "' not in registry");
    }
    return it->second;
}

RegistryPtr make_registry(std::vector<ChannelLabel> labels) {
    return std::make_shared<const ChannelRegistry>(std::move(labels));
}

StateVector::StateVector(RegistryPtr registry, std::vector<cdouble> amplitudes,
                         bool normalized)
    : registry_(std::move(registry)),
      amps_(std::move(amplitudes)),
      normalized_(normalized) {
    if (!registry_) throw InvalidParameter("null registry");
    if (amps_.size() != registry_->size()) {
        throw InvalidParameter("amplitude count does not match registry size");
    }
    if (normalized_ && std::abs(norm_squared() - 1.0) > 1e-10) {
        throw NotAState("state norm^2 deviates from 1 by more than 1e-10");
    }
}

StateVector StateVector::basis(RegistryPtr registry, const std::string& channel) {
    std::vector<cdouble> amps(registry->size(), 0.0);
    amps[registry->index_of(channel)] = 1.0;
    return StateVector(std::move(registry), std::move(amps));
}

cdouble StateVector::amplitude(const std::string& channel) const {
    return amps_[registry_->index_of(channel)];
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

Element::Element(ElementKind kind, std::vector<ChannelLabel> touched,
                 std::vector<cdouble> matrix)
    : kind_(kind), touched_(std::move(touched)), matrix_(std::move(matrix)) {
    if (touched_.empty()) throw InvalidParameter("element touches no channel");
    if (matrix_.size() != touched_.size() * touched_.size()) {
        throw InvalidParameter("element matrix is not square over its channels");
    }
    for (std::size_t i = 0; i < touched_.size(); ++i) {
        for (std::size_t j = i + 1; j < touched_.size(); ++j) {
            if (touched_[i].name == touched_[j].name) {
                throw DuplicateChannel("element touches channel '" +
                                       touched_[i].name + "' twice");
            }
        }
    }
}

bool Element::touches(const std::string& name) const {
    return std::any_of(touched_.begin(), touched_.end(),
                       [&](const ChannelLabel& l) { return l.name == name; });
}

Element make_beamsplitter(const ChannelLabel& mode1, const ChannelLabel& mode2,
                          double theta) {
    if (mode1.kind != ChannelKind::PhotonMode ||
        mode2.kind != ChannelKind::PhotonMode) {
        throw InvalidChannelKind("beamsplitter channels must be photon modes");
    }
    if (theta < 0.0 || theta > M_PI_2) {
        throw InvalidParameter("beamsplitter angle must lie in [0, pi/2]");
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<cdouble> m = {c, cdouble(0, s), cdouble(0, s), c};
    Element e(ElementKind::Beamsplitter, {mode1, mode2}, std::move(m));
    check_unitary_on_construction(e);
    return e;
}

Element make_perfect_absorber(const ChannelLabel& mode,
                              const ChannelLabel& excited) {
    if (mode.kind != ChannelKind::PhotonMode) {
        throw InvalidChannelKind("absorber must sit on a photon mode");
    }
    if (excited.kind != ChannelKind::AbsorberExcited) {
        throw InvalidChannelKind("absorber excitation channel has wrong kind");
    }
    std::vector<cdouble> m = {0, -1, 1, 0};
    Element e(ElementKind::PerfectAbsorber, {mode, excited}, std::move(m));
    check_unitary_on_construction(e);
    return e;
}

Element make_partial_object(const ChannelLabel& mode, double t, double chi,
                            const ChannelLabel& loss) {
    if (mode.kind != ChannelKind::PhotonMode) {
        throw InvalidChannelKind("partial object must sit on a photon mode");
    }
    if (loss.kind != ChannelKind::LossOrOutgoing) {
        throw InvalidChannelKind("partial-object loss channel has wrong kind");
    }
    if (t < 0.0 || t > 1.0) {
        throw InvalidParameter("transmission amplitude t must lie in [0, 1]");
    }
    const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
    const cdouble phase = std::polar(1.0, chi);
    // Free dilation phase fixed to chi; at t=0, chi=0 this is [[0,-1],[1,0]].
    std::vector<cdouble> m = {t * phase, -r * phase, r, cdouble(t)};
    Element e(ElementKind::PartialObject, {mode, loss}, std::move(m));
    check_unitary_on_construction(e);
    return e;
}

Element make_mirror_redirect(const ChannelLabel& mode,
                             const ChannelLabel& out) {
    if (mode.kind != ChannelKind::PhotonMode) {
        throw InvalidChannelKind("mirror must sit on a photon mode");
    }
    if (out.kind != ChannelKind::LossOrOutgoing) {
        throw InvalidChannelKind("mirror outgoing channel has wrong kind");
    }
    std::vector<cdouble> m = {0, -1, 1, 0};
    Element e(ElementKind::MirrorRedirect, {mode, out}, std::move(m));
    check_unitary_on_construction(e);
    return e;
}

Element make_identity(const ChannelLabel& mode) {
    return Element(ElementKind::Identity, {mode}, {cdouble(1.0)});
}

StateVector apply(const Element& element, const StateVector& state) {
    const auto& reg = state.registry();
    const std::size_t k = element.dim();
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = reg.index_of(element.touched()[i].name);
    }
    std::vector<cdouble> amps = state.amplitudes();
    std::vector<cdouble> block(k);
    for (std::size_t i = 0; i < k; ++i) block[i] = amps[idx[i]];
    for (std::size_t i = 0; i < k; ++i) {
        cdouble acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += element.entry(i, j) * block[j];
        amps[idx[i]] = acc;
    }
    return StateVector(state.registry_ptr(), std::move(amps), state.normalized());
}

UnitarityCheck verify_unitary(const Element& element, double tol) {
    if (tol <= 0.0) throw InvalidParameter("tolerance must be positive");
    const std::size_t k = element.dim();
    double max_dev = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            cdouble acc = 0.0;  // (U^dag U)_{ij}
            for (std::size_t r = 0; r < k; ++r) {
                acc += std::conj(element.entry(r, i)) * element.entry(r, j);
            }
            if (i == j) acc -= 1.0;
            max_dev = std::max(max_dev, std::abs(acc));
        }
    }
    return {max_dev <= tol, max_dev};
}

}  // namespace ifm
