#include "ifm/estimation.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "ifm/circuit.hpp"
#include "ifm/rng.hpp"

namespace ifm {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ClampedValue clamp_into(double raw, double lo, double hi) {
    if (raw < lo) return {lo, true};
    if (raw > hi) return {hi, true};
    return {raw, false};
}
}  // namespace

ClampedValue estimate_loss(double P1, double P2) {
    if (P1 < 0.0 || P1 > 1.0 || P2 < 0.0 || P2 > 1.0) {
        throw InvalidParameter("P1 and P2 must lie in [0, 1]");
    }
    if (P1 + P2 > 1.1) {
        throw ImplausibleInput("P1 + P2 exceeds 1 beyond plausible noise");
    }
    return clamp_into(2.0 * (1.0 - P1 - P2), 0.0, 1.0);
}

ClampedValue estimate_cos_chi(double P1, double P2, double W) {
    if (W < 0.0 || W >= 1.0) {
        throw PhaseUndefined(
            "cos chi requires W in [0, 1); a perfect absorber carries no "
            "transmitted phase");
    }
    return clamp_into((P2 - P1) / std::sqrt(1.0 - W), -1.0, 1.0);
}

ObjectEstimate reconstruct_object(
    const CountRecord& object_counts, const CountRecord& reference_counts,
    const std::string& detector_a, const std::string& detector_b,
    const std::optional<std::map<std::string, double>>& efficiencies) {
    const auto cal = calibrate(reference_counts, object_counts, detector_a,
                               detector_b, efficiencies);

    ObjectEstimate est;
    est.calibration_warning = cal.efficiency_warning;

    const auto W = estimate_loss(cal.P1, cal.P2);
    est.W = W.value;
    est.clamped_W = W.clamped;
    est.t = std::sqrt(1.0 - est.W);

    // Multinomial variance of the raw frequencies, first-order through the
    // calibration scale and the two formulas.
    const double N = double(object_counts.shots);
    const double f1 = cal.P1 * cal.scale;
    const double f2 = cal.P2 * cal.scale;
    const double s2 = cal.scale * cal.scale;
    const double v1 = f1 * (1.0 - f1) / N / s2;
    const double v2 = f2 * (1.0 - f2) / N / s2;
    const double c12 = -f1 * f2 / N / s2;
    est.sigma_W = 2.0 * std::sqrt(std::max(0.0, v1 + v2 + 2.0 * c12));

    if (est.W >= 1.0) {
        est.phase_undefined = true;
        est.cos_chi = kNaN;
        est.chi = kNaN;
        est.sigma_cos_chi = kNaN;
        return est;
    }

    const auto cc = estimate_cos_chi(cal.P1, cal.P2, est.W);
    est.cos_chi = cc.value;
    est.clamped_cos_chi = cc.clamped;
    est.chi = std::acos(est.cos_chi);

    // cos chi = (P2 - P1) / sqrt(2(P1 + P2) - 1)
    const double R = std::sqrt(1.0 - est.W);
    const double D = cal.P2 - cal.P1;
    const double g1 = -1.0 / R - D / (R * R * R);
    const double g2 = 1.0 / R - D / (R * R * R);
    est.sigma_cos_chi = std::sqrt(std::max(
        0.0, g1 * g1 * v1 + g2 * g2 * v2 + 2.0 * g1 * g2 * c12));
    return est;
}

std::string to_json(const ObjectEstimate& e) {
    nlohmann::json j;
    j["W"] = e.W;
    j["cos_chi"] = e.cos_chi;
    j["chi"] = e.chi;
    j["t"] = e.t;
    j["sigma_W"] = e.sigma_W;
    j["sigma_cos_chi"] = e.sigma_cos_chi;
    j["clamped_W"] = e.clamped_W;
    j["clamped_cos_chi"] = e.clamped_cos_chi;
    j["phase_undefined"] = e.phase_undefined;
    j["calibration_warning"] = e.calibration_warning;
    return j.dump(2);
}

std::vector<SweepRow> sweep(const std::vector<double>& t_grid,
                            const std::vector<double>& chi_grid,
                            std::uint64_t shots, std::uint64_t seed) {
    if (t_grid.empty() || chi_grid.empty()) {
        throw InvalidParameter("sweep grids must be non-empty");
    }
    const std::size_t n = t_grid.size() * chi_grid.size();
    std::vector<SweepRow> rows(n);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(n); ++r) {
        const double t = t_grid[r / chi_grid.size()];
        const double chi = chi_grid[r % chi_grid.size()];
        const ChannelLabel mode{ChannelKind::PhotonMode, "b"};
        const ChannelLabel loss{ChannelKind::LossOrOutgoing, "loss"};
        const auto circuit =
            build_mach_zehnder(make_partial_object(mode, t, chi, loss));
        const auto input = StateVector::basis(circuit.registry_ptr(), "a");

        const std::complex<double> tau = t * std::polar(1.0, chi);
        SweepRow row{};
        row.t = t;
        row.chi = chi;
        row.P1_exact = std::norm(1.0 - tau) / 4.0;
        row.P2_exact = std::norm(1.0 + tau) / 4.0;

        const DetectorConfig detectors{
            {{"D_a", "a", 1.0}, {"D_b", "b", 1.0}}};
        const auto object_run =
            sample_sharded(evolve(circuit, input).final_state, detectors, shots,
                           derive_seed(seed, 2 * std::uint64_t(r)), 1);
        const auto reference_run = sample_sharded(
            reference_evolution(circuit, input).final_state, detectors, shots,
            derive_seed(seed, 2 * std::uint64_t(r) + 1), 1);
        const auto est = reconstruct_object(object_run, reference_run);

        const auto cal = calibrate(reference_run, object_run, "D_a", "D_b");
        row.P1_emp = cal.P1;
        row.P2_emp = cal.P2;
        row.W_est = est.W;
        row.sigma_W = est.sigma_W;
        row.cos_chi_est = est.cos_chi;
        row.sigma_cos_chi = est.sigma_cos_chi;
        row.chi_est = est.chi;
        row.clamped_W = est.clamped_W;
        row.clamped_cos_chi = est.clamped_cos_chi;
        rows[r] = row;
    }
    return rows;
}

namespace {
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "t,chi,P1_exact,P2_exact,P1_emp,P2_emp,W_est,sigma_W,cos_chi_est,"
        "sigma_cos_chi,chi_est,clamped_W,clamped_cos_chi\n";
    for (const auto& r : rows) {
        out += fmt(r.t) + "," + fmt(r.chi) + "," + fmt(r.P1_exact) + "," +
               fmt(r.P2_exact) + "," + fmt(r.P1_emp) + "," + fmt(r.P2_emp) +
               "," + fmt(r.W_est) + "," + fmt(r.sigma_W) + "," +
               fmt(r.cos_chi_est) + "," + fmt(r.sigma_cos_chi) + "," +
               fmt(r.chi_est) + "," + (r.clamped_W ? "1" : "0") + "," +
               (r.clamped_cos_chi ? "1" : "0") + "\n";
    }
    return out;
}

std::string sweep_to_jsonl(const std::vector<SweepRow>& rows) {
    std::string out;
    for (const auto& r : rows) {
        nlohmann::json j;
        j["t"] = r.t;
        j["chi"] = r.chi;
        j["P1_exact"] = r.P1_exact;
        j["P2_exact"] = r.P2_exact;
        j["P1_emp"] = r.P1_emp;
        j["P2_emp"] = r.P2_emp;
        j["W_est"] = r.W_est;
        j["sigma_W"] = r.sigma_W;
        j["cos_chi_est"] = std::isnan(r.cos_chi_est)
                               ? nlohmann::json()
                               : nlohmann::json(r.cos_chi_est);
        j["sigma_cos_chi"] = std::isnan(r.sigma_cos_chi)
                                 ? nlohmann::json()
                                 : nlohmann::json(r.sigma_cos_chi);
        j["chi_est"] =
            std::isnan(r.chi_est) ? nlohmann::json() : nlohmann::json(r.chi_est);
        j["clamped_W"] = r.clamped_W;
        j["clamped_cos_chi"] = r.clamped_cos_chi;
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace ifm
