#ifndef IFM_ESTIMATION_HPP
#define IFM_ESTIMATION_HPP

#include <string>
#include <vector>

#include "ifm/measurement.hpp"

namespace ifm {

struct ClampedValue {
    double value;
    bool clamped;  // true when sampling noise pushed the raw value outside
                   // the physical range and it was clipped back in
};

/// W = 2(1 - P1 - P2); total probability of absorption and non-forward
/// scattering. The factor 2 holds for 50% beamsplitters only.
ClampedValue estimate_loss(double P1, double P2);

/// cos chi = (P2 - P1) / sqrt(1 - W). Throws PhaseUndefined at W = 1:
/// a perfect absorber transmits no phase information.
ClampedValue estimate_cos_chi(double P1, double P2, double W);

struct ObjectEstimate {
    double W = 0.0;
    double cos_chi = 0.0;
    double chi = 0.0;  // principal value in [0, pi]; chi and -chi give the
                       // same counts, only cos chi is observable
    double t = 0.0;    // sqrt(1 - W) under the pure-transmission model
    double sigma_W = 0.0;
    double sigma_cos_chi = 0.0;
    bool clamped_W = false;
    bool clamped_cos_chi = false;
    bool phase_undefined = false;   // W = 1; chi and cos_chi are NaN
    bool calibration_warning = false;
};

/// Full inversion: calibrate, estimate W and cos chi, and propagate the
/// multinomial count variance first-order through both formulas.
ObjectEstimate reconstruct_object(
    const CountRecord& object_counts, const CountRecord& reference_counts,
    const std::string& detector_a = "D_a", const std::string& detector_b = "D_b",
    const std::optional<std::map<std::string, double>>& efficiencies =
        std::nullopt);

std::string to_json(const ObjectEstimate& estimate);

struct SweepRow {
    double t, chi;
    double P1_exact, P2_exact;  // |1 -+ t e^{i chi}|^2 / 4
    double P1_emp, P2_emp;
    double W_est, sigma_W;
    double cos_chi_est, sigma_cos_chi;
    double chi_est;
    bool clamped_W, clamped_cos_chi;
};

/// One row per (t, chi) pair: the closed-form detection probabilities plus a
/// sampled round-trip estimate. Row order follows the grids; each row uses an
/// independent derived RNG stream, so the output is deterministic under seed
/// regardless of how rows are parallelized.
std::vector<SweepRow> sweep(const std::vector<double>& t_grid,
                            const std::vector<double>& chi_grid,
                            std::uint64_t shots, std::uint64_t seed);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string sweep_to_jsonl(const std::vector<SweepRow>& rows);

}  // namespace ifm

#endif
