#ifndef IFM_MEASUREMENT_HPP
#define IFM_MEASUREMENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ifm/core.hpp"

namespace ifm {

struct DetectorAssignment {
    std::string detector;
    std::string channel;
    double efficiency = 1.0;  // in (0, 1]
};

struct DetectorConfig {
    std::vector<DetectorAssignment> assignments;
};

struct ProbabilityTable {
    // One entry per detector, in assignment order.
    std::vector<std::pair<std::string, double>> detectors;
    double no_click;  // inefficiency plus unassigned channels
};

/// Detector probability = efficiency * |amplitude|^2.
ProbabilityTable probabilities(const StateVector& state,
                               const DetectorConfig& config);

struct CountRecord {
    std::uint64_t shots = 0;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t no_click = 0;
    std::uint64_t seed = 0;
    std::string rng_algorithm;

    bool operator==(const CountRecord&) const = default;
};

std::string to_json(const CountRecord& record);
CountRecord count_record_from_json(const std::string& text);

/// One categorical draw per shot (one photon, one click or no-click),
/// deterministic for a fixed seed. Shots are sharded across OpenMP workers;
/// the counter-based stream makes the result independent of shard count.
CountRecord sample(const StateVector& state, const DetectorConfig& config,
                   std::uint64_t shots, std::uint64_t seed);

/// Plain serial loop over the same per-shot stream; reference for testing
/// and benchmarking the parallel kernel. Bit-identical to sample().
CountRecord sample_serial(const StateVector& state, const DetectorConfig& config,
                          std::uint64_t shots, std::uint64_t seed);

/// Explicit shard count, used to check shard-count independence.
CountRecord sample_sharded(const StateVector& state, const DetectorConfig& config,
                           std::uint64_t shots, std::uint64_t seed,
                           unsigned shards);

struct Calibration {
    double P1;  // calibrated dark-port (D_a) probability
    double P2;  // calibrated bright-port (D_b) probability
    double scale;
    bool efficiency_warning;  // set when known efficiencies are unequal
};

/// Rescales object-run frequencies by the common detector scale inferred from
/// the no-object reference run (its D_b frequency; the symmetric reference has
/// P_a = 0, P_b = 1). Joint calibration assumes both photon detectors share a
/// single efficiency; if `efficiencies` is given and unequal, the result is
/// flagged rather than rejected.
Calibration calibrate(const CountRecord& reference_counts,
                      const CountRecord& object_counts,
                      const std::string& detector_a,
                      const std::string& detector_b,
                      const std::optional<std::map<std::string, double>>&
                          efficiencies = std::nullopt);

}  // namespace ifm

#endif
