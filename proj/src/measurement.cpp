#include "ifm/measurement.hpp"

#include <cmath>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

#include "ifm/rng.hpp"

namespace ifm {

ProbabilityTable probabilities(const StateVector& state,
                               const DetectorConfig& config) {
    if (!state.normalized() || std::abs(state.norm_squared() - 1.0) > 1e-8) {
        throw NotAState("probabilities requires a unit-norm state");
    }
    std::set<std::string> seen_detectors;
    ProbabilityTable table{{}, 1.0};
    for (const auto& assignment : config.assignments) {
        if (assignment.efficiency <= 0.0 || assignment.efficiency > 1.0) {
            throw InvalidParameter("detector efficiency must lie in (0, 1]");
        }
        if (!seen_detectors.insert(assignment.detector).second) {
            throw InvalidParameter("detector '" + assignment.detector +
                                   "' assigned twice");
        }
        const double p =
            assignment.efficiency * std::norm(state.amplitude(assignment.channel));
        table.detectors.emplace_back(assignment.detector, p);
        table.no_click -= p;
    }
    if (table.no_click < 0.0) table.no_click = 0.0;  // rounding guard
    return table;
}

namespace {

struct SampleKernel {
    std::vector<double> cumulative;  // per detector, then implicit no-click
    std::size_t outcomes;

    explicit SampleKernel(const ProbabilityTable& table)
        : outcomes(table.detectors.size()) {
        double acc = 0.0;
        cumulative.reserve(outcomes);
        for (const auto& [name, p] : table.detectors) {
            acc += p;
            cumulative.push_back(acc);
        }
    }

    // Outcome index for one shot; `outcomes` means no-click.
    std::size_t draw(std::uint64_t seed, std::uint64_t shot) const {
        const double u = uniform01(seed, shot);
        for (std::size_t k = 0; k < outcomes; ++k) {
            if (u < cumulative[k]) return k;
        }
        return outcomes;
    }
};

CountRecord assemble(const ProbabilityTable& table,
                     const std::vector<std::uint64_t>& tallies,
                     std::uint64_t shots, std::uint64_t seed) {
    CountRecord record;
    record.shots = shots;
    record.seed = seed;
    record.rng_algorithm = kRngAlgorithm;
    for (std::size_t k = 0; k < table.detectors.size(); ++k) {
        record.counts[table.detectors[k].first] = tallies[k];
    }
    record.no_click = tallies[table.detectors.size()];
    return record;
}

}  // namespace

CountRecord sample(const StateVector& state, const DetectorConfig& config,
                   std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw InvalidParameter("shots must be >= 1");
    const auto table = probabilities(state, config);
    const SampleKernel kernel(table);
    std::vector<std::uint64_t> tallies(kernel.outcomes + 1, 0);
#ifdef _OPENMP
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(kernel.outcomes + 1, 0);
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(shots); ++i) {
            ++local[kernel.draw(seed, static_cast<std::uint64_t>(i))];
        }
#pragma omp critical
        for (std::size_t k = 0; k < tallies.size(); ++k) tallies[k] += local[k];
    }
#else
    for (std::uint64_t i = 0; i < shots; ++i) ++tallies[kernel.draw(seed, i)];
#endif
    return assemble(table, tallies, shots, seed);
}

CountRecord sample_serial(const StateVector& state, const DetectorConfig& config,
                          std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw InvalidParameter("shots must be >= 1");
    const auto table = probabilities(state, config);
    const SampleKernel kernel(table);
    std::vector<std::uint64_t> tallies(kernel.outcomes + 1, 0);
    for (std::uint64_t i = 0; i < shots; ++i) ++tallies[kernel.draw(seed, i)];
    return assemble(table, tallies, shots, seed);
}

CountRecord sample_sharded(const StateVector& state, const DetectorConfig& config,
                           std::uint64_t shots, std::uint64_t seed,
                           unsigned shards) {
    if (shots == 0) throw InvalidParameter("shots must be >= 1");
    if (shards == 0) throw InvalidParameter("shards must be >= 1");
    const auto table = probabilities(state, config);
    const SampleKernel kernel(table);
    std::vector<std::uint64_t> tallies(kernel.outcomes + 1, 0);
    for (unsigned s = 0; s < shards; ++s) {
        const std::uint64_t lo = shots * s / shards;
        const std::uint64_t hi = shots * (s + 1) / shards;
        for (std::uint64_t i = lo; i < hi; ++i) {
            ++tallies[kernel.draw(seed, i)];
        }
    }
    return assemble(table, tallies, shots, seed);
}

std::string to_json(const CountRecord& record) {
    nlohmann::json j;
    j["shots"] = record.shots;
    j["counts"] = record.counts;
    j["no_click"] = record.no_click;
    j["seed"] = record.seed;
    j["rng_algorithm"] = record.rng_algorithm;
    return j.dump(2);
}

CountRecord count_record_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    CountRecord record;
    record.shots = j.at("shots").get<std::uint64_t>();
    record.counts = j.at("counts").get<std::map<std::string, std::uint64_t>>();
    record.no_click = j.at("no_click").get<std::uint64_t>();
    record.seed = j.value("seed", std::uint64_t{0});
    record.rng_algorithm = j.value("rng_algorithm", std::string{});
    std::uint64_t total = record.no_click;
    for (const auto& [name, c] : record.counts) total += c;
    if (total != record.shots) {
        throw InvalidParameter("count record counts do not add up to shots");
    }
    return record;
}

Calibration calibrate(const CountRecord& reference_counts,
                      const CountRecord& object_counts,
                      const std::string& detector_a,
                      const std::string& detector_b,
                      const std::optional<std::map<std::string, double>>&
                          efficiencies) {
    auto frequency = [](const CountRecord& r, const std::string& d) {
        auto it = r.counts.find(d);
        const double c = it == r.counts.end() ? 0.0 : double(it->second);
        return c / double(r.shots);
    };
    if (reference_counts.shots == 0 || object_counts.shots == 0) {
        throw CannotCalibrate("empty count record");
    }
    const double scale = frequency(reference_counts, detector_b);
    if (scale == 0.0) {
        throw CannotCalibrate("reference " + detector_b + " frequency is zero");
    }
    Calibration cal;
    cal.scale = scale;
    cal.P1 = frequency(object_counts, detector_a) / scale;
    cal.P2 = frequency(object_counts, detector_b) / scale;
    cal.efficiency_warning = false;
    if (efficiencies) {
        const auto ea = efficiencies->find(detector_a);
        const auto eb = efficiencies->find(detector_b);
        if (ea != efficiencies->end() && eb != efficiencies->end() &&
            std::abs(ea->second - eb->second) > 1e-12) {
            cal.efficiency_warning = true;
        }
    }
    return cal;
}

}  // namespace ifm
