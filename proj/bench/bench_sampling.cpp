// Throughput comparison of the OpenMP sampling kernel against the serial
// reference, plus the sharded variant. All three must produce identical
// CountRecords; this also re-checks that while timing.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ifm/circuit.hpp"
#include "ifm/measurement.hpp"

using namespace ifm;

namespace {

double time_ms(const char* label, std::uint64_t shots, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto record = fn();
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    std::printf("%-24s %8.1f ms   %7.1f Mshots/s\n", label, ms,
                double(shots) / ms / 1e3);
    return ms;
}

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t shots =
        argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 50000000;

    const ChannelLabel b{ChannelKind::PhotonMode, "b"};
    const ChannelLabel e{ChannelKind::AbsorberExcited, "E"};
    auto circuit = build_mach_zehnder(make_perfect_absorber(b, e));
    auto state = evolve(circuit, StateVector::basis(circuit.registry_ptr(), "a"))
                     .final_state;
    const DetectorConfig detectors{
        {{"D_a", "a", 1.0}, {"D_b", "b", 1.0}, {"bomb", "E", 1.0}}};

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP: not enabled\n");
#endif
    std::printf("shots: %llu\n\n", static_cast<unsigned long long>(shots));

    CountRecord serial, parallel, sharded;
    time_ms("serial reference", shots,
            [&] { return serial = sample_serial(state, detectors, shots, 1); });
    time_ms("openmp kernel", shots,
            [&] { return parallel = sample(state, detectors, shots, 1); });
    time_ms("sharded (8 shards)", shots, [&] {
        return sharded = sample_sharded(state, detectors, shots, 1, 8);
    });

    if (parallel != serial || sharded != serial) {
        std::printf("\nMISMATCH between kernels\n");
        return 1;
    }
    std::printf("\nall kernels agree bit-for-bit\n");
    return 0;
}
