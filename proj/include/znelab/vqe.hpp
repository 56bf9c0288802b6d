#pragma once

#include "znelab/ansatz.hpp"
#include "znelab/noise.hpp"
#include "znelab/observables.hpp"
#include "znelab/parallel.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace znelab {

enum class Estimator { Parity, Paper00 };

const char* estimator_name(Estimator est);
Estimator estimator_from_name(const std::string& name);

struct ScanResult {
    ExpectationMode mode = ExpectationMode::ExactPure;
    std::optional<double> noise_p;
    std::optional<std::uint64_t> shots;
    ThetaGrid grid;
    std::vector<ExpectationRecord> records; // one per grid point, index order
};

struct GroundStateEstimate {
    double energy = 0.0;
    ThetaVector argmin_theta;
    std::size_t argmin_index = 0;
};

// Exact statevector expectation at every grid point. Grid points are
// independent work items; records land in their own slots, so the OpenMP
// path is bitwise identical to the serial one.
ScanResult scan_ideal(const ThetaGrid& grid, const PauliZString& obs,
                      ExecutionPolicy policy = ExecutionPolicy::OpenMP);

// Exact density-matrix expectation under the model's depolarizing channels.
// At p = 0 this reduces pointwise to scan_ideal.
ScanResult scan_noisy(const ThetaGrid& grid, const PauliZString& obs,
                      const NoiseModel& model,
                      ExecutionPolicy policy = ExecutionPolicy::OpenMP);

// Shot-sampled scan: evolve (noisy when p > 0, pure otherwise), draw counts
// from a substream seeded by (master_seed, grid_index), apply the estimator.
// Results do not depend on worker count or scheduling.
ScanResult scan_sampled(const ThetaGrid& grid, const PauliZString& obs,
                        const NoiseModel& model, std::uint64_t shots, Estimator estimator,
                        std::uint64_t master_seed,
                        ExecutionPolicy policy = ExecutionPolicy::OpenMP);

// Minimum expectation; ties break to the smallest grid index.
GroundStateEstimate min_energy(const ScanResult& scan);

// Per-point differences a - b over the shared grid.
std::vector<std::pair<std::size_t, double>> delta_e(const ScanResult& a,
                                                    const ScanResult& b);

} // namespace znelab
