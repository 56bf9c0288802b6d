#include "znelab/vqe.hpp"

#include "znelab/errors.hpp"
#include "znelab/rng.hpp"

#include <string>

namespace znelab {

namespace {

// Substream domain for device-style shot sampling.
constexpr std::uint64_t kSamplingDomain = 0x5ca9;

void require_grid_matches(const ThetaGrid& grid, const PauliZString& obs) {
    if (grid.n_qubits() != obs.n_qubits) {
        throw validation_error("grid and observable qubit counts differ");
    }
}

template <typename PointFn>
ScanResult run_scan(const ThetaGrid& grid, ExpectationMode mode,
                    std::optional<double> noise_p, std::optional<std::uint64_t> shots,
                    ExecutionPolicy policy, PointFn&& point) {
    ScanResult result{mode, noise_p, shots, grid, {}};
    result.records.resize(grid.total_points());
    for_each_index(grid.total_points(), policy, [&](std::size_t i) {
        ThetaVector theta = grid.theta_at(i);
        const double value = point(i, theta);
        result.records[i] = ExpectationRecord{i, std::move(theta), noise_p, value, mode};
    });
    return result;
}

} // namespace

const char* estimator_name(Estimator est) {
    return est == Estimator::Parity ? "parity" : "paper00";
}

Estimator estimator_from_name(const std::string& name) {
    if (name == "parity") return Estimator::Parity;
    if (name == "paper00") return Estimator::Paper00;
    throw validation_error("unknown estimator '" + name + "'");
}

ScanResult scan_ideal(const ThetaGrid& grid, const PauliZString& obs,
                      ExecutionPolicy policy) {
    require_grid_matches(grid, obs);
    return run_scan(grid, ExpectationMode::ExactPure, std::nullopt, std::nullopt, policy,
                    [&](std::size_t, const ThetaVector& theta) {
                        const auto circuit = build_ry_rz_circuit(grid.n_qubits(), theta);
                        return expectation_state(prepare_state(circuit), obs);
                    });
}

ScanResult scan_noisy(const ThetaGrid& grid, const PauliZString& obs,
                      const NoiseModel& model, ExecutionPolicy policy) {
    require_grid_matches(grid, obs);
    return run_scan(grid, ExpectationMode::ExactMixed, model.level.p, std::nullopt, policy,
                    [&](std::size_t, const ThetaVector& theta) {
                        const auto circuit = build_ry_rz_circuit(grid.n_qubits(), theta);
                        return expectation_density(evolve_noisy(circuit, model), obs);
                    });
}

ScanResult scan_sampled(const ThetaGrid& grid, const PauliZString& obs,
                        const NoiseModel& model, std::uint64_t shots, Estimator estimator,
                        std::uint64_t master_seed, ExecutionPolicy policy) {
    require_grid_matches(grid, obs);
    if (shots == 0) {
        throw validation_error("sampled scan needs at least one shot");
    }
    return run_scan(
        grid, ExpectationMode::Sampled, model.level.p, shots, policy,
        [&](std::size_t index, const ThetaVector& theta) {
            const auto circuit = build_ry_rz_circuit(grid.n_qubits(), theta);
            std::vector<double> probs;
            if (model.level.p > 0.0) {
                probs = measurement_probabilities(evolve_noisy(circuit, model));
            } else {
                probs = measurement_probabilities(prepare_state(circuit));
            }
            auto rng = make_rng(derive_seed(master_seed, kSamplingDomain, index));
            const ShotCounts counts = sample_counts(probs, grid.n_qubits(), shots, rng);
            return estimator == Estimator::Parity ? estimate_parity(counts)
                                                  : estimate_paper00(counts);
        });
}

GroundStateEstimate min_energy(const ScanResult& scan) {
    if (scan.records.empty()) {
        throw validation_error("cannot take the minimum of an empty scan");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.records.size(); ++i) {
        if (scan.records[i].expectation < scan.records[best].expectation) {
            best = i;
        }
    }
    return GroundStateEstimate{scan.records[best].expectation, scan.records[best].theta,
                               best};
}

std::vector<std::pair<std::size_t, double>> delta_e(const ScanResult& a,
                                                    const ScanResult& b) {
    if (!a.grid.same_shape(b.grid) || a.records.size() != b.records.size()) {
        throw validation_error("scans were taken over different grids");
    }
    std::vector<std::pair<std::size_t, double>> deltas;
    deltas.reserve(a.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        deltas.emplace_back(i, a.records[i].expectation - b.records[i].expectation);
    }
    return deltas;
}

} // namespace znelab
