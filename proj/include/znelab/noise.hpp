#pragma once

#include "znelab/ansatz.hpp"
#include "znelab/qcore.hpp"

#include <set>
#include <span>
#include <vector>

namespace znelab {

// Depolarizing strength. Above 3/4 the Kraus weights stop being a
// probability mixture, so that is the hard ceiling.
struct NoiseLevel {
    double p = 0.0;
};

inline constexpr double kMaxNoiseP = 0.75;

struct KrausChannel {
    std::size_t arity = 1; // qubits acted on: 1 or 2
    std::vector<ComplexMatrix> operators;
};

struct NoiseModel {
    NoiseLevel level;
    std::set<GateKind> gate_filter; // gate kinds that receive noise
    KrausChannel channel_1q;
    KrausChannel channel_2q;
};

// {sqrt(1-p) I, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z}
KrausChannel depolarizing_1q(NoiseLevel level);

// The 16 pairwise tensor products of the one-qubit operators at the same p.
KrausChannel depolarizing_2q(NoiseLevel level);

// Completeness defect max|sum K^dagger K - I|; channels are rejected when it
// exceeds 1e-12.
double completeness_defect(const KrausChannel& channel);

std::set<GateKind> default_gate_filter();

NoiseModel make_noise_model(NoiseLevel level,
                            std::set<GateKind> gate_filter = default_gate_filter());

// rho -> sum_K K rho K^dagger on the target qubits.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel,
                            std::span<const std::size_t> targets);

// Runs the circuit on |0..0><0..0|; after each op whose kind is in the
// model's filter, the matching-arity depolarizing channel hits its targets.
DensityMatrix evolve_noisy(const CircuitDescriptor& circuit, const NoiseModel& model);

// lambda = 4p/3: the channel equals rho -> (1-lambda) rho + lambda I/2.
double mixed_form_lambda(NoiseLevel level);

} // namespace znelab
