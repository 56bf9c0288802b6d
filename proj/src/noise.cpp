#include "znelab/noise.hpp"

#include "znelab/errors.hpp"

#include <cmath>
#include <string>

namespace znelab {

namespace {

void require_level(NoiseLevel level) {
    if (!(level.p >= 0.0 && level.p <= kMaxNoiseP)) {
        throw validation_error("noise level must lie in [0, 0.75], got " +
                               std::to_string(level.p));
    }
}

void scale(ComplexMatrix& m, double factor) {
    for (auto& e : m.entries) {
        e *= factor;
    }
}

} // namespace

KrausChannel depolarizing_1q(NoiseLevel level) {
    require_level(level);
    const double w0 = std::sqrt(1.0 - level.p);
    const double w = std::sqrt(level.p / 3.0);
    KrausChannel ch;
    ch.arity = 1;
    ch.operators = {identity_matrix(2), gate_x(), gate_y(), gate_z()};
    scale(ch.operators[0], w0);
    for (std::size_t i = 1; i < 4; ++i) {
        scale(ch.operators[i], w);
    }
    return ch;
}

KrausChannel depolarizing_2q(NoiseLevel level) {
    const KrausChannel one = depolarizing_1q(level);
    KrausChannel ch;
    ch.arity = 2;
    ch.operators.reserve(16);
    for (const auto& a : one.operators) {
        for (const auto& b : one.operators) {
            ch.operators.push_back(tensor(a, b));
        }
    }
    return ch;
}

double completeness_defect(const KrausChannel& channel) {
    if (channel.operators.empty()) {
        throw validation_error("channel has no Kraus operators");
    }
    const std::size_t dim = channel.operators.front().dim;
    ComplexMatrix acc(dim);
    for (const auto& k : channel.operators) {
        if (k.dim != dim) {
            throw validation_error("Kraus operators have mismatched dimensions");
        }
        // acc += K^dagger K
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                ComplexScalar s{0.0, 0.0};
                for (std::size_t r = 0; r < dim; ++r) {
                    s += std::conj(k.at(r, i)) * k.at(r, j);
                }
                acc.at(i, j) += s;
            }
        }
    }
    double defect = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const ComplexScalar expect = (i == j) ? ComplexScalar{1.0, 0.0}
                                                  : ComplexScalar{0.0, 0.0};
            defect = std::max(defect, std::abs(acc.at(i, j) - expect));
        }
    }
    return defect;
}

std::set<GateKind> default_gate_filter() {
    return {GateKind::Identity, GateKind::X,  GateKind::Y,  GateKind::Z, GateKind::H,
            GateKind::Rx,       GateKind::Ry, GateKind::Rz, GateKind::Cnot};
}

NoiseModel make_noise_model(NoiseLevel level, std::set<GateKind> gate_filter) {
    require_level(level);
    if (level.p > 0.0 && gate_filter.empty()) {
        throw validation_error("gate filter must be non-empty when p > 0");
    }
    NoiseModel model;
    model.level = level;
    model.gate_filter = std::move(gate_filter);
    model.channel_1q = depolarizing_1q(level);
    model.channel_2q = depolarizing_2q(level);
    if (completeness_defect(model.channel_1q) > 1e-12 ||
        completeness_defect(model.channel_2q) > 1e-12) {
        throw numeric_error("constructed channel is not trace preserving");
    }
    return model;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel,
                            std::span<const std::size_t> targets) {
    if (targets.size() != channel.arity) {
        throw validation_error("target count does not match channel arity");
    }
    DensityMatrix acc;
    acc.n_qubits = rho.n_qubits;
    acc.entries.assign(rho.entries.size(), ComplexScalar{0.0, 0.0});
    for (const auto& k : channel.operators) {
        const DensityMatrix term = apply_matrix_density(rho, k, targets);
        for (std::size_t i = 0; i < acc.entries.size(); ++i) {
            acc.entries[i] += term.entries[i];
        }
    }
    return acc;
}

DensityMatrix evolve_noisy(const CircuitDescriptor& circuit, const NoiseModel& model) {
    DensityMatrix rho = to_density(basis_state(circuit.n_qubits, 0));
    for (const GateOp& op : circuit.ops) {
        rho = apply_matrix_density(rho, gate_matrix(op), op.targets);
        if (model.level.p > 0.0 && model.gate_filter.contains(op.kind)) {
            const KrausChannel& ch =
                op.targets.size() == 1 ? model.channel_1q : model.channel_2q;
            rho = apply_channel(rho, ch, op.targets);
        }
    }
    return rho;
}

double mixed_form_lambda(NoiseLevel level) {
    require_level(level);
    return 4.0 * level.p / 3.0;
}

} // namespace znelab
