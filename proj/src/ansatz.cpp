#include "znelab/ansatz.hpp"

#include "znelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace znelab {

const char* gate_kind_name(GateKind kind) {
    switch (kind) {
    case GateKind::Identity: return "id";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::H: return "h";
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::Cnot: return "cnot";
    }
    return "?";
}

GateKind gate_kind_from_name(const std::string& name) {
    if (name == "id") return GateKind::Identity;
    if (name == "x") return GateKind::X;
    if (name == "y") return GateKind::Y;
    if (name == "z") return GateKind::Z;
    if (name == "h") return GateKind::H;
    if (name == "rx") return GateKind::Rx;
    if (name == "ry") return GateKind::Ry;
    if (name == "rz") return GateKind::Rz;
    if (name == "cnot") return GateKind::Cnot;
    throw validation_error("unknown gate kind '" + name + "'");
}

std::size_t gate_arity(GateKind kind) {
    return kind == GateKind::Cnot ? 2 : 1;
}

ThetaGrid::ThetaGrid(std::size_t n_qubits, std::size_t points_per_axis, double lo, double hi)
    : n_qubits_(n_qubits), points_per_axis_(points_per_axis), lo_(lo), hi_(hi) {
    axis_values_.reserve(points_per_axis);
    const double step = (hi - lo) / static_cast<double>(points_per_axis);
    for (std::size_t k = 0; k < points_per_axis; ++k) {
        axis_values_.push_back(lo + static_cast<double>(k) * step);
    }
    total_points_ = 1;
    for (std::size_t axis = 0; axis < 2 * n_qubits; ++axis) {
        total_points_ *= points_per_axis;
    }
}

ThetaVector ThetaGrid::theta_at(std::size_t index) const {
    if (index >= total_points_) {
        throw validation_error("grid index out of range");
    }
    const std::size_t axes = 2 * n_qubits_;
    ThetaVector theta;
    theta.n_qubits = n_qubits_;
    theta.values.resize(axes);
    std::size_t rest = index;
    for (std::size_t axis = axes; axis-- > 0;) {
        theta.values[axis] = axis_values_[rest % points_per_axis_];
        rest /= points_per_axis_;
    }
    return theta;
}

std::size_t ThetaGrid::index_of(const ThetaVector& theta) const {
    if (theta.values.size() != 2 * n_qubits_) {
        throw validation_error("theta length does not match the grid");
    }
    std::size_t index = 0;
    for (double v : theta.values) {
        auto it = std::find(axis_values_.begin(), axis_values_.end(), v);
        if (it == axis_values_.end()) {
            throw validation_error("theta value is not on the grid");
        }
        index = index * points_per_axis_ +
                static_cast<std::size_t>(it - axis_values_.begin());
    }
    return index;
}

CircuitDescriptor build_ry_rz_circuit(std::size_t n_qubits, const ThetaVector& theta) {
    if (n_qubits < 1) {
        throw validation_error("ansatz needs at least one qubit");
    }
    if (theta.values.size() != 2 * n_qubits) {
        throw validation_error("theta must have exactly 2*n_qubits entries, got " +
                               std::to_string(theta.values.size()));
    }
    for (double v : theta.values) {
        if (!std::isfinite(v)) {
            throw validation_error("theta entries must be finite");
        }
    }
    CircuitDescriptor circuit;
    circuit.n_qubits = n_qubits;
    circuit.ops.reserve(2 * n_qubits + (n_qubits - 1));
    for (std::size_t q = 0; q < n_qubits; ++q) {
        circuit.ops.push_back({GateKind::Ry, theta.values[q], {q}});
    }
    for (std::size_t q = 0; q < n_qubits; ++q) {
        circuit.ops.push_back({GateKind::Rz, theta.values[q + n_qubits], {q}});
    }
    for (std::size_t q = 0; q + 1 < n_qubits; ++q) {
        circuit.ops.push_back({GateKind::Cnot, std::nullopt, {q, q + 1}});
    }
    return circuit;
}

ComplexMatrix gate_matrix(const GateOp& op) {
    auto need_angle = [&]() {
        if (!op.angle) {
            throw validation_error(std::string("gate '") + gate_kind_name(op.kind) +
                                   "' needs an angle");
        }
        return *op.angle;
    };
    switch (op.kind) {
    case GateKind::Identity: return identity_matrix(2);
    case GateKind::X: return gate_x();
    case GateKind::Y: return gate_y();
    case GateKind::Z: return gate_z();
    case GateKind::H: return gate_h();
    case GateKind::Rx: return gate_rx(need_angle());
    case GateKind::Ry: return gate_ry(need_angle());
    case GateKind::Rz: return gate_rz(need_angle());
    case GateKind::Cnot: return gate_cnot();
    }
    throw validation_error("unknown gate kind");
}

StateVector prepare_state(const CircuitDescriptor& circuit) {
    StateVector state = basis_state(circuit.n_qubits, 0);
    for (const GateOp& op : circuit.ops) {
        state = apply_unitary(state, gate_matrix(op), op.targets);
    }
    return state;
}

ThetaGrid make_theta_grid(std::size_t n_qubits, std::size_t points_per_axis, double lo,
                          double hi, std::size_t scan_cap) {
    if (n_qubits < 1) {
        throw validation_error("grid needs at least one qubit");
    }
    if (points_per_axis < 1) {
        throw validation_error("grid needs at least one point per axis");
    }
    if (!(lo < hi)) {
        throw validation_error("grid range must satisfy lo < hi");
    }
    // Overflow-safe G^(2n) cap check.
    std::size_t total = 1;
    for (std::size_t axis = 0; axis < 2 * n_qubits; ++axis) {
        if (total > scan_cap / points_per_axis) {
            throw capacity_error("grid of " + std::to_string(points_per_axis) + "^" +
                                 std::to_string(2 * n_qubits) + " points exceeds the scan cap");
        }
        total *= points_per_axis;
    }
    return ThetaGrid(n_qubits, points_per_axis, lo, hi);
}

} // namespace znelab
