#pragma once

#include "znelab/qcore.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace znelab {

enum class GateKind { Identity, X, Y, Z, H, Rx, Ry, Rz, Cnot };

const char* gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);
std::size_t gate_arity(GateKind kind);

struct GateOp {
    GateKind kind;
    std::optional<double> angle; // rotations only
    std::vector<std::size_t> targets;
};

struct CircuitDescriptor {
    std::size_t n_qubits = 0;
    std::vector<GateOp> ops;
};

// 2n angles: values[0..n) feed the RY layer, values[n..2n) the RZ layer.
struct ThetaVector {
    std::size_t n_qubits = 0;
    std::vector<double> values;
};

// Cartesian product grid over [lo, hi)^(2n), G points per axis, enumerated
// lexicographically with axis 0 slowest. Point index <-> theta round-trips
// exactly because theta_at only ever hands out the precomputed axis values.
class ThetaGrid {
public:
    ThetaGrid(std::size_t n_qubits, std::size_t points_per_axis, double lo, double hi);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t points_per_axis() const { return points_per_axis_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& axis_values() const { return axis_values_; }

    std::size_t total_points() const { return total_points_; }
    ThetaVector theta_at(std::size_t index) const;
    std::size_t index_of(const ThetaVector& theta) const;

    bool same_shape(const ThetaGrid& other) const {
        return n_qubits_ == other.n_qubits_ && points_per_axis_ == other.points_per_axis_ &&
               lo_ == other.lo_ && hi_ == other.hi_;
    }

private:
    std::size_t n_qubits_;
    std::size_t points_per_axis_;
    double lo_;
    double hi_;
    std::vector<double> axis_values_;
    std::size_t total_points_;
};

inline constexpr std::size_t kDefaultScanCap = 1'000'000;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// RY(theta_i) on each qubit, RZ(theta_{i+n}) on each qubit, then the linear
// CNOT chain (i, i+1). For n = 1 there is no entangling layer.
CircuitDescriptor build_ry_rz_circuit(std::size_t n_qubits, const ThetaVector& theta);

// Dense matrix of one op, restricted to its own targets (dim 2 or 4).
ComplexMatrix gate_matrix(const GateOp& op);

// Runs the descriptor on |0...0>.
StateVector prepare_state(const CircuitDescriptor& circuit);

ThetaGrid make_theta_grid(std::size_t n_qubits, std::size_t points_per_axis,
                          double lo = 0.0, double hi = kTwoPi,
                          std::size_t scan_cap = kDefaultScanCap);

} // namespace znelab
