#include "znelab/qcore.hpp"

#include "znelab/errors.hpp"

#include <cmath>
#include <string>

namespace znelab {

namespace {

void require_finite_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw validation_error("rotation angle must be finite");
    }
}

void require_targets(std::size_t n_qubits, std::span<const std::size_t> targets,
                     std::size_t gate_dim) {
    if (targets.empty()) {
        throw validation_error("gate needs at least one target qubit");
    }
    if (gate_dim != (std::size_t{1} << targets.size())) {
        throw validation_error("gate dimension does not match target count");
    }
    std::size_t seen = 0;
    for (std::size_t q : targets) {
        if (q >= n_qubits) {
            throw validation_error("target qubit " + std::to_string(q) + " out of range");
        }
        const std::size_t bit = std::size_t{1} << q;
        if (seen & bit) {
            throw validation_error("duplicate target qubit " + std::to_string(q));
        }
        seen |= bit;
    }
}

// Transforms the length-2^k blocks selected by the target bit masks, reading
// and writing through `stride`-spaced elements starting at data[offset].
// Covers both statevectors (stride 1) and density-matrix rows/columns.
void apply_stencil(ComplexScalar* data, std::size_t n_qubits, const ComplexMatrix& m,
                   std::span<const std::size_t> targets, std::size_t offset,
                   std::size_t stride) {
    const std::size_t k = targets.size();
    const std::size_t sub_dim = std::size_t{1} << k;
    const std::size_t dim = std::size_t{1} << n_qubits;

    std::size_t target_union = 0;
    std::vector<std::size_t> local_mask(k); // global index bit for gate-local bit j
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t bit = qubit_mask(n_qubits, targets[j]);
        local_mask[j] = bit;
        target_union |= bit;
    }

    std::vector<ComplexScalar> in(sub_dim), out(sub_dim);
    std::vector<std::size_t> pos(sub_dim);
    for (std::size_t local = 0; local < sub_dim; ++local) {
        std::size_t bits = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (local & (std::size_t{1} << (k - 1 - j))) {
                bits |= local_mask[j];
            }
        }
        pos[local] = bits;
    }

    for (std::size_t base = 0; base < dim; ++base) {
        if (base & target_union) {
            continue;
        }
        for (std::size_t local = 0; local < sub_dim; ++local) {
            in[local] = data[offset + (base | pos[local]) * stride];
        }
        for (std::size_t row = 0; row < sub_dim; ++row) {
            ComplexScalar acc{0.0, 0.0};
            for (std::size_t col = 0; col < sub_dim; ++col) {
                acc += m.entries[row * sub_dim + col] * in[col];
            }
            out[row] = acc;
        }
        for (std::size_t local = 0; local < sub_dim; ++local) {
            data[offset + (base | pos[local]) * stride] = out[local];
        }
    }
}

ComplexMatrix conjugated(const ComplexMatrix& m) {
    ComplexMatrix c(m.dim);
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        c.entries[i] = std::conj(m.entries[i]);
    }
    return c;
}

} // namespace

ComplexMatrix identity_matrix(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m.at(i, i) = 1.0;
    }
    return m;
}

UnitaryMatrix gate_ry(double theta) {
    require_finite_angle(theta);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    ComplexMatrix m(2);
    m.at(0, 0) = c;
    m.at(0, 1) = -s;
    m.at(1, 0) = s;
    m.at(1, 1) = c;
    return m;
}

UnitaryMatrix gate_rz(double theta) {
    require_finite_angle(theta);
    ComplexMatrix m(2);
    m.at(0, 0) = std::exp(ComplexScalar{0.0, -theta / 2.0});
    m.at(1, 1) = std::exp(ComplexScalar{0.0, theta / 2.0});
    return m;
}

UnitaryMatrix gate_rx(double theta) {
    require_finite_angle(theta);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    ComplexMatrix m(2);
    m.at(0, 0) = c;
    m.at(0, 1) = ComplexScalar{0.0, -s};
    m.at(1, 0) = ComplexScalar{0.0, -s};
    m.at(1, 1) = c;
    return m;
}

UnitaryMatrix gate_x() {
    ComplexMatrix m(2);
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 1.0;
    return m;
}

UnitaryMatrix gate_y() {
    ComplexMatrix m(2);
    m.at(0, 1) = ComplexScalar{0.0, -1.0};
    m.at(1, 0) = ComplexScalar{0.0, 1.0};
    return m;
}

UnitaryMatrix gate_z() {
    ComplexMatrix m(2);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = -1.0;
    return m;
}

UnitaryMatrix gate_h() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix m(2);
    m.at(0, 0) = s;
    m.at(0, 1) = s;
    m.at(1, 0) = s;
    m.at(1, 1) = -s;
    return m;
}

UnitaryMatrix gate_cnot() {
    ComplexMatrix m(4);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = 1.0;
    m.at(2, 3) = 1.0;
    m.at(3, 2) = 1.0;
    return m;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim == 0 || b.dim == 0) {
        throw validation_error("tensor of an empty matrix");
    }
    const std::size_t dim = a.dim * b.dim;
    if (dim > (std::size_t{1} << kMaxQubits)) {
        throw capacity_error("tensor product exceeds the " + std::to_string(kMaxQubits) +
                             "-qubit cap");
    }
    ComplexMatrix out(dim);
    for (std::size_t ar = 0; ar < a.dim; ++ar) {
        for (std::size_t ac = 0; ac < a.dim; ++ac) {
            const ComplexScalar f = a.at(ar, ac);
            if (f == ComplexScalar{0.0, 0.0}) {
                continue;
            }
            for (std::size_t br = 0; br < b.dim; ++br) {
                for (std::size_t bc = 0; bc < b.dim; ++bc) {
                    out.at(ar * b.dim + br, ac * b.dim + bc) = f * b.at(br, bc);
                }
            }
        }
    }
    return out;
}

StateVector basis_state(std::size_t n_qubits, std::size_t index) {
    if (n_qubits < 1) {
        throw validation_error("state needs at least one qubit");
    }
    if (n_qubits > kMaxQubits) {
        throw capacity_error("state exceeds the qubit cap");
    }
    StateVector s;
    s.n_qubits = n_qubits;
    s.amplitudes.assign(std::size_t{1} << n_qubits, ComplexScalar{0.0, 0.0});
    if (index >= s.amplitudes.size()) {
        throw validation_error("basis index out of range");
    }
    s.amplitudes[index] = 1.0;
    return s;
}

StateVector apply_unitary(const StateVector& state, const ComplexMatrix& gate,
                          std::span<const std::size_t> targets) {
    require_targets(state.n_qubits, targets, gate.dim);
    StateVector out = state;
    apply_stencil(out.amplitudes.data(), out.n_qubits, gate, targets, 0, 1);
    return out;
}

DensityMatrix apply_matrix_density(const DensityMatrix& rho, const ComplexMatrix& m,
                                   std::span<const std::size_t> targets) {
    require_targets(rho.n_qubits, targets, m.dim);
    const std::size_t dim = rho.dim();
    DensityMatrix out = rho;
    // M rho: stencil down each column (row index varies, stride = dim).
    for (std::size_t col = 0; col < dim; ++col) {
        apply_stencil(out.entries.data(), out.n_qubits, m, targets, col, dim);
    }
    // (M rho) M^dagger: conj(M) stencil along each row (stride 1).
    const ComplexMatrix mc = conjugated(m);
    for (std::size_t row = 0; row < dim; ++row) {
        apply_stencil(out.entries.data(), out.n_qubits, mc, targets, row * dim, 1);
    }
    return out;
}

DensityMatrix to_density(const StateVector& state) {
    DensityMatrix rho;
    rho.n_qubits = state.n_qubits;
    const std::size_t dim = state.amplitudes.size();
    rho.entries.resize(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            rho.entries[i * dim + j] = state.amplitudes[i] * std::conj(state.amplitudes[j]);
        }
    }
    return rho;
}

double state_norm(const StateVector& state) {
    double acc = 0.0;
    for (const auto& a : state.amplitudes) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

ComplexScalar trace(const DensityMatrix& rho) {
    ComplexScalar acc{0.0, 0.0};
    const std::size_t dim = rho.dim();
    for (std::size_t i = 0; i < dim; ++i) {
        acc += rho.entries[i * dim + i];
    }
    return acc;
}

} // namespace znelab
