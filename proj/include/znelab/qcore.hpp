#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace znelab {

using ComplexScalar = std::complex<double>;

// Hard cap on simulated system size; tensor products refuse to grow past it.
inline constexpr std::size_t kMaxQubits = 12;

// Dense square complex matrix, row-major. Used both for unitary gates and
// for Kraus operators (which are not unitary); unitarity is a property of
// the gate constructors, not of the container.
struct ComplexMatrix {
    std::size_t dim = 0;
    std::vector<ComplexScalar> entries; // dim * dim, row-major

    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t d) : dim(d), entries(d * d) {}

    ComplexScalar& at(std::size_t row, std::size_t col) { return entries[row * dim + col]; }
    const ComplexScalar& at(std::size_t row, std::size_t col) const {
        return entries[row * dim + col];
    }
};

using UnitaryMatrix = ComplexMatrix;

// Basis convention: qubit 0 is the MOST significant bit of the basis index,
// so the bitstring '01' on two qubits (qubit 0 = 0, qubit 1 = 1) is index 1.
struct StateVector {
    std::size_t n_qubits = 0;
    std::vector<ComplexScalar> amplitudes; // 2^n_qubits
};

struct DensityMatrix {
    std::size_t n_qubits = 0;
    std::vector<ComplexScalar> entries; // 2^n x 2^n, row-major

    std::size_t dim() const { return std::size_t{1} << n_qubits; }
    ComplexScalar& at(std::size_t row, std::size_t col) { return entries[row * dim() + col]; }
    const ComplexScalar& at(std::size_t row, std::size_t col) const {
        return entries[row * dim() + col];
    }
};

// Index bit mask of qubit q in an n-qubit register.
inline std::size_t qubit_mask(std::size_t n_qubits, std::size_t qubit) {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

ComplexMatrix identity_matrix(std::size_t dim);
UnitaryMatrix gate_ry(double theta);
UnitaryMatrix gate_rz(double theta);
UnitaryMatrix gate_rx(double theta);
UnitaryMatrix gate_x();
UnitaryMatrix gate_y();
UnitaryMatrix gate_z();
UnitaryMatrix gate_h();
UnitaryMatrix gate_cnot(); // control = first (more significant) qubit of the pair

// Kronecker product a (x) b. Errors once the result would exceed kMaxQubits.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// |index> on n qubits.
StateVector basis_state(std::size_t n_qubits, std::size_t index = 0);

// Applies `gate` (dim 2^k) to the k target qubits, targets[0] acting as the
// most significant bit of the gate-local index. In-place amplitude stencil;
// no 2^n x 2^n matrix is ever formed.
StateVector apply_unitary(const StateVector& state, const ComplexMatrix& gate,
                          std::span<const std::size_t> targets);

// rho -> M rho M^dagger with M embedded on the targets. Same stencil as
// apply_unitary, run over the rows and then the conjugate over the columns.
// M need not be unitary (Kraus terms go through here).
DensityMatrix apply_matrix_density(const DensityMatrix& rho, const ComplexMatrix& m,
                                   std::span<const std::size_t> targets);

// Outer product |psi><psi|.
DensityMatrix to_density(const StateVector& state);

double state_norm(const StateVector& state);
ComplexScalar trace(const DensityMatrix& rho);

} // namespace znelab
