#pragma once

#include "znelab/ansatz.hpp"
#include "znelab/qcore.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace znelab {

// Z (x) Z (x) ... (x) Z on all qubits. Diagonal in the computational basis;
// the eigenvalue of basis state b is the parity (-1)^popcount(b).
struct PauliZString {
    std::size_t n_qubits = 0;
};

struct ShotCounts {
    std::size_t n_qubits = 0;
    std::map<std::string, std::uint64_t> counts; // bitstring -> occurrences
    std::uint64_t shots = 0;                     // sum of counts
};

enum class ExpectationMode { ExactPure, ExactMixed, Sampled };

const char* expectation_mode_name(ExpectationMode mode);
ExpectationMode expectation_mode_from_name(const std::string& name);

struct ExpectationRecord {
    std::size_t grid_index = 0;
    ThetaVector theta;
    std::optional<double> noise_p;
    double expectation = 0.0;
    ExpectationMode mode = ExpectationMode::ExactPure;
};

PauliZString z_string(std::size_t n_qubits);

// Parity of a basis index; +1 for even Hamming weight, -1 for odd.
int parity_sign(std::size_t basis_index);

// Bitstring with qubit 0 leftmost, e.g. index 1 on two qubits -> "01".
std::string bitstring_of(std::size_t basis_index, std::size_t n_qubits);
std::size_t index_of_bitstring(const std::string& bits);

// sum_b parity(b) |amp_b|^2
double expectation_state(const StateVector& state, const PauliZString& obs);

// sum_b parity(b) rho_bb; the diagonal must be real to 1e-10.
double expectation_density(const DensityMatrix& rho, const PauliZString& obs);

std::vector<double> measurement_probabilities(const StateVector& state);
std::vector<double> measurement_probabilities(const DensityMatrix& rho);

// Multinomial draw of `shots` outcomes. Probabilities must sum to 1 within
// 1e-9; they are renormalized internally. Deterministic given the stream.
ShotCounts sample_counts(std::span<const double> probabilities, std::size_t n_qubits,
                         std::uint64_t shots, std::mt19937_64& rng);

// Unbiased estimator of <Z...Z>: parity-weighted frequency sum.
double estimate_parity(const ShotCounts& counts);

// 1 - 2 * freq(all-zeros). Kept as the device-procedure estimator; note it
// maps a pure |0...0> population to -1, not +1.
double estimate_paper00(const ShotCounts& counts);

} // namespace znelab
