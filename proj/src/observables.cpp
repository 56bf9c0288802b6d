#include "znelab/observables.hpp"

#include "znelab/errors.hpp"
#include "znelab/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace znelab {

const char* expectation_mode_name(ExpectationMode mode) {
    switch (mode) {
    case ExpectationMode::ExactPure: return "exact-pure";
    case ExpectationMode::ExactMixed: return "exact-mixed";
    case ExpectationMode::Sampled: return "sampled";
    }
    return "?";
}

ExpectationMode expectation_mode_from_name(const std::string& name) {
    if (name == "exact-pure") return ExpectationMode::ExactPure;
    if (name == "exact-mixed") return ExpectationMode::ExactMixed;
    if (name == "sampled") return ExpectationMode::Sampled;
    throw validation_error("unknown expectation mode '" + name + "'");
}

PauliZString z_string(std::size_t n_qubits) {
    if (n_qubits < 1) {
        throw validation_error("observable needs at least one qubit");
    }
    return PauliZString{n_qubits};
}

int parity_sign(std::size_t basis_index) {
    return (std::popcount(basis_index) % 2 == 0) ? 1 : -1;
}

std::string bitstring_of(std::size_t basis_index, std::size_t n_qubits) {
    std::string bits(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if (basis_index & qubit_mask(n_qubits, q)) {
            bits[q] = '1';
        }
    }
    return bits;
}

std::size_t index_of_bitstring(const std::string& bits) {
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw validation_error("bitstring may only contain '0' and '1'");
        }
        index = (index << 1) | static_cast<std::size_t>(c - '0');
    }
    return index;
}

double expectation_state(const StateVector& state, const PauliZString& obs) {
    if (state.n_qubits != obs.n_qubits) {
        throw validation_error("state and observable qubit counts differ");
    }
    double acc = 0.0;
    for (std::size_t b = 0; b < state.amplitudes.size(); ++b) {
        acc += parity_sign(b) * std::norm(state.amplitudes[b]);
    }
    return acc;
}

double expectation_density(const DensityMatrix& rho, const PauliZString& obs) {
    if (rho.n_qubits != obs.n_qubits) {
        throw validation_error("density matrix and observable qubit counts differ");
    }
    ComplexScalar acc{0.0, 0.0};
    const std::size_t dim = rho.dim();
    for (std::size_t b = 0; b < dim; ++b) {
        acc += static_cast<double>(parity_sign(b)) * rho.at(b, b);
    }
    if (std::abs(acc.imag()) > 1e-10) {
        throw numeric_error("expectation has a non-real residue of " +
                            std::to_string(acc.imag()));
    }
    return acc.real();
}

std::vector<double> measurement_probabilities(const StateVector& state) {
    std::vector<double> probs(state.amplitudes.size());
    for (std::size_t b = 0; b < probs.size(); ++b) {
        probs[b] = std::norm(state.amplitudes[b]);
    }
    return probs;
}

std::vector<double> measurement_probabilities(const DensityMatrix& rho) {
    const std::size_t dim = rho.dim();
    std::vector<double> probs(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        probs[b] = rho.at(b, b).real();
    }
    return probs;
}

ShotCounts sample_counts(std::span<const double> probabilities, std::size_t n_qubits,
                         std::uint64_t shots, std::mt19937_64& rng) {
    if (shots == 0) {
        throw validation_error("shot count must be positive");
    }
    if (probabilities.size() != (std::size_t{1} << n_qubits)) {
        throw validation_error("probability vector length must be 2^n_qubits");
    }
    double total = 0.0;
    for (double p : probabilities) {
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw validation_error("probabilities sum to " + std::to_string(total) +
                               ", expected 1");
    }
    std::vector<double> cumulative(probabilities.size());
    double run = 0.0;
    for (std::size_t b = 0; b < probabilities.size(); ++b) {
        run += probabilities[b] / total;
        cumulative[b] = run;
    }
    cumulative.back() = 1.0;

    std::vector<std::uint64_t> hits(probabilities.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = uniform_double(rng);
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        hits[static_cast<std::size_t>(it - cumulative.begin())]++;
    }

    ShotCounts counts;
    counts.n_qubits = n_qubits;
    counts.shots = shots;
    for (std::size_t b = 0; b < hits.size(); ++b) {
        if (hits[b] > 0) {
            counts.counts.emplace(bitstring_of(b, n_qubits), hits[b]);
        }
    }
    return counts;
}

double estimate_parity(const ShotCounts& counts) {
    if (counts.shots == 0 || counts.counts.empty()) {
        throw validation_error("cannot estimate from empty counts");
    }
    double acc = 0.0;
    for (const auto& [bits, hits] : counts.counts) {
        acc += parity_sign(index_of_bitstring(bits)) * static_cast<double>(hits);
    }
    return acc / static_cast<double>(counts.shots);
}

double estimate_paper00(const ShotCounts& counts) {
    if (counts.shots == 0 || counts.counts.empty()) {
        throw validation_error("cannot estimate from empty counts");
    }
    const std::string zeros(counts.n_qubits, '0');
    const auto it = counts.counts.find(zeros);
    const double freq =
        it == counts.counts.end()
            ? 0.0
            : static_cast<double>(it->second) / static_cast<double>(counts.shots);
    return 1.0 - 2.0 * freq;
}

} // namespace znelab
