#pragma once

#include "znelab/parallel.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace znelab {

// Fully-connected network, rectified hidden layers, linear output.
// weights[l] is layer_sizes[l+1] x layer_sizes[l], row-major.
struct MlpParameters {
    std::vector<std::size_t> layer_sizes; // default {1, 512, 1024, 1}
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

struct AdamConfig {
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    // Off by default: the update is theta -= alpha * m / sqrt(v + eps) with
    // raw moments and epsilon inside the root. On, the moments are divided
    // by (1 - beta^t) first.
    bool bias_correction = false;
};

// Gradient-shaped container; also holds the Adam moment estimates.
struct MlpGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

struct AdamState {
    MlpGradients m;
    MlpGradients v;
    std::uint64_t t = 0;
};

struct TrainingSample {
    double noise_p = 0.0;
    double min_expectation = 0.0;
};

struct TrainingDataset {
    std::vector<TrainingSample> samples;

    // Enforces the pipeline-facing schema: non-empty, distinct noise levels,
    // expectations inside [-1, 1]. The fit routines below do not require it.
    static TrainingDataset validated(std::vector<TrainingSample> samples);
};

struct TrainingMetrics {
    std::vector<double> epoch_loss; // loss at the start of each epoch
    double final_loss = 0.0;

    std::size_t epochs() const { return epoch_loss.size(); }
};

inline const std::vector<std::size_t> kDefaultLayerSizes = {1, 512, 1024, 1};
inline constexpr std::size_t kDefaultEpochs = 500;

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases.
MlpParameters init_mlp(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

double forward(const MlpParameters& params, double x,
               ExecutionPolicy policy = ExecutionPolicy::OpenMP);

double mse(std::span<const double> predicted, std::span<const double> actual);

// Exact gradient of the batch MSE with respect to every weight and bias.
// The ReLU subgradient at 0 is 0.
MlpGradients backward(const MlpParameters& params, std::span<const TrainingSample> batch,
                      ExecutionPolicy policy = ExecutionPolicy::OpenMP);

AdamState make_adam_state(const MlpParameters& params);

void adam_step(MlpParameters& params, const MlpGradients& grads, AdamState& state,
               const AdamConfig& config);

// Full-batch training; one Adam step per epoch. Deterministic given the
// initial parameters and config. Throws numeric_error (naming the epoch)
// if the loss leaves the finite range.
std::pair<MlpParameters, TrainingMetrics> train(const TrainingDataset& dataset,
                                                MlpParameters params,
                                                const AdamConfig& config,
                                                std::size_t epochs = kDefaultEpochs,
                                                ExecutionPolicy policy = ExecutionPolicy::OpenMP);

double predict_zero_noise(const MlpParameters& params,
                          ExecutionPolicy policy = ExecutionPolicy::OpenMP);

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
};

// Ordinary least squares on (noise_p, min_expectation).
LinearFit fit_linear(std::span<const TrainingSample> samples);

// Least-squares polynomial (ascending coefficient order), solved via the
// normal equations with per-column scaling of the Vandermonde matrix.
std::vector<double> fit_polynomial(std::span<const TrainingSample> samples,
                                   std::size_t degree);

double evaluate_polynomial(std::span<const double> coefficients, double x);

// Value at x of the Lagrange polynomial through all points. Duplicate noise
// levels are rejected.
double lagrange_value(std::span<const TrainingSample> samples, double x);

// Lagrange interpolation through all points, evaluated at p = 0.
double richardson_extrapolate(std::span<const TrainingSample> samples);

} // namespace znelab
