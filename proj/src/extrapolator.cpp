#include "znelab/extrapolator.hpp"

#include "znelab/errors.hpp"
#include "znelab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace znelab {

namespace {

void require_shapes(const std::vector<std::size_t>& layer_sizes) {
    if (layer_sizes.size() < 2) {
        throw validation_error("network needs at least two layers");
    }
    for (std::size_t s : layer_sizes) {
        if (s < 1) {
            throw validation_error("layer sizes must be positive");
        }
    }
}

// out = W x + b, parallel over output rows. Each row is a serially-summed
// dot product, so thread count never changes the result.
void affine(std::span<const double> w, std::span<const double> b,
            std::span<const double> x, std::span<double> out, ExecutionPolicy policy) {
    const std::size_t rows = b.size();
    const std::size_t cols = x.size();
    for_each_index(rows, policy, [&](std::size_t i) {
        const double* row = w.data() + i * cols;
        double acc = b[i];
        for (std::size_t j = 0; j < cols; ++j) {
            acc += row[j] * x[j];
        }
        out[i] = acc;
    });
}

double relu(double z) { return z > 0.0 ? z : 0.0; }
double relu_grad(double z) { return z > 0.0 ? 1.0 : 0.0; }

struct ForwardTrace {
    // activations[0] is the input; activations[l+1] the output of layer l
    // after its activation. pre_activations[l] holds layer l's affine output.
    std::vector<std::vector<double>> activations;
    std::vector<std::vector<double>> pre_activations;
};

ForwardTrace forward_trace(const MlpParameters& params, double x, ExecutionPolicy policy) {
    const std::size_t layers = params.weights.size();
    ForwardTrace trace;
    trace.activations.resize(layers + 1);
    trace.pre_activations.resize(layers);
    trace.activations[0] = {x};
    for (std::size_t l = 0; l < layers; ++l) {
        auto& z = trace.pre_activations[l];
        z.resize(params.layer_sizes[l + 1]);
        affine(params.weights[l], params.biases[l], trace.activations[l], z, policy);
        auto& a = trace.activations[l + 1];
        a.resize(z.size());
        if (l + 1 == layers) {
            a = z; // linear output head
        } else {
            for (std::size_t i = 0; i < z.size(); ++i) {
                a[i] = relu(z[i]);
            }
        }
    }
    return trace;
}

MlpGradients zero_gradients(const MlpParameters& params) {
    MlpGradients g;
    g.weights.reserve(params.weights.size());
    g.biases.reserve(params.biases.size());
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        g.weights.emplace_back(params.weights[l].size(), 0.0);
        g.biases.emplace_back(params.biases[l].size(), 0.0);
    }
    return g;
}

struct BatchResult {
    MlpGradients grads;
    std::vector<double> predictions;
};

BatchResult backprop_batch(const MlpParameters& params,
                           std::span<const TrainingSample> batch, ExecutionPolicy policy) {
    if (batch.empty()) {
        throw validation_error("cannot backpropagate an empty batch");
    }
    if (params.layer_sizes.front() != 1 || params.layer_sizes.back() != 1) {
        throw validation_error("scalar pipeline expects 1-wide input and output layers");
    }
    const std::size_t layers = params.weights.size();
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    BatchResult result{zero_gradients(params), {}};
    result.predictions.reserve(batch.size());

    for (const TrainingSample& sample : batch) {
        const ForwardTrace trace = forward_trace(params, sample.noise_p, policy);
        const double prediction = trace.activations.back()[0];
        result.predictions.push_back(prediction);

        // dL/dz for the current layer, starting at the linear head.
        std::vector<double> delta = {2.0 * (prediction - sample.min_expectation) * inv_n};
        for (std::size_t l = layers; l-- > 0;) {
            const auto& a_in = trace.activations[l];
            auto& g_w = result.grads.weights[l];
            auto& g_b = result.grads.biases[l];
            const std::size_t rows = params.layer_sizes[l + 1];
            const std::size_t cols = params.layer_sizes[l];
            for_each_index(rows, policy, [&](std::size_t i) {
                g_b[i] += delta[i];
                double* g_row = g_w.data() + i * cols;
                for (std::size_t j = 0; j < cols; ++j) {
                    g_row[j] += delta[i] * a_in[j];
                }
            });
            if (l == 0) {
                break;
            }
            const auto& z_prev = trace.pre_activations[l - 1];
            std::vector<double> prev_delta(cols);
            const auto& w = params.weights[l];
            for_each_index(cols, policy, [&](std::size_t j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < rows; ++i) {
                    acc += w[i * cols + j] * delta[i];
                }
                prev_delta[j] = acc * relu_grad(z_prev[j]);
            });
            delta = std::move(prev_delta);
        }
    }
    return result;
}

void adam_update_span(std::span<double> theta, std::span<const double> grad,
                      std::span<double> m, std::span<double> v, const AdamConfig& cfg,
                      double m_corr, double v_corr) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double g = grad[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
        const double mh = m[i] / m_corr;
        const double vh = v[i] / v_corr;
        theta[i] -= cfg.alpha * mh / std::sqrt(vh + cfg.epsilon);
    }
}

} // namespace

TrainingDataset TrainingDataset::validated(std::vector<TrainingSample> samples) {
    if (samples.empty()) {
        throw validation_error("training dataset is empty");
    }
    std::set<double> seen;
    for (const auto& s : samples) {
        if (!std::isfinite(s.noise_p) || !std::isfinite(s.min_expectation)) {
            throw validation_error("dataset entries must be finite");
        }
        if (!seen.insert(s.noise_p).second) {
            throw validation_error("duplicate noise level " + std::to_string(s.noise_p) +
                                   " in dataset");
        }
        if (s.min_expectation < -1.0 || s.min_expectation > 1.0) {
            throw validation_error("expectation " + std::to_string(s.min_expectation) +
                                   " lies outside [-1, 1]");
        }
    }
    return TrainingDataset{std::move(samples)};
}

MlpParameters init_mlp(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
    require_shapes(layer_sizes);
    MlpParameters params;
    params.layer_sizes = layer_sizes;
    auto rng = make_rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const std::size_t fan_in = layer_sizes[l];
        const std::size_t fan_out = layer_sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::vector<double> w(fan_in * fan_out);
        for (double& entry : w) {
            entry = uniform_double(rng, -limit, limit);
        }
        params.weights.push_back(std::move(w));
        params.biases.emplace_back(fan_out, 0.0);
    }
    return params;
}

double forward(const MlpParameters& params, double x, ExecutionPolicy policy) {
    if (!std::isfinite(x)) {
        throw validation_error("network input must be finite");
    }
    if (params.layer_sizes.front() != 1 || params.layer_sizes.back() != 1) {
        throw validation_error("scalar pipeline expects 1-wide input and output layers");
    }
    const ForwardTrace trace = forward_trace(params, x, policy);
    const double y = trace.activations.back()[0];
    if (!std::isfinite(y)) {
        throw numeric_error("network output is not finite");
    }
    return y;
}

double mse(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size()) {
        throw validation_error("prediction and target lengths differ");
    }
    if (predicted.empty()) {
        throw validation_error("cannot average an empty sample set");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - actual[i];
        acc += d * d;
    }
    return acc / static_cast<double>(predicted.size());
}

MlpGradients backward(const MlpParameters& params, std::span<const TrainingSample> batch,
                      ExecutionPolicy policy) {
    return backprop_batch(params, batch, policy).grads;
}

AdamState make_adam_state(const MlpParameters& params) {
    AdamState state;
    state.m = zero_gradients(params);
    state.v = zero_gradients(params);
    state.t = 0;
    return state;
}

void adam_step(MlpParameters& params, const MlpGradients& grads, AdamState& state,
               const AdamConfig& config) {
    if (grads.weights.size() != params.weights.size() ||
        grads.biases.size() != params.biases.size()) {
        throw validation_error("gradient shape does not match the parameters");
    }
    state.t += 1;
    double m_corr = 1.0;
    double v_corr = 1.0;
    if (config.bias_correction) {
        m_corr = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
        v_corr = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
    }
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        if (grads.weights[l].size() != params.weights[l].size() ||
            grads.biases[l].size() != params.biases[l].size()) {
            throw validation_error("gradient shape does not match the parameters");
        }
        adam_update_span(params.weights[l], grads.weights[l], state.m.weights[l],
                         state.v.weights[l], config, m_corr, v_corr);
        adam_update_span(params.biases[l], grads.biases[l], state.m.biases[l],
                         state.v.biases[l], config, m_corr, v_corr);
    }
}

std::pair<MlpParameters, TrainingMetrics> train(const TrainingDataset& dataset,
                                                MlpParameters params,
                                                const AdamConfig& config,
                                                std::size_t epochs,
                                                ExecutionPolicy policy) {
    if (dataset.samples.empty()) {
        throw validation_error("training dataset is empty");
    }
    std::vector<double> targets;
    targets.reserve(dataset.samples.size());
    for (const auto& s : dataset.samples) {
        targets.push_back(s.min_expectation);
    }

    AdamState state = make_adam_state(params);
    TrainingMetrics metrics;
    metrics.epoch_loss.reserve(epochs);
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        BatchResult batch = backprop_batch(params, dataset.samples, policy);
        const double loss = mse(batch.predictions, targets);
        if (!std::isfinite(loss)) {
            throw numeric_error("training loss diverged at epoch " + std::to_string(epoch));
        }
        metrics.epoch_loss.push_back(loss);
        adam_step(params, batch.grads, state, config);
    }

    std::vector<double> final_preds;
    final_preds.reserve(dataset.samples.size());
    for (const auto& s : dataset.samples) {
        final_preds.push_back(forward(params, s.noise_p, policy));
    }
    metrics.final_loss = mse(final_preds, targets);
    if (!std::isfinite(metrics.final_loss)) {
        throw numeric_error("training loss diverged at epoch " + std::to_string(epochs));
    }
    return {std::move(params), std::move(metrics)};
}

double predict_zero_noise(const MlpParameters& params, ExecutionPolicy policy) {
    return forward(params, 0.0, policy);
}

LinearFit fit_linear(std::span<const TrainingSample> samples) {
    if (samples.size() < 2) {
        throw validation_error("linear fit needs at least two points");
    }
    double mean_p = 0.0;
    double mean_r = 0.0;
    for (const auto& s : samples) {
        mean_p += s.noise_p;
        mean_r += s.min_expectation;
    }
    mean_p /= static_cast<double>(samples.size());
    mean_r /= static_cast<double>(samples.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& s : samples) {
        const double dx = s.noise_p - mean_p;
        sxx += dx * dx;
        sxy += dx * (s.min_expectation - mean_r);
    }
    if (sxx == 0.0) {
        throw validation_error("linear fit is singular: all noise levels are equal");
    }
    const double slope = sxy / sxx;
    return LinearFit{mean_r - slope * mean_p, slope};
}

std::vector<double> fit_polynomial(std::span<const TrainingSample> samples,
                                   std::size_t degree) {
    std::set<double> distinct;
    for (const auto& s : samples) {
        distinct.insert(s.noise_p);
    }
    const std::size_t terms = degree + 1;
    if (terms > distinct.size()) {
        throw validation_error("polynomial degree " + std::to_string(degree) +
                               " is underdetermined by " + std::to_string(distinct.size()) +
                               " distinct noise levels");
    }
    const std::size_t n = samples.size();

    // Vandermonde with per-column max-abs scaling.
    std::vector<double> vand(n * terms);
    for (std::size_t i = 0; i < n; ++i) {
        double power = 1.0;
        for (std::size_t j = 0; j < terms; ++j) {
            vand[i * terms + j] = power;
            power *= samples[i].noise_p;
        }
    }
    std::vector<double> col_scale(terms, 0.0);
    for (std::size_t j = 0; j < terms; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            col_scale[j] = std::max(col_scale[j], std::abs(vand[i * terms + j]));
        }
        if (col_scale[j] == 0.0) {
            col_scale[j] = 1.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            vand[i * terms + j] /= col_scale[j];
        }
    }

    // Normal equations A^T A c = A^T y.
    std::vector<double> ata(terms * terms, 0.0);
    std::vector<double> aty(terms, 0.0);
    for (std::size_t j = 0; j < terms; ++j) {
        for (std::size_t k = 0; k < terms; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += vand[i * terms + j] * vand[i * terms + k];
            }
            ata[j * terms + k] = acc;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += vand[i * terms + j] * samples[i].min_expectation;
        }
        aty[j] = acc;
    }

    // Gaussian elimination with partial pivoting.
    std::vector<std::size_t> perm(terms);
    for (std::size_t i = 0; i < terms; ++i) {
        perm[i] = i;
    }
    for (std::size_t col = 0; col < terms; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < terms; ++row) {
            if (std::abs(ata[perm[row] * terms + col]) >
                std::abs(ata[perm[pivot] * terms + col])) {
                pivot = row;
            }
        }
        std::swap(perm[col], perm[pivot]);
        const double diag = ata[perm[col] * terms + col];
        if (diag == 0.0) {
            throw validation_error("normal equations are singular");
        }
        for (std::size_t row = col + 1; row < terms; ++row) {
            const double factor = ata[perm[row] * terms + col] / diag;
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t k = col; k < terms; ++k) {
                ata[perm[row] * terms + k] -= factor * ata[perm[col] * terms + k];
            }
            aty[perm[row]] -= factor * aty[perm[col]];
        }
    }
    std::vector<double> scaled(terms, 0.0);
    for (std::size_t col = terms; col-- > 0;) {
        double acc = aty[perm[col]];
        for (std::size_t k = col + 1; k < terms; ++k) {
            acc -= ata[perm[col] * terms + k] * scaled[k];
        }
        scaled[col] = acc / ata[perm[col] * terms + col];
    }

    std::vector<double> coefficients(terms);
    for (std::size_t j = 0; j < terms; ++j) {
        coefficients[j] = scaled[j] / col_scale[j];
    }
    return coefficients;
}

double evaluate_polynomial(std::span<const double> coefficients, double x) {
    double acc = 0.0;
    for (std::size_t j = coefficients.size(); j-- > 0;) {
        acc = acc * x + coefficients[j];
    }
    return acc;
}

double lagrange_value(std::span<const TrainingSample> samples, double x) {
    if (samples.size() < 2) {
        throw validation_error("interpolation needs at least two points");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            if (samples[i].noise_p == samples[j].noise_p) {
                throw validation_error("duplicate noise level " +
                                       std::to_string(samples[i].noise_p));
            }
        }
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double weight = 1.0;
        for (std::size_t j = 0; j < samples.size(); ++j) {
            if (j == i) {
                continue;
            }
            weight *= (x - samples[j].noise_p) / (samples[i].noise_p - samples[j].noise_p);
        }
        acc += weight * samples[i].min_expectation;
    }
    return acc;
}

double richardson_extrapolate(std::span<const TrainingSample> samples) {
    return lagrange_value(samples, 0.0);
}

} // namespace znelab
