// Times the OpenMP kernels against their serial reference paths: the exact
// noisy grid scan, the sampled scan, and network training. The two paths
// must agree bitwise; this target reports wall-clock speedup.

#include "znelab/extrapolator.hpp"
#include "znelab/harness.hpp"
#include "znelab/vqe.hpp"

#include <chrono>
#include <cstdio>
#include <string>

using namespace znelab;

namespace {

template <typename Fn>
double time_seconds(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

void report_row(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-22s %10.3fs %10.3fs %8.2fx   %s\n", name, serial_s, parallel_s,
                serial_s / parallel_s, identical ? "bitwise-equal" : "MISMATCH");
}

bool records_equal(const ScanResult& a, const ScanResult& b) {
    if (a.records.size() != b.records.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        if (a.records[i].expectation != b.records[i].expectation) {
            return false;
        }
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t epochs = 200;
    std::size_t points_per_axis = 8;
    if (argc > 1) {
        epochs = std::stoul(argv[1]);
    }
    if (argc > 2) {
        points_per_axis = std::stoul(argv[2]);
    }

    std::printf("workers: serial=1 openmp=%d\n", worker_count(ExecutionPolicy::OpenMP));
    std::printf("%-22s %11s %11s %9s\n", "kernel", "serial", "openmp", "speedup");

    const auto grid = make_theta_grid(2, points_per_axis);
    const auto obs = z_string(2);
    const auto model = make_noise_model(NoiseLevel{0.03});

    ScanResult noisy_serial{ExpectationMode::ExactMixed, {}, {}, grid, {}};
    ScanResult noisy_parallel = noisy_serial;
    const double t_noisy_s = time_seconds(
        [&] { noisy_serial = scan_noisy(grid, obs, model, ExecutionPolicy::Serial); });
    const double t_noisy_p = time_seconds(
        [&] { noisy_parallel = scan_noisy(grid, obs, model, ExecutionPolicy::OpenMP); });
    report_row("scan_noisy", t_noisy_s, t_noisy_p,
               records_equal(noisy_serial, noisy_parallel));

    ScanResult dev_serial = noisy_serial;
    ScanResult dev_parallel = noisy_serial;
    const double t_dev_s = time_seconds([&] {
        dev_serial = scan_sampled(grid, obs, model, 1024, Estimator::Parity, 42,
                                  ExecutionPolicy::Serial);
    });
    const double t_dev_p = time_seconds([&] {
        dev_parallel = scan_sampled(grid, obs, model, 1024, Estimator::Parity, 42,
                                    ExecutionPolicy::OpenMP);
    });
    report_row("scan_sampled", t_dev_s, t_dev_p, records_equal(dev_serial, dev_parallel));

    const auto dataset = TrainingDataset::validated({{0.01, -0.94},
                                                     {0.02, -0.90},
                                                     {0.03, -0.85},
                                                     {0.04, -0.80},
                                                     {0.05, -0.76}});
    const auto init = init_mlp(kDefaultLayerSizes, 7);
    MlpParameters serial_params;
    MlpParameters parallel_params;
    const double t_train_s = time_seconds([&] {
        serial_params =
            train(dataset, init, AdamConfig{}, epochs, ExecutionPolicy::Serial).first;
    });
    const double t_train_p = time_seconds([&] {
        parallel_params =
            train(dataset, init, AdamConfig{}, epochs, ExecutionPolicy::OpenMP).first;
    });
    report_row(("train (" + std::to_string(epochs) + " epochs)").c_str(), t_train_s,
               t_train_p, serial_params.weights == parallel_params.weights &&
                              serial_params.biases == parallel_params.biases);
    return 0;
}
