#pragma once

#include "znelab/extrapolator.hpp"
#include "znelab/vqe.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace znelab {

inline constexpr const char* kToolVersion = "znelab 0.1.0";

struct ExperimentConfig {
    std::size_t n_qubits = 2;
    std::size_t points_per_axis = 8;
    std::vector<double> noise_levels = {0.01, 0.02, 0.03, 0.04, 0.05};
    std::uint64_t shots = 1024;
    Estimator estimator = Estimator::Parity;
    std::vector<std::size_t> layer_sizes = kDefaultLayerSizes;
    AdamConfig adam;
    std::size_t epochs = kDefaultEpochs;
    std::uint64_t master_seed = 42;
    std::string output_dir = "out";
    double device_noise_p = 0.03;
    std::vector<std::string> gate_filter = {"id", "x",  "y",  "z",   "h",
                                            "rx", "ry", "rz", "cnot"};

    std::set<GateKind> gate_filter_set() const;
};

struct Report {
    double ideal_energy = 0.0;
    std::map<double, double> noisy_energies; // p -> min energy
    double device_energy = 0.0;
    double nn_prediction = 0.0;
    double baseline_linear = 0.0;
    double baseline_richardson = 0.0;
    double baseline_poly2 = 0.0;
    double abs_err_nn = 0.0;
    double abs_err_device = 0.0;
    bool inequality_holds = false;
    std::uint64_t seed = 0;
    ExperimentConfig config_echo;
    std::string tool_version = kToolVersion;
};

// Flat key = value document; '#' comments; arrays in brackets. Unknown keys
// are rejected. The full grammar is described in the README.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& source);

// Applies one "key=value" override on top of an existing config (CLI flags).
void apply_config_override(ExperimentConfig& config, const std::string& key,
                           const std::string& value);

void validate_config(const ExperimentConfig& config);

struct PipelineResult {
    Report report;
    ScanResult ideal;
    std::vector<ScanResult> noisy; // one per noise level, config order
    ScanResult device;
    TrainingDataset dataset;
    MlpParameters trained;
    TrainingMetrics metrics;
    std::vector<std::pair<std::size_t, double>> deltas; // device - ideal
};

// Full experiment: ideal scan, exact-noisy scans, dataset assembly, network
// training + zero-noise prediction, classical baselines, the simulated
// device scan, and every artifact written under config.output_dir.
// A failing stage aborts with the stage name prefixed to the cause.
PipelineResult run_pipeline(const ExperimentConfig& config,
                            ExecutionPolicy policy = ExecutionPolicy::OpenMP);

// --- artifact I/O (all writes are atomic: <path>.partial then rename) ---

std::string format_double17(double value); // 17 significant digits, C locale

void write_scan_csv(const ScanResult& scan, const std::filesystem::path& path);

struct ScanCsvRow {
    std::size_t grid_index = 0;
    std::vector<double> thetas;
    std::optional<double> noise_p;
    std::optional<std::uint64_t> shots;
    std::string mode;
    double expectation = 0.0;
};
std::vector<ScanCsvRow> read_scan_csv(const std::filesystem::path& path);

void write_dataset_csv(const TrainingDataset& dataset, const std::filesystem::path& path);
TrainingDataset read_dataset_csv(const std::filesystem::path& path);

void write_report_json(const Report& report, const std::filesystem::path& path);
Report read_report_json(const std::filesystem::path& path);

void write_mlp_json(const MlpParameters& params, std::uint64_t seed, std::size_t epochs,
                    double final_loss, const std::filesystem::path& path);
struct StoredMlp {
    MlpParameters params;
    std::uint64_t seed = 0;
    std::size_t epochs = 0;
    double final_loss = 0.0;
};
StoredMlp read_mlp_json(const std::filesystem::path& path);

void write_training_loss_csv(const TrainingMetrics& metrics,
                             const std::filesystem::path& path);

// Plot-ready series: the training curve, the per-theta device-vs-ideal
// comparison, and the extrapolation fits sampled on [0, max p].
void emit_plot_data(const PipelineResult& result, const std::filesystem::path& out_dir);

void emit_comparison_csv(const std::vector<ScanCsvRow>& ideal,
                         const std::vector<ScanCsvRow>& device,
                         const std::filesystem::path& path);

void emit_extrapolation_csvs(const TrainingDataset& dataset, const MlpParameters& trained,
                             const std::filesystem::path& points_path,
                             const std::filesystem::path& curves_path);

} // namespace znelab
