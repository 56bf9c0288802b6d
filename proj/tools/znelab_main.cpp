// znelab command-line interface: grid scans, dataset generation, network
// training, and the end-to-end zero-noise extrapolation pipeline.

#include "znelab/errors.hpp"
#include "znelab/harness.hpp"
#include "znelab/rng.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace znelab;

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    bool serial = false;
};

ExperimentConfig resolve_config(const CommonArgs& args) {
    ExperimentConfig config;
    if (!args.config_path.empty()) {
        config = load_config(args.config_path);
    }
    if (args.seed) {
        config.master_seed = *args.seed;
    }
    if (args.out_dir) {
        config.output_dir = *args.out_dir;
    }
    validate_config(config);
    return config;
}

ExecutionPolicy policy_of(const CommonArgs& args) {
    return args.serial ? ExecutionPolicy::Serial : ExecutionPolicy::OpenMP;
}

void ensure_out_dir(const ExperimentConfig& config) {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) {
        throw io_error("cannot create output directory '" + config.output_dir +
                       "': " + ec.message());
    }
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Experiment config file");
    cmd->add_option("--seed", args.seed, "Master seed (overrides the config)");
    cmd->add_option("--out", args.out_dir, "Output directory (overrides the config)");
    cmd->add_flag("--serial", args.serial, "Disable the OpenMP scan/training kernels");
}

void print_min(const char* label, const ScanResult& scan) {
    const auto minimum = min_energy(scan);
    std::printf("%s min energy %s at grid index %zu\n", label,
                format_double17(minimum.energy).c_str(), minimum.argmin_index);
}

int cmd_scan_ideal(const CommonArgs& args) {
    const auto config = resolve_config(args);
    ensure_out_dir(config);
    const auto grid = make_theta_grid(config.n_qubits, config.points_per_axis);
    const auto scan = scan_ideal(grid, z_string(config.n_qubits), policy_of(args));
    write_scan_csv(scan, fs::path(config.output_dir) / "scan_ideal.csv");
    print_min("ideal", scan);
    return kExitOk;
}

int cmd_scan_noisy(const CommonArgs& args, const std::vector<double>& p_list) {
    const auto config = resolve_config(args);
    ensure_out_dir(config);
    const auto grid = make_theta_grid(config.n_qubits, config.points_per_axis);
    const auto obs = z_string(config.n_qubits);
    const auto levels = p_list.empty() ? config.noise_levels : p_list;
    for (double p : levels) {
        const auto model = make_noise_model(NoiseLevel{p}, config.gate_filter_set());
        const auto scan = scan_noisy(grid, obs, model, policy_of(args));
        write_scan_csv(scan, fs::path(config.output_dir) /
                                 ("scan_noisy_" + format_double17(p) + ".csv"));
        print_min(("noisy p=" + format_double17(p)).c_str(), scan);
    }
    return kExitOk;
}

int cmd_scan_device(const CommonArgs& args, const std::optional<std::uint64_t>& shots,
                    const std::optional<std::string>& estimator) {
    auto config = resolve_config(args);
    if (shots) {
        config.shots = *shots; // flags override config keys
    }
    if (estimator) {
        config.estimator = estimator_from_name(*estimator);
    }
    validate_config(config);
    ensure_out_dir(config);
    const auto grid = make_theta_grid(config.n_qubits, config.points_per_axis);
    const auto model =
        make_noise_model(NoiseLevel{config.device_noise_p}, config.gate_filter_set());
    const auto scan = scan_sampled(grid, z_string(config.n_qubits), model, config.shots,
                                   config.estimator, config.master_seed, policy_of(args));
    write_scan_csv(scan, fs::path(config.output_dir) / "scan_device.csv");
    print_min("simulated device", scan);
    return kExitOk;
}

int cmd_gen_dataset(const CommonArgs& args) {
    const auto config = resolve_config(args);
    ensure_out_dir(config);
    const auto grid = make_theta_grid(config.n_qubits, config.points_per_axis);
    const auto obs = z_string(config.n_qubits);
    std::vector<TrainingSample> samples;
    for (double p : config.noise_levels) {
        const auto model = make_noise_model(NoiseLevel{p}, config.gate_filter_set());
        const auto scan = scan_noisy(grid, obs, model, policy_of(args));
        write_scan_csv(scan, fs::path(config.output_dir) /
                                 ("scan_noisy_" + format_double17(p) + ".csv"));
        samples.push_back(TrainingSample{p, min_energy(scan).energy});
    }
    const auto dataset = TrainingDataset::validated(std::move(samples));
    write_dataset_csv(dataset, fs::path(config.output_dir) / "dataset.csv");
    std::printf("dataset.csv written with %zu noise levels\n", dataset.samples.size());
    return kExitOk;
}

int cmd_train(const CommonArgs& args) {
    const auto config = resolve_config(args);
    const fs::path out(config.output_dir);
    const auto dataset = read_dataset_csv(out / "dataset.csv");
    const std::uint64_t mlp_seed = derive_seed(config.master_seed, 0x11f0);
    auto [trained, metrics] =
        train(dataset, init_mlp(config.layer_sizes, mlp_seed), config.adam, config.epochs,
              policy_of(args));
    write_mlp_json(trained, mlp_seed, config.epochs, metrics.final_loss, out / "mlp.json");
    write_training_loss_csv(metrics, out / "plot_training_loss.csv");
    std::printf("trained %zu epochs, final loss %s\n", metrics.epochs(),
                format_double17(metrics.final_loss).c_str());
    return kExitOk;
}

int cmd_extrapolate(const CommonArgs& args) {
    const auto config = resolve_config(args);
    const fs::path out(config.output_dir);
    const auto dataset = read_dataset_csv(out / "dataset.csv");
    const auto stored = read_mlp_json(out / "mlp.json");
    emit_extrapolation_csvs(dataset, stored.params, out / "plot_extrapolation_points.csv",
                            out / "plot_extrapolation_curves.csv");
    std::printf("nn_prediction %s\n",
                format_double17(predict_zero_noise(stored.params)).c_str());
    std::printf("baseline_linear %s\n",
                format_double17(fit_linear(dataset.samples).intercept).c_str());
    std::printf("baseline_poly2 %s\n",
                format_double17(
                    evaluate_polynomial(fit_polynomial(dataset.samples, 2), 0.0))
                    .c_str());
    std::printf("baseline_richardson %s\n",
                format_double17(richardson_extrapolate(dataset.samples)).c_str());
    return kExitOk;
}

int cmd_run_all(const CommonArgs& args) {
    const auto config = resolve_config(args);
    const auto result = run_pipeline(config, policy_of(args));
    const Report& r = result.report;
    std::printf("ideal_energy        %s\n", format_double17(r.ideal_energy).c_str());
    std::printf("device_energy       %s\n", format_double17(r.device_energy).c_str());
    std::printf("nn_prediction       %s\n", format_double17(r.nn_prediction).c_str());
    std::printf("baseline_linear     %s\n", format_double17(r.baseline_linear).c_str());
    std::printf("baseline_poly2      %s\n", format_double17(r.baseline_poly2).c_str());
    std::printf("baseline_richardson %s\n", format_double17(r.baseline_richardson).c_str());
    std::printf("abs_err_nn          %s\n", format_double17(r.abs_err_nn).c_str());
    std::printf("abs_err_device      %s\n", format_double17(r.abs_err_device).c_str());
    std::printf("inequality_holds    %s\n", r.inequality_holds ? "true" : "false");
    std::printf("artifacts in        %s\n", config.output_dir.c_str());
    return kExitOk;
}

int cmd_report(const CommonArgs& args) {
    const auto config = resolve_config(args);
    const auto report = read_report_json(fs::path(config.output_dir) / "report.json");
    std::printf("%s (seed %llu)\n", report.tool_version.c_str(),
                static_cast<unsigned long long>(report.seed));
    std::printf("ideal_energy        %s\n", format_double17(report.ideal_energy).c_str());
    for (const auto& [p, energy] : report.noisy_energies) {
        std::printf("noisy p=%-8s     %s\n", format_double17(p).c_str(),
                    format_double17(energy).c_str());
    }
    std::printf("device_energy       %s\n", format_double17(report.device_energy).c_str());
    std::printf("nn_prediction       %s\n", format_double17(report.nn_prediction).c_str());
    std::printf("baseline_linear     %s\n",
                format_double17(report.baseline_linear).c_str());
    std::printf("baseline_poly2      %s\n", format_double17(report.baseline_poly2).c_str());
    std::printf("baseline_richardson %s\n",
                format_double17(report.baseline_richardson).c_str());
    std::printf("abs_err_nn          %s\n", format_double17(report.abs_err_nn).c_str());
    std::printf("abs_err_device      %s\n", format_double17(report.abs_err_device).c_str());
    std::printf("inequality_holds    %s\n", report.inequality_holds ? "true" : "false");
    return kExitOk;
}

int cmd_plot_data(const CommonArgs& args) {
    const auto config = resolve_config(args);
    const fs::path out(config.output_dir);
    const auto ideal_rows = read_scan_csv(out / "scan_ideal.csv");
    const auto device_rows = read_scan_csv(out / "scan_device.csv");
    const auto dataset = read_dataset_csv(out / "dataset.csv");
    const auto stored = read_mlp_json(out / "mlp.json");
    emit_comparison_csv(ideal_rows, device_rows, out / "plot_comparison.csv");
    emit_extrapolation_csvs(dataset, stored.params, out / "plot_extrapolation_points.csv",
                            out / "plot_extrapolation_curves.csv");
    std::printf("plot series written to %s\n", config.output_dir.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RY-RZ ansatz scans under depolarizing noise with neural-network "
                 "zero-noise extrapolation"};
    app.require_subcommand(1);

    CommonArgs args;
    std::vector<double> p_list;

    auto* scan_ideal_cmd = app.add_subcommand("scan-ideal", "Exact noise-free grid scan");
    add_common(scan_ideal_cmd, args);

    auto* scan_noisy_cmd =
        app.add_subcommand("scan-noisy", "Exact density-matrix scans under noise");
    add_common(scan_noisy_cmd, args);
    scan_noisy_cmd->add_option("--p", p_list, "Noise levels (defaults to the config list)");

    auto* scan_device_cmd =
        app.add_subcommand("scan-device", "Shot-sampled scan (simulated device)");
    add_common(scan_device_cmd, args);
    std::optional<std::uint64_t> shots_flag;
    std::optional<std::string> estimator_flag;
    scan_device_cmd->add_option("--shots", shots_flag, "Shots per grid point");
    scan_device_cmd->add_option("--estimator", estimator_flag, "parity or paper00");

    auto* gen_dataset_cmd =
        app.add_subcommand("gen-dataset", "Write the (noise level, min energy) dataset");
    add_common(gen_dataset_cmd, args);

    auto* train_cmd = app.add_subcommand("train", "Train the extrapolation network");
    add_common(train_cmd, args);

    auto* extrapolate_cmd =
        app.add_subcommand("extrapolate", "Zero-noise predictions from stored artifacts");
    add_common(extrapolate_cmd, args);

    auto* run_all_cmd = app.add_subcommand("run-all", "Full pipeline plus report.json");
    add_common(run_all_cmd, args);

    auto* report_cmd = app.add_subcommand("report", "Pretty-print a stored report.json");
    add_common(report_cmd, args);

    auto* plot_data_cmd =
        app.add_subcommand("plot-data", "Re-emit plot CSVs from stored artifacts");
    add_common(plot_data_cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (scan_device_cmd->parsed()) return cmd_scan_device(args, shots_flag, estimator_flag);
        if (scan_ideal_cmd->parsed()) return cmd_scan_ideal(args);
        if (scan_noisy_cmd->parsed()) return cmd_scan_noisy(args, p_list);
        if (gen_dataset_cmd->parsed()) return cmd_gen_dataset(args);
        if (train_cmd->parsed()) return cmd_train(args);
        if (extrapolate_cmd->parsed()) return cmd_extrapolate(args);
        if (run_all_cmd->parsed()) return cmd_run_all(args);
        if (report_cmd->parsed()) return cmd_report(args);
        if (plot_data_cmd->parsed()) return cmd_plot_data(args);
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
