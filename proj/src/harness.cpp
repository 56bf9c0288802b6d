#include "znelab/harness.hpp"

#include "znelab/errors.hpp"
#include "znelab/rng.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace znelab {

namespace {

using nlohmann::json;

constexpr std::uint64_t kMlpInitDomain = 0x11f0;

// Runs one pipeline stage, prefixing failures with the stage name while
// keeping the exception type (it drives the exit code).
template <typename Fn>
auto run_stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const capacity_error& e) {
        throw capacity_error("stage " + name + ": " + e.what());
    } catch (const validation_error& e) {
        throw validation_error("stage " + name + ": " + e.what());
    } catch (const io_error& e) {
        throw io_error("stage " + name + ": " + e.what());
    } catch (const numeric_error& e) {
        throw numeric_error("stage " + name + ": " + e.what());
    } catch (const std::exception& e) {
        throw numeric_error("stage " + name + ": " + e.what());
    }
}

// Atomic text write: the bytes land at <path>.partial and are renamed into
// place only on success, so a crash never leaves a truncated final file.
void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path partial = path.string() + ".partial";
    {
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw io_error("cannot open '" + partial.string() + "' for writing");
        }
        out << text;
        out.flush();
        if (!out) {
            throw io_error("failed while writing '" + partial.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(partial, path, ec);
    if (ec) {
        throw io_error("cannot rename '" + partial.string() + "' to '" + path.string() +
                       "': " + ec.message());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double parse_double_field(const std::string& text, const std::filesystem::path& path) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw io_error("malformed number '" + text + "' in '" + path.string() + "'");
    }
    return out;
}

std::uint64_t parse_uint_field(const std::string& text, const std::filesystem::path& path) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw io_error("malformed integer '" + text + "' in '" + path.string() + "'");
    }
    return out;
}

json config_to_json(const ExperimentConfig& config) {
    json j;
    j["n_qubits"] = config.n_qubits;
    j["points_per_axis"] = config.points_per_axis;
    j["noise_levels"] = config.noise_levels;
    j["shots"] = config.shots;
    j["estimator"] = estimator_name(config.estimator);
    j["layer_sizes"] = config.layer_sizes;
    j["adam_alpha"] = config.adam.alpha;
    j["adam_beta1"] = config.adam.beta1;
    j["adam_beta2"] = config.adam.beta2;
    j["adam_epsilon"] = config.adam.epsilon;
    j["adam_bias_correction"] = config.adam.bias_correction;
    j["epochs"] = config.epochs;
    j["master_seed"] = config.master_seed;
    j["output_dir"] = config.output_dir;
    j["device_noise_p"] = config.device_noise_p;
    j["gate_filter"] = config.gate_filter;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    config.n_qubits = j.at("n_qubits").get<std::size_t>();
    config.points_per_axis = j.at("points_per_axis").get<std::size_t>();
    config.noise_levels = j.at("noise_levels").get<std::vector<double>>();
    config.shots = j.at("shots").get<std::uint64_t>();
    config.estimator = estimator_from_name(j.at("estimator").get<std::string>());
    config.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    config.adam.alpha = j.at("adam_alpha").get<double>();
    config.adam.beta1 = j.at("adam_beta1").get<double>();
    config.adam.beta2 = j.at("adam_beta2").get<double>();
    config.adam.epsilon = j.at("adam_epsilon").get<double>();
    config.adam.bias_correction = j.at("adam_bias_correction").get<bool>();
    config.epochs = j.at("epochs").get<std::size_t>();
    config.master_seed = j.at("master_seed").get<std::uint64_t>();
    config.output_dir = j.at("output_dir").get<std::string>();
    config.device_noise_p = j.at("device_noise_p").get<double>();
    config.gate_filter = j.at("gate_filter").get<std::vector<std::string>>();
    return config;
}

} // namespace

std::string format_double17(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_scan_csv(const ScanResult& scan, const std::filesystem::path& path) {
    const std::size_t axes = 2 * scan.grid.n_qubits();
    std::string text;
    text.reserve(64 * (scan.records.size() + 1));
    text += "grid_index";
    for (std::size_t a = 0; a < axes; ++a) {
        text += ",theta_" + std::to_string(a);
    }
    text += ",noise_p,shots,mode,expectation\n";
    for (const auto& record : scan.records) {
        text += std::to_string(record.grid_index);
        for (double v : record.theta.values) {
            text += ',';
            text += format_double17(v);
        }
        text += ',';
        if (record.noise_p) {
            text += format_double17(*record.noise_p);
        }
        text += ',';
        if (scan.shots) {
            text += std::to_string(*scan.shots);
        }
        text += ',';
        text += expectation_mode_name(record.mode);
        text += ',';
        text += format_double17(record.expectation);
        text += '\n';
    }
    write_text_atomic(path, text);
}

std::vector<ScanCsvRow> read_scan_csv(const std::filesystem::path& path) {
    std::stringstream ss(read_text(path));
    std::string line;
    if (!std::getline(ss, line)) {
        throw io_error("empty scan file '" + path.string() + "'");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 5 || header.front() != "grid_index" ||
        header.back() != "expectation") {
        throw io_error("unexpected scan header in '" + path.string() + "'");
    }
    const std::size_t axes = header.size() - 5;
    std::vector<ScanCsvRow> rows;
    while (std::getline(ss, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw io_error("ragged row in '" + path.string() + "'");
        }
        ScanCsvRow row;
        row.grid_index = parse_uint_field(fields[0], path);
        for (std::size_t a = 0; a < axes; ++a) {
            row.thetas.push_back(parse_double_field(fields[1 + a], path));
        }
        if (!fields[1 + axes].empty()) {
            row.noise_p = parse_double_field(fields[1 + axes], path);
        }
        if (!fields[2 + axes].empty()) {
            row.shots = parse_uint_field(fields[2 + axes], path);
        }
        row.mode = fields[3 + axes];
        row.expectation = parse_double_field(fields[4 + axes], path);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_dataset_csv(const TrainingDataset& dataset, const std::filesystem::path& path) {
    std::string text = "noise_p,min_expectation\n";
    for (const auto& sample : dataset.samples) {
        text += format_double17(sample.noise_p);
        text += ',';
        text += format_double17(sample.min_expectation);
        text += '\n';
    }
    write_text_atomic(path, text);
}

TrainingDataset read_dataset_csv(const std::filesystem::path& path) {
    std::stringstream ss(read_text(path));
    std::string line;
    if (!std::getline(ss, line) || line != "noise_p,min_expectation") {
        throw io_error("unexpected dataset header in '" + path.string() + "'");
    }
    std::vector<TrainingSample> samples;
    while (std::getline(ss, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw io_error("ragged row in '" + path.string() + "'");
        }
        samples.push_back(TrainingSample{parse_double_field(fields[0], path),
                                         parse_double_field(fields[1], path)});
    }
    return TrainingDataset::validated(std::move(samples));
}

void write_report_json(const Report& report, const std::filesystem::path& path) {
    json j;
    j["ideal_energy"] = report.ideal_energy;
    json noisy = json::object();
    for (const auto& [p, energy] : report.noisy_energies) {
        noisy[format_double17(p)] = energy;
    }
    j["noisy_energies"] = noisy;
    j["device_energy"] = report.device_energy;
    j["nn_prediction"] = report.nn_prediction;
    j["baseline_linear"] = report.baseline_linear;
    j["baseline_richardson"] = report.baseline_richardson;
    j["baseline_poly2"] = report.baseline_poly2;
    j["abs_err_nn"] = report.abs_err_nn;
    j["abs_err_device"] = report.abs_err_device;
    j["inequality_holds"] = report.inequality_holds;
    j["seed"] = report.seed;
    j["config_echo"] = config_to_json(report.config_echo);
    j["tool_version"] = report.tool_version;
    write_text_atomic(path, j.dump(2) + "\n");
}

Report read_report_json(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw io_error("cannot parse '" + path.string() + "': " + e.what());
    }
    Report report;
    try {
        report.ideal_energy = j.at("ideal_energy").get<double>();
        for (const auto& [key, value] : j.at("noisy_energies").items()) {
            report.noisy_energies[parse_double_field(key, path)] = value.get<double>();
        }
        report.device_energy = j.at("device_energy").get<double>();
        report.nn_prediction = j.at("nn_prediction").get<double>();
        report.baseline_linear = j.at("baseline_linear").get<double>();
        report.baseline_richardson = j.at("baseline_richardson").get<double>();
        report.baseline_poly2 = j.at("baseline_poly2").get<double>();
        report.abs_err_nn = j.at("abs_err_nn").get<double>();
        report.abs_err_device = j.at("abs_err_device").get<double>();
        report.inequality_holds = j.at("inequality_holds").get<bool>();
        report.seed = j.at("seed").get<std::uint64_t>();
        report.config_echo = config_from_json(j.at("config_echo"));
        report.tool_version = j.at("tool_version").get<std::string>();
    } catch (const json::exception& e) {
        throw io_error("malformed report '" + path.string() + "': " + e.what());
    }
    return report;
}

void write_mlp_json(const MlpParameters& params, std::uint64_t seed, std::size_t epochs,
                    double final_loss, const std::filesystem::path& path) {
    json j;
    j["format"] = "znelab-mlp";
    j["format_version"] = 1;
    j["layer_sizes"] = params.layer_sizes;
    j["weights"] = params.weights;
    j["biases"] = params.biases;
    j["hidden_activation"] = "relu";
    j["output_activation"] = "linear";
    j["training"] = {{"seed", seed}, {"epochs", epochs}, {"final_loss", final_loss}};
    write_text_atomic(path, j.dump() + "\n");
}

StoredMlp read_mlp_json(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw io_error("cannot parse '" + path.string() + "': " + e.what());
    }
    StoredMlp stored;
    try {
        if (j.at("format").get<std::string>() != "znelab-mlp" ||
            j.at("format_version").get<int>() != 1) {
            throw io_error("'" + path.string() + "' is not a version-1 znelab-mlp file");
        }
        stored.params.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
        stored.params.weights = j.at("weights").get<std::vector<std::vector<double>>>();
        stored.params.biases = j.at("biases").get<std::vector<std::vector<double>>>();
        stored.seed = j.at("training").at("seed").get<std::uint64_t>();
        stored.epochs = j.at("training").at("epochs").get<std::size_t>();
        stored.final_loss = j.at("training").at("final_loss").get<double>();
    } catch (const json::exception& e) {
        throw io_error("malformed mlp file '" + path.string() + "': " + e.what());
    }
    return stored;
}

void write_training_loss_csv(const TrainingMetrics& metrics,
                             const std::filesystem::path& path) {
    std::string text = "epoch,loss\n";
    for (std::size_t epoch = 0; epoch < metrics.epoch_loss.size(); ++epoch) {
        text += std::to_string(epoch);
        text += ',';
        text += format_double17(metrics.epoch_loss[epoch]);
        text += '\n';
    }
    write_text_atomic(path, text);
}

void emit_comparison_csv(const std::vector<ScanCsvRow>& ideal,
                         const std::vector<ScanCsvRow>& device,
                         const std::filesystem::path& path) {
    if (ideal.size() != device.size()) {
        throw validation_error("ideal and device scans have different sizes");
    }
    std::string text = "grid_index,e_ideal,e_sampled,delta_e\n";
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        if (ideal[i].grid_index != device[i].grid_index) {
            throw validation_error("ideal and device scans disagree on grid indices");
        }
        text += std::to_string(ideal[i].grid_index);
        text += ',';
        text += format_double17(ideal[i].expectation);
        text += ',';
        text += format_double17(device[i].expectation);
        text += ',';
        text += format_double17(device[i].expectation - ideal[i].expectation);
        text += '\n';
    }
    write_text_atomic(path, text);
}

void emit_extrapolation_csvs(const TrainingDataset& dataset, const MlpParameters& trained,
                             const std::filesystem::path& points_path,
                             const std::filesystem::path& curves_path) {
    write_dataset_csv(dataset, points_path);

    double max_p = 0.0;
    for (const auto& s : dataset.samples) {
        max_p = std::max(max_p, s.noise_p);
    }
    const LinearFit linear = fit_linear(dataset.samples);
    const std::vector<double> poly2 = fit_polynomial(dataset.samples, 2);

    std::string text = "p,nn,linear,poly2,richardson\n";
    constexpr std::size_t kCurvePoints = 100;
    for (std::size_t k = 0; k < kCurvePoints; ++k) {
        const double p =
            max_p * static_cast<double>(k) / static_cast<double>(kCurvePoints - 1);
        text += format_double17(p);
        text += ',';
        text += format_double17(forward(trained, p));
        text += ',';
        text += format_double17(linear.intercept + linear.slope * p);
        text += ',';
        text += format_double17(evaluate_polynomial(poly2, p));
        text += ',';
        text += format_double17(lagrange_value(dataset.samples, p));
        text += '\n';
    }
    write_text_atomic(curves_path, text);
}

PipelineResult run_pipeline(const ExperimentConfig& config, ExecutionPolicy policy) {
    validate_config(config);
    if (config.noise_levels.size() < 3) {
        throw validation_error(
            "run_pipeline needs at least 3 noise_levels for the quadratic baseline");
    }

    const auto grid = run_stage("grid", [&] {
        return make_theta_grid(config.n_qubits, config.points_per_axis);
    });
    const PauliZString obs = z_string(config.n_qubits);
    const auto filter = config.gate_filter_set();

    PipelineResult result{Report{},
                          ScanResult{ExpectationMode::ExactPure, {}, {}, grid, {}},
                          {},
                          ScanResult{ExpectationMode::Sampled, {}, {}, grid, {}},
                          TrainingDataset{},
                          MlpParameters{},
                          TrainingMetrics{},
                          {}};

    result.ideal = run_stage("scan_ideal", [&] { return scan_ideal(grid, obs, policy); });

    std::vector<TrainingSample> samples;
    for (double p : config.noise_levels) {
        auto scan = run_stage("scan_noisy", [&] {
            return scan_noisy(grid, obs, make_noise_model(NoiseLevel{p}, filter), policy);
        });
        const auto minimum = min_energy(scan);
        samples.push_back(TrainingSample{p, minimum.energy});
        result.report.noisy_energies[p] = minimum.energy;
        result.noisy.push_back(std::move(scan));
    }
    result.dataset = run_stage("gen_dataset", [&] {
        return TrainingDataset::validated(std::move(samples));
    });

    const std::uint64_t mlp_seed = derive_seed(config.master_seed, kMlpInitDomain);
    auto [trained, metrics] = run_stage("train", [&] {
        return train(result.dataset, init_mlp(config.layer_sizes, mlp_seed), config.adam,
                     config.epochs, policy);
    });
    result.trained = std::move(trained);
    result.metrics = std::move(metrics);

    result.device = run_stage("scan_device", [&] {
        return scan_sampled(grid, obs,
                            make_noise_model(NoiseLevel{config.device_noise_p}, filter),
                            config.shots, config.estimator, config.master_seed, policy);
    });
    result.deltas = delta_e(result.device, result.ideal);

    Report& report = result.report;
    report.ideal_energy = min_energy(result.ideal).energy;
    report.device_energy = min_energy(result.device).energy;
    report.nn_prediction = run_stage("extrapolate", [&] {
        return predict_zero_noise(result.trained, policy);
    });
    report.baseline_linear = fit_linear(result.dataset.samples).intercept;
    report.baseline_richardson = richardson_extrapolate(result.dataset.samples);
    report.baseline_poly2 = evaluate_polynomial(fit_polynomial(result.dataset.samples, 2), 0.0);
    report.abs_err_nn = std::abs(report.ideal_energy - report.nn_prediction);
    report.abs_err_device = std::abs(report.ideal_energy - report.device_energy);
    report.inequality_holds = report.abs_err_nn < report.abs_err_device;
    report.seed = config.master_seed;
    report.config_echo = config;
    report.tool_version = kToolVersion;

    run_stage("write_artifacts", [&] {
        const std::filesystem::path out(config.output_dir);
        std::error_code ec;
        std::filesystem::create_directories(out, ec);
        if (ec) {
            throw io_error("cannot create output directory '" + out.string() +
                           "': " + ec.message());
        }
        write_scan_csv(result.ideal, out / "scan_ideal.csv");
        for (std::size_t i = 0; i < result.noisy.size(); ++i) {
            write_scan_csv(result.noisy[i],
                           out / ("scan_noisy_" +
                                  format_double17(config.noise_levels[i]) + ".csv"));
        }
        write_scan_csv(result.device, out / "scan_device.csv");
        write_dataset_csv(result.dataset, out / "dataset.csv");
        write_mlp_json(result.trained, mlp_seed, config.epochs, result.metrics.final_loss,
                       out / "mlp.json");
        write_report_json(report, out / "report.json");
        emit_plot_data(result, out);
        return 0;
    });

    return result;
}

void emit_plot_data(const PipelineResult& result, const std::filesystem::path& out_dir) {
    write_training_loss_csv(result.metrics, out_dir / "plot_training_loss.csv");

    std::vector<ScanCsvRow> ideal_rows;
    std::vector<ScanCsvRow> device_rows;
    ideal_rows.reserve(result.ideal.records.size());
    device_rows.reserve(result.device.records.size());
    for (const auto& r : result.ideal.records) {
        ideal_rows.push_back(ScanCsvRow{r.grid_index, {}, r.noise_p, {},
                                        expectation_mode_name(r.mode), r.expectation});
    }
    for (const auto& r : result.device.records) {
        device_rows.push_back(ScanCsvRow{r.grid_index, {}, r.noise_p, {},
                                         expectation_mode_name(r.mode), r.expectation});
    }
    emit_comparison_csv(ideal_rows, device_rows, out_dir / "plot_comparison.csv");
    emit_extrapolation_csvs(result.dataset, result.trained,
                            out_dir / "plot_extrapolation_points.csv",
                            out_dir / "plot_extrapolation_curves.csv");
}

} // namespace znelab
