#include "znelab/errors.hpp"
#include "znelab/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace znelab {

namespace {

struct RawValue {
    bool is_array = false;
    std::string scalar;             // trimmed, quotes removed
    std::vector<std::string> items; // for arrays
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

RawValue parse_value_text(const std::string& text, const std::string& context) {
    const std::string trimmed = trim(text);
    RawValue value;
    if (!trimmed.empty() && trimmed.front() == '[') {
        if (trimmed.back() != ']') {
            throw validation_error(context + ": unterminated array");
        }
        value.is_array = true;
        const std::string body = trimmed.substr(1, trimmed.size() - 2);
        std::string item;
        std::stringstream ss(body);
        while (std::getline(ss, item, ',')) {
            const std::string t = trim(item);
            if (t.empty()) {
                throw validation_error(context + ": empty array element");
            }
            value.items.push_back(unquote(t));
        }
        return value;
    }
    if (trimmed.empty()) {
        throw validation_error(context + ": missing value");
    }
    value.scalar = unquote(trimmed);
    return value;
}

// Drops a '#' comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

double to_double(const std::string& text, const std::string& context) {
    double out = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        throw validation_error(context + ": '" + text + "' is not a number");
    }
    return out;
}

std::uint64_t to_uint(const std::string& text, const std::string& context) {
    std::uint64_t out = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        throw validation_error(context + ": '" + text + "' is not a non-negative integer");
    }
    return out;
}

bool to_bool(const std::string& text, const std::string& context) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw validation_error(context + ": '" + text + "' is not a boolean (true/false)");
}

void expect_scalar(const RawValue& value, const std::string& context) {
    if (value.is_array) {
        throw validation_error(context + ": expected a scalar, got an array");
    }
}

void expect_array(const RawValue& value, const std::string& context) {
    if (!value.is_array) {
        throw validation_error(context + ": expected an array like [a, b]");
    }
}

void apply_setting(ExperimentConfig& config, const std::string& key, const RawValue& value) {
    const std::string context = "config key '" + key + "'";
    if (key == "n_qubits") {
        expect_scalar(value, context);
        config.n_qubits = to_uint(value.scalar, context);
    } else if (key == "points_per_axis") {
        expect_scalar(value, context);
        config.points_per_axis = to_uint(value.scalar, context);
    } else if (key == "noise_levels") {
        expect_array(value, context);
        config.noise_levels.clear();
        for (const auto& item : value.items) {
            config.noise_levels.push_back(to_double(item, context));
        }
    } else if (key == "shots") {
        expect_scalar(value, context);
        config.shots = to_uint(value.scalar, context);
    } else if (key == "estimator") {
        expect_scalar(value, context);
        config.estimator = estimator_from_name(value.scalar);
    } else if (key == "layer_sizes") {
        expect_array(value, context);
        config.layer_sizes.clear();
        for (const auto& item : value.items) {
            config.layer_sizes.push_back(to_uint(item, context));
        }
    } else if (key == "adam_alpha") {
        expect_scalar(value, context);
        config.adam.alpha = to_double(value.scalar, context);
    } else if (key == "adam_beta1") {
        expect_scalar(value, context);
        config.adam.beta1 = to_double(value.scalar, context);
    } else if (key == "adam_beta2") {
        expect_scalar(value, context);
        config.adam.beta2 = to_double(value.scalar, context);
    } else if (key == "adam_epsilon") {
        expect_scalar(value, context);
        config.adam.epsilon = to_double(value.scalar, context);
    } else if (key == "adam_bias_correction") {
        expect_scalar(value, context);
        config.adam.bias_correction = to_bool(value.scalar, context);
    } else if (key == "epochs") {
        expect_scalar(value, context);
        config.epochs = to_uint(value.scalar, context);
    } else if (key == "master_seed") {
        expect_scalar(value, context);
        config.master_seed = to_uint(value.scalar, context);
    } else if (key == "output_dir") {
        expect_scalar(value, context);
        config.output_dir = value.scalar;
    } else if (key == "device_noise_p") {
        expect_scalar(value, context);
        config.device_noise_p = to_double(value.scalar, context);
    } else if (key == "gate_filter") {
        expect_array(value, context);
        config.gate_filter = value.items;
    } else {
        throw validation_error("unknown config key '" + key + "'");
    }
}

} // namespace

std::set<GateKind> ExperimentConfig::gate_filter_set() const {
    std::set<GateKind> kinds;
    for (const auto& name : gate_filter) {
        kinds.insert(gate_kind_from_name(name));
    }
    return kinds;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source) {
    ExperimentConfig config;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string stripped = trim(strip_comment(line));
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        const std::string where = source + ":" + std::to_string(line_no);
        if (eq == std::string::npos) {
            throw validation_error(where + ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty()) {
            throw validation_error(where + ": missing key before '='");
        }
        try {
            apply_setting(config, key, parse_value_text(stripped.substr(eq + 1), where));
        } catch (const validation_error& e) {
            throw validation_error(where + ": " + e.what());
        }
    }
    validate_config(config);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open config file '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.filename().string());
}

void apply_config_override(ExperimentConfig& config, const std::string& key,
                           const std::string& value) {
    apply_setting(config, key, parse_value_text(value, "override '" + key + "'"));
}

void validate_config(const ExperimentConfig& config) {
    if (config.n_qubits < 1 || config.n_qubits > kMaxQubits) {
        throw validation_error("n_qubits must lie in [1, " + std::to_string(kMaxQubits) +
                               "]");
    }
    if (config.points_per_axis < 1) {
        throw validation_error("points_per_axis must be at least 1");
    }
    // Rejects grids beyond the scan cap before any work starts.
    make_theta_grid(config.n_qubits, config.points_per_axis);

    if (config.noise_levels.empty()) {
        throw validation_error("noise_levels must not be empty");
    }
    std::set<double> seen;
    for (double p : config.noise_levels) {
        if (!std::isfinite(p) || p < 0.0 || p > kMaxNoiseP) {
            throw validation_error("noise_levels entries must lie in [0, 0.75]");
        }
        if (!seen.insert(p).second) {
            throw validation_error("noise_levels contains duplicate value " +
                                   format_double17(p));
        }
    }
    if (config.shots < 1) {
        throw validation_error("shots must be at least 1");
    }
    if (config.layer_sizes.size() < 2) {
        throw validation_error("layer_sizes needs at least two layers");
    }
    for (std::size_t s : config.layer_sizes) {
        if (s < 1) {
            throw validation_error("layer_sizes entries must be positive");
        }
    }
    if (config.layer_sizes.front() != 1 || config.layer_sizes.back() != 1) {
        throw validation_error("layer_sizes must start and end with 1 (scalar p in, "
                               "scalar energy out)");
    }
    if (!(config.adam.alpha > 0.0)) {
        throw validation_error("adam_alpha must be positive");
    }
    if (config.adam.beta1 < 0.0 || config.adam.beta1 >= 1.0 || config.adam.beta2 < 0.0 ||
        config.adam.beta2 >= 1.0) {
        throw validation_error("adam betas must lie in [0, 1)");
    }
    if (!(config.adam.epsilon > 0.0)) {
        throw validation_error("adam_epsilon must be positive");
    }
    if (config.epochs < 1) {
        throw validation_error("epochs must be at least 1");
    }
    if (config.output_dir.empty()) {
        throw validation_error("output_dir must not be empty");
    }
    if (!std::isfinite(config.device_noise_p) || config.device_noise_p < 0.0 ||
        config.device_noise_p > kMaxNoiseP) {
        throw validation_error("device_noise_p must lie in [0, 0.75]");
    }
    if (config.gate_filter.empty()) {
        throw validation_error("gate_filter must not be empty");
    }
    std::set<std::string> filter_seen;
    for (const auto& name : config.gate_filter) {
        gate_kind_from_name(name); // throws on unknown names
        if (!filter_seen.insert(name).second) {
            throw validation_error("gate_filter contains duplicate '" + name + "'");
        }
    }
}

} // namespace znelab
