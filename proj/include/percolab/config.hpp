// Experiment configuration: one flat key-value record that round-trips
// losslessly through JSON. Command-line flags mirror keys one-to-one and
// override file values; every run echoes its resolved config next to its
// results so any row can be regenerated.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "percolab/lattice.hpp"

namespace percolab {

struct ExperimentConfig {
    std::string subcommand;
    std::optional<int> n;
    std::optional<int> big_n;  // conditioning radius N
    std::optional<double> p;
    std::optional<double> epsilon;
    std::optional<std::int64_t> replicas;
    std::optional<int> horizon;
    std::optional<double> tolerance;
    std::optional<std::int64_t> steps;
    std::string n_list;   // comma-separated, e.g. "4,8,16"
    std::string grid;     // comma-separated certificate levels
    std::string windows;  // comma-separated annuli, e.g. "2:4,4:8"
    std::string source;   // dsv: "ipc" or "iic"
    std::uint64_t master_seed = 0;
    int workers = 0;      // 0 = machine parallelism / PERCOLAB_WORKERS
    std::string output_path = "-";
    std::string output_format = "csv";  // "csv" or "jsonl"

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::string config_to_json(const ExperimentConfig& config);

// Parses a JSON config; unknown keys and malformed values are reported with
// field diagnostics (config_error).
ExperimentConfig config_from_json(const std::string& text);

ExperimentConfig load_config(const std::string& path);

// List parsing shared by flags and config values.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<Annulus> parse_window_list(const std::string& text);

}  // namespace percolab
