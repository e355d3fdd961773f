#include "percolab/config.hpp"

#include <fstream>
#include <sstream>

#include "percolab/errors.hpp"

#include <json.hpp>

namespace percolab {

namespace {

using nlohmann::json;

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& value) {
    if (value) j[key] = *value;
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& value) {
    if (j.contains(key)) value = j.at(key).get<T>();
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
    json j;
    j["subcommand"] = config.subcommand;
    put_optional(j, "n", config.n);
    put_optional(j, "N", config.big_n);
    put_optional(j, "p", config.p);
    put_optional(j, "epsilon", config.epsilon);
    put_optional(j, "replicas", config.replicas);
    put_optional(j, "horizon", config.horizon);
    put_optional(j, "tolerance", config.tolerance);
    put_optional(j, "steps", config.steps);
    if (!config.n_list.empty()) j["n_list"] = config.n_list;
    if (!config.grid.empty()) j["grid"] = config.grid;
    if (!config.windows.empty()) j["windows"] = config.windows;
    if (!config.source.empty()) j["source"] = config.source;
    j["seed"] = config.master_seed;
    j["workers"] = config.workers;
    j["out"] = config.output_path;
    j["format"] = config.output_format;
    return j.dump();
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse failure: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config must be a JSON object of key-value pairs");

    static const char* known[] = {"subcommand", "n",        "N",     "p",       "epsilon",
                                  "replicas",   "horizon",  "tolerance", "steps",
                                  "n_list",     "grid",     "windows",   "source",
                                  "seed",       "workers",  "out",       "format"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw config_error("config field '" + key + "' is not recognized");
    }

    ExperimentConfig config;
    try {
        if (j.contains("subcommand")) config.subcommand = j.at("subcommand").get<std::string>();
        get_optional(j, "n", config.n);
        get_optional(j, "N", config.big_n);
        get_optional(j, "p", config.p);
        get_optional(j, "epsilon", config.epsilon);
        get_optional(j, "replicas", config.replicas);
        get_optional(j, "horizon", config.horizon);
        get_optional(j, "tolerance", config.tolerance);
        get_optional(j, "steps", config.steps);
        if (j.contains("n_list")) config.n_list = j.at("n_list").get<std::string>();
        if (j.contains("grid")) config.grid = j.at("grid").get<std::string>();
        if (j.contains("windows")) config.windows = j.at("windows").get<std::string>();
        if (j.contains("source")) config.source = j.at("source").get<std::string>();
        if (j.contains("seed")) config.master_seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("workers")) config.workers = j.at("workers").get<int>();
        if (j.contains("out")) config.output_path = j.at("out").get<std::string>();
        if (j.contains("format")) config.output_format = j.at("format").get<std::string>();
    } catch (const json::type_error& e) {
        throw config_error(std::string("config field has the wrong type: ") + e.what());
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config file '" + path + "' cannot be opened");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        return ExperimentConfig{};  // empty file: all defaults
    }
    return config_from_json(text);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw config_error("'" + item + "' is not an integer");
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw config_error("'" + item + "' is not a number");
        }
    }
    return out;
}

std::vector<Annulus> parse_window_list(const std::string& text) {
    std::vector<Annulus> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw config_error("window '" + item + "' must look like inner:outer");
        }
        try {
            const int inner = std::stoi(item.substr(0, colon));
            const int outer = std::stoi(item.substr(colon + 1));
            out.push_back(make_annulus(inner, outer));
        } catch (const config_error&) {
            throw;
        } catch (const std::exception& e) {
            throw config_error("window '" + item + "' is invalid: " + e.what());
        }
    }
    return out;
}

}  // namespace percolab
