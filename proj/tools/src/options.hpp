#pragma once

#include <invcure/bandwidth.hpp>
#include <invcure/link.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace invcure::cli {

/// Flags shared by every command that fits the model.
struct ModelFlags {
    std::string input = "-";
    std::string output = "-";
    std::optional<double> bandwidth_c;
    std::optional<double> bandwidth;
    bool cv = false;
    std::string box = "-10,10";
    int restarts = 3;
    int max_evals = 2000;
    unsigned threads = 1;
    std::uint64_t seed = 0;

    BandwidthRule rule() const;
    ParamBox param_box() const;
};

struct FitFlags {
    ModelFlags model;
};

struct CurveFlags {
    ModelFlags model;
    std::string x_grid = "-0.5:0.5:0.25";
    std::string fit_json;
    std::string tail = "proper";
};

struct QuantileFlags {
    ModelFlags model;
    std::string x_grid = "0.25";
    std::string quantiles = "0.25,0.5,0.75";
    std::string fit_json;
    std::string tail = "proper";
};

struct BootstrapFlags {
    ModelFlags model;
    std::size_t resamples = 250;
    double level = 0.95;
    bool freeze_bandwidth = false;
};

struct SimulateFlags {
    std::string output = "-";
    std::size_t n = 150;
    std::string scenario = "cure20";
    std::string beta0;
    std::string gamma;
    std::optional<double> gamma2;
    std::optional<double> censoring_mean;
    std::string truncation = "atom";
    std::uint64_t seed = 0;
    bool with_latents = false;
};

struct McFlags {
    std::string output = "-";
    std::size_t reps = 500;
    std::uint64_t seed = 0;
    std::string n = "150";
    std::string gamma2 = "0";
    std::string scenario = "cure20";
    std::string rules = "c=3";
    std::string quantiles = "0.25,0.5,0.75";
    double quantile_x = 0.25;
    std::string truncation = "atom";
    int restarts = 3;
    unsigned threads = 1;
    std::string json;
    std::string export_dir;
    std::string qq_output;
};

/// "1.5,2" -> {1.5, 2}. Throws InvalidArgument naming `flag` on bad input.
std::vector<double> parse_list(const std::string& text, const std::string& flag);
std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& flag);
std::vector<std::string> split(const std::string& text, char sep);
/// "a:b:step" (inclusive of b up to rounding) or a comma list.
std::vector<double> parse_grid(const std::string& text, const std::string& flag);
/// "c=3", "h=0.4" or "cv".
BandwidthRule parse_rule(const std::string& text);

} // namespace invcure::cli
