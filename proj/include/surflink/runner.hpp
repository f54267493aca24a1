#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "surflink/eigenmodes.hpp"
#include "surflink/geometry.hpp"
#include "surflink/quadrature.hpp"

namespace surflink {

enum class Task { gain, dof, modes, validate };

struct SweepSpec {
    double start_db = 0;
    double stop_db = 0;
    int points = 1;
};

// Fully resolved run description: the parsed config file with CLI overrides
// applied and every default filled in.
struct RunConfig {
    // geometry
    bool has_geometry = false;
    LinkKind kind = LinkKind::parallel;
    double wavelength = 0;
    double d = 0;
    std::pair<double, double> tx_size{0, 0};
    std::pair<double, double> rx_size{0, 0};
    std::pair<double, double> tx_offset{0, 0};

    // task
    Task task = Task::validate;
    std::optional<SweepSpec> sweep;
    std::vector<int> export_modes;
    std::vector<Side> export_sides{Side::tx, Side::rx};
    double tolerance_scale = 1.0;

    // numeric
    QuadratureSpec quadrature;
    double delta = 0;  // patch side [m]; resolved from "lambda/N" forms
    double threshold_db = 3.0;
    KernelMode kernel_mode = KernelMode::x_to_vector;
    std::size_t entry_budget = default_entry_budget;

    // output
    std::filesystem::path out_dir = "out";

    std::string config_hash;  // fnv1a-64 of the canonical effective config

    LinkGeometry make_link() const;            // at the configured d
    LinkGeometry make_link_at(double d) const; // sweep points
};

// Parse a JSON config document (optionally pre-merged with CLI overrides).
// Throws config_error on malformed or inconsistent input.
RunConfig parse_config_text(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& file);

// Length literal: a number in meters or a string with an m/cm/mm suffix.
double parse_length_text(const std::string& text);

std::uint64_t fnv1a64(std::string_view text);

// One validation check: measured error against its (scaled) tolerance.
struct ValidationCheck {
    std::string name;
    double measured = 0;
    double tolerance = 0;
    bool pass = false;
};

std::vector<ValidationCheck> run_validation(const RunConfig& config);

// Task entry points; they write output files under config.out_dir and log
// one-line summaries. Return a process exit code (0 ok, 1 failed checks).
int cmd_gain(const RunConfig& config, std::ostream& log);
int cmd_dof(const RunConfig& config, std::ostream& log);
int cmd_modes(const RunConfig& config, std::ostream& log);
int cmd_validate(const RunConfig& config, std::ostream& log);
int run_task(const RunConfig& config, std::ostream& log);

}
