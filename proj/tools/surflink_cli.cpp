#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "surflink/errors.hpp"
#include "surflink/runner.hpp"
#include "surflink/version.hpp"

namespace {

using nlohmann::json;

struct Options {
    std::string config;
    std::string out;
    std::string delta;
    std::string kernel_mode;
    double rel_tol = -1;
    double threshold_db = -1;
    double tolerance_scale = -1;
    long long entry_budget = -1;
    bool serial = false;
    std::vector<int> export_modes;
};

void add_common(CLI::App* sub, Options& opt, bool config_required) {
    auto* config = sub->add_option("-c,--config", opt.config, "JSON config file");
    if (config_required) config->required();
    sub->add_option("-o,--out", opt.out, "output directory (default: out)");
    sub->add_option("--delta", opt.delta, "patch pitch, e.g. '1 mm' or 'lambda/8'");
    sub->add_option("--rel-tol", opt.rel_tol, "quadrature relative tolerance");
    sub->add_option("--threshold-db", opt.threshold_db, "mode-count threshold below peak");
    sub->add_option("--kernel-mode", opt.kernel_mode, "x_to_vector or x_to_x");
    sub->add_option("--entry-budget", opt.entry_budget, "max complex kernel entries");
    sub->add_option("--tolerance-scale", opt.tolerance_scale, "scale validation tolerances");
    sub->add_flag("--serial", opt.serial, "disable worker threads");
    sub->add_option("--export-modes", opt.export_modes, "1-based mode indices to export");
}

json load_json(const Options& opt) {
    if (opt.config.empty()) return json{{"task", {{"type", "validate"}}}};
    std::ifstream in(opt.config);
    if (!in) throw surflink::config_error("config: cannot open " + opt.config);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw surflink::config_error(std::string("config: ") + e.what());
    }
}

void apply_overrides(json& root, const Options& opt, const std::string& task) {
    if (!root.is_object()) throw surflink::config_error("config: top level must be an object");
    if (!task.empty()) root["task"]["type"] = task;
    if (!opt.out.empty()) root["output"]["directory"] = opt.out;
    if (!opt.delta.empty()) root["numeric"]["delta"] = opt.delta;
    if (opt.rel_tol >= 0) root["numeric"]["rel_tol"] = opt.rel_tol;
    if (opt.threshold_db >= 0) root["numeric"]["threshold_db"] = opt.threshold_db;
    if (!opt.kernel_mode.empty()) root["numeric"]["kernel_mode"] = opt.kernel_mode;
    if (opt.entry_budget >= 0) root["numeric"]["entry_budget"] = opt.entry_budget;
    if (opt.tolerance_scale >= 0) root["task"]["tolerance_scale"] = opt.tolerance_scale;
    if (opt.serial) root["numeric"]["parallel"] = false;
    if (!opt.export_modes.empty()) root["task"]["export_modes"] = opt.export_modes;
}

void apply_thread_cap() {
    const char* cap = std::getenv("SURFLINK_MAX_THREADS");
    if (!cap || !*cap) return;
    int threads = 0;
    try {
        threads = std::stoi(cap);
    } catch (const std::exception&) {
        throw surflink::config_error("config: SURFLINK_MAX_THREADS must be an integer");
    }
    if (threads < 1) {
        throw surflink::config_error("config: SURFLINK_MAX_THREADS must be >= 1");
    }
    omp_set_num_threads(threads);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"link limits between intelligent surfaces"};
    app.set_version_flag("--version", std::string("surflink ") + surflink::version);
    app.require_subcommand(1);
    Options opt;

    CLI::App* run = app.add_subcommand("run", "run whatever task the config selects");
    add_common(run, opt, true);
    CLI::App* gain = app.add_subcommand("gain", "link power gain vs the classic estimates");
    add_common(gain, opt, true);
    CLI::App* dof = app.add_subcommand("dof", "spatial degrees of freedom of the link");
    add_common(dof, opt, true);
    CLI::App* modes = app.add_subcommand("modes", "coupling spectrum and mode field maps");
    add_common(modes, opt, true);
    CLI::App* validate = app.add_subcommand("validate", "run the numerical invariant suite");
    add_common(validate, opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        apply_thread_cap();
        std::string task;
        if (gain->parsed()) task = "gain";
        if (dof->parsed()) task = "dof";
        if (modes->parsed()) task = "modes";
        if (validate->parsed()) task = "validate";
        json root = load_json(opt);
        apply_overrides(root, opt, task);
        const surflink::RunConfig config = surflink::parse_config_text(root.dump());
        return surflink::run_task(config, std::cout);
    } catch (const surflink::budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const surflink::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
