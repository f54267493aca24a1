#include "surflink/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "surflink/dof.hpp"
#include "surflink/errors.hpp"
#include "surflink/linkbudget.hpp"
#include "surflink/version.hpp"

namespace surflink {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw config_error("config: " + where + ": " + what);
}

double parse_length_impl(const std::string& raw, const std::string& where) {
    const std::string text = trim(raw);
    if (text.empty()) fail(where, "empty length");
    double scale = 1.0;
    std::string number = text;
    if (text.size() >= 2 && text.ends_with("cm")) {
        scale = 0.01;
        number = text.substr(0, text.size() - 2);
    } else if (text.size() >= 2 && text.ends_with("mm")) {
        scale = 0.001;
        number = text.substr(0, text.size() - 2);
    } else if (text.ends_with("m")) {
        number = text.substr(0, text.size() - 1);
    }
    number = trim(number);
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(number, &used);
    } catch (const std::exception&) {
        fail(where, "cannot parse length '" + raw + "'");
    }
    if (used != number.size()) fail(where, "cannot parse length '" + raw + "'");
    return value * scale;
}

double length_field(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_length_impl(j.get<std::string>(), where);
    fail(where, "expected a number in meters or a string like '5 cm'");
}

std::pair<double, double> size_field(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) fail(where, "expected [width, height]");
    return {length_field(j[0], where + "[0]"), length_field(j[1], where + "[1]")};
}

// delta accepts plain lengths plus the "lambda/N" shorthand
double delta_field(const json& j, double wavelength, const std::string& where) {
    if (j.is_string()) {
        const std::string text = trim(j.get<std::string>());
        if (text.starts_with("lambda/")) {
            const std::string tail = text.substr(7);
            std::size_t used = 0;
            double n = 0;
            try {
                n = std::stod(tail, &used);
            } catch (const std::exception&) {
                fail(where, "cannot parse '" + text + "'");
            }
            if (used != tail.size() || !(n > 0)) fail(where, "cannot parse '" + text + "'");
            if (!(wavelength > 0)) fail(where, "'lambda/N' needs a geometry wavelength");
            return wavelength / n;
        }
    }
    return length_field(j, where);
}

void reject_unknown_keys(const json& block, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : block.items()) {
        if (!allowed.contains(key)) fail(where + "." + key, "unknown key");
    }
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json canonical_json(const RunConfig& c) {
    json out;
    if (c.has_geometry) {
        out["geometry"] = {
            {"type", c.kind == LinkKind::parallel ? "parallel" : "perpendicular"},
            {"wavelength", c.wavelength},
            {"d", c.d},
            {"tx_size", {c.tx_size.first, c.tx_size.second}},
            {"rx_size", {c.rx_size.first, c.rx_size.second}},
            {"tx_offset", {c.tx_offset.first, c.tx_offset.second}},
        };
    } else {
        out["geometry"] = nullptr;
    }
    const char* task = c.task == Task::gain    ? "gain"
                       : c.task == Task::dof   ? "dof"
                       : c.task == Task::modes ? "modes"
                                               : "validate";
    out["task"] = {{"type", task}, {"tolerance_scale", c.tolerance_scale}};
    if (c.sweep) {
        out["task"]["sweep"] = {{"start_db", c.sweep->start_db},
                                {"stop_db", c.sweep->stop_db},
                                {"points", c.sweep->points}};
    }
    if (!c.export_modes.empty()) out["task"]["export_modes"] = c.export_modes;
    json sides = json::array();
    for (Side s : c.export_sides) sides.push_back(s == Side::tx ? "tx" : "rx");
    out["task"]["sides"] = sides;
    // "parallel" is deliberately absent: results are bit-identical threaded
    // or serial, so the hash must not depend on the execution strategy
    out["numeric"] = {
        {"rel_tol", c.quadrature.rel_tol},
        {"nodes", c.quadrature.nodes_per_axis},
        {"nodes_pair", c.quadrature.nodes_per_axis_pair},
        {"max_subdivisions", c.quadrature.max_subdivisions},
        {"initial_panels", c.quadrature.initial_panels},
        {"delta", c.delta},
        {"threshold_db", c.threshold_db},
        {"kernel_mode", c.kernel_mode == KernelMode::x_to_vector ? "x_to_vector" : "x_to_x"},
        {"entry_budget", c.entry_budget},
    };
    // deliberately no output block: the hash names the computation, not the destination
    return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

double parse_length_text(const std::string& text) {
    return parse_length_impl(text, "length");
}

LinkGeometry RunConfig::make_link() const { return make_link_at(d); }

LinkGeometry RunConfig::make_link_at(double separation) const {
    if (!has_geometry) throw config_error("config: task needs a geometry block");
    const Medium medium = Medium::free_space(wavelength);
    return kind == LinkKind::parallel
               ? make_parallel_link(separation, tx_size, rx_size, tx_offset, medium)
               : make_perpendicular_link(separation, tx_size, rx_size, tx_offset, medium);
}

RunConfig parse_config_text(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    if (!root.is_object()) throw config_error("config: top level must be an object");
    reject_unknown_keys(root, {"geometry", "task", "numeric", "output"}, "config");

    RunConfig c;

    if (root.contains("geometry")) {
        const json& g = root["geometry"];
        reject_unknown_keys(
            g, {"type", "wavelength", "d", "tx_size", "rx_size", "tx_offset"}, "geometry");
        for (const char* key : {"type", "wavelength", "d", "tx_size", "rx_size"}) {
            if (!g.contains(key)) fail(std::string("geometry.") + key, "missing");
        }
        const std::string type = g["type"].get<std::string>();
        if (type == "parallel") {
            c.kind = LinkKind::parallel;
        } else if (type == "perpendicular") {
            c.kind = LinkKind::perpendicular;
        } else {
            fail("geometry.type", "expected 'parallel' or 'perpendicular'");
        }
        c.wavelength = length_field(g["wavelength"], "geometry.wavelength");
        c.d = length_field(g["d"], "geometry.d");
        c.tx_size = size_field(g["tx_size"], "geometry.tx_size");
        c.rx_size = size_field(g["rx_size"], "geometry.rx_size");
        if (g.contains("tx_offset")) {
            c.tx_offset = size_field(g["tx_offset"], "geometry.tx_offset");
        }
        if (!(c.wavelength > 0)) fail("geometry.wavelength", "must be positive");
        if (!(c.d > 0)) fail("geometry.d", "must be positive");
        c.has_geometry = true;
    }

    if (!root.contains("task")) fail("task", "missing block");
    const json& t = root["task"];
    reject_unknown_keys(
        t, {"type", "quantity", "sweep", "export_modes", "sides", "tolerance_scale"}, "task");
    if (!t.contains("type")) fail("task.type", "missing");
    std::string type = t["type"].get<std::string>();
    if (type == "sweep") {
        if (!t.contains("quantity")) fail("task.quantity", "sweep task needs 'gain' or 'dof'");
        type = t["quantity"].get<std::string>();
        if (type != "gain" && type != "dof") {
            fail("task.quantity", "expected 'gain' or 'dof'");
        }
        if (!t.contains("sweep")) fail("task.sweep", "sweep task needs a sweep block");
    }
    if (type == "gain") {
        c.task = Task::gain;
    } else if (type == "dof") {
        c.task = Task::dof;
    } else if (type == "modes") {
        c.task = Task::modes;
    } else if (type == "validate") {
        c.task = Task::validate;
    } else {
        fail("task.type", "expected gain, dof, modes, sweep, or validate");
    }
    if (t.contains("sweep")) {
        const json& s = t["sweep"];
        reject_unknown_keys(s, {"start_db", "stop_db", "points"}, "task.sweep");
        SweepSpec sweep;
        if (!s.contains("start_db") || !s.contains("stop_db")) {
            fail("task.sweep", "needs start_db and stop_db");
        }
        sweep.start_db = s["start_db"].get<double>();
        sweep.stop_db = s["stop_db"].get<double>();
        sweep.points = s.value("points", 2);
        if (sweep.points < 1) fail("task.sweep.points", "must be >= 1");
        c.sweep = sweep;
    }
    if (t.contains("export_modes")) {
        for (const json& m : t["export_modes"]) {
            const int n = m.get<int>();
            if (n < 1) fail("task.export_modes", "mode indices are 1-based");
            c.export_modes.push_back(n);
        }
    }
    if (t.contains("sides")) {
        c.export_sides.clear();
        for (const json& s : t["sides"]) {
            const std::string side = s.get<std::string>();
            if (side == "tx") {
                c.export_sides.push_back(Side::tx);
            } else if (side == "rx") {
                c.export_sides.push_back(Side::rx);
            } else {
                fail("task.sides", "expected 'tx' or 'rx'");
            }
        }
    }
    c.tolerance_scale = t.value("tolerance_scale", 1.0);
    if (!(c.tolerance_scale > 0)) fail("task.tolerance_scale", "must be positive");

    if ((c.task != Task::validate) && !c.has_geometry) {
        fail("geometry", "missing block");
    }

    if (root.contains("numeric")) {
        const json& n = root["numeric"];
        reject_unknown_keys(n,
                            {"rel_tol", "nodes", "nodes_pair", "max_subdivisions",
                             "initial_panels", "parallel", "delta", "threshold_db",
                             "kernel_mode", "entry_budget"},
                            "numeric");
        c.quadrature.rel_tol = n.value("rel_tol", c.quadrature.rel_tol);
        c.quadrature.nodes_per_axis = n.value("nodes", c.quadrature.nodes_per_axis);
        c.quadrature.nodes_per_axis_pair =
            n.value("nodes_pair", c.quadrature.nodes_per_axis_pair);
        c.quadrature.max_subdivisions =
            n.value("max_subdivisions", c.quadrature.max_subdivisions);
        c.quadrature.initial_panels = n.value("initial_panels", c.quadrature.initial_panels);
        c.quadrature.parallel = n.value("parallel", c.quadrature.parallel);
        if (!(c.quadrature.rel_tol > 0)) fail("numeric.rel_tol", "must be positive");
        if (c.quadrature.nodes_per_axis < 2 || c.quadrature.nodes_per_axis_pair < 2) {
            fail("numeric.nodes", "needs at least 2 nodes per axis");
        }
        if (n.contains("delta")) {
            c.delta = delta_field(n["delta"], c.wavelength, "numeric.delta");
            if (!(c.delta > 0)) fail("numeric.delta", "must be positive");
        }
        c.threshold_db = n.value("threshold_db", c.threshold_db);
        if (c.threshold_db < 0) fail("numeric.threshold_db", "must be >= 0");
        if (n.contains("kernel_mode")) {
            const std::string mode = n["kernel_mode"].get<std::string>();
            if (mode == "x_to_vector") {
                c.kernel_mode = KernelMode::x_to_vector;
            } else if (mode == "x_to_x") {
                c.kernel_mode = KernelMode::x_to_x;
            } else {
                fail("numeric.kernel_mode", "expected 'x_to_vector' or 'x_to_x'");
            }
        }
        if (n.contains("entry_budget")) {
            c.entry_budget = n["entry_budget"].get<std::size_t>();
            if (c.entry_budget == 0) fail("numeric.entry_budget", "must be positive");
        }
    }
    if (c.delta == 0 && c.has_geometry) c.delta = c.wavelength / 8.0;

    if (root.contains("output")) {
        const json& o = root["output"];
        reject_unknown_keys(o, {"directory"}, "output");
        if (o.contains("directory")) c.out_dir = o["directory"].get<std::string>();
    }

    c.config_hash = hash_hex(fnv1a64(canonical_json(c).dump()));
    return c;
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("config: cannot open " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

namespace {

std::ofstream open_output(const RunConfig& c, const std::string& name,
                          const std::string& units) {
    std::filesystem::create_directories(c.out_dir);
    const auto path = c.out_dir / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# surflink " << version << "\n";
    out << "# config_hash " << c.config_hash << "\n";
    out << "# units " << units << "\n";
    return out;
}

struct SweepPoint {
    double f_db = 0;
    double d = 0;
};

// Sweep in F-dB space at fixed surfaces: each point adjusts the separation,
// d = sqrt(F * A_R). Without a sweep block the configured d is the one point.
std::vector<SweepPoint> sweep_points(const RunConfig& c) {
    std::vector<SweepPoint> points;
    const double rx_area = c.rx_size.first * c.rx_size.second;
    if (!c.sweep) {
        const double f = c.d * c.d / rx_area;
        points.push_back({10.0 * std::log10(f), c.d});
        return points;
    }
    const SweepSpec& s = *c.sweep;
    for (int k = 0; k < s.points; ++k) {
        const double f_db =
            s.points == 1
                ? s.start_db
                : s.start_db + (s.stop_db - s.start_db) * k / double(s.points - 1);
        const double f = std::pow(10.0, f_db / 10.0);
        points.push_back({f_db, std::sqrt(f * rx_area)});
    }
    return points;
}

}  // namespace

namespace {

// Exceptions may not escape an OpenMP region; park them per index and
// rethrow the earliest so the surfaced error does not depend on thread count.
void rethrow_first(const std::vector<std::exception_ptr>& errors) {
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

int cmd_gain(const RunConfig& c, std::ostream& log) {
    const std::vector<SweepPoint> points = sweep_points(c);
    std::vector<GainReport> rows(points.size());
    std::vector<std::string> warnings(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    const long long n = static_cast<long long>(points.size());
#pragma omp parallel for schedule(dynamic) if (c.quadrature.parallel)
    for (long long k = 0; k < n; ++k) {
        try {
            const LinkGeometry link = c.make_link_at(points[k].d);
            rows[k] = gain_report(link, c.quadrature);
            if (!rows[k].tx_small_regime) {
                warnings[k] = "warning: tx side exceeds d/10 at F_db=" +
                              format_value(points[k].f_db) +
                              "; small-aperture gain model stretched";
            }
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    rethrow_first(errors);
    auto out = open_output(c, "gain.csv", "F_db=dB, gains=dimensionless");
    out << "F_db,g_closed,g_numeric,g_friis,g_large_lis,normalized_gain\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
        const GainReport& r = rows[k];
        out << format_value(points[k].f_db) << ',' << format_value(r.g_closed) << ','
            << format_value(r.g_numeric) << ',' << format_value(r.g_friis) << ','
            << format_value(r.g_large_lis) << ',' << format_value(r.normalized_gain) << "\n";
    }
    for (const std::string& w : warnings) {
        if (!w.empty()) log << w << "\n";
    }
    log << "wrote " << (c.out_dir / "gain.csv").string() << " (" << points.size()
        << " points)\n";
    return 0;
}

int cmd_dof(const RunConfig& c, std::ostream& log) {
    const std::vector<SweepPoint> points = sweep_points(c);
    std::vector<DofReport> rows(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    const long long n = static_cast<long long>(points.size());
#pragma omp parallel for schedule(dynamic) if (c.quadrature.parallel)
    for (long long k = 0; k < n; ++k) {
        try {
            const LinkGeometry link = c.make_link_at(points[k].d);
            rows[k] = dof_report(link, c.quadrature);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    rethrow_first(errors);
    auto out = open_output(c, "dof.csv", "F_db=dB, dof=dimensionless mode counts");
    out << "F_db,d_closed,d_numeric,d_farfield_miller,d_asymptotic,d_rounded\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
        const DofReport& r = rows[k];
        out << format_value(points[k].f_db) << ',' << format_value(r.d_closed) << ','
            << format_value(r.d_numeric) << ',' << format_value(r.d_farfield) << ','
            << format_value(r.d_asymptotic) << ',' << r.d_rounded << "\n";
    }
    log << "wrote " << (c.out_dir / "dof.csv").string() << " (" << points.size()
        << " points)\n";
    return 0;
}

namespace {

void write_field_map(const RunConfig& c, const FieldMap& map, const std::string& name) {
    auto out = open_output(
        c, name, "x_m,y_m,z_m=m; re/im/amp=dimensionless mode amplitude; phase_Ex=rad (-pi,pi]");
    out << "u_index,v_index,x_m,y_m,z_m,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez,amp_Ex,phase_Ex\n";
    for (int i = 0; i < map.grid.n_u; ++i) {
        for (int j = 0; j < map.grid.n_v; ++j) {
            const Eigen::Vector3cd& e = map.samples[i * map.grid.n_v + j];
            const Eigen::Vector3d p = map.grid.point(i, j);
            double phase = std::atan2(e.x().imag(), e.x().real());
            if (phase <= -std::numbers::pi) phase = std::numbers::pi;
            out << i << ',' << j << ',' << format_value(p.x()) << ',' << format_value(p.y())
                << ',' << format_value(p.z()) << ',' << format_value(e.x().real()) << ','
                << format_value(e.x().imag()) << ',' << format_value(e.y().real()) << ','
                << format_value(e.y().imag()) << ',' << format_value(e.z().real()) << ','
                << format_value(e.z().imag()) << ',' << format_value(std::abs(e.x())) << ','
                << format_value(phase) << "\n";
        }
    }
}

}  // namespace

int cmd_modes(const RunConfig& c, std::ostream& log) {
    const LinkGeometry link = c.make_link();
    const KernelMatrix kernel =
        assemble_kernel(link, c.delta, c.kernel_mode, c.quadrature.parallel, c.entry_budget);
    const ModeSpectrum spectrum = solve_modes(kernel);
    const int dof_count = count_dof(spectrum, c.threshold_db);
    const double sum_rule = sum_rule_check(kernel, link, c.quadrature);
    const double smallest = spectrum.singular_values(spectrum.modes() - 1);
    const double condition = smallest > 0 ? spectrum.singular_values(0) / smallest
                                          : std::numeric_limits<double>::infinity();

    for (int n : c.export_modes) {
        if (n > spectrum.modes()) {
            throw config_error("config: task.export_modes: mode " + std::to_string(n) +
                               " exceeds the " + std::to_string(spectrum.modes()) +
                               " solved modes");
        }
    }

    auto out = open_output(c, "spectrum.csv", "xi_n=ohm, xi2_db_rel=dB relative to mode 1");
    out << "# dof_count " << dof_count << "\n";
    out << "# threshold_db " << format_value(c.threshold_db) << "\n";
    out << "# sum_rule_rel_error " << format_value(sum_rule) << "\n";
    out << "# condition " << format_value(condition) << "\n";
    out << "n,xi_n,xi2_db_rel\n";
    for (int n = 0; n < spectrum.modes(); ++n) {
        const double xi = spectrum.singular_values(n);
        const double rel_db = 20.0 * std::log10(xi / spectrum.singular_values(0));
        out << (n + 1) << ',' << format_value(xi) << ',' << format_value(rel_db) << "\n";
    }

    for (int n : c.export_modes) {
        for (Side side : c.export_sides) {
            const FieldMap map = eigenfunction_field(spectrum, n, side);
            const std::string name =
                "mode" + std::to_string(n) + (side == Side::tx ? "_tx.csv" : "_rx.csv");
            write_field_map(c, map, name);
            log << "wrote " << (c.out_dir / name).string() << "\n";
        }
    }

    log << "modes: " << spectrum.modes() << " singular values, dof_count " << dof_count
        << " (threshold " << format_value(c.threshold_db) << " dB), sum rule rel error "
        << format_value(sum_rule) << ", condition " << format_value(condition) << "\n";
    log << "wrote " << (c.out_dir / "spectrum.csv").string() << "\n";
    return 0;
}

int cmd_validate(const RunConfig& c, std::ostream& log) {
    const std::vector<ValidationCheck> checks = run_validation(c);
    auto out = open_output(c, "validate.csv", "measured and tolerance are relative errors");
    out << "check,measured,tolerance,status\n";
    bool all_pass = true;
    for (const ValidationCheck& check : checks) {
        out << check.name << ',' << format_value(check.measured) << ','
            << format_value(check.tolerance) << ',' << (check.pass ? "pass" : "FAIL") << "\n";
        log << (check.pass ? "pass " : "FAIL ") << check.name
            << "  measured=" << format_value(check.measured)
            << " tolerance=" << format_value(check.tolerance) << "\n";
        all_pass = all_pass && check.pass;
    }
    log << (all_pass ? "validation passed" : "validation FAILED") << " ("
        << checks.size() << " checks)\n";
    log << "wrote " << (c.out_dir / "validate.csv").string() << "\n";
    return all_pass ? 0 : 1;
}

int run_task(const RunConfig& c, std::ostream& log) {
    switch (c.task) {
        case Task::gain:
            return cmd_gain(c, log);
        case Task::dof:
            return cmd_dof(c, log);
        case Task::modes:
            return cmd_modes(c, log);
        case Task::validate:
            return cmd_validate(c, log);
    }
    return 2;
}

}
