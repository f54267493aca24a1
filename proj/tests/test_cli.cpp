#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("SURFLINK_CLI");
    REQUIRE_MESSAGE(p != nullptr, "SURFLINK_CLI must point at the built binary");
    return p;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("surflink_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& file) {
    std::ifstream in(file);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

RunResult run(const std::string& args, const std::string& env = "") {
    const fs::path dir = fresh_dir("streams");
    const fs::path out = dir / "out.txt";
    const fs::path err = dir / "err.txt";
    const std::string command = env + (env.empty() ? "" : " ") + cli_path() + " " + args +
                                " > " + out.string() + " 2> " + err.string();
    const int status = std::system(command.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path file = fs::temp_directory_path() / ("surflink_cfg_" + name + ".json");
    std::ofstream(file) << body;
    return file;
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    return lines;
}

const std::string gain_cfg = R"({
  "geometry": {"type": "parallel", "wavelength": "1 cm", "d": 3.0,
               "tx_size": ["5 cm", "5 cm"], "rx_size": [5.0, 5.0]},
  "task": {"type": "gain"}
})";

const std::string modes_cfg = R"({
  "geometry": {"type": "parallel", "wavelength": "100 cm", "d": "1.5 m",
               "tx_size": [1.0, 1.0], "rx_size": [2.0, 2.0]},
  "task": {"type": "modes", "export_modes": [1]},
  "numeric": {"delta": "lambda/4"}
})";

}  // namespace

TEST_CASE("version flag reports the tool version") {
    const RunResult r = run("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("surflink 0.1.0") != std::string::npos);
}

TEST_CASE("usage problems exit with the config-error code") {
    CHECK(run("").exit_code == 2);                      // no subcommand
    CHECK(run("gain").exit_code == 2);                  // missing --config
    CHECK(run("frobnicate --config x.json").exit_code == 2);
    CHECK(run("gain --config /nonexistent.json").exit_code == 2);
}

TEST_CASE("malformed configs are rejected with code 2 and a message") {
    const fs::path broken = write_config("broken", "{ not json");
    RunResult r = run("gain --config " + broken.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("config error") != std::string::npos);

    const fs::path unknown = write_config("unknown", R"({
      "geometry": {"type": "parallel", "wavelength": 0.01, "d": 3.0,
                   "tx_size": [0.05, 0.05], "rx_size": [5, 5], "bogus": 1},
      "task": {"type": "gain"}
    })");
    r = run("gain --config " + unknown.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("geometry.bogus") != std::string::npos);

    const fs::path reactive = write_config("reactive", R"({
      "geometry": {"type": "parallel", "wavelength": 0.01, "d": 0.005,
                   "tx_size": [0.05, 0.05], "rx_size": [5, 5]},
      "task": {"type": "gain"}
    })");
    CHECK(run("gain --config " + reactive.string()).exit_code == 2);
}

TEST_CASE("gain run writes a labeled single-row table") {
    const fs::path cfg = write_config("gain", gain_cfg);
    const fs::path out = fresh_dir("gain");
    const RunResult r = run("gain --config " + cfg.string() + " --out " + out.string());
    REQUIRE(r.exit_code == 0);

    const std::string csv = slurp(out / "gain.csv");
    CHECK(csv.rfind("# surflink 0.1.0\n", 0) == 0);
    CHECK(csv.find("\n# config_hash ") != std::string::npos);
    CHECK(csv.find("\n# units ") != std::string::npos);

    const auto rows = data_lines(csv);
    REQUIRE(rows.size() == 2);  // column header + one data row
    CHECK(rows[0] == "F_db,g_closed,g_numeric,g_friis,g_large_lis,normalized_gain");
    // F = 9/25 -> -4.437 dB leads the row
    CHECK(rows[1].rfind("-4.43697", 0) == 0);
}

TEST_CASE("reruns are byte-identical, threaded or not") {
    const fs::path cfg = write_config("gain_rerun", gain_cfg);
    const fs::path a = fresh_dir("rerun_a");
    const fs::path b = fresh_dir("rerun_b");
    const fs::path c = fresh_dir("rerun_c");
    REQUIRE(run("gain --config " + cfg.string() + " --out " + a.string()).exit_code == 0);
    REQUIRE(run("gain --config " + cfg.string() + " --out " + b.string()).exit_code == 0);
    REQUIRE(run("gain --config " + cfg.string() + " --out " + c.string() + " --serial",
                "SURFLINK_MAX_THREADS=1")
                .exit_code == 0);
    const std::string first = slurp(a / "gain.csv");
    CHECK(first == slurp(b / "gain.csv"));
    CHECK(first == slurp(c / "gain.csv"));
}

TEST_CASE("a dof sweep emits one row per requested point") {
    const fs::path cfg = write_config("sweep", R"({
      "geometry": {"type": "parallel", "wavelength": 0.01, "d": 3.0,
                   "tx_size": [0.05, 0.05], "rx_size": [5, 5]},
      "task": {"type": "sweep", "quantity": "dof",
               "sweep": {"start_db": -10, "stop_db": 20, "points": 4}}
    })");
    const fs::path out = fresh_dir("sweep");
    REQUIRE(run("dof --config " + cfg.string() + " --out " + out.string()).exit_code == 0);
    const auto rows = data_lines(slurp(out / "dof.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "F_db,d_closed,d_numeric,d_farfield_miller,d_asymptotic,d_rounded");
    CHECK(rows[1].rfind("-10,", 0) == 0);
    CHECK(rows[4].rfind("20,", 0) == 0);
}

TEST_CASE("modes run exports spectrum and field maps") {
    const fs::path cfg = write_config("modes", modes_cfg);
    const fs::path out = fresh_dir("modes");
    const RunResult r = run("modes --config " + cfg.string() + " --out " + out.string());
    REQUIRE(r.exit_code == 0);

    const std::string spectrum = slurp(out / "spectrum.csv");
    CHECK(spectrum.find("# dof_count ") != std::string::npos);
    CHECK(spectrum.find("# sum_rule_rel_error ") != std::string::npos);
    const auto rows = data_lines(spectrum);
    CHECK(rows[0] == "n,xi_n,xi2_db_rel");
    CHECK(rows.size() == 1 + 16);  // header + one row per source patch
    CHECK(rows[1].rfind("1,", 0) == 0);

    for (const char* name : {"mode1_tx.csv", "mode1_rx.csv"}) {
        const std::string map = slurp(out / name);
        const auto map_rows = data_lines(map);
        CHECK(map_rows[0] ==
              "u_index,v_index,x_m,y_m,z_m,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez,amp_Ex,phase_Ex");
    }
    const auto tx_rows = data_lines(slurp(out / "mode1_tx.csv"));
    CHECK(tx_rows.size() == 1 + 16);
    const auto rx_rows = data_lines(slurp(out / "mode1_rx.csv"));
    CHECK(rx_rows.size() == 1 + 64);

    // asking for a mode beyond the solved rank is a config error
    const RunResult over = run("modes --config " + cfg.string() + " --out " + out.string() +
                               " --export-modes 99");
    CHECK(over.exit_code == 2);
}

TEST_CASE("a starved entry budget exits with the resource code") {
    const fs::path cfg = write_config("budget", modes_cfg);
    const fs::path out = fresh_dir("budget");
    const RunResult r = run("modes --config " + cfg.string() + " --out " + out.string() +
                            " --entry-budget 10");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("budget") != std::string::npos);
}

TEST_CASE("the validation suite passes and reports checks") {
    const fs::path out = fresh_dir("validate");
    const RunResult r = run("validate --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("validation passed") != std::string::npos);
    CHECK(r.out.find("gain_closed_vs_numeric") != std::string::npos);
    const auto rows = data_lines(slurp(out / "validate.csv"));
    CHECK(rows.size() > 10);
    CHECK(rows[0] == "check,measured,tolerance,status");
}

TEST_CASE("strangling the tolerances makes validation fail loudly") {
    const fs::path out = fresh_dir("validate_fail");
    const RunResult r = run("validate --tolerance-scale 1e-12 --out " + out.string());
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
    CHECK(slurp(out / "validate.csv").find(",FAIL") != std::string::npos);
}
