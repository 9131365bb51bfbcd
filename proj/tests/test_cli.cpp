// End-to-end checks of the nict binary: exit codes, report contents, CSV
// schemas, and byte determinism. The binary and fixture paths come in through
// compile definitions.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(static_cast<bool>(in), "missing file: " << p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "nict_cli_tests";
    fs::create_directories(dir);
    const fs::path out_file = dir / ("stdout_" + std::to_string(counter) + ".txt");
    const fs::path err_file = dir / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;

    const std::string cmd = std::string(NICT_BINARY) + " " + args + " > " + out_file.string() +
                            " 2> " + err_file.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "nict_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::string kModal = std::string(FIXTURE_DIR) + "/table1.modal";
const std::string kConfig = std::string(FIXTURE_DIR) + "/paper_example.cfg";

std::vector<std::vector<double>> read_csv(const fs::path& p, const std::string& header) {
    std::ifstream in(p);
    REQUIRE_MESSAGE(static_cast<bool>(in), "missing csv: " << p.string());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == header);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("synth reproduces the cantilever design end to end") {
    const fs::path out = fresh_dir("synth_paper");
    const RunResult r =
        run("--config " + kConfig + " --modal " + kModal + " --out " + out.string() + " synth");
    CHECK(r.exit_code == 0);

    const json rep = json::parse(slurp(out / "synth_report.json"));
    const std::vector<double> expected_gain{-5578.0, 79929.08, -57.312};
    REQUIRE(rep["gain"].size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(rep["gain"][i].get<double>() / expected_gain[static_cast<size_t>(i)] -
                       1.0) <= 1e-3);

    CHECK(rep["admissible_range"]["gamma"].get<double>() == doctest::Approx(10.0));
    CHECK(rep["closed_loop_sni"]["is_sni"].get<bool>());
    CHECK(rep["internal_stability"]["internally_stable"].get<bool>());
    CHECK(!rep["internal_stability"]["warnings"].empty());
    // The direct pole cross-check exposes the unstable spillover loop.
    CHECK(rep["internal_stability"]["direct_pole_check"]["all_stable"].get<bool>() == false);
    CHECK(rep["uncertainty"]["kind"].get<std::string>() == "multiplicative");

    // Manifest lists exactly the files written.
    for (const auto& f : rep["manifest"]) CHECK(fs::exists(out / f.get<std::string>()));

    const auto bode =
        read_csv(out / "bode_closed_loop.csv", "omega_rad_s,magnitude_db,phase_deg,imag_part");
    REQUIRE(!bode.empty());
    CHECK(bode.front()[0] == 0.0);  // DC row
}

TEST_CASE("synth rejects an out-of-range shift with the computed bound") {
    const fs::path out = fresh_dir("synth_reject");
    const RunResult r = run("--config " + kConfig + " --modal " + kModal + " --out " +
                            out.string() + " --epsilon 10.5 synth");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("10") != std::string::npos);
}

TEST_CASE("synth supports the damped integrator configuration") {
    const fs::path out = fresh_dir("synth_integrator");
    const RunResult r = run("--modal " + kModal + " --modes 1 --aug integrator:-2 --epsilon 0.5 " +
                            "--out " + out.string() + " synth");
    CHECK(r.exit_code == 0);
    const json rep = json::parse(slurp(out / "synth_report.json"));
    CHECK(rep["admissible_range"]["gamma"].get<double>() == doctest::Approx(1.0445));
    CHECK(rep["certificate"]["degree_of_stability_ok"].get<bool>());
    CHECK(rep["uncertainty"]["kind"].get<std::string>() == "additive");
}

TEST_CASE("analyze classifies the undamped splits") {
    const fs::path out = fresh_dir("analyze_undamped");
    const RunResult r =
        run("--modal " + kModal + " --modes 1 --undamp --out " + out.string() + " analyze");
    CHECK(r.exit_code == 0);
    const json rep = json::parse(slurp(out / "verdicts.json"));
    CHECK(rep["verdicts"]["delta_multiplicative"]["is_lni"].get<bool>());
    CHECK(rep["verdicts"]["g_total"]["is_lni"].get<bool>());
    CHECK(rep["verdicts"]["g_nominal"]["is_ni"].get<bool>());
    CHECK(fs::exists(out / "im_delta_multiplicative.csv"));
}

TEST_CASE("analyze classifies the damped additive split") {
    const fs::path out = fresh_dir("analyze_damped");
    const RunResult r = run("--modal " + kModal + " --modes 1 --out " + out.string() + " analyze");
    CHECK(r.exit_code == 0);
    const json rep = json::parse(slurp(out / "verdicts.json"));
    CHECK(rep["verdicts"]["delta_additive"]["is_ni"].get<bool>());
    CHECK(rep["verdicts"]["g_total"]["is_sni"].get<bool>());
    CHECK(!rep["verdicts"].contains("delta_multiplicative"));
}

TEST_CASE("input errors exit with code 2") {
    const fs::path out = fresh_dir("bad_inputs");
    const fs::path empty = out / "empty.modal";
    std::ofstream(empty).close();
    CHECK(run("--modal " + empty.string() + " --out " + out.string() + " analyze").exit_code == 2);
    CHECK(run("--modal /nonexistent.modal --out " + out.string() + " analyze").exit_code == 2);
    CHECK(run("--modal " + kModal + " --modes 9 --out " + out.string() + " analyze").exit_code ==
          2);
    CHECK(run("--modal " + kModal + " --aug pid:-7,-50,-0.2 --out " + out.string() + " synth")
              .exit_code == 2);  // missing epsilon

    const fs::path bad = out / "bad.modal";
    std::ofstream(bad) << "[[mode]]\ngamma_gain = -3\ngamma_damp = 0\ndelta = 1\n";
    const RunResult r = run("--modal " + bad.string() + " --out " + out.string() + " analyze");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("mode 1") != std::string::npos);
}

TEST_CASE("math precondition failures exit with code 1") {
    const fs::path out = fresh_dir("precondition");
    // PID augmentation on a damped nominal mode (no --undamp).
    const RunResult r = run("--modal " + kModal + " --modes 1 --aug pid:-7,-50,-0.2 " +
                            "--epsilon 2 --out " + out.string() + " synth");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("undamped_mode") != std::string::npos);
}

TEST_CASE("reports and CSV outputs are byte-identical across runs") {
    const fs::path out1 = fresh_dir("determinism_1");
    const fs::path out2 = fresh_dir("determinism_2");
    const std::string base = "--config " + kConfig + " --modal " + kModal + " --out ";
    CHECK(run(base + out1.string() + " synth").exit_code == 0);
    CHECK(run(base + out2.string() + " synth").exit_code == 0);
    for (const std::string f : {"synth_report.json", "bode_nominal.csv", "bode_closed_loop.csv"})
        CHECK(slurp(out1 / f) == slurp(out2 / f));
}

TEST_CASE("freqresp emits the closed loop with a DC row and clean imaginary sign") {
    const fs::path out = fresh_dir("freqresp");
    const RunResult r =
        run("--config " + kConfig + " --modal " + kModal + " --out " + out.string() + " freqresp");
    CHECK(r.exit_code == 0);
    const auto rows =
        read_csv(out / "freqresp_closed_loop.csv", "omega_rad_s,magnitude_db,phase_deg,imag_part");
    REQUIRE(!rows.empty());
    CHECK(rows.front()[0] == 0.0);
    const double dc_mag = std::pow(10.0, rows.front()[1] / 20.0);
    CHECK(std::abs(dc_mag / (3203.0 / 2375.0) - 1.0) <= 1e-9);
    for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][3] <= 0.0);
}

TEST_CASE("freqresp skips and logs near-pole grid points") {
    const fs::path out = fresh_dir("freqresp_skip");
    // Grid whose first point sits exactly on the nominal resonance.
    char lo[64];
    std::snprintf(lo, sizeof(lo), "%.17g", std::sqrt(8.096e4));
    const RunResult r = run("--modal " + kModal + " --modes 1 --undamp --grid " + std::string(lo) +
                            ",1e5,7 --out " + out.string() + " freqresp");
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("skipped") != std::string::npos);
}

TEST_CASE("certify accepts the derived gain and rejects a perturbed one") {
    const fs::path out = fresh_dir("certify");
    const std::string base =
        "--config " + kConfig + " --modal " + kModal + " --out " + out.string();
    const RunResult ok = run(base + " certify");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("PASS output_row_annihilation") != std::string::npos);
    CHECK(ok.out.find("PASS closed_loop_sni") != std::string::npos);

    const RunResult bad = run(base + " certify --K -5577.0312,79929.0802,-57.3125");
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("FAIL output_row_annihilation") != std::string::npos);

    const json rep = json::parse(slurp(out / "certificate.json"));
    CHECK(rep["gain_source"].get<std::string>() == "explicit");
}
