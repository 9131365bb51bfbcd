// nict - negative imaginary control tool
//
// Subcommands:
//   analyze   NI / SNI / lossless verdicts for the modal model and its splits
//   synth     state feedback synthesis for the augmented nominal model
//   freqresp  frequency-response CSV export
//   certify   check the gain certificate obligations for a given (or derived) K

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ni/analysis.hpp"
#include "ni/augmentation.hpp"
#include "ni/errors.hpp"
#include "ni/modal.hpp"
#include "ni/synthesis.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string num6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct RunConfig {
    std::string modal_file;
    int modes = 1;
    bool undamp = false;
    std::string aug;  // "integrator:<kt>" | "pid:<kp>,<ki>,<kd>"
    double epsilon = 0.0;
    bool has_epsilon = false;
    std::string out_dir = "out";
    bool has_grid = false;
    double grid_lo = 0.0, grid_hi = 0.0;
    int grid_n = 2000;
    std::vector<double> explicit_gain;  // certify --K
};

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("bad number in " + what + ": " + item);
    }
    if (out.empty()) throw std::invalid_argument(what + " is empty");
    return out;
}

void apply_grid_spec(RunConfig& cfg, const std::string& spec) {
    const auto v = parse_number_list(spec, "--grid");
    if (v.size() != 3) throw std::invalid_argument("--grid expects lo,hi,n");
    cfg.grid_lo = v[0];
    cfg.grid_hi = v[1];
    cfg.grid_n = static_cast<int>(v[2]);
    if (!(cfg.grid_lo > 0.0) || !(cfg.grid_hi > cfg.grid_lo) || cfg.grid_n < 2)
        throw std::invalid_argument("--grid expects 0 < lo < hi and n >= 2");
    cfg.has_grid = true;
}

// Config file: '#' comments and 'key = value' lines; command-line flags win.
void load_config_file(RunConfig& cfg, const std::string& path,
                      const std::map<std::string, bool>& flag_set) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string raw;
    int line = 0;
    auto trim = [](const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ni::ParseError(line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        const bool overridden = flag_set.count(key) != 0 && flag_set.at(key);
        if (overridden) continue;
        if (key == "modal_file") {
            cfg.modal_file = value;
        } else if (key == "modes") {
            cfg.modes = std::stoi(value);
        } else if (key == "undamp") {
            if (value != "true" && value != "false")
                throw ni::ParseError(line, "undamp must be true or false");
            cfg.undamp = value == "true";
        } else if (key == "aug") {
            cfg.aug = value;
        } else if (key == "epsilon") {
            cfg.epsilon = std::stod(value);
            cfg.has_epsilon = true;
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "grid") {
            apply_grid_spec(cfg, value);
        } else {
            throw ni::ParseError(line, "unknown config key '" + key + "'");
        }
    }
}

struct Augmentation {
    ni::AugmentationKind kind;
    double ktilde = 0.0;
    ni::PidGains pid;
};

Augmentation parse_aug(const std::string& spec) {
    Augmentation a{ni::AugmentationKind::Integrator, 0.0, {}};
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "integrator") {
        const auto v = parse_number_list(args, "--aug integrator");
        if (v.size() != 1) throw std::invalid_argument("--aug integrator:<ktilde>");
        a.kind = ni::AugmentationKind::Integrator;
        a.ktilde = v[0];
    } else if (head == "pid") {
        const auto v = parse_number_list(args, "--aug pid");
        if (v.size() != 3) throw std::invalid_argument("--aug pid:<kp>,<ki>,<kd>");
        a.kind = ni::AugmentationKind::Pid;
        a.pid = {v[0], v[1], v[2]};
    } else {
        throw std::invalid_argument("unknown augmentation '" + head +
                                    "' (expected integrator:... or pid:...)");
    }
    return a;
}

// ---------------------------------------------------------------------------
// Report helpers
// ---------------------------------------------------------------------------

json complex_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

json spectrum_json(const std::vector<std::complex<double>>& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(complex_json(z));
    return out;
}

json verdict_json(const ni::NIVerdict& v) {
    json out;
    out["is_ni"] = v.is_ni;
    out["is_sni"] = v.is_sni;
    out["is_lni"] = v.is_lni;
    out["grid"] = {{"points", v.checked_grid.points.size()},
                   {"omega_min", v.checked_grid.points.empty() ? 0.0 : v.checked_grid.points.front()},
                   {"omega_max", v.checked_grid.points.empty() ? 0.0 : v.checked_grid.points.back()}};
    std::map<std::string, int> counts;
    for (const auto& viol : v.violations) ++counts[viol.condition];
    json jc = json::object();
    for (const auto& [cond, count] : counts) jc[cond] = count;
    out["violation_counts"] = jc;
    json examples = json::array();
    std::map<std::string, int> shown;
    for (const auto& viol : v.violations) {
        if (shown[viol.condition]++ >= 3) continue;
        examples.push_back({{"condition", viol.condition},
                            {"location", complex_json(viol.location)},
                            {"measured", viol.measured}});
    }
    out["violation_examples"] = examples;
    return out;
}

json rf_json(const ni::RationalFunction& rf) {
    return {{"num", rf.num().coeffs()}, {"den", rf.den().coeffs()}};
}

json matrix_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(row);
    }
    return rows;
}

class OutputDir {
  public:
    explicit OutputDir(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    std::ofstream open(const std::string& name) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        manifest_.push_back(name);
        return out;
    }

    void write_report(const std::string& name, json report) {
        manifest_.push_back(name);
        report["manifest"] = manifest_;
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        out << report.dump(2) << "\n";
    }

    const fs::path& path() const { return dir_; }

  private:
    fs::path dir_;
    std::vector<std::string> manifest_;
};

ni::FrequencyGrid grid_for(const RunConfig& cfg, const ni::RationalFunction& rf) {
    if (cfg.has_grid) return ni::FrequencyGrid::logspace(cfg.grid_lo, cfg.grid_hi, cfg.grid_n);
    return ni::default_grid(rf);
}

// Frequency samples with near-pole exclusions resolved; emits one CSV row per
// kept point. The leading row is the DC sample when s = 0 is not a pole.
void write_response_csv(std::ofstream& out, const std::string& label,
                        const ni::RationalFunction& rf, const ni::FrequencyGrid& grid,
                        bool full_schema) {
    const ni::RationalFunction r = rf.reduce();
    const auto pole_list = ni::poles(r);

    out << (full_schema ? "omega_rad_s,magnitude_db,phase_deg,imag_part\n"
                        : "omega_rad_s,imag_part\n");
    std::vector<double> points;
    if (std::abs(r.den()(0.0)) > 1e-12 * r.den().max_abs_coeff()) points.push_back(0.0);
    points.insert(points.end(), grid.points.begin(), grid.points.end());

    for (double w : points) {
        std::complex<double> val;
        try {
            val = ni::eval_freq(r, w, grid.exclusion_radius, &pole_list);
        } catch (const ni::NearPoleError& e) {
            std::cerr << "note: " << label << ": skipped omega=" << num6(e.omega())
                      << " (inside the exclusion band of the pole at omega=" << num6(e.pole_omega())
                      << ")\n";
            continue;
        }
        if (full_schema) {
            const double mag_db = 20.0 * std::log10(std::abs(val));
            const double phase = std::arg(val) * 180.0 / kPi;
            out << num17(w) << ',' << num17(mag_db) << ',' << num17(phase) << ','
                << num17(val.imag()) << '\n';
        } else {
            out << num17(w) << ',' << num17(val.imag()) << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Shared pipeline
// ---------------------------------------------------------------------------

struct Pipeline {
    ni::ModalModel model;            // after the optional undamp transform
    ni::RationalFunction g_total;
    ni::RationalFunction g_nominal;
    std::optional<ni::RationalFunction> delta_additive;        // m < mode count
    std::optional<ni::RationalFunction> delta_multiplicative;  // undamped models only
};

Pipeline build_pipeline(const RunConfig& cfg) {
    if (cfg.modal_file.empty()) throw std::invalid_argument("no modal file configured");
    ni::ModalModel loaded = ni::load_modal_file(cfg.modal_file);
    ni::ModalModel model = cfg.undamp ? ni::undamp(loaded) : loaded;
    const size_t count = model.size();
    if (cfg.modes < 1 || static_cast<size_t>(cfg.modes) > count)
        throw std::invalid_argument("modes must be between 1 and the mode count (" +
                                    std::to_string(count) + ")");
    const size_t m = static_cast<size_t>(cfg.modes);

    Pipeline p{std::move(model), {}, {}, {}, {}};
    p.g_total = ni::modal_tf(p.model);
    if (m < count) {
        auto [head, tail] = ni::split_additive(p.model, m);
        p.g_nominal = ni::modal_tf(head);
        p.delta_additive = ni::modal_tf(tail);
    } else {
        p.g_nominal = p.g_total;
    }
    if (p.model.is_undamped()) p.delta_multiplicative = ni::multiplicative_delta(p.model, m);
    return p;
}

ni::AugmentedSystem build_augmented(const RunConfig& cfg, const Pipeline& p) {
    if (cfg.aug.empty()) throw std::invalid_argument("no augmentation configured (--aug)");
    if (cfg.modes != 1)
        throw std::invalid_argument("augmentation takes a single nominal mode (--modes 1)");
    const Augmentation a = parse_aug(cfg.aug);
    const ni::Mode& mode = p.model.mode(0);
    if (a.kind == ni::AugmentationKind::Integrator) return ni::augment_integrator(mode, a.ktilde);
    return ni::augment_pid(mode, a.pid);
}

// The uncertainty block driving the internal stability check: multiplicative
// for undamped models, additive otherwise.
struct UncertaintyChoice {
    std::string kind;
    std::optional<ni::RationalFunction> delta;
};

UncertaintyChoice pick_uncertainty(const Pipeline& p) {
    if (p.delta_multiplicative && !p.delta_multiplicative->is_zero())
        return {"multiplicative", p.delta_multiplicative};
    if (p.delta_additive) return {"additive", p.delta_additive};
    return {"none", std::nullopt};
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_analyze(const RunConfig& cfg) {
    const Pipeline p = build_pipeline(cfg);
    OutputDir out(cfg.out_dir);

    std::vector<std::pair<std::string, const ni::RationalFunction*>> functions;
    functions.emplace_back("g_total", &p.g_total);
    functions.emplace_back("g_nominal", &p.g_nominal);
    if (p.delta_additive) functions.emplace_back("delta_additive", &*p.delta_additive);
    if (p.delta_multiplicative && !p.delta_multiplicative->is_zero())
        functions.emplace_back("delta_multiplicative", &*p.delta_multiplicative);

    json report;
    report["command"] = "analyze";
    report["model"] = {{"name", p.model.name()},
                       {"modes", p.model.size()},
                       {"nominal_modes", cfg.modes},
                       {"undamped", p.model.is_undamped()}};
    json verdicts = json::object();
    for (const auto& [name, rf] : functions) {
        const ni::FrequencyGrid grid = grid_for(cfg, *rf);
        const ni::NIVerdict v = ni::check_ni(*rf, grid);
        verdicts[name] = verdict_json(v);
        auto csv = out.open("im_" + name + ".csv");
        write_response_csv(csv, name, *rf, grid, /*full_schema=*/false);
        std::cout << name << ": ni=" << (v.is_ni ? "true" : "false")
                  << " sni=" << (v.is_sni ? "true" : "false")
                  << " lni=" << (v.is_lni ? "true" : "false") << "\n";
    }
    report["verdicts"] = verdicts;
    out.write_report("verdicts.json", std::move(report));
    return 0;
}

int cmd_synth(const RunConfig& cfg) {
    if (!cfg.has_epsilon || !(cfg.epsilon > 0.0))
        throw std::invalid_argument("synth requires --epsilon > 0");
    const Pipeline p = build_pipeline(cfg);
    const ni::AugmentedSystem aug = build_augmented(cfg, p);

    const ni::EpsilonRange range = ni::admissible_epsilon_range(aug.sys);
    const double guard = 1e-9 * std::max(1.0, range.gamma);
    if (!(cfg.epsilon < range.gamma - guard)) {
        std::cerr << "error: epsilon=" << num6(cfg.epsilon)
                  << " is outside the admissible range (0, " << num6(range.gamma) << ")\n";
        return 1;
    }

    const ni::SynthesisResult result = ni::synthesize(aug.sys, cfg.epsilon);
    const ni::FrequencyGrid cl_grid = grid_for(cfg, result.closed_loop_tf);
    const ni::NIVerdict cl_verdict = ni::check_sni(result.closed_loop_tf, cl_grid);

    const UncertaintyChoice unc = pick_uncertainty(p);
    std::optional<ni::StabilityReport> stability;
    std::optional<double> direct_max_re;
    if (unc.delta) {
        stability = ni::check_internal_stability(result.closed_loop_tf, *unc.delta);
        const auto loop_poles = ni::poles(ni::positive_feedback_tf(result.closed_loop_tf, *unc.delta));
        double max_re = -std::numeric_limits<double>::infinity();
        for (const auto& z : loop_poles) max_re = std::max(max_re, z.real());
        direct_max_re = max_re;
    }

    OutputDir out(cfg.out_dir);
    {
        auto csv = out.open("bode_nominal.csv");
        write_response_csv(csv, "g_nominal", p.g_nominal, grid_for(cfg, p.g_nominal), true);
    }
    {
        auto csv = out.open("bode_closed_loop.csv");
        write_response_csv(csv, "closed_loop", result.closed_loop_tf, cl_grid, true);
    }

    json report;
    report["command"] = "synth";
    report["model"] = {{"name", p.model.name()},
                       {"modes", p.model.size()},
                       {"nominal_modes", cfg.modes},
                       {"undamped", p.model.is_undamped()}};
    report["augmentation"] = cfg.aug;
    report["epsilon"] = cfg.epsilon;
    report["admissible_range"] = {{"gamma", range.gamma},
                                  {"spectrum", spectrum_json(range.spectrum)},
                                  {"distinct", range.distinct},
                                  {"notes", range.notes}};
    json gain = json::array();
    for (Eigen::Index i = 0; i < result.K.cols(); ++i) gain.push_back(result.K(0, i));
    report["gain"] = gain;
    report["closed_loop"] = {
        {"A", matrix_json(result.closed_loop.A)},
        {"poles", spectrum_json(result.certificate.closed_loop_poles)},
        {"tf", rf_json(result.closed_loop_tf)},
        {"tf_minimal", rf_json(result.closed_loop_tf.reduce())},
    };
    report["certificate"] = {
        {"annihilation_residual", result.certificate.annihilation_residual},
        {"output_row_annihilated", result.certificate.output_row_annihilated},
        {"ar_max_re", result.certificate.ar_max_re},
        {"ar_stable", result.certificate.ar_stable},
        {"closed_loop_max_re", result.certificate.closed_loop_max_re},
        {"degree_of_stability_ok", result.certificate.degree_of_stability_ok},
    };
    report["closed_loop_sni"] = verdict_json(cl_verdict);
    if (stability) {
        report["uncertainty"] = {{"kind", unc.kind}, {"tf", rf_json(*unc.delta)}};
        report["internal_stability"] = {
            {"well_posed", stability->well_posed},
            {"cond2", stability->cond2},
            {"cond3", stability->cond3},
            {"internally_stable", stability->internally_stable},
            {"m_dc", stability->m_dc},
            {"n_dc", stability->n_dc},
            {"m_inf", stability->m_inf},
            {"n_inf", stability->n_inf},
            {"warnings", stability->warnings},
            {"direct_pole_check",
             {{"max_re", *direct_max_re}, {"all_stable", *direct_max_re < 0.0}}},
        };
    }
    out.write_report("synth_report.json", std::move(report));

    std::cout << "admissible range: 0 < epsilon < " << num6(range.gamma) << "\n";
    std::cout << "gain:";
    for (Eigen::Index i = 0; i < result.K.cols(); ++i) std::cout << " " << num6(result.K(0, i));
    std::cout << "\nclosed-loop poles:";
    for (const auto& z : result.certificate.closed_loop_poles)
        std::cout << " (" << num6(z.real()) << (z.imag() >= 0 ? "+" : "") << num6(z.imag()) << "j)";
    std::cout << "\nclosed-loop SNI: " << (cl_verdict.is_sni ? "true" : "false") << "\n";
    if (stability) {
        std::cout << "gain conditions: cond2=" << num6(stability->cond2)
                  << " cond3=" << num6(stability->cond3)
                  << " internally_stable=" << (stability->internally_stable ? "true" : "false")
                  << "\n";
        std::cout << "direct pole check: max Re = " << num6(*direct_max_re)
                  << (*direct_max_re < 0.0 ? " (stable)" : " (UNSTABLE)") << "\n";
        for (const auto& w : stability->warnings) std::cout << "warning: " << w << "\n";
    }
    return 0;
}

int cmd_freqresp(const RunConfig& cfg) {
    const Pipeline p = build_pipeline(cfg);
    OutputDir out(cfg.out_dir);

    std::vector<std::pair<std::string, ni::RationalFunction>> functions;
    functions.emplace_back("g_total", p.g_total);
    functions.emplace_back("g_nominal", p.g_nominal);
    if (p.delta_additive) functions.emplace_back("delta_additive", *p.delta_additive);
    if (p.delta_multiplicative && !p.delta_multiplicative->is_zero())
        functions.emplace_back("delta_multiplicative", *p.delta_multiplicative);
    if (!cfg.aug.empty() && cfg.has_epsilon) {
        const ni::AugmentedSystem aug = build_augmented(cfg, p);
        const ni::SynthesisResult result = ni::synthesize(aug.sys, cfg.epsilon);
        functions.emplace_back("closed_loop", result.closed_loop_tf);
    }

    for (const auto& [name, rf] : functions) {
        auto csv = out.open("freqresp_" + name + ".csv");
        write_response_csv(csv, name, rf, grid_for(cfg, rf), true);
        std::cout << "wrote " << (out.path() / ("freqresp_" + name + ".csv")).string() << "\n";
    }
    return 0;
}

int cmd_certify(const RunConfig& cfg) {
    const Pipeline p = build_pipeline(cfg);
    const ni::AugmentedSystem aug = build_augmented(cfg, p);
    const double epsilon = cfg.has_epsilon ? cfg.epsilon : 0.0;
    if (epsilon < 0.0) throw std::invalid_argument("certify requires epsilon >= 0");

    const ni::StateSpaceModel& sys = aug.sys;
    const int n = sys.n();
    const Eigen::RowVectorXd c1 = sys.C1.row(0);
    const double coupling = (sys.C1 * sys.B2)(0, 0);

    Eigen::RowVectorXd K(n);
    if (!cfg.explicit_gain.empty()) {
        if (static_cast<int>(cfg.explicit_gain.size()) != n)
            throw std::invalid_argument("--K needs " + std::to_string(n) + " entries");
        for (int i = 0; i < n; ++i) K(i) = cfg.explicit_gain[static_cast<size_t>(i)];
    } else {
        K = -(c1 * sys.A + epsilon * c1) / coupling;
    }

    const Eigen::MatrixXd A_cl = sys.A + sys.B2 * K;
    const Eigen::RowVectorXd annihilated =
        c1 * (sys.A + epsilon * Eigen::MatrixXd::Identity(n, n) + sys.B2 * K);
    const double residual = annihilated.norm() / std::max(1.0, (c1 * sys.A).norm());

    const ni::ProjectionSet proj = ni::build_projection(sys, epsilon);
    double ar_max_re = -std::numeric_limits<double>::infinity();
    for (const auto& e : ni::eigvals(proj.Ar)) ar_max_re = std::max(ar_max_re, e.real());
    double cl_max_re = -std::numeric_limits<double>::infinity();
    const auto cl_poles = ni::eigvals(A_cl);
    for (const auto& e : cl_poles) cl_max_re = std::max(cl_max_re, e.real());

    const ni::StateSpaceModel closed(A_cl, sys.B1, sys.B2, sys.C1);
    const ni::RationalFunction cl_tf =
        ni::tf_from_ss(closed, ni::InputChannel::Disturbance).normalized();
    const ni::NIVerdict sni = ni::check_sni(cl_tf, grid_for(cfg, cl_tf));

    struct Obligation {
        std::string name;
        bool pass;
        double value;
    };
    const std::vector<Obligation> obligations = {
        {"output_row_annihilation", residual <= 1e-9, residual},
        {"shifted_matrix_stable", ar_max_re <= std::max(1e-9, 1e-9 * proj.Ar.norm()), ar_max_re},
        {"degree_of_stability", cl_max_re <= -epsilon + 1e-7, cl_max_re},
        {"closed_loop_sni", sni.is_sni, sni.is_sni ? 1.0 : 0.0},
    };

    OutputDir out(cfg.out_dir);
    json report;
    report["command"] = "certify";
    report["epsilon"] = epsilon;
    json gain = json::array();
    for (int i = 0; i < n; ++i) gain.push_back(K(i));
    report["gain"] = gain;
    report["gain_source"] = cfg.explicit_gain.empty() ? "derived" : "explicit";
    json obj = json::array();
    bool all_pass = true;
    for (const auto& o : obligations) {
        obj.push_back({{"name", o.name}, {"pass", o.pass}, {"value", o.value}});
        all_pass = all_pass && o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << o.name << " (value=" << num6(o.value)
                  << ")\n";
    }
    report["obligations"] = obj;
    report["stability_margin"] = -cl_max_re;
    report["closed_loop_poles"] = spectrum_json(cl_poles);
    out.write_report("certificate.json", std::move(report));
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"negative imaginary analysis and state feedback synthesis"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, grid_spec, gain_spec;

    app.add_option("--config", config_path, "run configuration file (flags override it)");
    app.add_option("--modal", cfg.modal_file, "modal parameter file");
    app.add_option("--modes", cfg.modes, "number of nominal modes m");
    app.add_flag("--undamp", cfg.undamp, "strip damping from the model before analysis");
    app.add_option("--aug", cfg.aug, "augmentation: integrator:<kt> or pid:<kp>,<ki>,<kd>");
    auto* eps_opt = app.add_option("--epsilon", cfg.epsilon, "required degree of stability");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--grid", grid_spec, "frequency grid override lo,hi,n");

    auto* analyze = app.add_subcommand("analyze", "NI family verdicts for the modal model");
    auto* synth = app.add_subcommand("synth", "synthesize the state feedback gain");
    auto* freqresp = app.add_subcommand("freqresp", "export frequency response CSV data");
    auto* certify = app.add_subcommand("certify", "check certificate obligations for a gain");
    certify->add_option("--K", gain_spec, "explicit gain entries k1,k2,...");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.has_epsilon = eps_opt->count() > 0;
        if (!grid_spec.empty()) apply_grid_spec(cfg, grid_spec);
        if (!gain_spec.empty()) cfg.explicit_gain = parse_number_list(gain_spec, "--K");
        if (!config_path.empty()) {
            std::map<std::string, bool> flag_set{
                {"modal_file", app.count("--modal") > 0}, {"modes", app.count("--modes") > 0},
                {"undamp", app.count("--undamp") > 0},    {"aug", app.count("--aug") > 0},
                {"epsilon", cfg.has_epsilon},             {"out", app.count("--out") > 0},
                {"grid", app.count("--grid") > 0},
            };
            const bool had_epsilon_flag = cfg.has_epsilon;
            load_config_file(cfg, config_path, flag_set);
            cfg.has_epsilon = cfg.has_epsilon || had_epsilon_flag;
        }

        if (analyze->parsed()) return cmd_analyze(cfg);
        if (synth->parsed()) return cmd_synth(cfg);
        if (freqresp->parsed()) return cmd_freqresp(cfg);
        if (certify->parsed()) return cmd_certify(cfg);
        return 2;
    } catch (const ni::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ni::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
