// multivenc: range construction, sensitivity comparison, velocity
// estimation from measurement CSVs, and Monte Carlo simulation.
//
// Exit codes: 0 success, 2 config/input parse error, 3 arithmetic overflow
// (incommensurable moments), 4 rank deficiency.

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "multivenc/config.hpp"
#include "multivenc/estimator.hpp"
#include "multivenc/export.hpp"
#include "multivenc/lattice.hpp"
#include "multivenc/simulator.hpp"
#include "multivenc/version.hpp"

using namespace mvenc;

namespace {

std::string timestamp_utc() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string num(double v) { return format_number(v); }

std::string vec3(const Eigen::Vector3d& v) {
    return num(v(0)) + " " + num(v(1)) + " " + num(v(2));
}

// Manifest lines echoed (as '# ' comments) into every output stream and CSV.
// The timestamp lives only here, so reports stay byte-reproducible otherwise.
struct Manifest {
    std::vector<std::string> lines;

    Manifest(const std::string& command, const std::string& config_path) {
        lines.push_back("command = " + command);
        lines.push_back("version = " + std::string(kVersion));
        lines.push_back("config = " + config_path);
    }
    void add(const std::string& key, const std::string& value) {
        lines.push_back(key + " = " + value);
    }
    void stamp() { lines.push_back("timestamp = " + timestamp_utc()); }
    void print(std::ostream& out) const {
        for (const auto& l : lines) out << "# " << l << "\n";
    }
};

struct SourceArgs {
    std::string config_path;
    std::string scheme_name;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "problem config file (INI)");
        cmd->add_option("--scheme", scheme_name,
                        "builtin scheme: balanced4, balanced5, perturbed4, perturbed5");
    }
    ProblemConfig resolve() const {
        if (!config_path.empty()) return load_config(config_path);
        if (!scheme_name.empty()) {
            ProblemConfig cfg;
            cfg.scheme = builtin_scheme(scheme_name);
            cfg.path = "<builtin:" + scheme_name + ">";
            return cfg;
        }
        throw ParseError("give --config or --scheme");
    }
};

NoiseModel model_for(const ProblemConfig& cfg, const DifferenceSystem& d, int coils) {
    if (cfg.has_scheme()) return noise_covariance(*cfg.scheme, coils);
    return NoiseModel::identity(d.size());
}

// ---------------------------------------------------------------- range ----

struct RangeArgs {
    SourceArgs src;
    std::string export_dir;
};

int cmd_range(const RangeArgs& args) {
    const ProblemConfig cfg = args.src.resolve();
    const DifferenceSystem d = cfg.system();
    const SearchBox box = compute_search_box(d);
    const LatticePoints pts = enumerate_lattice_points(d, box);
    const AmbiguityLattice lat = extract_basis(pts);

    Manifest man("range", cfg.path);
    man.add("gamma_m", num(d.gamma_m));
    man.stamp();
    man.print(std::cout);

    const Eigen::Vector3d ext = box.half_extents();
    std::cout << "search_box_half_extents = " << vec3(ext) << "\n";
    std::cout << "lattice_points_in_box = " << pts.size() << "\n";
    const Eigen::Matrix3d basis = lat.basis();
    for (int c = 0; c < 3; ++c) {
        std::cout << "basis_v" << (c + 1) << " = " << vec3(basis.col(c)) << "\n";
    }
    std::cout << "det_w_exact = " << lat.det_w.str() << "\n";
    std::cout << "volume = " << num(lat.volume()) << "\n";
    std::cout << "condition_number = " << num(lat.condition_number) << "\n";

    if (!args.export_dir.empty()) {
        const std::string dir = args.export_dir + "/";
        write_lattice_points_csv(dir + "lattice_points.csv", pts, man.lines);
        write_parallelepiped_csv(dir + "parallelepiped.csv", lat.fundamental(), man.lines);
        write_basis_csv(dir + "basis.csv", lat, man.lines);
        std::cout << "export_dir = " << args.export_dir << "\n";
    }
    return 0;
}

// -------------------------------------------------------------- compare ----

struct CompareArgs {
    SourceArgs src;
    std::string preproc;
    std::uint64_t samples = 2'000'000;
    std::uint64_t seed = 1;
};

int cmd_compare(const CompareArgs& args) {
    ProblemConfig cfg = args.src.resolve();
    if (!args.preproc.empty()) cfg.preprocessor = builtin_preprocessor(args.preproc);
    if (!cfg.preprocessor) throw ParseError("compare needs a preprocessor (config or --preproc)");
    const Preprocessor& p = *cfg.preprocessor;

    const DifferenceSystem d = cfg.system();
    const NoiseModel nm = model_for(cfg, d, 1);
    const double eta = noise_sensitivity(d, nm);
    const double eta_p = preprocessed_sensitivity(p, d, nm);

    const AmbiguityLattice joint = ambiguity_lattice(d);

    Manifest man("compare", cfg.path);
    man.add("preprocessor", p.name);
    man.add("samples", std::to_string(args.samples));
    man.add("seed", std::to_string(args.seed));
    man.stamp();
    man.print(std::cout);

    std::cout << "eta = " << num(eta) << "\n";
    std::cout << "eta_pre = " << num(eta_p) << "\n";
    std::cout << "eta_ratio = " << num(eta_p / eta) << "\n";
    std::cout << "sensitivity_degradation_percent = " << num(100.0 * (eta_p / eta - 1.0))
              << "\n";
    std::cout << "volume_joint = " << num(joint.volume()) << "\n";
    std::cout << "det_w_exact_joint = " << joint.det_w.str() << "\n";

    double vol_pre = 0.0;
    if (p.range_kind == RangeKind::Lattice) {
        const AmbiguityLattice pre = ambiguity_lattice(apply_preprocessor(p, d).system);
        vol_pre = pre.volume();
        std::cout << "volume_pre = " << num(vol_pre) << "\n";
        std::cout << "det_w_exact_pre = " << pre.det_w.str() << "\n";
    } else {
        const VolumeEstimate est = slab_region_volume(p, d, args.samples, args.seed);
        vol_pre = est.value;
        std::cout << "volume_pre = " << num(vol_pre) << "\n";
        std::cout << "volume_pre_std_error = " << num(est.std_error) << "\n";
    }
    std::cout << "volume_ratio = " << num(joint.volume() / vol_pre) << "\n";
    return 0;
}

// ------------------------------------------------------------- estimate ----

struct EstimateArgs {
    SourceArgs src;
    std::string input;
    std::string output;
};

Measurements read_measurements_csv(const std::string& path, int points) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open measurements '" + path + "'");
    Measurements y;
    std::vector<std::vector<bool>> seen;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        for (auto& ch : line) {
            if (ch == ',') ch = ' ';
        }
        std::istringstream fields(line);
        std::string a, b, c, dd;
        if (!(fields >> a >> b >> c >> dd)) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": need coil, point, re, im");
        }
        if (a == "coil") continue;  // header row
        try {
            const int coil = std::stoi(a);
            const int point = std::stoi(b);
            const double re = std::stod(c);
            const double im = std::stod(dd);
            if (coil < 0 || point < 0 || point >= points) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": index out of range");
            }
            if (static_cast<int>(y.size()) <= coil) {
                y.resize(coil + 1);
                seen.resize(coil + 1);
            }
            for (auto& row : y) row.resize(points);
            for (auto& row : seen) row.resize(points, false);
            y[static_cast<std::size_t>(coil)][static_cast<std::size_t>(point)] = {re, im};
            seen[static_cast<std::size_t>(coil)][static_cast<std::size_t>(point)] = true;
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad numeric field");
        }
    }
    if (y.empty()) throw ParseError(path + ": no measurement rows");
    for (std::size_t c = 0; c < seen.size(); ++c) {
        for (int l = 0; l < points; ++l) {
            if (!seen[c][static_cast<std::size_t>(l)]) {
                throw ParseError(path + ": missing coil " + std::to_string(c) + " point " +
                                 std::to_string(l));
            }
        }
    }
    return y;
}

int cmd_estimate(const EstimateArgs& args) {
    const ProblemConfig cfg = args.src.resolve();
    if (!cfg.has_scheme()) throw ParseError("estimate needs an encoding scheme");
    const DifferenceSystem d = build_difference_system(*cfg.scheme);
    const Measurements y = read_measurements_csv(args.input, cfg.scheme->L);
    const NoiseModel nm = noise_covariance(*cfg.scheme, static_cast<int>(y.size()));
    const AmbiguityLattice lat = ambiguity_lattice(d);

    const PhaseDifferences pd = phase_differences(y);
    const VelocityEstimate est = wrap_search(d, pd, nm, lat.centered());

    Manifest man("estimate", cfg.path);
    man.add("input", args.input);
    man.add("coils", std::to_string(y.size()));
    man.stamp();

    std::ostringstream csv;
    man.print(csv);
    csv << "quantity,c1,c2,c3,c4,c5,c6\n";
    csv << "v_hat," << num(est.v_hat(0)) << "," << num(est.v_hat(1)) << ","
        << num(est.v_hat(2)) << "\n";
    csv << "k_hat";
    for (int i = 0; i < est.k_hat.size(); ++i) csv << "," << est.k_hat(i);
    csv << "\n";
    csv << "cost," << num(est.cost) << "\n";
    for (int r = 0; r < 3; ++r) {
        csv << "covariance_row" << (r + 1);
        for (int c = 0; c < 3; ++c) csv << "," << num(est.covariance(r, c));
        csv << "\n";
    }

    if (args.output.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(args.output);
        if (!out) throw Error("cannot write '" + args.output + "'");
        out << csv.str();
        std::cout << "wrote " << args.output << "\n";
    }
    return 0;
}

// ------------------------------------------------------------- simulate ----

struct SimulateArgs {
    SourceArgs src;
    double snr = 0.0;
    std::string velocity = "0,0,0";
    double background = 0.0;
    int trials = 1000;
    int coils = 1;
    std::uint64_t seed = 1;
    std::string output;
};

Eigen::Vector3d parse_velocity(const std::string& text) {
    std::string s = text;
    for (auto& ch : s) {
        if (ch == ',') ch = ' ';
    }
    std::istringstream in(s);
    Eigen::Vector3d v;
    if (!(in >> v(0) >> v(1) >> v(2))) throw ParseError("bad --velocity '" + text + "'");
    std::string rest;
    if (in >> rest) throw ParseError("bad --velocity '" + text + "'");
    return v;
}

int cmd_simulate(const SimulateArgs& args) {
    const ProblemConfig cfg = args.src.resolve();
    if (!cfg.has_scheme()) throw ParseError("simulate needs an encoding scheme");

    TrialConfig tc;
    tc.scheme = *cfg.scheme;
    if (args.snr > 0.0) {
        // SNR is per coil: a_l / sigma at the mean magnitude.
        double mean_a = 0.0;
        for (double a : tc.scheme.magnitudes) mean_a += a;
        mean_a /= static_cast<double>(tc.scheme.magnitudes.size());
        tc.scheme.noise_std = mean_a / args.snr;
    }
    tc.true_velocity = parse_velocity(args.velocity);
    tc.background_phase = args.background;
    tc.trials = args.trials;
    tc.coils = args.coils;
    tc.seed = args.seed;

    const TrialReport rep = run_campaign(tc);

    Manifest man("simulate", cfg.path);
    man.add("velocity", vec3(tc.true_velocity));
    man.add("noise_std", num(tc.scheme.noise_std));
    man.add("trials", std::to_string(tc.trials));
    man.add("coils", std::to_string(tc.coils));
    man.add("seed", std::to_string(tc.seed));
    man.stamp();
    man.print(std::cout);

    std::cout << "trials = " << rep.trials << "\n";
    std::cout << "wrap_errors = " << rep.wrap_errors << "\n";
    std::cout << "wrap_error_rate = " << num(rep.wrap_error_rate) << "\n";
    std::cout << "bias = " << vec3(rep.bias) << "\n";
    for (int r = 0; r < 3; ++r) {
        std::cout << "empirical_covariance_row" << (r + 1) << " = "
                  << vec3(rep.empirical_covariance.row(r).transpose()) << "\n";
    }
    for (int r = 0; r < 3; ++r) {
        std::cout << "predicted_covariance_row" << (r + 1) << " = "
                  << vec3(rep.predicted_covariance.row(r).transpose()) << "\n";
    }
    const double det_pred = rep.predicted_covariance.determinant();
    if (det_pred > 0.0) {
        std::cout << "covariance_det_ratio = "
                  << num(rep.empirical_covariance.determinant() / det_pred) << "\n";
    }

    if (!args.output.empty()) {
        std::ofstream out(args.output);
        if (!out) throw Error("cannot write '" + args.output + "'");
        man.print(out);
        out << "metric,c1,c2,c3\n";
        out << "trials," << rep.trials << "\n";
        out << "wrap_errors," << rep.wrap_errors << "\n";
        out << "wrap_error_rate," << num(rep.wrap_error_rate) << "\n";
        out << "bias," << num(rep.bias(0)) << "," << num(rep.bias(1)) << ","
            << num(rep.bias(2)) << "\n";
        for (int r = 0; r < 3; ++r) {
            out << "empirical_covariance_row" << (r + 1);
            for (int c = 0; c < 3; ++c) out << "," << num(rep.empirical_covariance(r, c));
            out << "\n";
        }
        for (int r = 0; r < 3; ++r) {
            out << "predicted_covariance_row" << (r + 1);
            for (int c = 0; c < 3; ++c) out << "," << num(rep.predicted_covariance(r, c));
            out << "\n";
        }
        std::cout << "wrote " << args.output << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multipoint velocity-encoding toolkit"};
    app.require_subcommand(1);

    RangeArgs range_args;
    CLI::App* range = app.add_subcommand("range", "unambiguous range of a scheme");
    range_args.src.attach(range);
    range->add_option("--export-dir", range_args.export_dir, "write CSV exports here");

    CompareArgs compare_args;
    CLI::App* compare =
        app.add_subcommand("compare", "joint range/sensitivity vs a preprocessor");
    compare_args.src.attach(compare);
    compare->add_option("--preproc", compare_args.preproc, "builtin preprocessor: p91, p10, p5");
    compare->add_option("--samples", compare_args.samples, "Monte Carlo samples for slab volumes");
    compare->add_option("--seed", compare_args.seed, "Monte Carlo seed");

    EstimateArgs estimate_args;
    CLI::App* estimate = app.add_subcommand("estimate", "estimate velocity from measurements");
    estimate_args.src.attach(estimate);
    estimate->add_option("--input", estimate_args.input, "CSV rows: coil, point_index, re, im")
        ->required();
    estimate->add_option("--output", estimate_args.output, "write the report CSV here");

    SimulateArgs simulate_args;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimation campaign");
    simulate_args.src.attach(simulate);
    simulate->add_option("--snr", simulate_args.snr, "per-coil SNR a/sigma (overrides noise_std)");
    simulate->add_option("--velocity", simulate_args.velocity, "true velocity x,y,z");
    simulate->add_option("--background", simulate_args.background, "background phase phi0");
    simulate->add_option("--trials", simulate_args.trials, "number of trials");
    simulate->add_option("--coils", simulate_args.coils, "number of coils");
    simulate->add_option("--seed", simulate_args.seed, "campaign seed");
    simulate->add_option("--output", simulate_args.output, "write the report CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (range->parsed()) return cmd_range(range_args);
        if (compare->parsed()) return cmd_compare(compare_args);
        if (estimate->parsed()) return cmd_estimate(estimate_args);
        if (simulate->parsed()) return cmd_simulate(simulate_args);
        return 1;
    } catch (const mvenc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mvenc::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mvenc::OverflowError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const mvenc::RankError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
