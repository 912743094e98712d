#include "cli.hpp"

#include "mosum/critical_values.hpp"
#include "mosum/detection.hpp"
#include "mosum/error.hpp"
#include "mosum/evaluation.hpp"
#include "mosum/io.hpp"
#include "mosum/simulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>

namespace mosum::cli {

namespace {

// Raised for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string output = "-";
};

struct DetectFlags {
    std::string input = "-";
    std::vector<std::size_t> bandwidths;
    std::size_t auto_g1 = 0;
    double alpha = 0.05;
    double eta = 0.3;
    double theta = 0.8;
    double log_h = kDefaultLogH;
    std::optional<double> delta_t;
    std::string emit_profile;
};

struct SimulateFlags {
    int scenario = 0;
    std::string signal;
    std::string noise = "gaussian";
    double sigma_eps = 1.0;
    std::uint64_t replication = 0;
    bool with_truth = false;
    std::string truth;
};

struct CalibrateFlags {
    std::size_t n = 0;
    std::size_t g = 0;
    std::size_t replications = 1000;
};

struct BenchFlags {
    int scenario = 1;
    std::string noise = "gaussian";
    std::vector<double> sigma_levels{0.5, 1.0, 1.5, 2.0};
    std::size_t replications = 1000;
    std::vector<std::size_t> bandwidths;
    std::size_t auto_g1 = 50;
};

struct PreprocessFlags {
    std::string input = "-";
    std::size_t block = 1;
    std::optional<double> delta_t;
};

// Opens `path` for writing, or forwards to `fallback` for "-".
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) {
            throw DataError("cannot open '" + path + "' for writing");
        }
        stream_ = file_.get();
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

CsvSeries load_series(const std::string& path, std::istream& in, std::optional<double> delta_t) {
    if (path == "-") {
        return read_series_csv(in, delta_t);
    }
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw DataError("cannot open '" + path + "'");
    }
    return read_series_csv(file, delta_t);
}

NoiseFamily noise_or_usage(const std::string& name) {
    try {
        return parse_noise_family(name);
    } catch (const InputError& e) {
        throw UsageError(e.what());
    }
}

int cmd_detect(const DetectFlags& f, const Globals& g, std::istream& in, std::ostream& out, std::ostream& err) {
    if (!f.bandwidths.empty() && f.auto_g1 != 0) {
        throw UsageError("--bandwidth and --auto-bandwidths are mutually exclusive");
    }
    if (!(f.eta > 0.0 && f.eta < 0.5)) {
        throw UsageError("--eta must lie in (0, 0.5)");
    }
    if (!(f.theta > 0.0 && f.theta <= 1.0)) {
        throw UsageError("--theta must lie in (0, 1]");
    }
    if (!(f.alpha > 0.0 && f.alpha < 1.0)) {
        throw UsageError("--alpha must lie in (0, 1)");
    }
    if (f.delta_t && !(*f.delta_t > 0.0)) {
        throw UsageError("--delta-t must be positive");
    }

    const CsvSeries data = load_series(f.input, in, f.delta_t);
    const Series& series = data.series;
    const std::size_t n = series.size();

    DetectorConfig config;
    config.bandwidths = f.bandwidths;
    if (f.auto_g1 != 0) {
        config.g1 = f.auto_g1;
    }
    config.alpha = f.alpha;
    config.eta = f.eta;
    config.theta = f.theta;
    config.log_h = f.log_h;

    const std::vector<std::size_t> bandwidths = resolve_bandwidths(config, n);
    std::vector<std::size_t> narrow;
    for (std::size_t bw : bandwidths) {
        check_profile_bandwidth(n, bw);
        if (bandwidth_below_rate_hint(n, bw)) {
            narrow.push_back(bw);
        }
    }
    if (!narrow.empty()) {
        err << "warning: bandwidth";
        for (std::size_t bw : narrow) {
            err << ' ' << bw;
        }
        err << " below n^(2/3) = " << std::pow(static_cast<double>(n), 2.0 / 3.0)
            << "; the asymptotic level may not hold\n";
    }

    DetectionResult result = detect(series, config);
    for (auto& c : result.change_points) {
        c.t += data.t_offset;
    }

    if (!f.emit_profile.empty()) {
        OutputTarget target(f.emit_profile, out);
        std::ostream& p = target.get();
        p << "G,k,W\n";
        const WindowRegression regression(series);
        for (std::size_t bw : bandwidths) {
            const MosumProfile profile = mosum_profile(regression, bw);
            for (const auto& fit : profile.fits) {
                p << bw << ',' << fit.k << ',' << format_double(fit.w) << '\n';
            }
        }
    }

    OutputTarget target(g.output, out);
    target.get() << to_json(result).dump(2) << '\n';
    return exit_ok;
}

int cmd_simulate(const SimulateFlags& f, const Globals& g, std::ostream& out) {
    if ((f.scenario == 0) == f.signal.empty()) {
        throw UsageError("simulate needs exactly one of --scenario or --signal");
    }
    if (!(f.sigma_eps > 0.0)) {
        throw UsageError("--sigma-eps must be positive");
    }
    const NoiseSpec noise{noise_or_usage(f.noise), f.sigma_eps};

    std::optional<PiecewiseLinearSignal> signal;
    std::optional<Series> series;
    std::vector<double> beta;
    nlohmann::json sidecar;
    if (f.scenario != 0) {
        ScenarioId id{};
        try {
            id = scenario_from_int(f.scenario);
        } catch (const InputError& e) {
            throw UsageError(e.what());
        }
        ScenarioDraw draw = gen_scenario({id, noise, g.seed, f.replication});
        sidecar["scenario"] = f.scenario;
        beta = draw.beta;
        signal.emplace(std::move(draw.signal));
        series.emplace(std::move(draw.series));
    } else {
        std::ifstream file(f.signal);
        if (!file) {
            throw DataError("cannot open '" + f.signal + "'");
        }
        nlohmann::json spec;
        try {
            spec = nlohmann::json::parse(file);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("signal file: ") + e.what());
        }
        signal.emplace(signal_from_json(spec));
        CounterRng rng(g.seed, f.replication);
        series.emplace(add_noise(*signal, noise, rng));
    }

    std::vector<double> truth(series->size());
    for (std::size_t i = 1; i <= truth.size(); ++i) {
        truth[i - 1] = evaluate_signal(*signal, i);
    }
    OutputTarget target(g.output, out);
    write_series_csv(target.get(), *series, f.with_truth ? &truth : nullptr);

    if (!f.truth.empty()) {
        sidecar["noise"] = to_string(noise.family);
        sidecar["sigma_eps"] = noise.sigma_eps;
        sidecar["seed"] = g.seed;
        sidecar["replication"] = f.replication;
        sidecar["beta"] = beta;
        sidecar["changes"] = signal->change_indices();
        sidecar["signal"] = signal_to_json(*signal);
        OutputTarget side(f.truth, out);
        side.get() << sidecar.dump(2) << '\n';
    }
    return exit_ok;
}

int cmd_calibrate(const CalibrateFlags& f, const Globals& g, std::ostream& out) {
    if (f.replications < 100) {
        throw UsageError("--replications must be at least 100");
    }
    const double log_h = calibrate_log_h(f.n, f.g, f.replications, g.seed);
    nlohmann::json j{{"n", f.n}, {"G", f.g}, {"replications", f.replications}, {"seed", g.seed}, {"log_h", log_h}};
    OutputTarget target(g.output, out);
    target.get() << j.dump(2) << '\n';
    return exit_ok;
}

int cmd_bench(const BenchFlags& f, const Globals& g, std::ostream& out, Terminal term) {
    BenchmarkConfig config;
    try {
        config.scenario = scenario_from_int(f.scenario);
    } catch (const InputError& e) {
        throw UsageError(e.what());
    }
    config.noise = noise_or_usage(f.noise);
    for (double s : f.sigma_levels) {
        if (!(s > 0.0)) {
            throw UsageError("--sigma-eps values must be positive");
        }
    }
    if (f.replications < 1) {
        throw UsageError("--replications must be at least 1");
    }
    config.sigma_levels = f.sigma_levels;
    config.replications = f.replications;
    config.seed = g.seed;
    config.method.bandwidths = f.bandwidths;
    config.method.g1 = f.auto_g1;

    const BenchmarkReport report = run_benchmark(config);
    if (g.output != "-") {
        OutputTarget target(g.output, out);
        write_report_csv(target.get(), report);
    }
    print_report_table(out, report, term.color);
    return exit_ok;
}

int cmd_preprocess(const PreprocessFlags& f, const Globals& g, std::istream& in, std::ostream& out) {
    if (f.block < 1) {
        throw UsageError("--block must be at least 1");
    }
    const CsvSeries data = load_series(f.input, in, f.delta_t);
    const Series reduced = block_mean(data.series, f.block);
    OutputTarget target(g.output, out);
    write_series_csv(target.get(), reduced, nullptr, data.t_offset);
    return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
            Terminal terminal) {
    CLI::App app{"Piecewise-linear MOSUM change point detection"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals globals;
    app.add_option("--seed", globals.seed, "RNG seed")->capture_default_str();
    app.add_option("--threads", globals.threads, "OpenMP threads (0 = all)")->check(CLI::NonNegativeNumber);
    app.add_option("--output,-o", globals.output, "output path or - for stdout")->capture_default_str();

    DetectFlags det;
    auto* detect_cmd = app.add_subcommand("detect", "detect change points in a CSV series");
    detect_cmd->add_option("input", det.input, "CSV file with an x column (and optional t), - for stdin");
    detect_cmd->add_option("--bandwidth,-G", det.bandwidths, "bandwidth (repeatable)")->allow_extra_args(false);
    detect_cmd->add_option("--auto-bandwidths", det.auto_g1, "Fibonacci bandwidths from this G1");
    detect_cmd->add_option("--alpha", det.alpha, "significance level")->capture_default_str();
    detect_cmd->add_option("--eta", det.eta, "minimum run length as a fraction of G")->capture_default_str();
    detect_cmd->add_option("--theta", det.theta, "merge radius as a fraction of G")->capture_default_str();
    detect_cmd->add_option("--log-h", det.log_h, "log H constant")->capture_default_str();
    detect_cmd->add_option("--delta-t", det.delta_t, "sampling interval (default: from t column, else 1)");
    detect_cmd->add_option("--emit-profile", det.emit_profile, "write G,k,W CSV to this path");

    SimulateFlags sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "generate a simulation scenario");
    auto* scenario_opt = simulate_cmd->add_option("--scenario", sim.scenario, "scenario 1-4");
    simulate_cmd->add_option("--signal", sim.signal, "JSON signal definition")->excludes(scenario_opt);
    simulate_cmd->add_option("--noise", sim.noise, "gaussian, laplace or t5")->capture_default_str();
    simulate_cmd->add_option("--sigma-eps", sim.sigma_eps, "noise standard deviation")->capture_default_str();
    simulate_cmd->add_option("--replication", sim.replication, "replication stream within the seed");
    simulate_cmd->add_flag("--with-truth", sim.with_truth, "add the noiseless f column");
    simulate_cmd->add_option("--truth", sim.truth, "write coefficients and change points as JSON");

    CalibrateFlags cal;
    auto* calibrate_cmd = app.add_subcommand("calibrate", "Monte Carlo estimate of log H");
    calibrate_cmd->add_option("--n", cal.n, "series length")->required();
    calibrate_cmd->add_option("--g", cal.g, "bandwidth")->required();
    calibrate_cmd->add_option("--replications", cal.replications, "replications")->capture_default_str();

    BenchFlags bench;
    auto* bench_cmd = app.add_subcommand("bench", "score the detector on a simulation scenario");
    bench_cmd->add_option("--scenario", bench.scenario, "scenario 1-4")->capture_default_str();
    bench_cmd->add_option("--noise", bench.noise, "gaussian, laplace or t5")->capture_default_str();
    bench_cmd->add_option("--sigma-eps", bench.sigma_levels, "noise levels")->delimiter(',')->allow_extra_args(false);
    bench_cmd->add_option("--replications", bench.replications, "replications per level")->capture_default_str();
    bench_cmd->add_option("--bandwidth,-G", bench.bandwidths, "fixed bandwidths instead of the Fibonacci set")->allow_extra_args(false);
    bench_cmd->add_option("--auto-bandwidths", bench.auto_g1, "Fibonacci G1")->capture_default_str();

    PreprocessFlags pre;
    auto* preprocess_cmd = app.add_subcommand("preprocess", "block means of a CSV series");
    preprocess_cmd->add_option("input", pre.input, "CSV file, - for stdin");
    preprocess_cmd->add_option("--block", pre.block, "block length")->required();
    preprocess_cmd->add_option("--delta-t", pre.delta_t, "sampling interval of the input");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for usage\n";
        return exit_usage;
    }

    if (globals.threads > 0) {
        omp_set_num_threads(globals.threads);
    }

    try {
        if (detect_cmd->parsed()) {
            return cmd_detect(det, globals, in, out, err);
        }
        if (simulate_cmd->parsed()) {
            return cmd_simulate(sim, globals, out);
        }
        if (calibrate_cmd->parsed()) {
            return cmd_calibrate(cal, globals, out);
        }
        if (bench_cmd->parsed()) {
            return cmd_bench(bench, globals, out, terminal);
        }
        return cmd_preprocess(pre, globals, in, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return exit_data;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
}

} // namespace mosum::cli
