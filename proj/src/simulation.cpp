#include "mosum/simulation.hpp"

#include "mosum/error.hpp"

#include <cmath>
#include <string>

namespace mosum {

std::string to_string(NoiseFamily family) {
    switch (family) {
    case NoiseFamily::gaussian:
        return "gaussian";
    case NoiseFamily::laplace:
        return "laplace";
    case NoiseFamily::student_t5:
        return "t5";
    }
    return "unknown";
}

NoiseFamily parse_noise_family(std::string_view name) {
    if (name == "gaussian" || name == "normal") {
        return NoiseFamily::gaussian;
    }
    if (name == "laplace") {
        return NoiseFamily::laplace;
    }
    if (name == "t5" || name == "student_t5") {
        return NoiseFamily::student_t5;
    }
    throw InputError("unknown noise family '" + std::string(name) + "' (expected gaussian, laplace or t5)");
}

std::vector<double> draw_noise(const NoiseSpec& spec, std::size_t n, CounterRng& rng) {
    if (!(spec.sigma_eps > 0.0) || !std::isfinite(spec.sigma_eps)) {
        throw InputError("noise standard deviation must be positive");
    }
    std::vector<double> eps(n);
    switch (spec.family) {
    case NoiseFamily::gaussian:
        for (auto& e : eps) {
            e = spec.sigma_eps * rng.normal();
        }
        break;
    case NoiseFamily::laplace: {
        // classical scale b has variance 2 b^2
        const double b = spec.sigma_eps / std::sqrt(2.0);
        for (auto& e : eps) {
            const double u = rng.uniform();
            e = u < 0.5 ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u));
        }
        break;
    }
    case NoiseFamily::student_t5: {
        const double scale = spec.sigma_eps / std::sqrt(5.0 / 3.0);
        for (auto& e : eps) {
            const double z = rng.normal();
            double chi2 = 0.0;
            for (int d = 0; d < 5; ++d) {
                const double y = rng.normal();
                chi2 += y * y;
            }
            e = scale * z / std::sqrt(chi2 / 5.0);
        }
        break;
    }
    }
    return eps;
}

ScenarioId scenario_from_int(int id) {
    if (id < 1 || id > 4) {
        throw InputError("unknown scenario " + std::to_string(id) + " (expected 1..4)");
    }
    return static_cast<ScenarioId>(id);
}

std::vector<std::size_t> scenario_changes(ScenarioId id) {
    if (id == ScenarioId::sim4) {
        return {};
    }
    return {1000, 2000, 2500};
}

std::vector<double> scenario_beta_mean(ScenarioId id) {
    switch (id) {
    case ScenarioId::sim1:
    case ScenarioId::sim2:
        return {-1.0, -1.0, -2.5, 2.5};
    case ScenarioId::sim3:
        return {-2.0, 2.0, -5.0, 5.0};
    case ScenarioId::sim4:
        return {-1.0};
    }
    return {};
}

PiecewiseLinearSignal scenario_signal(ScenarioId id, std::span<const double> beta) {
    const TimeGrid grid(kScenarioLength, kScenarioDeltaT);
    if (beta.size() != scenario_beta_mean(id).size()) {
        throw InputError("wrong number of coefficients for scenario");
    }
    if (id == ScenarioId::sim4) {
        return PiecewiseLinearSignal(grid, {}, {{10.0, beta[0]}});
    }
    const double b1 = beta[0];
    const double b2 = beta[1];
    const double b3 = beta[2];
    const double b4 = beta[3];
    std::vector<Segment> segs;
    switch (id) {
    case ScenarioId::sim1: {
        // b1 (t-10) + 10 | b2 (t-10) | 10(1+b2) + b3 (t-20) | 10(1+b2) + 5 b3 + b4 (t-25)
        const double level = 10.0 * (1.0 + b2);
        segs = {{10.0 - 10.0 * b1, b1}, {-10.0 * b2, b2}, {level - 20.0 * b3, b3}, {level + 5.0 * b3 - 25.0 * b4, b4}};
        break;
    }
    case ScenarioId::sim2: {
        // b1 (t-10) | b2 (t-10) | 10 b2 + b3 (t-20) | 10 b2 + 5 b3 + b4 (t-25)
        const double level = 10.0 * b2;
        segs = {{-10.0 * b1, b1}, {-10.0 * b2, b2}, {level - 20.0 * b3, b3}, {level + 5.0 * b3 - 25.0 * b4, b4}};
        break;
    }
    case ScenarioId::sim3:
        segs = {{b1, 0.0}, {b2, 0.0}, {b3, 0.0}, {b4, 0.0}};
        break;
    case ScenarioId::sim4:
        break;
    }
    return PiecewiseLinearSignal(grid, scenario_changes(id), std::move(segs));
}

Series add_noise(const PiecewiseLinearSignal& signal, const NoiseSpec& noise, CounterRng& rng) {
    std::vector<double> x = signal.sample();
    const std::vector<double> eps = draw_noise(noise, x.size(), rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += eps[i];
    }
    return Series(std::move(x), signal.grid());
}

ScenarioDraw gen_scenario(const ScenarioSpec& spec) {
    constexpr double kBetaSd = 0.2;
    CounterRng rng(spec.seed, spec.stream);
    std::vector<double> beta = scenario_beta_mean(spec.id);
    for (auto& b : beta) {
        b += kBetaSd * rng.normal();
    }
    PiecewiseLinearSignal signal = scenario_signal(spec.id, beta);
    Series series = add_noise(signal, spec.noise, rng);
    return {std::move(series), std::move(signal), std::move(beta)};
}

Series block_mean(const Series& series, std::size_t block) {
    if (block < 1) {
        throw InputError("block size must be >= 1");
    }
    if (block > series.size()) {
        throw InputError("block size " + std::to_string(block) + " exceeds series length " +
                         std::to_string(series.size()));
    }
    const std::vector<double>& x = series.values();
    std::vector<double> out;
    out.reserve((x.size() + block - 1) / block);
    for (std::size_t start = 0; start < x.size(); start += block) {
        const std::size_t stop = std::min(start + block, x.size());
        double s = 0.0;
        for (std::size_t i = start; i < stop; ++i) {
            s += x[i];
        }
        out.push_back(s / static_cast<double>(stop - start));
    }
    const double dt = series.grid().delta_t() * static_cast<double>(block);
    const std::size_t m = out.size();
    return Series(std::move(out), TimeGrid(m, dt));
}

} // namespace mosum
