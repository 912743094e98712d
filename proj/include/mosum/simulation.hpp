#pragma once

#include "mosum/mosum_core.hpp"
#include "mosum/random.hpp"
#include "mosum/signal_model.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mosum {

enum class NoiseFamily { gaussian, laplace, student_t5 };

struct NoiseSpec {
    NoiseFamily family = NoiseFamily::gaussian;
    double sigma_eps = 1.0; ///< target standard deviation
};

std::string to_string(NoiseFamily family);
/// Accepts "gaussian", "laplace", "t5".
NoiseFamily parse_noise_family(std::string_view name);

/// Zero-mean noise with standard deviation sigma_eps.
std::vector<double> draw_noise(const NoiseSpec& spec, std::size_t n, CounterRng& rng);

enum class ScenarioId { sim1 = 1, sim2 = 2, sim3 = 3, sim4 = 4 };

ScenarioId scenario_from_int(int id);

inline constexpr std::size_t kScenarioLength = 3500;
inline constexpr double kScenarioDeltaT = 0.01;

struct ScenarioSpec {
    ScenarioId id = ScenarioId::sim1;
    NoiseSpec noise;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0; ///< replication stream within the seed
};

struct ScenarioDraw {
    Series series;
    PiecewiseLinearSignal signal;
    std::vector<double> beta;
};

/// True change points of a scenario ({1000, 2000, 2500}, none for sim4).
std::vector<std::size_t> scenario_changes(ScenarioId id);

/// Coefficient prior mean (length 4, or 1 for sim4).
std::vector<double> scenario_beta_mean(ScenarioId id);

/// Deterministic signal for given coefficients.
PiecewiseLinearSignal scenario_signal(ScenarioId id, std::span<const double> beta);

/// Draws beta, builds f and adds noise, all from stream (seed, stream).
ScenarioDraw gen_scenario(const ScenarioSpec& spec);

/// f + noise for an arbitrary signal.
Series add_noise(const PiecewiseLinearSignal& signal, const NoiseSpec& noise, CounterRng& rng);

/// Non-overlapping block means; the trailing partial block uses its own length.
Series block_mean(const Series& series, std::size_t block);

} // namespace mosum
