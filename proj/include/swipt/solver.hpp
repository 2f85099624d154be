#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swipt/objective.hpp"

// Real-coded genetic algorithm and grid-search baseline over the normalized
// decision box [0,1]^3.

namespace swipt::solver {

using Gene = std::array<double, 3>;
using Score = std::function<double(const Gene&)>;

enum class StallRule {
  spread,  // geometric mean of relative change in fitness spread over the window
  best,    // relative improvement of the best fitness over the window
};

enum class Replacement {
  merge,         // offspring and parents compete; the best n survive
  generational,  // offspring replace everyone but the elites
};
const char* to_string(Replacement r);

struct GaConfig {
  int population = 100;
  int max_generations = 150;
  int stall_window = 10;
  double stall_threshold = 1e-6;
  StallRule stall_rule = StallRule::spread;
  double ratio = 1.9;               // heuristic crossover step
  double crossover_fraction = 0.8;  // share of non-elite children bred by crossover
  double mutation_start = 0.1;      // Gaussian sigma, fraction of box width
  double mutation_end = 0.01;
  int elite = 1;
  Replacement replacement = Replacement::merge;
  double selection_pressure = 2.0;  // expected offspring of the best rank
  std::uint64_t seed = 1;
  int jobs = 1;

  bool operator==(const GaConfig&) const = default;
};

// Throws std::invalid_argument listing the offending fields.
void check(const GaConfig& ga);

struct GenerationStats {
  double best = 0.0;  // archive best after this generation
  double mean = 0.0;
  double spread = 0.0;  // standard deviation of population fitness
};

enum class Termination { stall, max_generations };
const char* to_string(Termination t);

struct GaRun {
  Gene best{};
  double best_score = 0.0;
  int generations = 0;
  long evaluations = 0;
  Termination termination = Termination::max_generations;
  std::vector<GenerationStats> trace;
};

// Minimizes `score` over [0,1]^3. `initial` replaces the uniform initial
// population when non-empty (it must hold exactly ga.population genes).
GaRun ga_minimize(const Score& score, const GaConfig& ga, const std::vector<Gene>& initial = {});

// Stochastic uniform selection: `count` parents from evenly spaced pointers
// over the cumulative expectations, starting at `offset` in [0, step).
std::vector<int> stochastic_uniform(const std::vector<double>& expectation, int count, double offset);

// Linear rank scaling: expected offspring per individual (sums to n).
std::vector<double> rank_expectation(const std::vector<double>& scores, double pressure);

// child = worse + ratio (better - worse), clamped to the unit box.
Gene heuristic_crossover(const Gene& better, const Gene& worse, double ratio);

struct OptimizationResult {
  objective::DecisionVector best;
  Gene best_gene{};
  double best_fitness = 0.0;
  double objective = 0.0;  // W/m^2, NaN when the model failed at the best point
  std::optional<objective::Evaluation> evaluation;
  bool feasible = false;
  int generations = 0;
  long evaluations = 0;
  Termination termination = Termination::max_generations;
  std::vector<GenerationStats> trace;
  double seconds = 0.0;
};

OptimizationResult ga_optimize(const ScenarioConfig& base, const GaConfig& ga,
                               const objective::FitnessWeights& weights = {});

struct GridSteps {
  int power = 20;
  int lambda_b = 20;
  int split = 20;
};

// Exhaustive search on the Cartesian grid of the decision box. Returns the best
// feasible point by objective, or the best by fitness when none is feasible.
OptimizationResult grid_search(const ScenarioConfig& base, const GridSteps& steps,
                               const objective::FitnessWeights& weights = {}, int jobs = 1);

// Re-searches a points^3 grid spanning +-`cells` grid cells (of the given
// steps) around `center`, clipped to the box.
OptimizationResult refine_around(const ScenarioConfig& base, const Gene& center, const GridSteps& steps,
                                 int points = 5, double cells = 1.0,
                                 const objective::FitnessWeights& weights = {}, int jobs = 1);

struct ComplexityProbe {
  long evaluations = 0;
  long bound = 0;  // m * n
  double seconds_per_evaluation = 0.0;
  int generations = 0;
  Termination termination = Termination::max_generations;
};

ComplexityProbe complexity_probe(const ScenarioConfig& base, const GaConfig& ga,
                                 const objective::FitnessWeights& weights = {});

}  // namespace swipt::solver
