#include "swipt/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "swipt/parallel.hpp"

namespace swipt::solver {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<int> ascending_order(const std::vector<double>& scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] < scores[b]; });
  return order;
}

GenerationStats summarize(const std::vector<double>& scores, double archive_best) {
  GenerationStats st;
  st.best = archive_best;
  st.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / scores.size();
  double ss = 0.0;
  for (double v : scores) ss += (v - st.mean) * (v - st.mean);
  st.spread = scores.size() > 1 ? std::sqrt(ss / (scores.size() - 1)) : 0.0;
  return st;
}

bool stalled(const std::vector<GenerationStats>& trace, const GaConfig& ga) {
  const int w = ga.stall_window;
  if (static_cast<int>(trace.size()) <= w) return false;
  const std::size_t last = trace.size() - 1;
  if (ga.stall_rule == StallRule::best) {
    const double old = trace[last - w].best;
    const double now = trace[last].best;
    const double scale = std::max(std::abs(old), std::numeric_limits<double>::min());
    return (old - now) / scale < ga.stall_threshold;
  }
  double log_sum = 0.0;
  double spread_sum = 0.0;
  for (std::size_t j = last - w + 1; j <= last; ++j) {
    const double prev = trace[j - 1].spread;
    const double change = std::abs(trace[j].spread - prev) / std::max(prev, std::numeric_limits<double>::min());
    log_sum += std::log(std::max(change, std::numeric_limits<double>::min()));
    spread_sum += trace[j].spread;
  }
  const double geometric_mean = std::exp(log_sum / w);
  return geometric_mean < ga.stall_threshold && trace[last].spread <= spread_sum / w;
}

OptimizationResult finish(const ScenarioConfig& base, const objective::DecisionBox& box, const Gene& gene,
                          double score, const objective::FitnessWeights& weights) {
  OptimizationResult out;
  out.best_gene = gene;
  out.best = box.decode(gene);
  out.best_fitness = score;
  const auto r = objective::fitness_at(base, out.best, weights);
  out.evaluation = r.evaluation;
  out.objective = r.evaluation ? r.evaluation->objective : std::numeric_limits<double>::quiet_NaN();
  out.feasible = r.evaluation && r.evaluation->feasibility.feasible;
  return out;
}

}  // namespace

const char* to_string(Replacement r) { return r == Replacement::merge ? "merge" : "generational"; }

const char* to_string(Termination t) { return t == Termination::stall ? "stall" : "max_generations"; }

void check(const GaConfig& ga) {
  std::ostringstream issues;
  if (ga.population < 2) issues << " ga.population must be >= 2;";
  if (ga.max_generations < 1) issues << " ga.max_generations must be >= 1;";
  if (ga.stall_window < 1) issues << " ga.stall_window must be >= 1;";
  if (!(ga.stall_threshold >= 0)) issues << " ga.stall_threshold must be >= 0;";
  if (!(ga.ratio > 0)) issues << " ga.ratio must be positive;";
  if (!(ga.crossover_fraction >= 0 && ga.crossover_fraction <= 1))
    issues << " ga.crossover_fraction must lie in [0, 1];";
  if (!(ga.mutation_start >= 0 && ga.mutation_end >= 0)) issues << " ga.mutation_* must be >= 0;";
  if (ga.elite < 0 || ga.elite >= ga.population) issues << " ga.elite must lie in [0, population);";
  if (!(ga.selection_pressure >= 1 && ga.selection_pressure <= 2))
    issues << " ga.selection_pressure must lie in [1, 2];";
  if (ga.jobs < 1) issues << " ga.jobs must be >= 1;";
  if (!issues.str().empty()) throw std::invalid_argument("invalid GA configuration:" + issues.str());
}

std::vector<double> rank_expectation(const std::vector<double>& scores, double pressure) {
  const std::size_t n = scores.size();
  std::vector<double> e(n, 1.0);
  if (n < 2) return e;
  const auto order = ascending_order(scores);
  for (std::size_t rank = 0; rank < n; ++rank)
    e[order[rank]] = pressure - 2.0 * (pressure - 1.0) * rank / (n - 1);
  return e;
}

std::vector<int> stochastic_uniform(const std::vector<double>& expectation, int count, double offset) {
  const double total = std::accumulate(expectation.begin(), expectation.end(), 0.0);
  const double step = total / count;
  std::vector<int> picks;
  picks.reserve(count);
  double cumulative = expectation.empty() ? 0.0 : expectation[0];
  std::size_t j = 0;
  for (int k = 0; k < count; ++k) {
    const double pointer = offset + k * step;
    while (pointer >= cumulative && j + 1 < expectation.size()) cumulative += expectation[++j];
    picks.push_back(static_cast<int>(j));
  }
  return picks;
}

Gene heuristic_crossover(const Gene& better, const Gene& worse, double ratio) {
  Gene child;
  for (std::size_t d = 0; d < child.size(); ++d)
    child[d] = std::clamp(worse[d] + ratio * (better[d] - worse[d]), 0.0, 1.0);
  return child;
}

GaRun ga_minimize(const Score& score, const GaConfig& ga, const std::vector<Gene>& initial) {
  check(ga);
  const int n = ga.population;
  if (!initial.empty() && static_cast<int>(initial.size()) != n)
    throw std::invalid_argument("initial population size differs from ga.population");

  std::vector<Gene> pop(n);
  if (initial.empty()) {
    std::mt19937_64 rng(substream_seed(ga.seed, 0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& g : pop)
      for (auto& v : g) v = unit(rng);
  } else {
    pop = initial;
  }

  GaRun run;
  std::vector<double> scores(n, 0.0);
  const auto evaluate_all = [&](const std::vector<Gene>& genes, std::vector<double>& out, int from) {
    parallel_for(genes.size() - from, ga.jobs, [&](std::size_t k) { out[from + k] = score(genes[from + k]); });
    run.evaluations += static_cast<long>(genes.size() - from);
  };
  evaluate_all(pop, scores, 0);
  double best_score = std::numeric_limits<double>::infinity();

  for (int gen = 0;; ++gen) {
    // Archive: keep the dominant individual seen so far.
    for (int i = 0; i < n; ++i) {
      if (scores[i] < best_score) {
        best_score = scores[i];
        run.best = pop[i];
      }
    }
    run.trace.push_back(summarize(scores, best_score));
    run.generations = gen + 1;
    if (stalled(run.trace, ga)) {
      run.termination = Termination::stall;
      break;
    }
    if (gen + 1 == ga.max_generations) break;

    // Breed the next generation from one seeded stream per generation.
    std::mt19937_64 rng(substream_seed(ga.seed, static_cast<std::uint64_t>(gen) + 1));
    const auto order = ascending_order(scores);
    const auto expectation = rank_expectation(scores, ga.selection_pressure);
    const int children = n - ga.elite;
    const int crossed = static_cast<int>(std::lround(ga.crossover_fraction * children));
    const int mutated = children - crossed;
    const int parents_needed = 2 * crossed + mutated;
    std::vector<int> parents;
    if (parents_needed > 0) {
      std::uniform_real_distribution<double> first(0.0, static_cast<double>(n) / parents_needed);
      parents = stochastic_uniform(expectation, parents_needed, first(rng));
      std::shuffle(parents.begin(), parents.end(), rng);
    }

    const double progress = ga.max_generations > 1 ? static_cast<double>(gen) / (ga.max_generations - 1) : 1.0;
    const double sigma = ga.mutation_start + (ga.mutation_end - ga.mutation_start) * progress;
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<Gene> next(n);
    std::vector<double> next_scores(n, 0.0);
    int slot = 0;
    for (int e = 0; e < ga.elite; ++e, ++slot) {
      next[slot] = pop[order[e]];
      next_scores[slot] = scores[order[e]];
    }
    for (int c = 0; c < crossed; ++c, ++slot) {
      const int a = parents[2 * c];
      const int b = parents[2 * c + 1];
      const bool a_better = scores[a] <= scores[b];
      next[slot] = heuristic_crossover(pop[a_better ? a : b], pop[a_better ? b : a], ga.ratio);
    }
    for (int m = 0; m < mutated; ++m, ++slot) {
      Gene g = pop[parents[2 * crossed + m]];
      for (auto& v : g) v = std::clamp(v + sigma * noise(rng), 0.0, 1.0);
      next[slot] = g;
    }
    evaluate_all(next, next_scores, ga.elite);

    if (ga.replacement == Replacement::merge) {
      // Offspring displace the least fit: keep the best n of parents and
      // offspring. Elites are already among the parents.
      std::vector<Gene> all = std::move(pop);
      std::vector<double> all_scores = std::move(scores);
      all.insert(all.end(), next.begin() + ga.elite, next.end());
      all_scores.insert(all_scores.end(), next_scores.begin() + ga.elite, next_scores.end());
      const auto keep = ascending_order(all_scores);
      pop.assign(n, Gene{});
      scores.assign(n, 0.0);
      for (int k = 0; k < n; ++k) {
        pop[k] = all[keep[k]];
        scores[k] = all_scores[keep[k]];
      }
    } else {
      pop = std::move(next);
      scores = std::move(next_scores);
    }
  }
  run.best_score = best_score;
  return run;
}

OptimizationResult ga_optimize(const ScenarioConfig& base, const GaConfig& ga,
                               const objective::FitnessWeights& weights) {
  const auto start = Clock::now();
  const objective::DecisionBox box(base);
  const Score score = [&](const Gene& g) { return objective::fitness_at(base, box.decode(g), weights).score; };
  const auto run = ga_minimize(score, ga);
  auto out = finish(base, box, run.best, run.best_score, weights);
  out.generations = run.generations;
  out.evaluations = run.evaluations;
  out.termination = run.termination;
  out.trace = run.trace;
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

namespace {

OptimizationResult search(const ScenarioConfig& base, const std::vector<Gene>& genes,
                          const objective::FitnessWeights& weights, int jobs) {
  const auto start = Clock::now();
  const objective::DecisionBox box(base);
  std::vector<objective::FitnessResult> results(genes.size());
  parallel_for(genes.size(), jobs,
               [&](std::size_t i) { results[i] = objective::fitness_at(base, box.decode(genes[i]), weights); });

  // Best feasible by objective; otherwise best by fitness. Ties keep the
  // first point in grid order.
  std::size_t best = genes.size();
  for (std::size_t i = 0; i < genes.size(); ++i) {
    const auto& e = results[i].evaluation;
    if (!e || !e->feasibility.feasible) continue;
    if (best == genes.size() || e->objective < results[best].evaluation->objective) best = i;
  }
  if (best == genes.size()) {
    best = 0;
    for (std::size_t i = 1; i < genes.size(); ++i)
      if (results[i].score < results[best].score) best = i;
  }
  OptimizationResult out;
  out.best_gene = genes[best];
  out.best = box.decode(genes[best]);
  out.best_fitness = results[best].score;
  out.evaluation = results[best].evaluation;
  out.objective = out.evaluation ? out.evaluation->objective : std::numeric_limits<double>::quiet_NaN();
  out.feasible = out.evaluation && out.evaluation->feasibility.feasible;
  out.evaluations = static_cast<long>(genes.size());
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

std::vector<double> axis(double lo, double hi, int points) {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = points == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (points - 1);
  return v;
}

std::vector<Gene> cartesian(const std::vector<double>& a, const std::vector<double>& b,
                            const std::vector<double>& c) {
  std::vector<Gene> genes;
  genes.reserve(a.size() * b.size() * c.size());
  for (double x : a)
    for (double y : b)
      for (double z : c) genes.push_back({x, y, z});
  return genes;
}

}  // namespace

OptimizationResult grid_search(const ScenarioConfig& base, const GridSteps& steps,
                               const objective::FitnessWeights& weights, int jobs) {
  if (steps.power < 2 || steps.lambda_b < 2 || steps.split < 2)
    throw std::invalid_argument("grid steps must be >= 2 per axis");
  return search(base,
                cartesian(axis(0, 1, steps.power), axis(0, 1, steps.lambda_b), axis(0, 1, steps.split)),
                weights, jobs);
}

OptimizationResult refine_around(const ScenarioConfig& base, const Gene& center, const GridSteps& steps,
                                 int points, double cells, const objective::FitnessWeights& weights,
                                 int jobs) {
  const std::array<int, 3> n = {steps.power, steps.lambda_b, steps.split};
  std::array<std::vector<double>, 3> axes;
  for (int d = 0; d < 3; ++d) {
    const double width = cells / (n[d] - 1);
    axes[d] = axis(std::max(0.0, center[d] - width), std::min(1.0, center[d] + width), points);
  }
  return search(base, cartesian(axes[0], axes[1], axes[2]), weights, jobs);
}

ComplexityProbe complexity_probe(const ScenarioConfig& base, const GaConfig& ga,
                                 const objective::FitnessWeights& weights) {
  const auto start = Clock::now();
  const auto r = ga_optimize(base, ga, weights);
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  ComplexityProbe p;
  p.evaluations = r.evaluations;
  p.bound = static_cast<long>(ga.population) * ga.max_generations;
  p.seconds_per_evaluation = r.evaluations > 0 ? seconds / r.evaluations : 0.0;
  p.generations = r.generations;
  p.termination = r.termination;
  return p;
}

}  // namespace swipt::solver
