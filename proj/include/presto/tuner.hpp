#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace presto {

struct Box {
  double lo = 0.0;
  double hi = 1.0;
};

struct PsoConfig {
  int swarm_size = 20;
  double W = 0.72;
  double C1 = 1.49;
  double C2 = 1.49;
  std::vector<Box> bounds;
  /// Per-dimension speed cap; empty means 0.2 (hi - lo).
  std::vector<double> V_max;
  int max_generations = 100;
  std::uint64_t seed = 1;

  std::size_t dims() const { return bounds.size(); }
  double vmax(std::size_t i) const;
  void validate() const;
};

struct Particle {
  std::vector<double> X;
  std::vector<double> V;
  std::vector<double> P_best;
  double P_best_cost = 0.0;
};

/// Uniform [0, 1) draws for one particle-generation; r1 and r2 hold one
/// value per dimension.
struct AttractionDraws {
  std::vector<double> r1;
  std::vector<double> r2;
};

/// Independent generator stream keyed by (seed, generation, particle).
std::mt19937_64 particle_stream(std::uint64_t seed, std::uint64_t generation, std::uint64_t particle);
AttractionDraws draw_attraction(std::mt19937_64& rng, std::size_t dims);

/// v' = W v + r1 C1 (P - X) + r2 C2 (G - X), clamped to [-V_max, V_max].
std::vector<double> velocity_update(const Particle& p, std::span<const double> G, const PsoConfig& cfg,
                                    const AttractionDraws& draws);

/// X + v clamped to the box; a component that hits a wall has its velocity
/// zeroed in `v_new`.
std::vector<double> position_update(const Particle& p, std::vector<double>& v_new, const PsoConfig& cfg);

using Fitness = std::function<double(std::span<const double>)>;

enum class Execution { serial, parallel };

/// Evaluates every position; non-finite costs become +inf. The parallel
/// variant writes results by index, so both variants return identical
/// vectors for a pure fitness.
std::vector<double> evaluate_swarm(const std::vector<std::vector<double>>& positions, const Fitness& fitness,
                                   Execution exec = Execution::parallel);

struct PsoResult {
  std::vector<double> best_position;
  double best_cost = 0.0;
  /// Global best cost after each generation; nonincreasing.
  std::vector<double> history;
  std::vector<Particle> swarm;
};

PsoResult pso_run(const Fitness& fitness, const PsoConfig& cfg, Execution exec = Execution::parallel);

}  // namespace presto
