#include "presto/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include <fmt/format.h>

#include "presto/errors.hpp"

namespace presto {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double PsoConfig::vmax(std::size_t i) const {
  if (!V_max.empty()) return V_max.at(i);
  return 0.2 * (bounds.at(i).hi - bounds.at(i).lo);
}

void PsoConfig::validate() const {
  if (swarm_size < 2) throw DomainError("PSO swarm_size must be >= 2");
  if (bounds.empty()) throw DomainError("PSO needs at least one dimension");
  if (max_generations < 1) throw DomainError("PSO max_generations must be >= 1");
  if (!(C1 > 0.0 && C2 > 0.0)) throw DomainError("PSO learning coefficients C1, C2 must be > 0");
  if (!V_max.empty() && V_max.size() != bounds.size()) throw DomainError("PSO V_max must have one entry per dimension");
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (!(bounds[i].lo < bounds[i].hi)) throw DomainError(fmt::format("PSO bounds for dimension {} need lo < hi", i));
    if (!(vmax(i) > 0.0)) throw DomainError(fmt::format("PSO V_max for dimension {} must be > 0", i));
  }
}

std::mt19937_64 particle_stream(std::uint64_t seed, std::uint64_t generation, std::uint64_t particle) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ generation);
  h = splitmix64(h ^ particle);
  return std::mt19937_64(h);
}

AttractionDraws draw_attraction(std::mt19937_64& rng, std::size_t dims) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AttractionDraws d;
  d.r1.resize(dims);
  d.r2.resize(dims);
  for (std::size_t i = 0; i < dims; ++i) {
    d.r1[i] = unit(rng);
    d.r2[i] = unit(rng);
  }
  return d;
}

std::vector<double> velocity_update(const Particle& p, std::span<const double> G, const PsoConfig& cfg,
                                    const AttractionDraws& draws) {
  const std::size_t n = p.X.size();
  if (p.V.size() != n || p.P_best.size() != n || G.size() != n || draws.r1.size() != n || draws.r2.size() != n)
    throw DomainError("velocity_update: dimension mismatch");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double raw = cfg.W * p.V[i] + draws.r1[i] * cfg.C1 * (p.P_best[i] - p.X[i]) +
                       draws.r2[i] * cfg.C2 * (G[i] - p.X[i]);
    const double cap = cfg.vmax(i);
    v[i] = std::clamp(raw, -cap, cap);
  }
  return v;
}

std::vector<double> position_update(const Particle& p, std::vector<double>& v_new, const PsoConfig& cfg) {
  const std::size_t n = p.X.size();
  if (v_new.size() != n || cfg.bounds.size() != n) throw DomainError("position_update: dimension mismatch");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double moved = p.X[i] + v_new[i];
    const auto& b = cfg.bounds[i];
    if (moved > b.hi || moved < b.lo) {
      x[i] = std::clamp(moved, b.lo, b.hi);
      v_new[i] = 0.0;
    } else {
      x[i] = moved;
    }
  }
  return x;
}

std::vector<double> evaluate_swarm(const std::vector<std::vector<double>>& positions, const Fitness& fitness,
                                   Execution exec) {
  const auto n = static_cast<std::ptrdiff_t>(positions.size());
  std::vector<double> costs(positions.size(), kInf);
  std::vector<std::exception_ptr> errors(positions.size());

  auto eval = [&](std::ptrdiff_t i) {
    try {
      const double c = fitness(positions[static_cast<std::size_t>(i)]);
      costs[static_cast<std::size_t>(i)] = std::isfinite(c) ? c : kInf;
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };

  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) eval(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) eval(i);
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return costs;
}

PsoResult pso_run(const Fitness& fitness, const PsoConfig& cfg, Execution exec) {
  cfg.validate();
  const std::size_t dims = cfg.dims();
  const auto swarm_size = static_cast<std::size_t>(cfg.swarm_size);

  PsoResult res;
  res.swarm.resize(swarm_size);
  for (std::size_t i = 0; i < swarm_size; ++i) {
    auto rng = particle_stream(cfg.seed, 0, i);
    Particle& p = res.swarm[i];
    p.X.resize(dims);
    p.V.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      p.X[d] = std::uniform_real_distribution<double>(cfg.bounds[d].lo, cfg.bounds[d].hi)(rng);
      p.V[d] = std::uniform_real_distribution<double>(-cfg.vmax(d), cfg.vmax(d))(rng);
    }
  }

  std::vector<std::vector<double>> positions(swarm_size);
  res.best_cost = kInf;
  for (int gen = 0; gen < cfg.max_generations; ++gen) {
    if (gen > 0) {
      for (std::size_t i = 0; i < swarm_size; ++i) {
        auto rng = particle_stream(cfg.seed, static_cast<std::uint64_t>(gen), i);
        Particle& p = res.swarm[i];
        std::vector<double> v = velocity_update(p, res.best_position, cfg, draw_attraction(rng, dims));
        p.X = position_update(p, v, cfg);
        p.V = std::move(v);
      }
    }
    for (std::size_t i = 0; i < swarm_size; ++i) positions[i] = res.swarm[i].X;
    const std::vector<double> costs = evaluate_swarm(positions, fitness, exec);

    // Reduce in particle-index order; ties keep the earlier particle.
    for (std::size_t i = 0; i < swarm_size; ++i) {
      Particle& p = res.swarm[i];
      if (gen == 0 || costs[i] < p.P_best_cost) {
        p.P_best = p.X;
        p.P_best_cost = costs[i];
      }
      if (res.best_position.empty() || p.P_best_cost < res.best_cost) {
        res.best_cost = p.P_best_cost;
        res.best_position = p.P_best;
      }
    }
    res.history.push_back(res.best_cost);
  }
  return res;
}

}  // namespace presto
