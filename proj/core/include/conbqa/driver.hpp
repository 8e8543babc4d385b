#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conbqa/coding.hpp"
#include "conbqa/geometry.hpp"
#include "conbqa/objectives.hpp"
#include "conbqa/solvers.hpp"

namespace conbqa {

struct RunConfig {
  std::string objective;
  std::size_t num_bits = 60;
  std::size_t subspace_dim = 2;
  std::size_t coverage_n = kDefaultCoverageN;
  std::size_t num_initial = 15;
  std::size_t num_iterations = 100;
  std::size_t decode_attempts = kDefaultDecodeAttempts;
  SolverConfig solver;
  std::uint64_t seed = 0;

  void validate(std::size_t dim) const;
};

struct IterationRecord {
  std::size_t index = 0;
  /// Empty for random-search records.
  BitVector z_star;
  std::optional<SolutionClass> solution_class;
  std::vector<double> x_star;
  double y_star = 0.0;
  double qubo_energy = 0.0;
  double best_so_far = 0.0;
  double regret = 0.0;
};

struct ClassFractions {
  double empty = 0.0;
  double admissible = 0.0;
  double decodable = 0.0;
};

struct ClassCounts {
  std::size_t empty = 0;
  std::size_t admissible = 0;
  std::size_t decodable = 0;

  std::size_t total() const { return empty + admissible + decodable; }
  ClassCounts& operator+=(const ClassCounts& o);
  /// Throws StatisticsError when total() is zero.
  ClassFractions fractions() const;
};

enum class RunKind { Conbqa, RandomSearch };

struct RunRecord {
  RunKind kind = RunKind::Conbqa;
  RunConfig config;
  std::string objective_name;
  std::size_t dim = 0;
  double optimum_value = 0.0;
  std::optional<Codebook> codebook;
  std::vector<std::vector<double>> initial_xs;
  std::vector<double> initial_ys;
  double initial_best = 0.0;
  double initial_regret = 0.0;
  std::vector<IterationRecord> iterations;
  bool aborted = false;
  std::string error;

  /// Regret after the last evaluation (initial or iterated).
  double final_regret() const;
  /// Regret after `iteration` controlled steps; 0 means after initialization.
  double regret_at(std::size_t iteration) const;

  /// Full-fidelity, deterministic JSON.
  std::string to_json() const;
  /// index,class,y_star,best_so_far,regret
  std::string to_csv() const;
};

/// Initial uniform design, then encode → normalize → fit → QUBO → solve →
/// classify → decode → evaluate for each iteration.
RunRecord run(const RunConfig& config, const Objective& objective);
RunRecord run(const RunConfig& config);

/// Same bookkeeping; every candidate is uniform in [0, 1]^d.
RunRecord run_random_baseline(const RunConfig& config, const Objective& objective);
RunRecord run_random_baseline(const RunConfig& config);

ClassCounts class_counts(const RunRecord& record);
ClassFractions class_statistics(const RunRecord& record);

}  // namespace conbqa
