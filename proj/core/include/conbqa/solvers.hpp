#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conbqa/coding.hpp"
#include "conbqa/qubo.hpp"
#include "conbqa/rng.hpp"

namespace conbqa {

struct Sample {
  BitVector z;
  double energy = 0.0;
};

struct SolveResult {
  BitVector best_z;
  double best_energy = 0.0;
  /// Sorted by energy, ties by bit string.
  std::vector<Sample> samples;
  std::string solver_name;
  std::chrono::duration<double> elapsed{0.0};
};

/// Energies closer than this are treated as equal, and the lexicographically
/// smaller bit string wins.
inline constexpr double kEnergyTieTolerance = 1e-9;

/// Strict order used by every solver to pick a winner.
bool better_solution(double energy_a, const BitVector& a, double energy_b, const BitVector& b);

inline constexpr std::size_t kMaxExhaustiveVars = 24;

/// Global minimum over all 2^m codes.
SolveResult solve_exhaustive(const Qubo& qubo);

inline constexpr std::size_t kDefaultGreedyRestarts = 64;

/// Best of `restarts` steepest single-flip descents from random codes.
SolveResult solve_greedy(const Qubo& qubo, Rng& rng, std::size_t restarts = kDefaultGreedyRestarts);

struct SaParams {
  std::size_t num_reads = 64;
  std::size_t sweeps_per_read = 1000;
  /// Inverse temperatures at the first and last sweep. Unset means derived
  /// from the coefficients, see default_beta_range().
  std::optional<double> beta_hot;
  std::optional<double> beta_cold;

  void validate() const;
};

/// (ln 2 / dE_max, ln 1000 / dE_min) where dE_max bounds the largest
/// single-flip energy change and dE_min is the smallest nonzero coefficient
/// magnitude.
std::pair<double, double> default_beta_range(const Qubo& qubo);

/// Metropolis annealing with a geometric beta schedule and sequential sweeps.
/// Read r uses its own substream, so the result depends only on the seed
/// drawn from `rng` and on the parameters.
SolveResult solve_sa(const Qubo& qubo, Rng& rng, const SaParams& params = {});

struct ExternalSolverConfig {
  /// Shell command run with `working_dir` as the current directory. It reads
  /// qubo.json and writes solution.json there.
  std::string command;
  std::filesystem::path working_dir;
};

inline constexpr std::string_view kExternalRequestFile = "qubo.json";
inline constexpr std::string_view kExternalResponseFile = "solution.json";

SolveResult solve_external(const Qubo& qubo, const ExternalSolverConfig& config);

/// Response document {"solutions": [{"bits": [...], "energy": e}, ...]}.
std::string solution_json(const SolveResult& result);

/// Parses a response document and re-scores it against `qubo`. Reported
/// energies are ignored.
SolveResult solution_from_json(const Qubo& qubo, std::string_view text);

enum class SolverKind { SimulatedAnnealing, Greedy, Exhaustive, External };

std::string_view to_string(SolverKind kind);
SolverKind solver_kind_from_string(std::string_view name);

struct SolverConfig {
  SolverKind kind = SolverKind::SimulatedAnnealing;
  SaParams sa;
  std::size_t greedy_restarts = kDefaultGreedyRestarts;
  ExternalSolverConfig external;
};

SolveResult solve(const Qubo& qubo, const SolverConfig& config, Rng& rng);

}  // namespace conbqa
