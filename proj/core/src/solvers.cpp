#include "conbqa/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "conbqa/errors.hpp"

namespace conbqa {

bool better_solution(double energy_a, const BitVector& a, double energy_b, const BitVector& b) {
  if (energy_a < energy_b - kEnergyTieTolerance) return true;
  if (energy_b < energy_a - kEnergyTieTolerance) return false;
  return a < b;
}

namespace {

using Clock = std::chrono::steady_clock;

// Adjacency form of a Qubo for incremental local fields.
struct Compiled {
  std::size_t n = 0;
  std::vector<double> h;
  std::vector<std::size_t> offsets;  // CSR row starts, size n + 1
  std::vector<std::size_t> nbr;
  std::vector<double> coupling;

  explicit Compiled(const Qubo& q) : n(q.num_vars()), h(n, 0.0), offsets(n + 1, 0) {
    for (const auto& [i, c] : q.linear()) h[i] = c;
    for (const auto& [key, c] : q.quadratic()) {
      ++offsets[key.first + 1];
      ++offsets[key.second + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    nbr.resize(offsets[n]);
    coupling.resize(offsets[n]);
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (const auto& [key, c] : q.quadratic()) {
      nbr[fill[key.first]] = key.second;
      coupling[fill[key.first]++] = c;
      nbr[fill[key.second]] = key.first;
      coupling[fill[key.second]++] = c;
    }
  }

  // field[i] = h_i + sum_j J_ij z_j; flipping i changes the energy by
  // (1 - 2 z_i) * field[i].
  void init_fields(const std::vector<std::uint8_t>& z, std::vector<double>& field) const {
    field = h;
    for (std::size_t i = 0; i < n; ++i) {
      if (!z[i]) continue;
      for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) field[nbr[e]] += coupling[e];
    }
  }

  void flip(std::size_t i, std::vector<std::uint8_t>& z, std::vector<double>& field) const {
    const double sign = z[i] ? -1.0 : 1.0;
    z[i] ^= 1;
    for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) field[nbr[e]] += sign * coupling[e];
  }
};

double flip_delta(const std::vector<std::uint8_t>& z, const std::vector<double>& field, std::size_t i) {
  return z[i] ? -field[i] : field[i];
}

std::vector<std::uint8_t> random_code(Rng& rng, std::size_t n) {
  std::vector<std::uint8_t> z(n);
  for (auto& b : z) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
  return z;
}

SolveResult finish(const Qubo& qubo, std::vector<Sample> samples, std::string name, Clock::time_point start) {
  for (auto& s : samples) s.energy = qubo.energy(s.z);
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return better_solution(a.energy, a.z, b.energy, b.z); });
  SolveResult r;
  r.best_z = samples.front().z;
  r.best_energy = samples.front().energy;
  r.samples = std::move(samples);
  r.solver_name = std::move(name);
  r.elapsed = Clock::now() - start;
  return r;
}

}  // namespace

SolveResult solve_exhaustive(const Qubo& qubo) {
  const std::size_t n = qubo.num_vars();
  if (n > kMaxExhaustiveVars) {
    throw CapacityError("solve_exhaustive: " + std::to_string(n) + " variables exceeds the limit of " +
                        std::to_string(kMaxExhaustiveVars));
  }
  const auto start = Clock::now();
  const Compiled model(qubo);
  std::vector<std::uint8_t> z(n, 0);
  std::vector<double> field;
  model.init_fields(z, field);

  BitVector best_z(n);
  double best_exact = 0.0;
  double best_running = 0.0;
  double energy = 0.0;

  // Gray-code walk: one flip per step. The running energy drifts slightly,
  // so near-ties are settled on exactly recomputed energies.
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto i = static_cast<std::size_t>(std::countr_zero(step));
    energy += flip_delta(z, field, i);
    model.flip(i, z, field);
    if (energy < best_running - 1e-7) {
      best_z = BitVector(z);
      best_exact = qubo.energy(best_z);
      best_running = energy;
    } else if (energy <= best_running + 1e-7) {
      BitVector cand(z);
      const double exact = qubo.energy(cand);
      if (better_solution(exact, cand, best_exact, best_z)) {
        best_z = std::move(cand);
        best_exact = exact;
        best_running = std::min(best_running, energy);
      }
    }
  }
  SolveResult r;
  r.best_z = std::move(best_z);
  r.best_energy = qubo.energy(r.best_z);
  r.solver_name = "exhaustive";
  r.elapsed = Clock::now() - start;
  return r;
}

SolveResult solve_greedy(const Qubo& qubo, Rng& rng, std::size_t restarts) {
  if (restarts == 0) throw InvalidParameter("solve_greedy: restarts must be at least 1");
  const auto start = Clock::now();
  const Compiled model(qubo);
  const std::size_t n = qubo.num_vars();
  const std::uint64_t base = rng.next_u64();

  std::vector<Sample> samples;
  samples.reserve(restarts);
  std::vector<double> field;
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng sub(Rng::derive_seed(base, "greedy-restart", r));
    auto z = random_code(sub, n);
    model.init_fields(z, field);
    for (;;) {
      std::size_t pick = n;
      double best_delta = -1e-12;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = flip_delta(z, field, i);
        if (d < best_delta) {
          best_delta = d;
          pick = i;
        }
      }
      if (pick == n) break;
      model.flip(pick, z, field);
    }
    samples.push_back({BitVector(std::move(z)), 0.0});
  }
  return finish(qubo, std::move(samples), "greedy", start);
}

void SaParams::validate() const {
  if (num_reads == 0) throw InvalidParameter("SaParams: num_reads must be at least 1");
  if (sweeps_per_read == 0) throw InvalidParameter("SaParams: sweeps_per_read must be at least 1");
  if (beta_hot.has_value() != beta_cold.has_value()) {
    throw InvalidParameter("SaParams: set both beta_hot and beta_cold or neither");
  }
  if (beta_hot && !(*beta_hot > 0.0 && *beta_hot < *beta_cold)) {
    throw InvalidParameter("SaParams: need 0 < beta_hot < beta_cold");
  }
}

std::pair<double, double> default_beta_range(const Qubo& qubo) {
  const std::size_t n = qubo.num_vars();
  std::vector<double> reach(n, 0.0);
  std::vector<double> smallest(n, std::numeric_limits<double>::infinity());
  auto note = [&](std::size_t i, double c) {
    const double a = std::abs(c);
    reach[i] += a;
    if (a > 0.0) smallest[i] = std::min(smallest[i], a);
  };
  for (const auto& [i, c] : qubo.linear()) note(i, c);
  for (const auto& [key, c] : qubo.quadratic()) {
    note(key.first, c);
    note(key.second, c);
  }
  double de_max = 0.0;
  double de_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    de_max = std::max(de_max, reach[i]);
    de_min = std::min(de_min, smallest[i]);
  }
  if (!(de_max > 0.0)) return {0.1, 1.0};
  return {std::log(2.0) / de_max, std::log(1000.0) / de_min};
}

SolveResult solve_sa(const Qubo& qubo, Rng& rng, const SaParams& params) {
  params.validate();
  const auto start = Clock::now();
  const Compiled model(qubo);
  const std::size_t n = qubo.num_vars();
  const std::uint64_t base = rng.next_u64();

  auto [hot, cold] = default_beta_range(qubo);
  if (params.beta_hot) {
    hot = *params.beta_hot;
    cold = *params.beta_cold;
  }
  const std::size_t sweeps = params.sweeps_per_read;
  std::vector<double> betas(sweeps);
  for (std::size_t s = 0; s < sweeps; ++s) {
    betas[s] = sweeps == 1 ? cold
                           : hot * std::pow(cold / hot, static_cast<double>(s) / static_cast<double>(sweeps - 1));
  }

  std::vector<Sample> samples;
  samples.reserve(params.num_reads);
  std::vector<double> field;
  for (std::size_t r = 0; r < params.num_reads; ++r) {
    Rng sub(Rng::derive_seed(base, "sa-read", r));
    auto z = random_code(sub, n);
    model.init_fields(z, field);
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (z[i]) energy += model.h[i] + 0.5 * (field[i] - model.h[i]);
    }
    auto best = z;
    double best_energy = energy;

    for (const double beta : betas) {
      for (std::size_t i = 0; i < n; ++i) {
        const double delta = flip_delta(z, field, i);
        if (delta > 0.0) {
          const double x = beta * delta;
          if (x > 40.0 || sub.uniform() >= std::exp(-x)) continue;
        }
        model.flip(i, z, field);
        energy += delta;
        if (energy < best_energy - 1e-12) {
          best_energy = energy;
          best = z;
        }
      }
    }
    samples.push_back({BitVector(std::move(best)), 0.0});
  }
  return finish(qubo, std::move(samples), "sa", start);
}

std::string solution_json(const SolveResult& result) {
  nlohmann::ordered_json doc;
  auto sols = nlohmann::ordered_json::array();
  auto emit = [&](const BitVector& z, double e) {
    nlohmann::ordered_json s;
    s["bits"] = std::vector<int>(z.bits().begin(), z.bits().end());
    s["energy"] = e;
    sols.push_back(std::move(s));
  };
  if (result.samples.empty()) {
    emit(result.best_z, result.best_energy);
  } else {
    for (const auto& s : result.samples) emit(s.z, s.energy);
  }
  doc["solutions"] = std::move(sols);
  return doc.dump();
}

SolveResult solution_from_json(const Qubo& qubo, std::string_view text) {
  const auto start = Clock::now();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ExternalSolverError(std::string("malformed solution document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("solutions") || !doc["solutions"].is_array()) {
    throw ExternalSolverError("solution document needs a 'solutions' array");
  }
  const auto& sols = doc["solutions"];
  if (sols.empty()) throw ExternalSolverError("solution document has no solutions");
  std::vector<Sample> samples;
  for (std::size_t k = 0; k < sols.size(); ++k) {
    const auto& s = sols[k];
    if (!s.is_object() || !s.contains("bits") || !s["bits"].is_array()) {
      throw ExternalSolverError("solution " + std::to_string(k) + " has no 'bits' array");
    }
    const auto& bits = s["bits"];
    if (bits.size() != qubo.num_vars()) {
      throw ExternalSolverError("solution " + std::to_string(k) + " has " + std::to_string(bits.size()) +
                                " bits, expected " + std::to_string(qubo.num_vars()));
    }
    std::vector<std::uint8_t> z;
    z.reserve(bits.size());
    for (const auto& b : bits) {
      if (!b.is_number_integer() || (b.get<long long>() != 0 && b.get<long long>() != 1)) {
        throw ExternalSolverError("solution " + std::to_string(k) + " has a bit that is not 0 or 1");
      }
      z.push_back(static_cast<std::uint8_t>(b.get<long long>()));
    }
    samples.push_back({BitVector(std::move(z)), 0.0});
  }
  return finish(qubo, std::move(samples), "external", start);
}

SolveResult solve_external(const Qubo& qubo, const ExternalSolverConfig& config) {
  namespace fs = std::filesystem;
  if (config.command.empty()) throw ExternalSolverError("external solver: no command configured");
  const fs::path dir = config.working_dir.empty() ? fs::current_path() : config.working_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ExternalSolverError("external solver: cannot create " + dir.string() + ": " + ec.message());

  const fs::path request = dir / kExternalRequestFile;
  const fs::path response = dir / kExternalResponseFile;
  fs::remove(response, ec);
  {
    std::ofstream out(request, std::ios::binary | std::ios::trunc);
    out << qubo.to_json();
    if (!out) throw ExternalSolverError("external solver: cannot write " + request.string());
  }

  const auto start = Clock::now();
  // Single quotes around the directory; embedded quotes are escaped.
  std::string quoted = "'";
  for (char c : dir.string()) quoted += c == '\'' ? std::string("'\\''") : std::string(1, c);
  quoted += "'";
  const std::string cmd = "cd " + quoted + " && " + config.command;
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw ExternalSolverError("external solver: command '" + config.command + "' failed with status " +
                              std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : status));
  }

  std::ifstream in(response, std::ios::binary);
  if (!in) throw ExternalSolverError("external solver: no response file " + response.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto result = solution_from_json(qubo, buf.str());
  result.elapsed = Clock::now() - start;
  return result;
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::SimulatedAnnealing:
      return "sa";
    case SolverKind::Greedy:
      return "greedy";
    case SolverKind::Exhaustive:
      return "exhaustive";
    case SolverKind::External:
      return "external";
  }
  return "unknown";
}

SolverKind solver_kind_from_string(std::string_view name) {
  if (name == "sa") return SolverKind::SimulatedAnnealing;
  if (name == "greedy") return SolverKind::Greedy;
  if (name == "exhaustive") return SolverKind::Exhaustive;
  if (name == "external") return SolverKind::External;
  throw InvalidParameter("unknown solver '" + std::string(name) + "' (expected sa, greedy, exhaustive, external)");
}

SolveResult solve(const Qubo& qubo, const SolverConfig& config, Rng& rng) {
  switch (config.kind) {
    case SolverKind::SimulatedAnnealing:
      return solve_sa(qubo, rng, config.sa);
    case SolverKind::Greedy:
      return solve_greedy(qubo, rng, config.greedy_restarts);
    case SolverKind::Exhaustive:
      return solve_exhaustive(qubo);
    case SolverKind::External:
      return solve_external(qubo, config.external);
  }
  throw InvalidParameter("solve: unknown solver kind");
}

}  // namespace conbqa
