#include "conbqa/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>

#include <json.hpp>

#include "conbqa/errors.hpp"
#include "conbqa/qubo.hpp"
#include "conbqa/regression.hpp"

namespace conbqa {

void RunConfig::validate(std::size_t dim) const {
  if (dim == 0) throw InvalidParameter("RunConfig: objective dimension must be positive");
  if (num_bits == 0) throw InvalidParameter("RunConfig: num_bits must be at least 1");
  if (subspace_dim == 0 || subspace_dim > dim) {
    throw InvalidParameter("RunConfig: subspace_dim must be in [1, " + std::to_string(dim) + "]");
  }
  if (coverage_n < 2) throw InvalidParameter("RunConfig: coverage_n must be at least 2");
  if (num_initial == 0) throw InvalidParameter("RunConfig: num_initial must be at least 1");
  if (decode_attempts == 0) throw InvalidParameter("RunConfig: decode_attempts must be at least 1");
  if (solver.greedy_restarts == 0) throw InvalidParameter("RunConfig: greedy restarts must be at least 1");
  if (solver.kind == SolverKind::Exhaustive && num_bits > kMaxExhaustiveVars) {
    throw InvalidParameter("RunConfig: exhaustive solver supports at most " +
                           std::to_string(kMaxExhaustiveVars) + " bits");
  }
  if (solver.kind == SolverKind::External && solver.external.command.empty()) {
    throw InvalidParameter("RunConfig: external solver needs a command");
  }
  solver.sa.validate();
}

ClassCounts& ClassCounts::operator+=(const ClassCounts& o) {
  empty += o.empty;
  admissible += o.admissible;
  decodable += o.decodable;
  return *this;
}

ClassFractions ClassCounts::fractions() const {
  const std::size_t n = total();
  if (n == 0) throw StatisticsError("class statistics need at least one classified iteration");
  const double t = static_cast<double>(n);
  return {static_cast<double>(empty) / t, static_cast<double>(admissible) / t,
          static_cast<double>(decodable) / t};
}

double RunRecord::final_regret() const {
  return iterations.empty() ? initial_regret : iterations.back().regret;
}

double RunRecord::regret_at(std::size_t iteration) const {
  if (iteration == 0 || iterations.empty()) return initial_regret;
  return iterations[std::min(iteration, iterations.size()) - 1].regret;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson config_json(const RunConfig& c) {
  ojson j;
  j["objective"] = c.objective;
  j["num_bits"] = c.num_bits;
  j["subspace_dim"] = c.subspace_dim;
  j["coverage_n"] = c.coverage_n;
  j["num_initial"] = c.num_initial;
  j["num_iterations"] = c.num_iterations;
  j["decode_attempts"] = c.decode_attempts;
  ojson s;
  s["kind"] = std::string(to_string(c.solver.kind));
  s["num_reads"] = c.solver.sa.num_reads;
  s["sweeps_per_read"] = c.solver.sa.sweeps_per_read;
  s["beta_hot"] = c.solver.sa.beta_hot ? ojson(*c.solver.sa.beta_hot) : ojson(nullptr);
  s["beta_cold"] = c.solver.sa.beta_cold ? ojson(*c.solver.sa.beta_cold) : ojson(nullptr);
  s["greedy_restarts"] = c.solver.greedy_restarts;
  s["external_command"] = c.solver.external.command;
  j["solver"] = std::move(s);
  j["seed"] = c.seed;
  return j;
}

std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Evaluates f and turns exceptions and non-finite values into a message.
std::optional<double> try_evaluate(const Objective& f, std::span<const double> x, std::string& error) {
  try {
    const double y = f.evaluate(x);
    if (!std::isfinite(y)) {
      error = "objective '" + f.name + "' returned a non-finite value";
      return std::nullopt;
    }
    return y;
  } catch (const std::exception& e) {
    error = "objective '" + f.name + "' failed: " + e.what();
    return std::nullopt;
  }
}

std::vector<double> uniform_point(Rng& rng, std::size_t dim) {
  std::vector<double> x(dim);
  for (auto& v : x) v = rng.uniform();
  return x;
}

RunRecord start_record(RunKind kind, const RunConfig& config, const Objective& objective) {
  config.validate(objective.dim);
  RunRecord rec;
  rec.kind = kind;
  rec.config = config;
  rec.config.objective = objective.name;
  rec.objective_name = objective.name;
  rec.dim = objective.dim;
  rec.optimum_value = objective.optimum_value;
  return rec;
}

// Returns false if the run aborted during initialization.
bool initialize(RunRecord& rec, const Objective& objective, Rng& rng) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rec.config.num_initial; ++i) {
    auto x = uniform_point(rng, rec.dim);
    const auto y = try_evaluate(objective, x, rec.error);
    if (!y) {
      rec.aborted = true;
      return false;
    }
    best = std::max(best, *y);
    rec.initial_xs.push_back(std::move(x));
    rec.initial_ys.push_back(*y);
  }
  rec.initial_best = best;
  rec.initial_regret = rec.optimum_value - best;
  return true;
}

}  // namespace

std::string RunRecord::to_json() const {
  ojson doc;
  doc["kind"] = kind == RunKind::Conbqa ? "conbqa" : "random";
  doc["config"] = config_json(config);
  ojson obj;
  obj["name"] = objective_name;
  obj["dim"] = dim;
  obj["optimum_value"] = optimum_value;
  doc["objective"] = std::move(obj);
  doc["codebook"] = codebook ? ojson::parse(codebook->to_json()) : ojson(nullptr);
  ojson init;
  init["xs"] = initial_xs;
  init["ys"] = initial_ys;
  init["best"] = initial_best;
  init["regret"] = initial_regret;
  doc["initial"] = std::move(init);
  auto its = ojson::array();
  for (const auto& it : iterations) {
    ojson j;
    j["index"] = it.index;
    j["z_star"] = it.z_star.to_string();
    j["class"] = it.solution_class ? ojson(std::string(to_string(*it.solution_class))) : ojson(nullptr);
    j["x_star"] = it.x_star;
    j["y_star"] = it.y_star;
    j["qubo_energy"] = it.qubo_energy;
    j["best_so_far"] = it.best_so_far;
    j["regret"] = it.regret;
    its.push_back(std::move(j));
  }
  doc["iterations"] = std::move(its);
  const auto counts = class_counts(*this);
  if (counts.total() > 0) {
    const auto f = counts.fractions();
    ojson cf;
    cf["empty"] = f.empty;
    cf["admissible"] = f.admissible;
    cf["decodable"] = f.decodable;
    doc["class_fractions"] = std::move(cf);
  } else {
    doc["class_fractions"] = nullptr;
  }
  doc["aborted"] = aborted;
  doc["error"] = error;
  return doc.dump(1);
}

std::string RunRecord::to_csv() const {
  std::string out = "index,class,y_star,best_so_far,regret\n";
  for (const auto& it : iterations) {
    out += std::to_string(it.index);
    out += ',';
    out += it.solution_class ? std::string(to_string(*it.solution_class)) : std::string("random");
    out += ',' + fmt_real(it.y_star) + ',' + fmt_real(it.best_so_far) + ',' + fmt_real(it.regret) + '\n';
  }
  return out;
}

RunRecord run(const RunConfig& config, const Objective& objective) {
  RunRecord rec = start_record(RunKind::Conbqa, config, objective);
  const Rng master(config.seed);
  Rng init_rng = master.derive("initial");
  Rng codebook_rng = master.derive("codebook");

  rec.codebook = generate_codebook(codebook_rng, rec.dim, config.subspace_dim, config.num_bits, config.coverage_n);
  const Codebook& codebook = *rec.codebook;
  if (!initialize(rec, objective, init_rng)) return rec;

  std::vector<BitVector> zs;
  std::vector<double> ys = rec.initial_ys;
  for (const auto& x : rec.initial_xs) zs.push_back(encode(codebook, x));
  double best = rec.initial_best;

  for (std::size_t t = 1; t <= config.num_iterations; ++t) {
    const auto targets = minmax_normalize(ys);
    const Weights weights = fit_nnls(zs, targets);
    const Qubo qubo = build_qubo(weights, codebook);

    Rng solver_rng = master.derive("solver", t);
    SolveResult solved;
    try {
      solved = solve(qubo, config.solver, solver_rng);
    } catch (const std::exception& e) {
      rec.aborted = true;
      rec.error = std::string("solver failed: ") + e.what();
      return rec;
    }

    IterationRecord it;
    it.index = t;
    it.z_star = solved.best_z;
    it.qubo_energy = solved.best_energy;
    it.solution_class = classify(codebook, it.z_star);
    Rng decode_rng = master.derive("decoder", t);
    it.x_star = decode(codebook, it.z_star, decode_rng, config.decode_attempts);

    const auto y = try_evaluate(objective, it.x_star, rec.error);
    if (!y) {
      rec.aborted = true;
      return rec;
    }
    it.y_star = *y;
    best = std::max(best, *y);
    it.best_so_far = best;
    it.regret = rec.optimum_value - best;

    zs.push_back(encode(codebook, it.x_star));
    ys.push_back(*y);
    rec.iterations.push_back(std::move(it));
  }
  return rec;
}

RunRecord run(const RunConfig& config) { return run(config, registry_lookup(config.objective)); }

RunRecord run_random_baseline(const RunConfig& config, const Objective& objective) {
  RunRecord rec = start_record(RunKind::RandomSearch, config, objective);
  const Rng master(config.seed);
  Rng init_rng = master.derive("initial");
  if (!initialize(rec, objective, init_rng)) return rec;

  Rng search_rng = master.derive("random-search");
  double best = rec.initial_best;
  for (std::size_t t = 1; t <= config.num_iterations; ++t) {
    IterationRecord it;
    it.index = t;
    it.x_star = uniform_point(search_rng, rec.dim);
    const auto y = try_evaluate(objective, it.x_star, rec.error);
    if (!y) {
      rec.aborted = true;
      return rec;
    }
    it.y_star = *y;
    best = std::max(best, *y);
    it.best_so_far = best;
    it.regret = rec.optimum_value - best;
    rec.iterations.push_back(std::move(it));
  }
  return rec;
}

RunRecord run_random_baseline(const RunConfig& config) {
  return run_random_baseline(config, registry_lookup(config.objective));
}

ClassCounts class_counts(const RunRecord& record) {
  ClassCounts c;
  for (const auto& it : record.iterations) {
    if (!it.solution_class) continue;
    switch (*it.solution_class) {
      case SolutionClass::Empty:
        ++c.empty;
        break;
      case SolutionClass::Admissible:
        ++c.admissible;
        break;
      case SolutionClass::Decodable:
        ++c.decodable;
        break;
    }
  }
  return c;
}

ClassFractions class_statistics(const RunRecord& record) { return class_counts(record).fractions(); }

}  // namespace conbqa
