#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "conbqa/analysis.hpp"
#include "conbqa/driver.hpp"
#include "conbqa/errors.hpp"
#include "conbqa/objectives.hpp"
#include "conbqa/qubo.hpp"
#include "conbqa/solvers.hpp"

namespace conbqa::cli {

namespace fs = std::filesystem;

FlatConfig parse_flat_config(std::string_view text) {
  FlatConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return std::string_view{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + ": empty key");
    if (!cfg.emplace(std::string(key), std::string(value)).second) {
      throw ParseError("config line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

std::string serialize_flat_config(const FlatConfig& config) {
  std::string out;
  for (const auto& [k, v] : config) out += k + "=" + v + "\n";
  return out;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fmt_real(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct SolverOptions {
  std::string solver = "sa";
  std::size_t reads = 64;
  std::size_t sweeps = 1000;
  std::optional<double> beta_hot;
  std::optional<double> beta_cold;
  std::size_t restarts = kDefaultGreedyRestarts;
  std::string external_cmd;
  std::string external_dir;

  void add_to(CLI::App& app, bool allow_external) {
    auto* s = app.add_option("--solver", solver, "QUBO solver")->capture_default_str();
    if (allow_external) {
      s->check(CLI::IsMember({"sa", "greedy", "exhaustive", "external"}));
    } else {
      s->check(CLI::IsMember({"sa", "greedy", "exhaustive"}));
    }
    app.add_option("--reads", reads, "annealing reads")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--sweeps", sweeps, "sweeps per read")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--beta-hot", beta_hot, "initial inverse temperature (default: from coefficients)");
    app.add_option("--beta-cold", beta_cold, "final inverse temperature (default: from coefficients)");
    app.add_option("--restarts", restarts, "greedy restarts")->capture_default_str()->check(CLI::PositiveNumber);
    if (allow_external) {
      app.add_option("--external-cmd", external_cmd, "command run by the external solver adapter");
      app.add_option("--external-dir", external_dir, "working directory for the external adapter");
    }
  }

  SolverConfig build() const {
    SolverConfig c;
    c.kind = solver_kind_from_string(solver);
    c.sa.num_reads = reads;
    c.sa.sweeps_per_read = sweeps;
    c.sa.beta_hot = beta_hot;
    c.sa.beta_cold = beta_cold;
    c.sa.validate();
    c.greedy_restarts = restarts;
    c.external.command = external_cmd;
    c.external.working_dir = external_dir;
    if (c.kind == SolverKind::External && external_cmd.empty()) {
      throw InvalidParameter("--solver external requires --external-cmd");
    }
    return c;
  }

  void store(FlatConfig& cfg) const {
    cfg["solver"] = solver;
    cfg["reads"] = std::to_string(reads);
    cfg["sweeps"] = std::to_string(sweeps);
    if (beta_hot) cfg["beta-hot"] = fmt_real(*beta_hot);
    if (beta_cold) cfg["beta-cold"] = fmt_real(*beta_cold);
    cfg["restarts"] = std::to_string(restarts);
    if (!external_cmd.empty()) cfg["external-cmd"] = external_cmd;
    if (!external_dir.empty()) cfg["external-dir"] = external_dir;
  }
};

struct RunOptions {
  std::string objective;
  std::size_t m = 0;
  std::size_t ds = 0;
  std::size_t iters = 0;
  std::size_t init = 15;
  std::size_t coverage = kDefaultCoverageN;
  std::size_t decode_attempts = kDefaultDecodeAttempts;
  SolverOptions solver;
  std::optional<std::uint64_t> seed;
  std::size_t repeats = 1;
  std::size_t jobs = 1;
  std::string out = ".";
  bool baseline = false;

  FlatConfig to_config() const {
    FlatConfig cfg;
    cfg["objective"] = objective;
    cfg["m"] = std::to_string(m);
    cfg["ds"] = std::to_string(ds);
    cfg["iters"] = std::to_string(iters);
    cfg["init"] = std::to_string(init);
    cfg["coverage"] = std::to_string(coverage);
    cfg["decode-attempts"] = std::to_string(decode_attempts);
    solver.store(cfg);
    if (seed) cfg["seed"] = std::to_string(*seed);
    cfg["repeats"] = std::to_string(repeats);
    cfg["jobs"] = std::to_string(jobs);
    cfg["out"] = out;
    cfg["baseline"] = baseline ? "true" : "false";
    return cfg;
  }
};

struct ResolutionOptions {
  std::size_t d = 0;
  std::vector<std::size_t> m_list;
  std::size_t ds = 2;
  std::size_t coverage = kDefaultCoverageN;
  std::size_t probes = kDefaultProbePoints;
  std::size_t seeds = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct SolveOptions {
  std::string qubo;
  SolverOptions solver;
  std::optional<std::uint64_t> seed;
  std::string out = std::string(kExternalResponseFile);
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Splits the raw arguments of a subcommand into its --config file (if any)
// and the remaining tokens, then prepends config entries that the command
// line does not override.
std::vector<std::string> apply_config_overlay(const CLI::App& sub, std::vector<std::string> args) {
  std::optional<std::string> config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      config_path = args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config_path = a.substr(9);
    } else {
      rest.push_back(a);
    }
  }
  if (!config_path) return rest;

  const FlatConfig cfg = parse_flat_config(read_file(*config_path));
  std::set<std::string> given;
  for (const auto& a : rest) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::vector<std::string> merged;
  for (const auto& [key, value] : cfg) {
    if (sub.get_option_no_throw("--" + key) == nullptr) {
      throw UsageError("config file " + *config_path + ": unknown key '" + key + "'");
    }
    if (given.count(key)) continue;
    merged.push_back("--" + key + "=" + value);
  }
  merged.insert(merged.end(), rest.begin(), rest.end());
  return merged;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void print_summary(std::ostream& out, const std::string& label, const std::vector<RunRecord>& recs) {
  std::vector<double> finals;
  for (const auto& r : recs) finals.push_back(r.final_regret());
  const auto [lo, hi] = std::minmax_element(finals.begin(), finals.end());
  out << label << " final regret: median " << fmt_real(median(finals)) << ", min " << fmt_real(*lo) << ", max "
      << fmt_real(*hi) << " over " << recs.size() << " repeat(s)\n";
}

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  // Everything is validated before the first file is touched.
  const Objective objective = registry_lookup(o.objective);
  RunConfig base;
  base.objective = objective.name;
  base.num_bits = o.m;
  base.subspace_dim = o.ds;
  base.coverage_n = o.coverage;
  base.num_initial = o.init;
  base.num_iterations = o.iters;
  base.decode_attempts = o.decode_attempts;
  base.solver = o.solver.build();
  if (o.repeats == 0) throw InvalidParameter("--repeats must be at least 1");
  if (o.jobs == 0) throw InvalidParameter("--jobs must be at least 1");
  base.validate(objective.dim);

  RunOptions effective = o;
  if (!effective.seed) {
    effective.seed = fresh_seed();
    out << "seed: " << *effective.seed << "\n";
  }
  const fs::path out_dir(o.out);
  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "config.txt", serialize_flat_config(effective.to_config()));

  std::vector<RunRecord> conbqa_recs(o.repeats);
  std::vector<RunRecord> random_recs(o.baseline ? o.repeats : 0);
  std::vector<std::string> failures(o.repeats);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < o.repeats;) {
      RunConfig cfg = base;
      cfg.seed = *effective.seed + k;
      try {
        const std::string stem = objective.name + "_seed" + std::to_string(cfg.seed);
        conbqa_recs[k] = run(cfg, objective);
        write_file_atomic(out_dir / ("conbqa_" + stem + ".json"), conbqa_recs[k].to_json());
        write_file_atomic(out_dir / ("conbqa_" + stem + ".csv"), conbqa_recs[k].to_csv());
        if (o.baseline) {
          random_recs[k] = run_random_baseline(cfg, objective);
          write_file_atomic(out_dir / ("random_" + stem + ".json"), random_recs[k].to_json());
          write_file_atomic(out_dir / ("random_" + stem + ".csv"), random_recs[k].to_csv());
        }
      } catch (const std::exception& e) {
        failures[k] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < std::min(o.jobs, o.repeats); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int status = kExitOk;
  for (std::size_t k = 0; k < o.repeats; ++k) {
    if (!failures[k].empty()) {
      err << "repeat " << k << ": " << failures[k] << "\n";
      status = kExitRuntime;
    }
    for (const auto* rec : {&conbqa_recs[k], o.baseline ? &random_recs[k] : nullptr}) {
      if (rec && rec->aborted) {
        err << "repeat " << k << " aborted: " << rec->error << "\n";
        status = kExitRuntime;
      }
    }
  }
  if (status != kExitOk) return status;

  print_summary(out, "conbqa", conbqa_recs);
  if (o.baseline) print_summary(out, "random", random_recs);
  ClassCounts counts;
  for (const auto& r : conbqa_recs) counts += class_counts(r);
  if (counts.total() > 0) {
    const auto f = counts.fractions();
    out << "solution classes: empty " << fmt_real(f.empty) << ", admissible " << fmt_real(f.admissible)
        << ", decodable " << fmt_real(f.decodable) << "\n";
  }
  return kExitOk;
}

int cmd_resolution(const ResolutionOptions& o, std::ostream& out) {
  if (o.m_list.empty()) throw UsageError("--m-list must name at least one bit count");
  if (o.d == 0) throw InvalidParameter("--d must be positive");
  if (o.ds == 0 || o.ds > o.d) throw InvalidParameter("--ds must be in [1, d]");
  if (o.coverage < 2) throw InvalidParameter("--coverage must be at least 2");
  if (o.probes == 0 || o.seeds == 0) throw InvalidParameter("--probes and --seeds must be positive");
  for (auto m : o.m_list) {
    if (m == 0) throw InvalidParameter("--m-list entries must be positive");
  }
  std::uint64_t base_seed = 0;
  if (o.seed) {
    base_seed = *o.seed;
  } else {
    base_seed = fresh_seed();
    out << "seed: " << base_seed << "\n";
  }

  std::ostringstream csv;
  csv << "# codebooks at equal seed are nested across m (prefix rectangles shared); probes shared across m\n";
  csv << "d,m,d_s,N,seed,mean_RI,std_RI\n";
  for (const auto m : o.m_list) {
    std::vector<double> pooled;
    for (std::size_t s = 0; s < o.seeds; ++s) {
      const std::uint64_t seed = base_seed + s;
      Rng rng(seed);
      const auto pt = resolution_study(o.d, m, o.ds, o.coverage, o.probes, rng);
      csv << o.d << ',' << m << ',' << o.ds << ',' << o.coverage << ',' << seed << ',' << fmt_real(pt.mean_ri)
          << ',' << fmt_real(pt.std_ri) << '\n';
      pooled.insert(pooled.end(), pt.sizes.begin(), pt.sizes.end());
    }
    double mean = 0.0;
    for (double v : pooled) mean += v;
    mean /= static_cast<double>(pooled.size());
    double ss = 0.0;
    for (double v : pooled) ss += (v - mean) * (v - mean);
    const double sd = pooled.size() > 1 ? std::sqrt(ss / static_cast<double>(pooled.size() - 1)) : 0.0;
    csv << o.d << ',' << m << ',' << o.ds << ',' << o.coverage << ",all," << fmt_real(mean) << ',' << fmt_real(sd)
        << '\n';
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    write_file_atomic(o.out, csv.str());
  }
  return kExitOk;
}

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  const SolverConfig config = o.solver.build();
  const Qubo qubo = Qubo::from_json(read_file(o.qubo));
  if (config.kind == SolverKind::Exhaustive && qubo.num_vars() > kMaxExhaustiveVars) {
    throw InvalidParameter("exhaustive solver supports at most " + std::to_string(kMaxExhaustiveVars) + " variables");
  }
  std::uint64_t seed = 0;
  if (o.seed) {
    seed = *o.seed;
  } else {
    seed = fresh_seed();
    err << "seed: " << seed << "\n";
  }
  Rng rng(seed);
  const SolveResult result = solve(qubo, config, rng);
  write_file_atomic(o.out, solution_json(result));
  out << "bits: " << result.best_z.to_string() << "\n";
  out << "energy: " << fmt_real(result.best_energy) << "\n";
  return kExitOk;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous black-box optimization with a binary QUBO surrogate", "conbqa"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "optimize a benchmark objective");
  run_cmd->add_option("--objective", run_opts.objective, "objective name (hartmann6, rastrigin-<d>, styblinski-tang-<d>)")
      ->required();
  run_cmd->add_option("--m", run_opts.m, "number of bits (rectangles)")->required()->check(CLI::PositiveNumber);
  run_cmd->add_option("--ds", run_opts.ds, "subspace dimension")->required()->check(CLI::PositiveNumber);
  run_cmd->add_option("--iters", run_opts.iters, "optimization iterations after initialization")->required();
  run_cmd->add_option("--init", run_opts.init, "initial uniform samples")->capture_default_str();
  run_cmd->add_option("--coverage", run_opts.coverage, "interval coverage parameter N")->capture_default_str();
  run_cmd->add_option("--decode-attempts", run_opts.decode_attempts, "rejection attempts for admissible codes")
      ->capture_default_str();
  run_opts.solver.add_to(*run_cmd, true);
  run_cmd->add_option("--seed", run_opts.seed, "master seed (repeat k uses seed + k)");
  run_cmd->add_option("--repeats", run_opts.repeats, "independent runs")->capture_default_str();
  run_cmd->add_option("--jobs", run_opts.jobs, "concurrent repeats")->capture_default_str();
  run_cmd->add_option("--out", run_opts.out, "output directory")->capture_default_str();
  run_cmd->add_flag("--baseline", run_opts.baseline, "also run uniform random search");

  ResolutionOptions res_opts;
  auto* res_cmd = app.add_subcommand("resolution", "random subspace coding resolution study");
  res_cmd->add_option("--d", res_opts.d, "dimension")->required()->check(CLI::PositiveNumber);
  res_cmd->add_option("--m-list", res_opts.m_list, "comma-separated bit counts")->required()->delimiter(',');
  res_cmd->add_option("--ds", res_opts.ds, "subspace dimension")->capture_default_str();
  res_cmd->add_option("--coverage", res_opts.coverage, "interval coverage parameter N")->capture_default_str();
  res_cmd->add_option("--probes", res_opts.probes, "probe points per codebook")->capture_default_str();
  res_cmd->add_option("--seeds", res_opts.seeds, "codebook seeds per bit count")->capture_default_str();
  res_cmd->add_option("--seed", res_opts.seed, "base seed (seed s uses base + s)");
  res_cmd->add_option("--out", res_opts.out, "CSV output file (default: stdout)");

  SolveOptions solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "minimize a QUBO interchange file");
  solve_cmd->add_option("--qubo", solve_opts.qubo, "QUBO JSON file")->required();
  solve_opts.solver.add_to(*solve_cmd, false);
  solve_cmd->add_option("--seed", solve_opts.seed, "random seed");
  solve_cmd->add_option("--out", solve_opts.out, "solution JSON file")->capture_default_str();

  for (auto* sub : {run_cmd, res_cmd, solve_cmd}) {
    sub->add_option("--config", "flat key=value file; command-line flags take precedence");
  }

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty()) {
      for (auto* sub : {run_cmd, res_cmd, solve_cmd}) {
        if (args.front() == sub->get_name()) {
          auto rest = apply_config_overlay(*sub, std::vector<std::string>(args.begin() + 1, args.end()));
          rest.insert(rest.begin(), args.front());
          args = std::move(rest);
        }
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'conbqa --help' for usage\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_opts, out, err);
    if (*res_cmd) return cmd_resolution(res_opts, out);
    if (*solve_cmd) return cmd_solve(solve_opts, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LookupError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace conbqa::cli
