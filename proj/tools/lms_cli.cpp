// Command-line front end for the LMS solvers.
//
// Exit status: 0 success, 1 verify-theorem found a mismatch, 2 malformed input
// or invocation, 3 the data violates a dataset invariant.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "lms/bpb.hpp"
#include "lms/io.hpp"
#include "lms/oracle.hpp"
#include "lms/random.hpp"
#include "lms/search.hpp"

namespace {

using namespace lms;
using nlohmann::json;

constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

struct RunConfig {
  std::string input;
  std::string algorithm = "exhaustive";
  std::optional<std::size_t> k;
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 0;
  std::string output = "json";
  int threads = 1;
  bool force_large = false;
  bool profile = false;
  BpbConfig bpb;
};

struct VerifyConfig {
  std::size_t trials = 50;
  std::size_t p_min = 1, p_max = 3;
  std::size_t n_min = 2, n_max = 12;
  std::optional<std::size_t> p, n;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
  int threads = 1;
  std::string output = "human";
};

struct GenerateConfig {
  GeneratorConfig gen;
  bool no_intercept = false;
  std::string truth;
};

std::string join(const std::vector<std::size_t>& v, char sep) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? std::string(1, sep) : "") << v[i];
  return out.str();
}

std::string join(const Vector& v, const std::string& sep) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? sep : "") << io::format_real(v(i));
  return out.str();
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::parse:
    case ErrorCode::guard:
      return kExitInput;
    default:
      return kExitInvariant;
  }
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions opt;
  opt.k = cfg.k;
  opt.tolerance = cfg.tolerance;
  opt.threads = cfg.threads;
  opt.force_large = cfg.force_large;
  return opt;
}

SolverReport run_algorithm(const Dataset& data, const RunConfig& cfg) {
  const auto opt = solve_options(cfg);
  if (cfg.algorithm == "greedy") return greedy_solve(data, opt);
  if (cfg.algorithm == "exhaustive") return exhaustive_solve(data, opt);
  if (cfg.algorithm == "bpb") {
    auto bpb = cfg.bpb;
    bpb.seed = cfg.seed;
    return bpb_solve(data, bpb, opt);
  }
  const std::size_t k = resolve_drop_count(data, opt);
  return oracle::brute_force_lms(data, k, cfg.tolerance);
}

void print_fit(const Dataset& data, const RunConfig& cfg, std::size_t k,
               const SolverReport& report, const LpSolution& minimax,
               const std::vector<ProfilePoint>* profile) {
  if (cfg.output == "json") {
    json j = io::to_json(report);
    j["command"] = "fit";
    j["algorithm"] = cfg.algorithm;
    j["n"] = data.n();
    j["p"] = data.p();
    j["k"] = k;
    j["h"] = data.n() - k;
    j["tolerance"] = cfg.tolerance;
    j["minimax_full"] = {{"theta", io::to_json(minimax.theta)},
                         {"rho", minimax.rho},
                         {"active", io::to_json(minimax.active)}};
    if (profile) j["profile"] = io::to_json(*profile);
    std::cout << j.dump(2) << '\n';
    return;
  }
  if (cfg.output == "csv") {
    std::cout << "optimizer,value,value_squared";
    for (std::size_t j = 1; j <= data.p(); ++j) std::cout << ",theta" << j;
    std::cout << ",rho,active\n";
    for (std::size_t i = 0; i < report.optimizers.size(); ++i) {
      const auto& f = report.optimizers[i];
      std::cout << i + 1 << ',' << io::format_real(report.value) << ','
                << io::format_real(report.value * report.value) << ',' << join(f.theta, ",")
                << ',' << io::format_real(f.rho) << ',' << join(f.active.one_based(), ' ') << '\n';
    }
    if (profile) {
      std::cout << "\ntheta,value\n";
      for (const auto& pt : *profile) {
        std::cout << io::format_real(pt.theta) << ',' << io::format_real(pt.value) << '\n';
      }
    }
    return;
  }
  std::cout << "algorithm      " << cfg.algorithm << "\n"
            << "observations   n=" << data.n() << " p=" << data.p() << " k=" << k << "\n"
            << "value          " << io::format_real(report.value) << "  (squared "
            << io::format_real(report.value * report.value) << ")\n"
            << "subproblems    " << report.subproblems_solved << "\n"
            << "candidates     " << report.candidates_examined << "\n";
  for (const auto& f : report.optimizers) {
    std::cout << "optimizer      theta=[" << join(f.theta, ", ") << "] active={"
              << join(f.active.one_based(), ',') << "}\n";
  }
  std::cout << "minimax P(N)   theta=[" << join(minimax.theta, ", ")
            << "] rho=" << io::format_real(minimax.rho) << "\n";
  for (const auto& w : report.warnings) std::cout << "warning        " << w << "\n";
  if (profile) {
    std::cout << "profile\n";
    for (const auto& pt : *profile) {
      std::cout << "  " << std::setw(14) << io::format_real(pt.theta) << "  "
                << io::format_real(pt.value) << "\n";
    }
  }
}

int cmd_fit(const RunConfig& cfg) {
  const auto data = io::read_csv_file(cfg.input);
  const std::size_t k = resolve_drop_count(data, solve_options(cfg));
  const auto report = run_algorithm(data, cfg);
  const auto minimax = solve_minimax(data, IndexSet::all(data.n()), cfg.tolerance);
  std::optional<std::vector<ProfilePoint>> profile;
  if (cfg.profile) {
    if (data.p() != 1) throw Error(ErrorCode::parse, "--profile needs a single regressor (p = 1)");
    profile = lms_profile(data, k);
  }
  print_fit(data, cfg, k, report, minimax, profile ? &*profile : nullptr);
  return 0;
}

int cmd_enumerate(const RunConfig& cfg) {
  const auto data = io::read_csv_file(cfg.input);
  const std::size_t k = cfg.k ? *cfg.k : data.lms_drop_count();
  const auto result = enumerate_local_minima(data, k, cfg.tolerance, cfg.threads);
  const auto theory = count_local_minima_theory(data.p(), k);
  if (cfg.output == "json") {
    json minima = json::array();
    for (const auto& r : result.minima) minima.push_back(io::to_json(r));
    json j = {{"schema_version", io::kReportSchemaVersion},
              {"command", "enumerate-minima"},
              {"n", data.n()},
              {"p", data.p()},
              {"k", k},
              {"count", result.minima.size()},
              {"theory_count", theory},
              {"minima", minima},
              {"warnings", result.warnings}};
    std::cout << j.dump(2) << '\n';
  } else if (cfg.output == "csv") {
    std::cout << "rank,k,value";
    for (std::size_t j = 1; j <= data.p(); ++j) std::cout << ",theta" << j;
    std::cout << ",active\n";
    for (std::size_t i = 0; i < result.minima.size(); ++i) {
      const auto& r = result.minima[i];
      std::cout << i + 1 << ',' << k << ',' << io::format_real(r.value) << ','
                << join(r.fit.theta, ",") << ',' << join(r.fit.active.one_based(), ' ') << '\n';
    }
  } else {
    std::cout << "local minima of f_" << k << ": " << result.minima.size()
              << " (C(p+k, p) = " << theory << ")\n";
    for (const auto& r : result.minima) {
      std::cout << "  value " << std::setw(22) << std::left << io::format_real(r.value)
                << " theta=[" << join(r.fit.theta, ", ") << "] active={"
                << join(r.fit.active.one_based(), ',') << "}\n";
    }
    for (const auto& w : result.warnings) std::cout << "warning: " << w << "\n";
  }
  return 0;
}

int cmd_verify(VerifyConfig cfg) {
  if (cfg.p) cfg.p_min = cfg.p_max = *cfg.p;
  if (cfg.n) cfg.n_min = cfg.n_max = *cfg.n;
  if (cfg.p_min < 1 || cfg.p_min > cfg.p_max) throw Error(ErrorCode::parse, "invalid p range");
  if (cfg.n_min > cfg.n_max || cfg.n_max < cfg.p_min + 1) {
    throw Error(ErrorCode::parse, "invalid n range (need n >= p+1)");
  }
  if (binomial(cfg.n_max, std::min(cfg.p_max + 1, cfg.n_max)) > 1000000) {
    throw Error(ErrorCode::guard, "range exceeds the enumeration guard of 10^6 subsets");
  }

  Rng rng(cfg.seed);
  bool all_match = true;
  std::size_t redraws = 0;
  json trials = json::array();
  std::ostringstream table;
  if (cfg.output == "csv") {
    table << "trial,n,p,k,measured,theory,match\n";
  } else if (cfg.output == "human") {
    table << "trial   n   p   k  measured    theory  match\n";
  }
  std::ostringstream identities;

  for (std::size_t t = 1; t <= cfg.trials; ++t) {
    const std::size_t p = cfg.p_min + rng.below(cfg.p_max - cfg.p_min + 1);
    const std::size_t lo = std::max(cfg.n_min, p + 1);
    if (lo > cfg.n_max) throw Error(ErrorCode::parse, "n range empty for p=" + std::to_string(p));
    const std::size_t n = lo + rng.below(cfg.n_max - lo + 1);

    MinimaCounts counts;
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == 100) throw Error(ErrorCode::no_candidate, "no general-position draw found");
      const auto data = random_dataset(n, p, rng);
      counts = measure_local_minima_counts(data, cfg.tolerance, cfg.threads);
      if (counts.general_position()) break;
      ++redraws;
    }
    const auto id = counting_identity(n, p, counts.counts);
    all_match = all_match && id.holds();

    json rows = json::array();
    for (std::size_t k = 0; k < counts.counts.size(); ++k) {
      const auto theory = count_local_minima_theory(p, k);
      const bool match = counts.counts[k] == theory;
      all_match = all_match && match;
      rows.push_back({{"k", k}, {"measured", counts.counts[k]}, {"theory", theory}, {"match", match}});
      if (cfg.output == "csv") {
        table << t << ',' << n << ',' << p << ',' << k << ',' << counts.counts[k] << ',' << theory
              << ',' << (match ? "yes" : "no") << '\n';
      } else if (cfg.output == "human") {
        table << std::setw(5) << t << std::setw(4) << n << std::setw(4) << p << std::setw(4) << k
              << std::setw(10) << counts.counts[k] << std::setw(10) << theory << "  "
              << (match ? "yes" : "NO") << '\n';
      }
    }
    identities << "identity trial=" << t << " n=" << n << " p=" << p
               << " weighted_minima=" << id.weighted_minima << " subproblems=" << id.subproblems
               << " holds=" << (id.holds() ? "yes" : "no") << '\n';
    trials.push_back({{"trial", t},
                      {"n", n},
                      {"p", p},
                      {"rows", rows},
                      {"identity",
                       {{"weighted_minima", id.weighted_minima},
                        {"subproblems", id.subproblems},
                        {"holds", id.holds()}}}});
  }

  if (cfg.output == "json") {
    json j = {{"schema_version", io::kReportSchemaVersion},
              {"command", "verify-theorem"},
              {"seed", cfg.seed},
              {"trials", trials},
              {"redraws", redraws},
              {"all_match", all_match}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << table.str() << '\n' << identities.str() << "redraws " << redraws << '\n'
              << (all_match ? "all counts match" : "MISMATCH") << '\n';
  }
  return all_match ? 0 : kExitMismatch;
}

int cmd_generate(GenerateConfig cfg) {
  cfg.gen.intercept = !cfg.no_intercept;
  GeneratedInstance inst = [&] {
    try {
      return generate_instance(cfg.gen);
    } catch (const Error& e) {
      throw Error(ErrorCode::parse, e.what());
    }
  }();
  io::write_csv(std::cout, inst.data);
  if (!cfg.truth.empty()) {
    std::ofstream out(cfg.truth);
    if (!out) throw Error(ErrorCode::parse, "cannot write '" + cfg.truth + "'");
    std::vector<std::size_t> rows;
    for (auto i : inst.outliers) rows.push_back(i + 1);
    out << json{{"coefficients", io::to_json(inst.coefficients)}, {"outliers", rows}}.dump(2)
        << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least median of squares regression via Chebyshev subproblems"};
  app.require_subcommand(1);

  RunConfig run;
  const std::vector<std::string> algorithms{"greedy", "exhaustive", "bpb", "brute-force"};
  const std::vector<std::string> formats{"json", "csv", "human"};

  auto* fit = app.add_subcommand("fit", "Fit the LMS estimate to a CSV table");
  fit->add_option("input", run.input, "CSV with header x1,...,xp,y")->required();
  fit->add_option("--algorithm", run.algorithm, "greedy | exhaustive | bpb | brute-force")
      ->check(CLI::IsMember(algorithms));
  fit->add_option("--k", run.k, "Drop count of f_k (default floor((n-1)/2))");
  fit->add_option("--tolerance", run.tolerance, "Absolute tolerance")->check(CLI::PositiveNumber);
  fit->add_option("--seed", run.seed, "Seed for bpb");
  fit->add_option("--output", run.output, "json | csv | human")->check(CLI::IsMember(formats));
  fit->add_option("--threads", run.threads, "Worker threads")->check(CLI::PositiveNumber);
  fit->add_flag("--force-large", run.force_large, "Allow exhaustive search with p > 8");
  fit->add_flag("--profile", run.profile, "Emit the objective profile (p = 1)");
  fit->add_option("--iterations", run.bpb.iterations, "bpb subset budget");
  fit->add_option("--branch-factor", run.bpb.branch_factor, "bpb draws per branch and round");
  fit->add_option("--retention", run.bpb.retention_quantile, "bpb retention quantile");

  RunConfig enumerate;
  enumerate.output = "json";
  auto* minima = app.add_subcommand("enumerate-minima", "List all local minima of f_k");
  minima->add_option("input", enumerate.input, "CSV with header x1,...,xp,y")->required();
  minima->add_option("--k", enumerate.k, "Drop count (default floor((n-1)/2))");
  minima->add_option("--tolerance", enumerate.tolerance, "Absolute tolerance")
      ->check(CLI::PositiveNumber);
  minima->add_option("--output", enumerate.output, "json | csv | human")
      ->check(CLI::IsMember(formats));
  minima->add_option("--threads", enumerate.threads, "Worker threads")->check(CLI::PositiveNumber);

  VerifyConfig verify;
  auto* theorem = app.add_subcommand("verify-theorem",
                                     "Compare measured local-minima counts with C(p+k, p)");
  theorem->add_option("--trials", verify.trials, "Random instances");
  theorem->add_option("--p", verify.p, "Fix the model dimension");
  theorem->add_option("--n", verify.n, "Fix the number of observations");
  theorem->add_option("--p-min", verify.p_min);
  theorem->add_option("--p-max", verify.p_max);
  theorem->add_option("--n-min", verify.n_min);
  theorem->add_option("--n-max", verify.n_max);
  theorem->add_option("--seed", verify.seed);
  theorem->add_option("--tolerance", verify.tolerance)->check(CLI::PositiveNumber);
  theorem->add_option("--threads", verify.threads)->check(CLI::PositiveNumber);
  theorem->add_option("--output", verify.output, "json | csv | human")
      ->check(CLI::IsMember(formats));

  GenerateConfig generate;
  auto* gen = app.add_subcommand("generate", "Write a synthetic contaminated instance as CSV");
  gen->add_option("--n", generate.gen.n, "Observations")->required();
  gen->add_option("--p", generate.gen.p, "Model dimension")->required();
  gen->add_option("--outliers", generate.gen.outlier_fraction, "Contaminated fraction in [0, 0.5)");
  gen->add_option("--noise", generate.gen.noise, "Standard deviation of the clean noise");
  gen->add_option("--seed", generate.gen.seed);
  gen->add_flag("--no-intercept", generate.no_intercept, "Draw every column at random");
  gen->add_option("--truth", generate.truth, "Write true coefficients and outlier rows as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*fit) return cmd_fit(run);
    if (*minima) return cmd_enumerate(enumerate);
    if (*theorem) return cmd_verify(verify);
    return cmd_generate(generate);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
