// Command-line frontend: `sdpal solve` runs one instance with ADAL or DADAL,
// `sdpal bench` runs an instance manifest with both methods and emits a
// comparison table. Exit codes for solve: 0 converged, 1 usage/parse error,
// 2 iteration or time limit, 3 numeric failure.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sdpal/errors.hpp"
#include "sdpal/instances.hpp"
#include "sdpal/io.hpp"
#include "sdpal/solver.hpp"

namespace {

using namespace sdpal;

struct CommonOptions {
  double eps = 1e-5;
  int max_iter = 20000;
  double time_limit_s = 3600.0;
  int inner_iters = 2;
  double eps_inner = -1.0;  // <= 0: library default
  double sigma0 = -1.0;     // <= 0: computed at start
  bool sigma_fixed = false;
  bool sigma0_simple_ratio = false;
  int sigma_patience = 10;
  std::string step = "analytic";
  double rank_tol = 1e-8;
  unsigned seed = 0;
  double x0_scale = 1.0;
};

void add_common_options(CLI::App& cmd, CommonOptions& opt) {
  cmd.add_option("--eps", opt.eps, "Termination tolerance on max(r_P, r_D)");
  cmd.add_option("--max-iter", opt.max_iter, "Outer iteration limit");
  cmd.add_option("--time-limit", opt.time_limit_s, "Time limit in seconds");
  cmd.add_option("--inner-iters", opt.inner_iters,
                 "Dual ascent steps per DADAL iteration");
  cmd.add_option("--eps-inner", opt.eps_inner,
                 "Inner gradient tolerance (default 1e-5*(1+||C||))");
  cmd.add_option("--sigma0", opt.sigma0, "Starting penalty parameter");
  cmd.add_flag("--sigma-fixed", opt.sigma_fixed,
               "Keep sigma at its starting value");
  cmd.add_flag("--sigma0-simple-ratio", opt.sigma0_simple_ratio,
               "Use plain r_P/r_D for the starting penalty");
  cmd.add_option("--sigma-patience", opt.sigma_patience,
                 "Consecutive iterations before sigma changes");
  cmd.add_option("--step", opt.step, "Linesearch strategy: analytic or grid")
      ->check(CLI::IsMember({"analytic", "grid"}));
  cmd.add_option("--rank-tol", opt.rank_tol, "Relative rank tolerance");
  cmd.add_option("--seed", opt.seed, "Seed for generated instances");
  cmd.add_option("--x0-scale", opt.x0_scale, "X_0 = scale * I");
}

SolverConfig make_config(const CommonOptions& opt, Method method) {
  SolverConfig cfg;
  cfg.method = method;
  cfg.eps = opt.eps;
  cfg.max_outer_iters = opt.max_iter;
  cfg.time_limit_s = opt.time_limit_s;
  cfg.inner_iters = opt.inner_iters;
  if (opt.eps_inner > 0.0) cfg.eps_inner = opt.eps_inner;
  if (opt.sigma0 > 0.0) cfg.sigma0 = opt.sigma0;
  cfg.sigma_fixed = opt.sigma_fixed;
  cfg.sigma0_simple_ratio = opt.sigma0_simple_ratio;
  cfg.sigma_patience = opt.sigma_patience;
  cfg.step_strategy =
      opt.step == "grid" ? StepStrategy::Grid : StepStrategy::Analytic;
  cfg.rank_tol = opt.rank_tol;
  cfg.seed = opt.seed;
  cfg.x0_scale = opt.x0_scale;
  return cfg;
}

bool is_edge_list_path(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  return ext == ".edges" || ext == ".edgelist" || ext == ".graph";
}

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return 0;
    case SolveStatus::IterationLimit:
    case SolveStatus::TimeLimit: return 2;
    case SolveStatus::NumericFailure: return 3;
  }
  return 3;
}

void print_run_record(const SdpProblem& p, Method method,
                      const SolveReport& rep) {
  std::cout << "instance=" << (p.name.empty() ? "unnamed" : p.name)
            << " method=" << to_string(method) << " n=" << p.n
            << " m=" << p.op.constraint_count()
            << " status=" << to_string(rep.status)
            << " iterations=" << rep.iterations
            << " time_s=" << format_double(rep.history.back().wall_ms / 1e3)
            << " r_P=" << format_double(rep.final.r_p)
            << " r_D=" << format_double(rep.final.r_d)
            << " delta=" << format_double(rep.final.delta)
            << " primal_obj=" << format_double(p.reported(rep.final.primal_obj))
            << " dual_obj=" << format_double(p.reported(rep.final.dual_obj))
            << "\n";
  if (!rep.message.empty()) std::cerr << rep.message << "\n";
}

// ---------------------------------------------------------------- solve ----

struct SolveArgs {
  std::string input;
  std::string gen;
  std::string graph;
  int gnp_n = 0;
  double gnp_p = 0.0;
  int lop_n = 0;
  int rand_n = 0;
  int rand_m = 0;
  double rand_density = 0.0;
  std::string solver = "dadal";
  std::string log_path;
  std::string out_path;
  CommonOptions common;
};

SdpProblem build_problem(const SolveArgs& args) {
  if (!args.input.empty()) {
    if (is_edge_list_path(args.input)) {
      SdpProblem p = theta_sdp(read_edge_list(args.input));
      p.name = std::filesystem::path(args.input).stem().string();
      return p;
    }
    return read_sdpa(args.input);
  }
  if (args.gen == "theta") {
    if (!args.graph.empty()) {
      SdpProblem p = theta_sdp(read_edge_list(args.graph));
      p.name = std::filesystem::path(args.graph).stem().string();
      return p;
    }
    if (args.gnp_n > 0) {
      SdpProblem p = theta_sdp(
          random_gnp_graph(args.gnp_n, args.gnp_p, args.common.seed));
      p.name = "theta_gnp" + std::to_string(args.gnp_n);
      return p;
    }
    throw Error("--gen theta requires --graph or --gnp-n/--gnp-p");
  }
  if (args.gen == "lop") {
    if (args.lop_n < 3) throw Error("--gen lop requires --lop-n >= 3");
    SdpProblem p = lop_sdp(random_lop_spec(args.lop_n, args.common.seed));
    p.name = "lop" + std::to_string(args.lop_n);
    return p;
  }
  if (args.gen == "random") {
    if (args.rand_n < 1 || args.rand_m < 1 || args.rand_density <= 0.0) {
      throw Error("--gen random requires --rand-n, --rand-m, --rand-density");
    }
    SdpProblem p = random_sdp(args.rand_n, args.rand_m, args.rand_density,
                              args.common.seed);
    p.name = "random" + std::to_string(args.rand_n) + "_" +
             std::to_string(args.rand_m);
    return p;
  }
  throw Error("specify --input or --gen theta|lop|random");
}

int run_solve(const SolveArgs& args) {
  std::optional<SdpProblem> problem;
  try {
    problem.emplace(build_problem(args));
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const RankError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const Method method =
      args.solver == "adal" ? Method::Adal : Method::Dadal;
  const SolverConfig cfg = make_config(args.common, method);

  SolveReport rep;
  try {
    rep = solve(*problem, cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  print_run_record(*problem, method, rep);
  try {
    if (!args.log_path.empty()) write_history_csv(rep, args.log_path);
    if (!args.out_path.empty()) write_solution(*problem, rep, args.out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code_for(rep.status);
}

// ---------------------------------------------------------------- bench ----

struct BenchEntry {
  std::string name;
  std::string kind;
  std::vector<std::string> args;
};

struct BenchManifest {
  std::vector<BenchEntry> entries;
  bool run_adal = true;
  bool run_dadal = true;
};

BenchManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open manifest '" + path + "'", 0);
  BenchManifest manifest;
  bool methods_seen = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    if (first == "methods") {
      if (!methods_seen) {
        manifest.run_adal = manifest.run_dadal = false;
        methods_seen = true;
      }
      std::string method;
      while (ss >> method) {
        if (method == "adal") {
          manifest.run_adal = true;
        } else if (method == "dadal") {
          manifest.run_dadal = true;
        } else {
          throw ParseError("unknown method '" + method + "'", line_no);
        }
      }
      continue;
    }
    BenchEntry entry;
    entry.name = first;
    if (!(ss >> entry.kind)) {
      throw ParseError("instance '" + first + "' has no kind", line_no);
    }
    std::string arg;
    while (ss >> arg) entry.args.push_back(arg);
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

SdpProblem build_bench_problem(const BenchEntry& entry) {
  auto need = [&](std::size_t count) {
    if (entry.args.size() != count) {
      throw Error("instance '" + entry.name + "': kind '" + entry.kind +
                  "' expects " + std::to_string(count) + " arguments");
    }
  };
  SdpProblem p = [&] {
    if (entry.kind == "sdpa") {
      need(1);
      return read_sdpa(entry.args[0]);
    }
    if (entry.kind == "edges") {
      need(1);
      return theta_sdp(read_edge_list(entry.args[0]));
    }
    if (entry.kind == "theta-gnp") {
      need(3);
      return theta_sdp(random_gnp_graph(
          std::stoi(entry.args[0]), std::stod(entry.args[1]),
          static_cast<unsigned>(std::stoul(entry.args[2]))));
    }
    if (entry.kind == "lop") {
      need(2);
      return lop_sdp(random_lop_spec(
          std::stoi(entry.args[0]),
          static_cast<unsigned>(std::stoul(entry.args[1]))));
    }
    if (entry.kind == "random") {
      need(4);
      return random_sdp(std::stoi(entry.args[0]), std::stoi(entry.args[1]),
                        std::stod(entry.args[2]),
                        static_cast<unsigned>(std::stoul(entry.args[3])));
    }
    throw Error("instance '" + entry.name + "': unknown kind '" + entry.kind +
                "'");
  }();
  p.name = entry.name;
  return p;
}

struct MethodResult {
  bool ran = false;
  bool ok = false;  // problem built and solve returned
  SolveStatus status = SolveStatus::NumericFailure;
  int iterations = 0;
  double time_s = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  std::string error;
};

struct BenchRow {
  std::string name;
  int n = 0;
  int m = 0;
  std::string build_error;
  MethodResult adal;
  MethodResult dadal;
};

MethodResult run_method(const SdpProblem& p, const CommonOptions& opt,
                        Method method) {
  MethodResult result;
  result.ran = true;
  try {
    const SolveReport rep = solve(p, make_config(opt, method));
    result.ok = true;
    result.status = rep.status;
    result.iterations = rep.iterations;
    result.time_s = rep.history.back().wall_ms / 1e3;
    result.primal = p.reported(rep.final.primal_obj);
    result.dual = p.reported(rep.final.dual_obj);
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

int bench_threads(std::size_t instances) {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DADAL_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) threads = static_cast<unsigned>(parsed);
  }
  return static_cast<int>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, instances)));
}

std::string method_cells(const MethodResult& r) {
  if (!r.ran) return ",,,,";
  if (!r.ok) return ",,,," + std::string("error: ") + r.error;
  std::ostringstream out;
  out << r.iterations << ',' << format_double(r.time_s) << ','
      << format_double(r.primal) << ',' << format_double(r.dual) << ','
      << to_string(r.status);
  return out.str();
}

int run_bench(const std::string& manifest_path, const std::string& output_path,
              const CommonOptions& opt) {
  BenchManifest manifest;
  try {
    manifest = read_manifest(manifest_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (manifest.entries.empty()) {
    std::cerr << "error: manifest '" << manifest_path
              << "' lists no instances\n";
    return 1;
  }

  std::vector<BenchRow> rows(manifest.entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= manifest.entries.size()) return;
      const BenchEntry& entry = manifest.entries[idx];
      BenchRow& row = rows[idx];
      row.name = entry.name;
      try {
        const SdpProblem p = build_bench_problem(entry);
        row.n = p.n;
        row.m = p.op.constraint_count();
        if (manifest.run_adal) row.adal = run_method(p, opt, Method::Adal);
        if (manifest.run_dadal) row.dadal = run_method(p, opt, Method::Dadal);
      } catch (const std::exception& e) {
        row.build_error = e.what();
      }
    }
  };

  const int thread_count = bench_threads(manifest.entries.size());
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::vector<double> ratios;
  for (const auto& row : rows) {
    if (row.adal.ok && row.dadal.ok &&
        row.adal.status == SolveStatus::Converged &&
        row.dadal.status == SolveStatus::Converged &&
        row.adal.iterations > 0) {
      ratios.push_back(static_cast<double>(row.dadal.iterations) /
                       row.adal.iterations);
    }
  }
  std::optional<double> median_ratio;
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    const std::size_t mid = ratios.size() / 2;
    median_ratio = ratios.size() % 2 == 1
                       ? ratios[mid]
                       : 0.5 * (ratios[mid - 1] + ratios[mid]);
  }

  std::ofstream out(output_path);
  if (!out) {
    std::cerr << "error: cannot write '" << output_path << "'\n";
    return 1;
  }
  out << "instance,n,m,adal_iter,adal_time_s,adal_primal_obj,adal_dual_obj,"
         "adal_status,dadal_iter,dadal_time_s,dadal_primal_obj,"
         "dadal_dual_obj,dadal_status\n";
  for (const auto& row : rows) {
    out << row.name << ',' << row.n << ',' << row.m << ',';
    if (!row.build_error.empty()) {
      out << ",,,,error: " << row.build_error << ",,,,,\n";
      continue;
    }
    out << method_cells(row.adal) << ',' << method_cells(row.dadal) << "\n";
  }
  if (median_ratio) {
    out << "# median_iter_ratio_dadal_over_adal,"
        << format_double(*median_ratio) << "\n";
    std::cout << "median iteration ratio dadal/adal = "
              << format_double(*median_ratio) << "\n";
  } else {
    std::cout << "median iteration ratio dadal/adal = n/a\n";
  }
  std::cout << "wrote " << output_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semidefinite programming solver: alternating direction "
               "augmented Lagrangian (ADAL) and its factored-dual variant "
               "(DADAL)"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Solve one instance and print a run record");
  solve_cmd->add_option("--input", solve_args.input,
                        "SDPA sparse file (.dat-s) or edge list (.edges)");
  solve_cmd->add_option("--gen", solve_args.gen,
                        "Generate an instance: theta, lop or random")
      ->check(CLI::IsMember({"theta", "lop", "random"}));
  solve_cmd->add_option("--graph", solve_args.graph,
                        "Edge-list file for --gen theta");
  solve_cmd->add_option("--gnp-n", solve_args.gnp_n,
                        "Vertices of a random G(n,p) graph");
  solve_cmd->add_option("--gnp-p", solve_args.gnp_p, "Edge probability");
  solve_cmd->add_option("--lop-n", solve_args.lop_n,
                        "Objects of a random linear ordering instance");
  solve_cmd->add_option("--rand-n", solve_args.rand_n,
                        "Matrix order of a random instance");
  solve_cmd->add_option("--rand-m", solve_args.rand_m,
                        "Constraints of a random instance");
  solve_cmd->add_option("--rand-density", solve_args.rand_density,
                        "Constraint density of a random instance");
  solve_cmd->add_option("--solver", solve_args.solver, "adal or dadal")
      ->check(CLI::IsMember({"adal", "dadal"}));
  solve_cmd->add_option("--log", solve_args.log_path,
                        "Write the iteration history CSV here");
  solve_cmd->add_option("--out", solve_args.out_path,
                        "Write the final (X, y, Z) here");
  add_common_options(*solve_cmd, solve_args.common);

  std::string manifest_path;
  std::string bench_output = "bench_results.csv";
  CommonOptions bench_common;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Run a manifest of instances with both methods");
  bench_cmd->add_option("--manifest", manifest_path, "Instance manifest file")
      ->required();
  bench_cmd->add_option("--output", bench_output, "Comparison CSV path");
  add_common_options(*bench_cmd, bench_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (solve_cmd->parsed()) return run_solve(solve_args);
  return run_bench(manifest_path, bench_output, bench_common);
}
