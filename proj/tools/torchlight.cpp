// Command-line front end: generate instances, solve them with the ADMM
// pipeline or the greedy baseline, evaluate and render solutions, and dump
// solver-facing artifacts for debugging.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "torchlight/admm.hpp"
#include "torchlight/baselines.hpp"
#include "torchlight/harness.hpp"
#include "torchlight/heightmap.hpp"
#include "torchlight/qubo.hpp"
#include "torchlight/render.hpp"
#include "torchlight/solution.hpp"

namespace {

torchlight::Heightmap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read map file " + path);
  return torchlight::parse_heightmap(in);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

struct GenerateArgs {
  int width = 0;
  int height = 0;
  std::uint64_t seed = 1;
  double wall_threshold = 0.6;
  int levels = 4;
  int octaves = 1;
  std::string out;
};

int cmd_generate(const GenerateArgs& args) {
  auto map = torchlight::generate_perlin_map(args.width, args.height, args.seed,
                                             args.wall_threshold, args.levels, args.octaves);
  write_text(args.out, torchlight::serialize_heightmap(map));
  std::cout << "wrote " << args.out << ": " << args.width << "x" << args.height << ", "
            << map.floor_count() << " floor tiles\n";
  return 0;
}

struct SolveArgs {
  std::string map_path;
  std::string solver = "tabusa";
  int budget = 30;
  double mu0 = 0.01;
  double rho = 1.1;
  int repeats = 1;
  std::uint64_t seed = 1;
  std::string out_prefix = "out";
  int l_torch = 14;
  int l_min = 8;
  bool early_exit = false;
  int sa_sweeps = 1000;
  int sa_restarts = 10;
  int tabu_restarts = 5;
};

torchlight::SolverKind solver_kind(const std::string& name) {
  if (name == "sa") return torchlight::SolverKind::SA;
  if (name == "tabu") return torchlight::SolverKind::Tabu;
  if (name == "tabusa") return torchlight::SolverKind::TabuSA;
  if (name == "exhaustive") return torchlight::SolverKind::Exhaustive;
  throw std::runtime_error("unknown solver '" + name + "'");
}

int solve_greedy(const SolveArgs& args, const torchlight::Heightmap& map,
                 const torchlight::LinearConstraintSystem& system,
                 const torchlight::LightParams& params) {
  torchlight::TileIndex tiles(map);
  auto chosen = torchlight::greedy_cover(torchlight::to_setcover(system.coverage()));
  std::vector<int> x(static_cast<std::size_t>(tiles.n()), 0);
  for (int i : chosen) x[static_cast<std::size_t>(i)] = 1;
  auto layout = torchlight::light_levels(map, x, params);

  torchlight::TorchSolution solution;
  solution.map_path = args.map_path;
  solution.torches = torchlight::torches_from_selection(tiles, x);
  solution.violations = layout.violations;
  solution.iterations = 0;
  solution.solver = "greedy";
  solution.seed = args.seed;
  torchlight::write_solution(args.out_prefix + ".json", solution);

  torchlight::IterationTrace trace{{1, static_cast<int>(chosen.size()), layout.violations, 0.0,
                                    0.0, static_cast<double>(chosen.size())}};
  std::ostringstream csv;
  torchlight::write_trace_csv(csv, trace);
  write_text(args.out_prefix + ".csv", csv.str());

  std::cout << "greedy: torches=" << chosen.size() << " violations=" << layout.violations << "\n";
  return layout.violations == 0 ? 0 : 1;
}

int cmd_solve(const SolveArgs& args) {
  auto map = load_map(args.map_path);
  torchlight::LightParams params{args.l_torch, args.l_min};
  torchlight::LinearConstraintSystem system(torchlight::coverage_matrix(map, params));
  torchlight::TileIndex tiles(map);

  if (args.solver == "greedy") return solve_greedy(args, map, system, params);

  torchlight::AdmmConfig cfg;
  cfg.mu0 = args.mu0;
  cfg.rho = args.rho;
  cfg.budget = args.budget;
  cfg.early_exit = args.early_exit;
  cfg.solver.kind = solver_kind(args.solver);
  cfg.solver.seed = args.seed;
  cfg.solver.sa.sweeps = args.sa_sweeps;
  cfg.solver.sa.restarts = args.sa_restarts;
  cfg.solver.tabu.restarts = args.tabu_restarts;

  auto runs = args.repeats == 1
                  ? std::vector<torchlight::AdmmResult>{torchlight::run_admm(system, cfg)}
                  : torchlight::run_repeats(system, cfg, args.repeats);

  int infeasible = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& run = runs[r];
    const auto& x = torchlight::chosen_selection(run);
    auto layout = torchlight::light_levels(map, x, params);
    if (layout.violations != 0) ++infeasible;

    torchlight::TorchSolution solution;
    solution.map_path = args.map_path;
    solution.torches = torchlight::torches_from_selection(tiles, x);
    solution.violations = layout.violations;
    solution.iterations = static_cast<int>(run.trace.size());
    solution.solver = args.solver;
    solution.seed = args.seed;

    std::string stem =
        args.repeats == 1 ? args.out_prefix : args.out_prefix + "_run" + std::to_string(r);
    torchlight::write_solution(stem + ".json", solution);
    std::ostringstream csv;
    torchlight::write_trace_csv(csv, run.trace);
    write_text(stem + ".csv", csv.str());

    const auto& last = run.trace.back();
    std::cout << "run " << r << ": torches=" << solution.torches.size()
              << " violations=" << layout.violations << " iterations=" << solution.iterations
              << " (last iterate: torches=" << last.torches
              << " violations=" << last.violations << ")\n";
  }

  if (args.repeats > 1) {
    auto report = torchlight::make_report(system, runs);
    std::ostringstream csv;
    torchlight::write_report_csv(csv, report);
    write_text(args.out_prefix + "_report.csv", csv.str());
    std::cout << "feasible runs: " << (args.repeats - infeasible) << "/" << args.repeats << "\n";
  }
  return infeasible == 0 ? 0 : 1;
}

struct EvalArgs {
  std::string map_path;
  std::string solution_path;
  int l_torch = 14;
  int l_min = 8;
};

int cmd_eval(const EvalArgs& args) {
  auto map = load_map(args.map_path);
  auto solution = torchlight::read_solution(args.solution_path);
  torchlight::LightParams params{args.l_torch, args.l_min};
  torchlight::TileIndex tiles(map);
  auto x = torchlight::selection_from_torches(map, tiles, solution.torches);
  auto layout = torchlight::light_levels(map, x, params);

  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      if (c > 0) std::cout << ' ';
      if (map.wall(r, c)) {
        std::cout << "##";
      } else {
        std::cout << std::setw(2) << layout.light[static_cast<std::size_t>(tiles.index_of(r, c))];
      }
    }
    std::cout << '\n';
  }
  std::cout << "torches: " << solution.torches.size() << '\n';
  std::cout << "violations: " << layout.violations;
  if (layout.violations != solution.violations) {
    std::cout << " (solution file claims " << solution.violations << ")";
  }
  std::cout << '\n';
  return layout.violations == 0 ? 0 : 1;
}

struct RenderArgs {
  std::string map_path;
  std::string solution_path;
  std::string out;
  int scale = 1;
  int l_torch = 14;
  int l_min = 8;
};

int cmd_render(const RenderArgs& args) {
  auto map = load_map(args.map_path);
  torchlight::LightParams params{args.l_torch, args.l_min};
  torchlight::Image img;
  if (args.solution_path.empty()) {
    img = torchlight::render_map(map, nullptr, args.scale, params);
  } else {
    auto solution = torchlight::read_solution(args.solution_path);
    torchlight::TileIndex tiles(map);
    auto x = torchlight::selection_from_torches(map, tiles, solution.torches);
    auto layout = torchlight::light_levels(map, x, params);
    img = torchlight::render_map(map, &layout, args.scale, params);
  }
  torchlight::write_ppm(args.out, img);
  std::cout << "wrote " << args.out << " (" << img.width << "x" << img.height << ")\n";
  return 0;
}

struct ExportArgs {
  std::string map_path;
  std::string out;
  std::string form = "step";
  double beta = 0.0;  // 0: n + 1
  double mu0 = 0.01;
  int l_torch = 14;
  int l_min = 8;
};

int cmd_export_qubo(const ExportArgs& args) {
  auto map = load_map(args.map_path);
  torchlight::LightParams params{args.l_torch, args.l_min};
  torchlight::LinearConstraintSystem system(torchlight::coverage_matrix(map, params));
  std::ofstream out(args.out);
  if (!out) throw std::runtime_error("cannot write " + args.out);

  if (args.form == "step") {
    std::vector<int> z(static_cast<std::size_t>(system.n()), 0);
    std::vector<double> lambda(static_cast<std::size_t>(system.n()), 0.0);
    auto q = torchlight::build_admm_step_qubo(system, z, lambda, args.mu0);
    torchlight::write_qubo(out, q);
    std::cout << "wrote " << args.out << ": first-iteration x-step form, n=" << q.n() << "\n";
  } else if (args.form == "slack") {
    double beta = args.beta > 0.0 ? args.beta : static_cast<double>(system.n() + 1);
    auto slack = torchlight::build_slack_qubo(system, beta);
    torchlight::write_qubo(out, slack.qubo);
    std::cout << "wrote " << args.out << ": slack form, n=" << slack.n
              << ", total variables=" << slack.total_vars() << ", dropped constant="
              << slack.constant << "\n";
  } else {
    throw std::runtime_error("unknown form '" + args.form + "' (use step or slack)");
  }
  return 0;
}

struct LseArgs {
  std::string map_path;
  std::string solution_path;
  double alpha = 10.0;
  int l_torch = 14;
  int l_min = 8;
};

int cmd_lse_check(const LseArgs& args) {
  auto map = load_map(args.map_path);
  torchlight::LightParams params{args.l_torch, args.l_min};
  auto constraints = torchlight::build_lse_constraints(map, params, args.alpha);

  double min_mag = std::numeric_limits<double>::infinity();
  double max_mag = 0.0;
  for (const auto& c : constraints) {
    for (double u : c.u) {
      double m = std::abs(u);
      if (m > 0.0) {
        min_mag = std::min(min_mag, m);
        max_mag = std::max(max_mag, m);
      }
    }
  }
  std::cout << "constraints: " << constraints.size() << "\n";
  std::cout << "coefficient magnitudes: [" << min_mag << ", " << max_mag << "], spread "
            << (min_mag > 0.0 ? max_mag / min_mag : 0.0) << "\n";

  if (!args.solution_path.empty()) {
    auto solution = torchlight::read_solution(args.solution_path);
    torchlight::TileIndex tiles(map);
    auto x = torchlight::selection_from_torches(map, tiles, solution.torches);
    auto coverage = torchlight::coverage_matrix(map, params);
    auto dx = coverage.times(x);
    int lse_ok = 0;
    int cover_ok = 0;
    int agree = 0;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      bool a = constraints[i].satisfied(x);
      bool b = dx[i] >= 1;
      lse_ok += a;
      cover_ok += b;
      agree += a == b;
    }
    std::cout << "lse-satisfied: " << lse_ok << "/" << constraints.size() << "\n";
    std::cout << "coverage-satisfied: " << cover_ok << "/" << constraints.size() << "\n";
    std::cout << "agreement: " << agree << "/" << constraints.size() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torch placement on heightmaps via QUBO and ADMM"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "generate a procedural heightmap");
  cmd_gen->add_option("--width", gen.width, "map width in tiles")->required();
  cmd_gen->add_option("--height", gen.height, "map height in tiles")->required();
  cmd_gen->add_option("--seed", gen.seed, "noise seed");
  cmd_gen->add_option("--wall-threshold", gen.wall_threshold,
                      "noise quantile above which tiles become walls");
  cmd_gen->add_option("--levels", gen.levels, "number of elevation bands");
  cmd_gen->add_option("--octaves", gen.octaves, "noise octaves");
  cmd_gen->add_option("--out", gen.out, "output map file")->required();

  SolveArgs solve;
  auto* cmd_slv = app.add_subcommand("solve", "place torches on a heightmap");
  cmd_slv->add_option("--map", solve.map_path, "heightmap file")->required();
  cmd_slv->add_option("--solver", solve.solver, "sa|tabu|tabusa|exhaustive|greedy");
  cmd_slv->add_option("--budget", solve.budget, "ADMM iteration budget");
  cmd_slv->add_option("--mu0", solve.mu0, "initial penalty weight");
  cmd_slv->add_option("--rho", solve.rho, "penalty learning rate");
  cmd_slv->add_option("--repeats", solve.repeats, "independent seeded repetitions");
  cmd_slv->add_option("--seed", solve.seed, "base seed");
  cmd_slv->add_option("--out-prefix", solve.out_prefix, "output file prefix");
  cmd_slv->add_option("--l-torch", solve.l_torch, "torch light level");
  cmd_slv->add_option("--l-min", solve.l_min, "required minimum light level");
  cmd_slv->add_flag("--early-exit", solve.early_exit,
                    "stop once feasible with a stable torch count");
  cmd_slv->add_option("--sa-sweeps", solve.sa_sweeps, "SA sweeps per restart");
  cmd_slv->add_option("--sa-restarts", solve.sa_restarts, "SA restarts");
  cmd_slv->add_option("--tabu-restarts", solve.tabu_restarts, "tabu restarts");

  EvalArgs eval;
  auto* cmd_evl = app.add_subcommand("eval", "recompute light levels for a solution");
  cmd_evl->add_option("--map", eval.map_path, "heightmap file")->required();
  cmd_evl->add_option("--solution", eval.solution_path, "solution JSON")->required();
  cmd_evl->add_option("--l-torch", eval.l_torch, "torch light level");
  cmd_evl->add_option("--l-min", eval.l_min, "required minimum light level");

  RenderArgs render;
  auto* cmd_rnd = app.add_subcommand("render", "render a map (optionally with a solution) as PPM");
  cmd_rnd->add_option("--map", render.map_path, "heightmap file")->required();
  cmd_rnd->add_option("--solution", render.solution_path, "solution JSON");
  cmd_rnd->add_option("--out", render.out, "output PPM file")->required();
  cmd_rnd->add_option("--scale", render.scale, "pixels per tile");
  cmd_rnd->add_option("--l-torch", render.l_torch, "torch light level");
  cmd_rnd->add_option("--l-min", render.l_min, "required minimum light level");

  ExportArgs exp;
  auto* cmd_exp = app.add_subcommand("export-qubo", "write the solver-facing QUBO as text");
  cmd_exp->add_option("--map", exp.map_path, "heightmap file")->required();
  cmd_exp->add_option("--out", exp.out, "output file")->required();
  cmd_exp->add_option("--form", exp.form, "step|slack");
  cmd_exp->add_option("--beta", exp.beta, "slack penalty weight (default n+1)");
  cmd_exp->add_option("--mu0", exp.mu0, "penalty weight for the step form");
  cmd_exp->add_option("--l-torch", exp.l_torch, "torch light level");
  cmd_exp->add_option("--l-min", exp.l_min, "required minimum light level");

  LseArgs lse;
  auto* cmd_lse = app.add_subcommand(
      "lse-check", "diagnose the smooth-max linearization of the coverage constraints");
  cmd_lse->add_option("--map", lse.map_path, "heightmap file")->required();
  cmd_lse->add_option("--solution", lse.solution_path, "solution JSON to check");
  cmd_lse->add_option("--alpha", lse.alpha, "sharpness of the smooth max");
  cmd_lse->add_option("--l-torch", lse.l_torch, "torch light level");
  cmd_lse->add_option("--l-min", lse.l_min, "required minimum light level");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) return cmd_generate(gen);
    if (cmd_slv->parsed()) return cmd_solve(solve);
    if (cmd_evl->parsed()) return cmd_eval(eval);
    if (cmd_rnd->parsed()) return cmd_render(render);
    if (cmd_exp->parsed()) return cmd_export_qubo(exp);
    if (cmd_lse->parsed()) return cmd_lse_check(lse);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
