// Command-line front end.
//
//   wlocc bounds            --input pair.json
//   wlocc protocol plan     --input pair.json [--tree tree.json]
//   wlocc protocol simulate --input pair.json --trials N --seed S
//   wlocc distill           --input state.json
//   wlocc symmetric         --grid STEP --output profile.csv
//
// Exit codes: 0 ok, 2 parse/usage, 3 domain, 4 I/O. Errors go to stderr as
// {"error": CODE, "message": ...}.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wlocc/io.hpp"
#include "wlocc/wlocc.hpp"

namespace {

using wlocc::Error;
using wlocc::ErrorCode;
using json = wlocc::io::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input = "-";
  std::string output = "-";
  std::string tree;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  double grid = 0.001;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

void emit(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void report(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
}

int exit_code_for(ErrorCode c) {
  return c == ErrorCode::ParseError ? kExitParse : kExitDomain;
}

// --- commands ----------------------------------------------------------------------

void cmd_bounds(const RunConfig& cfg) {
  const auto pair = wlocc::io::pair_from_json(wlocc::io::parse_text(read_input(cfg.input)));
  emit(cfg.output, wlocc::io::to_json(wlocc::lower_bound(pair.x, pair.y)));
}

void cmd_plan(const RunConfig& cfg) {
  const auto pair = wlocc::io::pair_from_json(wlocc::io::parse_text(read_input(cfg.input)));
  const auto plan = wlocc::plan_transform(pair.x, pair.y);
  if (!cfg.tree.empty()) emit(cfg.tree, wlocc::io::to_json(wlocc::build_tree(pair.x, plan)));
  emit(cfg.output, wlocc::io::to_json(plan));
}

void cmd_simulate(const RunConfig& cfg) {
  const auto pair = wlocc::io::pair_from_json(wlocc::io::parse_text(read_input(cfg.input)));
  const auto plan = wlocc::plan_transform(pair.x, pair.y);
  const auto mc = wlocc::monte_carlo(pair.x, plan, cfg.trials, cfg.seed);
  emit(cfg.output, json{{"estimate", mc.estimate},
                        {"stderr", mc.std_error},
                        {"predicted", plan.predicted_success},
                        {"trials", mc.trials},
                        {"successes", mc.successes},
                        {"seed", cfg.seed}});
}

void cmd_distill(const RunConfig& cfg) {
  const auto x = wlocc::io::state_from_json(wlocc::io::parse_text(read_input(cfg.input)));
  const double bound = wlocc::distill_bound(x);
  const auto f = wlocc::zero_x0_filter(x);
  emit(cfg.output, json{{"bound", bound}, {"lambda", f.lambda}, {"acting_party", f.party + 1}});
}

void cmd_symmetric(const RunConfig& cfg) {
  const auto rows = wlocc::symmetric::difference_profile(cfg.grid);
  std::ostringstream csv;
  wlocc::symmetric::write_csv(csv, rows);
  write_text(cfg.output, csv.str());

  double worst = 0.0, worst_s = 0.0;
  for (const auto& r : rows)
    if (std::abs(r.diff) > worst) {
      worst = std::abs(r.diff);
      worst_s = r.s;
    }
  const json summary{{"crossing_point", wlocc::symmetric::crossing_point()},
                     {"max_abs_diff", worst},
                     {"max_abs_diff_at", worst_s},
                     {"sign_changes", wlocc::symmetric::sign_changes(rows)},
                     {"rows", rows.size()}};
  // With the CSV on stdout the summary moves to stderr.
  (cfg.output == "-" ? std::cerr : std::cout) << summary.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conversion probabilities between W-class states"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input,-i", cfg.input, "JSON input file ('-' for stdin)")->required();
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output,-o", cfg.output, "output file ('-' for stdout)");
  };

  auto* bounds = app.add_subcommand("bounds", "upper/lower bounds for a pair {x, y}");
  add_input(bounds);
  add_output(bounds);

  auto* protocol = app.add_subcommand("protocol", "conversion protocol for a pair {x, y}");
  protocol->require_subcommand(1);
  auto* plan = protocol->add_subcommand("plan", "emit the protocol plan");
  add_input(plan);
  add_output(plan);
  plan->add_option("--tree", cfg.tree, "also write the protocol tree JSON here");
  auto* simulate = protocol->add_subcommand("simulate", "Monte Carlo estimate of the plan");
  add_input(simulate);
  add_output(simulate);
  simulate->add_option("--trials", cfg.trials, "number of trials")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  simulate->add_option("--seed", cfg.seed, "RNG seed");

  auto* distill = app.add_subcommand("distill", "distillation bound for a state {x}");
  add_input(distill);
  add_output(distill);

  auto* symmetric = app.add_subcommand("symmetric", "tripartite symmetric-state profile as CSV");
  symmetric->add_option("--grid", cfg.grid, "grid step in (0, 1]");
  symmetric->add_option("--output,-o", cfg.output, "CSV path ('-' for stdout)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("UsageError", e.what());
    return kExitParse;
  }

  try {
    if (*bounds) cmd_bounds(cfg);
    else if (*plan) cmd_plan(cfg);
    else if (*simulate) cmd_simulate(cfg);
    else if (*distill) cmd_distill(cfg);
    else if (*symmetric) cmd_symmetric(cfg);
  } catch (const IoError& e) {
    report("IoError", e.what());
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << wlocc::io::error_json(e).dump() << "\n";
    return exit_code_for(e.code());
  }
  return kExitOk;
}
