// Copyright 2026 The maas-auction Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maas/experiments.hpp"
#include "maas/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace maas;

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsage = 2;

struct ScenarioSource
{
  std::string                mechanism{"payg"};
  std::uint64_t              seed{1};
  std::optional<std::size_t> horizon;
  std::optional<double>      capacity;
  std::string                scenario_path;
  std::string                config_path;

  void add_to(CLI::App &cmd)
  {
    cmd.add_option("--mechanism", mechanism, "Auction mechanism")
      ->check(CLI::IsMember({"payg", "paap"}));
    cmd.add_option("--seed", seed, "Random seed for generated demand");
    cmd.add_option("--horizon", horizon, "Slots of generated demand")->check(CLI::PositiveNumber);
    cmd.add_option("--capacity", capacity, "Capacity C per slot")->check(CLI::PositiveNumber);
    cmd.add_option("--scenario", scenario_path, "Scenario JSON to load instead of generating")
      ->check(CLI::ExistingFile);
    cmd.add_option("--config", config_path, "Run configuration JSON")->check(CLI::ExistingFile);
  }

  DemandConfig demand() const
  {
    auto const mech = parse_mechanism(mechanism);
    auto config = mech == Mechanism::payg ? scaled_trips(horizon.value_or(120))
                                          : scaled_packages(horizon.value_or(20));
    if (capacity)
    {
      config.capacity = *capacity;
    }
    config.seed = seed;
    return config;
  }

  Scenario load() const
  {
    if (scenario_path.empty())
    {
      return generate(demand());
    }
    auto scenario = load_scenario(scenario_path);
    if (capacity)
    {
      scenario.capacity = *capacity;
    }
    return scenario;
  }
};

struct RunFlags
{
  std::optional<std::string> price;
  std::optional<std::string> solver;
  std::optional<std::string> payment;
  std::optional<std::size_t> step;
  std::optional<std::size_t> window;

  void add_to(CLI::App &cmd)
  {
    cmd.add_option("--price", price, "Price function")
      ->check(CLI::IsMember({"linear", "quadratic", "exponential"}));
    cmd.add_option("--solver", solver, "Solver configuration")
      ->check(CLI::IsMember({"online-alg", "online-milp", "offline-milp"}));
    cmd.add_option("--payment", payment, "Payment rule")
      ->check(CLI::IsMember({"dual_price", "posted_price"}));
    cmd.add_option("--step", step, "Roll step")->check(CLI::PositiveNumber);
    cmd.add_option("--window", window, "Look-ahead window")->check(CLI::PositiveNumber);
  }

  // File values first, then flags on top.
  HorizonConfig resolve(ScenarioSource &source) const
  {
    HorizonConfig config;
    if (!source.config_path.empty())
    {
      std::ifstream in(source.config_path);
      auto const file = run_config_from_json(Json::parse(in));
      config = file.horizon;
      if (file.capacity && !source.capacity)
      {
        source.capacity = file.capacity;
      }
      if (file.horizon_slots && !source.horizon)
      {
        source.horizon = file.horizon_slots;
      }
      if (file.seed)
      {
        source.seed = *file.seed;
      }
      source.mechanism = to_string(config.mechanism);
    }
    config.mechanism = parse_mechanism(source.mechanism);
    if (price)
    {
      config.price_function = parse_price_function(*price);
    }
    if (solver)
    {
      config.solver = parse_solver(*solver);
    }
    if (payment)
    {
      config.payment = *payment == "posted_price" ? PaymentRule::posted_price : PaymentRule::dual_price;
    }
    if (step)
    {
      config.step = *step;
    }
    if (window)
    {
      config.window = *window;
    }
    return config;
  }
};

/// Where a subcommand's main document goes: --out, else $MAAS_OUT_DIR/<default>, else stdout.
std::optional<std::filesystem::path> output_path(std::string const &out, std::string const &default_name)
{
  if (!out.empty())
  {
    return std::filesystem::path(out);
  }
  if (char const *dir = std::getenv("MAAS_OUT_DIR"); dir && *dir)
  {
    std::filesystem::create_directories(dir);
    return std::filesystem::path(dir) / default_name;
  }
  return std::nullopt;
}

void emit(Json const &doc, std::optional<std::filesystem::path> const &path)
{
  if (!path)
  {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  if (path->has_parent_path())
  {
    std::filesystem::create_directories(path->parent_path());
  }
  std::ofstream out(*path);
  out << doc.dump(2) << '\n';
  if (!out)
  {
    throw std::runtime_error("cannot write " + path->string());
  }
  std::cerr << "wrote " << path->string() << '\n';
}

std::string stem(Scenario const &scenario, std::uint64_t seed, std::string const &what)
{
  return what + "-" + to_string(scenario.mechanism) + "-" + std::to_string(seed);
}

Json suite_json(BoundSuite const &s)
{
  return {{"passed", s.passed()},    {"checked", s.checked},           {"skipped", s.skipped},
          {"failures", s.failures}, {"worst_margin", s.worst_margin}};
}

Json suite_json(LimitSuite const &s)
{
  return {{"passed", s.passed()},          {"payg_theta", s.payg_theta}, {"paap_theta", s.paap_theta},
          {"payg_ratio", s.payg_ratio},    {"paap_ratio", s.paap_ratio}};
}

Json suite_json(IntervalSuite const &s)
{
  return {{"passed", s.passed()}, {"payg_theta", s.payg_theta}, {"paap_gap", s.paap_gap}};
}

Json suite_json(IcSuite const &s)
{
  return {{"passed", s.passed()},
          {"table_cases", s.table_cases},
          {"table_mismatches", s.table_mismatches},
          {"payg_cases", s.payg_cases},
          {"payg_violations", s.payg_violations},
          {"payg_worst_gain", s.payg_worst_gain},
          {"paap_cases", s.paap_cases},
          {"paap_violations", s.paap_violations},
          {"paap_worst_gain", s.paap_worst_gain}};
}

Json suite_json(IdentitySuite const &s, std::size_t min_steps)
{
  return {{"passed", s.passed(min_steps)},
          {"payg_steps", s.payg_steps},
          {"paap_steps", s.paap_steps},
          {"max_residual", s.max_residual}};
}

Json suite_json(FeasibilitySuite const &s)
{
  return {{"passed", s.passed()},
          {"runs", s.runs},
          {"worst_overload", s.worst_overload},
          {"dual_constraints", s.dual_constraints},
          {"dual_violations", s.dual_violations},
          {"worst_dual_violation", s.worst_dual_violation}};
}

Json suite_json(OracleSuite const &s)
{
  return {{"passed", s.passed()},       {"instances", s.instances}, {"mismatches", s.mismatches},
          {"lp_solves", s.lp_solves},   {"worst_gap", s.worst_gap}};
}

Json suite_json(PricingSuite const &s)
{
  return {{"passed", s.passed()},
          {"bounded", s.bounded},
          {"monotone", s.monotone},
          {"linear_acceptance", s.linear_acceptance},
          {"quadratic_acceptance", s.quadratic_acceptance},
          {"exponential_acceptance", s.exponential_acceptance}};
}

Json suite_json(OrderingSuite const &s, bool runtime)
{
  Json doc{{"passed", s.passed()},
           {"scenarios", s.scenarios},
           {"order_failures", s.order_failures},
           {"welfare", s.welfare},
           {"failures", s.failures}};
  if (runtime)
  {
    doc["runtime"] = s.runtime;
  }
  return doc;
}

Json suite_json(ComplexitySuite const &s, bool runtime)
{
  Json doc{{"passed", s.passed()}, {"users_small", s.users_small}, {"users_large", s.users_large}};
  if (runtime)
  {
    doc["median_small"] = s.median_small;
    doc["median_large"] = s.median_large;
    doc["growth"] = s.growth();
  }
  return doc;
}

/// Runs the named suites; `trials` overrides each suite's default size when set.
Json run_suites(std::vector<std::string> const &names, std::optional<std::size_t> trials,
                std::uint64_t seed, bool runtime, bool &all_passed)
{
  auto size = [&](std::size_t fallback) { return trials.value_or(fallback); };
  Json doc = Json::object();
  auto record = [&](std::string const &name, Json result) {
    all_passed = all_passed && result.at("passed").get<bool>();
    std::cerr << name << ": " << (result.at("passed").get<bool>() ? "passed" : "FAILED") << '\n';
    doc[name] = std::move(result);
  };
  for (auto const &name : names)
  {
    if (name == "bound")
    {
      record("bound_payg", suite_json(bound_suite(Mechanism::payg, size(100), seed)));
      record("bound_paap", suite_json(bound_suite(Mechanism::paap, size(100), seed)));
    }
    else if (name == "limit")
    {
      record(name, suite_json(limit_suite(seed)));
    }
    else if (name == "interval")
    {
      record(name, suite_json(interval_suite(size(5), size(5), seed)));
    }
    else if (name == "ic")
    {
      record(name, suite_json(ic_suite(size(1000), seed)));
    }
    else if (name == "identity")
    {
      auto const steps = size(10000);
      record(name, suite_json(identity_suite(steps, seed), steps));
    }
    else if (name == "feasibility")
    {
      record(name, suite_json(feasibility_suite(size(40), seed)));
    }
    else if (name == "oracle")
    {
      record(name, suite_json(oracle_suite(size(200), seed)));
    }
    else if (name == "pricing")
    {
      record(name, suite_json(pricing_suite(size(20), seed)));
    }
    else if (name == "ordering")
    {
      record(name, suite_json(ordering_suite(size(20), seed), runtime));
    }
    else if (name == "complexity")
    {
      record(name, suite_json(complexity_suite(size(5), seed), runtime));
    }
  }
  return doc;
}

std::string format_table(std::vector<ConfigResult> const &results)
{
  std::ostringstream os;
  os << std::left << std::setw(22) << "configuration" << std::right << std::setw(6) << "step"
     << std::setw(8) << "window" << std::setw(14) << "welfare" << std::setw(12) << "runtime_s"
     << std::setw(8) << "failed" << '\n';
  os << std::fixed;
  for (auto const &r : results)
  {
    os << std::left << std::setw(22) << r.name << std::right << std::setw(6) << r.config.step
       << std::setw(8) << r.config.window << std::setw(14) << std::setprecision(4) << r.welfare
       << std::setw(12) << std::setprecision(5) << r.runtime_seconds << std::setw(8)
       << r.failed_iterations << '\n';
  }
  return os.str();
}

int cli_main(int argc, char **argv)
{
  CLI::App app{"Mobility-as-a-service auctions: generation, simulation, oracles and audits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "maas 0.1.0");

  std::string out;
  bool        runtime = false;

  // gen
  ScenarioSource gen_source;
  auto *gen = app.add_subcommand("gen", "Generate a scenario JSON");
  gen_source.add_to(*gen);
  gen->add_option("--out", out, "Output path");

  // simulate
  ScenarioSource sim_source;
  RunFlags       sim_flags;
  std::string    events;
  auto *simulate = app.add_subcommand("simulate", "Run one horizon configuration");
  sim_source.add_to(*simulate);
  sim_flags.add_to(*simulate);
  simulate->add_option("--out", out, "Summary JSON path; the series CSV is written beside it");
  simulate->add_option("--events", events, "JSONL event log path");
  simulate->add_flag("--runtime", runtime, "Include wall time in the summary");

  // oracle
  ScenarioSource oracle_source;
  bool           relax = false;
  bool           repair = false;
  bool           exhaustive = false;
  std::size_t    node_limit = 1000000;
  auto *oracle = app.add_subcommand("oracle", "Solve the offline problem over the whole horizon");
  oracle_source.add_to(*oracle);
  oracle->add_flag("--lp", relax, "Solve the relaxation instead of the integer program");
  oracle->add_flag("--repair", repair, "Apply the endogenous price repair to the solution");
  oracle->add_flag("--exhaustive", exhaustive, "Cross-check against subset enumeration (<= 20 columns)");
  oracle->add_option("--node-limit", node_limit, "Branch-and-bound node limit");
  oracle->add_option("--out", out, "Output path");

  // ratio
  ScenarioSource ratio_source;
  RunFlags       ratio_flags;
  auto *ratio = app.add_subcommand("ratio", "Competitive ratio bound and realised welfare ratio");
  ratio_source.add_to(*ratio);
  ratio_flags.add_to(*ratio);
  ratio->add_option("--out", out, "Output path");

  // verify
  std::vector<std::string>   suites{"all"};
  std::optional<std::size_t> trials;
  std::uint64_t              verify_seed = 1;
  auto *verify = app.add_subcommand("verify", "Run invariant and audit suites");
  verify->add_option("--suite", suites, "Suites to run")
    ->check(CLI::IsMember({"all", "bound", "limit", "interval", "ic", "identity", "feasibility",
                           "oracle", "pricing", "ordering", "complexity"}));
  verify->add_option("--trials", trials, "Size of each selected suite")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "Base seed");
  verify->add_option("--out", out, "Output path");
  verify->add_flag("--runtime", runtime, "Include timings in the report");

  // compare
  ScenarioSource compare_source;
  std::string    compare_price{"linear"};
  CompareOptions compare_options;
  auto *compare = app.add_subcommand("compare", "Run the four solver configurations on one scenario");
  compare_source.add_to(*compare);
  compare->add_option("--price", compare_price, "Price function")
    ->check(CLI::IsMember({"linear", "quadratic", "exponential"}));
  compare->add_option("--window", compare_options.window, "Look-ahead window")->check(CLI::PositiveNumber);
  compare->add_option("--step", compare_options.offline_step, "Roll step of the rolling offline run")
    ->check(CLI::PositiveNumber);
  compare->add_option("--out", out, "Output path for the JSON table");
  compare->add_flag("--runtime", runtime, "Include wall times in the JSON table");

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::CallForVersion const &e)
  {
    return app.exit(e);
  }
  catch (CLI::ParseError const &e)
  {
    app.exit(e);
    return kUsage;
  }

  try
  {
    if (*gen)
    {
      auto const scenario = gen_source.load();
      emit(scenario_to_json(scenario), output_path(out, stem(scenario, gen_source.seed, "scenario") + ".json"));
      return kOk;
    }
    if (*simulate)
    {
      auto const config = sim_flags.resolve(sim_source);
      auto const scenario = sim_source.load();
      auto const trace = run_rha(config, scenario);
      auto const summary = summarize(trace, scenario, sim_source.seed, runtime);
      auto const path = output_path(out, stem(scenario, sim_source.seed, "run") + ".json");
      emit(to_json(summary), path);
      if (path)
      {
        auto csv_path = *path;
        csv_path.replace_extension(".csv");
        std::ofstream csv(csv_path);
        write_series_csv(csv, summary);
      }
      if (!events.empty())
      {
        std::ofstream log(events);
        write_event_log(log, trace);
      }
      return kOk;
    }
    if (*oracle)
    {
      auto const scenario = oracle_source.load();
      ColumnOptions options;
      options.mechanism = scenario.mechanism;
      auto const instance = make_instance(scenario.users, scenario.catalog,
                                          std::vector<double>(scenario.horizon, scenario.capacity), options);
      BranchOptions branch;
      branch.node_limit = node_limit;
      auto solution = relax ? solve_offline_lp(instance) : solve_offline_ip(instance, branch);
      if (repair)
      {
        solution = endogenous_price_repair(instance, std::move(solution),
                                           scenario.band.value_or(PriceBand{}), scenario.capacity);
      }
      auto doc = to_json(instance, solution);
      int code = kOk;
      if (exhaustive)
      {
        auto const best = exhaustive_optimum(instance);
        doc["exhaustive_objective"] = best;
        if (!relax && !repair && std::abs(best - solution.objective) > 1e-9 * std::max(1.0, best))
        {
          code = kVerificationFailed;
        }
      }
      emit(doc, output_path(out, stem(scenario, oracle_source.seed, "oracle") + ".json"));
      return code;
    }
    if (*ratio)
    {
      auto const config = ratio_flags.resolve(ratio_source);
      auto const scenario = ratio_source.load();
      auto const run = evaluate_ratio(scenario, config);
      Json doc{{"priced", run.priced},
               {"online_welfare", run.online},
               {"offline_welfare", run.offline},
               {"proven_optimal", run.proven_optimal}};
      if (run.priced)
      {
        doc["report"] = to_json(run.report);
      }
      emit(doc, output_path(out, stem(scenario, ratio_source.seed, "ratio") + ".json"));
      return kOk;
    }
    if (*verify)
    {
      if (std::find(suites.begin(), suites.end(), "all") != suites.end())
      {
        suites = {"bound", "limit", "interval", "ic", "identity", "feasibility",
                  "oracle", "pricing", "ordering", "complexity"};
      }
      bool passed = true;
      auto const doc = run_suites(suites, trials, verify_seed, runtime, passed);
      emit(doc, output_path(out, "verify-" + std::to_string(verify_seed) + ".json"));
      return passed ? kOk : kVerificationFailed;
    }
    if (*compare)
    {
      auto const scenario = compare_source.load();
      compare_options.price_function = parse_price_function(compare_price);
      auto const results = compare_configurations(scenario, compare_options);
      std::cout << format_table(results);
      Json rows = Json::array();
      for (auto const &r : results)
      {
        Json row{{"name", r.name},
                 {"config", to_json(r.config)},
                 {"welfare", r.welfare},
                 {"failed_iterations", r.failed_iterations},
                 {"proven_optimal", r.proven_optimal}};
        if (runtime)
        {
          row["runtime_seconds"] = r.runtime_seconds;
        }
        rows.push_back(std::move(row));
      }
      bool ordered = true;
      for (std::size_t k = 1; k < results.size(); ++k)
      {
        ordered = ordered && results[k - 1].welfare + 1e-9 >= results[k].welfare;
      }
      Json doc{{"users", scenario.users.size()}, {"welfare_ordered", ordered}, {"configurations", rows}};
      if (auto const path = output_path(out, stem(scenario, compare_source.seed, "compare") + ".json"))
      {
        emit(doc, path);
      }
      return kOk;
    }
  }
  catch (DomainError const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  catch (Json::exception const &e)
  {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kUsage;
  }
  catch (std::exception const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char **argv)
{
  return cli_main(argc, argv);
}
