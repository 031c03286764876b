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

#include "maas/pricing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <array>
#include <random>

namespace maas {

namespace {

using Rng = std::mt19937_64;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_resources(Scenario const &s)
{
  double best = 0.0;
  for (auto const &u : s.users)
  {
    best = std::max(best, u.max_resources());
  }
  return best;
}

std::vector<double> slot_load(AuctionTrace const &trace, std::size_t horizon)
{
  std::vector<double> load(horizon, 0.0);
  for (auto const &a : trace.allocations)
  {
    for (std::size_t t = a.window.start; t <= a.window.end; ++t)
    {
      load[t] += a.reserved();
    }
  }
  return load;
}

ColumnOptions package_columns()
{
  ColumnOptions opts;
  opts.mechanism = Mechanism::paap;
  return opts;
}

}  // namespace

Scenario small_instance(std::uint64_t seed, Mechanism mechanism, SmallInstanceOptions const &options)
{
  Rng rng(seed);
  DemandConfig c;
  c.mechanism = mechanism;
  c.bids_max = options.max_bids;
  c.package_min = 1;
  c.package_max = options.max_package;
  Scenario s;
  s.mechanism = mechanism;
  s.horizon = std::uniform_int_distribution<std::size_t>(1, options.max_slots)(rng);
  s.capacity =
    std::uniform_real_distribution<double>(options.capacity_min, options.capacity_max)(rng);
  std::uniform_int_distribution<std::size_t> arrivals(1, options.max_users);
  std::size_t id = 0;
  for (std::size_t t = 0; t < s.horizon; ++t)
  {
    std::size_t const n = arrivals(rng);
    for (std::size_t k = 0; k < n; ++k)
    {
      s.users.push_back(draw_request(c, s.catalog, rng, id++, t));
    }
  }
  return s;
}

DemandConfig scaled_trips(std::size_t horizon)
{
  return DemandConfig::trips(horizon);
}

DemandConfig scaled_packages(std::size_t horizon)
{
  auto c = DemandConfig::packages(horizon);
  c.capacity = 2000.0;
  c.arrivals = {{0, horizon - 1, 10.0, 2.0}};
  return c;
}

RatioRun evaluate_ratio(Scenario const &scenario, HorizonConfig const &config,
                        BranchOptions const &branch)
{
  RatioRun run;
  run.trace = run_rha(config, scenario);
  run.online = run.trace.total_welfare;
  try
  {
    run.report = competitive_ratio(run.trace.outcomes, config.mechanism);
    run.priced = true;
  }
  catch (DomainError const &)
  {
    run.priced = false;
  }
  ColumnOptions opts;
  opts.mechanism = config.mechanism;
  opts.bundle_objective = config.slot.bundle_objective;
  opts.slot_minutes = config.slot.slot_minutes;
  opts.posted_prices.resize(scenario.horizon);
  for (std::size_t t = 0; t < scenario.horizon; ++t)
  {
    opts.posted_prices[t] = run.trace.series.unit_price[t].value_or(0.0);
  }
  auto const inst = make_instance(scenario.users, scenario.catalog,
                                  std::vector<double>(scenario.horizon, scenario.capacity), opts);
  auto const sol = config.mechanism == Mechanism::payg ? solve_offline_ip(inst, branch)
                                                       : solve_offline_lp(inst);
  run.offline = sol.objective;
  run.proven_optimal = sol.proven_optimal;
  if (run.priced)
  {
    run.report.attach_welfare_ratio(welfare_ratio(run.online, run.offline));
  }
  return run;
}

std::vector<ConfigResult> compare_configurations(Scenario const &scenario, CompareOptions const &options)
{
  if (scenario.horizon < 2)
  {
    throw DomainError("comparing configurations needs at least two slots");
  }
  HorizonConfig base;
  base.mechanism = scenario.mechanism;
  base.price_function = options.price_function;
  base.branch = options.branch;
  base.window = options.window;

  std::vector<ConfigResult> out(4);
  out[0].name = "RHA online algorithm";
  out[0].config = base;
  out[1].name = "RHA online MILP";
  out[1].config = base;
  out[1].config.solver = SolverKind::online_milp;
  out[2].name = "RHA offline MILP";
  out[2].config = base;
  out[2].config.solver = SolverKind::offline_milp;
  out[2].config.step = std::clamp<std::size_t>(options.offline_step, 2, scenario.horizon);
  out[3].name = "SHA offline MILP";
  out[3].config = base;
  out[3].config.solver = SolverKind::offline_milp;
  out[3].config.step = scenario.horizon;
  out[3].config.window = scenario.horizon;
  for (auto &r : out)
  {
    auto const trace = run_rha(r.config, scenario);
    r.welfare = trace.total_welfare;
    r.runtime_seconds = trace.runtime_seconds;
    for (auto const &it : trace.iterations)
    {
      r.failed_iterations += !it.error.empty();
      r.proven_optimal = r.proven_optimal && it.proven_optimal;
    }
  }
  return out;
}

double exhaustive_optimum(OfflineInstance const &instance)
{
  std::size_t const n = instance.columns.size();
  if (n > 20)
  {
    throw DomainError("exhaustive search is limited to 20 columns");
  }
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
  {
    std::vector<double> load(instance.capacities.size(), 0.0);
    std::vector<bool>   used(instance.user_count, false);
    double value = 0.0;
    bool   ok = true;
    for (std::size_t c = 0; c < n && ok; ++c)
    {
      if (!(mask >> c & 1u))
      {
        continue;
      }
      auto const &col = instance.columns[c];
      ok = !used[col.user_index];
      used[col.user_index] = true;
      for (std::size_t t = col.occupancy.start; t <= col.occupancy.end && ok; ++t)
      {
        load[t] += col.resources;
        ok = load[t] <= instance.capacities[t] + kEpsilon;
      }
      value += col.price;
    }
    if (ok)
    {
      best = std::max(best, value);
    }
  }
  return best;
}

BoundSuite bound_suite(Mechanism mechanism, std::size_t instances, std::uint64_t seed, double slack)
{
  auto const start = Clock::now();
  BoundSuite suite;
  suite.worst_margin = 1.0;
  HorizonConfig cfg;
  cfg.mechanism = mechanism;
  BranchOptions branch;
  branch.node_limit = 200000;
  for (std::uint64_t k = 0; suite.checked < instances && k < 10 * instances; ++k)
  {
    auto const s = small_instance(seed + k, mechanism);
    auto const run = evaluate_ratio(s, cfg, branch);
    if (!run.priced || !run.proven_optimal)
    {
      ++suite.skipped;
      continue;
    }
    ++suite.checked;
    double const theta = run.report.theta;
    if (run.offline > 0.0)
    {
      suite.worst_margin = std::min(suite.worst_margin, (run.online - theta * run.offline) / run.offline);
    }
    suite.failures += run.online < theta * run.offline - slack * std::abs(run.offline);
  }
  suite.seconds = seconds_since(start);
  return suite;
}

bool LimitSuite::passed() const
{
  auto inside = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  return payg_ratio <= 1e-4 && paap_ratio <= 1e-4 && inside(payg_theta, 0.6311, 0.6331) &&
         inside(paap_theta, 0.6311, 0.6331) && inside(paap_theta, 0.6321, 0.6322);
}

LimitSuite limit_suite(std::uint64_t seed)
{
  LimitSuite suite;
  for (auto m : {Mechanism::payg, Mechanism::paap})
  {
    SmallInstanceOptions opts;
    opts.max_slots = 5;
    auto s = small_instance(seed, m, opts);
    // Every requested amount is at most a 1/20000 share of the capacity.
    s.capacity = 2e4 * max_resources(s);
    HorizonConfig cfg;
    cfg.mechanism = m;
    auto const trace = run_rha(cfg, s);
    auto const r = competitive_ratio(trace.outcomes, m);
    double worst = 0.0;
    for (auto const &o : trace.outcomes)
    {
      if (o.priced)
      {
        worst = std::max(worst, o.ratio);
      }
    }
    (m == Mechanism::payg ? suite.payg_theta : suite.paap_theta) = r.theta;
    (m == Mechanism::payg ? suite.payg_ratio : suite.paap_ratio) = worst;
  }
  return suite;
}

bool IntervalSuite::passed() const
{
  bool ok = !payg_theta.empty() && !paap_gap.empty();
  for (double t : payg_theta)
  {
    ok = ok && t >= 0.50 && t <= 0.66;
  }
  for (double g : paap_gap)
  {
    ok = ok && g >= 0.0;
  }
  return ok;
}

IntervalSuite interval_suite(std::size_t payg_runs, std::size_t paap_runs, std::uint64_t seed)
{
  IntervalSuite suite;
  HorizonConfig cfg;
  for (std::size_t k = 0; k < payg_runs; ++k)
  {
    auto const s = gen_payg_demand(scaled_trips(), seed + k);
    auto const trace = run_rha(cfg, s);
    suite.payg_theta.push_back(competitive_ratio_payg(trace.outcomes).theta);
  }
  cfg.mechanism = Mechanism::paap;
  for (std::size_t k = 0; k < paap_runs; ++k)
  {
    auto const s = gen_paap_demand(scaled_packages(), seed + k);
    auto const run = evaluate_ratio(s, cfg);
    suite.paap_gap.push_back(run.report.gap.value_or(-1.0));
  }
  return suite;
}

IcSuite ic_suite(std::size_t trials, std::uint64_t seed)
{
  IcSuite suite;
  Rng rng(seed);
  // Every strict ordering of three values, then random triples.
  std::vector<double> values{1.0, 2.0, 3.0};
  std::vector<std::array<double, 3>> triples;
  do
  {
    triples.push_back({values[0], values[1], values[2]});
  } while (std::next_permutation(values.begin(), values.end()));
  std::uniform_real_distribution<double> unit(0.0, 10.0);
  for (std::size_t k = 0; k < trials; ++k)
  {
    triples.push_back({unit(rng), unit(rng), unit(rng)});
  }
  for (auto const &[v, p, b] : triples)
  {
    auto const c = classify_ordering(v, p, b);
    if (!c)
    {
      continue;
    }
    ++suite.table_cases;
    auto const o = threshold_outcome(v, p, b);
    int const sign = o.u_hat < o.u ? -1 : (o.u_hat > o.u ? 1 : 0);
    suite.table_mismatches += sign != predicted_comparison(*c);
  }

  auto const grid = default_misreport_grid();
  SmallInstanceOptions one_slot;
  one_slot.max_slots = 1;
  for (std::size_t k = 0; k < trials; ++k)
  {
    auto const s = small_instance(seed + k, Mechanism::payg, one_slot);
    AuctionConfig ac;
    ac.band = s.band;
    SlotAuction auction{CapacityLedger(s.capacity, 1), 0, s.users, s.catalog, ac};
    std::size_t const target = std::uniform_int_distribution<std::size_t>(0, s.users.size() - 1)(rng);
    auto const r = ic_audit_payg(auction, s.users[target].user_id, grid);
    suite.payg_cases += r.cases;
    suite.payg_violations += r.violations;
    suite.payg_worst_gain = std::max(suite.payg_worst_gain, r.worst_gain);
  }
  for (std::size_t k = 0; k < trials; ++k)
  {
    auto const s = small_instance(seed + k, Mechanism::paap, one_slot);
    auto const inst = make_instance(s.users, s.catalog, {s.capacity}, package_columns());
    std::size_t const target = std::uniform_int_distribution<std::size_t>(0, s.users.size() - 1)(rng);
    auto const r = ic_audit_paap(inst, target, grid);
    suite.paap_cases += r.cases;
    suite.paap_violations += r.violations;
    suite.paap_worst_gain = std::max(suite.paap_worst_gain, r.worst_gain);
  }
  return suite;
}

bool IdentitySuite::passed(std::size_t min_steps) const
{
  return payg_steps >= min_steps && paap_steps >= min_steps && max_residual <= 1e-9;
}

IdentitySuite identity_suite(std::size_t min_steps, std::uint64_t seed)
{
  IdentitySuite suite;
  SmallInstanceOptions opts;
  opts.capacity_max = 120.0;
  for (std::uint64_t k = 0; (suite.payg_steps < min_steps || suite.paap_steps < min_steps) && k < 100000;
       ++k)
  {
    for (auto m : {Mechanism::payg, Mechanism::paap})
    {
      HorizonConfig cfg;
      cfg.mechanism = m;
      auto const trace = run_rha(cfg, small_instance(seed + k, m, opts));
      auto const r = primal_dual_identity_check(trace.outcomes);
      (m == Mechanism::payg ? suite.payg_steps : suite.paap_steps) += r.accepted_steps;
      suite.max_residual = std::max(suite.max_residual, r.max_residual);
    }
  }
  return suite;
}

FeasibilitySuite feasibility_suite(std::size_t runs, std::uint64_t seed)
{
  FeasibilitySuite suite;
  for (std::size_t k = 0; k < runs; ++k)
  {
    for (auto m : {Mechanism::payg, Mechanism::paap})
    {
      auto const s = small_instance(seed + k, m);
      for (auto solver : {SolverKind::online_algorithm, SolverKind::online_milp})
      {
        HorizonConfig cfg;
        cfg.mechanism = m;
        cfg.solver = solver;
        auto const trace = run_rha(cfg, s);
        ++suite.runs;
        auto const load = slot_load(trace, s.horizon);
        for (double l : load)
        {
          suite.worst_overload = std::max(suite.worst_overload, l - s.capacity);
        }
        for (auto const &o : trace.outcomes)
        {
          suite.worst_overload =
            std::max(suite.worst_overload, o.reserved_at_start_slot() - o.available_start);
          auto const d = dual_feasibility(o, 1e-9);
          suite.dual_constraints += d.constraints;
          suite.dual_violations += d.violations;
          (m == Mechanism::payg ? suite.payg_dual_violations : suite.paap_dual_violations) +=
            d.violations;
          suite.worst_dual_violation = std::max(suite.worst_dual_violation, d.worst_violation);
        }
      }
    }
  }
  return suite;
}

OracleSuite oracle_suite(std::size_t instances, std::uint64_t seed)
{
  OracleSuite suite;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto gap_of = [&suite](OfflineSolution const &lp) {
    ++suite.lp_solves;
    double const gap = std::abs(lp.objective - lp.dual_objective) / std::max(1.0, std::abs(lp.objective));
    suite.worst_gap = std::max(suite.worst_gap, gap);
  };
  for (std::size_t k = 0; k < instances; ++k)
  {
    OfflineInstance inst;
    std::size_t const slots = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    std::size_t const cols = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    inst.user_count = std::uniform_int_distribution<std::size_t>(1, cols)(rng);
    for (std::size_t t = 0; t < slots; ++t)
    {
      inst.capacities.push_back(5.0 + 15.0 * unit(rng));
    }
    for (std::size_t c = 0; c < cols; ++c)
    {
      CompactColumn col;
      col.user_index = std::uniform_int_distribution<std::size_t>(0, inst.user_count - 1)(rng);
      col.user_id = col.user_index;
      std::size_t a = std::uniform_int_distribution<std::size_t>(0, slots - 1)(rng);
      std::size_t b = std::uniform_int_distribution<std::size_t>(0, slots - 1)(rng);
      col.occupancy = {std::min(a, b), std::max(a, b)};
      col.slot = col.occupancy.start;
      col.resources = 1.0 + 9.0 * unit(rng);
      col.price = col.resources * (1.0 + 5.0 * unit(rng));
      inst.columns.push_back(col);
    }
    ++suite.instances;
    auto const ip = solve_offline_ip(inst);
    double const truth = exhaustive_optimum(inst);
    suite.mismatches += !ip.proven_optimal || std::abs(ip.objective - truth) > 1e-9 * std::max(1.0, truth);
    gap_of(solve_offline_lp(inst));
  }
  // Relaxations of generated package instances.
  for (std::size_t k = 0; k < instances; ++k)
  {
    auto const s = small_instance(seed + k, Mechanism::paap);
    auto const inst = make_instance(s.users, s.catalog, std::vector<double>(s.horizon, s.capacity),
                                    package_columns());
    gap_of(solve_offline_lp(inst));
  }
  return suite;
}

bool PricingSuite::passed() const
{
  return bounded && monotone && exponential_acceptance >= linear_acceptance &&
         exponential_acceptance >= quadratic_acceptance;
}

PricingSuite pricing_suite(std::size_t runs, std::uint64_t seed)
{
  PricingSuite suite;
  PriceBand const band{2.0, 12.0};
  for (double ratio : {1e-4, 0.05, 0.5, 1.0})
  {
    double const alpha = alpha_from_ratio(ratio);
    for (auto kind : {PriceFunction::linear, PriceFunction::exponential})
    {
      PriceParams params{500.0, band, kind, alpha};
      double prev = -1.0;
      for (std::size_t k = 0; k < 1000; ++k)
      {
        double const z = 500.0 * static_cast<double>(k) / 999.0;
        double const p = unit_price(z, params);
        suite.bounded = suite.bounded && p >= band.b_min - 1e-12 && p <= band.b_min + band.b_max + 1e-9;
        suite.monotone = suite.monotone && p >= prev;
        prev = p;
      }
    }
  }
  for (std::size_t k = 0; k < runs; ++k)
  {
    auto const s = gen_payg_demand(scaled_trips(), seed + k);
    for (auto kind : {PriceFunction::linear, PriceFunction::quadratic, PriceFunction::exponential})
    {
      HorizonConfig cfg;
      cfg.price_function = kind;
      double const a = run_rha(cfg, s).mean_acceptance / static_cast<double>(runs);
      (kind == PriceFunction::linear      ? suite.linear_acceptance
       : kind == PriceFunction::quadratic ? suite.quadratic_acceptance
                                          : suite.exponential_acceptance) += a;
    }
  }
  return suite;
}

bool OrderingSuite::passed() const
{
  return scenarios > 0 && order_failures == 0 && runtime[0] < runtime[1] && runtime[1] < runtime[3];
}

OrderingSuite ordering_suite(std::size_t scenarios, std::uint64_t seed)
{
  OrderingSuite suite;
  suite.welfare.assign(4, 0.0);
  suite.runtime.assign(4, 0.0);
  auto demand = scaled_trips(40);
  demand.booking_window = 10;
  for (std::size_t k = 0; k < scenarios; ++k)
  {
    auto const s = gen_payg_demand(demand, seed + k);
    auto const r = compare_configurations(s);
    ++suite.scenarios;
    for (std::size_t c = 0; c < 4; ++c)
    {
      suite.welfare[c] += r[c].welfare;
      suite.runtime[c] += r[c].runtime_seconds;
    }
    double const tol = 1e-9 * std::max(1.0, r[3].welfare);
    bool const ordered = r[3].welfare + tol >= r[2].welfare && r[2].welfare + tol >= r[1].welfare &&
                         r[1].welfare + tol >= r[0].welfare;
    if (!ordered)
    {
      ++suite.order_failures;
      std::string line = "seed " + std::to_string(seed + k) + ":";
      for (auto const &c : r)
      {
        line += " " + std::to_string(c.welfare);
      }
      suite.failures.push_back(line);
    }
  }
  return suite;
}

ComplexitySuite complexity_suite(std::size_t repetitions, std::uint64_t seed)
{
  auto small = DemandConfig::trips();
  auto large = small;
  for (auto &band : large.arrivals)
  {
    band.mean *= 2.0;
    band.stddev *= 2.0;
  }
  auto const a = gen_payg_demand(small, seed);
  auto const b = gen_payg_demand(large, seed);
  auto median_time = [repetitions](Scenario const &s) {
    std::vector<double> times;
    for (std::size_t r = 0; r < repetitions; ++r)
    {
      times.push_back(run_rha(HorizonConfig{}, s).runtime_seconds);
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };
  ComplexitySuite suite;
  suite.users_small = a.users.size();
  suite.users_large = b.users.size();
  suite.median_small = median_time(a);
  suite.median_large = median_time(b);
  return suite;
}

}  // namespace maas
