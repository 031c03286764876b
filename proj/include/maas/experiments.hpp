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

#pragma once

#include "maas/analysis.hpp"
#include "maas/demand.hpp"
#include "maas/horizon.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace maas {

struct SmallInstanceOptions
{
  std::size_t max_slots{10};
  std::size_t max_users{8};  // per slot
  std::size_t max_bids{3};
  double      capacity_min{20.0};
  double      capacity_max{60.0};
  std::size_t max_package{3};
};

/// Random desk-scale instance: slot count, arrivals per slot and capacity drawn
/// uniformly, requests drawn like generated demand with distances up to 18 km.
Scenario small_instance(std::uint64_t seed, Mechanism mechanism, SmallInstanceOptions const &options = {});

/// 120-slot day of trips with the peak layout scaled down, capacity 500.
DemandConfig scaled_trips(std::size_t horizon = 120);
/// 20 days of packages with arrivals and capacity both scaled by one fifth.
DemandConfig scaled_packages(std::size_t horizon = 20);

struct RatioRun
{
  RatioReport  report;
  bool         priced{false};
  double       online{0.0};
  double       offline{0.0};
  bool         proven_optimal{false};
  AuctionTrace trace;
};

/// Runs the online configuration, then solves the offline problem over the same
/// requests with each slot's bundles restricted to the prices the run posted.
/// The offline problem is the integer program under pay-as-you-go and the
/// relaxation under packages.
RatioRun evaluate_ratio(Scenario const &scenario, HorizonConfig const &config,
                        BranchOptions const &branch = {});

struct ConfigResult
{
  std::string   name;
  HorizonConfig config;
  double        welfare{0.0};
  double        runtime_seconds{0.0};
  std::size_t   failed_iterations{0};
  bool          proven_optimal{true};
};

struct CompareOptions
{
  std::size_t   window{10};
  std::size_t   offline_step{10};
  PriceFunction price_function{PriceFunction::linear};
  BranchOptions branch;
};

/// Online algorithm, online MILP, rolling offline and single-horizon offline,
/// in that order.
std::vector<ConfigResult> compare_configurations(Scenario const &scenario,
                                                 CompareOptions const &options = {});

/// Best objective of an offline instance by enumerating every column subset.
/// Only for instances of at most 20 columns.
double exhaustive_optimum(OfflineInstance const &instance);

// Verification suites. Each returns what it measured and whether it passed.

struct BoundSuite
{
  std::size_t checked{0};
  std::size_t skipped{0};
  std::size_t failures{0};
  double      worst_margin{0.0};  // min over checks of (online - theta offline) / offline
  double      seconds{0.0};
  bool        passed() const { return checked > 0 && failures == 0; }
};
BoundSuite bound_suite(Mechanism mechanism, std::size_t instances, std::uint64_t seed,
                       double slack = 1e-6);

struct LimitSuite
{
  double payg_theta{0.0};
  double paap_theta{0.0};
  double payg_ratio{0.0};
  double paap_ratio{0.0};
  bool   passed() const;
};
LimitSuite limit_suite(std::uint64_t seed);

struct IntervalSuite
{
  std::vector<double> payg_theta;
  std::vector<double> paap_gap;
  bool                passed() const;
};
IntervalSuite interval_suite(std::size_t payg_runs, std::size_t paap_runs, std::uint64_t seed);

struct IcSuite
{
  std::size_t table_cases{0};
  std::size_t table_mismatches{0};
  std::size_t payg_cases{0};
  std::size_t payg_violations{0};
  double      payg_worst_gain{0.0};
  std::size_t paap_cases{0};
  std::size_t paap_violations{0};
  double      paap_worst_gain{0.0};
  bool passed() const { return table_mismatches == 0 && payg_violations == 0 && paap_violations == 0; }
};
IcSuite ic_suite(std::size_t trials, std::uint64_t seed);

struct IdentitySuite
{
  std::size_t payg_steps{0};
  std::size_t paap_steps{0};
  double      max_residual{0.0};
  bool        passed(std::size_t min_steps) const;
};
IdentitySuite identity_suite(std::size_t min_steps, std::uint64_t seed);

struct FeasibilitySuite
{
  std::size_t runs{0};
  double      worst_overload{0.0};  // max over slots of load - capacity
  std::size_t dual_constraints{0};
  std::size_t dual_violations{0};
  double      worst_dual_violation{0.0};
  std::size_t payg_dual_violations{0};
  std::size_t paap_dual_violations{0};
  bool passed() const { return worst_overload <= 1e-9 && dual_violations == 0; }
};
FeasibilitySuite feasibility_suite(std::size_t runs, std::uint64_t seed);

struct OracleSuite
{
  std::size_t instances{0};
  std::size_t mismatches{0};
  std::size_t lp_solves{0};
  double      worst_gap{0.0};  // relative LP duality gap
  bool        passed() const { return instances > 0 && mismatches == 0 && worst_gap <= 1e-7; }
};
OracleSuite oracle_suite(std::size_t instances, std::uint64_t seed);

struct PricingSuite
{
  bool   bounded{true};
  bool   monotone{true};
  double linear_acceptance{0.0};
  double quadratic_acceptance{0.0};
  double exponential_acceptance{0.0};
  bool   passed() const;
};
PricingSuite pricing_suite(std::size_t runs, std::uint64_t seed);

struct OrderingSuite
{
  std::size_t         scenarios{0};
  std::size_t         order_failures{0};
  std::vector<double> welfare;  // summed per configuration, compare order
  std::vector<double> runtime;  // summed per configuration
  std::vector<std::string> failures;
  bool passed() const;
};
OrderingSuite ordering_suite(std::size_t scenarios, std::uint64_t seed);

struct ComplexitySuite
{
  std::size_t users_small{0};
  std::size_t users_large{0};
  double      median_small{0.0};
  double      median_large{0.0};
  double      growth() const { return median_large / median_small; }
  bool        passed() const { return growth() <= 2.5; }
};
ComplexitySuite complexity_suite(std::size_t repetitions, std::uint64_t seed);

}  // namespace maas
