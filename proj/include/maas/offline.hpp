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

#include "maas/bundle.hpp"
#include "maas/lp.hpp"
#include "maas/market.hpp"
#include "maas/pricing.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maas {

/// Which service slots a request may be scheduled in.
enum class IndexSet
{
  booking_window,     // O_i through O_i + flexibility
  up_to_departure     // every slot t <= O_i
};

/// Slots a scheduled column consumes capacity in.
enum class Occupancy
{
  reservation_window,  // the same span an online reservation would cover
  single_slot
};

struct ColumnOptions
{
  Mechanism       mechanism{Mechanism::payg};
  IndexSet        index_set{IndexSet::booking_window};
  std::size_t     flexibility{0};
  Occupancy       occupancy{Occupancy::reservation_window};
  std::size_t     first_slot{0};
  BundleObjective bundle_objective{BundleObjective::min_inconvenience};
  double          slot_minutes{1.0};
  // Per-slot posted unit prices for the price gate; empty disables the gate.
  std::vector<double> posted_prices;
};

/// One (user, bid, slot) choice with a witness bundle.
struct CompactColumn
{
  std::size_t user_id{0};
  std::size_t user_index{0};
  std::size_t bid_id{0};
  std::size_t bid_index{0};
  std::size_t slot{0};
  double      resources{0.0};
  double      price{0.0};
  SlotWindow  occupancy;
  Bundle      witness;
};

struct OfflineInstance
{
  std::vector<CompactColumn> columns;
  std::vector<double>        capacities;  // A_t per slot
  std::size_t                user_count{0};
};

std::vector<CompactColumn> build_columns(std::span<UserRequest const> users,
                                         ModeCatalog const &catalog, std::size_t horizon,
                                         ColumnOptions const &options);

OfflineInstance make_instance(std::span<UserRequest const> users, ModeCatalog const &catalog,
                              std::vector<double> capacities, ColumnOptions const &options);

struct RepairStep
{
  std::size_t              iteration{0};
  std::vector<std::size_t> removed;  // column indices
  std::vector<double>      prices;
};

struct OfflineSolution
{
  std::vector<double> chi;
  double              objective{0.0};
  bool                integral{false};
  bool                proven_optimal{true};
  std::size_t         nodes{0};
  // LP solves only.
  std::vector<double> slot_duals;  // q(t)
  std::vector<double> user_duals;  // u_i by user index
  double              dual_objective{0.0};
  // Filled by endogenous_price_repair.
  std::vector<double>     slot_prices;
  std::vector<double>     payments;  // per column
  std::vector<RepairStep> repair_log;
  bool                    repair_capped{false};

  /// Load per slot, Q times chi summed over each column's occupancy.
  std::vector<double> load(OfflineInstance const &instance) const;
};

/// Fractional relaxation with dual prices for every slot and user row.
OfflineSolution solve_offline_lp(OfflineInstance const &instance);

struct BranchOptions
{
  std::size_t node_limit{1000000};
  double      tolerance{1e-9};
};

/// Binary optimum by depth-first branch and bound on the relaxation.
OfflineSolution solve_offline_ip(OfflineInstance const &instance, BranchOptions const &options = {});

/// Drops selected columns whose bid falls below Q times the load-driven linear
/// price of their slot, lowest unit bid first and one per slot per pass, until
/// every remaining column clears its price.
OfflineSolution endogenous_price_repair(OfflineInstance const &instance, OfflineSolution solution,
                                        PriceBand band, double capacity,
                                        std::vector<double> const &base_load = {},
                                        std::size_t max_iterations = 0);

/// max(0, max over the user's columns of b - Q * sum of q over the occupancy).
/// Throws std::logic_error when the solver's own user duals disagree.
std::vector<double> dual_utilities(OfflineInstance const &instance, OfflineSolution const &lp,
                                   double tolerance = 1e-7);

/// Largest amount by which any dual constraint or sign restriction is violated.
double dual_infeasibility(OfflineInstance const &instance, std::vector<double> const &q,
                          std::vector<double> const &u);

/// Greedy feasible binary selection, highest price first.
std::vector<double> greedy_selection(OfflineInstance const &instance,
                                     std::vector<std::size_t> const &priority);

}  // namespace maas
