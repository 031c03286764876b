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

#include "maas/market.hpp"
#include "maas/offline.hpp"
#include "maas/online.hpp"
#include "maas/pricing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace maas {

enum class SolverKind
{
  online_algorithm,
  online_milp,
  offline_milp
};

std::string to_string(SolverKind kind);
SolverKind  parse_solver(std::string const &text);

/// How accepted users are charged when the step is a single slot.
enum class PaymentRule
{
  posted_price,  // Q times the posted unit price
  dual_price     // Q times the slot's final dual price
};

std::string to_string(PaymentRule rule);

struct HorizonConfig
{
  std::size_t   step{1};
  std::size_t   window{1};
  Mechanism     mechanism{Mechanism::payg};
  SolverKind    solver{SolverKind::online_algorithm};
  PriceFunction price_function{PriceFunction::linear};
  PaymentRule   payment{PaymentRule::dual_price};
  SlotOptions   slot;
  BranchOptions branch;

  /// Throws DomainError for combinations the configuration table does not allow.
  void validate(std::size_t horizon) const;
};

struct Scenario
{
  ModeCatalog              catalog{ModeCatalog::standard()};
  double                   capacity{500.0};
  std::size_t              horizon{1};
  Mechanism                mechanism{Mechanism::payg};
  std::optional<PriceBand> band{PriceBand{}};
  std::vector<UserRequest> users;

  void validate() const;
};

enum class UserState
{
  pending,
  allocated,
  rejected
};

/// Indices of pending users that have ordered by `order_cutoff` and depart in
/// [first, last].
std::vector<std::size_t> window_users(std::vector<UserRequest> const &users,
                                      std::vector<UserState> const &state, std::size_t order_cutoff,
                                      std::size_t first, std::size_t last);

/// Convenience form for a single slot t and booking window length.
std::vector<std::size_t> window_users(std::vector<UserRequest> const &users,
                                      std::vector<UserState> const &state, std::size_t t,
                                      std::size_t window);

struct IterationRecord
{
  std::size_t index{0};
  std::size_t first_slot{0};
  std::size_t last_slot{0};
  std::size_t users{0};
  std::size_t accepted{0};
  double      welfare{0.0};
  double      objective{0.0};
  std::size_t nodes{0};
  bool        proven_optimal{true};
  std::size_t repair_iterations{0};
  bool        repair_capped{false};
  std::string error;
};

struct SlotSeries
{
  std::vector<double>                welfare;       // by service start slot
  std::vector<std::optional<double>> unit_price;    // posted or repaired price
  std::vector<double>                availability;  // A_t at the end of the run
  std::vector<std::size_t>           participants;  // users departing at t that were considered
  std::vector<std::size_t>           accepted;      // of those, the ones served
  std::vector<std::optional<double>> acceptance;    // accepted / participants

  explicit SlotSeries(std::size_t horizon = 0);
};

struct AuctionTrace
{
  HorizonConfig                config;
  std::vector<SlotOutcome>     outcomes;  // single-slot online algorithm steps
  std::vector<IterationRecord> iterations;
  std::vector<Allocation>      allocations;
  std::vector<Rejection>       final_rejections;
  SlotSeries                   series;
  double                       total_welfare{0.0};
  double                       mean_acceptance{0.0};
  double                       runtime_seconds{0.0};
};

AuctionTrace run_rha(HorizonConfig const &config, Scenario const &scenario);

}  // namespace maas
