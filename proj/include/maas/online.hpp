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
#include "maas/market.hpp"
#include "maas/pricing.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maas {

enum class RejectReason
{
  critical_index,
  dual_price,
  price_gate,
  no_feasible_bundle,
  capacity
};

std::string to_string(RejectReason reason);

struct Rejection
{
  std::size_t  user_id{0};
  RejectReason reason{RejectReason::dual_price};
};

/// One dual-price update, kept so the primal and dual objective changes can be
/// audited after the fact.
struct IdentityStep
{
  std::size_t user_id{0};
  std::size_t bid_id{0};
  double      q_before{0.0};
  double      q_after{0.0};
  double      available{0.0};
  double      alpha{0.0};
  double      reference_resources{0.0};  // largest Q of the user under PAYG, smallest under PAAP
  double      bid_price{0.0};
  double      fraction{1.0};
  bool        accepted{false};  // PAYG: this step belongs to the winning bid

  double dual_utility() const noexcept { return bid_price - reference_resources * q_before; }
  double delta_primal() const noexcept { return bid_price * fraction; }
  double delta_dual() const noexcept { return available * (q_after - q_before) + dual_utility(); }
  /// |dP - (1 - 1/alpha) dD|
  double residual() const noexcept;
};

/// Per-bid record of how a participant's bid fared in the slot.
struct BidAudit
{
  std::size_t user_id{0};
  std::size_t bid_id{0};
  double      resources{0.0};
  double      bid_price{0.0};
  bool        eligible{false};     // a bundle exists at the posted price
  bool        passed_gate{false};  // dual price was at most b/Q when the bid was examined
};

struct SlotOutcome
{
  std::size_t           slot{0};
  Mechanism             mechanism{Mechanism::payg};
  double                available_start{0.0};
  std::optional<double> posted_price;
  bool                  priced{false};  // ratio and alpha were computed
  double                ratio{0.0};
  double                alpha{0.0};
  std::vector<double>   dual_price_trace;
  std::optional<double> q_end;
  bool                  q_negative{false};
  std::vector<Allocation>   allocations;
  std::vector<Rejection>    rejected;
  std::vector<IdentityStep> steps;
  std::vector<BidAudit>     audits;
  std::size_t               users{0};
  std::size_t               participants{0};
  double                    welfare{0.0};

  std::size_t accepted_users() const;
  double      reserved_at_start_slot() const;
};

struct SlotOptions
{
  BundleObjective bundle_objective{BundleObjective::min_inconvenience};
  double          slot_minutes{1.0};
  // Scale a package user's fractions down when they add up to more than one.
  bool normalize_package_total{true};
};

struct CriticalIndex
{
  std::size_t k{1};             // 1-based, as in the usual statement of the rule
  std::size_t participants{0};  // k - 1
};

/// `resources` holds the largest Q of each user in auction order.
CriticalIndex critical_index(std::span<double const> resources, double available);

/// Stable auction order: decreasing best unit bid, then increasing user id.
std::vector<std::size_t> auction_order(std::span<UserRequest const> users);
/// A user's bids by decreasing unit bid, then increasing bid id.
std::vector<std::size_t> bid_order(UserRequest const &user);

SlotOutcome run_payg_slot(CapacityLedger &ledger, std::size_t t, std::span<UserRequest const> users,
                          ModeCatalog const &catalog, double posted_unit_price,
                          SlotOptions const &options = {});

/// b_j * sum(Q) / (Q_j * sum(b)) before any clamping.
double paap_fraction(UserRequest const &user, std::size_t bid_index);

SlotOutcome run_paap_slot(CapacityLedger &ledger, std::size_t t, std::span<UserRequest const> users,
                          ModeCatalog const &catalog, double posted_unit_price,
                          SlotOptions const &options = {});

struct AuctionConfig
{
  Mechanism                mechanism{Mechanism::payg};
  PriceFunction            price_function{PriceFunction::linear};
  std::optional<PriceBand> band{PriceBand{}};  // empty: derive the band from the slot's bids
  SlotOptions              slot;
};

/// Posted unit price for slot t: the price function evaluated at the load of
/// the previous slot. Empty when the band must come from bids and there are none.
std::optional<double> posted_price(CapacityLedger const &ledger, std::size_t t,
                                   std::span<UserRequest const> users, AuctionConfig const &config);

/// Prices the slot, runs the mechanism and settles payments.
SlotOutcome auction_step(CapacityLedger &ledger, std::size_t t, std::span<UserRequest const> users,
                         ModeCatalog const &catalog, AuctionConfig const &config);

struct DualCheck
{
  double      worst_violation{0.0};  // max over constraints of b - Q q - u, floored at 0
  std::size_t constraints{0};
  std::size_t violations{0};
};

/// End-of-slot dual feasibility over the participants' eligible bids, with
/// u_i = max(0, max over gate-passing bids of b - Q q_end) and 0 otherwise.
DualCheck dual_feasibility(SlotOutcome const &outcome, double tolerance = kEpsilon);

}  // namespace maas
