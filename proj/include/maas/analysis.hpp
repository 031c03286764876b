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

#include <optional>
#include <span>
#include <vector>

namespace maas {

struct RatioReport
{
  Mechanism                          mechanism{Mechanism::payg};
  double                             theta{0.0};
  double                             ratio_extreme{0.0};  // max R-bar under PAYG, min R-underbar under PAAP
  double                             alpha_min{0.0};
  std::vector<std::optional<double>> ratio_series;  // per outcome, empty when the slot was not priced
  std::vector<std::optional<double>> alpha_series;
  std::optional<double>              welfare_ratio;
  std::optional<double>              gap;  // welfare_ratio - theta

  void attach_welfare_ratio(double ratio);
};

/// (1 - R_max)(1 - 1/alpha_min) floored at zero. Throws DomainError when no slot was priced.
RatioReport competitive_ratio_payg(std::span<SlotOutcome const> outcomes);
/// 1 - 1/alpha_min. Throws DomainError when no slot was priced.
RatioReport competitive_ratio_paap(std::span<SlotOutcome const> outcomes);
RatioReport competitive_ratio(std::span<SlotOutcome const> outcomes, Mechanism mechanism);

/// Online over offline welfare. The empty instance scores 1; positive online
/// welfare against a zero offline optimum throws std::logic_error.
double welfare_ratio(double online, double offline);

struct IdentityReport
{
  double      max_residual{0.0};
  std::size_t accepted_steps{0};
};

IdentityReport primal_dual_identity_check(std::span<SlotOutcome const> outcomes);

/// The six strict orderings of valuation v, payment p and reported bid b-hat.
enum class OrderingCase
{
  v_p_bhat = 1,  // v < p < b-hat
  v_bhat_p = 2,
  p_v_bhat = 3,
  bhat_v_p = 4,
  bhat_p_v = 5,
  p_bhat_v = 6
};

/// Empty when two of the three values tie.
std::optional<OrderingCase> classify_ordering(double v, double p, double b_hat);

struct ThresholdOutcome
{
  double x_hat{0.0};
  double u_hat{0.0};
  double x{0.0};
  double u{0.0};
};

/// Acceptance iff the bid covers the payment, for both the misreport and the truth.
ThresholdOutcome threshold_outcome(double v, double p, double b_hat);

/// -1 when misreporting is strictly worse, 0 when it is the same.
int predicted_comparison(OrderingCase c);

struct SlotAuction
{
  CapacityLedger           ledger;
  std::size_t              slot{0};
  std::vector<UserRequest> users;
  ModeCatalog              catalog{ModeCatalog::standard()};
  AuctionConfig            config;
};

struct Misreport
{
  std::size_t bid_id{0};
  double      factor{1.0};
  double      truthful_utility{0.0};
  double      misreport_utility{0.0};
};

struct IcReport
{
  std::size_t            cases{0};
  std::size_t            violations{0};
  double                 worst_gain{0.0};  // largest misreport minus truthful utility
  std::size_t            classified{0};
  std::size_t            table_mismatches{0};
  std::vector<Misreport> profitable;
};

/// 21 factors evenly spaced over [0.5, 1.5].
std::vector<double> default_misreport_grid();

/// Re-runs the slot once per (bid, factor) with only that bid of the target
/// misreported and compares realized surplus x (v - payment) with the truthful run.
IcReport ic_audit_payg(SlotAuction const &auction, std::size_t target_user_id,
                       std::span<double const> factors, double tolerance = 1e-9);

struct LpDeviation
{
  double delta{0.0};  // summed change of the target's reported prices
  double factor{1.0};
  double utility{0.0};
};

struct LpIcReport
{
  double                   truthful_utility{0.0};
  std::size_t              cases{0};
  std::size_t              violations{0};
  double                   worst_gain{0.0};
  std::vector<LpDeviation> points;
};

/// Surplus of a user's columns priced at the LP dual prices of their occupancy,
/// against `values` (true prices per column).
double lp_utility(OfflineInstance const &instance, OfflineSolution const &lp,
                  std::size_t user_index, std::span<double const> values);

/// Scales every price of the target user by each factor, re-solves the relaxation
/// and scores the result against the true prices.
LpIcReport ic_audit_paap(OfflineInstance const &instance, std::size_t target_user_index,
                         std::span<double const> factors, double tolerance = 1e-9);

}  // namespace maas
