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

#include "maas/analysis.hpp"

#include "maas/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maas {

void RatioReport::attach_welfare_ratio(double ratio)
{
  welfare_ratio = ratio;
  gap = ratio - theta;
}

namespace {

RatioReport collect(std::span<SlotOutcome const> outcomes, Mechanism mechanism)
{
  RatioReport report;
  report.mechanism = mechanism;
  bool any = false;
  for (auto const &o : outcomes)
  {
    if (!o.priced)
    {
      report.ratio_series.emplace_back();
      report.alpha_series.emplace_back();
      continue;
    }
    report.ratio_series.emplace_back(o.ratio);
    report.alpha_series.emplace_back(o.alpha);
    if (!any)
    {
      report.ratio_extreme = o.ratio;
      report.alpha_min = o.alpha;
      any = true;
      continue;
    }
    report.ratio_extreme = mechanism == Mechanism::payg ? std::max(report.ratio_extreme, o.ratio)
                                                        : std::min(report.ratio_extreme, o.ratio);
    report.alpha_min = std::min(report.alpha_min, o.alpha);
  }
  if (!any)
  {
    throw DomainError("competitive ratio needs at least one priced slot");
  }
  return report;
}

}  // namespace

RatioReport competitive_ratio_payg(std::span<SlotOutcome const> outcomes)
{
  auto report = collect(outcomes, Mechanism::payg);
  report.theta = std::max(0.0, (1.0 - report.ratio_extreme) * (1.0 - 1.0 / report.alpha_min));
  return report;
}

RatioReport competitive_ratio_paap(std::span<SlotOutcome const> outcomes)
{
  auto report = collect(outcomes, Mechanism::paap);
  report.theta = 1.0 - 1.0 / report.alpha_min;
  return report;
}

RatioReport competitive_ratio(std::span<SlotOutcome const> outcomes, Mechanism mechanism)
{
  return mechanism == Mechanism::payg ? competitive_ratio_payg(outcomes)
                                      : competitive_ratio_paap(outcomes);
}

double welfare_ratio(double online, double offline)
{
  if (std::abs(offline) <= kEpsilon)
  {
    if (std::abs(online) <= kEpsilon)
    {
      return 1.0;
    }
    throw std::logic_error("online welfare is positive while the offline optimum is zero");
  }
  return online / offline;
}

IdentityReport primal_dual_identity_check(std::span<SlotOutcome const> outcomes)
{
  IdentityReport report;
  for (auto const &o : outcomes)
  {
    for (auto const &step : o.steps)
    {
      if (!step.accepted)
      {
        continue;
      }
      ++report.accepted_steps;
      report.max_residual = std::max(report.max_residual, step.residual());
    }
  }
  return report;
}

std::optional<OrderingCase> classify_ordering(double v, double p, double b_hat)
{
  if (v == p || v == b_hat || p == b_hat)
  {
    return std::nullopt;
  }
  if (v < p)
  {
    if (p < b_hat)
    {
      return OrderingCase::v_p_bhat;
    }
    return v < b_hat ? OrderingCase::v_bhat_p : OrderingCase::bhat_v_p;
  }
  // p < v
  if (v < b_hat)
  {
    return OrderingCase::p_v_bhat;
  }
  return p < b_hat ? OrderingCase::p_bhat_v : OrderingCase::bhat_p_v;
}

ThresholdOutcome threshold_outcome(double v, double p, double b_hat)
{
  ThresholdOutcome out;
  out.x_hat = b_hat >= p ? 1.0 : 0.0;
  out.u_hat = out.x_hat * (v - p);
  out.x = v >= p ? 1.0 : 0.0;
  out.u = out.x * (v - p);
  return out;
}

int predicted_comparison(OrderingCase c)
{
  switch (c)
  {
  case OrderingCase::v_p_bhat:
  case OrderingCase::bhat_p_v:
    return -1;
  default:
    return 0;
  }
}

std::vector<double> default_misreport_grid()
{
  std::vector<double> grid(21);
  for (std::size_t k = 0; k < grid.size(); ++k)
  {
    grid[k] = 0.5 + 0.05 * static_cast<double>(k);
  }
  return grid;
}

namespace {

struct Realized
{
  double utility{0.0};
  double posted{0.0};
};

Realized realize(SlotAuction const &auction, std::vector<UserRequest> const &users,
                 UserRequest const &truth)
{
  CapacityLedger ledger = auction.ledger;
  auto const out = auction_step(ledger, auction.slot, users, auction.catalog, auction.config);
  Realized r;
  r.posted = out.posted_price.value_or(0.0);
  for (auto const &a : out.allocations)
  {
    if (a.user_id != truth.user_id)
    {
      continue;
    }
    for (auto const &bid : truth.bids)
    {
      if (bid.bid_id == a.bid_id)
      {
        r.utility += a.fraction * bid.price - a.payment;
      }
    }
  }
  return r;
}

}  // namespace

IcReport ic_audit_payg(SlotAuction const &auction, std::size_t target_user_id,
                       std::span<double const> factors, double tolerance)
{
  auto const it = std::find_if(auction.users.begin(), auction.users.end(),
                               [&](UserRequest const &u) { return u.user_id == target_user_id; });
  if (it == auction.users.end())
  {
    throw DomainError("target user is not in the auction");
  }
  std::size_t const target = static_cast<std::size_t>(it - auction.users.begin());
  UserRequest const truth = *it;
  auto const truthful = realize(auction, auction.users, truth);

  IcReport report;
  std::vector<UserRequest> users = auction.users;
  for (std::size_t j = 0; j < truth.bids.size(); ++j)
  {
    for (double f : factors)
    {
      users[target] = truth;
      users[target].bids[j].price = f * truth.bids[j].price;
      auto const lie = realize(auction, users, truth);
      ++report.cases;
      double const gain = lie.utility - truthful.utility;
      report.worst_gain = std::max(report.worst_gain, gain);
      if (gain > tolerance)
      {
        ++report.violations;
        report.profitable.push_back({truth.bids[j].bid_id, f, truthful.utility, lie.utility});
      }
      double const p = truth.resources(truth.bids[j]) * truthful.posted;
      if (auto c = classify_ordering(truth.bids[j].price, p, users[target].bids[j].price))
      {
        ++report.classified;
        int const sign = gain > tolerance ? 1 : (gain < -tolerance ? -1 : 0);
        report.table_mismatches += sign != predicted_comparison(*c);
      }
    }
  }
  return report;
}

double lp_utility(OfflineInstance const &instance, OfflineSolution const &lp,
                  std::size_t user_index, std::span<double const> values)
{
  double total = 0.0;
  for (std::size_t c = 0; c < instance.columns.size(); ++c)
  {
    auto const &col = instance.columns[c];
    if (col.user_index != user_index || lp.chi[c] <= 0.0)
    {
      continue;
    }
    double price = 0.0;
    for (std::size_t t = col.occupancy.start; t <= col.occupancy.end; ++t)
    {
      price += lp.slot_duals[t];
    }
    total += lp.chi[c] * (values[c] - col.resources * price);
  }
  return total;
}

LpIcReport ic_audit_paap(OfflineInstance const &instance, std::size_t target_user_index,
                         std::span<double const> factors, double tolerance)
{
  std::vector<double> values(instance.columns.size());
  for (std::size_t c = 0; c < values.size(); ++c)
  {
    values[c] = instance.columns[c].price;
  }
  LpIcReport report;
  report.truthful_utility = lp_utility(instance, solve_offline_lp(instance), target_user_index, values);
  for (double f : factors)
  {
    OfflineInstance lie = instance;
    double delta = 0.0;
    for (auto &col : lie.columns)
    {
      if (col.user_index == target_user_index)
      {
        delta += (f - 1.0) * col.price;
        col.price *= f;
      }
    }
    double const u = lp_utility(lie, solve_offline_lp(lie), target_user_index, values);
    ++report.cases;
    double const gain = u - report.truthful_utility;
    report.worst_gain = std::max(report.worst_gain, gain);
    report.violations += gain > tolerance;
    report.points.push_back({delta, f, u});
  }
  return report;
}

}  // namespace maas
