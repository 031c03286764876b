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

#include "maas/online.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace maas {

std::string to_string(RejectReason reason)
{
  switch (reason)
  {
  case RejectReason::critical_index: return "critical_index";
  case RejectReason::dual_price: return "dual_price";
  case RejectReason::price_gate: return "price_gate";
  case RejectReason::no_feasible_bundle: return "no_feasible_bundle";
  case RejectReason::capacity: return "capacity";
  }
  return "unknown";
}

double IdentityStep::residual() const noexcept
{
  return std::abs(delta_primal() - (1.0 - 1.0 / alpha) * delta_dual());
}

std::size_t SlotOutcome::accepted_users() const
{
  std::vector<std::size_t> ids;
  for (auto const &a : allocations)
  {
    if (a.fraction > 0.0)
    {
      ids.push_back(a.user_id);
    }
  }
  std::sort(ids.begin(), ids.end());
  return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

double SlotOutcome::reserved_at_start_slot() const
{
  double total = 0.0;
  for (auto const &a : allocations)
  {
    if (a.window.contains(slot))
    {
      total += a.reserved();
    }
  }
  return total;
}

CriticalIndex critical_index(std::span<double const> resources, double available)
{
  double cumulative = 0.0;
  for (std::size_t i = 0; i < resources.size(); ++i)
  {
    cumulative += resources[i];
    if (cumulative > available)
    {
      return {i + 1, i};
    }
  }
  return {resources.size() + 1, resources.size()};
}

namespace {

double best_unit_bid(UserRequest const &user)
{
  double best = -1.0;
  for (auto const &bid : user.bids)
  {
    best = std::max(best, user.unit_bid(bid));
  }
  return best;
}

}  // namespace

std::vector<std::size_t> auction_order(std::span<UserRequest const> users)
{
  std::vector<double> key(users.size());
  for (std::size_t i = 0; i < users.size(); ++i)
  {
    key[i] = best_unit_bid(users[i]);
  }
  std::vector<std::size_t> order(users.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b])
    {
      return key[a] > key[b];
    }
    return users[a].user_id < users[b].user_id;
  });
  return order;
}

std::vector<std::size_t> bid_order(UserRequest const &user)
{
  std::vector<std::size_t> order(user.bids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double const ua = user.unit_bid(user.bids[a]);
    double const ub = user.unit_bid(user.bids[b]);
    if (ua != ub)
    {
      return ua > ub;
    }
    return user.bids[a].bid_id < user.bids[b].bid_id;
  });
  return order;
}

namespace {

// Why a user that never reached an update step was turned away.
struct FailureTally
{
  bool dual_price{false};
  bool price_gate{false};

  RejectReason reason() const
  {
    if (dual_price)
    {
      return RejectReason::dual_price;
    }
    if (price_gate)
    {
      return RejectReason::price_gate;
    }
    return RejectReason::no_feasible_bundle;
  }
};

bool gate_open(double q, UserRequest const &user, BidItem const &bid)
{
  return q <= user.unit_bid(bid) + kEpsilon;
}

SlotOutcome start_outcome(CapacityLedger const &ledger, std::size_t t, Mechanism mechanism,
                          std::span<UserRequest const> users, double posted_unit_price)
{
  if (t >= ledger.horizon())
  {
    throw DomainError("slot outside the horizon");
  }
  if (!(posted_unit_price >= 0.0))
  {
    throw DomainError("posted unit price must be non-negative");
  }
  for (auto const &user : users)
  {
    user.validate(mechanism);
  }
  SlotOutcome out;
  out.slot = t;
  out.mechanism = mechanism;
  out.available_start = ledger.available(t);
  out.posted_price = posted_unit_price;
  out.users = users.size();
  return out;
}

bool reject_all_without_capacity(SlotOutcome &out, std::span<UserRequest const> users)
{
  if (users.empty())
  {
    out.q_end = 0.0;
    return true;
  }
  if (out.available_start > 0.0)
  {
    return false;
  }
  for (auto const &user : users)
  {
    out.rejected.push_back({user.user_id, RejectReason::capacity});
  }
  return true;
}

Allocation make_allocation(UserRequest const &user, BidItem const &bid, double fraction,
                           double raw_fraction, std::optional<Bundle> bundle, SlotWindow window,
                           double price)
{
  Allocation a;
  a.user_id = user.user_id;
  a.bid_id = bid.bid_id;
  a.fraction = fraction;
  a.raw_fraction = raw_fraction;
  a.bundle = std::move(bundle);
  a.resources = user.resources(bid);
  a.bid_price = bid.price;
  a.unit_price = price;
  a.payment = payment(a.resources, price) * fraction;
  a.window = window;
  return a;
}

std::size_t service_start(UserRequest const &user, std::size_t t)
{
  return std::max(user.departure_slot, t);
}

}  // namespace

SlotOutcome run_payg_slot(CapacityLedger &ledger, std::size_t t, std::span<UserRequest const> users,
                          ModeCatalog const &catalog, double posted_unit_price,
                          SlotOptions const &options)
{
  SlotOutcome out = start_outcome(ledger, t, Mechanism::payg, users, posted_unit_price);
  if (reject_all_without_capacity(out, users))
  {
    return out;
  }
  double const available = out.available_start;
  auto const   alpha = alpha_payg(users, available);
  out.priced = true;
  out.ratio = alpha.ratio;
  out.alpha = alpha.alpha;

  auto const order = auction_order(users);
  std::vector<double> qbar(order.size());
  for (std::size_t k = 0; k < order.size(); ++k)
  {
    qbar[k] = users[order[k]].max_resources();
  }
  auto const cut = critical_index(qbar, available);
  out.participants = cut.participants;

  double q = 0.0;
  for (std::size_t pos = 0; pos < order.size(); ++pos)
  {
    UserRequest const &user = users[order[pos]];
    if (pos >= cut.participants)
    {
      out.rejected.push_back({user.user_id, RejectReason::critical_index});
      continue;
    }
    struct Passing
    {
      std::size_t bid;
      Bundle      bundle;
      std::size_t step;
    };
    std::vector<Passing> passing;
    FailureTally tally;
    for (std::size_t j : bid_order(user))
    {
      BidItem const &bid = user.bids[j];
      BidAudit audit{user.user_id, bid.bid_id, user.resources(bid), bid.price, false, false};
      auto bundle = feasible_bundle(user, bid, catalog, options.bundle_objective, posted_unit_price);
      audit.eligible = static_cast<bool>(bundle);
      audit.passed_gate = gate_open(q, user, bid);
      out.audits.push_back(audit);
      if (!audit.passed_gate)
      {
        tally.dual_price = true;
        continue;
      }
      if (!bundle)
      {
        tally.price_gate = tally.price_gate || bundle.outcome == BundleOutcome::price_gate;
        continue;
      }
      IdentityStep step;
      step.user_id = user.user_id;
      step.bid_id = bid.bid_id;
      step.q_before = q;
      step.available = available;
      step.alpha = alpha.alpha;
      step.reference_resources = qbar[pos];
      step.bid_price = bid.price;
      q = q * (1.0 + qbar[pos] / available) + bid.price / ((alpha.alpha - 1.0) * available);
      step.q_after = q;
      out.dual_price_trace.push_back(q);
      out.steps.push_back(step);
      passing.push_back({j, std::move(*bundle.bundle), out.steps.size() - 1});
    }
    if (passing.empty())
    {
      out.rejected.push_back({user.user_id, tally.reason()});
      continue;
    }
    // Q-bar is shared by the user's bids, so the surplus b - Q-bar q ranks them by price.
    auto const win = std::max_element(passing.begin(), passing.end(),
                                      [&](Passing const &a, Passing const &b) {
                                        return user.bids[a.bid].price - qbar[pos] * q <
                                               user.bids[b.bid].price - qbar[pos] * q;
                                      });
    BidItem const &bid = user.bids[win->bid];
    std::size_t const n = std::max<std::size_t>(1, slots_needed(win->bundle, options.slot_minutes));
    std::size_t const start = service_start(user, t);
    if (start >= ledger.horizon())
    {
      out.rejected.push_back({user.user_id, RejectReason::capacity});
      continue;
    }
    SlotWindow const window = ledger.clip({start, start + n - 1});
    double const q_res = user.resources(bid);
    try
    {
      ledger.reserve(window, q_res);
    }
    catch (ReservationError const &)
    {
      out.rejected.push_back({user.user_id, RejectReason::capacity});
      continue;
    }
    out.steps[win->step].accepted = true;
    out.allocations.push_back(
      make_allocation(user, bid, 1.0, 1.0, std::move(win->bundle), window, posted_unit_price));
    out.welfare += bid.price;
  }
  out.q_end = q;
  return out;
}

double paap_fraction(UserRequest const &user, std::size_t bid_index)
{
  if (user.bids.empty() || bid_index >= user.bids.size())
  {
    throw DomainError("bid index outside the user's bids");
  }
  double total_q = 0.0;
  double total_b = 0.0;
  for (auto const &bid : user.bids)
  {
    total_q += user.resources(bid);
    total_b += bid.price;
  }
  if (!(total_b > 0.0))
  {
    throw DomainError("fraction needs a positive total bid price");
  }
  BidItem const &bid = user.bids[bid_index];
  return bid.price * total_q / (user.resources(bid) * total_b);
}

SlotOutcome run_paap_slot(CapacityLedger &ledger, std::size_t t, std::span<UserRequest const> users,
                          ModeCatalog const &catalog, double posted_unit_price,
                          SlotOptions const &options)
{
  SlotOutcome out = start_outcome(ledger, t, Mechanism::paap, users, posted_unit_price);
  if (reject_all_without_capacity(out, users))
  {
    return out;
  }
  double const available = out.available_start;
  auto const   alpha = alpha_paap(users, available);
  out.priced = true;
  out.ratio = alpha.ratio;
  out.alpha = alpha.alpha;
  out.participants = users.size();

  double q = 0.0;
  for (std::size_t index : auction_order(users))
  {
    UserRequest const &user = users[index];
    double const qmin = user.min_resources();
    double total_b = 0.0;
    for (auto const &bid : user.bids)
    {
      total_b += bid.price;
    }
    struct Share
    {
      std::size_t bid;
      double      raw;
      double      x;
      Bundle      bundle;
    };
    std::vector<Share> shares;
    FailureTally tally;
    for (std::size_t j : bid_order(user))
    {
      BidItem const &bid = user.bids[j];
      BidAudit audit{user.user_id, bid.bid_id, user.resources(bid), bid.price, false, false};
      auto bundle = feasible_bundle(user, bid, catalog, options.bundle_objective, posted_unit_price);
      audit.eligible = static_cast<bool>(bundle);
      audit.passed_gate = gate_open(q, user, bid);
      out.audits.push_back(audit);
      if (!audit.passed_gate)
      {
        tally.dual_price = true;
        continue;
      }
      if (!bundle || !(total_b > 0.0))
      {
        tally.price_gate = tally.price_gate || bundle.outcome == BundleOutcome::price_gate ||
                           !(total_b > 0.0);
        continue;
      }
      double const raw = paap_fraction(user, j);
      double const x = std::min(raw, 1.0);
      IdentityStep step;
      step.user_id = user.user_id;
      step.bid_id = bid.bid_id;
      step.q_before = q;
      step.available = available;
      step.alpha = alpha.alpha;
      step.reference_resources = qmin;
      step.bid_price = bid.price;
      step.fraction = x;
      step.accepted = true;
      q = q * (1.0 + qmin / available) + bid.price * x / ((alpha.alpha - 1.0) * available) -
          (1.0 - x) * bid.price / available;
      step.q_after = q;
      out.q_negative = out.q_negative || q < 0.0;
      out.dual_price_trace.push_back(q);
      out.steps.push_back(step);
      shares.push_back({j, raw, x, std::move(*bundle.bundle)});
    }
    if (shares.empty())
    {
      out.rejected.push_back({user.user_id, tally.reason()});
      continue;
    }
    if (options.normalize_package_total)
    {
      double total_x = 0.0;
      for (auto const &s : shares)
      {
        total_x += s.x;
      }
      if (total_x > 1.0)
      {
        for (auto &s : shares)
        {
          s.x /= total_x;
        }
      }
    }
    std::size_t const start = service_start(user, t);
    if (start >= ledger.horizon())
    {
      out.rejected.push_back({user.user_id, RejectReason::capacity});
      continue;
    }
    SlotWindow const window = ledger.clip({start, start + user.package_length - 1});
    double need = 0.0;
    for (auto const &s : shares)
    {
      need += user.resources(user.bids[s.bid]) * s.x;
    }
    double const room = ledger.min_available(window);
    if (need > room)
    {
      double const scale = room / need;
      need = 0.0;
      for (auto &s : shares)
      {
        s.x *= scale;
        need += user.resources(user.bids[s.bid]) * s.x;
      }
      // Rounding in the rescale must not overshoot the room.
      need = std::min(need, room);
    }
    if (!(need > 0.0))
    {
      out.rejected.push_back({user.user_id, RejectReason::capacity});
      continue;
    }
    try
    {
      ledger.reserve(window, need);
    }
    catch (ReservationError const &)
    {
      out.rejected.push_back({user.user_id, RejectReason::capacity});
      continue;
    }
    for (auto &s : shares)
    {
      BidItem const &bid = user.bids[s.bid];
      out.allocations.push_back(
        make_allocation(user, bid, s.x, s.raw, std::move(s.bundle), window, posted_unit_price));
      out.welfare += bid.price * s.x;
    }
  }
  out.q_end = q;
  return out;
}

std::optional<double> posted_price(CapacityLedger const &ledger, std::size_t t,
                                   std::span<UserRequest const> users, AuctionConfig const &config)
{
  PriceParams params;
  params.capacity = ledger.capacity();
  params.kind = config.price_function;
  if (config.band)
  {
    params.band = *config.band;
  }
  else
  {
    if (users.empty())
    {
      return std::nullopt;
    }
    params.band = bid_price_bounds(users);
  }
  if (params.kind == PriceFunction::exponential)
  {
    double const available = ledger.available(t);
    if (users.empty() || !(available > 0.0))
    {
      params.alpha = std::numbers::e;
    }
    else
    {
      params.alpha = config.mechanism == Mechanism::payg ? alpha_payg(users, available).alpha
                                                         : alpha_paap(users, available).alpha;
    }
  }
  double const load = t == 0 ? 0.0 : ledger.allocated(t - 1);
  return unit_price(std::clamp(load, 0.0, params.capacity), params);
}

SlotOutcome auction_step(CapacityLedger &ledger, std::size_t t, std::span<UserRequest const> users,
                         ModeCatalog const &catalog, AuctionConfig const &config)
{
  auto const price = posted_price(ledger, t, users, config);
  double const p = price.value_or(0.0);
  SlotOutcome out = config.mechanism == Mechanism::payg
                      ? run_payg_slot(ledger, t, users, catalog, p, config.slot)
                      : run_paap_slot(ledger, t, users, catalog, p, config.slot);
  out.posted_price = price;
  return out;
}

DualCheck dual_feasibility(SlotOutcome const &outcome, double tolerance)
{
  DualCheck check;
  if (!outcome.q_end)
  {
    return check;
  }
  double const q = *outcome.q_end;
  std::size_t begin = 0;
  while (begin < outcome.audits.size())
  {
    std::size_t end = begin;
    while (end < outcome.audits.size() && outcome.audits[end].user_id == outcome.audits[begin].user_id)
    {
      ++end;
    }
    double u = 0.0;
    for (std::size_t k = begin; k < end; ++k)
    {
      auto const &a = outcome.audits[k];
      if (a.eligible && a.passed_gate)
      {
        u = std::max(u, a.bid_price - a.resources * q);
      }
    }
    for (std::size_t k = begin; k < end; ++k)
    {
      auto const &a = outcome.audits[k];
      if (!a.eligible)
      {
        continue;
      }
      ++check.constraints;
      double const gap = a.bid_price - a.resources * q - u;
      if (gap > tolerance * std::max(1.0, a.bid_price))
      {
        ++check.violations;
      }
      check.worst_violation = std::max(check.worst_violation, gap);
    }
    begin = end;
  }
  return check;
}

}  // namespace maas
