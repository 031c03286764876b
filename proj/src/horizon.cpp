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

#include "maas/horizon.hpp"

#include <algorithm>
#include <chrono>
#include <exception>

namespace maas {

std::string to_string(SolverKind kind)
{
  switch (kind)
  {
  case SolverKind::online_algorithm: return "online-alg";
  case SolverKind::online_milp: return "online-milp";
  case SolverKind::offline_milp: return "offline-milp";
  }
  return "online-alg";
}

SolverKind parse_solver(std::string const &text)
{
  if (text == "online-alg" || text == "online_algorithm")
  {
    return SolverKind::online_algorithm;
  }
  if (text == "online-milp" || text == "online_milp")
  {
    return SolverKind::online_milp;
  }
  if (text == "offline-milp" || text == "offline_milp")
  {
    return SolverKind::offline_milp;
  }
  throw DomainError("unknown solver: " + text);
}

std::string to_string(PaymentRule rule)
{
  return rule == PaymentRule::posted_price ? "posted_price" : "dual_price";
}

void HorizonConfig::validate(std::size_t horizon) const
{
  if (step < 1 || window < 1)
  {
    throw DomainError("step and window must be at least one slot");
  }
  if (step > horizon)
  {
    throw DomainError("step longer than the horizon");
  }
  if (step == 1 && solver == SolverKind::offline_milp)
  {
    throw DomainError("single-slot steps run an online solver");
  }
  if (step > 1 && solver != SolverKind::offline_milp)
  {
    throw DomainError("multi-slot steps run the offline solver");
  }
}

void Scenario::validate() const
{
  if (!(capacity > 0.0))
  {
    throw DomainError("capacity must be positive");
  }
  if (horizon == 0)
  {
    throw DomainError("horizon must contain at least one slot");
  }
  if (band && !(band->b_min >= 0.0 && band->b_min <= band->b_max))
  {
    throw DomainError("price band needs 0 <= b_min <= b_max");
  }
  std::vector<std::size_t> ids;
  for (auto const &user : users)
  {
    user.validate(mechanism);
    if (user.departure_slot >= horizon)
    {
      throw DomainError("user " + std::to_string(user.user_id) + " departs after the horizon");
    }
    ids.push_back(user.user_id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
  {
    throw DomainError("duplicate user id");
  }
}

std::vector<std::size_t> window_users(std::vector<UserRequest> const &users,
                                      std::vector<UserState> const &state, std::size_t order_cutoff,
                                      std::size_t first, std::size_t last)
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < users.size(); ++i)
  {
    auto const &u = users[i];
    if (state[i] == UserState::pending && u.order_slot <= order_cutoff &&
        u.departure_slot >= first && u.departure_slot <= last)
    {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<std::size_t> window_users(std::vector<UserRequest> const &users,
                                      std::vector<UserState> const &state, std::size_t t,
                                      std::size_t window)
{
  return window_users(users, state, t, t, t + window);
}

SlotSeries::SlotSeries(std::size_t horizon)
  : welfare(horizon, 0.0)
  , unit_price(horizon)
  , availability(horizon, 0.0)
  , participants(horizon, 0)
  , accepted(horizon, 0)
  , acceptance(horizon)
{}

namespace {

class Runner
{
public:
  Runner(HorizonConfig const &config, Scenario const &scenario)
    : config_(config)
    , scenario_(scenario)
    , ledger_(scenario.capacity, scenario.horizon)
    , state_(scenario.users.size(), UserState::pending)
    , seen_(scenario.users.size(), false)
  {
    trace_.config = config;
    trace_.series = SlotSeries(scenario.horizon);
  }

  AuctionTrace run()
  {
    auto const started = std::chrono::steady_clock::now();
    std::size_t index = 0;
    for (std::size_t n = 0; n < scenario_.horizon; n += config_.step, ++index)
    {
      std::size_t const last = std::min(n + config_.step - 1, scenario_.horizon - 1);
      IterationRecord rec;
      rec.index = index;
      rec.first_slot = n;
      rec.last_slot = last;
      try
      {
        if (config_.step == 1)
        {
          single_slot(n, rec);
        }
        else
        {
          batch(n, last, rec);
        }
      }
      catch (std::exception const &e)
      {
        rec.error = e.what();
      }
      expire(last);
      trace_.iterations.push_back(std::move(rec));
    }
    expire(scenario_.horizon);
    finish();
    trace_.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return std::move(trace_);
  }

private:
  std::vector<UserRequest> take(std::vector<std::size_t> const &idx)
  {
    std::vector<UserRequest> out;
    out.reserve(idx.size());
    for (std::size_t i : idx)
    {
      seen_[i] = true;
      out.push_back(scenario_.users[i]);
    }
    return out;
  }

  AuctionConfig auction_config() const
  {
    AuctionConfig cfg;
    cfg.mechanism = config_.mechanism;
    cfg.price_function = config_.price_function;
    cfg.band = scenario_.band;
    cfg.slot = config_.slot;
    return cfg;
  }

  void accept(std::size_t user_index, Allocation a, IterationRecord &rec)
  {
    if (state_[user_index] != UserState::allocated)
    {
      ++rec.accepted;
    }
    state_[user_index] = UserState::allocated;
    rec.welfare += a.welfare();
    trace_.series.welfare[a.window.start] += a.welfare();
    trace_.total_welfare += a.welfare();
    trace_.allocations.push_back(std::move(a));
  }

  void single_slot(std::size_t t, IterationRecord &rec)
  {
    auto const idx = window_users(scenario_.users, state_, t, config_.window);
    auto const users = take(idx);
    rec.users = users.size();
    auto const cfg = auction_config();
    if (config_.solver == SolverKind::online_algorithm)
    {
      SlotOutcome out = auction_step(ledger_, t, users, scenario_.catalog, cfg);
      trace_.series.unit_price[t] = out.posted_price;
      for (auto a : out.allocations)
      {
        if (config_.payment == PaymentRule::dual_price && out.q_end)
        {
          a.unit_price = std::max(0.0, *out.q_end);
          a.payment = a.resources * a.unit_price * a.fraction;
        }
        accept(index_of(idx, a.user_id), std::move(a), rec);
      }
      rec.objective = out.welfare;
      trace_.outcomes.push_back(std::move(out));
      return;
    }
    // Exact slot problem over columns that clear the posted price.
    auto const price = posted_price(ledger_, t, users, cfg);
    trace_.series.unit_price[t] = price;
    ColumnOptions opts;
    opts.mechanism = config_.mechanism;
    opts.first_slot = t;
    opts.bundle_objective = config_.slot.bundle_objective;
    opts.slot_minutes = config_.slot.slot_minutes;
    opts.posted_prices.assign(scenario_.horizon, price.value_or(0.0));
    auto inst = make_instance(users, scenario_.catalog, ledger_.availability(), opts);
    OfflineSolution sol = config_.mechanism == Mechanism::payg
                            ? solve_offline_ip(inst, config_.branch)
                            : solve_offline_lp(inst);
    rec.objective = sol.objective;
    rec.nodes = sol.nodes;
    rec.proven_optimal = sol.proven_optimal;
    std::vector<double> prices(scenario_.horizon, price.value_or(0.0));
    apply(inst, sol, users, idx, prices, rec);
  }

  void batch(std::size_t first, std::size_t last, IterationRecord &rec)
  {
    auto const idx = window_users(scenario_.users, state_, last, first, last + config_.window);
    auto const users = take(idx);
    rec.users = users.size();
    ColumnOptions opts;
    opts.mechanism = config_.mechanism;
    opts.first_slot = first;
    opts.bundle_objective = config_.slot.bundle_objective;
    opts.slot_minutes = config_.slot.slot_minutes;
    auto inst = make_instance(users, scenario_.catalog, ledger_.availability(), opts);
    OfflineSolution sol = config_.mechanism == Mechanism::payg
                            ? solve_offline_ip(inst, config_.branch)
                            : solve_offline_lp(inst);
    rec.nodes = sol.nodes;
    rec.proven_optimal = sol.proven_optimal;
    PriceBand band = scenario_.band.value_or(PriceBand{0.0, 0.0});
    if (!scenario_.band && !users.empty())
    {
      band = bid_price_bounds(users);
    }
    std::vector<double> base(scenario_.horizon);
    for (std::size_t t = 0; t < scenario_.horizon; ++t)
    {
      base[t] = ledger_.allocated(t);
    }
    sol = endogenous_price_repair(inst, std::move(sol), band, scenario_.capacity, base);
    rec.objective = sol.objective;
    rec.repair_iterations = sol.repair_log.size();
    rec.repair_capped = sol.repair_capped;
    for (std::size_t t = first; t <= last; ++t)
    {
      trace_.series.unit_price[t] = sol.slot_prices[t];
    }
    apply(inst, sol, users, idx, sol.slot_prices, rec);
  }

  void apply(OfflineInstance const &inst, OfflineSolution const &sol,
             std::vector<UserRequest> const &users, std::vector<std::size_t> const &idx,
             std::vector<double> const &prices, IterationRecord &rec)
  {
    for (std::size_t c = 0; c < inst.columns.size(); ++c)
    {
      double const chi = std::min(1.0, sol.chi[c]);
      if (!(chi > 1e-12))
      {
        continue;
      }
      auto const &col = inst.columns[c];
      UserRequest const &user = users[col.user_index];
      ledger_.reserve(col.occupancy, std::min(col.resources * chi, ledger_.min_available(col.occupancy)));
      Allocation a;
      a.user_id = user.user_id;
      a.bid_id = col.bid_id;
      a.fraction = chi;
      a.raw_fraction = chi;
      a.bundle = col.witness;
      a.resources = col.resources;
      a.bid_price = col.price;
      a.unit_price = prices[col.slot];
      a.payment = col.resources * a.unit_price * chi;
      a.window = col.occupancy;
      accept(idx[col.user_index], std::move(a), rec);
    }
  }

  std::size_t index_of(std::vector<std::size_t> const &idx, std::size_t user_id) const
  {
    for (std::size_t i : idx)
    {
      if (scenario_.users[i].user_id == user_id)
      {
        return i;
      }
    }
    throw std::logic_error("allocation for a user outside the window");
  }

  // Users whose departure slot is at or before `last` get no further chances.
  void expire(std::size_t last)
  {
    for (std::size_t i = 0; i < state_.size(); ++i)
    {
      if (state_[i] == UserState::pending && scenario_.users[i].departure_slot <= last)
      {
        state_[i] = UserState::rejected;
        trace_.final_rejections.push_back({scenario_.users[i].user_id, RejectReason::dual_price});
      }
    }
  }

  void finish()
  {
    auto &s = trace_.series;
    s.availability = ledger_.availability();
    for (std::size_t i = 0; i < state_.size(); ++i)
    {
      if (!seen_[i])
      {
        continue;
      }
      std::size_t const t = scenario_.users[i].departure_slot;
      ++s.participants[t];
      s.accepted[t] += state_[i] == UserState::allocated;
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < scenario_.horizon; ++t)
    {
      if (s.participants[t] > 0)
      {
        double const r = static_cast<double>(s.accepted[t]) / static_cast<double>(s.participants[t]);
        s.acceptance[t] = r;
        sum += r;
        ++count;
      }
    }
    trace_.mean_acceptance = count > 0 ? sum / static_cast<double>(count) : 0.0;
  }

  HorizonConfig const     &config_;
  Scenario const          &scenario_;
  CapacityLedger           ledger_;
  std::vector<UserState>   state_;
  std::vector<bool>        seen_;
  AuctionTrace             trace_;
};

}  // namespace

AuctionTrace run_rha(HorizonConfig const &config, Scenario const &scenario)
{
  scenario.validate();
  config.validate(scenario.horizon);
  return Runner(config, scenario).run();
}

}  // namespace maas
