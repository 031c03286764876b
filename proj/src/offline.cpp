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

#include "maas/offline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace maas {

std::vector<CompactColumn> build_columns(std::span<UserRequest const> users,
                                         ModeCatalog const &catalog, std::size_t horizon,
                                         ColumnOptions const &options)
{
  if (horizon == 0)
  {
    throw DomainError("horizon must contain at least one slot");
  }
  if (!options.posted_prices.empty() && options.posted_prices.size() < horizon)
  {
    throw DomainError("posted prices must cover the horizon");
  }
  std::vector<CompactColumn> columns;
  for (std::size_t i = 0; i < users.size(); ++i)
  {
    UserRequest const &user = users[i];
    user.validate(options.mechanism);
    std::size_t lo = 0;
    std::size_t hi = 0;
    if (options.index_set == IndexSet::booking_window)
    {
      lo = user.departure_slot;
      hi = user.departure_slot + options.flexibility;
    }
    else
    {
      lo = 0;
      hi = user.departure_slot;
    }
    lo = std::max(lo, options.first_slot);
    hi = std::min(hi, horizon - 1);
    for (std::size_t j = 0; j < user.bids.size(); ++j)
    {
      BidItem const &bid = user.bids[j];
      // Geometry does not depend on the slot; only the price gate does.
      auto const geometry = feasible_bundle(user, bid, catalog, options.bundle_objective, 0.0);
      if (!geometry)
      {
        continue;
      }
      double const q = user.resources(bid);
      for (std::size_t t = lo; t <= hi && lo <= hi; ++t)
      {
        if (!options.posted_prices.empty() &&
            bid.price + kEpsilon < q * options.posted_prices[t])
        {
          continue;
        }
        std::size_t span = 1;
        if (options.occupancy == Occupancy::reservation_window)
        {
          span = options.mechanism == Mechanism::payg
                   ? std::max<std::size_t>(1, slots_needed(*geometry.bundle, options.slot_minutes))
                   : user.package_length;
        }
        CompactColumn col;
        col.user_id = user.user_id;
        col.user_index = i;
        col.bid_id = bid.bid_id;
        col.bid_index = j;
        col.slot = t;
        col.resources = q;
        col.price = bid.price;
        col.occupancy = {t, std::min(t + span - 1, horizon - 1)};
        col.witness = *geometry.bundle;
        columns.push_back(std::move(col));
      }
    }
  }
  return columns;
}

OfflineInstance make_instance(std::span<UserRequest const> users, ModeCatalog const &catalog,
                              std::vector<double> capacities, ColumnOptions const &options)
{
  OfflineInstance inst;
  inst.columns = build_columns(users, catalog, capacities.size(), options);
  inst.capacities = std::move(capacities);
  inst.user_count = users.size();
  return inst;
}

std::vector<double> OfflineSolution::load(OfflineInstance const &instance) const
{
  std::vector<double> out(instance.capacities.size(), 0.0);
  for (std::size_t c = 0; c < instance.columns.size() && c < chi.size(); ++c)
  {
    if (chi[c] == 0.0)
    {
      continue;
    }
    auto const &col = instance.columns[c];
    for (std::size_t t = col.occupancy.start; t <= col.occupancy.end; ++t)
    {
      out[t] += col.resources * chi[c];
    }
  }
  return out;
}

namespace {

void check_instance(OfflineInstance const &instance)
{
  for (auto const &col : instance.columns)
  {
    if (col.occupancy.end >= instance.capacities.size() || col.occupancy.start > col.occupancy.end)
    {
      throw DomainError("column occupancy outside the capacity vector");
    }
    if (col.user_index >= instance.user_count)
    {
      throw DomainError("column user index outside the instance");
    }
  }
}

enum class Fix : signed char
{
  free = -1,
  zero = 0,
  one = 1
};

struct Relaxation
{
  LpStatus            status{LpStatus::infeasible};
  std::vector<double> x;  // every column, fixings applied
  double              bound{0.0};
  std::vector<double> slot_duals;
  std::vector<double> user_duals;
};

Relaxation relax(OfflineInstance const &inst, std::vector<Fix> const &fix)
{
  std::size_t const slots = inst.capacities.size();
  std::vector<double> room = inst.capacities;
  std::vector<double> user_room(inst.user_count, 1.0);
  Relaxation out;
  out.x.assign(inst.columns.size(), 0.0);
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < inst.columns.size(); ++c)
  {
    auto const &col = inst.columns[c];
    if (fix[c] == Fix::one)
    {
      out.x[c] = 1.0;
      out.bound += col.price;
      user_room[col.user_index] -= 1.0;
      for (std::size_t t = col.occupancy.start; t <= col.occupancy.end; ++t)
      {
        room[t] -= col.resources;
      }
    }
    else if (fix[c] == Fix::free)
    {
      free_cols.push_back(c);
    }
  }
  for (double r : room)
  {
    if (r < -kEpsilon)
    {
      return out;
    }
  }
  for (double r : user_room)
  {
    if (r < -kEpsilon)
    {
      return out;
    }
  }
  out.slot_duals.assign(slots, 0.0);
  out.user_duals.assign(inst.user_count, 0.0);
  if (free_cols.empty())
  {
    out.status = LpStatus::optimal;
    return out;
  }

  StandardLP lp;
  lp.objective.reserve(free_cols.size());
  for (std::size_t c : free_cols)
  {
    lp.add_variable(inst.columns[c].price);
  }
  std::vector<std::size_t> row_slot;
  std::vector<std::size_t> row_user;
  std::vector<std::vector<std::size_t>> by_slot(slots);
  std::vector<std::vector<std::size_t>> by_user(inst.user_count);
  for (std::size_t k = 0; k < free_cols.size(); ++k)
  {
    auto const &col = inst.columns[free_cols[k]];
    for (std::size_t t = col.occupancy.start; t <= col.occupancy.end; ++t)
    {
      by_slot[t].push_back(k);
    }
    by_user[col.user_index].push_back(k);
  }
  for (std::size_t t = 0; t < slots; ++t)
  {
    if (by_slot[t].empty())
    {
      continue;
    }
    std::vector<double> row(free_cols.size(), 0.0);
    for (std::size_t k : by_slot[t])
    {
      row[k] = inst.columns[free_cols[k]].resources;
    }
    lp.add_row(std::move(row), RowSense::less_equal, std::max(0.0, room[t]));
    row_slot.push_back(t);
  }
  for (std::size_t u = 0; u < inst.user_count; ++u)
  {
    if (by_user[u].empty())
    {
      continue;
    }
    std::vector<double> row(free_cols.size(), 0.0);
    for (std::size_t k : by_user[u])
    {
      row[k] = 1.0;
    }
    lp.add_row(std::move(row), RowSense::less_equal, std::max(0.0, user_room[u]));
    row_user.push_back(u);
  }
  auto const solved = solve_lp(lp);
  out.status = solved.status;
  if (solved.status != LpStatus::optimal)
  {
    return out;
  }
  for (std::size_t k = 0; k < free_cols.size(); ++k)
  {
    out.x[free_cols[k]] = std::clamp(solved.x[k], 0.0, 1.0);
  }
  out.bound += solved.objective;
  for (std::size_t r = 0; r < row_slot.size(); ++r)
  {
    out.slot_duals[row_slot[r]] = std::max(0.0, solved.duals[r]);
  }
  for (std::size_t r = 0; r < row_user.size(); ++r)
  {
    out.user_duals[row_user[r]] = std::max(0.0, solved.duals[row_slot.size() + r]);
  }
  return out;
}

double selection_value(OfflineInstance const &inst, std::vector<double> const &chi)
{
  double v = 0.0;
  for (std::size_t c = 0; c < chi.size(); ++c)
  {
    v += inst.columns[c].price * chi[c];
  }
  return v;
}

// Adds columns in `priority` order to `chi` while they fit.
void fill_greedily(OfflineInstance const &inst, std::vector<double> &chi,
                   std::vector<std::size_t> const &priority)
{
  std::vector<double> room = inst.capacities;
  std::vector<bool>   used(inst.user_count, false);
  for (std::size_t c = 0; c < chi.size(); ++c)
  {
    if (chi[c] > 0.5)
    {
      auto const &col = inst.columns[c];
      used[col.user_index] = true;
      for (std::size_t t = col.occupancy.start; t <= col.occupancy.end; ++t)
      {
        room[t] -= col.resources;
      }
    }
  }
  for (std::size_t c : priority)
  {
    auto const &col = inst.columns[c];
    if (chi[c] > 0.5 || used[col.user_index])
    {
      continue;
    }
    bool fits = true;
    for (std::size_t t = col.occupancy.start; t <= col.occupancy.end && fits; ++t)
    {
      fits = col.resources <= room[t] + kEpsilon;
    }
    if (!fits)
    {
      continue;
    }
    chi[c] = 1.0;
    used[col.user_index] = true;
    for (std::size_t t = col.occupancy.start; t <= col.occupancy.end; ++t)
    {
      room[t] -= col.resources;
    }
  }
}

}  // namespace

std::vector<double> greedy_selection(OfflineInstance const &instance,
                                     std::vector<std::size_t> const &priority)
{
  check_instance(instance);
  std::vector<double> chi(instance.columns.size(), 0.0);
  fill_greedily(instance, chi, priority);
  return chi;
}

OfflineSolution solve_offline_lp(OfflineInstance const &instance)
{
  check_instance(instance);
  std::vector<Fix> fix(instance.columns.size(), Fix::free);
  auto const r = relax(instance, fix);
  if (r.status != LpStatus::optimal)
  {
    throw std::logic_error("offline relaxation not solved: " + to_string(r.status));
  }
  OfflineSolution s;
  s.chi = r.x;
  s.objective = r.bound;
  s.integral = std::all_of(s.chi.begin(), s.chi.end(), [](double v) {
    return std::abs(v - std::round(v)) <= 1e-9;
  });
  s.slot_duals = r.slot_duals;
  s.user_duals = r.user_duals;
  s.dual_objective = 0.0;
  for (std::size_t t = 0; t < instance.capacities.size(); ++t)
  {
    s.dual_objective += instance.capacities[t] * s.slot_duals[t];
  }
  for (double u : s.user_duals)
  {
    s.dual_objective += u;
  }
  return s;
}

OfflineSolution solve_offline_ip(OfflineInstance const &instance, BranchOptions const &options)
{
  check_instance(instance);
  std::size_t const n = instance.columns.size();
  std::vector<std::size_t> by_price(n);
  std::iota(by_price.begin(), by_price.end(), 0);
  std::stable_sort(by_price.begin(), by_price.end(), [&](std::size_t a, std::size_t b) {
    return instance.columns[a].price > instance.columns[b].price;
  });

  OfflineSolution best;
  best.chi = greedy_selection(instance, by_price);
  best.objective = selection_value(instance, best.chi);
  best.integral = true;

  auto improve = [&](std::vector<double> chi) {
    double const v = selection_value(instance, chi);
    if (v > best.objective + options.tolerance)
    {
      best.chi = std::move(chi);
      best.objective = v;
    }
  };

  std::vector<std::vector<Fix>> stack;
  stack.emplace_back(n, Fix::free);
  while (!stack.empty())
  {
    if (best.nodes >= options.node_limit)
    {
      best.proven_optimal = false;
      break;
    }
    auto fix = std::move(stack.back());
    stack.pop_back();
    ++best.nodes;
    auto const r = relax(instance, fix);
    if (r.status != LpStatus::optimal)
    {
      if (r.status == LpStatus::iteration_limit)
      {
        best.proven_optimal = false;
      }
      continue;
    }
    double const slack = options.tolerance * std::max(1.0, std::abs(best.objective));
    if (r.bound <= best.objective + slack)
    {
      continue;
    }
    // Most fractional column; ties to the larger price, then the lower index.
    std::size_t branch = n;
    double      score = -1.0;
    for (std::size_t c = 0; c < n; ++c)
    {
      if (fix[c] != Fix::free)
      {
        continue;
      }
      double const frac = r.x[c] - std::floor(r.x[c]);
      if (frac <= 1e-9 || frac >= 1.0 - 1e-9)
      {
        continue;
      }
      double const s = 0.5 - std::abs(frac - 0.5);
      if (s > score + 1e-12 ||
          (std::abs(s - score) <= 1e-12 && instance.columns[c].price > instance.columns[branch].price))
      {
        branch = c;
        score = s;
      }
    }
    std::vector<double> rounded(n, 0.0);
    for (std::size_t c = 0; c < n; ++c)
    {
      rounded[c] = r.x[c] >= 1.0 - 1e-9 ? 1.0 : 0.0;
    }
    if (branch == n)
    {
      improve(std::move(rounded));
      continue;
    }
    std::vector<std::size_t> by_lp(n);
    std::iota(by_lp.begin(), by_lp.end(), 0);
    std::stable_sort(by_lp.begin(), by_lp.end(), [&](std::size_t a, std::size_t b) {
      if (r.x[a] != r.x[b])
      {
        return r.x[a] > r.x[b];
      }
      return instance.columns[a].price > instance.columns[b].price;
    });
    fill_greedily(instance, rounded, by_lp);
    improve(std::move(rounded));

    auto zero = fix;
    zero[branch] = Fix::zero;
    auto one = std::move(fix);
    one[branch] = Fix::one;
    // A user takes at most one column, so fixing one to 1 fixes its siblings to 0.
    for (std::size_t c = 0; c < n; ++c)
    {
      if (c != branch && one[c] == Fix::free &&
          instance.columns[c].user_index == instance.columns[branch].user_index)
      {
        one[c] = Fix::zero;
      }
    }
    stack.push_back(std::move(zero));
    stack.push_back(std::move(one));
  }
  return best;
}

OfflineSolution endogenous_price_repair(OfflineInstance const &instance, OfflineSolution solution,
                                        PriceBand band, double capacity,
                                        std::vector<double> const &base_load,
                                        std::size_t max_iterations)
{
  check_instance(instance);
  std::size_t const slots = instance.capacities.size();
  if (!base_load.empty() && base_load.size() != slots)
  {
    throw DomainError("base load must match the capacity vector");
  }
  if (max_iterations == 0)
  {
    max_iterations = instance.columns.size() + 1;
  }
  PriceParams params;
  params.capacity = capacity;
  params.band = band;
  params.kind = PriceFunction::linear;
  params.validate();

  auto prices = [&]() {
    auto load = solution.load(instance);
    std::vector<double> p(slots);
    for (std::size_t t = 0; t < slots; ++t)
    {
      double z = load[t] + (base_load.empty() ? 0.0 : base_load[t]);
      p[t] = unit_price_linear(std::clamp(z, 0.0, capacity), params);
    }
    return p;
  };

  solution.repair_log.clear();
  solution.repair_capped = false;
  std::vector<double> p = prices();
  for (std::size_t iter = 1;; ++iter)
  {
    // Per slot, the violating column with the lowest unit bid.
    std::vector<std::size_t> worst(slots, instance.columns.size());
    for (std::size_t c = 0; c < instance.columns.size(); ++c)
    {
      if (!(solution.chi[c] > 0.0))
      {
        continue;
      }
      auto const &col = instance.columns[c];
      if (col.price + kEpsilon >= col.resources * p[col.slot])
      {
        continue;
      }
      std::size_t &w = worst[col.slot];
      if (w == instance.columns.size() ||
          col.price / col.resources < instance.columns[w].price / instance.columns[w].resources)
      {
        w = c;
      }
    }
    RepairStep step;
    step.iteration = iter;
    for (std::size_t w : worst)
    {
      if (w != instance.columns.size())
      {
        step.removed.push_back(w);
      }
    }
    if (step.removed.empty())
    {
      break;
    }
    if (iter > max_iterations)
    {
      solution.repair_capped = true;
      break;
    }
    for (std::size_t w : step.removed)
    {
      solution.chi[w] = 0.0;
    }
    p = prices();
    step.prices = p;
    solution.repair_log.push_back(std::move(step));
  }
  solution.slot_prices = p;
  solution.payments.assign(instance.columns.size(), 0.0);
  solution.objective = 0.0;
  for (std::size_t c = 0; c < instance.columns.size(); ++c)
  {
    auto const &col = instance.columns[c];
    solution.objective += col.price * solution.chi[c];
    solution.payments[c] = col.resources * p[col.slot] * solution.chi[c];
  }
  return solution;
}

std::vector<double> dual_utilities(OfflineInstance const &instance, OfflineSolution const &lp,
                                   double tolerance)
{
  if (lp.slot_duals.size() != instance.capacities.size() ||
      lp.user_duals.size() != instance.user_count)
  {
    throw DomainError("solution carries no duals for this instance");
  }
  std::vector<double> u(instance.user_count, 0.0);
  for (auto const &col : instance.columns)
  {
    double q = 0.0;
    for (std::size_t t = col.occupancy.start; t <= col.occupancy.end; ++t)
    {
      q += lp.slot_duals[t];
    }
    u[col.user_index] = std::max(u[col.user_index], col.price - col.resources * q);
  }
  for (std::size_t i = 0; i < u.size(); ++i)
  {
    if (std::abs(u[i] - lp.user_duals[i]) > tolerance * std::max(1.0, std::abs(u[i])))
    {
      throw std::logic_error("dual utility of user " + std::to_string(i) +
                             " disagrees with the solver");
    }
  }
  return u;
}

double dual_infeasibility(OfflineInstance const &instance, std::vector<double> const &q,
                          std::vector<double> const &u)
{
  double worst = 0.0;
  for (double v : q)
  {
    worst = std::max(worst, -v);
  }
  for (double v : u)
  {
    worst = std::max(worst, -v);
  }
  for (auto const &col : instance.columns)
  {
    double lhs = u[col.user_index];
    for (std::size_t t = col.occupancy.start; t <= col.occupancy.end; ++t)
    {
      lhs += col.resources * q[t];
    }
    worst = std::max(worst, col.price - lhs);
  }
  return worst;
}

}  // namespace maas
