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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "maas/offline.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace maas;
using namespace maas::testing;

namespace {

OfflineInstance two_user_instance()
{
  OfflineInstance inst;
  inst.columns = {column(0, 6.0, 10.0), column(1, 5.0, 9.0)};
  inst.capacities = {10.0};
  inst.user_count = 2;
  return inst;
}

}  // namespace

TEST_CASE("two-user relaxation and integer optimum")
{
  auto const inst = two_user_instance();
  auto const lp = solve_offline_lp(inst);
  // Independent check: best vertex of max 10x + 9y, 6x + 5y <= 10, x <= 1, y <= 1.
  auto const vertex = testing::vertex_enumeration_max(
    {10.0, 9.0}, {{6.0, 5.0}, {1.0, 0.0}, {0.0, 1.0}}, {10.0, 1.0, 1.0});
  REQUIRE(vertex.has_value());
  CHECK(lp.objective == doctest::Approx(*vertex));
  CHECK(lp.objective == doctest::Approx(9.0 + 10.0 * 5.0 / 6.0));
  CHECK(lp.chi[0] == doctest::Approx(5.0 / 6.0));
  CHECK(lp.chi[1] == doctest::Approx(1.0));
  // Binding capacity prices the fractional user's unit bid.
  CHECK(lp.slot_duals[0] == doctest::Approx(10.0 / 6.0));
  CHECK(lp.user_duals[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(lp.user_duals[1] == doctest::Approx(9.0 - 5.0 * 10.0 / 6.0));
  CHECK(lp.dual_objective == doctest::Approx(lp.objective));
  auto const u = dual_utilities(inst, lp);
  CHECK(u[0] == doctest::Approx(0.0));
  CHECK(u[1] == doctest::Approx(2.0 / 3.0));
  auto const ip = solve_offline_ip(inst);
  CHECK(ip.objective == doctest::Approx(10.0));
  CHECK(ip.chi[0] == 1.0);
  CHECK(ip.chi[1] == 0.0);
  CHECK(ip.proven_optimal);
}

TEST_CASE("trivial offline instances")
{
  OfflineInstance empty;
  empty.capacities = {10.0};
  CHECK(solve_offline_lp(empty).objective == 0.0);
  CHECK(solve_offline_ip(empty).objective == 0.0);

  OfflineInstance one;
  one.capacities = {10.0};
  one.user_count = 1;
  one.columns = {column(0, 5.0, 10.0)};
  auto const lp = solve_offline_lp(one);
  CHECK(lp.objective == doctest::Approx(10.0));
  CHECK(lp.slot_duals[0] == doctest::Approx(0.0));
  CHECK(lp.user_duals[0] == doctest::Approx(10.0));
  CHECK(dual_utilities(one, lp)[0] == doctest::Approx(10.0));

  OfflineInstance roomy;
  roomy.capacities = {100.0, 100.0};
  roomy.user_count = 3;
  roomy.columns = {column(0, 5.0, 10.0), column(1, 6.0, 7.0, 0, 1), column(2, 7.0, 3.0, 1, 1)};
  CHECK(solve_offline_ip(roomy).objective == doctest::Approx(20.0));
  CHECK(solve_offline_lp(roomy).objective == doctest::Approx(20.0));

  OfflineInstance too_big;
  too_big.capacities = {10.0};
  too_big.user_count = 1;
  too_big.columns = {column(0, 11.0, 50.0)};
  CHECK(solve_offline_ip(too_big).objective == 0.0);
}

TEST_CASE("integer solutions match exhaustive enumeration")
{
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial)
  {
    auto const inst = random_instance(rng, 12);
    auto const ip = solve_offline_ip(inst);
    auto const lp = solve_offline_lp(inst);
    CHECK(ip.proven_optimal);
    CHECK(ip.objective == doctest::Approx(best_subset(inst)).epsilon(1e-12));
    CHECK(ip.objective <= lp.objective + 1e-9);
    if (lp.integral)
    {
      CHECK(ip.objective == doctest::Approx(lp.objective));
    }
    CHECK(std::abs(lp.objective - lp.dual_objective) <= 1e-7 * std::max(1.0, lp.objective));
    CHECK(dual_infeasibility(inst, lp.slot_duals, lp.user_duals) <= 1e-9);
    CHECK_NOTHROW(dual_utilities(inst, lp));
  }
}

TEST_CASE("weak duality between arbitrary feasible pairs")
{
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial)
  {
    auto const inst = random_instance(rng, 10);
    // A feasible dual from any q >= 0 by taking the smallest valid u.
    std::vector<double> q(inst.capacities.size());
    for (auto &v : q)
    {
      v = 3.0 * unit(rng);
    }
    std::vector<double> u(inst.user_count, 0.0);
    for (auto const &col : inst.columns)
    {
      double used = 0.0;
      for (std::size_t t = col.occupancy.start; t <= col.occupancy.end; ++t)
      {
        used += col.resources * q[t];
      }
      u[col.user_index] = std::max(u[col.user_index], col.price - used);
    }
    double dual = 0.0;
    for (std::size_t t = 0; t < q.size(); ++t)
    {
      dual += inst.capacities[t] * q[t];
    }
    for (double v : u)
    {
      dual += v;
    }
    std::vector<std::size_t> order(inst.columns.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    auto const chi = greedy_selection(inst, order);
    double primal = 0.0;
    for (std::size_t c = 0; c < chi.size(); ++c)
    {
      primal += chi[c] * inst.columns[c].price;
    }
    CHECK(primal <= dual + 1e-9);
    CHECK(solve_offline_lp(inst).objective <= dual + 1e-7);
  }
}

TEST_CASE("column construction")
{
  auto const catalog = ModeCatalog::standard();
  UserRequest u;
  u.user_id = 4;
  u.distance = 10.0;
  u.departure_slot = 1;
  u.delay_budget = 100.0;
  u.inconvenience_tolerance = 1000.0;
  u.bids = {{0, 20.0, 12.0}, {1, 34.0, 20.0}, {2, 60.0, 8.0}};
  std::vector<UserRequest> users{u};
  ColumnOptions opts;
  auto cols = build_columns(users, catalog, 3, opts);
  CHECK(cols.size() == 3);
  for (auto const &c : cols)
  {
    CHECK(c.slot == 1);
    CHECK(is_bundle_feasible(c.witness, u, u.bids[c.bid_index], catalog));
    CHECK(c.occupancy.start == 1);
    CHECK(c.occupancy.end == 2);
  }
  opts.index_set = IndexSet::up_to_departure;
  cols = build_columns(users, catalog, 3, opts);
  CHECK(cols.size() == 6);
  for (auto const &c : cols)
  {
    CHECK(c.slot <= 1);
  }

  UserRequest tight = u;
  tight.delay_budget = 0.0;
  tight.bids = {{0, 5.0, 10.0}};  // 10 km in 5 minutes is out of reach
  std::vector<UserRequest> hopeless{tight};
  CHECK(build_columns(hopeless, catalog, 3, ColumnOptions{}).empty());

  ColumnOptions gated;
  gated.posted_prices = {100.0, 100.0, 100.0};
  CHECK(build_columns(users, catalog, 3, gated).empty());
}

TEST_CASE("price repair keeps a comfortable allocation")
{
  OfflineInstance inst;
  inst.capacities = {100.0};
  inst.user_count = 2;
  inst.columns = {column(0, 10.0, 200.0), column(1, 10.0, 150.0)};
  auto ip = solve_offline_ip(inst);
  auto const repaired = endogenous_price_repair(inst, ip, {2.0, 12.0}, 100.0);
  CHECK(repaired.repair_log.empty());
  CHECK(repaired.objective == doctest::Approx(350.0));
  CHECK(repaired.slot_prices[0] == doctest::Approx(2.0 + 12.0 * 20.0 / 100.0));
  CHECK(repaired.payments[0] == doctest::Approx(10.0 * 4.4));
}

TEST_CASE("price repair keeps a bid that exactly meets its price")
{
  OfflineInstance inst;
  inst.capacities = {100.0};
  inst.user_count = 1;
  // Load 10 gives p = 2 + 1.2 = 3.2, and b = 10 * 3.2.
  inst.columns = {column(0, 10.0, 32.0)};
  auto ip = solve_offline_ip(inst);
  auto const repaired = endogenous_price_repair(inst, ip, {2.0, 12.0}, 100.0);
  CHECK(repaired.chi[0] == 1.0);
  CHECK(repaired.repair_log.empty());
}

TEST_CASE("price repair drops a column that prices itself out")
{
  // Together: load 60, p = 2 + 7.2 = 9.2. Column 1 has unit bid 5 < 9.2.
  // Column 0 alone: load 30, p = 5.6 and its unit bid 10 clears it.
  OfflineInstance inst;
  inst.capacities = {100.0};
  inst.user_count = 2;
  inst.columns = {column(0, 30.0, 300.0), column(1, 30.0, 150.0)};
  OfflineSolution both;
  both.chi = {1.0, 1.0};
  auto const repaired = endogenous_price_repair(inst, both, {2.0, 12.0}, 100.0);
  REQUIRE(repaired.repair_log.size() == 1);
  CHECK(repaired.repair_log[0].removed == std::vector<std::size_t>{1});
  CHECK(repaired.chi[0] == 1.0);
  CHECK(repaired.chi[1] == 0.0);
  CHECK(repaired.slot_prices[0] == doctest::Approx(5.6));
  CHECK(repaired.objective == doctest::Approx(300.0));
  // Enumerating both one-column states: column 0 clears its own price, while
  // column 1 alone still sees 5.6 above its unit bid of 5.
  OfflineSolution first;
  first.chi = {1.0, 0.0};
  CHECK(endogenous_price_repair(inst, first, {2.0, 12.0}, 100.0).repair_log.empty());
  OfflineSolution second;
  second.chi = {0.0, 1.0};
  CHECK(endogenous_price_repair(inst, second, {2.0, 12.0}, 100.0).chi[1] == 0.0);
}

TEST_CASE("price repair reaches a fixed point on random selections")
{
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 100; ++trial)
  {
    auto inst = random_instance(rng, 12);
    for (auto &c : inst.columns)
    {
      c.price = c.resources * (2.0 + 12.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    }
    auto const ip = solve_offline_ip(inst);
    auto const r = endogenous_price_repair(inst, ip, {2.0, 12.0}, 20.0);
    CHECK_FALSE(r.repair_capped);
    CHECK(r.objective <= ip.objective + 1e-9);
    for (std::size_t c = 0; c < inst.columns.size(); ++c)
    {
      if (r.chi[c] > 0.0)
      {
        auto const &col = inst.columns[c];
        CHECK(col.price + 1e-9 >= col.resources * r.slot_prices[col.slot]);
      }
    }
  }
}
