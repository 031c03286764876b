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
#include "maas/horizon.hpp"

#include <random>

using namespace maas;
using testing::random_user;
using testing::taxi_user;

namespace {

UserRequest booked(std::size_t id, std::size_t order, std::size_t departure)
{
  auto u = taxi_user(id, 8.0, departure);
  u.order_slot = order;
  return u;
}

Scenario random_scenario(std::uint64_t seed, std::size_t horizon, std::size_t per_slot,
                         Mechanism mechanism = Mechanism::payg)
{
  std::mt19937_64 rng(seed);
  Scenario s;
  s.capacity = 60.0;
  s.horizon = horizon;
  s.mechanism = mechanism;
  std::size_t id = 0;
  for (std::size_t t = 0; t < horizon; ++t)
  {
    for (std::size_t k = 0; k < per_slot; ++k)
    {
      s.users.push_back(random_user(rng, id++, t, 3, 18.0, mechanism == Mechanism::paap ? 2 : 1));
    }
  }
  return s;
}

}  // namespace

TEST_CASE("window membership")
{
  std::vector<UserRequest> users{booked(0, 0, 0), booked(1, 0, 1), booked(2, 0, 2), booked(3, 2, 2)};
  std::vector<UserState> state(users.size(), UserState::pending);
  CHECK(window_users(users, state, 0, 0) == std::vector<std::size_t>{0});
  // Closed interval: departure t + window is inside.
  CHECK(window_users(users, state, 0, 1) == std::vector<std::size_t>{0, 1});
  CHECK(window_users(users, state, 0, 2) == std::vector<std::size_t>{0, 1, 2});
  CHECK(window_users(users, state, 2, 1) == std::vector<std::size_t>{2, 3});
  state[1] = UserState::allocated;
  state[2] = UserState::rejected;
  CHECK(window_users(users, state, 1, 1) == std::vector<std::size_t>{});
  CHECK(window_users(users, state, 1, 0, 9) == std::vector<std::size_t>{0});
}

TEST_CASE("configuration table")
{
  HorizonConfig c;
  CHECK_NOTHROW(c.validate(5));
  c.solver = SolverKind::offline_milp;
  CHECK_THROWS_AS(c.validate(5), DomainError);
  c.step = 3;
  CHECK_NOTHROW(c.validate(5));
  c.solver = SolverKind::online_milp;
  CHECK_THROWS_AS(c.validate(5), DomainError);
  c.solver = SolverKind::offline_milp;
  c.step = 6;
  CHECK_THROWS_AS(c.validate(5), DomainError);
  c.step = 1;
  c.window = 0;
  CHECK_THROWS_AS(c.validate(5), DomainError);
  CHECK(parse_solver("online-milp") == SolverKind::online_milp);
  CHECK(to_string(SolverKind::offline_milp) == "offline-milp");
  CHECK_THROWS_AS(parse_solver("magic"), DomainError);
}

TEST_CASE("single-slot steps reproduce the slot auction")
{
  Scenario s;
  s.capacity = 10.0;
  s.horizon = 20;
  s.band = PriceBand{0.0, 0.0};
  s.users = {taxi_user(1, 8.0), taxi_user(2, 4.0), taxi_user(3, 2.0)};
  HorizonConfig cfg;
  cfg.payment = PaymentRule::posted_price;
  auto const trace = run_rha(cfg, s);
  CapacityLedger ledger(10.0, 20);
  auto const direct = run_payg_slot(ledger, 0, s.users, s.catalog, 0.0);
  REQUIRE(trace.outcomes.size() == 20);
  auto const &got = trace.outcomes[0];
  CHECK(got.dual_price_trace == direct.dual_price_trace);
  CHECK(got.q_end == direct.q_end);
  REQUIRE(got.allocations.size() == direct.allocations.size());
  for (std::size_t i = 0; i < got.allocations.size(); ++i)
  {
    CHECK(got.allocations[i].user_id == direct.allocations[i].user_id);
    CHECK(got.allocations[i].window == direct.allocations[i].window);
    CHECK(got.allocations[i].payment == direct.allocations[i].payment);
  }
  REQUIRE(got.rejected.size() == 1);
  CHECK(got.rejected[0].reason == RejectReason::critical_index);
  CHECK(trace.total_welfare == doctest::Approx(12.0));
  CHECK(trace.series.availability == ledger.availability());
  REQUIRE(trace.final_rejections.size() == 1);
  CHECK(trace.final_rejections[0].user_id == 3);
  CHECK(*trace.series.acceptance[0] == doctest::Approx(2.0 / 3.0));
  CHECK(trace.mean_acceptance == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("dual price payment rule charges the final dual price")
{
  Scenario s;
  s.capacity = 10.0;
  s.horizon = 20;
  s.band = PriceBand{0.0, 0.0};
  s.users = {taxi_user(1, 8.0), taxi_user(2, 4.0)};
  auto const trace = run_rha(HorizonConfig{}, s);
  double const q = *trace.outcomes[0].q_end;
  REQUIRE(trace.allocations.size() == 2);
  for (auto const &a : trace.allocations)
  {
    CHECK(a.payment == doctest::Approx(4.0 * q));
  }
}

TEST_CASE("a whole-horizon step is one offline solve")
{
  Scenario s;
  s.capacity = 10.0;
  s.horizon = 2;
  s.band = PriceBand{0.0, 0.0};
  s.users = {taxi_user(0, 8.0, 0), taxi_user(1, 6.0, 0), taxi_user(2, 7.0, 1), taxi_user(3, 3.0, 1)};
  HorizonConfig cfg;
  cfg.step = 2;
  cfg.window = 2;
  cfg.solver = SolverKind::offline_milp;
  auto const trace = run_rha(cfg, s);
  REQUIRE(trace.iterations.size() == 1);
  ColumnOptions opts;
  auto const inst = make_instance(s.users, s.catalog, std::vector<double>(2, 10.0), opts);
  auto const ip = solve_offline_ip(inst);
  CHECK(trace.total_welfare == doctest::Approx(ip.objective));
  CHECK(trace.iterations[0].objective == doctest::Approx(ip.objective));
  // Both slots hold two Q = 4 trips at most; the best pair is 8 + 7.
  CHECK(ip.objective == doctest::Approx(15.0));
}

TEST_CASE("online MILP on one slot matches the offline optimum when prices do not bind")
{
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial)
  {
    Scenario s;
    s.capacity = 40.0;
    s.horizon = 1;
    s.band = PriceBand{0.0, 0.0};
    for (std::size_t i = 0; i < 6; ++i)
    {
      s.users.push_back(random_user(rng, i, 0, 3));
    }
    HorizonConfig cfg;
    cfg.solver = SolverKind::online_milp;
    auto const trace = run_rha(cfg, s);
    auto const inst = make_instance(s.users, s.catalog, {40.0}, ColumnOptions{});
    auto const ip = solve_offline_ip(inst);
    CHECK(trace.total_welfare == doctest::Approx(ip.objective));
    CHECK(trace.iterations[0].error.empty());
  }
}

TEST_CASE("rolling runs keep capacity, determinism and the offline bound")
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
  {
    auto const s = random_scenario(seed, 6, 5);
    HorizonConfig online;
    HorizonConfig sha;
    sha.step = s.horizon;
    sha.window = s.horizon;
    sha.solver = SolverKind::offline_milp;
    HorizonConfig milp;
    milp.solver = SolverKind::online_milp;
    for (auto const &cfg : {online, milp, sha})
    {
      auto const a = run_rha(cfg, s);
      auto const b = run_rha(cfg, s);
      CHECK(a.total_welfare == b.total_welfare);
      CHECK(a.series.availability == b.series.availability);
      REQUIRE(a.allocations.size() == b.allocations.size());
      for (double avail : a.series.availability)
      {
        CHECK(avail >= 0.0);
      }
      std::vector<double> load(s.horizon, 0.0);
      for (auto const &alloc : a.allocations)
      {
        for (std::size_t t = alloc.window.start; t <= alloc.window.end; ++t)
        {
          load[t] += alloc.reserved();
        }
      }
      for (std::size_t t = 0; t < s.horizon; ++t)
      {
        CHECK(load[t] <= s.capacity + 1e-9);
        CHECK(s.capacity - load[t] == doctest::Approx(a.series.availability[t]));
      }
      for (auto const &rec : a.iterations)
      {
        CHECK(rec.error.empty());
      }
    }
    // Offline without prices bounds every rolling configuration.
    auto unpriced = s;
    unpriced.band = PriceBand{0.0, 0.0};
    auto const bound = run_rha(sha, unpriced).total_welfare;
    CHECK(run_rha(online, unpriced).total_welfare <= bound + 1e-9);
    CHECK(run_rha(milp, unpriced).total_welfare <= bound + 1e-9);
  }
}

TEST_CASE("package runs stay within capacity")
{
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
  {
    auto const s = random_scenario(seed, 5, 4, Mechanism::paap);
    HorizonConfig cfg;
    cfg.mechanism = Mechanism::paap;
    for (auto solver : {SolverKind::online_algorithm, SolverKind::online_milp})
    {
      cfg.solver = solver;
      auto const trace = run_rha(cfg, s);
      for (double avail : trace.series.availability)
      {
        CHECK(avail >= 0.0);
      }
      for (auto const &rec : trace.iterations)
      {
        CHECK(rec.error.empty());
      }
    }
  }
}

TEST_CASE("unserved users are carried until their departure passes")
{
  Scenario s;
  s.capacity = 4.0;
  s.horizon = 3;
  s.band = PriceBand{0.0, 0.0};
  // Both book at slot 0 for slot 1; only one fits.
  s.users = {booked(0, 0, 1), booked(1, 0, 1)};
  HorizonConfig cfg;
  cfg.window = 2;
  auto const trace = run_rha(cfg, s);
  CHECK(trace.allocations.size() == 1);
  REQUIRE(trace.final_rejections.size() == 1);
  CHECK(trace.iterations[0].users == 2);
  CHECK(trace.iterations[1].users == 1);
  CHECK(trace.iterations[2].users == 0);
}
