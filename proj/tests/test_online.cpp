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
#include "maas/online.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace maas;
using testing::taxi_user;

namespace {

ModeCatalog const catalog = ModeCatalog::standard();

}  // namespace

TEST_CASE("critical index")
{
  std::vector<double> q3{4, 4, 4};
  auto c = critical_index(q3, 10.0);
  CHECK(c.k == 3);
  CHECK(c.participants == 2);
  std::vector<double> q2{4, 4};
  c = critical_index(q2, 10.0);
  CHECK(c.k == 3);
  CHECK(c.participants == 2);
  std::vector<double> q1{12};
  c = critical_index(q1, 10.0);
  CHECK(c.k == 1);
  CHECK(c.participants == 0);
  std::vector<double> exact{5, 5};
  CHECK(critical_index(exact, 10.0).participants == 2);
}

TEST_CASE("two-user pay-as-you-go hand trace")
{
  CapacityLedger ledger(10.0, 20);
  std::vector<UserRequest> users{taxi_user(2, 4.0), taxi_user(1, 8.0)};
  auto const out = run_payg_slot(ledger, 0, users, catalog, 0.0);
  double const alpha = std::pow(1.4, 2.5);
  double const q1 = 8.0 / ((alpha - 1.0) * 10.0);
  double const q2 = q1 * 1.4 + 4.0 / ((alpha - 1.0) * 10.0);
  CHECK(out.ratio == doctest::Approx(0.4));
  CHECK(out.alpha == doctest::Approx(alpha));
  CHECK(out.alpha == doctest::Approx(2.31911).epsilon(1e-5));
  REQUIRE(out.dual_price_trace.size() == 2);
  CHECK(out.dual_price_trace[0] == doctest::Approx(q1));
  CHECK(out.dual_price_trace[1] == doctest::Approx(q2));
  CHECK(out.dual_price_trace[0] == doctest::Approx(0.60647).epsilon(1e-4));
  CHECK(out.dual_price_trace[1] == doctest::Approx(1.15231).epsilon(1e-4));
  REQUIRE(out.allocations.size() == 2);
  CHECK(out.allocations[0].user_id == 1);
  CHECK(out.allocations[1].user_id == 2);
  CHECK(out.welfare == doctest::Approx(12.0));
  CHECK(out.reserved_at_start_slot() == doctest::Approx(8.0));
  CHECK(out.allocations[0].window == SlotWindow{0, 15});
  CHECK(ledger.available(0) == doctest::Approx(2.0));
  CHECK(ledger.available(16) == doctest::Approx(10.0));
  for (auto const &step : out.steps)
  {
    CHECK(step.residual() <= 1e-9);
  }
}

TEST_CASE("third low bidder falls past the critical index and leaves q unchanged")
{
  CapacityLedger ledger(10.0, 20);
  std::vector<UserRequest> users{taxi_user(1, 8.0), taxi_user(2, 4.0), taxi_user(3, 2.0)};
  auto const out = run_payg_slot(ledger, 0, users, catalog, 0.0);
  CHECK(out.allocations.size() == 2);
  REQUIRE(out.rejected.size() == 1);
  CHECK(out.rejected[0].user_id == 3);
  CHECK(out.rejected[0].reason == RejectReason::critical_index);
  CHECK(*out.q_end == doctest::Approx(out.dual_price_trace.back()));
  CHECK(out.dual_price_trace.size() == 2);
}

TEST_CASE("low unit bid is stopped by the dual price gate")
{
  // With room for all three, the third bidder meets q above its unit bid 0.5.
  CapacityLedger ledger(12.0, 20);
  std::vector<UserRequest> users{taxi_user(1, 8.0), taxi_user(2, 4.0), taxi_user(3, 2.0)};
  auto const out = run_payg_slot(ledger, 0, users, catalog, 0.0);
  CHECK(out.participants == 3);
  REQUIRE(out.rejected.size() == 1);
  CHECK(out.rejected[0].user_id == 3);
  CHECK(out.rejected[0].reason == RejectReason::dual_price);
  CHECK(out.dual_price_trace.size() == 2);
}

TEST_CASE("empty slot")
{
  CapacityLedger ledger(10.0, 5);
  auto const out = run_payg_slot(ledger, 2, {}, catalog, 2.0);
  CHECK(out.allocations.empty());
  CHECK(*out.q_end == 0.0);
  CHECK(out.welfare == 0.0);
  auto const paap = run_paap_slot(ledger, 2, {}, catalog, 2.0);
  CHECK(paap.allocations.empty());
  CHECK(paap.welfare == 0.0);
}

TEST_CASE("exhausted slot rejects everyone for capacity")
{
  CapacityLedger ledger(10.0, 5);
  ledger.reserve({1, 1}, 10.0);
  std::vector<UserRequest> users{taxi_user(1, 8.0, 1)};
  auto const out = run_payg_slot(ledger, 1, users, catalog, 0.0);
  CHECK_FALSE(out.q_end.has_value());
  REQUIRE(out.rejected.size() == 1);
  CHECK(out.rejected[0].reason == RejectReason::capacity);
}

TEST_CASE("package fraction formula")
{
  UserRequest single;
  single.distance = 1.0;
  single.bids = {{0, 0.5, 6.0}};
  CHECK(paap_fraction(single, 0) == doctest::Approx(1.0));
  UserRequest two;
  two.distance = 1.0;
  two.bids = {{0, 0.5, 6.0}, {1, 0.25, 4.0}};  // Q = 2 and 4
  CHECK(paap_fraction(two, 0) == doctest::Approx(1.8));
  UserRequest even;
  even.distance = 1.0;
  even.bids = {{0, 0.5, 2.0}, {1, 0.5, 2.0}};
  CHECK(paap_fraction(even, 0) == doctest::Approx(1.0));
  CHECK(paap_fraction(even, 1) == doctest::Approx(1.0));
  UserRequest zero;
  zero.distance = 1.0;
  zero.bids = {{0, 1.0, 0.0}};
  CHECK_THROWS_AS(paap_fraction(zero, 0), DomainError);
}

TEST_CASE("single package user hand trace")
{
  CapacityLedger ledger(10.0, 10);
  UserRequest u;
  u.user_id = 1;
  u.distance = 10.0;
  u.package_length = 3;
  u.inconvenience_tolerance = 1.0;
  u.bids = {{0, 20.0, 10.0}};
  std::vector<UserRequest> users{u};
  auto const out = run_paap_slot(ledger, 0, users, catalog, 0.0);
  CHECK(out.ratio == doctest::Approx(0.5));
  CHECK(out.alpha == doctest::Approx(2.25));
  CHECK(*out.q_end == doctest::Approx(0.8));
  REQUIRE(out.allocations.size() == 1);
  CHECK(out.allocations[0].fraction == doctest::Approx(1.0));
  for (std::size_t t = 0; t < 3; ++t)
  {
    CHECK(ledger.available(t) == doctest::Approx(5.0));
  }
  CHECK(ledger.available(3) == 10.0);
  CHECK(out.steps[0].residual() <= 1e-12);
}

TEST_CASE("package mechanism clamps, normalizes and caps fractions")
{
  CapacityLedger ledger(10.0, 10);
  UserRequest u;
  u.user_id = 1;
  u.distance = 8.0;
  u.inconvenience_tolerance = 100.0;
  u.delay_budget = 100.0;
  u.package_length = 2;
  u.bids = {{0, 32.0, 6.0}, {1, 16.0, 4.0}};  // Q = 2 and 4
  std::vector<UserRequest> users{u};
  auto const out = run_paap_slot(ledger, 0, users, catalog, 0.0);
  REQUIRE(out.allocations.size() == 2);
  double total = 0.0;
  for (auto const &a : out.allocations)
  {
    CHECK(a.fraction <= 1.0);
    total += a.fraction;
  }
  CHECK(total <= 1.0 + 1e-12);
  CHECK(out.allocations[0].raw_fraction == doctest::Approx(1.8));

  CapacityLedger tight(10.0, 10);
  tight.reserve({1, 1}, 9.0);
  auto const capped = run_paap_slot(tight, 0, users, catalog, 0.0);
  double reserved = 0.0;
  for (auto const &a : capped.allocations)
  {
    reserved += a.reserved();
  }
  CHECK(reserved == doctest::Approx(1.0));
  CHECK(tight.available(1) >= 0.0);
}

TEST_CASE("package gate closed for a user keeps zero allocation")
{
  CapacityLedger ledger(10.0, 10);
  UserRequest first;
  first.user_id = 1;
  first.distance = 10.0;
  first.bids = {{0, 20.0, 50.0}};  // unit bid 10 drives q high
  UserRequest second = first;
  second.user_id = 2;
  second.bids = {{0, 20.0, 0.5}};  // unit bid 0.1
  std::vector<UserRequest> users{first, second};
  auto const out = run_paap_slot(ledger, 0, users, catalog, 0.0);
  CHECK(out.dual_price_trace.front() > 0.1);
  REQUIRE(out.rejected.size() == 1);
  CHECK(out.rejected[0].user_id == 2);
  CHECK(out.rejected[0].reason == RejectReason::dual_price);
}

TEST_CASE("posted price on a fresh system and its payment")
{
  CapacityLedger ledger(500.0, 5);
  UserRequest c;
  c.user_id = 7;
  c.distance = 10.0;
  c.inconvenience_tolerance = 100.0;
  c.bids = {{0, 34.0, 20.0}};
  std::vector<UserRequest> users{c};
  AuctionConfig cfg;
  cfg.price_function = PriceFunction::linear;
  auto const out = auction_step(ledger, 0, users, catalog, cfg);
  CHECK(*out.posted_price == doctest::Approx(2.0));
  REQUIRE(out.allocations.size() == 1);
  CHECK(out.allocations[0].payment == doctest::Approx(5.8824).epsilon(1e-4));
}

TEST_CASE("no arrivals leaves the ledger alone; priced-out bids earn nothing")
{
  CapacityLedger ledger(500.0, 5);
  AuctionConfig cfg;
  auto const before = ledger.availability();
  auto const none = auction_step(ledger, 1, {}, catalog, cfg);
  CHECK(none.welfare == 0.0);
  CHECK(ledger.availability() == before);
  std::vector<UserRequest> cheap{taxi_user(1, 4.0), taxi_user(2, 6.0)};  // unit bids 1, 1.5 < 2
  auto const priced_out = auction_step(ledger, 0, cheap, catalog, cfg);
  CHECK(priced_out.allocations.empty());
  CHECK(priced_out.welfare == 0.0);
  for (auto const &r : priced_out.rejected)
  {
    CHECK(r.reason == RejectReason::price_gate);
  }
}

TEST_CASE("bid-derived band needs bids")
{
  CapacityLedger ledger(500.0, 5);
  AuctionConfig cfg;
  cfg.band.reset();
  CHECK_FALSE(posted_price(ledger, 0, {}, cfg).has_value());
  std::vector<UserRequest> one{taxi_user(1, 8.0)};
  CHECK(*posted_price(ledger, 0, one, cfg) == doctest::Approx(2.0));
}

TEST_CASE("randomized slots satisfy the mechanism invariants")
{
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> count(0, 40);
  std::uniform_real_distribution<double>     cap(20.0, 200.0);
  double worst_identity = 0.0;
  double worst_dual = 0.0;
  std::size_t accepted_steps = 0;
  for (int trial = 0; trial < 150; ++trial)
  {
    for (auto mech : {Mechanism::payg, Mechanism::paap})
    {
      CapacityLedger ledger(cap(rng), 30);
      std::vector<UserRequest> users;
      std::size_t const n = count(rng);
      for (std::size_t i = 0; i < n; ++i)
      {
        users.push_back(testing::random_user(rng, i, 0, 3, 10.0, mech == Mechanism::paap ? 4 : 1));
      }
      double const a0 = ledger.available(0);
      auto const out = mech == Mechanism::payg ? run_payg_slot(ledger, 0, users, catalog, 0.0)
                                               : run_paap_slot(ledger, 0, users, catalog, 0.0);
      double welfare = 0.0;
      for (auto const &a : out.allocations)
      {
        welfare += a.welfare();
      }
      CHECK(std::abs(welfare - out.welfare) <= 1e-9 * std::max(1.0, welfare));
      CHECK(out.reserved_at_start_slot() <= a0 + 1e-9);
      for (std::size_t t = 0; t < ledger.horizon(); ++t)
      {
        CHECK(ledger.available(t) >= 0.0);
      }
      for (auto const &s : out.steps)
      {
        if (s.accepted)
        {
          ++accepted_steps;
          worst_identity = std::max(worst_identity, s.residual());
        }
      }
      if (mech == Mechanism::payg)
      {
        std::set<std::size_t> seen;
        for (auto const &a : out.allocations)
        {
          CHECK(seen.insert(a.user_id).second);
          CHECK(a.fraction == 1.0);
          // The winner carries the highest price among the user's passing bids.
          for (auto const &audit : out.audits)
          {
            if (audit.user_id == a.user_id && audit.eligible && audit.passed_gate)
            {
              CHECK(audit.bid_price <= a.bid_price + 1e-12);
            }
          }
        }
        for (std::size_t k = 1; k < out.dual_price_trace.size(); ++k)
        {
          CHECK(out.dual_price_trace[k] >= out.dual_price_trace[k - 1]);
        }
        worst_dual = std::max(worst_dual, dual_feasibility(out).worst_violation);
      }
    }
  }
  CHECK(accepted_steps > 100);
  CHECK(worst_identity <= 1e-9);
  CHECK(worst_dual <= 1e-9);
}
