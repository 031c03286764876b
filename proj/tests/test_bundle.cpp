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

#include "maas/bundle.hpp"

#include <cmath>
#include <random>

using namespace maas;

namespace {

UserRequest trip(double d, double phi, double gamma, double t, double price = 10.0)
{
  UserRequest u;
  u.user_id = 1;
  u.distance = d;
  u.delay_budget = phi;
  u.inconvenience_tolerance = gamma;
  u.bids = {{0, t, price}};
  return u;
}

// Exhaustive search over whole-minute splits. Returns true when any split
// satisfies every constraint.
bool grid_feasible(UserRequest const &u, ModeCatalog const &catalog)
{
  auto const &bid = u.bids[0];
  std::size_t const modes = catalog.size();
  int const cap = static_cast<int>(std::floor(bid.requested_time + u.delay_budget + 1e-9));
  std::vector<int> l(modes, 0);
  while (true)
  {
    Bundle b;
    for (int v : l)
    {
      b.times.push_back(v);
    }
    if (is_bundle_feasible(b, u, bid, catalog))
    {
      return true;
    }
    std::size_t k = 0;
    while (k < modes)
    {
      if (++l[k] <= cap)
      {
        break;
      }
      l[k] = 0;
      ++k;
    }
    if (k == modes)
    {
      return false;
    }
  }
}

}  // namespace

TEST_CASE("taxi-only bundle serves a ten kilometre trip in twenty minutes")
{
  auto const catalog = ModeCatalog::standard();
  auto const u = trip(10.0, 5.0, 10.0, 20.0);
  Bundle const taxi{{20, 0, 0, 0, 0}};
  CHECK(is_bundle_feasible(taxi, u, u.bids[0], catalog));
  auto const r = feasible_bundle(u, u.bids[0], catalog, BundleObjective::min_inconvenience, 0.0);
  REQUIRE(r);
  CHECK(r.outcome == BundleOutcome::feasible);
  CHECK(is_bundle_feasible(*r.bundle, u, u.bids[0], catalog));
  CHECK(r.bundle->times[0] == doctest::Approx(20.0));
}

TEST_CASE("too little time for the fastest mode is infeasible")
{
  auto const catalog = ModeCatalog::standard();
  auto const u = trip(10.0, 5.0, 10.0, 10.0);
  auto const r = feasible_bundle(u, u.bids[0], catalog);
  CHECK_FALSE(r);
  CHECK(r.outcome == BundleOutcome::geometry);
}

TEST_CASE("price gate rejects before geometry")
{
  auto const catalog = ModeCatalog::standard();
  auto const u = trip(10.0, 5.0, 10.0, 20.0, 4.0);  // Q = 5, unit bid 0.8
  auto const r = feasible_bundle(u, u.bids[0], catalog, BundleObjective::min_inconvenience, 1.0);
  CHECK_FALSE(r);
  CHECK(r.outcome == BundleOutcome::price_gate);
  CHECK(feasible_bundle(u, u.bids[0], catalog, BundleObjective::min_inconvenience, 0.8));
}

TEST_CASE("violation reports")
{
  auto const catalog = ModeCatalog::standard();
  auto const u = trip(10.0, 5.0, 10.0, 20.0);
  auto const bike = is_bundle_feasible(Bundle{{0, 0, 0, 0, 100}}, u, u.bids[0], catalog);
  CHECK_FALSE(bike);
  bool saw_time = false;
  for (auto const &v : bike.violations)
  {
    if (v.constraint == "max_time")
    {
      saw_time = true;
      CHECK(v.residual == doctest::Approx(75.0));
    }
  }
  CHECK(saw_time);
  auto const zero = is_bundle_feasible(Bundle{{0, 0, 0, 0, 0}}, u, u.bids[0], catalog);
  CHECK_FALSE(zero);
  CHECK(zero.violations.front().constraint == "distance");
  CHECK_FALSE(is_bundle_feasible(Bundle{{1, 2}}, u, u.bids[0], catalog));
}

TEST_CASE("every objective returns a bundle that passes the checker")
{
  auto const catalog = ModeCatalog::standard();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(1.0, 18.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int found = 0;
  for (int i = 0; i < 400; ++i)
  {
    double const d = dist(rng);
    double const t = d / 0.5 + unit(rng) * (d / 0.1 - d / 0.5);
    auto const u = trip(d, 30.0 * unit(rng), 60.0 * unit(rng), t);
    for (auto obj : {BundleObjective::min_inconvenience, BundleObjective::min_total_time,
                     BundleObjective::feasibility_only})
    {
      auto const r = feasible_bundle(u, u.bids[0], catalog, obj);
      if (r)
      {
        ++found;
        CHECK(is_bundle_feasible(*r.bundle, u, u.bids[0], catalog));
      }
    }
  }
  CHECK(found > 0);
}

TEST_CASE("grid witnesses are never missed by the solver")
{
  ModeCatalog const three({{0, 0.5, 0.0, "taxi"}, {1, 0.25, 1.0, "share"}, {2, 0.1, 6.0, "bike"}});
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int>     d(1, 5);
  std::uniform_int_distribution<int>     minutes(1, 40);
  std::uniform_int_distribution<int>     slack(0, 10);
  std::uniform_int_distribution<int>     gamma(0, 60);
  int witnessed = 0;
  for (int i = 0; i < 300; ++i)
  {
    auto const u = trip(d(rng), slack(rng), gamma(rng), minutes(rng));
    bool const grid = grid_feasible(u, three);
    bool const lp = static_cast<bool>(feasible_bundle(u, u.bids[0], three));
    if (grid)
    {
      ++witnessed;
      CHECK(lp);
    }
  }
  CHECK(witnessed > 10);
}

TEST_CASE("loosening delay or inconvenience limits never loses feasibility")
{
  auto const catalog = ModeCatalog::standard();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 300; ++i)
  {
    double const d = 1.0 + 17.0 * unit(rng);
    double const t = d / 0.6 + unit(rng) * (d / 0.1 - d / 0.6);
    double const phi = 20.0 * unit(rng);
    double const gamma = 40.0 * unit(rng);
    auto const base = trip(d, phi, gamma, t);
    if (!feasible_bundle(base, base.bids[0], catalog))
    {
      continue;
    }
    auto const more_phi = trip(d, phi + 10.0 * unit(rng), gamma, t);
    auto const more_gamma = trip(d, phi, gamma + 10.0 * unit(rng), t);
    CHECK(feasible_bundle(more_phi, more_phi.bids[0], catalog));
    CHECK(feasible_bundle(more_gamma, more_gamma.bids[0], catalog));
  }
}
