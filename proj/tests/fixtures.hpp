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

#include <random>
#include <vector>

namespace maas::testing {

/// An 8 km trip requested in 16 minutes, which a taxi serves exactly. Q = 4.
inline UserRequest taxi_user(std::size_t id, double price, std::size_t slot = 0)
{
  UserRequest u;
  u.user_id = id;
  u.distance = 8.0;
  u.departure_slot = slot;
  u.order_slot = slot;
  u.delay_budget = 0.0;
  u.inconvenience_tolerance = 0.0;
  u.bids = {{0, 16.0, price}};
  return u;
}

/// Random request whose bids are drawn so that each requested time lies
/// between the fastest and slowest standard modes.
inline UserRequest random_user(std::mt19937_64 &rng, std::size_t id, std::size_t slot,
                               std::size_t max_bids, double d_max = 18.0,
                               std::size_t package_length = 1)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> count(1, max_bids);
  UserRequest u;
  u.user_id = id;
  u.distance = 1.0 + (d_max - 1.0) * unit(rng);
  u.departure_slot = slot;
  u.order_slot = slot;
  u.package_length = package_length;
  std::size_t const bids = count(rng);
  for (std::size_t j = 0; j < bids; ++j)
  {
    double const t = u.distance / 0.5 + unit(rng) * (u.distance / 0.1 - u.distance / 0.5);
    double const q = u.distance * u.distance / t;
    double const b = (2.0 + 10.0 * unit(rng)) * q;
    u.bids.push_back({j, t, b});
  }
  u.delay_budget = 100.0 / u.bids.front().price * 10.0 * unit(rng);
  u.inconvenience_tolerance = 100.0 * u.distance / u.bids.front().price * unit(rng) + 20.0;
  return u;
}

}  // namespace maas::testing
