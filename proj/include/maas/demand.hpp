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

#include "maas/horizon.hpp"
#include "maas/market.hpp"
#include "maas/pricing.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace maas {

/// Normal arrivals per slot over an inclusive slot range.
struct ArrivalBand
{
  std::size_t first{0};
  std::size_t last{0};
  double      mean{0.0};
  double      stddev{0.0};
};

struct DemandConfig
{
  Mechanism                mechanism{Mechanism::payg};
  std::size_t              horizon{1200};
  double                   capacity{500.0};
  std::vector<ArrivalBand> arrivals;  // slots not covered get no arrivals
  double                   distance_min{1.0};
  double                   distance_max{18.0};
  std::size_t              bids_min{1};
  std::size_t              bids_max{3};
  PriceBand                band{2.0, 12.0};
  std::vector<PriceBand>   band_profile;  // per slot; empty means `band` everywhere
  double                   speed_factor{1.0};
  // Package lengths, drawn uniformly unless the four-week schedule is on.
  std::size_t package_min{5};
  std::size_t package_max{14};
  bool        weekly_schedule{false};
  double      weekend_min{0.4};
  double      weekend_max{0.8};
  // Departures drawn from a symmetric triangle over [t, t + booking_window]; 0 departs at t.
  std::size_t   booking_window{0};
  std::uint64_t seed{0};

  void validate() const;

  /// Peak and off-peak trip arrivals over a day, with the band edges scaled to `horizon`.
  static DemandConfig trips(std::size_t horizon = 1200);
  /// Daily package arrivals over `horizon` days.
  static DemandConfig packages(std::size_t horizon = 100);
};

/// Package length under the four-week schedule for a 0-based slot.
std::size_t scheduled_package_length(std::size_t slot);

/// One request ordered at slot t, departing at t. Draw order: distance, package
/// length, then per bid the time and price, then the delay budget and tolerance.
UserRequest draw_request(DemandConfig const &config, ModeCatalog const &catalog,
                         std::mt19937_64 &rng, std::size_t id, std::size_t t);

Scenario gen_payg_demand(DemandConfig const &config, std::uint64_t seed);
Scenario gen_paap_demand(DemandConfig const &config, std::uint64_t seed);
/// Dispatches on config.mechanism with config.seed.
Scenario generate(DemandConfig const &config);

}  // namespace maas
