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

#include "maas/demand.hpp"

#include <cmath>
#include <array>
#include <optional>
#include <random>

namespace maas {

void DemandConfig::validate() const
{
  if (horizon == 0 || !(capacity > 0.0))
  {
    throw DomainError("demand needs a horizon and positive capacity");
  }
  if (!(distance_min > 0.0) || distance_min > distance_max)
  {
    throw DomainError("distance range must be positive and non-empty");
  }
  if (bids_min < 1 || bids_min > bids_max)
  {
    throw DomainError("bid count range must be non-empty and start at 1 or more");
  }
  if (!(band.b_min >= 0.0) || band.b_min > band.b_max)
  {
    throw DomainError("price band needs 0 <= b_min <= b_max");
  }
  if (!band_profile.empty() && band_profile.size() != horizon)
  {
    throw DomainError("price band profile must cover every slot");
  }
  if (package_min < 1 || package_min > package_max)
  {
    throw DomainError("package length range must be non-empty");
  }
  if (!(weekend_min >= 0.0) || weekend_min > weekend_max)
  {
    throw DomainError("weekend factor range must be non-empty");
  }
  if (!(speed_factor > 0.0))
  {
    throw DomainError("speed factor must be positive");
  }
  for (auto const &a : arrivals)
  {
    if (a.first > a.last || !(a.stddev >= 0.0))
    {
      throw DomainError("arrival bands need first <= last and stddev >= 0");
    }
  }
}

DemandConfig DemandConfig::trips(std::size_t horizon)
{
  DemandConfig c;
  c.horizon = horizon;
  auto edge = [horizon](std::size_t slot) { return slot * horizon / 1200; };
  // Morning and evening peaks sit at 121-240 and 721-840 of a 1200-minute day.
  std::size_t const cuts[] = {0, edge(120), edge(240), edge(720), edge(840), horizon};
  for (std::size_t k = 0; k < 5; ++k)
  {
    if (cuts[k] >= cuts[k + 1])
    {
      continue;
    }
    bool const peak = k == 1 || k == 3;
    c.arrivals.push_back({cuts[k], cuts[k + 1] - 1, peak ? 8.0 : 2.0, peak ? 2.0 : 1.0});
  }
  return c;
}

DemandConfig DemandConfig::packages(std::size_t horizon)
{
  DemandConfig c;
  c.mechanism = Mechanism::paap;
  c.horizon = horizon;
  c.capacity = 10000.0;
  c.distance_max = 300.0;
  c.arrivals.push_back({0, horizon - 1, 50.0, 10.0});
  return c;
}

std::size_t scheduled_package_length(std::size_t slot)
{
  static constexpr std::size_t lengths[] = {1, 7, 5, 6};
  return lengths[(slot / 7) % 4];
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng &rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t arrivals_at(DemandConfig const &config, Rng &rng, std::size_t t)
{
  double count = 0.0;
  for (auto const &band : config.arrivals)
  {
    if (t >= band.first && t <= band.last)
    {
      count = band.stddev > 0.0 ? std::normal_distribution<double>(band.mean, band.stddev)(rng)
                                : band.mean;
      break;
    }
  }
  if (config.weekly_schedule && t % 7 >= 5)
  {
    count *= uniform(rng, config.weekend_min, config.weekend_max);
  }
  return static_cast<std::size_t>(std::floor(std::max(0.0, count) + 0.5));
}

std::optional<std::size_t> departure(DemandConfig const &config, Rng &rng, std::size_t t)
{
  if (config.booking_window == 0)
  {
    return t;
  }
  double const lo = static_cast<double>(t);
  double const hi = lo + static_cast<double>(config.booking_window);
  std::array<double, 3> const knots{lo, 0.5 * (lo + hi), hi + 1.0};
  std::array<double, 3> const weights{0.0, 1.0, 0.0};
  std::piecewise_linear_distribution<double> tri(knots.begin(), knots.end(), weights.begin());
  auto const slot = std::min(static_cast<std::size_t>(tri(rng)), t + config.booking_window);
  if (slot >= config.horizon)
  {
    return std::nullopt;
  }
  return slot;
}

}  // namespace

UserRequest draw_request(DemandConfig const &config, ModeCatalog const &catalog,
                         std::mt19937_64 &rng, std::size_t id, std::size_t t)
{
  UserRequest u;
  u.user_id = id;
  u.order_slot = t;
  u.departure_slot = t;
  u.distance = uniform(rng, config.distance_min, config.distance_max);
  if (config.mechanism == Mechanism::paap)
  {
    u.package_length = config.weekly_schedule
                         ? scheduled_package_length(t)
                         : std::uniform_int_distribution<std::size_t>(config.package_min,
                                                                      config.package_max)(rng);
  }
  PriceBand const band = config.band_profile.empty() ? config.band : config.band_profile[t];
  double const fast = u.distance / catalog.fastest().speed;
  double const slow = u.distance / catalog.slowest().speed;
  std::size_t const bids =
    std::uniform_int_distribution<std::size_t>(config.bids_min, config.bids_max)(rng);
  for (std::size_t j = 0; j < bids; ++j)
  {
    double const time = uniform(rng, fast, slow);
    double const q = mobility_resources(u.distance, time);
    double const price = uniform(rng, band.b_min * q, band.b_max * q);
    u.bids.push_back({j, time, price});
  }
  double const first = u.bids.front().price;
  u.delay_budget = first > 0.0 ? uniform(rng, 0.0, 100.0 / first) : 0.0;
  u.inconvenience_tolerance = first > 0.0 ? uniform(rng, 0.0, 100.0 * u.distance / first) : 0.0;
  return u;
}

namespace {

Scenario generate_with(DemandConfig const &config, std::uint64_t seed)
{
  config.validate();
  Rng rng(seed);
  Scenario s;
  s.catalog = ModeCatalog::standard().scaled_speeds(config.speed_factor);
  s.capacity = config.capacity;
  s.horizon = config.horizon;
  s.mechanism = config.mechanism;
  s.band = config.band;
  std::size_t id = 0;
  for (std::size_t t = 0; t < config.horizon; ++t)
  {
    std::size_t const n = arrivals_at(config, rng, t);
    for (std::size_t k = 0; k < n; ++k)
    {
      auto user = draw_request(config, s.catalog, rng, id, t);
      if (auto o = departure(config, rng, t))
      {
        user.departure_slot = *o;
        s.users.push_back(std::move(user));
        ++id;
      }
    }
  }
  return s;
}

}  // namespace

Scenario gen_payg_demand(DemandConfig const &config, std::uint64_t seed)
{
  auto c = config;
  c.mechanism = Mechanism::payg;
  return generate_with(c, seed);
}

Scenario gen_paap_demand(DemandConfig const &config, std::uint64_t seed)
{
  auto c = config;
  c.mechanism = Mechanism::paap;
  return generate_with(c, seed);
}

Scenario generate(DemandConfig const &config)
{
  return generate_with(config, config.seed);
}

}  // namespace maas
