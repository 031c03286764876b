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

#include "maas/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace maas {

ReservationError::ReservationError(std::size_t slot, double available, double requested)
  : std::runtime_error([&] {
    std::ostringstream os;
    os << "insufficient capacity at slot " << slot << ": available " << available << ", requested "
       << requested;
    return os.str();
  }())
  , slot_(slot)
  , available_(available)
  , requested_(requested)
{}

std::string to_string(Mechanism m)
{
  return m == Mechanism::payg ? "payg" : "paap";
}

Mechanism parse_mechanism(std::string const &text)
{
  if (text == "payg")
  {
    return Mechanism::payg;
  }
  if (text == "paap")
  {
    return Mechanism::paap;
  }
  throw DomainError("unknown mechanism: " + text);
}

ModeCatalog::ModeCatalog(std::vector<TravelMode> modes)
  : modes_(std::move(modes))
{
  if (modes_.empty())
  {
    throw DomainError("mode catalog must not be empty");
  }
  std::set<std::size_t> ids;
  for (auto const &mode : modes_)
  {
    if (!(mode.speed > 0.0))
    {
      throw DomainError("mode speed must be positive: " + mode.label);
    }
    if (!(mode.inconvenience_rate >= 0.0))
    {
      throw DomainError("mode inconvenience rate must be non-negative: " + mode.label);
    }
    if (!ids.insert(mode.id).second)
    {
      throw DomainError("duplicate mode id " + std::to_string(mode.id));
    }
  }
}

ModeCatalog ModeCatalog::standard()
{
  return ModeCatalog({{0, 0.5, 0.0, "taxi"},
                      {1, 0.3, 0.5, "ride-sharing-2"},
                      {2, 0.25, 1.0, "ride-sharing-3"},
                      {3, 0.18, 2.0, "public-transit"},
                      {4, 0.1, 6.0, "bike-sharing"}});
}

TravelMode const &ModeCatalog::fastest() const
{
  return *std::min_element(modes_.begin(), modes_.end(), [](auto const &a, auto const &b) {
    return a.speed > b.speed || (a.speed == b.speed && a.id < b.id);
  });
}

TravelMode const &ModeCatalog::slowest() const
{
  return *std::min_element(modes_.begin(), modes_.end(), [](auto const &a, auto const &b) {
    return a.speed < b.speed || (a.speed == b.speed && a.id < b.id);
  });
}

ModeCatalog ModeCatalog::scaled_speeds(double factor) const
{
  auto modes = modes_;
  for (auto &mode : modes)
  {
    mode.speed *= factor;
  }
  return ModeCatalog(std::move(modes));
}

void UserRequest::validate(Mechanism mechanism) const
{
  auto fail = [this](std::string const &what) {
    throw DomainError("user " + std::to_string(user_id) + ": " + what);
  };
  if (!(distance > 0.0))
  {
    fail("distance must be positive");
  }
  if (!(delay_budget >= 0.0))
  {
    fail("delay budget must be non-negative");
  }
  if (!(inconvenience_tolerance >= 0.0))
  {
    fail("inconvenience tolerance must be non-negative");
  }
  if (order_slot > departure_slot)
  {
    fail("order slot after departure slot");
  }
  if (package_length < 1)
  {
    fail("package length must be at least one slot");
  }
  if (mechanism == Mechanism::payg && package_length != 1)
  {
    fail("package length must be 1 under pay-as-you-go");
  }
  if (bids.empty())
  {
    fail("no bids");
  }
  std::set<std::size_t> ids;
  for (auto const &bid : bids)
  {
    if (!(bid.requested_time > 0.0))
    {
      fail("requested time must be positive");
    }
    if (!(bid.price >= 0.0))
    {
      fail("bid price must be non-negative");
    }
    if (!ids.insert(bid.bid_id).second)
    {
      fail("duplicate bid id " + std::to_string(bid.bid_id));
    }
  }
}

double UserRequest::resources(BidItem const &bid) const
{
  return mobility_resources(distance, bid.requested_time);
}

double UserRequest::max_resources() const
{
  double best = 0.0;
  for (auto const &bid : bids)
  {
    best = std::max(best, resources(bid));
  }
  return best;
}

double UserRequest::min_resources() const
{
  if (bids.empty())
  {
    return 0.0;
  }
  double best = resources(bids.front());
  for (auto const &bid : bids)
  {
    best = std::min(best, resources(bid));
  }
  return best;
}

double Bundle::total_time() const
{
  return std::accumulate(times.begin(), times.end(), 0.0);
}

double mobility_resources(double distance_km, double requested_time_min)
{
  if (!(distance_km > 0.0) || !(requested_time_min > 0.0))
  {
    throw DomainError("mobility resources need positive distance and time");
  }
  return distance_km * distance_km / requested_time_min;
}

std::size_t slots_needed(Bundle const &bundle, double slot_minutes)
{
  if (!(slot_minutes > 0.0))
  {
    throw DomainError("slot length must be positive");
  }
  double const total = bundle.total_time() / slot_minutes;
  // Guard against 12.000000000001 style noise from the LP.
  return static_cast<std::size_t>(std::ceil(total - kEpsilon));
}

CapacityLedger::CapacityLedger(double capacity, std::size_t horizon)
  : capacity_(capacity)
  , available_(horizon, capacity)
  , journal_(horizon)
{
  if (!(capacity > 0.0))
  {
    throw DomainError("capacity must be positive");
  }
  if (horizon == 0)
  {
    throw DomainError("horizon must contain at least one slot");
  }
}

double CapacityLedger::available(std::size_t t) const
{
  return std::max(0.0, available_.at(t));
}

double CapacityLedger::min_available(SlotWindow window) const
{
  check_window(window);
  double best = available(window.start);
  for (std::size_t t = window.start; t <= window.end; ++t)
  {
    best = std::min(best, available(t));
  }
  return best;
}

std::vector<double> CapacityLedger::availability() const
{
  std::vector<double> out(available_.size());
  for (std::size_t t = 0; t < out.size(); ++t)
  {
    out[t] = available(t);
  }
  return out;
}

SlotWindow CapacityLedger::clip(SlotWindow window) const
{
  window.end = std::min(window.end, horizon() - 1);
  return window;
}

void CapacityLedger::check_window(SlotWindow window) const
{
  if (window.start > window.end || window.end >= horizon())
  {
    throw DomainError("reservation window [" + std::to_string(window.start) + ", " +
                      std::to_string(window.end) + "] outside horizon of " +
                      std::to_string(horizon()) + " slots");
  }
}

void CapacityLedger::reserve(SlotWindow window, double amount)
{
  check_window(window);
  if (!(amount >= 0.0))
  {
    throw DomainError("reservation amount must be non-negative");
  }
  if (amount == 0.0)
  {
    return;
  }
  for (std::size_t t = window.start; t <= window.end; ++t)
  {
    if (available_[t] - amount < -kEpsilon)
    {
      throw ReservationError(t, available(t), amount);
    }
  }
  auto const id = next_id_++;
  for (std::size_t t = window.start; t <= window.end; ++t)
  {
    journal_[t].push_back({id, amount});
    available_[t] -= amount;
  }
}

void CapacityLedger::release(SlotWindow window, double amount)
{
  check_window(window);
  if (amount == 0.0)
  {
    return;
  }
  // The most recent reservation with this exact window and amount.
  auto const &first = journal_[window.start];
  std::optional<std::uint64_t> id;
  for (auto it = first.rbegin(); it != first.rend() && !id; ++it)
  {
    if (it->amount != amount)
    {
      continue;
    }
    bool whole = true;
    for (std::size_t t = window.start; t <= window.end && whole; ++t)
    {
      whole = std::any_of(journal_[t].begin(), journal_[t].end(),
                          [&](Entry const &e) { return e.id == it->id; });
    }
    bool const wider = (window.start > 0 &&
                        std::any_of(journal_[window.start - 1].begin(),
                                    journal_[window.start - 1].end(),
                                    [&](Entry const &e) { return e.id == it->id; })) ||
                       (window.end + 1 < horizon() &&
                        std::any_of(journal_[window.end + 1].begin(), journal_[window.end + 1].end(),
                                    [&](Entry const &e) { return e.id == it->id; }));
    if (whole && !wider)
    {
      id = it->id;
    }
  }
  if (!id)
  {
    throw DomainError("release does not match any reservation");
  }
  for (std::size_t t = window.start; t <= window.end; ++t)
  {
    auto &entries = journal_[t];
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [&](Entry const &e) { return e.id == *id; }),
                  entries.end());
    recompute(t);
  }
}

void CapacityLedger::recompute(std::size_t t)
{
  double value = capacity_;
  for (auto const &entry : journal_[t])
  {
    value -= entry.amount;
  }
  available_[t] = value;
}

}  // namespace maas
