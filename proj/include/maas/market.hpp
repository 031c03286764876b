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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace maas {

/// Tolerance used wherever two resource or money quantities are compared.
inline constexpr double kEpsilon = 1e-9;

/// Raised when an operation is called outside its mathematical domain.
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Raised when a reservation would drive some slot's availability below zero.
class ReservationError : public std::runtime_error
{
public:
  ReservationError(std::size_t slot, double available, double requested);

  std::size_t slot() const noexcept { return slot_; }
  double available() const noexcept { return available_; }
  double requested() const noexcept { return requested_; }

private:
  std::size_t slot_;
  double      available_;
  double      requested_;
};

enum class Mechanism
{
  payg,
  paap
};

std::string to_string(Mechanism m);
Mechanism   parse_mechanism(std::string const &text);

struct TravelMode
{
  std::size_t id{0};
  double      speed{0.0};               // km per minute
  double      inconvenience_rate{0.0};  // dollars per minute
  std::string label;
};

/// Ordered, validated set of travel modes.
class ModeCatalog
{
public:
  explicit ModeCatalog(std::vector<TravelMode> modes);

  /// Taxi, two- and three-rider ride sharing, public transit and bike sharing.
  static ModeCatalog standard();

  std::span<TravelMode const> modes() const noexcept { return modes_; }
  std::size_t                 size() const noexcept { return modes_.size(); }
  TravelMode const           &operator[](std::size_t index) const { return modes_.at(index); }

  // Ties on speed go to the lowest id.
  TravelMode const &fastest() const;
  TravelMode const &slowest() const;

  /// Copy with every speed multiplied by `factor`.
  ModeCatalog scaled_speeds(double factor) const;

private:
  std::vector<TravelMode> modes_;
};

struct BidItem
{
  std::size_t bid_id{0};
  double      requested_time{0.0};  // minutes
  double      price{0.0};           // dollars
};

struct UserRequest
{
  std::size_t          user_id{0};
  double               distance{0.0};  // km
  std::size_t          departure_slot{0};
  std::size_t          order_slot{0};  // slot at which the request is placed; <= departure_slot
  double               delay_budget{0.0};
  double               inconvenience_tolerance{0.0};
  std::size_t          package_length{1};
  std::vector<BidItem> bids;

  /// Throws DomainError on any violated invariant.
  void validate(Mechanism mechanism) const;

  double resources(BidItem const &bid) const;
  double max_resources() const;
  double min_resources() const;
  double unit_bid(BidItem const &bid) const { return bid.price / resources(bid); }
};

struct Bundle
{
  std::vector<double> times;  // minutes per mode, indexed like ModeCatalog

  double total_time() const;
};

/// Inclusive slot range.
struct SlotWindow
{
  std::size_t start{0};
  std::size_t end{0};

  std::size_t length() const noexcept { return end - start + 1; }
  bool        contains(std::size_t t) const noexcept { return t >= start && t <= end; }
  bool        operator==(SlotWindow const &) const = default;
};

struct Allocation
{
  std::size_t           user_id{0};
  std::size_t           bid_id{0};
  double                fraction{0.0};
  double                raw_fraction{0.0};  // before clamping; equals fraction under PAYG
  std::optional<Bundle> bundle;
  double                resources{0.0};  // Q_ij
  double                bid_price{0.0};
  double                unit_price{0.0};  // posted price the payment is computed from
  double                payment{0.0};
  SlotWindow            window;

  double reserved() const noexcept { return resources * fraction; }
  double welfare() const noexcept { return bid_price * fraction; }
};

/// Speed-weighted distance D^2 / T requested by a bid.
double mobility_resources(double distance_km, double requested_time_min);

/// Slots spanned by a bundle: ceil of its total minutes over the slot length.
std::size_t slots_needed(Bundle const &bundle, double slot_minutes = 1.0);

/// Per-slot available mobility resources.
///
/// Reservations are journaled per slot in insertion order, so releasing a
/// reservation recomputes the affected slots exactly as if it had never been
/// made.
class CapacityLedger
{
public:
  CapacityLedger(double capacity, std::size_t horizon);

  double      capacity() const noexcept { return capacity_; }
  std::size_t horizon() const noexcept { return available_.size(); }

  /// A_t, never negative.
  double available(std::size_t t) const;
  /// z_t = C - A_t.
  double allocated(std::size_t t) const { return capacity_ - available(t); }
  /// Smallest availability over a window.
  double min_available(SlotWindow window) const;
  std::vector<double> availability() const;

  /// Clips a window's end to the last slot of the horizon.
  SlotWindow clip(SlotWindow window) const;

  /// Atomically subtracts `amount` from every slot of `window`. Throws
  /// ReservationError naming the first slot that cannot absorb it.
  void reserve(SlotWindow window, double amount);
  /// Inverse of reserve. Throws DomainError when no matching reservation exists.
  void release(SlotWindow window, double amount);

private:
  void check_window(SlotWindow window) const;
  void recompute(std::size_t t);

  struct Entry
  {
    std::uint64_t id;
    double        amount;
  };

  double                          capacity_;
  std::vector<double>             available_;
  std::vector<std::vector<Entry>> journal_;
  std::uint64_t                   next_id_{0};
};

}  // namespace maas
