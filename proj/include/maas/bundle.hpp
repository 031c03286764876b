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

#include <optional>
#include <string>
#include <vector>

namespace maas {

enum class BundleObjective
{
  min_inconvenience,
  min_total_time,
  feasibility_only
};

std::string     to_string(BundleObjective objective);
BundleObjective parse_bundle_objective(std::string const &text);

enum class BundleOutcome
{
  feasible,
  price_gate,  // bid below Q times the unit price
  geometry     // no travel-time split satisfies distance, time and inconvenience limits
};

struct BundleResult
{
  BundleOutcome         outcome{BundleOutcome::geometry};
  std::optional<Bundle> bundle;

  explicit operator bool() const noexcept { return bundle.has_value(); }
};

/// Searches for a per-mode travel-time split serving `bid`. The price gate is
/// checked first; pass a unit price of 0 to test geometry alone.
BundleResult feasible_bundle(UserRequest const &request, BidItem const &bid,
                             ModeCatalog const &catalog,
                             BundleObjective objective = BundleObjective::min_inconvenience,
                             double unit_price = 0.0);

struct BundleViolation
{
  std::string constraint;  // "distance", "min_time", "max_time", "inconvenience", "non_negative", "dimension"
  double      residual{0.0};
};

struct BundleCheck
{
  bool                         feasible{true};
  std::vector<BundleViolation> violations;

  explicit operator bool() const noexcept { return feasible; }
};

BundleCheck is_bundle_feasible(Bundle const &bundle, UserRequest const &request,
                               BidItem const &bid, ModeCatalog const &catalog);

}  // namespace maas
