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

#include "maas/bundle.hpp"

#include "maas/lp.hpp"

#include <cmath>

namespace maas {

std::string to_string(BundleObjective objective)
{
  switch (objective)
  {
  case BundleObjective::min_inconvenience: return "min_inconvenience";
  case BundleObjective::min_total_time: return "min_total_time";
  case BundleObjective::feasibility_only: return "feasibility_only";
  }
  return "min_inconvenience";
}

BundleObjective parse_bundle_objective(std::string const &text)
{
  if (text == "min_inconvenience")
  {
    return BundleObjective::min_inconvenience;
  }
  if (text == "min_total_time")
  {
    return BundleObjective::min_total_time;
  }
  if (text == "feasibility_only")
  {
    return BundleObjective::feasibility_only;
  }
  throw DomainError("unknown bundle objective: " + text);
}

BundleResult feasible_bundle(UserRequest const &request, BidItem const &bid,
                             ModeCatalog const &catalog, BundleObjective objective,
                             double unit_price)
{
  if (!(unit_price >= 0.0))
  {
    throw DomainError("unit price must be non-negative");
  }
  double const q = request.resources(bid);
  if (bid.price + kEpsilon < q * unit_price)
  {
    return {BundleOutcome::price_gate, std::nullopt};
  }

  std::size_t const modes = catalog.size();
  StandardLP lp;
  lp.sense = ObjectiveSense::minimize;
  for (auto const &mode : catalog.modes())
  {
    double c = 0.0;
    if (objective == BundleObjective::min_inconvenience)
    {
      c = mode.inconvenience_rate;
    }
    else if (objective == BundleObjective::min_total_time)
    {
      c = 1.0;
    }
    lp.add_variable(c);
  }
  std::vector<double> speed(modes);
  std::vector<double> ones(modes, 1.0);
  std::vector<double> sigma(modes);
  for (std::size_t m = 0; m < modes; ++m)
  {
    speed[m] = catalog[m].speed;
    sigma[m] = catalog[m].inconvenience_rate;
  }
  lp.add_row(speed, RowSense::equal, request.distance);
  lp.add_row(ones, RowSense::greater_equal, bid.requested_time);
  lp.add_row(ones, RowSense::less_equal, bid.requested_time + request.delay_budget);
  lp.add_row(sigma, RowSense::less_equal, request.inconvenience_tolerance);

  LpResult const solved = solve_lp(lp);
  if (solved.status != LpStatus::optimal)
  {
    return {BundleOutcome::geometry, std::nullopt};
  }
  Bundle bundle{solved.x};
  for (double &l : bundle.times)
  {
    l = std::max(0.0, l);
  }
  if (!is_bundle_feasible(bundle, request, bid, catalog))
  {
    return {BundleOutcome::geometry, std::nullopt};
  }
  return {BundleOutcome::feasible, std::move(bundle)};
}

BundleCheck is_bundle_feasible(Bundle const &bundle, UserRequest const &request,
                               BidItem const &bid, ModeCatalog const &catalog)
{
  BundleCheck check;
  auto violate = [&check](std::string name, double residual) {
    check.feasible = false;
    check.violations.push_back({std::move(name), residual});
  };
  if (bundle.times.size() != catalog.size())
  {
    violate("dimension", static_cast<double>(bundle.times.size()) -
                           static_cast<double>(catalog.size()));
    return check;
  }
  double distance = 0.0;
  double time = 0.0;
  double inconvenience = 0.0;
  for (std::size_t m = 0; m < catalog.size(); ++m)
  {
    double const l = bundle.times[m];
    if (l < -kEpsilon)
    {
      violate("non_negative", -l);
    }
    distance += catalog[m].speed * l;
    time += l;
    inconvenience += catalog[m].inconvenience_rate * l;
  }
  // Scale the distance tolerance with the trip so long trips do not fail on rounding.
  double const distance_tol = kEpsilon * std::max(1.0, request.distance);
  if (std::abs(distance - request.distance) > distance_tol)
  {
    violate("distance", distance - request.distance);
  }
  if (time < bid.requested_time - kEpsilon * std::max(1.0, bid.requested_time))
  {
    violate("min_time", bid.requested_time - time);
  }
  double const latest = bid.requested_time + request.delay_budget;
  if (time > latest + kEpsilon * std::max(1.0, latest))
  {
    violate("max_time", time - latest);
  }
  double const cap = request.inconvenience_tolerance;
  if (inconvenience > cap + kEpsilon * std::max(1.0, cap))
  {
    violate("inconvenience", inconvenience - cap);
  }
  return check;
}

}  // namespace maas
