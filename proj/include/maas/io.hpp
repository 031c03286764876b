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

#include "maas/analysis.hpp"
#include "maas/demand.hpp"
#include "maas/horizon.hpp"
#include "maas/offline.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace maas {

using Json = nlohmann::ordered_json;

// Scenario documents follow docs/scenario.schema.json.
Json     scenario_to_json(Scenario const &scenario);
Scenario scenario_from_json(Json const &doc);
void     save_scenario(std::filesystem::path const &path, Scenario const &scenario);
Scenario load_scenario(std::filesystem::path const &path);

/// Keys: mechanism, solver, step, window, price_function, payment, capacity, horizon, seed.
struct RunConfig
{
  HorizonConfig                horizon;
  std::optional<double>        capacity;
  std::optional<std::size_t>   horizon_slots;
  std::optional<std::uint64_t> seed;
};

RunConfig run_config_from_json(Json const &doc);
Json      to_json(HorizonConfig const &config);

Json to_json(SlotOutcome const &outcome);
Json to_json(IterationRecord const &record);
Json to_json(Allocation const &allocation);

/// One JSON object per line: a "slot" record per online step, then an
/// "iteration" record per roll.
void write_event_log(std::ostream &out, AuctionTrace const &trace);

struct RunSummary
{
  HorizonConfig                      config;
  std::uint64_t                      seed{0};
  std::size_t                        users{0};
  double                             total_welfare{0.0};
  double                             mean_acceptance{0.0};
  std::vector<double>                welfare;
  std::vector<std::optional<double>> acceptance;
  std::vector<std::optional<double>> unit_price;
  std::vector<double>                availability;
  std::optional<double>              runtime_seconds;
  std::size_t                        failed_iterations{0};
};

RunSummary summarize(AuctionTrace const &trace, Scenario const &scenario, std::uint64_t seed,
                     bool include_runtime = false);
Json       to_json(RunSummary const &summary);
/// slot,welfare,unit_price,availability,acceptance with empty cells for absent values.
void write_series_csv(std::ostream &out, RunSummary const &summary);

Json to_json(RatioReport const &report);
Json to_json(IcReport const &report);
Json to_json(LpIcReport const &report);
Json to_json(OfflineInstance const &instance, OfflineSolution const &solution);

}  // namespace maas
