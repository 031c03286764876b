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

#include "maas/io.hpp"

#include <fstream>
#include <ostream>

namespace maas {

namespace {

Json optional_number(std::optional<double> const &v)
{
  return v ? Json(*v) : Json(nullptr);
}

Json optional_series(std::vector<std::optional<double>> const &values)
{
  Json out = Json::array();
  for (auto const &v : values)
  {
    out.push_back(optional_number(v));
  }
  return out;
}

Json window_json(SlotWindow w)
{
  return Json::array({w.start, w.end});
}

template <typename T>
T required(Json const &doc, char const *key)
{
  if (!doc.contains(key))
  {
    throw DomainError(std::string("missing field: ") + key);
  }
  return doc.at(key).get<T>();
}

}  // namespace

Json scenario_to_json(Scenario const &s)
{
  Json doc;
  doc["mechanism"] = to_string(s.mechanism);
  doc["capacity"] = s.capacity;
  doc["horizon"] = s.horizon;
  if (s.band)
  {
    doc["price_band"] = {{"b_min", s.band->b_min}, {"b_max", s.band->b_max}};
  }
  else
  {
    doc["price_band"] = nullptr;
  }
  Json modes = Json::array();
  for (auto const &m : s.catalog.modes())
  {
    modes.push_back({{"id", m.id},
                     {"label", m.label},
                     {"speed", m.speed},
                     {"inconvenience_rate", m.inconvenience_rate}});
  }
  doc["modes"] = std::move(modes);
  Json users = Json::array();
  for (auto const &u : s.users)
  {
    Json bids = Json::array();
    for (auto const &b : u.bids)
    {
      bids.push_back({{"bid_id", b.bid_id}, {"requested_time", b.requested_time}, {"price", b.price}});
    }
    users.push_back({{"user_id", u.user_id},
                     {"distance", u.distance},
                     {"departure_slot", u.departure_slot},
                     {"order_slot", u.order_slot},
                     {"delay_budget", u.delay_budget},
                     {"inconvenience_tolerance", u.inconvenience_tolerance},
                     {"package_length", u.package_length},
                     {"bids", std::move(bids)}});
  }
  doc["users"] = std::move(users);
  return doc;
}

Scenario scenario_from_json(Json const &doc)
{
  Scenario s;
  s.mechanism = parse_mechanism(required<std::string>(doc, "mechanism"));
  s.capacity = required<double>(doc, "capacity");
  s.horizon = required<std::size_t>(doc, "horizon");
  if (doc.contains("price_band"))
  {
    auto const &band = doc.at("price_band");
    s.band = band.is_null() ? std::nullopt
                            : std::optional<PriceBand>(PriceBand{required<double>(band, "b_min"),
                                                                 required<double>(band, "b_max")});
  }
  if (doc.contains("modes"))
  {
    std::vector<TravelMode> modes;
    for (auto const &m : doc.at("modes"))
    {
      modes.push_back({required<std::size_t>(m, "id"), required<double>(m, "speed"),
                       required<double>(m, "inconvenience_rate"), m.value("label", std::string())});
    }
    s.catalog = ModeCatalog(std::move(modes));
  }
  for (auto const &u : required<Json>(doc, "users"))
  {
    UserRequest user;
    user.user_id = required<std::size_t>(u, "user_id");
    user.distance = required<double>(u, "distance");
    user.departure_slot = required<std::size_t>(u, "departure_slot");
    user.order_slot = u.value("order_slot", user.departure_slot);
    user.delay_budget = u.value("delay_budget", 0.0);
    user.inconvenience_tolerance = u.value("inconvenience_tolerance", 0.0);
    user.package_length = u.value("package_length", std::size_t{1});
    for (auto const &b : required<Json>(u, "bids"))
    {
      user.bids.push_back({required<std::size_t>(b, "bid_id"), required<double>(b, "requested_time"),
                           required<double>(b, "price")});
    }
    s.users.push_back(std::move(user));
  }
  s.validate();
  return s;
}

void save_scenario(std::filesystem::path const &path, Scenario const &scenario)
{
  std::ofstream out(path);
  if (!out)
  {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << scenario_to_json(scenario).dump(2) << '\n';
}

Scenario load_scenario(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot read " + path.string());
  }
  return scenario_from_json(Json::parse(in));
}

RunConfig run_config_from_json(Json const &doc)
{
  RunConfig c;
  if (doc.contains("mechanism"))
  {
    c.horizon.mechanism = parse_mechanism(doc.at("mechanism").get<std::string>());
  }
  if (doc.contains("solver"))
  {
    c.horizon.solver = parse_solver(doc.at("solver").get<std::string>());
  }
  if (doc.contains("price_function"))
  {
    c.horizon.price_function = parse_price_function(doc.at("price_function").get<std::string>());
  }
  if (doc.contains("payment"))
  {
    auto const rule = doc.at("payment").get<std::string>();
    if (rule != "posted_price" && rule != "dual_price")
    {
      throw DomainError("unknown payment rule: " + rule);
    }
    c.horizon.payment = rule == "posted_price" ? PaymentRule::posted_price : PaymentRule::dual_price;
  }
  c.horizon.step = doc.value("step", c.horizon.step);
  c.horizon.window = doc.value("window", c.horizon.window);
  if (doc.contains("capacity"))
  {
    c.capacity = doc.at("capacity").get<double>();
  }
  if (doc.contains("horizon"))
  {
    c.horizon_slots = doc.at("horizon").get<std::size_t>();
  }
  if (doc.contains("seed"))
  {
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  return c;
}

Json to_json(HorizonConfig const &c)
{
  return {{"mechanism", to_string(c.mechanism)},
          {"solver", to_string(c.solver)},
          {"step", c.step},
          {"window", c.window},
          {"price_function", to_string(c.price_function)},
          {"payment", to_string(c.payment)}};
}

Json to_json(Allocation const &a)
{
  Json doc{{"user_id", a.user_id},
           {"bid_id", a.bid_id},
           {"fraction", a.fraction},
           {"raw_fraction", a.raw_fraction},
           {"resources", a.resources},
           {"bid_price", a.bid_price},
           {"unit_price", a.unit_price},
           {"payment", a.payment},
           {"window", window_json(a.window)}};
  doc["bundle"] = a.bundle ? Json(a.bundle->times) : Json(nullptr);
  return doc;
}

Json to_json(SlotOutcome const &o)
{
  Json allocations = Json::array();
  for (auto const &a : o.allocations)
  {
    allocations.push_back(to_json(a));
  }
  Json rejected = Json::array();
  for (auto const &r : o.rejected)
  {
    rejected.push_back({{"user_id", r.user_id}, {"reason", to_string(r.reason)}});
  }
  return {{"type", "slot"},
          {"slot", o.slot},
          {"mechanism", to_string(o.mechanism)},
          {"available", o.available_start},
          {"posted_price", optional_number(o.posted_price)},
          {"ratio", o.priced ? Json(o.ratio) : Json(nullptr)},
          {"alpha", o.priced ? Json(o.alpha) : Json(nullptr)},
          {"q_trace", o.dual_price_trace},
          {"q_end", optional_number(o.q_end)},
          {"q_negative", o.q_negative},
          {"users", o.users},
          {"participants", o.participants},
          {"welfare", o.welfare},
          {"allocations", std::move(allocations)},
          {"rejections", std::move(rejected)}};
}

Json to_json(IterationRecord const &r)
{
  Json doc{{"type", "iteration"},
           {"index", r.index},
           {"slots", Json::array({r.first_slot, r.last_slot})},
           {"users", r.users},
           {"accepted", r.accepted},
           {"welfare", r.welfare},
           {"objective", r.objective},
           {"nodes", r.nodes},
           {"proven_optimal", r.proven_optimal},
           {"repair_iterations", r.repair_iterations},
           {"repair_capped", r.repair_capped}};
  doc["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
  return doc;
}

void write_event_log(std::ostream &out, AuctionTrace const &trace)
{
  for (auto const &o : trace.outcomes)
  {
    out << to_json(o).dump() << '\n';
  }
  for (auto const &r : trace.iterations)
  {
    out << to_json(r).dump() << '\n';
  }
}

RunSummary summarize(AuctionTrace const &trace, Scenario const &scenario, std::uint64_t seed,
                     bool include_runtime)
{
  RunSummary s;
  s.config = trace.config;
  s.seed = seed;
  s.users = scenario.users.size();
  s.total_welfare = trace.total_welfare;
  s.mean_acceptance = trace.mean_acceptance;
  s.welfare = trace.series.welfare;
  s.acceptance = trace.series.acceptance;
  s.unit_price = trace.series.unit_price;
  s.availability = trace.series.availability;
  if (include_runtime)
  {
    s.runtime_seconds = trace.runtime_seconds;
  }
  for (auto const &r : trace.iterations)
  {
    s.failed_iterations += !r.error.empty();
  }
  return s;
}

Json to_json(RunSummary const &s)
{
  Json doc{{"config", to_json(s.config)},
           {"seed", s.seed},
           {"users", s.users},
           {"total_welfare", s.total_welfare},
           {"mean_acceptance", s.mean_acceptance},
           {"failed_iterations", s.failed_iterations},
           {"runtime_seconds", optional_number(s.runtime_seconds)},
           {"series",
            {{"welfare", s.welfare},
             {"acceptance", optional_series(s.acceptance)},
             {"unit_price", optional_series(s.unit_price)},
             {"availability", s.availability}}}};
  return doc;
}

void write_series_csv(std::ostream &out, RunSummary const &s)
{
  auto cell = [&out](std::optional<double> const &v) {
    if (v)
    {
      out << Json(*v).dump();
    }
  };
  out << "slot,welfare,unit_price,availability,acceptance\n";
  for (std::size_t t = 0; t < s.welfare.size(); ++t)
  {
    out << t << ',' << Json(s.welfare[t]).dump() << ',';
    cell(s.unit_price[t]);
    out << ',' << Json(s.availability[t]).dump() << ',';
    cell(s.acceptance[t]);
    out << '\n';
  }
}

Json to_json(RatioReport const &r)
{
  return {{"mechanism", to_string(r.mechanism)},
          {"theta", r.theta},
          {"ratio_extreme", r.ratio_extreme},
          {"alpha_min", r.alpha_min},
          {"welfare_ratio", optional_number(r.welfare_ratio)},
          {"gap", optional_number(r.gap)},
          {"ratio_series", optional_series(r.ratio_series)},
          {"alpha_series", optional_series(r.alpha_series)}};
}

Json to_json(IcReport const &r)
{
  Json profitable = Json::array();
  for (auto const &m : r.profitable)
  {
    profitable.push_back({{"bid_id", m.bid_id},
                          {"factor", m.factor},
                          {"truthful_utility", m.truthful_utility},
                          {"misreport_utility", m.misreport_utility}});
  }
  return {{"cases", r.cases},
          {"violations", r.violations},
          {"worst_gain", r.worst_gain},
          {"classified", r.classified},
          {"table_mismatches", r.table_mismatches},
          {"profitable", std::move(profitable)}};
}

Json to_json(LpIcReport const &r)
{
  Json points = Json::array();
  for (auto const &p : r.points)
  {
    points.push_back({{"factor", p.factor}, {"delta", p.delta}, {"utility", p.utility}});
  }
  return {{"truthful_utility", r.truthful_utility},
          {"cases", r.cases},
          {"violations", r.violations},
          {"worst_gain", r.worst_gain},
          {"points", std::move(points)}};
}

Json to_json(OfflineInstance const &instance, OfflineSolution const &s)
{
  Json columns = Json::array();
  for (std::size_t c = 0; c < instance.columns.size(); ++c)
  {
    auto const &col = instance.columns[c];
    Json entry{{"user_id", col.user_id},
               {"bid_id", col.bid_id},
               {"slot", col.slot},
               {"resources", col.resources},
               {"price", col.price},
               {"occupancy", window_json(col.occupancy)},
               {"chi", s.chi[c]}};
    if (!s.payments.empty())
    {
      entry["payment"] = s.payments[c];
    }
    columns.push_back(std::move(entry));
  }
  Json repair = Json::array();
  for (auto const &step : s.repair_log)
  {
    repair.push_back({{"iteration", step.iteration}, {"removed", step.removed}, {"prices", step.prices}});
  }
  return {{"objective", s.objective},
          {"integral", s.integral},
          {"proven_optimal", s.proven_optimal},
          {"nodes", s.nodes},
          {"slot_duals", s.slot_duals},
          {"user_duals", s.user_duals},
          {"dual_objective", s.dual_objective},
          {"slot_prices", s.slot_prices},
          {"repair_capped", s.repair_capped},
          {"repair_log", std::move(repair)},
          {"columns", std::move(columns)}};
}

}  // namespace maas
