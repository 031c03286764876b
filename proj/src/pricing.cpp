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

#include "maas/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace maas {

std::string to_string(PriceFunction kind)
{
  switch (kind)
  {
  case PriceFunction::linear: return "linear";
  case PriceFunction::quadratic: return "quadratic";
  case PriceFunction::exponential: return "exponential";
  }
  return "linear";
}

PriceFunction parse_price_function(std::string const &text)
{
  if (text == "linear")
  {
    return PriceFunction::linear;
  }
  if (text == "quadratic")
  {
    return PriceFunction::quadratic;
  }
  if (text == "exponential")
  {
    return PriceFunction::exponential;
  }
  throw DomainError("unknown price function: " + text);
}

void PriceParams::validate() const
{
  if (!(capacity > 0.0))
  {
    throw DomainError("price capacity must be positive");
  }
  if (!(band.b_min >= 0.0) || !(band.b_min <= band.b_max))
  {
    throw DomainError("price band needs 0 <= b_min <= b_max");
  }
  if (kind == PriceFunction::exponential && !(alpha > 1.0))
  {
    throw DomainError("exponential price needs alpha > 1");
  }
}

PriceBand bid_price_bounds(std::span<UserRequest const> users)
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (auto const &user : users)
  {
    for (auto const &bid : user.bids)
    {
      double const unit = user.unit_bid(bid);
      lo = std::min(lo, unit);
      hi = std::max(hi, unit);
    }
  }
  if (!(lo <= hi))
  {
    throw DomainError("no bids to bound");
  }
  return {lo, hi};
}

namespace {

void check_load(double z, PriceParams const &params)
{
  params.validate();
  if (!(z >= -kEpsilon) || !(z <= params.capacity + kEpsilon))
  {
    throw DomainError("allocated resources outside [0, C]");
  }
}

}  // namespace

double unit_price_linear(double z, PriceParams const &params)
{
  check_load(z, params);
  return params.band.b_max / params.capacity * z + params.band.b_min;
}

double unit_price_quadratic(double z, PriceParams const &params)
{
  check_load(z, params);
  double const c = params.capacity;
  return z * z / (c * c) + params.band.b_max / c * z + params.band.b_min;
}

double unit_price_exponential(double z, PriceParams const &params)
{
  check_load(z, params);
  double const a = params.alpha;
  return params.band.b_max / (a - 1.0) * (std::pow(a, z / params.capacity) - 1.0) +
         params.band.b_min;
}

double unit_price(double z, PriceParams const &params)
{
  switch (params.kind)
  {
  case PriceFunction::linear: return unit_price_linear(z, params);
  case PriceFunction::quadratic: return unit_price_quadratic(z, params);
  case PriceFunction::exponential: return unit_price_exponential(z, params);
  }
  throw DomainError("unknown price function");
}

double alpha_from_ratio(double ratio)
{
  if (!(ratio >= 0.0))
  {
    throw DomainError("resource ratio must be non-negative");
  }
  if (ratio < 1e-12)
  {
    return std::numbers::e;
  }
  // log1p keeps precision when R is tiny.
  return std::exp(std::log1p(ratio) / ratio);
}

namespace {

template <typename Pick, typename Combine>
AlphaValue alpha_from_users(std::span<UserRequest const> users, double available, Pick pick,
                            Combine combine)
{
  if (!(available > 0.0))
  {
    throw DomainError("available resources must be positive");
  }
  if (users.empty())
  {
    throw DomainError("no users to derive alpha from");
  }
  double ratio = pick(users.front()) / available;
  for (auto const &user : users)
  {
    ratio = combine(ratio, pick(user) / available);
  }
  return {ratio, alpha_from_ratio(ratio)};
}

}  // namespace

AlphaValue alpha_payg(std::span<UserRequest const> users, double available)
{
  return alpha_from_users(
    users, available, [](UserRequest const &u) { return u.max_resources(); },
    [](double a, double b) { return std::max(a, b); });
}

AlphaValue alpha_paap(std::span<UserRequest const> users, double available)
{
  return alpha_from_users(
    users, available, [](UserRequest const &u) { return u.min_resources(); },
    [](double a, double b) { return std::min(a, b); });
}

double payment(double resources, double unit_price)
{
  if (!(resources >= 0.0) || !(unit_price >= 0.0))
  {
    throw DomainError("payment inputs must be non-negative");
  }
  return resources * unit_price;
}

}  // namespace maas
