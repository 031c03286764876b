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

#include <span>
#include <string>

namespace maas {

enum class PriceFunction
{
  linear,
  quadratic,
  exponential
};

std::string   to_string(PriceFunction kind);
PriceFunction parse_price_function(std::string const &text);

/// Unit bidding price band in dollars per resource unit.
struct PriceBand
{
  double b_min{2.0};
  double b_max{12.0};
};

struct PriceParams
{
  double        capacity{1.0};
  PriceBand     band;
  PriceFunction kind{PriceFunction::linear};
  double        alpha{2.0};  // exponential only

  void validate() const;
};

/// Smallest and largest b/Q over every bid of every user.
PriceBand bid_price_bounds(std::span<UserRequest const> users);

double unit_price_linear(double z, PriceParams const &params);
double unit_price_quadratic(double z, PriceParams const &params);
double unit_price_exponential(double z, PriceParams const &params);
double unit_price(double z, PriceParams const &params);

struct AlphaValue
{
  double ratio{0.0};  // R, the extreme Q/A_t ratio
  double alpha{0.0};
};

/// (1 + R)^(1/R), continuous at R = 0 where it equals e.
double alpha_from_ratio(double ratio);

/// Uses the largest Q of every user and the largest resulting ratio.
AlphaValue alpha_payg(std::span<UserRequest const> users, double available);
/// Uses the smallest Q of every user and the smallest resulting ratio.
AlphaValue alpha_paap(std::span<UserRequest const> users, double available);

double payment(double resources, double unit_price);

}  // namespace maas
