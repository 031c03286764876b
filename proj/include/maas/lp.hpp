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
#include <limits>
#include <string>
#include <vector>

namespace maas {

enum class RowSense
{
  less_equal,
  equal,
  greater_equal
};

enum class ObjectiveSense
{
  maximize,
  minimize
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Dense linear program with general row senses and variable bounds.
struct StandardLP
{
  ObjectiveSense                   sense{ObjectiveSense::maximize};
  std::vector<double>              objective;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense>            senses;
  std::vector<double>              rhs;
  std::vector<double>              lower;
  std::vector<double>              upper;

  std::size_t num_vars() const noexcept { return objective.size(); }
  std::size_t num_rows() const noexcept { return rows.size(); }

  /// Appends a column with zero coefficients in every existing row.
  std::size_t add_variable(double cost, double lo = 0.0, double hi = kInfinity);
  std::size_t add_row(std::vector<double> coefficients, RowSense row_sense, double value);

  /// Throws DomainError on inconsistent dimensions or bounds.
  void validate() const;
};

enum class LpStatus
{
  optimal,
  infeasible,
  unbounded,
  iteration_limit
};

std::string to_string(LpStatus status);

struct LpResult
{
  LpStatus            status{LpStatus::infeasible};
  std::vector<double> x;
  double              objective{0.0};
  // Shadow prices: the rate of change of the optimal objective per unit of
  // each row's right-hand side.
  std::vector<double> duals;
  std::size_t         iterations{0};
};

struct LpOptions
{
  double      tolerance{1e-9};
  std::size_t max_iterations{200000};
  // Consecutive degenerate pivots tolerated under largest-coefficient pricing
  // before falling back to lowest-index pricing.
  std::size_t degenerate_switch{20};
};

/// Two-phase primal simplex on a dense tableau.
LpResult solve_lp(StandardLP const &problem, LpOptions const &options = {});

}  // namespace maas
