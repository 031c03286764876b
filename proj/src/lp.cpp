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

#include "maas/lp.hpp"

#include "maas/market.hpp"

#include <algorithm>
#include <cmath>

namespace maas {

std::size_t StandardLP::add_variable(double cost, double lo, double hi)
{
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  for (auto &row : rows)
  {
    row.push_back(0.0);
  }
  return objective.size() - 1;
}

std::size_t StandardLP::add_row(std::vector<double> coefficients, RowSense row_sense, double value)
{
  if (coefficients.size() != num_vars())
  {
    throw DomainError("row width does not match the number of variables");
  }
  rows.push_back(std::move(coefficients));
  senses.push_back(row_sense);
  rhs.push_back(value);
  return rows.size() - 1;
}

void StandardLP::validate() const
{
  std::size_t const n = num_vars();
  if (lower.size() != n || upper.size() != n)
  {
    throw DomainError("bound vectors must match the number of variables");
  }
  if (senses.size() != rows.size() || rhs.size() != rows.size())
  {
    throw DomainError("row senses and right-hand sides must match the number of rows");
  }
  for (auto const &row : rows)
  {
    if (row.size() != n)
    {
      throw DomainError("constraint row width does not match the number of variables");
    }
    for (double a : row)
    {
      if (!std::isfinite(a))
      {
        throw DomainError("constraint coefficients must be finite");
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j)
  {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == kInfinity || upper[j] == -kInfinity)
    {
      throw DomainError("variable bounds must satisfy lower <= upper");
    }
    if (!std::isfinite(objective[j]))
    {
      throw DomainError("objective coefficients must be finite");
    }
  }
  for (double b : rhs)
  {
    if (!std::isfinite(b))
    {
      throw DomainError("right-hand sides must be finite");
    }
  }
}

std::string to_string(LpStatus status)
{
  switch (status)
  {
  case LpStatus::optimal: return "optimal";
  case LpStatus::infeasible: return "infeasible";
  case LpStatus::unbounded: return "unbounded";
  case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

// Original variable j equals offset + sum of coef * internal column.
struct VarMap
{
  double                                      offset{0.0};
  std::vector<std::pair<std::size_t, double>> parts;
};

class Tableau
{
public:
  Tableau(std::size_t rows, std::size_t cols)
    : m_(rows)
    , n_(cols)
    , data_((rows + 1) * (cols + 1), 0.0)
    , basis_(rows, 0)
  {}

  double &at(std::size_t r, std::size_t c) { return data_[r * (n_ + 1) + c]; }
  double &rhs(std::size_t r) { return at(r, n_); }
  double &cost(std::size_t c) { return at(m_, c); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t> &basis() { return basis_; }

  void pivot(std::size_t r, std::size_t e)
  {
    double const p = at(r, e);
    double *pr = &at(r, 0);
    for (std::size_t c = 0; c <= n_; ++c)
    {
      pr[c] /= p;
    }
    pr[e] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i)
    {
      if (i == r)
      {
        continue;
      }
      double *row = &at(i, 0);
      double const f = row[e];
      if (f == 0.0)
      {
        continue;
      }
      for (std::size_t c = 0; c <= n_; ++c)
      {
        row[c] -= f * pr[c];
      }
      row[e] = 0.0;
    }
    basis_[r] = e;
  }

  /// Rebuilds the reduced-cost row for costs `c` under the current basis.
  void price(std::vector<double> const &c)
  {
    for (std::size_t j = 0; j <= n_; ++j)
    {
      double d = j < n_ ? c[j] : 0.0;
      for (std::size_t i = 0; i < m_; ++i)
      {
        d -= c[basis_[i]] * at(i, j);
      }
      cost(j) = d;
    }
  }

private:
  std::size_t              m_;
  std::size_t              n_;
  std::vector<double>      data_;
  std::vector<std::size_t> basis_;
};

enum class Phase
{
  done,
  unbounded,
  limit
};

Phase iterate(Tableau &tab, std::size_t entering_limit, LpOptions const &opts, std::size_t &iters)
{
  double const tol = opts.tolerance;
  std::size_t degenerate = 0;
  while (true)
  {
    if (iters >= opts.max_iterations)
    {
      return Phase::limit;
    }
    bool const bland = degenerate >= opts.degenerate_switch;
    std::size_t e = entering_limit;
    double best = tol;
    for (std::size_t j = 0; j < entering_limit; ++j)
    {
      double const d = tab.cost(j);
      if (d > best)
      {
        e = j;
        best = d;
        if (bland)
        {
          break;
        }
      }
    }
    if (e == entering_limit)
    {
      return Phase::done;
    }
    std::size_t r = tab.rows();
    double theta = kInfinity;
    for (std::size_t i = 0; i < tab.rows(); ++i)
    {
      double const a = tab.at(i, e);
      if (a <= tol)
      {
        continue;
      }
      double const ratio = std::max(0.0, tab.rhs(i)) / a;
      if (r == tab.rows() || ratio < theta - tol)
      {
        r = i;
        theta = ratio;
      }
      else if (ratio <= theta + tol && tab.basis()[i] < tab.basis()[r])
      {
        r = i;
        theta = std::min(theta, ratio);
      }
    }
    if (r == tab.rows())
    {
      return Phase::unbounded;
    }
    degenerate = theta <= tol ? degenerate + 1 : 0;
    tab.pivot(r, e);
    ++iters;
  }
}

}  // namespace

LpResult solve_lp(StandardLP const &problem, LpOptions const &options)
{
  problem.validate();
  std::size_t const n = problem.num_vars();
  double const      tol = options.tolerance;

  // Map every original variable onto non-negative internal columns.
  std::vector<VarMap> maps(n);
  std::vector<double> cost;
  std::vector<std::pair<std::size_t, double>> bound_rows;  // (internal column, upper bound)
  double const flip = problem.sense == ObjectiveSense::minimize ? -1.0 : 1.0;
  for (std::size_t j = 0; j < n; ++j)
  {
    double const lo = problem.lower[j];
    double const hi = problem.upper[j];
    double const c = flip * problem.objective[j];
    if (std::isfinite(lo))
    {
      maps[j].offset = lo;
      maps[j].parts.push_back({cost.size(), 1.0});
      if (std::isfinite(hi))
      {
        bound_rows.push_back({cost.size(), hi - lo});
      }
      cost.push_back(c);
    }
    else if (std::isfinite(hi))
    {
      maps[j].offset = hi;
      maps[j].parts.push_back({cost.size(), -1.0});
      cost.push_back(-c);
    }
    else
    {
      maps[j].parts.push_back({cost.size(), 1.0});
      cost.push_back(c);
      maps[j].parts.push_back({cost.size(), -1.0});
      cost.push_back(-c);
    }
  }
  std::size_t const structural = cost.size();
  std::size_t const original_rows = problem.num_rows();
  std::size_t const m = original_rows + bound_rows.size();

  // Internal rows with non-negative right-hand sides.
  std::vector<std::vector<double>> a(m, std::vector<double>(structural, 0.0));
  std::vector<double>              b(m, 0.0);
  std::vector<RowSense>            sense(m, RowSense::less_equal);
  std::vector<bool>                negated(m, false);
  for (std::size_t i = 0; i < original_rows; ++i)
  {
    double value = problem.rhs[i];
    for (std::size_t j = 0; j < n; ++j)
    {
      double const coef = problem.rows[i][j];
      if (coef == 0.0)
      {
        continue;
      }
      value -= coef * maps[j].offset;
      for (auto const &[col, sign] : maps[j].parts)
      {
        a[i][col] += coef * sign;
      }
    }
    b[i] = value;
    sense[i] = problem.senses[i];
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k)
  {
    a[original_rows + k][bound_rows[k].first] = 1.0;
    b[original_rows + k] = bound_rows[k].second;
  }
  for (std::size_t i = 0; i < m; ++i)
  {
    if (b[i] < 0.0)
    {
      negated[i] = true;
      b[i] = -b[i];
      for (double &v : a[i])
      {
        v = -v;
      }
      if (sense[i] == RowSense::less_equal)
      {
        sense[i] = RowSense::greater_equal;
      }
      else if (sense[i] == RowSense::greater_equal)
      {
        sense[i] = RowSense::less_equal;
      }
    }
  }

  // Column layout: structural, slack or surplus, artificial.
  std::size_t slack_count = 0;
  std::size_t art_count = 0;
  for (auto s : sense)
  {
    slack_count += s != RowSense::equal;
    art_count += s != RowSense::less_equal;
  }
  std::size_t const slack_begin = structural;
  std::size_t const art_begin = slack_begin + slack_count;
  std::size_t const total = art_begin + art_count;

  Tableau tab(m, total);
  std::vector<std::size_t> identity(m);
  {
    std::size_t s = slack_begin;
    std::size_t r = art_begin;
    for (std::size_t i = 0; i < m; ++i)
    {
      for (std::size_t j = 0; j < structural; ++j)
      {
        tab.at(i, j) = a[i][j];
      }
      tab.rhs(i) = b[i];
      if (sense[i] == RowSense::less_equal)
      {
        tab.at(i, s) = 1.0;
        identity[i] = s++;
      }
      else
      {
        if (sense[i] == RowSense::greater_equal)
        {
          tab.at(i, s++) = -1.0;
        }
        tab.at(i, r) = 1.0;
        identity[i] = r++;
      }
      tab.basis()[i] = identity[i];
    }
  }

  LpResult result;
  std::size_t iters = 0;

  if (art_count > 0)
  {
    std::vector<double> phase1(total, 0.0);
    for (std::size_t j = art_begin; j < total; ++j)
    {
      phase1[j] = -1.0;
    }
    tab.price(phase1);
    Phase const p = iterate(tab, total, options, iters);
    result.iterations = iters;
    if (p == Phase::limit)
    {
      result.status = LpStatus::iteration_limit;
      return result;
    }
    double infeasibility = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < m; ++i)
    {
      scale = std::max(scale, std::abs(b[i]));
      if (tab.basis()[i] >= art_begin)
      {
        infeasibility += std::max(0.0, tab.rhs(i));
      }
    }
    if (infeasibility > 1e-7 * scale)
    {
      result.status = LpStatus::infeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i)
    {
      if (tab.basis()[i] < art_begin)
      {
        continue;
      }
      tab.rhs(i) = 0.0;
      for (std::size_t j = 0; j < art_begin; ++j)
      {
        if (std::abs(tab.at(i, j)) > tol)
        {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  std::vector<double> phase2(total, 0.0);
  std::copy(cost.begin(), cost.end(), phase2.begin());
  tab.price(phase2);
  Phase const p = iterate(tab, art_begin, options, iters);
  result.iterations = iters;
  if (p == Phase::limit)
  {
    result.status = LpStatus::iteration_limit;
    return result;
  }
  if (p == Phase::unbounded)
  {
    result.status = LpStatus::unbounded;
    return result;
  }

  std::vector<double> internal(total, 0.0);
  for (std::size_t i = 0; i < m; ++i)
  {
    internal[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
  }
  result.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
  {
    double v = maps[j].offset;
    for (auto const &[col, sign] : maps[j].parts)
    {
      v += sign * internal[col];
    }
    result.x[j] = v;
  }
  result.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j)
  {
    result.objective += problem.objective[j] * result.x[j];
  }
  result.duals.assign(original_rows, 0.0);
  for (std::size_t i = 0; i < original_rows; ++i)
  {
    double y = -tab.cost(identity[i]);
    if (negated[i])
    {
      y = -y;
    }
    result.duals[i] = flip * y;
  }
  result.status = LpStatus::optimal;
  return result;
}

}  // namespace maas
