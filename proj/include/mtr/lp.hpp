#pragma once

// Revised primal simplex for   max c^T x  s.t.  A x <= b,  x >= 0,  b >= 0.
// Columns are sparse; the basis inverse is kept dense (rows x rows). The
// all-slack basis is a feasible start, so no phase one is needed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "mtr/types.hpp"

namespace mtr::lp {

struct Column {
  double cost = 0.0;
  std::vector<std::pair<int, double>> entries;  // (row, coefficient)
};

struct Problem {
  int rows = 0;
  std::vector<double> rhs;  // size rows, non-negative
  std::vector<Column> columns;
};

struct Result {
  std::vector<double> x;  // per column
  double objective = 0.0;
  long iterations = 0;
};

struct Options {
  double tolerance = 1e-9;
  int degenerate_switch = 50;  // consecutive degenerate pivots before using Bland's rule
  long max_iterations = 10'000'000;
};

namespace detail {

/// Dense Gauss-Jordan inverse with partial pivoting; false if singular.
inline bool invert(std::vector<double>& a, int n) {
  std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto at = [n](std::vector<double>& m, int r, int c) -> double& { return m[static_cast<std::size_t>(r) * n + c]; };
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(at(a, r, c)) > std::abs(at(a, piv, c))) piv = r;
    }
    if (std::abs(at(a, piv, c)) < 1e-12) return false;
    if (piv != c) {
      for (int k = 0; k < n; ++k) {
        std::swap(at(a, piv, k), at(a, c, k));
        std::swap(at(inv, piv, k), at(inv, c, k));
      }
    }
    double d = at(a, c, c);
    for (int k = 0; k < n; ++k) {
      at(a, c, k) /= d;
      at(inv, c, k) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      double f = at(a, r, c);
      if (f == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        at(a, r, k) -= f * at(a, c, k);
        at(inv, r, k) -= f * at(inv, c, k);
      }
    }
  }
  a = std::move(inv);
  return true;
}

}  // namespace detail

inline Result solve(const Problem& prob, const Options& opt = {}) {
  const int m = prob.rows;
  const int n = static_cast<int>(prob.columns.size());
  if (static_cast<int>(prob.rhs.size()) != m) throw InvalidInput("lp: rhs size must equal row count");
  for (double b : prob.rhs) {
    if (b < 0.0) throw InvalidInput("lp: right-hand sides must be non-negative");
  }
  for (const auto& col : prob.columns) {
    for (auto [r, v] : col.entries) {
      if (r < 0 || r >= m) throw InvalidInput("lp: column entry row out of range");
    }
  }
  Result res;
  res.x.assign(static_cast<std::size_t>(n), 0.0);
  if (m == 0 || n == 0) return res;

  // Variables 0..n-1 are structural, n..n+m-1 are slacks.
  const std::size_t M = static_cast<std::size_t>(m);
  std::vector<int> basis(M);
  std::vector<int> where(static_cast<std::size_t>(n + m), -1);
  for (int i = 0; i < m; ++i) {
    basis[static_cast<std::size_t>(i)] = n + i;
    where[static_cast<std::size_t>(n + i)] = i;
  }
  std::vector<double> binv(M * M, 0.0);
  for (std::size_t i = 0; i < M; ++i) binv[i * M + i] = 1.0;
  std::vector<double> xb(prob.rhs);

  auto cost = [&](int v) { return v < n ? prob.columns[static_cast<std::size_t>(v)].cost : 0.0; };
  auto column_dense = [&](int v, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (v < n) {
      for (auto [r, val] : prob.columns[static_cast<std::size_t>(v)].entries) out[static_cast<std::size_t>(r)] += val;
    } else {
      out[static_cast<std::size_t>(v - n)] = 1.0;
    }
  };
  auto reinvert = [&] {
    std::vector<double> b(M * M, 0.0), col(M);
    for (std::size_t i = 0; i < M; ++i) {
      column_dense(basis[i], col);
      for (std::size_t r = 0; r < M; ++r) b[r * M + i] = col[r];
    }
    if (!detail::invert(b, m)) return;
    binv = std::move(b);
    for (std::size_t i = 0; i < M; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < M; ++k) s += binv[i * M + k] * prob.rhs[k];
      xb[i] = std::max(0.0, s);
    }
  };

  std::vector<double> y(M), d(M), scratch(M);
  int degenerate_run = 0;
  const long reinvert_every = 100 + m;
  for (;;) {
    if (res.iterations >= opt.max_iterations) throw ResourceLimit("lp: iteration limit reached");
    if (res.iterations > 0 && res.iterations % reinvert_every == 0) reinvert();

    // y = c_B^T B^-1
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < M; ++i) {
      double cb = cost(basis[i]);
      if (cb == 0.0) continue;
      const double* row = &binv[i * M];
      for (std::size_t k = 0; k < M; ++k) y[k] += cb * row[k];
    }

    const bool bland = degenerate_run >= opt.degenerate_switch;
    int entering = -1;
    double best = opt.tolerance;
    for (int v = 0; v < n + m; ++v) {
      if (where[static_cast<std::size_t>(v)] >= 0) continue;
      double rc;
      if (v < n) {
        rc = prob.columns[static_cast<std::size_t>(v)].cost;
        for (auto [r, val] : prob.columns[static_cast<std::size_t>(v)].entries) rc -= y[static_cast<std::size_t>(r)] * val;
      } else {
        rc = -y[static_cast<std::size_t>(v - n)];
      }
      if (rc > best) {
        entering = v;
        if (bland) break;
        best = rc;
      }
    }
    if (entering < 0) break;

    // d = B^-1 a_entering
    column_dense(entering, scratch);
    for (std::size_t i = 0; i < M; ++i) {
      double s = 0.0;
      const double* row = &binv[i * M];
      for (std::size_t k = 0; k < M; ++k) {
        if (scratch[k] != 0.0) s += row[k] * scratch[k];
      }
      d[i] = s;
    }
    double ratio = -1.0;
    for (std::size_t i = 0; i < M; ++i) {
      if (d[i] <= opt.tolerance) continue;
      double r = xb[i] / d[i];
      if (ratio < 0.0 || r < ratio) ratio = r;
    }
    if (ratio < 0.0) throw Error("lp: problem is unbounded");
    int leave = -1;
    for (std::size_t i = 0; i < M; ++i) {
      if (d[i] <= opt.tolerance || xb[i] / d[i] > ratio + opt.tolerance) continue;
      if (leave < 0 || basis[i] < basis[static_cast<std::size_t>(leave)]) leave = static_cast<int>(i);
    }

    const std::size_t L = static_cast<std::size_t>(leave);
    ratio = xb[L] / d[L];
    degenerate_run = ratio <= opt.tolerance ? degenerate_run + 1 : 0;
    for (std::size_t i = 0; i < M; ++i) {
      if (i == L) continue;
      xb[i] = std::max(0.0, xb[i] - ratio * d[i]);
      if (std::abs(xb[i]) < 1e-13) xb[i] = 0.0;
    }
    xb[L] = ratio;
    const double piv = d[L];
    double* prow = &binv[L * M];
    for (std::size_t k = 0; k < M; ++k) prow[k] /= piv;
    for (std::size_t i = 0; i < M; ++i) {
      if (i == L || d[i] == 0.0) continue;
      double f = d[i];
      double* row = &binv[i * M];
      for (std::size_t k = 0; k < M; ++k) row[k] -= f * prow[k];
    }
    where[static_cast<std::size_t>(basis[L])] = -1;
    basis[L] = entering;
    where[static_cast<std::size_t>(entering)] = leave;
    ++res.iterations;
  }

  reinvert();
  for (std::size_t i = 0; i < M; ++i) {
    if (basis[i] < n) res.x[static_cast<std::size_t>(basis[i])] = xb[i];
  }
  for (int v = 0; v < n; ++v) res.objective += prob.columns[static_cast<std::size_t>(v)].cost * res.x[static_cast<std::size_t>(v)];
  return res;
}

}  // namespace mtr::lp
