#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chanalloc {

// Linear program in packing form: maximize c^T x subject to A x <= b with
// x >= 0 and b >= 0, columns given sparsely.  The all-slack basis is then
// feasible, so no phase-1 is needed.
struct LpProblem {
  int num_rows = 0;
  std::vector<double> rhs;                                   // size num_rows
  std::vector<double> objective;                             // per column
  std::vector<std::vector<std::pair<int, double>>> columns;  // sparse columns

  int num_cols() const { return static_cast<int>(objective.size()); }

  void validate() const {
    if (static_cast<int>(rhs.size()) != num_rows)
      throw std::invalid_argument("LP rhs size mismatch");
    if (columns.size() != objective.size())
      throw std::invalid_argument("LP column/objective size mismatch");
    for (double b : rhs)
      if (!(b >= 0.0)) throw std::invalid_argument("LP rhs must be non-negative");
    for (const auto& col : columns)
      for (const auto& [row, coeff] : col) {
        if (row < 0 || row >= num_rows)
          throw std::invalid_argument("LP column references a bad row");
        (void)coeff;
      }
  }
};

struct LpSolution {
  std::vector<double> x;      // structural values
  std::vector<double> duals;  // one multiplier per row
  double objective = 0.0;
  int iterations = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-7;
  int max_iterations = 0;  // 0: scale with problem size
  int bland_after_stall = 64;
};

// Revised primal simplex with a dense product-form basis inverse.
// Dantzig pricing with a Bland fallback on long degenerate stalls.
class SimplexSolver {
 public:
  using Options = SimplexOptions;

  explicit SimplexSolver(Options opt = {}) : opt_(opt) {}

  LpSolution solve(const LpProblem& lp) const {
    lp.validate();
    const int m = lp.num_rows;
    const int ncols = lp.num_cols();
    if (m == 0) {
      // Only x >= 0 remains; the optimum is x = 0.
      LpSolution s;
      s.x.assign(ncols, 0.0);
      return s;
    }

    std::vector<double> binv(static_cast<std::size_t>(m) * m, 0.0);  // column-major
    for (int i = 0; i < m; ++i) binv[static_cast<std::size_t>(i) * m + i] = 1.0;
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = ncols + i;  // slacks
    std::vector<char> in_basis(ncols + m, 0);
    for (int i = 0; i < m; ++i) in_basis[ncols + i] = 1;
    std::vector<double> xb(lp.rhs);
    std::vector<double> y(m), d(m);

    int max_iters = opt_.max_iterations > 0 ? opt_.max_iterations
                                            : 20000 + 10 * (m + ncols);
    bool bland = false;
    int stall = 0;
    int refactors = 0;
    int iter = 0;

    auto compute_duals = [&]() {
      // y = cB^T B^-1; cB is nonzero only on structural basics.
      std::fill(y.begin(), y.end(), 0.0);
      std::vector<std::pair<int, double>> cb;
      for (int r = 0; r < m; ++r)
        if (basis[r] < ncols && lp.objective[basis[r]] != 0.0)
          cb.emplace_back(r, lp.objective[basis[r]]);
      for (int i = 0; i < m; ++i) {
        const double* col = binv.data() + static_cast<std::size_t>(i) * m;
        double acc = 0.0;
        for (const auto& [r, c] : cb) acc += c * col[r];
        y[i] = acc;
      }
    };

    auto reduced_cost = [&](int j) {
      if (j < ncols) {
        double rc = lp.objective[j];
        for (const auto& [row, coeff] : lp.columns[j]) rc -= y[row] * coeff;
        return rc;
      }
      return -y[j - ncols];
    };

    auto ftran = [&](int j) {
      std::fill(d.begin(), d.end(), 0.0);
      if (j < ncols) {
        for (const auto& [row, coeff] : lp.columns[j]) {
          const double* col = binv.data() + static_cast<std::size_t>(row) * m;
          for (int r = 0; r < m; ++r) d[r] += coeff * col[r];
        }
      } else {
        const double* col = binv.data() + static_cast<std::size_t>(j - ncols) * m;
        std::copy(col, col + m, d.begin());
      }
    };

    auto refactor = [&]() {
      // Rebuild B^-1 and xb from the basis by Gauss-Jordan elimination.
      std::vector<double> dense(static_cast<std::size_t>(m) * m, 0.0);  // row-major
      for (int r = 0; r < m; ++r) {
        int j = basis[r];
        if (j < ncols)
          for (const auto& [row, coeff] : lp.columns[j])
            dense[static_cast<std::size_t>(row) * m + r] = coeff;
        else
          dense[static_cast<std::size_t>(j - ncols) * m + r] = 1.0;
      }
      std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);  // row-major
      for (int i = 0; i < m; ++i) inv[static_cast<std::size_t>(i) * m + i] = 1.0;
      for (int col = 0; col < m; ++col) {
        int piv = col;
        double best = std::abs(dense[static_cast<std::size_t>(col) * m + col]);
        for (int r = col + 1; r < m; ++r) {
          double cand = std::abs(dense[static_cast<std::size_t>(r) * m + col]);
          if (cand > best) {
            best = cand;
            piv = r;
          }
        }
        if (best < 1e-12) throw std::runtime_error("singular LP basis");
        if (piv != col) {
          for (int c = 0; c < m; ++c) {
            std::swap(dense[static_cast<std::size_t>(piv) * m + c],
                      dense[static_cast<std::size_t>(col) * m + c]);
            std::swap(inv[static_cast<std::size_t>(piv) * m + c],
                      inv[static_cast<std::size_t>(col) * m + c]);
          }
        }
        double scale = 1.0 / dense[static_cast<std::size_t>(col) * m + col];
        for (int c = 0; c < m; ++c) {
          dense[static_cast<std::size_t>(col) * m + c] *= scale;
          inv[static_cast<std::size_t>(col) * m + c] *= scale;
        }
        for (int r = 0; r < m; ++r) {
          if (r == col) continue;
          double f = dense[static_cast<std::size_t>(r) * m + col];
          if (f == 0.0) continue;
          for (int c = 0; c < m; ++c) {
            dense[static_cast<std::size_t>(r) * m + c] -=
                f * dense[static_cast<std::size_t>(col) * m + c];
            inv[static_cast<std::size_t>(r) * m + c] -=
                f * inv[static_cast<std::size_t>(col) * m + c];
          }
        }
      }
      // Transpose row-major inverse into the column-major store.
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          binv[static_cast<std::size_t>(c) * m + r] =
              inv[static_cast<std::size_t>(r) * m + c];
      for (int r = 0; r < m; ++r) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i)
          acc += binv[static_cast<std::size_t>(i) * m + r] * lp.rhs[i];
        xb[r] = acc;
      }
    };

    auto extract = [&]() {
      LpSolution s;
      s.x.assign(ncols, 0.0);
      for (int r = 0; r < m; ++r)
        if (basis[r] < ncols) s.x[basis[r]] = std::max(0.0, xb[r]);
      compute_duals();
      s.duals = y;
      for (double& v : s.duals)
        if (v < 0.0 && v > -opt_.feas_tol) v = 0.0;
      s.objective = 0.0;
      for (int j = 0; j < ncols; ++j) s.objective += lp.objective[j] * s.x[j];
      s.iterations = iter;
      return s;
    };

    auto primal_residual = [&](const std::vector<double>& x) {
      std::vector<double> ax(m, 0.0);
      for (int j = 0; j < ncols; ++j) {
        if (x[j] == 0.0) continue;
        for (const auto& [row, coeff] : lp.columns[j]) ax[row] += coeff * x[j];
      }
      double worst = 0.0;
      for (int r = 0; r < m; ++r)
        worst = std::max(worst, (ax[r] - lp.rhs[r]) / (1.0 + std::abs(lp.rhs[r])));
      return worst;
    };

    while (true) {
      if (iter >= max_iters)
        throw std::runtime_error("simplex iteration limit reached (" +
                                 std::to_string(max_iters) + ")");
      compute_duals();

      int entering = -1;
      double best_rc = opt_.pivot_tol;
      for (int j = 0; j < ncols + m; ++j) {
        if (in_basis[j]) continue;
        double rc = reduced_cost(j);
        if (bland) {
          if (rc > opt_.pivot_tol) {
            entering = j;
            break;
          }
        } else if (rc > best_rc) {
          best_rc = rc;
          entering = j;
        }
      }
      if (entering < 0) {
        // Optimal basis; double-check accumulated drift before reporting.
        LpSolution s = extract();
        if (primal_residual(s.x) > opt_.feas_tol && refactors < 3) {
          ++refactors;
          refactor();
          continue;
        }
        return s;
      }

      ftran(entering);
      int leave = -1;
      double theta = 0.0;
      for (int r = 0; r < m; ++r) {
        if (d[r] <= opt_.pivot_tol) continue;
        double ratio = std::max(0.0, xb[r]) / d[r];
        if (leave < 0 || ratio < theta - 1e-12 ||
            (ratio < theta + 1e-12 && basis[r] < basis[leave])) {
          leave = r;
          theta = ratio;
        }
      }
      if (leave < 0) throw std::runtime_error("LP is unbounded");

      if (theta <= 1e-12) {
        if (++stall >= opt_.bland_after_stall) bland = true;
      } else {
        stall = 0;
        bland = false;
      }

      // Apply the pivot to xb and fold the eta transform into B^-1.
      double piv = d[leave];
      for (int r = 0; r < m; ++r) xb[r] -= theta * d[r];
      xb[leave] = theta;
      for (int c = 0; c < m; ++c) {
        double* col = binv.data() + static_cast<std::size_t>(c) * m;
        double t = col[leave];
        if (t == 0.0) continue;
        double tp = t / piv;
        for (int r = 0; r < m; ++r) col[r] -= d[r] * tp;
        col[leave] = tp;
      }
      in_basis[basis[leave]] = 0;
      in_basis[entering] = 1;
      basis[leave] = entering;
      ++iter;
    }
  }

 private:
  Options opt_;
};

}  // namespace chanalloc
