#include "ramsey/simplex.hpp"

#include <cmath>
#include <limits>

#include "ramsey/error.hpp"

namespace ramsey::lp {

LinearProgram::LinearProgram(std::size_t num_vars)
    : n_(num_vars), free_(num_vars, false), c_(Eigen::VectorXd::Zero(num_vars)) {}

void LinearProgram::set_free(std::size_t var, bool is_free) { free_.at(var) = is_free; }

void LinearProgram::set_objective(const Eigen::VectorXd& c) {
  if (static_cast<std::size_t>(c.size()) != n_) throw Error(Errc::DimensionMismatch, "objective length");
  c_ = c;
}

void LinearProgram::set_objective(std::size_t var, double coeff) { c_(static_cast<Eigen::Index>(var)) = coeff; }

void LinearProgram::add_le(const Eigen::VectorXd& row, double rhs) {
  if (static_cast<std::size_t>(row.size()) != n_) throw Error(Errc::DimensionMismatch, "constraint length");
  le_.push_back(row);
  le_b_.push_back(rhs);
}

void LinearProgram::add_eq(const Eigen::VectorXd& row, double rhs) {
  if (static_cast<std::size_t>(row.size()) != n_) throw Error(Errc::DimensionMismatch, "constraint length");
  eq_.push_back(row);
  eq_b_.push_back(rhs);
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Tableau {
  MatrixXd t;                // rows 0..m-1 constraints, row m objective; last column rhs
  std::vector<Index> basis;  // basic column per row
  Index cols;                // structural + slack + artificial columns

  void pivot(Index r, Index c) {
    t.row(r) /= t(r, c);
    for (Index i = 0; i < t.rows(); ++i)
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Dantzig's rule over columns [0, limit), falling back to Bland's rule
  // after a run of degenerate pivots. Returns false when unbounded.
  bool run(Index limit, double tol) {
    const Index m = t.rows() - 1;
    const Index rhs = t.cols() - 1;
    int stalled = 0;
    while (true) {
      const bool bland = stalled > 50;
      Index enter = -1;
      double most = -tol;
      for (Index j = 0; j < limit; ++j)
        if (t(m, j) < most) {
          enter = j;
          if (bland) break;
          most = t(m, j);
        }
      if (enter < 0) return true;
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m; ++i) {
        const double piv = t(i, enter);
        if (piv <= 1e-9) continue;
        const double ratio = t(i, rhs) / piv;
        bool take = ratio < best - 1e-12;
        if (!take && leave >= 0 && ratio <= best + 1e-12) {
          take = bland ? basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]
                       : piv > t(leave, enter);
        }
        if (take) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;
      stalled = best <= 1e-15 ? stalled + 1 : 0;
      pivot(leave, enter);
    }
  }
};

}  // namespace

Result solve(const LinearProgram& lp, double tol) {
  const std::size_t n = lp.num_vars();
  // Structural columns: x_j, or x_j+ and x_j- for free variables.
  std::vector<Index> pos_col(n), neg_col(n, -1);
  Index ns = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pos_col[j] = ns++;
    if (lp.free_mask()[j]) neg_col[j] = ns++;
  }
  const Index n_le = static_cast<Index>(lp.le_rows().size());
  const Index n_eq = static_cast<Index>(lp.eq_rows().size());
  const Index m = n_le + n_eq;
  const Index n_std = ns + n_le;  // with slacks

  MatrixXd a = MatrixXd::Zero(m, n_std);
  VectorXd b(m);
  auto put_row = [&](Index r, const VectorXd& row, double rhs) {
    for (std::size_t j = 0; j < n; ++j) {
      a(r, pos_col[j]) = row(static_cast<Index>(j));
      if (neg_col[j] >= 0) a(r, neg_col[j]) = -row(static_cast<Index>(j));
    }
    b(r) = rhs;
  };
  for (Index i = 0; i < n_le; ++i) {
    put_row(i, lp.le_rows()[static_cast<std::size_t>(i)], lp.le_rhs()[static_cast<std::size_t>(i)]);
    a(i, ns + i) = 1.0;
  }
  for (Index i = 0; i < n_eq; ++i)
    put_row(n_le + i, lp.eq_rows()[static_cast<std::size_t>(i)], lp.eq_rhs()[static_cast<std::size_t>(i)]);
  for (Index i = 0; i < m; ++i)
    if (b(i) < 0) {
      a.row(i) *= -1.0;
      b(i) = -b(i);
    }
  VectorXd c = VectorXd::Zero(n_std);
  for (std::size_t j = 0; j < n; ++j) {
    c(pos_col[j]) = lp.objective()(static_cast<Index>(j));
    if (neg_col[j] >= 0) c(neg_col[j]) = -lp.objective()(static_cast<Index>(j));
  }

  // Phase one. Rows whose slack can start basic need no artificial.
  std::vector<Index> art_row;
  std::vector<Index> start(static_cast<std::size_t>(m), -1);
  for (Index i = 0; i < m; ++i) {
    if (i < n_le && a(i, ns + i) > 0) {
      start[static_cast<std::size_t>(i)] = ns + i;
    } else {
      art_row.push_back(i);
    }
  }
  const Index n_art = static_cast<Index>(art_row.size());
  Tableau tab;
  tab.cols = n_std + n_art;
  tab.t = MatrixXd::Zero(m + 1, tab.cols + 1);
  tab.t.block(0, 0, m, n_std) = a;
  tab.t.block(0, tab.cols, m, 1) = b;
  for (Index r = 0; r < n_art; ++r) {
    tab.t(art_row[static_cast<std::size_t>(r)], n_std + r) = 1.0;
    start[static_cast<std::size_t>(art_row[static_cast<std::size_t>(r)])] = n_std + r;
  }
  tab.basis = start;
  for (Index r = 0; r < n_art; ++r) {
    tab.t(m, n_std + r) = 1.0;
    tab.t.row(m) -= tab.t.row(art_row[static_cast<std::size_t>(r)]);
  }
  if (n_art > 0) tab.run(tab.cols, tol);
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  Result res;
  if (n_art > 0 && -tab.t(m, tab.cols) > 1e-8 * scale) {
    res.status = Status::infeasible;
    return res;
  }

  // Drive remaining artificials out of the basis; drop redundant rows.
  std::vector<bool> keep(static_cast<std::size_t>(m), true);
  for (Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n_std) continue;
    Index col = -1;
    double best = tol;
    for (Index j = 0; j < n_std; ++j)
      if (std::abs(tab.t(i, j)) > best) {
        best = std::abs(tab.t(i, j));
        col = j;
      }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      keep[static_cast<std::size_t>(i)] = false;
    }
  }

  // Phase two on the kept rows, artificial columns removed.
  std::vector<Index> rows;
  for (Index i = 0; i < m; ++i)
    if (keep[static_cast<std::size_t>(i)]) rows.push_back(i);
  const Index mk = static_cast<Index>(rows.size());
  Tableau two;
  two.cols = n_std;
  two.t = MatrixXd::Zero(mk + 1, n_std + 1);
  two.basis.resize(static_cast<std::size_t>(mk));
  for (Index r = 0; r < mk; ++r) {
    two.t.block(r, 0, 1, n_std) = tab.t.block(rows[static_cast<std::size_t>(r)], 0, 1, n_std);
    two.t(r, n_std) = tab.t(rows[static_cast<std::size_t>(r)], tab.cols);
    two.basis[static_cast<std::size_t>(r)] = tab.basis[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])];
  }
  two.t.block(mk, 0, 1, n_std) = c.transpose();
  for (Index r = 0; r < mk; ++r) {
    Index bc = two.basis[static_cast<std::size_t>(r)];
    if (two.t(mk, bc) != 0.0) two.t.row(mk) -= two.t(mk, bc) * two.t.row(r);
  }
  if (!two.run(n_std, tol)) {
    res.status = Status::unbounded;
    return res;
  }

  VectorXd xs = VectorXd::Zero(n_std);
  for (Index r = 0; r < mk; ++r) xs(two.basis[static_cast<std::size_t>(r)]) = two.t(r, n_std);
  // Re-solve the basic structural variables from the tight original rows.
  std::vector<Index> basic_struct, tight;
  std::vector<bool> slack_basic(static_cast<std::size_t>(n_le), false);
  for (Index r = 0; r < mk; ++r) {
    const Index c = two.basis[static_cast<std::size_t>(r)];
    if (c < ns) {
      basic_struct.push_back(c);
    } else {
      slack_basic[static_cast<std::size_t>(c - ns)] = true;
    }
  }
  for (Index r : rows)
    if (r >= n_le || !slack_basic[static_cast<std::size_t>(r)]) tight.push_back(r);
  const Index nb = static_cast<Index>(basic_struct.size());
  if (nb > 0 && static_cast<Index>(tight.size()) == nb) {
    MatrixXd ab(nb, nb);
    VectorXd bb(nb);
    for (Index r = 0; r < nb; ++r) {
      for (Index q = 0; q < nb; ++q) ab(r, q) = a(tight[static_cast<std::size_t>(r)], basic_struct[static_cast<std::size_t>(q)]);
      bb(r) = b(tight[static_cast<std::size_t>(r)]);
    }
    Eigen::FullPivLU<MatrixXd> lu(ab);
    if (lu.isInvertible()) {
      VectorXd xb = lu.solve(bb);
      if ((ab * xb - bb).cwiseAbs().maxCoeff() <= 1e-9 * scale && xb.minCoeff() >= -1e-9 &&
          (xb - VectorXd(xs(basic_struct))).cwiseAbs().maxCoeff() <= 1e-6 * (1 + xb.cwiseAbs().maxCoeff())) {
        for (Index q = 0; q < nb; ++q) xs(basic_struct[static_cast<std::size_t>(q)]) = std::max(0.0, xb(q));
      }
    }
  }
  res.status = Status::optimal;
  res.x = VectorXd::Zero(static_cast<Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    res.x(static_cast<Index>(j)) = xs(pos_col[j]) - (neg_col[j] >= 0 ? xs(neg_col[j]) : 0.0);
  }
  res.value = lp.objective().dot(res.x);
  return res;
}

}  // namespace ramsey::lp
