#pragma once

// Dense two-phase simplex for small linear programs.
//
//   minimize    c . x
//   subject to  A_le x <= b_le,  A_eq x = b_eq,
//               x_j >= 0 unless variable j is declared free.
//
// Bland's rule prevents cycling. The final basic solution is recomputed from
// the tight original rows with a pivoted LU solve to remove tableau drift.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace ramsey::lp {

enum class Status { optimal, infeasible, unbounded };

class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_vars);

  std::size_t num_vars() const noexcept { return n_; }
  void set_free(std::size_t var, bool is_free = true);
  void set_objective(const Eigen::VectorXd& c);
  void set_objective(std::size_t var, double coeff);
  void add_le(const Eigen::VectorXd& row, double rhs);
  void add_eq(const Eigen::VectorXd& row, double rhs);

  const std::vector<bool>& free_mask() const noexcept { return free_; }
  const Eigen::VectorXd& objective() const noexcept { return c_; }
  const std::vector<Eigen::VectorXd>& le_rows() const noexcept { return le_; }
  const std::vector<double>& le_rhs() const noexcept { return le_b_; }
  const std::vector<Eigen::VectorXd>& eq_rows() const noexcept { return eq_; }
  const std::vector<double>& eq_rhs() const noexcept { return eq_b_; }

 private:
  std::size_t n_;
  std::vector<bool> free_;
  Eigen::VectorXd c_;
  std::vector<Eigen::VectorXd> le_, eq_;
  std::vector<double> le_b_, eq_b_;
};

struct Result {
  Status status = Status::infeasible;
  Eigen::VectorXd x;
  double value = 0;
};

Result solve(const LinearProgram& lp, double tol = 1e-10);

}  // namespace ramsey::lp
