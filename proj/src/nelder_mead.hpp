#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace ramsey::metrics::detail {

struct NmResult {
  Eigen::VectorXd x;
  double f;
};

// Plain Nelder-Mead with the usual coefficients (1, 2, 0.5, 0.5).
inline NmResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                            double step, int max_iter, double ftol = 1e-13) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> val(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)](i) += step;
  for (std::size_t i = 0; i < pts.size(); ++i) val[i] = f(pts[i]);
  std::vector<std::size_t> order(pts.size());
  for (int it = 0; it < max_iter; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    if (std::abs(val[worst] - val[best]) <= ftol * (1 + std::abs(val[best]))) break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += pts[order[i]];
    centroid /= static_cast<double>(n);
    Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = f(xr);
    if (fr < val[best]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    Eigen::VectorXd xc = fr < val[worst] ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                         : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = f(xc);
    if (fc < std::min(fr, val[worst])) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      val[i] = f(pts[i]);
    }
  }
  std::size_t b = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
  return {pts[b], val[b]};
}

}  // namespace ramsey::metrics::detail
