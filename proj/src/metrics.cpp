#include "ramsey/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nelder_mead.hpp"
#include "ramsey/simplex.hpp"

namespace ramsey::metrics {

namespace {

using Eigen::Index;

MatrixXd from_flat(const VectorXd& v, Index k) { return Eigen::Map<const MatrixXd>(v.data(), k, k); }

VectorXd to_flat(const MatrixXd& m) { return Eigen::Map<const VectorXd>(m.data(), m.size()); }

void require_same_dim(const NormSpec& a, const NormSpec& b) {
  if (a.dim() != b.dim()) throw Error(Errc::DimensionMismatch, "norms live on spaces of different dimension");
}

// Random points on the unit sphere of n, seeded.
std::vector<VectorXd> sphere_samples(const NormSpec& n, int count, std::uint64_t seed) {
  const Index k = static_cast<Index>(n.dim());
  std::vector<VectorXd> out;
  for (Index i = 0; i < k; ++i) {
    VectorXd e = VectorXd::Unit(k, i);
    out.push_back(e / n(e));
    out.push_back(-e / n(e));
  }
  if (k == 1) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int s = 0; s < count; ++s) {
    VectorXd z(k);
    for (auto& x : z) x = g(rng);
    const double r = n(z);
    if (r > 0) out.push_back(z / r);
  }
  return out;
}

}  // namespace

MetricValue omega(const NormSpec& m, const NormSpec& n, const AscentOptions& opts) {
  require_same_dim(m, n);
  const Index k = static_cast<Index>(m.dim());
  const MatrixXd id = MatrixXd::Identity(k, k);
  MetricValue a = op_norm(id, m, n, opts);
  MetricValue b = op_norm(id, n, m, opts);
  MetricValue out;
  out.value = std::max(0.0, std::log(std::max(a.value, b.value)));
  out.certificate = combine_max(a.certificate, b.certificate);
  out.method = "identity_norms(" + a.method + "," + b.method + ")";
  if (a.upper_bound || b.upper_bound) {
    const double ua = a.upper_bound.value_or(a.value), ub = b.upper_bound.value_or(b.value);
    out.upper_bound = std::log(std::max(ua, ub));
  }
  return out;
}

NormSpec act_primal(const NormSpec& m, const MatrixXd& d) {
  Eigen::FullPivLU<MatrixXd> lu(d);
  if (!lu.isInvertible()) throw Error(Errc::NotInvertible, "action needs an invertible map");
  return NormSpec::pushforward(lu.inverse(), m);
}

NormSpec act_dual(const NormSpec& m, const MatrixXd& d) {
  Eigen::FullPivLU<MatrixXd> lu(d);
  if (!lu.isInvertible()) throw Error(Errc::NotInvertible, "action needs an invertible map");
  return NormSpec::pushforward(d.transpose(), m);
}

BmResult bm_upper(const NormSpec& m, const NormSpec& n, const BmOptions& opts) {
  require_same_dim(m, n);
  const Index k = static_cast<Index>(m.dim());
  if (k == 1) {
    VectorXd e = VectorXd::Ones(1);
    MatrixXd d(1, 1);
    d(0, 0) = m(e) / n(e);
    return {{0.0, Certificate::exact, "one_dimensional", 0, std::nullopt}, d};
  }
  const AscentOptions quick{4, 40, opts.seed};
  auto objective = [&](const VectorXd& v) {
    MatrixXd d = from_flat(v, k);
    Eigen::FullPivLU<MatrixXd> lu(d);
    if (!lu.isInvertible() || lu.rcond() < 1e-12) return 1e300;
    const double a = op_norm(d, m, n, quick).value;
    const double b = op_norm(lu.inverse(), n, m, quick).value;
    return std::log(a) + std::log(b);
  };
  std::vector<MatrixXd> starts{MatrixXd::Identity(k, k)};
  if (k == 2) starts.push_back((MatrixXd(2, 2) << 1, 1, 1, -1).finished());
  for (const auto& s : opts.extra_starts) {
    if (s.rows() != k || s.cols() != k) throw Error(Errc::DimensionMismatch, "start map shape");
    starts.push_back(s);
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> g;
  for (int i = 0; i < opts.starts; ++i) {
    MatrixXd r(k, k);
    for (auto& x : r.reshaped()) x = g(rng);
    starts.push_back(r);
  }
  VectorXd best_x;
  double best = 1e300;
  for (const auto& s : starts) {
    const double scale = s.cwiseAbs().maxCoeff();
    if (scale == 0) continue;
    VectorXd x = to_flat(s / scale);
    double fx = objective(x);
    if (fx > 1e-14) {
      for (double step : {0.2, 0.05, 0.01}) {
        auto r = detail::nelder_mead(objective, x, step, opts.iterations);
        if (r.f < fx) {
          x = r.x;
          fx = r.f;
        }
      }
    }
    if (fx < best) {
      best = fx;
      best_x = x;
    }
  }
  MatrixXd d = from_flat(best_x, k);
  MatrixXd dinv = d.inverse();
  MetricValue a = op_norm(d, m, n);
  MetricValue b = op_norm(dinv, n, m);
  const double c = std::sqrt(b.value / a.value);
  BmResult out;
  out.map = c * d;
  out.value.value = std::max(0.0, std::log(a.value) + std::log(b.value));
  const bool exact = a.certificate == Certificate::exact && b.certificate == Certificate::exact;
  out.value.certificate = exact ? Certificate::upper : Certificate::estimate;
  out.value.method = "nelder_mead";
  out.value.tolerance = 0;
  return out;
}

Nearest nearest_in_ball(const SubspaceRep& w, const VectorXd& x) {
  auto poly = w.ambient().polytope();
  if (!poly) throw Error(Errc::Unsupported, "nearest point needs a polyhedral ambient");
  if (static_cast<std::size_t>(x.size()) != w.ambient().dim()) throw Error(Errc::DimensionMismatch, "point length");
  const MatrixXd& a = poly->facets;
  const MatrixXd ab = a * w.basis();
  const VectorXd ax = a * x;
  const Index k = w.basis().cols();
  // Variables: c (k, free), s (free) with t = s + shift, so that c = 0,
  // s = 0 is feasible. min s.
  const double shift = std::max(0.0, ax.maxCoeff());
  lp::LinearProgram prog(static_cast<std::size_t>(k + 1));
  for (Index i = 0; i <= k; ++i) prog.set_free(static_cast<std::size_t>(i));
  prog.set_objective(static_cast<std::size_t>(k), 1.0);
  for (Index f = 0; f < a.rows(); ++f) {
    VectorXd row(k + 1);
    row.head(k) = -ab.row(f).transpose();
    row(k) = -1;
    prog.add_le(row, shift - ax(f));
    row.head(k) = ab.row(f).transpose();
    row(k) = 0;
    prog.add_le(row, 1.0);
  }
  auto r = lp::solve(prog);
  if (r.status != lp::Status::optimal) throw Error(Errc::Infeasible, "distance program did not solve");
  VectorXd c = r.x.head(k);
  return {w.ambient()(x - w.basis() * c), c};
}

namespace {

void require_compatible(const SubspaceRep& u, const SubspaceRep& w) {
  if (!(u.ambient() == w.ambient())) throw Error(Errc::AmbientMismatch, "subspaces live in different ambients");
  if (u.dim() != w.dim()) throw Error(Errc::DimensionMismatch, "subspaces have different dimensions");
}

// sup over vertices of Ball(U) of the distance to Ball(W).
double one_sided_polyhedral(const SubspaceRep& u, const SubspaceRep& w) {
  const auto poly = u.ambient().polytope();
  const MatrixXd& a = poly->facets;
  const MatrixXd au = a * u.basis();
  if (numerical_rank(au) < u.dim()) throw Error(Errc::NotInjective, "subspace meets the kernel of the seminorm");
  const MatrixXd verts = polar_hull(au);
  double best = 0;
  for (Index i = 0; i < verts.rows(); ++i)
    best = std::max(best, nearest_in_ball(w, u.basis() * verts.row(i).transpose()).distance);
  return best;
}

double distance_sampled(const SubspaceRep& w, const NormSpec& w_norm, const VectorXd& x) {
  if (auto poly = w.ambient().polytope(); poly && poly->facets.rows() > 0) return nearest_in_ball(w, x).distance;
  const MatrixXd& b = w.basis();
  auto clip = [&](const VectorXd& c) {
    const double r = w_norm(c);
    return r > 1 ? VectorXd(c / r) : c;
  };
  auto f = [&](const VectorXd& c) { return w.ambient()(x - b * clip(c)); };
  VectorXd c0 = clip(b.colPivHouseholderQr().solve(x));
  auto r = detail::nelder_mead(f, c0, 0.1, 300, 1e-14);
  auto r2 = detail::nelder_mead(f, r.x, 0.01, 300, 1e-14);
  return std::min({f(c0), r.f, r2.f});
}

}  // namespace

MetricValue gap_sampled(const SubspaceRep& u, const SubspaceRep& w, const SampleOptions& opts) {
  require_compatible(u, w);
  double best = 0;
  const NormSpec nu = u.intrinsic(), nw = w.intrinsic();
  for (const auto& c : sphere_samples(nu, opts.samples, opts.seed))
    best = std::max(best, distance_sampled(w, nw, u.basis() * c));
  for (const auto& c : sphere_samples(nw, opts.samples, opts.seed + 1))
    best = std::max(best, distance_sampled(u, nu, w.basis() * c));
  const double mesh = u.dim() == 1 ? 0.0 : 2.0 * std::pow(static_cast<double>(opts.samples), -1.0 / static_cast<double>(u.dim() - 1));
  return {best, Certificate::estimate, "sphere_sampling", mesh, std::nullopt};
}

MetricValue gap_metric(const SubspaceRep& u, const SubspaceRep& w, const SampleOptions& opts) {
  require_compatible(u, w);
  if (auto poly = u.ambient().polytope(); poly && poly->facets.rows() > 0) {
    const double v = std::max(one_sided_polyhedral(u, w), one_sided_polyhedral(w, u));
    return {v, Certificate::exact, "vertex_lp", 0, std::nullopt};
  }
  if (auto r = u.ambient().euclidean()) {
    Eigen::HouseholderQR<MatrixXd> qu(*r * u.basis()), qw(*r * w.basis());
    const Index n = r->rows(), k = static_cast<Index>(u.dim());
    MatrixXd q_u = qu.householderQ() * MatrixXd::Identity(n, k);
    MatrixXd q_w = qw.householderQ() * MatrixXd::Identity(n, k);
    MatrixXd resid = q_u - q_w * (q_w.transpose() * q_u);
    Eigen::JacobiSVD<MatrixXd> svd(resid);
    return {svd.singularValues()(0), Certificate::exact, "principal_angles", 0, std::nullopt};
  }
  return gap_sampled(u, w, opts);
}

MetricValue alpha_sampled(const NormSpec& x, const NormSpec& m, const NormSpec& n, const SampleOptions& opts) {
  require_same_dim(x, m);
  require_same_dim(x, n);
  double best = 0;
  for (const auto& p : sphere_samples(x, opts.samples, opts.seed)) best = std::max(best, std::abs(m(p) - n(p)));
  return {best, Certificate::lower, "support_sampling", 0, std::nullopt};
}

namespace {

// max over vertices a of conv(from) of the X*-distance to conv(to).
double alpha_one_sided(const MatrixXd& x_vertices, const MatrixXd& from, const MatrixXd& to) {
  const Index nt = to.rows();
  const MatrixXd vt = x_vertices * to.transpose();  // v . n_j
  double best = 0;
  for (Index i = 0; i < from.rows(); ++i) {
    const VectorXd va = x_vertices * from.row(i).transpose();
    // Variables: lambda (nt, >= 0), s (free) with t = s + shift. min s.
    const double shift = std::max(0.0, va.maxCoeff());
    lp::LinearProgram prog(static_cast<std::size_t>(nt + 1));
    prog.set_free(static_cast<std::size_t>(nt));
    prog.set_objective(static_cast<std::size_t>(nt), 1.0);
    for (Index v = 0; v < x_vertices.rows(); ++v) {
      VectorXd row(nt + 1);
      row.head(nt) = -vt.row(v).transpose();
      row(nt) = -1;
      prog.add_le(row, shift - va(v));
    }
    VectorXd sum = VectorXd::Zero(nt + 1);
    sum.head(nt).setOnes();
    prog.add_eq(sum, 1.0);
    auto r = lp::solve(prog);
    if (r.status != lp::Status::optimal) throw Error(Errc::Infeasible, "hausdorff program did not solve");
    best = std::max(best, r.value + shift);
  }
  return best;
}

}  // namespace

MetricValue alpha_extrinsic(const NormSpec& x, const NormSpec& m, const NormSpec& n, const SampleOptions& opts) {
  require_same_dim(x, m);
  require_same_dim(x, n);
  auto px = x.polytope(), pm = m.polytope(), pn = n.polytope();
  if (px && pm && pn && px->vertices.rows() > 0 && pm->facets.rows() > 0 && pn->facets.rows() > 0) {
    const double v = std::max(alpha_one_sided(px->vertices, pm->facets, pn->facets),
                              alpha_one_sided(px->vertices, pn->facets, pm->facets));
    return {v, Certificate::exact, "hausdorff_lp", 0, std::nullopt};
  }
  return alpha_sampled(x, m, n, opts);
}

double oscillation(const std::function<double(const VectorXd&)>& c, const std::vector<VectorXd>& points,
                   const NormSpec& metric, double tol) {
  std::vector<double> vals;
  vals.reserve(points.size());
  for (const auto& p : points) vals.push_back(c(p));
  double best = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double diff = std::abs(vals[i] - vals[j]);
      if (diff > metric(points[i] - points[j]) + tol)
        throw Error(Errc::LipschitzViolation, "coloring is not 1-Lipschitz on points " + std::to_string(i) + " and " +
                                                  std::to_string(j));
      best = std::max(best, diff);
    }
  return best;
}

double oscillation(const std::vector<std::uint32_t>& colors) {
  for (auto c : colors)
    if (c != colors.front()) return 1.0;
  return 0.0;
}

}  // namespace ramsey::metrics
