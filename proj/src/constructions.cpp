#include "ramsey/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ramsey/simplex.hpp"

namespace ramsey::metrics {

namespace {

using Eigen::Index;

constexpr double kSlack = 1e-6;

lp::Result solve_or_throw(const lp::LinearProgram& prog, const char* what) {
  auto r = lp::solve(prog);
  if (r.status == lp::Status::infeasible) throw Error(Errc::Infeasible, what);
  if (r.status != lp::Status::optimal) throw Error(Errc::Unsupported, what);
  return r;
}

// Adds |g|_1 <= bound (or minimizes it) with auxiliary s >= 0 at offset s0.
void add_l1_rows(lp::LinearProgram& prog, Index n, Index g0, Index s0) {
  for (Index i = 0; i < n; ++i) {
    VectorXd row = VectorXd::Zero(static_cast<Index>(prog.num_vars()));
    row(g0 + i) = 1;
    row(s0 + i) = -1;
    prog.add_le(row, 0);
    row(g0 + i) = -1;
    prog.add_le(row, 0);
  }
}

}  // namespace

Lift dual_min_lift(const LinOp& t, const VectorXd& f) {
  const MatrixXd& m = t.matrix;
  const Index n = m.rows(), k = m.cols();
  if (f.size() != k) throw Error(Errc::DimensionMismatch, "functional length differs from the domain");
  const NormSpec& e = t.codomain;
  if (static_cast<std::size_t>(n) != e.dim()) throw Error(Errc::DimensionMismatch, "codomain dimension");
  const MatrixXd mt = m.transpose();
  const double scale = 1.0 + f.cwiseAbs().maxCoeff();
  if (e.is_lp(2)) {
    VectorXd g = mt.completeOrthogonalDecomposition().solve(f);
    if ((mt * g - f).cwiseAbs().maxCoeff() > 1e-9 * scale) throw Error(Errc::Infeasible, "f is not in the range of T^t");
    return {g.norm(), g};
  }
  lp::LinearProgram prog(0);
  if (e.is_lp(kInf)) {
    // Dual is l1: variables g (free), s >= 0.
    prog = lp::LinearProgram(static_cast<std::size_t>(2 * n));
    for (Index i = 0; i < n; ++i) {
      prog.set_free(static_cast<std::size_t>(i));
      prog.set_objective(static_cast<std::size_t>(n + i), 1.0);
    }
    add_l1_rows(prog, n, 0, n);
  } else {
    auto poly = e.polytope();
    if (!poly || poly->vertices.rows() == 0) throw Error(Errc::DualNotComputable, "codomain dual norm unavailable");
    // Variables g (free), t (free); v.g <= t for every vertex v.
    prog = lp::LinearProgram(static_cast<std::size_t>(n + 1));
    for (Index i = 0; i <= n; ++i) prog.set_free(static_cast<std::size_t>(i));
    prog.set_objective(static_cast<std::size_t>(n), 1.0);
    for (Index v = 0; v < poly->vertices.rows(); ++v) {
      VectorXd row(n + 1);
      row.head(n) = poly->vertices.row(v).transpose();
      row(n) = -1;
      prog.add_le(row, 0);
    }
  }
  for (Index j = 0; j < k; ++j) {
    VectorXd row = VectorXd::Zero(static_cast<Index>(prog.num_vars()));
    row.head(n) = m.col(j);
    prog.add_eq(row, f(j));
  }
  auto r = solve_or_throw(prog, "f is not in the range of T^t");
  VectorXd g = r.x.head(n);
  return {dual_norm(e, g), g};
}

double lift_by_polarity(const LinOp& t, const VectorXd& f) {
  return dual_norm(NormSpec::pushforward(t.matrix, t.codomain), f);
}

ExtrinsicWitness extrinsic_witness(const LinOp& t, const LinOp& u) {
  if (!t.codomain.is_lp(kInf) || !u.codomain.is_lp(kInf))
    throw Error(Errc::NotIntoEllInfty, "both maps must land in l_inf");
  if (!(t.domain == u.domain)) throw Error(Errc::AmbientMismatch, "maps have different domains");
  if (t.matrix.rows() != u.matrix.rows() || t.matrix.cols() != u.matrix.cols())
    throw Error(Errc::DimensionMismatch, "maps have different shapes");
  if (static_cast<std::size_t>(t.matrix.cols()) != t.domain.dim())
    throw Error(Errc::DimensionMismatch, "matrix columns differ from the domain");
  auto px = t.domain.polytope();
  if (!px || px->vertices.rows() == 0) throw Error(Errc::Unsupported, "the domain needs a vertex description");
  const Index k = t.matrix.cols(), n = t.matrix.rows();
  if (numerical_rank(t.matrix) < static_cast<std::size_t>(k) || numerical_rank(u.matrix) < static_cast<std::size_t>(k))
    throw Error(Errc::NotInjective, "maps must be injective");
  const MatrixXd& verts = px->vertices;

  // Row j of `to` closest to conv(+-rows of `from`) in the dual norm of X.
  auto nearest = [&](const VectorXd& target, const MatrixXd& from) {
    const MatrixXd vf = verts * from.transpose();  // v . from_i
    const VectorXd vt = verts * target;
    // Variables: g (n, free), s (n, >= 0), tau (free, shifted so that zero is feasible).
    const double shift = std::max(0.0, vt.maxCoeff());
    lp::LinearProgram prog(static_cast<std::size_t>(2 * n + 1));
    for (Index i = 0; i < n; ++i) prog.set_free(static_cast<std::size_t>(i));
    prog.set_free(static_cast<std::size_t>(2 * n));
    prog.set_objective(static_cast<std::size_t>(2 * n), 1.0);
    for (Index v = 0; v < verts.rows(); ++v) {
      VectorXd row = VectorXd::Zero(2 * n + 1);
      row.head(n) = -vf.row(v).transpose();
      row(2 * n) = -1;
      prog.add_le(row, shift - vt(v));
    }
    add_l1_rows(prog, n, 0, n);
    VectorXd sum = VectorXd::Zero(2 * n + 1);
    sum.segment(n, n).setOnes();
    prog.add_le(sum, 1.0);
    auto r = solve_or_throw(prog, "nearest functional program failed");
    return VectorXd(r.x.head(n));
  };

  MatrixXd gs(n, n), fs(n, n);
  for (Index j = 0; j < n; ++j) {
    gs.row(j) = nearest(t.matrix.row(j).transpose(), u.matrix).transpose();
    fs.row(j) = nearest(u.matrix.row(j).transpose(), t.matrix).transpose();
  }
  MatrixXd tp(2 * n, k), up(2 * n, k);
  tp << t.matrix, fs * t.matrix;
  up << gs * u.matrix, u.matrix;
  const NormSpec target = NormSpec::lp(static_cast<std::size_t>(2 * n), kInf);
  ExtrinsicWitness w{LinOp{tp, t.domain, target}, LinOp{up, t.domain, target}, {}};
  w.distance = op_norm(MatrixXd(tp - up), t.domain, target);
  return w;
}

AuerbachBasis auerbach_basis(const NormSpec& n, const AuerbachOptions& opts) {
  const Index k = static_cast<Index>(n.dim());
  if (k > 6) throw Error(Errc::BadArity, "Auerbach search supports dimension at most 6");
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> g;
  std::optional<AuerbachBasis> best;
  for (int s = 0; s < opts.starts; ++s) {
    MatrixXd x(k, k);
    if (s == 0) {
      x.setIdentity();
    } else {
      for (auto& v : x.reshaped()) v = g(rng);
    }
    for (Index j = 0; j < k; ++j) x.col(j) /= n(x.col(j));
    double det = std::abs(x.determinant());
    if (det < 1e-12) continue;
    bool improved = true;
    for (int sweep = 0; sweep < opts.sweeps && improved; ++sweep) {
      improved = false;
      for (Index j = 0; j < k; ++j) {
        const VectorXd c = x.determinant() * x.inverse().row(j).transpose();
        const VectorXd cand = support_point(n, c);
        MatrixXd y = x;
        y.col(j) = cand;
        const double dy = std::abs(y.determinant());
        if (dy > det * (1 + 1e-12)) {
          x = y;
          det = dy;
          improved = true;
        }
      }
    }
    for (Index j = 0; j < k; ++j) x.col(j) /= n(x.col(j));
    MatrixXd f = x.inverse();
    bool ok = true;
    for (Index j = 0; j < k; ++j) ok = ok && dual_norm(n, f.row(j).transpose()) <= 1 + kSlack;
    if (!ok) continue;
    best = AuerbachBasis{x, f, std::abs(x.determinant())};
    break;
  }
  if (!best) throw Error(Errc::BudgetExhausted, "no start produced certified functionals");
  return *best;
}

Amalgam amalgam_norm(const NormSpec& f, const NormSpec& g, const MatrixXd& t, const AmalgamOptions& opts) {
  const Index kf = static_cast<Index>(f.dim()), kg = static_cast<Index>(g.dim());
  if (t.rows() != kg || t.cols() != kf) throw Error(Errc::DimensionMismatch, "T must map F to G");
  if (numerical_rank(t) < static_cast<std::size_t>(kf)) throw Error(Errc::NotInjective, "T is not injective");
  auto pg = g.polytope();
  if (!pg || pg->vertices.rows() == 0) throw Error(Errc::DualNotComputable, "G must be polyhedral");
  const LinOp op{t, f, g};
  MetricValue tn = op_norm(op), ti = inv_norm(op);

  // Extreme points of Ball(F*).
  MatrixXd ext;
  double resolution = 0;
  if (auto pf = f.polytope(); pf && pf->vertices.rows() > 0) {
    ext = pf->facets;
  } else {
    if (!dual(f)) throw Error(Errc::DualNotComputable, "F has no computable dual");
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;
    std::vector<VectorXd> pts;
    for (Index i = 0; i < kf; ++i) pts.push_back(VectorXd::Unit(kf, i));
    for (int s = 0; s < opts.net_size; ++s) {
      VectorXd z(kf);
      for (auto& v : z) v = gauss(rng);
      pts.push_back(z);
    }
    ext.resize(static_cast<Index>(pts.size()), kf);
    for (std::size_t i = 0; i < pts.size(); ++i)
      ext.row(static_cast<Index>(i)) = pts[i].transpose() / dual_norm(f, pts[i]);
    resolution = kf == 1 ? 0.0 : 2.0 * std::pow(static_cast<double>(opts.net_size), -1.0 / static_cast<double>(kf - 1));
  }

  std::vector<VectorXd> terms;
  const MatrixXd& ga = pg->facets;
  for (Index a = 0; a < ga.rows(); ++a) {
    VectorXd row(kf + kg);
    row << t.transpose() * ga.row(a).transpose() / tn.value, ga.row(a).transpose();
    terms.push_back(row);
  }
  for (Index e = 0; e < ext.rows(); ++e) {
    const Lift l = dual_min_lift(op, ext.row(e).transpose() / ti.value);
    VectorXd row(kf + kg);
    row << ext.row(e).transpose(), l.functional / tn.value;
    terms.push_back(row);
  }
  MatrixXd rows(static_cast<Index>(terms.size()), kf + kg);
  for (std::size_t i = 0; i < terms.size(); ++i) rows.row(static_cast<Index>(i)) = terms[i].transpose();
  NormSpec h = NormSpec::seminorm(rows);
  MatrixXd im_i = MatrixXd::Zero(kf + kg, kf), im_j = MatrixXd::Zero(kf + kg, kg);
  im_i.topRows(kf).setIdentity();
  im_j.bottomRows(kg).setIdentity();
  return {h, LinOp{im_i, f, h}, LinOp{im_j, g, h}, tn, ti, resolution};
}

AmalgamCheck check_amalgam(const Amalgam& a, const MatrixXd& t) {
  auto distortion = [](const LinOp& e) {
    return std::max(std::abs(op_norm(e).value - 1), std::abs(inv_norm(e).value - 1));
  };
  AmalgamCheck c{};
  c.i_distortion = distortion(a.i);
  c.j_distortion = distortion(a.j);
  const MatrixXd diff = a.i.matrix - a.j.matrix * t;
  c.defect = op_norm(diff, a.i.domain, a.h);
  c.defect_bound = a.t_norm.value * a.t_inv.value - 1;
  if (a.i.domain.dim() == a.j.domain.dim() && std::abs(a.t_norm.value - 1) <= 1e-9) {
    c.gap = gap_metric(SubspaceRep(a.h, a.i.matrix), SubspaceRep(a.h, a.j.matrix));
    c.gap_bound = a.t_inv.value - 1;
  }
  return c;
}

PairReport nu2_tools(const LinOp& t0, const LinOp& t1, double lambda) {
  if (!(t0.codomain == t1.codomain) || t0.matrix.rows() != t1.matrix.rows())
    throw Error(Errc::AmbientMismatch, "maps land in different spaces");
  const Index k = t0.matrix.cols();
  if (t1.matrix.cols() != k || numerical_rank(t0.matrix) != static_cast<std::size_t>(k) ||
      numerical_rank(t1.matrix) != static_cast<std::size_t>(k))
    throw Error(Errc::RankMismatch, "both maps must have rank k");
  const NormSpec& e = t0.codomain;
  NormSpec m0 = NormSpec::pushforward(t0.matrix, e), m1 = NormSpec::pushforward(t1.matrix, e);
  auto m0d = dual(m0), m1d = dual(m1);
  if (!m0d || !m1d) throw Error(Errc::DualNotComputable, "pushforward norms need computable duals");
  PairReport r{{m0, m1}, omega(*m0d, m1), false, {}, {}, std::nullopt, std::nullopt, true};
  r.member = r.omega.value <= std::log(lambda) + 1e-12;
  const MatrixXd id = MatrixXd::Identity(k, k);
  r.norm = op_norm(id, *m1d, m0);
  r.inv_norm = op_norm(id, m0, *m1d);
  const MatrixXd comp = t0.matrix * t1.matrix.transpose();
  if (e.is_lp(kInf)) {
    r.norm_direct = comp.cwiseAbs().maxCoeff();
    auto poly = m0.polytope();
    double best = 0;
    const LinOp lift{t1.matrix, NormSpec::lp(static_cast<std::size_t>(k), 2), e};
    for (Index v = 0; v < poly->vertices.rows(); ++v)
      best = std::max(best, dual_min_lift(lift, poly->vertices.row(v).transpose()).value);
    r.inv_norm_direct = best;
  } else if (e.is_lp(2)) {
    Eigen::JacobiSVD<MatrixXd> svd(comp);
    r.norm_direct = svd.singularValues()(0);
    r.inv_norm_direct = 1.0 / svd.singularValues()(k - 1);
  }
  const double cap = lambda * (1 + kSlack);
  r.bounds_hold = !r.member || (r.norm.value <= cap && r.inv_norm.value <= cap);
  return r;
}

BasisMatch basis_matching_map(const SubspaceRep& v, const SubspaceRep& w) {
  if (!(v.ambient() == w.ambient())) throw Error(Errc::AmbientMismatch, "subspaces live in different ambients");
  if (v.dim() != w.dim()) throw Error(Errc::DimensionMismatch, "subspaces have different dimensions");
  const Index k = static_cast<Index>(v.dim());
  BasisMatch b{};
  b.gap = gap_metric(v, w);
  const NormSpec nv = v.intrinsic(), nw = w.intrinsic();
  const AuerbachBasis ab = auerbach_basis(nv);
  MatrixXd targets(k, k);
  for (Index j = 0; j < k; ++j) targets.col(j) = nearest_in_ball(w, v.basis() * ab.basis.col(j)).coords;
  b.map = targets * ab.functionals;
  b.norm = op_norm(b.map, nv, nw);
  b.k_gap = static_cast<double>(k) * b.gap.value;
  b.applicable = b.k_gap < 1.0 / 3.0;
  b.bound = b.k_gap < 1 ? (1 + b.k_gap) / (1 - b.k_gap) : kInf;
  try {
    b.inv_norm = inv_norm(LinOp{b.map, nv, nw});
  } catch (const Error& err) {
    if (err.code() != Errc::NotInjective) throw;
    b.inv_norm = {kInf, Certificate::exact, "singular", 0, std::nullopt};
  }
  b.holds = !b.applicable || b.norm.value * b.inv_norm.value <= b.bound * (1 + 1e-9) + 1e-9;
  return b;
}

DiamCheck diam_check(const NormPairClass& a, const NormPairClass& b, double lambda, const BmOptions& opts) {
  auto member = [&](const NormPairClass& p) {
    auto d = dual(p.m0);
    if (!d) throw Error(Errc::DualNotComputable, "pair norms need computable duals");
    return omega(*d, p.m1).value <= std::log(lambda) + 1e-12;
  };
  DiamCheck c{};
  c.a_member = member(a);
  c.b_member = member(b);
  BmResult bm = bm_upper(a.m0, b.m0, opts);
  c.bm = bm.value;
  c.delta = bm.map.inverse();
  c.omega2 = omega(a.m0, act_primal(b.m0, c.delta)).value + omega(a.m1, act_dual(b.m1, c.delta)).value;
  c.bound = 2 * (std::log(lambda) + bm.value.value);
  c.holds = !(c.a_member && c.b_member) || c.omega2 <= c.bound + 1e-8;
  return c;
}

}  // namespace ramsey::metrics
