#include "ramsey/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace ramsey::metrics {

namespace {

using Eigen::Index;

// Rows of m with near-duplicates removed, first occurrence kept.
MatrixXd unique_rows(const MatrixXd& m, double tol) {
  std::vector<Index> keep;
  for (Index i = 0; i < m.rows(); ++i) {
    bool dup = false;
    for (Index j : keep)
      if ((m.row(i) - m.row(j)).cwiseAbs().maxCoeff() <= tol * (1.0 + m.row(j).cwiseAbs().maxCoeff())) {
        dup = true;
        break;
      }
    if (!dup) keep.push_back(i);
  }
  MatrixXd out(static_cast<Index>(keep.size()), m.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) out.row(static_cast<Index>(i)) = m.row(keep[i]);
  return out;
}

MatrixXd symmetrize(const MatrixXd& v) {
  MatrixXd s(2 * v.rows(), v.cols());
  s << v, -v;
  return unique_rows(s, 1e-12);
}

std::shared_ptr<const Polytope> cube(std::size_t k) {
  auto p = std::make_shared<Polytope>();
  const Index d = static_cast<Index>(k);
  p->vertices.resize(Index{1} << d, d);
  for (Index s = 0; s < (Index{1} << d); ++s)
    for (Index j = 0; j < d; ++j) p->vertices(s, j) = ((s >> j) & 1) ? -1.0 : 1.0;
  p->facets.resize(2 * d, d);
  p->facets << MatrixXd::Identity(d, d), -MatrixXd::Identity(d, d);
  return p;
}

std::shared_ptr<const Polytope> cross(std::size_t k) {
  auto c = cube(k);
  auto p = std::make_shared<Polytope>();
  p->vertices = c->facets;
  p->facets = c->vertices;
  return p;
}

double lp_value(const VectorXd& x, double p) {
  if (x.size() == 0) return 0;
  if (p == 1) return x.cwiseAbs().sum();
  if (p == 2) return x.norm();
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0) return 0;
  return m * std::pow((x.cwiseAbs() / m).array().pow(p).sum(), 1.0 / p);
}

double conjugate(double p) {
  if (p == 1) return kInf;
  if (std::isinf(p)) return 1;
  return p / (p - 1);
}

}  // namespace

MatrixXd polar_hull(const MatrixXd& points, double tol) {
  const Index n = points.rows(), d = points.cols();
  MatrixXd pts = unique_rows(points, 1e-12);
  const Index np = pts.rows();
  std::vector<VectorXd> found;
  if (d == 0 || np < d) return MatrixXd(0, d);
  std::vector<Index> idx(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i;
  const VectorXd ones = VectorXd::Ones(d);
  while (true) {
    MatrixXd s(d, d);
    for (Index i = 0; i < d; ++i) s.row(i) = pts.row(idx[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<MatrixXd> lu(s);
    lu.setThreshold(1e-10);
    if (lu.isInvertible()) {
      VectorXd a = lu.solve(ones);
      if ((s * a - ones).cwiseAbs().maxCoeff() <= 1e-9 && (pts * a).maxCoeff() <= 1.0 + tol) found.push_back(a);
    }
    // Next combination in lexicographic order.
    Index i = d - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == np - d + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  (void)n;
  MatrixXd out(static_cast<Index>(found.size()), d);
  for (std::size_t i = 0; i < found.size(); ++i) out.row(static_cast<Index>(i)) = found[i].transpose();
  return unique_rows(out, 1e-9);
}

NormSpec NormSpec::lp(std::size_t dim, double p) {
  if (!(p >= 1)) throw Error(Errc::BadArity, "p must be in [1, inf]");
  if (dim == 0) throw Error(Errc::BadArity, "dimension must be positive");
  return NormSpec(dim, PNorm{p});
}

NormSpec NormSpec::from_vertices(const MatrixXd& vertices) {
  MatrixXd v = symmetrize(vertices);
  if (numerical_rank(v) < static_cast<std::size_t>(v.cols()))
    throw Error(Errc::RankDeficient, "vertex set is not full-dimensional");
  auto p = std::make_shared<Polytope>();
  p->facets = polar_hull(v);
  p->vertices = polar_hull(p->facets);
  return NormSpec(static_cast<std::size_t>(v.cols()), Polyhedral{p});
}

NormSpec NormSpec::from_facets(const MatrixXd& facets) {
  MatrixXd f = symmetrize(facets);
  if (numerical_rank(f) < static_cast<std::size_t>(f.cols()))
    throw Error(Errc::Unsupported, "facet list does not bound the ball");
  auto p = std::make_shared<Polytope>();
  p->vertices = polar_hull(f);
  p->facets = polar_hull(p->vertices);
  return NormSpec(static_cast<std::size_t>(f.cols()), Polyhedral{p});
}

NormSpec NormSpec::seminorm(const MatrixXd& facets) {
  auto p = std::make_shared<Polytope>();
  p->facets = symmetrize(facets);
  p->vertices = MatrixXd(0, facets.cols());
  return NormSpec(static_cast<std::size_t>(facets.cols()), Polyhedral{p});
}

NormSpec NormSpec::pushforward(const MatrixXd& map, const NormSpec& codomain) {
  if (static_cast<std::size_t>(map.rows()) != codomain.dim())
    throw Error(Errc::DimensionMismatch, "pushforward map rows must match the codomain");
  const std::size_t k = static_cast<std::size_t>(map.cols());
  if (k == 0) throw Error(Errc::BadArity, "empty map");
  Pushforward pf{map, std::make_shared<const NormSpec>(codomain), nullptr, std::nullopt};
  if (auto poly = codomain.polytope()) {
    auto p = std::make_shared<Polytope>();
    p->facets = unique_rows(poly->facets * map, 1e-12);
    if (numerical_rank(p->facets) < k) throw Error(Errc::NotInjective, "map is not injective for this norm");
    p->vertices = polar_hull(p->facets);
    pf.ball = p;
  } else {
    if (numerical_rank(map) < k) throw Error(Errc::NotInjective, "map is not injective");
    if (auto r = codomain.euclidean()) {
      Eigen::HouseholderQR<MatrixXd> qr(*r * map);
      pf.euclidean = MatrixXd(qr.matrixQR().topRows(static_cast<Index>(k)).triangularView<Eigen::Upper>());
    }
  }
  return NormSpec(k, std::move(pf));
}

double NormSpec::operator()(const VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw Error(Errc::DimensionMismatch, "vector length differs from norm dimension");
  return std::visit(
      [&](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, PNorm>) {
          return lp_value(x, v.p);
        } else if constexpr (std::is_same_v<V, Polyhedral>) {
          return std::max(0.0, (v.ball->facets * x).maxCoeff());
        } else {
          if (v.ball) return std::max(0.0, (v.ball->facets * x).maxCoeff());
          if (v.euclidean) return (*v.euclidean * x).norm();
          return (*v.codomain)(v.map * x);
        }
      },
      v_);
}

std::shared_ptr<const Polytope> NormSpec::polytope() const {
  if (auto* p = std::get_if<PNorm>(&v_)) {
    if (p->p == 1 && dim_ <= 16) return cross(dim_);
    if (std::isinf(p->p) && dim_ <= 16) return cube(dim_);
    return nullptr;
  }
  if (auto* p = std::get_if<Polyhedral>(&v_)) return p->ball;
  return std::get<Pushforward>(v_).ball;
}

std::optional<MatrixXd> NormSpec::euclidean() const {
  if (auto* p = std::get_if<PNorm>(&v_)) {
    if (p->p == 2) return MatrixXd::Identity(static_cast<Index>(dim_), static_cast<Index>(dim_));
    return std::nullopt;
  }
  if (auto* p = std::get_if<Pushforward>(&v_)) return p->euclidean;
  return std::nullopt;
}

bool NormSpec::is_lp(double p) const {
  auto* v = std::get_if<PNorm>(&v_);
  return v && v->p == p;
}

bool NormSpec::is_seminorm() const {
  auto poly = polytope();
  return poly && poly->vertices.rows() == 0;
}

bool operator==(const NormSpec& a, const NormSpec& b) {
  if (a.dim_ != b.dim_ || a.v_.index() != b.v_.index()) return false;
  if (auto* p = std::get_if<PNorm>(&a.v_)) return p->p == std::get<PNorm>(b.v_).p;
  if (auto* p = std::get_if<Polyhedral>(&a.v_)) {
    const auto& q = std::get<Polyhedral>(b.v_);
    return p->ball == q.ball || (p->ball->facets.rows() == q.ball->facets.rows() && p->ball->facets == q.ball->facets);
  }
  const auto& p = std::get<Pushforward>(a.v_);
  const auto& q = std::get<Pushforward>(b.v_);
  return p.map.rows() == q.map.rows() && p.map == q.map && *p.codomain == *q.codomain;
}

std::optional<NormSpec> dual(const NormSpec& n) {
  if (auto* p = std::get_if<PNorm>(&n.variant())) return NormSpec::lp(n.dim(), conjugate(p->p));
  if (auto poly = n.polytope()) {
    if (poly->vertices.rows() == 0) return std::nullopt;
    auto d = std::make_shared<Polytope>();
    d->vertices = poly->facets;
    d->facets = poly->vertices;
    return NormSpec(n.dim(), Polyhedral{d});
  }
  if (auto r = n.euclidean()) {
    MatrixXd rinv_t = r->inverse().transpose();
    return NormSpec::pushforward(rinv_t, NormSpec::lp(n.dim(), 2));
  }
  return std::nullopt;
}

double dual_norm(const NormSpec& n, const VectorXd& f) {
  if (static_cast<std::size_t>(f.size()) != n.dim()) throw Error(Errc::DimensionMismatch, "functional length");
  if (auto* p = std::get_if<PNorm>(&n.variant())) return lp_value(f, conjugate(p->p));
  if (auto poly = n.polytope()) {
    if (poly->vertices.rows() == 0) throw Error(Errc::DualNotComputable, "seminorm has no dual ball");
    return std::max(0.0, (poly->vertices * f).maxCoeff());
  }
  if (auto r = n.euclidean()) return r->transpose().triangularView<Eigen::Lower>().solve(f).norm();
  throw Error(Errc::DualNotComputable, "no closed form for this dual norm");
}

VectorXd support_point(const NormSpec& n, const VectorXd& c) {
  const Index k = static_cast<Index>(n.dim());
  if (c.size() != k) throw Error(Errc::DimensionMismatch, "functional length");
  if (auto* p = std::get_if<PNorm>(&n.variant())) {
    VectorXd x = VectorXd::Zero(k);
    if (p->p == 1) {
      Index i = 0;
      c.cwiseAbs().maxCoeff(&i);
      x(i) = c(i) >= 0 ? 1.0 : -1.0;
      return x;
    }
    if (std::isinf(p->p)) {
      for (Index i = 0; i < k; ++i) x(i) = c(i) >= 0 ? 1.0 : -1.0;
      return x;
    }
    const double q = conjugate(p->p);
    const double cq = lp_value(c, q);
    if (cq == 0) {
      x(0) = 1;
      return x;
    }
    for (Index i = 0; i < k; ++i)
      x(i) = (c(i) >= 0 ? 1.0 : -1.0) * std::pow(std::abs(c(i)) / cq, q - 1);
    return x;
  }
  if (auto poly = n.polytope(); poly && poly->vertices.rows() > 0) {
    Index best = 0;
    (poly->vertices * c).maxCoeff(&best);
    return poly->vertices.row(best).transpose();
  }
  if (auto r = n.euclidean()) {
    VectorXd w = r->transpose().triangularView<Eigen::Lower>().solve(c);
    if (w.norm() == 0) w(0) = 1;
    return r->triangularView<Eigen::Upper>().solve(w / w.norm());
  }
  throw Error(Errc::DualNotComputable, "no support point for this norm");
}

NormSpec parse_norm_shorthand(const std::string& s) {
  auto colon = s.find(':');
  if (s.size() < 4 || s[0] != 'l' || colon == std::string::npos) throw Error(Errc::Parse, "expected lp:dim, got '" + s + "'");
  std::string ps = s.substr(1, colon - 1), ds = s.substr(colon + 1);
  double p = 0;
  if (ps == "inf") {
    p = kInf;
  } else {
    std::size_t pos = 0;
    try {
      p = std::stod(ps, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != ps.size()) throw Error(Errc::Parse, "bad exponent in '" + s + "'");
  }
  std::size_t pos = 0;
  unsigned long dim = 0;
  try {
    dim = std::stoul(ds, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != ds.size() || dim == 0) throw Error(Errc::Parse, "bad dimension in '" + s + "'");
  if (!(p >= 1)) throw Error(Errc::Parse, "exponent must be at least 1 in '" + s + "'");
  return NormSpec::lp(dim, p);
}

std::string describe(const NormSpec& n) {
  std::ostringstream o;
  if (auto* p = std::get_if<PNorm>(&n.variant())) {
    o << 'l';
    if (std::isinf(p->p)) {
      o << "inf";
    } else {
      o << p->p;
    }
    o << ':' << n.dim();
  } else if (auto* q = std::get_if<Polyhedral>(&n.variant())) {
    o << "polyhedral:" << n.dim() << " (" << q->ball->vertices.rows() << " vertices, " << q->ball->facets.rows()
      << " facets)";
  } else {
    const auto& f = std::get<Pushforward>(n.variant());
    o << "pushforward:" << n.dim() << " into " << describe(*f.codomain);
  }
  return o.str();
}

std::string certificate_name(Certificate c) {
  switch (c) {
    case Certificate::exact:
      return "exact";
    case Certificate::upper:
      return "upper";
    case Certificate::lower:
      return "lower";
    case Certificate::estimate:
      return "estimate";
  }
  return "estimate";
}

Certificate combine_max(Certificate a, Certificate b) {
  if (a == b) return a;
  if (a == Certificate::estimate || b == Certificate::estimate) return Certificate::estimate;
  if (a == Certificate::exact) return b;
  if (b == Certificate::exact) return a;
  return Certificate::estimate;
}

std::size_t numerical_rank(const MatrixXd& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  std::size_t r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

namespace {

double identity_lp_norm(double from, double to, std::size_t dim) {
  // |Id|_{l_from -> l_to} on R^dim.
  const double inv_from = std::isinf(from) ? 0.0 : 1.0 / from;
  const double inv_to = std::isinf(to) ? 0.0 : 1.0 / to;
  return std::pow(static_cast<double>(dim), std::max(0.0, inv_to - inv_from));
}

MetricValue ascent(const MatrixXd& t, const NormSpec& x, const NormSpec& y, const AscentOptions& opts) {
  const Index k = t.cols();
  auto f = [&](const VectorXd& z) {
    const double d = x(z);
    return d > 0 ? y(t * z) / d : 0.0;
  };
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> g;
  double best = 0;
  for (int s = 0; s < opts.starts; ++s) {
    VectorXd z(k);
    if (s < k) {
      z = VectorXd::Unit(k, s);
    } else {
      for (Index i = 0; i < k; ++i) z(i) = g(rng);
    }
    if (x(z) == 0) continue;
    z /= x(z);
    double fz = f(z);
    double step = 1.0;
    for (int it = 0; it < opts.iterations; ++it) {
      VectorXd grad(k);
      const double h = 1e-6;
      for (Index i = 0; i < k; ++i) {
        VectorXd zp = z, zm = z;
        zp(i) += h;
        zm(i) -= h;
        grad(i) = (f(zp) - f(zm)) / (2 * h);
      }
      const double gg = grad.squaredNorm();
      if (gg < 1e-24) break;
      bool moved = false;
      while (step > 1e-14) {
        VectorXd cand = z + step * grad;
        const double nc = x(cand);
        if (nc > 0) {
          cand /= nc;
          const double fc = f(cand);
          if (fc >= fz + 1e-4 * step * gg) {
            z = cand;
            fz = fc;
            moved = true;
            step *= 2;
            break;
          }
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    best = std::max(best, fz);
  }
  MetricValue mv{best, Certificate::lower, "projected_ascent", 0, std::nullopt};
  auto* px = std::get_if<PNorm>(&x.variant());
  auto* py = std::get_if<PNorm>(&y.variant());
  if (px && py) {
    Eigen::JacobiSVD<MatrixXd> svd(t);
    const double s = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    mv.upper_bound = identity_lp_norm(px->p, 2, x.dim()) * s * identity_lp_norm(2, py->p, y.dim());
  }
  return mv;
}

}  // namespace

MetricValue op_norm(const MatrixXd& t, const NormSpec& x, const NormSpec& y, const AscentOptions& opts) {
  if (static_cast<std::size_t>(t.cols()) != x.dim() || static_cast<std::size_t>(t.rows()) != y.dim())
    throw Error(Errc::DimensionMismatch, "operator shape does not match its norms");
  if (t.size() == 0 || t.cwiseAbs().maxCoeff() == 0) return {0.0, Certificate::exact, "zero", 0, std::nullopt};
  auto px = x.polytope();
  auto py = y.polytope();
  const Index vx = px ? px->vertices.rows() : 0;
  const bool dual_x = static_cast<bool>(dual(x)) || x.polytope();
  const bool can_facets = py && py->facets.rows() > 0 && dual_x && !(px && px->vertices.rows() == 0);
  const bool can_vertices = vx > 0;
  if (can_vertices && (!can_facets || vx <= py->facets.rows())) {
    double best = 0;
    for (Index i = 0; i < vx; ++i) best = std::max(best, y(t * px->vertices.row(i).transpose()));
    return {best, Certificate::exact, "vertex_max", 0, std::nullopt};
  }
  if (can_facets) {
    double best = 0;
    for (Index i = 0; i < py->facets.rows(); ++i)
      best = std::max(best, dual_norm(x, t.transpose() * py->facets.row(i).transpose()));
    return {best, Certificate::exact, "facet_dual", 0, std::nullopt};
  }
  auto ex = x.euclidean();
  auto ey = y.euclidean();
  if (ex && ey) {
    MatrixXd m = *ey * t * ex->inverse();
    Eigen::JacobiSVD<MatrixXd> svd(m);
    return {svd.singularValues()(0), Certificate::exact, "singular_values", 0, std::nullopt};
  }
  return ascent(t, x, y, opts);
}

MetricValue op_norm(const LinOp& t, const AscentOptions& opts) {
  return op_norm(t.matrix, t.domain, t.codomain, opts);
}

MetricValue inv_norm(const LinOp& t, const AscentOptions& opts) {
  if (static_cast<std::size_t>(t.matrix.cols()) != t.domain.dim() ||
      static_cast<std::size_t>(t.matrix.rows()) != t.codomain.dim())
    throw Error(Errc::DimensionMismatch, "operator shape does not match its norms");
  if (numerical_rank(t.matrix) < t.domain.dim()) throw Error(Errc::NotInjective, "operator is not injective");
  NormSpec image = NormSpec::pushforward(t.matrix, t.codomain);
  const Index k = static_cast<Index>(t.domain.dim());
  MetricValue v = op_norm(MatrixXd::Identity(k, k), image, t.domain, opts);
  return v;
}

SubspaceRep::SubspaceRep(NormSpec ambient, MatrixXd basis) : ambient_(std::move(ambient)), basis_(std::move(basis)) {
  if (static_cast<std::size_t>(basis_.rows()) != ambient_.dim())
    throw Error(Errc::DimensionMismatch, "basis rows must match the ambient dimension");
  if (basis_.cols() == 0 || numerical_rank(basis_) < static_cast<std::size_t>(basis_.cols()))
    throw Error(Errc::RankDeficient, "basis columns are not independent");
}

}  // namespace ramsey::metrics
