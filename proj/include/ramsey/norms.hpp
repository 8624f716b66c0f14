#pragma once

// Norms on R^k and operator norms between them.
//
// A polyhedral ball is kept in both descriptions: `vertices` (rows, closed
// under negation) and `facets` (rows a with ball = {x : a.x <= 1}). The
// gauge is max over facets of a.x and the dual gauge is max over vertices.
// A facet-only description with no vertices is a seminorm.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "ramsey/error.hpp"

namespace ramsey::metrics {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Polytope {
  MatrixXd vertices;  // may be empty for a seminorm
  MatrixXd facets;
};

/// Facet normals of conv(points) for a centrally symmetric full-dimensional
/// point set: each row a has a.p <= 1 on all points with equality on `dim`
/// linearly independent ones. Applied to facet normals it returns vertices.
MatrixXd polar_hull(const MatrixXd& points, double tol = 1e-9);

class NormSpec;

struct PNorm {
  double p;
};
struct Polyhedral {
  std::shared_ptr<const Polytope> ball;
};
struct Pushforward {
  MatrixXd map;  // n x k, injective
  std::shared_ptr<const NormSpec> codomain;
  std::shared_ptr<const Polytope> ball;     // when the codomain is polyhedral
  std::optional<MatrixXd> euclidean;        // when the codomain is Euclidean
};

class NormSpec {
 public:
  using Variant = std::variant<PNorm, Polyhedral, Pushforward>;

  /// p in [1, inf]; throws Errc::BadArity otherwise.
  static NormSpec lp(std::size_t dim, double p);
  /// Symmetrizes the input; throws Errc::RankDeficient unless full-dimensional.
  static NormSpec from_vertices(const MatrixXd& vertices);
  /// Throws Errc::Unsupported if the ball is unbounded.
  static NormSpec from_facets(const MatrixXd& facets);
  /// Gauge max(0, max_F a.x) without a vertex list; may have a kernel.
  static NormSpec seminorm(const MatrixXd& facets);
  /// x -> codomain(T x). Throws Errc::NotInjective.
  static NormSpec pushforward(const MatrixXd& map, const NormSpec& codomain);

  std::size_t dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return v_; }

  double operator()(const VectorXd& x) const;

  /// Both descriptions when the ball is a polytope (l1, l_inf up to dim 16,
  /// polyhedral, pushforward of those).
  std::shared_ptr<const Polytope> polytope() const;
  /// R with norm(x) = |R x|_2 when the norm is Euclidean-like.
  std::optional<MatrixXd> euclidean() const;
  bool is_lp(double p) const;
  bool is_seminorm() const;

  friend bool operator==(const NormSpec& a, const NormSpec& b);
  friend std::optional<NormSpec> dual(const NormSpec& n);

 private:
  NormSpec(std::size_t dim, Variant v) : dim_(dim), v_(std::move(v)) {}
  std::size_t dim_;
  Variant v_;
};

/// Dual norm as a NormSpec when available (l_p, polytopes, Euclidean).
std::optional<NormSpec> dual(const NormSpec& n);
/// Throws Errc::DualNotComputable.
double dual_norm(const NormSpec& n, const VectorXd& f);
/// A point of the unit ball maximizing c.x. Throws Errc::DualNotComputable.
VectorXd support_point(const NormSpec& n, const VectorXd& c);

/// Short names "l1:2", "l2:3", "linf:2", "l3:2". Throws Errc::Parse.
NormSpec parse_norm_shorthand(const std::string& s);
std::string describe(const NormSpec& n);

enum class Certificate { exact, upper, lower, estimate };
std::string certificate_name(Certificate c);

struct MetricValue {
  double value = 0;
  Certificate certificate = Certificate::exact;
  std::string method;
  double tolerance = 0;
  std::optional<double> upper_bound;  // paired with lower certificates
};

/// Weaker of two certificates for a max of the two quantities.
Certificate combine_max(Certificate a, Certificate b);

struct LinOp {
  MatrixXd matrix;  // n x m
  NormSpec domain;  // dim m
  NormSpec codomain;  // dim n
};

struct AscentOptions {
  int starts = 32;
  int iterations = 200;
  std::uint64_t seed = 1;
};

/// sup over the domain ball of the codomain norm of T x.
MetricValue op_norm(const MatrixXd& t, const NormSpec& domain, const NormSpec& codomain,
                    const AscentOptions& opts = {});
MetricValue op_norm(const LinOp& t, const AscentOptions& opts = {});
/// Norm of T^{-1} on the image. Throws Errc::NotInjective.
MetricValue inv_norm(const LinOp& t, const AscentOptions& opts = {});

/// Numerical rank with singular values relative to the largest above tol.
std::size_t numerical_rank(const MatrixXd& a, double tol = 1e-10);

class SubspaceRep {
 public:
  /// Throws Errc::RankDeficient or Errc::DimensionMismatch.
  SubspaceRep(NormSpec ambient, MatrixXd basis);

  const NormSpec& ambient() const noexcept { return ambient_; }
  const MatrixXd& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
  /// The ambient norm restricted to the subspace, in basis coordinates.
  NormSpec intrinsic() const { return NormSpec::pushforward(basis_, ambient_); }

 private:
  NormSpec ambient_;
  MatrixXd basis_;
};

}  // namespace ramsey::metrics
