#pragma once

// Explicit constructions on finite-dimensional normed spaces: minimal lifts of
// functionals, Auerbach bases, embeddings realizing the extrinsic distance,
// amalgamation norms and pairs of pushforward norms.

#include <cstdint>
#include <optional>

#include "ramsey/metrics.hpp"

namespace ramsey::metrics {

struct Lift {
  double value;
  VectorXd functional;  // g with T^t g = f
};

/// min |g|_{E*} subject to T^t g = f, where E is the codomain of T.
/// Throws Errc::Infeasible, Errc::DualNotComputable, Errc::DimensionMismatch.
Lift dual_min_lift(const LinOp& t, const VectorXd& f);
/// The same value computed as the dual norm of f for the pushforward of E.
double lift_by_polarity(const LinOp& t, const VectorXd& f);

struct ExtrinsicWitness {
  LinOp t;  // into l_inf^{2N}, same pushforward norm as the input T
  LinOp u;
  MetricValue distance;  // |T' - U'| from the shared domain
};

/// T and U share a polyhedral domain X and map into l_inf^N. Builds
/// isometric re-embeddings into l_inf^{2N} whose distance is the extrinsic
/// distance between the two pushforward norms.
/// Throws Errc::NotIntoEllInfty, Errc::AmbientMismatch, Errc::NotInjective, Errc::Unsupported.
ExtrinsicWitness extrinsic_witness(const LinOp& t, const LinOp& u);

struct AuerbachOptions {
  int starts = 8;
  int sweeps = 500;
  std::uint64_t seed = 1;
};

struct AuerbachBasis {
  MatrixXd basis;        // columns x_j with norm 1
  MatrixXd functionals;  // rows f_j with f_i(x_j) = [i == j] and dual norm <= 1
  double determinant;
};

/// Determinant maximization over the unit ball by coordinate ascent.
/// Throws Errc::BadArity for dim > 6, Errc::BudgetExhausted when no start certifies.
AuerbachBasis auerbach_basis(const NormSpec& n, const AuerbachOptions& opts = {});

struct AmalgamOptions {
  int net_size = 64;  // directions in the dual sphere net for non-polyhedral F
  std::uint64_t seed = 1;
};

struct Amalgam {
  NormSpec h;  // seminorm on R^{kF + kG}
  LinOp i;     // F -> H, x -> (x, 0)
  LinOp j;     // G -> H, y -> (0, y)
  MetricValue t_norm;
  MetricValue t_inv;
  double net_resolution;  // 0 when the extreme points of Ball(F*) are exact
};

/// Amalgamation of F and G along an injective T: F -> G. G must be polyhedral.
/// Throws Errc::NotInjective, Errc::DualNotComputable, Errc::DimensionMismatch.
Amalgam amalgam_norm(const NormSpec& f, const NormSpec& g, const MatrixXd& t, const AmalgamOptions& opts = {});

struct AmalgamCheck {
  double i_distortion;  // max(| |I| - 1 |, | |I^{-1}| - 1 |)
  double j_distortion;
  MetricValue defect;   // |I - J T|
  double defect_bound;  // |T| |T^{-1}| - 1
  std::optional<MetricValue> gap;  // between Im I and Im J, when dims agree and |T| = 1
  std::optional<double> gap_bound;  // |T^{-1}| - 1
};

AmalgamCheck check_amalgam(const Amalgam& a, const MatrixXd& t);

/// A pair of norms on R^k, the second one acting on functionals.
struct NormPairClass {
  NormSpec m0;
  NormSpec m1;
};

struct PairReport {
  NormPairClass pair;
  MetricValue omega;  // between the dual of m0 and m1
  bool member;        // omega <= log(lambda)
  MetricValue norm;   // |T0 T1^t| from E* to E
  MetricValue inv_norm;
  std::optional<double> norm_direct;  // same quantities from the composite matrix
  std::optional<double> inv_norm_direct;
  bool bounds_hold;  // member implies both norms <= lambda
};

/// T0 and T1 have rank k into the same ambient E.
/// Throws Errc::RankMismatch, Errc::AmbientMismatch, Errc::DualNotComputable.
PairReport nu2_tools(const LinOp& t0, const LinOp& t1, double lambda);

struct BasisMatch {
  MatrixXd map;  // V coordinates -> W coordinates, sends an Auerbach basis to nearest points
  MetricValue gap;
  MetricValue norm;
  MetricValue inv_norm;
  double k_gap;
  double bound;     // (1 + k_gap) / (1 - k_gap)
  bool applicable;  // k_gap < 1/3
  bool holds;
};

/// Needs a polyhedral ambient. Throws Errc::AmbientMismatch, Errc::DimensionMismatch.
BasisMatch basis_matching_map(const SubspaceRep& v, const SubspaceRep& w);

struct DiamCheck {
  MatrixXd delta;
  MetricValue bm;
  double omega2;  // omega(a.m0, delta . b.m0) + omega(a.m1, delta . b.m1)
  double bound;   // 2 (log lambda + bm)
  bool a_member;
  bool b_member;
  bool holds;
};

/// Moves b by the map found for the first coordinates and measures the
/// summed distance to a.
DiamCheck diam_check(const NormPairClass& a, const NormPairClass& b, double lambda, const BmOptions& opts = {});

}  // namespace ramsey::metrics
