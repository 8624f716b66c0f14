#pragma once

// Distances between norms and between subspaces.

#include <cstdint>
#include <functional>
#include <vector>

#include "ramsey/norms.hpp"

namespace ramsey::metrics {

/// log max(|Id|_{m->n}, |Id|_{n->m}). Throws Errc::DimensionMismatch.
MetricValue omega(const NormSpec& m, const NormSpec& n, const AscentOptions& opts = {});

struct BmOptions {
  int starts = 6;  // random starts on top of the fixed ones
  int iterations = 400;
  std::uint64_t seed = 1;
  std::vector<MatrixXd> extra_starts;
};

struct BmResult {
  MetricValue value;
  MatrixXd map;  // the best D found, scaled so that |D| = |D^{-1}|
};

/// Upper bound on log(|D|_{m->n} |D^{-1}|_{n->m}) minimized over invertible D.
BmResult bm_upper(const NormSpec& m, const NormSpec& n, const BmOptions& opts = {});

/// m(D^{-1} x), the primal action of D.
NormSpec act_primal(const NormSpec& m, const MatrixXd& d);
/// m(D^t f), the action on norms of functionals.
NormSpec act_dual(const NormSpec& m, const MatrixXd& d);

struct Nearest {
  double distance;
  VectorXd coords;  // coordinates in the subspace basis
};

/// Nearest point of Ball(W) to an ambient vector x. Needs a facet
/// description of the ambient (seminorms allowed). Throws Errc::Unsupported.
Nearest nearest_in_ball(const SubspaceRep& w, const VectorXd& x);

struct SampleOptions {
  int samples = 512;
  std::uint64_t seed = 1;
};

/// Hausdorff distance between Ball(U) and Ball(W).
/// Throws Errc::AmbientMismatch or Errc::DimensionMismatch.
MetricValue gap_metric(const SubspaceRep& u, const SubspaceRep& w, const SampleOptions& opts = {});
/// Sphere-sampling estimate of the same quantity.
MetricValue gap_sampled(const SubspaceRep& u, const SubspaceRep& w, const SampleOptions& opts = {});

/// Hausdorff distance between Ball(m*) and Ball(n*) measured in the dual norm of X.
MetricValue alpha_extrinsic(const NormSpec& x, const NormSpec& m, const NormSpec& n,
                            const SampleOptions& opts = {});
/// Lower bound sup |m(x) - n(x)| over sampled points of the X sphere.
MetricValue alpha_sampled(const NormSpec& x, const NormSpec& m, const NormSpec& n, const SampleOptions& opts = {});

/// Largest |c(a) - c(b)| over the points. Throws Errc::LipschitzViolation when
/// c is not 1-Lipschitz for the metric norm on some pair (slack tol).
double oscillation(const std::function<double(const VectorXd&)>& c, const std::vector<VectorXd>& points,
                   const NormSpec& metric, double tol = 1e-9);
/// Oscillation of a finite coloring under the discrete metric on colors.
double oscillation(const std::vector<std::uint32_t>& colors);

}  // namespace ramsey::metrics
