#include <cmath>
#include <random>

#include "doctest.h"
#include "ramsey/constructions.hpp"

using namespace ramsey::metrics;
using ramsey::Errc;
using ramsey::Error;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::Parse;
}

MatrixXd gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXd m(r, c);
  for (auto& x : m.reshaped()) x = g(rng);
  return m;
}

NormSpec random_polyhedral(int dim, std::mt19937_64& rng) {
  while (true) {
    MatrixXd v = gaussian(dim + 2, dim, rng);
    if (numerical_rank(v) == static_cast<std::size_t>(dim)) return NormSpec::from_vertices(v);
  }
}

}  // namespace

TEST_CASE("dual min lift") {
  MatrixXd incl = MatrixXd::Zero(3, 2);
  incl(0, 0) = incl(1, 1) = 1;
  auto l = dual_min_lift(LinOp{incl, NormSpec::lp(2, 2), NormSpec::lp(3, 2)}, VectorXd::Unit(2, 0));
  CHECK(l.value == doctest::Approx(1));
  CHECK((l.functional - VectorXd::Unit(3, 0)).norm() < 1e-12);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    MatrixXd m = gaussian(3, 2, rng);
    VectorXd f = gaussian(2, 1, rng);
    LinOp op{m, NormSpec::lp(2, 2), NormSpec::lp(3, 2)};
    auto r = dual_min_lift(op, f);
    CHECK(std::abs(r.value - (m.transpose()).completeOrthogonalDecomposition().pseudoInverse().operator*(f).norm()) <=
          1e-7);
    CHECK(std::abs(r.value - lift_by_polarity(op, f)) <= 1e-7);
  }
  for (double p : {1.0, kInf}) {
    for (int t = 0; t < 40; ++t) {
      const int n = 2 + t % 4, k = 1 + t % 2;
      MatrixXd m = gaussian(n, k, rng);
      VectorXd f = gaussian(k, 1, rng);
      LinOp op{m, NormSpec::lp(static_cast<std::size_t>(k), 2), NormSpec::lp(static_cast<std::size_t>(n), p)};
      auto r = dual_min_lift(op, f);
      CHECK(std::abs(r.value - lift_by_polarity(op, f)) <= 1e-7);
      CHECK((m.transpose() * r.functional - f).norm() <= 1e-9);
    }
  }
  MatrixXd sing = MatrixXd::Zero(3, 2);
  sing(0, 0) = 1;
  CHECK(code_of([&] { dual_min_lift(LinOp{sing, NormSpec::lp(2, 2), NormSpec::lp(3, kInf)}, VectorXd::Unit(2, 1)); }) ==
        Errc::Infeasible);
  CHECK(code_of([&] { dual_min_lift(LinOp{sing, NormSpec::lp(2, 2), NormSpec::lp(3, 2)}, VectorXd::Unit(2, 1)); }) ==
        Errc::Infeasible);
}

TEST_CASE("extrinsic witness") {
  const NormSpec li = NormSpec::lp(2, kInf);
  // T realizes l_inf^2, U realizes l_1^2, both into l_inf.
  MatrixXd t = MatrixXd::Identity(2, 2);
  MatrixXd u(2, 2);
  u << 1, 1, 1, -1;
  auto w = extrinsic_witness(LinOp{t, li, li}, LinOp{u, li, li});
  CHECK(std::abs(w.distance.value - 1) <= 1e-8);
  CHECK(w.distance.certificate == Certificate::exact);
  auto same = extrinsic_witness(LinOp{t, li, li}, LinOp{t, li, li});
  CHECK(same.distance.value <= 1e-12);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    NormSpec x = random_polyhedral(2, rng);
    const int n = 2 + trial % 3;
    const NormSpec amb = NormSpec::lp(static_cast<std::size_t>(n), kInf);
    LinOp a{gaussian(n, 2, rng), x, amb}, b{gaussian(n, 2, rng), x, amb};
    auto r = extrinsic_witness(a, b);
    NormSpec m = NormSpec::pushforward(a.matrix, amb), nn = NormSpec::pushforward(b.matrix, amb);
    const double alpha = alpha_extrinsic(x, m, nn).value;
    CHECK(std::abs(r.distance.value - alpha) <= 1e-7);
    // The new embeddings induce the same norms.
    for (int s = 0; s < 20; ++s) {
      VectorXd z = gaussian(2, 1, rng);
      CHECK(r.t.codomain(r.t.matrix * z) == doctest::Approx(m(z)).epsilon(1e-9));
      CHECK(r.u.codomain(r.u.matrix * z) == doctest::Approx(nn(z)).epsilon(1e-9));
    }
  }
  CHECK(code_of([&] { extrinsic_witness(LinOp{t, li, NormSpec::lp(2, 2)}, LinOp{t, li, li}); }) ==
        Errc::NotIntoEllInfty);
}

TEST_CASE("Auerbach bases") {
  for (double p : {1.0, 2.0, 3.0, kInf}) {
    auto b = auerbach_basis(NormSpec::lp(3, p));
    CHECK((b.basis - MatrixXd::Identity(3, 3)).norm() < 1e-12);
    CHECK((b.functionals - MatrixXd::Identity(3, 3)).norm() < 1e-12);
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    NormSpec n = random_polyhedral(2 + trial % 2, rng);
    auto b = auerbach_basis(n);
    const Eigen::Index k = b.basis.cols();
    for (Eigen::Index j = 0; j < k; ++j) {
      CHECK(n(b.basis.col(j)) == doctest::Approx(1).epsilon(1e-12));
      CHECK(dual_norm(n, b.functionals.row(j).transpose()) <= 1 + 1e-6);
    }
    CHECK((b.functionals * b.basis - MatrixXd::Identity(k, k)).norm() < 1e-9);
    for (int s = 0; s < 1000; ++s) {
      VectorXd a(k);
      for (auto& x : a) x = u(rng);
      CHECK(n(b.basis * a) >= a.cwiseAbs().maxCoeff() - 1e-9);
    }
  }
  CHECK(code_of([] { auerbach_basis(NormSpec::lp(7, 2)); }) == Errc::BadArity);
}

TEST_CASE("amalgam on the diagonal example") {
  const NormSpec li = NormSpec::lp(2, kInf);
  MatrixXd t(2, 2);
  t << 1, 0, 0, 1 / 1.1;
  auto a = amalgam_norm(li, li, t);
  CHECK(a.t_norm.value == doctest::Approx(1));
  CHECK(a.t_inv.value == doctest::Approx(1.1));
  auto c = check_amalgam(a, t);
  CHECK(c.i_distortion <= 1e-8);
  CHECK(c.j_distortion <= 1e-8);
  CHECK(c.defect.value <= 0.1 + 1e-6);
  REQUIRE(c.gap);
  CHECK(c.gap->value <= 0.1 + 1e-6);

  auto iso = amalgam_norm(li, li, MatrixXd::Identity(2, 2));
  CHECK(check_amalgam(iso, MatrixXd::Identity(2, 2)).defect.value <= 1e-8);
  CHECK(code_of([&] { amalgam_norm(li, li, MatrixXd::Zero(2, 2)); }) == Errc::NotInjective);
  CHECK(code_of([&] { amalgam_norm(li, NormSpec::lp(2, 2), t); }) == Errc::DualNotComputable);
}

TEST_CASE("amalgam properties on random operators") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int kf = 1 + trial % 3, kg = kf + (trial / 3) % 2;
    NormSpec f = kf == 1 ? NormSpec::lp(1, 1) : random_polyhedral(kf, rng);
    NormSpec g = trial % 2 ? NormSpec::lp(static_cast<std::size_t>(kg), kInf) : random_polyhedral(kg, rng);
    MatrixXd t = gaussian(kg, kf, rng);
    t /= op_norm(t, f, g).value;
    auto a = amalgam_norm(f, g, t);
    auto c = check_amalgam(a, t);
    CHECK(c.i_distortion <= 1e-8);
    CHECK(c.j_distortion <= 1e-8);
    CHECK(c.defect.value <= c.defect_bound + 1e-6);
    if (kf == kg) {
      REQUIRE(c.gap);
      CHECK(c.gap->value <= *c.gap_bound + 1e-6);
    }
  }
}

TEST_CASE("amalgam with a Euclidean source uses a net") {
  MatrixXd t = MatrixXd::Identity(2, 2);
  auto a = amalgam_norm(NormSpec::lp(2, 2), NormSpec::lp(2, kInf), t, {32, 1});
  CHECK(a.net_resolution > 0);
  CHECK(check_amalgam(a, t).j_distortion <= 1e-8);
}

TEST_CASE("pairs of pushforward norms") {
  MatrixXd incl = MatrixXd::Zero(3, 2);
  incl(0, 0) = incl(1, 1) = 1;
  const NormSpec l2 = NormSpec::lp(3, 2), k2 = NormSpec::lp(2, 2);
  auto r = nu2_tools(LinOp{incl, k2, l2}, LinOp{incl, k2, l2}, 1.0);
  CHECK(r.omega.value <= 1e-12);
  CHECK(r.member);
  CHECK(r.norm.value == doctest::Approx(1));
  CHECK(r.inv_norm.value == doctest::Approx(1));
  auto s = nu2_tools(LinOp{incl, k2, l2}, LinOp{2 * incl, k2, l2}, 2.0);
  CHECK(s.norm.value == doctest::Approx(2));
  CHECK(*s.norm_direct == doctest::Approx(2));
  CHECK(s.member);
  CHECK_FALSE(nu2_tools(LinOp{incl, k2, l2}, LinOp{2 * incl, k2, l2}, 1.5).member);
  CHECK(code_of([&] { nu2_tools(LinOp{incl, k2, l2}, LinOp{MatrixXd::Zero(3, 2), k2, l2}, 2); }) ==
        Errc::RankMismatch);

  std::mt19937_64 rng(5);
  const NormSpec li = NormSpec::lp(4, kInf);
  for (int trial = 0; trial < 40; ++trial) {
    LinOp a{gaussian(4, 2, rng), k2, li}, b{gaussian(4, 2, rng), k2, li};
    auto probe = nu2_tools(a, b, 1.0);
    const double lambda = std::exp(probe.omega.value);
    auto q = nu2_tools(a, b, lambda);
    CHECK(q.member);
    CHECK(q.bounds_hold);
    CHECK(q.norm.value == doctest::Approx(*q.norm_direct).epsilon(1e-9));
    CHECK(q.inv_norm.value == doctest::Approx(*q.inv_norm_direct).epsilon(1e-7));
  }
}

TEST_CASE("basis matching map") {
  std::mt19937_64 rng(17);
  const NormSpec li = NormSpec::lp(4, kInf);
  int applicable = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + trial % 2;
    MatrixXd v = gaussian(4, k, rng);
    MatrixXd w = v + 0.01 * (1 + trial % 5) * gaussian(4, k, rng);
    auto b = basis_matching_map(SubspaceRep(li, v), SubspaceRep(li, w));
    applicable += b.applicable;
    CHECK(b.holds);
  }
  CHECK(applicable > 10);
}

TEST_CASE("diameter bound consistency") {
  std::mt19937_64 rng(23);
  const NormSpec li = NormSpec::lp(4, kInf), k2 = NormSpec::lp(2, 2);
  for (int trial = 0; trial < 6; ++trial) {
    LinOp a0{gaussian(4, 2, rng), k2, li}, a1{gaussian(4, 2, rng), k2, li};
    LinOp b0{gaussian(4, 2, rng), k2, li}, b1{gaussian(4, 2, rng), k2, li};
    auto pa = nu2_tools(a0, a1, 1), pb = nu2_tools(b0, b1, 1);
    const double lambda = std::exp(std::max(pa.omega.value, pb.omega.value));
    auto c = diam_check(pa.pair, pb.pair, lambda);
    CHECK(c.a_member);
    CHECK(c.b_member);
    CHECK(c.holds);
  }
}
