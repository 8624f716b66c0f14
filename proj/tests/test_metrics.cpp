#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ramsey/metrics.hpp"

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

MatrixXd random_points(int count, int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXd v(count, dim);
  for (auto& x : v.reshaped()) x = g(rng);
  return v;
}

NormSpec random_polyhedral(int dim, std::mt19937_64& rng) {
  while (true) {
    MatrixXd v = random_points(dim + 2, dim, rng);
    if (numerical_rank(v) == static_cast<std::size_t>(dim)) return NormSpec::from_vertices(v);
  }
}

MatrixXd line(double theta) { return (MatrixXd(2, 1) << std::cos(theta), std::sin(theta)).finished(); }

}  // namespace

TEST_CASE("omega exact values") {
  const auto l1 = NormSpec::lp(2, 1), l2 = NormSpec::lp(2, 2), li = NormSpec::lp(2, kInf);
  auto a = omega(l1, li);
  CHECK(std::abs(a.value - std::log(2.0)) <= 1e-12);
  CHECK(a.certificate == Certificate::exact);
  auto b = omega(l2, li);
  CHECK(std::abs(b.value - std::log(std::sqrt(2.0))) <= 1e-12);
  CHECK(b.certificate == Certificate::exact);
  CHECK(omega(l1, l1).value == 0);
  CHECK(code_of([] { omega(NormSpec::lp(2, 1), NormSpec::lp(3, 1)); }) == Errc::DimensionMismatch);
  auto c = omega(NormSpec::lp(2, 3), l2);
  CHECK(c.certificate == Certificate::lower);
  // |Id|_{2->3} = 1 and |Id|_{3->2} = 2^{1/2-1/3}.
  CHECK(c.value == doctest::Approx(std::log(std::pow(2.0, 1.0 / 6))).epsilon(1e-6));
}

TEST_CASE("omega is a metric on random polyhedral norms") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const int d = 2 + t % 2;
    NormSpec a = random_polyhedral(d, rng), b = random_polyhedral(d, rng), c = random_polyhedral(d, rng);
    const double ab = omega(a, b).value, ba = omega(b, a).value, bc = omega(b, c).value, ac = omega(a, c).value;
    CHECK(ab == ba);
    CHECK(ac <= ab + bc + 1e-8);
    CHECK(omega(a, a).value <= 1e-12);
  }
}

TEST_CASE("Banach-Mazur upper bounds") {
  auto r = bm_upper(NormSpec::lp(2, 1), NormSpec::lp(2, kInf));
  CHECK(r.value.value <= 1e-6);
  CHECK(r.value.certificate == Certificate::upper);
  auto s = bm_upper(NormSpec::lp(2, 2), NormSpec::lp(2, kInf));
  CHECK(s.value.value <= std::log(std::sqrt(2.0)) + 1e-6);
  CHECK(s.value.value >= std::log(std::sqrt(2.0)) - 1e-6);
  auto one = bm_upper(NormSpec::lp(1, 3), NormSpec::lp(1, 1));
  CHECK(one.value.value == 0);
  CHECK(one.value.certificate == Certificate::exact);
  // The returned map is balanced and realizes the bound.
  const double a = op_norm(r.map, NormSpec::lp(2, 1), NormSpec::lp(2, kInf)).value;
  const double b = op_norm(r.map.inverse(), NormSpec::lp(2, kInf), NormSpec::lp(2, 1)).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
  CHECK(std::log(a * b) == doctest::Approx(r.value.value).epsilon(1e-9));
  std::mt19937_64 rng(2);
  NormSpec p = random_polyhedral(2, rng), q = random_polyhedral(2, rng);
  CHECK(bm_upper(p, q).value.value <= omega(p, q).value * 2 + 1e-9);
}

TEST_CASE("gap metric") {
  const auto l2 = NormSpec::lp(2, 2);
  for (int i = 0; i < 20; ++i) {
    const double theta = (i + 1) * std::numbers::pi / 42;
    SubspaceRep u(l2, line(0)), w(l2, line(theta));
    auto g = gap_metric(u, w);
    CHECK(std::abs(g.value - std::sin(theta)) <= 1e-6);
    CHECK(g.certificate == Certificate::exact);
    CHECK(std::abs(gap_sampled(u, w).value - std::sin(theta)) <= 1e-4);
  }
  const auto l1 = NormSpec::lp(2, 1);
  SubspaceRep e0(l1, line(0)), e1(l1, line(std::numbers::pi / 2));
  auto g = gap_metric(e0, e1);
  CHECK(g.value == doctest::Approx(1).epsilon(1e-12));
  CHECK(g.certificate == Certificate::exact);
  CHECK(gap_metric(e0, e0).value <= 1e-12);
  CHECK(code_of([&] { gap_metric(e0, SubspaceRep(l2, line(1))); }) == Errc::AmbientMismatch);
  CHECK(code_of([&] { gap_metric(e0, SubspaceRep(l1, MatrixXd::Identity(2, 2))); }) == Errc::DimensionMismatch);
}

TEST_CASE("gap LP agrees with sampling in l_inf^3 and l_1^3") {
  std::mt19937_64 rng(6);
  for (double p : {1.0, kInf}) {
    for (int t = 0; t < 6; ++t) {
      const NormSpec amb = NormSpec::lp(3, p);
      SubspaceRep u(amb, random_points(3, 2, rng)), w(amb, random_points(3, 2, rng));
      auto exact = gap_metric(u, w);
      auto est = gap_sampled(u, w, {2000, 3});
      CHECK(est.value <= exact.value + 1e-7);
      CHECK(est.value >= exact.value - 0.05);
    }
  }
}

TEST_CASE("alpha") {
  const auto l1 = NormSpec::lp(2, 1), li = NormSpec::lp(2, kInf);
  auto a = alpha_extrinsic(li, li, l1);
  CHECK(std::abs(a.value - 1) <= 1e-8);
  CHECK(a.certificate == Certificate::exact);
  const double w = omega(li, l1).value;
  CHECK(w / 2 <= a.value);
  CHECK(a.value <= 2 * w);
  CHECK(alpha_extrinsic(li, l1, l1).value <= 1e-12);
  CHECK(alpha_sampled(li, li, l1, {4000, 1}).value <= a.value + 1e-12);
  CHECK(alpha_sampled(li, li, l1, {4000, 1}).value >= a.value - 1e-3);
}

TEST_CASE("alpha LP agrees with the support-function identity") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 2;
    NormSpec x = random_polyhedral(d, rng), m = random_polyhedral(d, rng), n = random_polyhedral(d, rng);
    auto exact = alpha_extrinsic(x, m, n);
    auto lo = alpha_sampled(x, m, n, {20000, 5});
    CHECK(lo.value <= exact.value + 1e-9);
    CHECK(lo.value >= exact.value * 0.97 - 1e-9);
  }
}

TEST_CASE("alpha sits between scaled omega near X") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  for (double lambda : {1.5, 2.0}) {
    for (int t = 0; t < 20; ++t) {
      const int d = 2 + t % 2;
      NormSpec x = random_polyhedral(d, rng);
      auto scaled = [&] {
        MatrixXd v = x.polytope()->vertices;
        for (Eigen::Index i = 0; i < v.rows(); ++i) v.row(i) *= std::pow(lambda, u(rng) - 0.5);
        return NormSpec::from_vertices(v);
      };
      NormSpec m = scaled(), n = scaled();
      REQUIRE(omega(x, m).value <= std::log(lambda) + 1e-12);
      const double w = omega(m, n).value, a = alpha_extrinsic(x, m, n).value;
      CHECK(w / lambda <= a + 1e-8);
      CHECK(a <= lambda * w + 1e-8);
    }
  }
}

TEST_CASE("oscillation") {
  const auto l2 = NormSpec::lp(2, 2);
  std::vector<VectorXd> pts{line(0), 2 * line(0)};
  CHECK(oscillation([&](const VectorXd& x) { return l2(x); }, pts, l2) == doctest::Approx(1));
  CHECK(oscillation([](const VectorXd&) { return 3.0; }, pts, l2) == 0);
  CHECK(code_of([&] { oscillation([&](const VectorXd& x) { return 2 * l2(x); }, pts, l2); }) ==
        Errc::LipschitzViolation);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::uint32_t> c(1 + t % 6);
    for (auto& v : c) v = static_cast<std::uint32_t>(rng() % (1 + t % 2));
    const bool mono = std::all_of(c.begin(), c.end(), [&](auto v) { return v == c[0]; });
    CHECK((oscillation(c) == 0) == mono);
  }
}

TEST_CASE("actions on norms") {
  MatrixXd d(2, 2);
  d << 2, 1, 0, 1;
  const auto l1 = NormSpec::lp(2, 1);
  NormSpec a = act_primal(l1, d);
  VectorXd x(2);
  x << 0.3, -0.7;
  CHECK(a(d * x) == doctest::Approx(l1(x)));
  NormSpec b = act_dual(l1, d);
  CHECK(b(x) == doctest::Approx(l1(d.transpose() * x)));
  CHECK(code_of([&] { act_primal(l1, MatrixXd::Zero(2, 2)); }) == Errc::NotInvertible);
}
