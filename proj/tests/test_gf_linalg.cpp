#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ramsey/combinat.hpp"
#include "ramsey/gf_linalg.hpp"
#include "test_util.hpp"

using namespace ramsey;
using namespace ramsey::gf;

namespace {

const PrimeField F2(2), F3(3), F5(5);

FFMatrix f5_example() {
  return FFMatrix::from_rows(F5, {{1, 2, 0, 3, 0, 1}, {0, 0, 1, 4, 0, 2}, {0, 0, 0, 0, 1, 3}});
}

FFMatrix f5_example_right_inverse() {
  return FFMatrix::from_rows(F5, {{1, 0, 0}, {0, 0, 0}, {0, 1, 0}, {0, 0, 0}, {0, 0, 1}, {0, 0, 0}});
}

// Size of the row space by enumerating every combination of rows.
std::size_t row_space_size(const FFMatrix& a) {
  std::set<std::vector<Residue>> span;
  const std::uint32_t p = a.field().order();
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < a.rows(); ++i) combos *= p;
  for (std::uint64_t c = 0; c < combos; ++c) {
    std::vector<Residue> v(a.cols(), 0);
    std::uint64_t x = c;
    for (std::size_t i = 0; i < a.rows(); ++i, x /= p)
      for (std::size_t j = 0; j < a.cols(); ++j)
        v[j] = a.field().add(v[j], a.field().mul(static_cast<Residue>(x % p), a(i, j)));
    span.insert(v);
  }
  return span.size();
}

}  // namespace

TEST_CASE("prime field construction and inverses") {
  CHECK_THROWS_AS(PrimeField(4), Error);
  CHECK_THROWS_AS(PrimeField(1), Error);
  CHECK_THROWS_AS(PrimeField(65537), Error);  // prime but above 2^16
  PrimeField f(65521);
  for (Residue a : {1u, 2u, 777u, 65520u}) CHECK(f.mul(a, f.inv(a)) == 1);
  CHECK_THROWS_AS(F5.inv(0), Error);
  CHECK(F5.reduce(-3) == 2);
}

TEST_CASE("rank_and_rref on the F_5 example") {
  FFMatrix a = f5_example();
  CHECK(is_rref(a));
  RrefResult r = rank_and_rref(a);
  CHECK(r.rank == 3);
  CHECK(r.reduced == a);
  CHECK(r.transform.matrix() == FFMatrix::identity(F5, 3));
  CHECK(right_inverse_of_rref(a) == f5_example_right_inverse());
  CHECK(a * right_inverse_of_rref(a) == FFMatrix::identity(F5, 3));
}

TEST_CASE("rank_and_rref identity and transform relation") {
  RrefResult r = rank_and_rref(FFMatrix::identity(F2, 3));
  CHECK(r.reduced == FFMatrix::identity(F2, 3));
  CHECK(r.transform.matrix() == FFMatrix::identity(F2, 3));
  CHECK(r.rank == 3);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    FFMatrix a = testutil::random_matrix(F2, 4, 4, rng);
    RrefResult rr = rank_and_rref(a);
    CHECK(rr.transform * a == rr.reduced);
    CHECK(is_rref(rr.reduced));
    std::size_t size = row_space_size(a);
    CHECK(size == (std::size_t{1} << rr.rank));
  }
}

TEST_CASE("rref is idempotent and a row-equivalence invariant") {
  std::mt19937_64 rng(11);
  for (PrimeField f : {F2, F3, F5}) {
    for (int t = 0; t < 100; ++t) {
      FFMatrix a = testutil::random_matrix(f, 3 + t % 3, 2 + t % 5, rng);
      FFMatrix r = rank_and_rref(a).reduced;
      CHECK(rank_and_rref(r).reduced == r);
      FFMatrix g = testutil::random_full_rank(f, a.rows(), a.rows(), rng);
      CHECK(rank_and_rref(g * a).reduced == r);
    }
  }
}

TEST_CASE("is_rref rejects malformed echelon shapes") {
  CHECK_FALSE(is_rref(FFMatrix::from_rows(F3, {{2, 0}, {0, 1}})));      // leading 2
  CHECK_FALSE(is_rref(FFMatrix::from_rows(F3, {{0, 1}, {1, 0}})));      // decreasing leads
  CHECK_FALSE(is_rref(FFMatrix::from_rows(F3, {{1, 1}, {0, 1}})));      // pivot column not unit
  CHECK_FALSE(is_rref(FFMatrix::from_rows(F3, {{0, 0}, {1, 0}})));      // zero row on top
  CHECK(is_rref(FFMatrix::from_rows(F3, {{1, 2}, {0, 0}})));
  CHECK(is_rref(FFMatrix(F3, 2, 3)));
}

TEST_CASE("rcef_decompose on the transposed F_5 example") {
  FFMatrix a = f5_example().transpose();
  CHECK(is_rcef(a));
  RcefResult r = rcef_decompose(a);
  CHECK(r.tau.matrix() == FFMatrix::identity(F5, 3));
  CHECK(r.reduced == a);
  CHECK(r.right_inverse == f5_example_right_inverse());
  CHECK(r.reduced.transpose() * r.right_inverse == FFMatrix::identity(F5, 3));
}

TEST_CASE("rcef_decompose small F_2 case agrees with GL exhaustion") {
  FFMatrix a = FFMatrix::from_rows(F2, {{1, 1}, {1, 0}, {0, 1}});
  RcefResult r = rcef_decompose(a);
  CHECK(r.reduced == FFMatrix::from_rows(F2, {{1, 0}, {0, 1}, {1, 1}}));
  CHECK(r.tau.matrix() == FFMatrix::from_rows(F2, {{0, 1}, {1, 1}}));

  std::vector<GLMatrix> hits;
  for (const GLMatrix& g : enumerate_gl(F2, 2))
    if (is_rcef(a * g)) hits.push_back(g);
  REQUIRE(hits.size() == 1);
  CHECK(hits.front() == r.tau);
}

TEST_CASE("tau is unique: exhaustive over GL for k <= 2, p <= 3") {
  for (PrimeField f : {F2, F3}) {
    for (std::size_t k = 1; k <= 2; ++k) {
      auto gl = enumerate_gl(f, k);
      CHECK(gl.size() == gl_order(f.order(), k));
      for (std::size_t n = k; n <= 3; ++n) {
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < n * k; ++i) total *= f.order();
        for (Code c = 0; c < total; ++c) {
          FFMatrix a = mat_decode(c, n, k, f);
          if (rank(a) != k) continue;
          int count = 0;
          for (const GLMatrix& g : gl)
            if (is_rcef(a * g)) {
              ++count;
              CHECK(g == tau(a));
            }
          CHECK(count == 1);
        }
      }
    }
  }
}

TEST_CASE("rcef_decompose rejects rank deficiency") {
  FFMatrix a = FFMatrix::from_rows(F3, {{1, 2}, {2, 1}});  // second column = 2 * first
  CHECK_THROWS_AS(rcef_decompose(a), Error);
  try {
    rcef_decompose(a);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RankDeficient);
  }
  FFMatrix a_rcef = FFMatrix::from_rows(F3, {{1, 0}, {0, 1}, {2, 2}});
  CHECK(tau(a_rcef).matrix() == FFMatrix::identity(F3, 2));
}

TEST_CASE("echelon corollaries: products and tau invariance") {
  std::mt19937_64 rng(5);
  for (PrimeField f : {F2, F3, F5}) {
    for (int t = 0; t < 150; ++t) {
      std::size_t k = 1 + t % 3, m = k + t % 3, n = m + t % 2;
      FFMatrix r = rcef_decompose(testutil::random_full_rank(f, n, m, rng)).reduced;
      FFMatrix b = testutil::random_full_rank(f, m, k, rng);
      CHECK(tau(r * b) == tau(b));
      FFMatrix b_rcef = rcef_decompose(b).reduced;
      CHECK(is_rcef(r * b_rcef));
      CHECK(is_rref((r * b_rcef).transpose()));
    }
  }
}

TEST_CASE("full_rank_decomposition") {
  FFMatrix inv = FFMatrix::from_rows(F3, {{1, 2}, {0, 1}});
  FullRankDecomposition d = full_rank_decomposition(inv);
  CHECK(d.left == inv);
  CHECK(d.right == FFMatrix::identity(F3, 2));

  FFMatrix ones = FFMatrix::from_rows(F2, {{1, 1}, {1, 1}});
  d = full_rank_decomposition(ones);
  CHECK(d.left == FFMatrix::from_rows(F2, {{1}, {1}}));
  CHECK(d.right == FFMatrix::from_rows(F2, {{1, 1}}));
  CHECK(d.left * d.right == ones);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    FFMatrix a = testutil::random_rank(F3, 4, 4, 2, rng);
    d = full_rank_decomposition(a);
    CHECK(d.left.cols() == 2);
    CHECK(rank(d.left) == 2);
    CHECK(rank(d.right) == 2);
    CHECK(d.left * d.right == a);
  }
  CHECK_THROWS_AS(full_rank_decomposition(FFMatrix(F2, 2, 3)), Error);
}

TEST_CASE("tau2 on invertible input is the input") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    FFMatrix a = testutil::random_full_rank(F5, 3, 3, rng);
    CHECK(tau2(a).matrix() == a);
  }
}

TEST_CASE("tau2 agrees with brute force over RCEF triples") {
  // All rank-1 2x2 matrices over F_2 against every (A0, Gamma, A1) triple.
  std::vector<FFMatrix> e21;
  for (Code c = 0; c < 4; ++c) {
    FFMatrix col = mat_decode(c, 2, 1, F2);
    if (rank(col) == 1 && is_rcef(col)) e21.push_back(col);
  }
  REQUIRE(e21.size() == 3);
  auto gl1 = enumerate_gl(F2, 1);
  for (Code c = 0; c < 16; ++c) {
    FFMatrix a = mat_decode(c, 2, 2, F2);
    if (rank(a) != 1) continue;
    std::set<Code> gammas;
    for (const auto& a0 : e21)
      for (const auto& g : gl1)
        for (const auto& a1 : e21)
          if (a0 * g.matrix() * a1.transpose() == a) gammas.insert(mat_encode(g.matrix()));
    REQUIRE(gammas.size() == 1);
    CHECK(mat_encode(tau2(a).matrix()) == *gammas.begin());
  }
}

TEST_CASE("tau2 is independent of the chosen full rank decomposition") {
  std::mt19937_64 rng(23);
  FFMatrix a = testutil::random_rank(F3, 4, 4, 2, rng);
  GLMatrix expected = tau2(a);
  FullRankDecomposition base = full_rank_decomposition(a);
  for (int t = 0; t < 10; ++t) {
    GLMatrix g(testutil::random_full_rank(F3, 2, 2, rng));
    FullRankDecomposition d{base.left * g.matrix(), g.inverse().matrix() * base.right};
    CHECK(d.left * d.right == a);
    CHECK(tau2_from(d) == expected);
  }
  CHECK_THROWS_AS(tau2(FFMatrix(F3, 3, 3)), Error);
  CHECK_THROWS_AS(tau2(FFMatrix(F3, 2, 3)), Error);
}

TEST_CASE("tau2 reconstructs A from RCEF factors") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 40; ++t) {
    FFMatrix a = testutil::random_rank(F5, 4, 4, 1 + t % 3, rng);
    FullRankDecomposition d = full_rank_decomposition(a);
    FFMatrix a0 = rcef_decompose(d.left).reduced;
    FFMatrix a1 = rcef_decompose(d.right.transpose()).reduced;
    CHECK(a0 * tau2(a).matrix() * a1.transpose() == a);
  }
}

TEST_CASE("mat_encode and mat_decode") {
  CHECK(mat_encode(FFMatrix(F5, 3, 2)) == 0);
  CHECK(mat_encode(FFMatrix::identity(F2, 2)) == 9);
  CHECK(mat_decode(9, 2, 2, F2) == FFMatrix::identity(F2, 2));
  CHECK_THROWS_AS(mat_encode(FFMatrix(F2, 8, 9)), Error);  // 2^72
  CHECK(encodable(F2, 8, 8));
  CHECK_FALSE(encodable(F3, 8, 8));
  CHECK_THROWS_AS(mat_decode(16, 2, 2, F2), Error);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    PrimeField f = t % 3 == 0 ? F2 : (t % 3 == 1 ? F3 : F5);
    FFMatrix a = testutil::random_matrix(f, 1 + t % 4, 1 + (t / 4) % 4, rng);
    CHECK(mat_decode(mat_encode(a), a.rows(), a.cols(), f) == a);
  }
}

TEST_CASE("gl_order matches the product formula and enumeration") {
  CHECK(gl_order(2, 2) == 6);
  CHECK(gl_order(2, 3) == 168);
  CHECK(gl_order(3, 2) == 48);
  CHECK(enumerate_gl(F2, 2).size() == 6);
  CHECK(enumerate_gl(F3, 2).size() == 48);
}

TEST_CASE("matrix text format") {
  std::istringstream in("5 3 6\n1 2 0 3 0 1\n0 0 1 4 0 2\n0 0 0 0 1 3\n");
  CHECK(read_matrix(in) == f5_example());
  std::ostringstream out;
  write_matrix(out, f5_example());
  std::istringstream back(out.str());
  CHECK(read_matrix(back) == f5_example());

  std::istringstream bad("3 1 2\n1 3\n");
  CHECK_THROWS_AS(read_matrix(bad), Error);
  std::istringstream neg("3 1 2\n1 -1\n");
  CHECK_THROWS_AS(read_matrix(neg), Error);
  std::istringstream short_body("2 2 2\n1 0 1\n");
  CHECK_THROWS_AS(read_matrix(short_body), Error);
  std::istringstream composite("4 1 1\n1\n");
  CHECK_THROWS_AS(read_matrix(composite), Error);
}
