#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ramsey/combinat.hpp"
#include "test_util.hpp"

using namespace ramsey;
using namespace ramsey::combinat;
using gf::Code;

namespace {

const PrimeField F2(2), F3(3), F5(5);

// First x in antilex order with A x = w, by scanning F^n.
std::vector<Residue> brute_min_preimage(const FFMatrix& a, const std::vector<Residue>& w) {
  AntilexOrder dom(a.field(), a.cols());
  for (std::uint64_t r = 0; r < dom.size(); ++r) {
    std::vector<Residue> x = dom.element(r);
    if (a * std::span<const Residue>(x) == w) return x;
  }
  return {};
}

FFMatrix random_rref(PrimeField f, std::size_t k, std::size_t n, std::mt19937_64& rng) {
  return gf::rank_and_rref(testutil::random_full_rank(f, k, n, rng)).reduced;
}

std::uint64_t factorial(std::uint64_t k) { return k <= 1 ? 1 : k * factorial(k - 1); }

}  // namespace

TEST_CASE("antilex order unfolds as expected") {
  std::vector<Residue> a{0, 0}, b{1, 0}, c{0, 1}, d{1, 1};
  CHECK(antilex_cmp(a, a) == std::strong_ordering::equal);
  CHECK(antilex_cmp(a, b) == std::strong_ordering::less);
  CHECK(antilex_cmp(b, c) == std::strong_ordering::less);
  CHECK(antilex_cmp(c, d) == std::strong_ordering::less);
  CHECK(antilex_cmp(d, b) == std::strong_ordering::greater);

  AntilexOrder o3(F3, 2);
  CHECK(o3.element(0) == std::vector<Residue>{0, 0});
  CHECK(o3.element(1) == std::vector<Residue>{1, 0});
  CHECK(o3.element(2) == std::vector<Residue>{2, 0});
  CHECK(o3.element(3) == std::vector<Residue>{0, 1});

  std::vector<Residue> short_v{1};
  CHECK_THROWS_AS(antilex_cmp(short_v, a), Error);
}

TEST_CASE("antilex rank order agrees with antilex_cmp") {
  for (PrimeField f : {F2, F3}) {
    AntilexOrder o(f, 3);
    for (std::uint64_t r = 0; r < o.size(); ++r) {
      CHECK(o.rank_of(o.element(r)) == r);
      for (std::uint64_t s = 0; s < o.size(); ++s)
        CHECK((antilex_cmp(o.element(r), o.element(s)) == std::strong_ordering::less) == (r < s));
    }
    // u_0 is the second element.
    CHECK(o.element(1) == std::vector<Residue>{1, 0, 0});
  }
}

TEST_CASE("is_rigid_surjection") {
  std::vector<std::uint64_t> id{0, 1, 2, 3};
  CHECK(is_rigid_surjection(id, 4));
  std::vector<std::uint64_t> bad{1, 0, 1};
  CHECK_FALSE(is_rigid_surjection(bad, 2));
  std::vector<std::uint64_t> not_onto{0, 0, 1};
  CHECK_FALSE(is_rigid_surjection(not_onto, 3));
  CHECK_THROWS_AS(RigidSurjection(bad, 2), Error);

  FFMatrix a = FFMatrix::from_rows(F5, {{1, 2, 0, 3, 0, 1}, {0, 0, 1, 4, 0, 2}, {0, 0, 0, 0, 1, 3}});
  CHECK(is_rigid_surjection(linear_map_table(a), AntilexOrder(F5, 3).size()));
  FFMatrix swapped = FFMatrix::from_rows(F2, {{0, 1}, {1, 0}});
  CHECK_FALSE(is_rigid_surjection(linear_map_table(swapped), 4));
}

TEST_CASE("enumerate_epi counts and order") {
  CHECK(enumerate_epi(5, 1).size() == 1);
  auto e32 = enumerate_epi(3, 2);
  REQUIRE(e32.size() == 3);
  CHECK(std::vector<std::uint64_t>(e32[0].values().begin(), e32[0].values().end()) ==
        std::vector<std::uint64_t>{0, 0, 1});
  CHECK(std::vector<std::uint64_t>(e32[1].values().begin(), e32[1].values().end()) ==
        std::vector<std::uint64_t>{0, 1, 0});
  CHECK(std::vector<std::uint64_t>(e32[2].values().begin(), e32[2].values().end()) ==
        std::vector<std::uint64_t>{0, 1, 1});
  CHECK(enumerate_epi(4, 3).size() == 6);
  CHECK_THROWS_AS(enumerate_epi(2, 3), Error);

  // Brute force: all maps n -> s filtered by rigidity.
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::uint64_t s = 1; s <= n; ++s) {
      std::size_t count = 0;
      std::vector<std::uint64_t> v(n, 0);
      while (true) {
        if (is_rigid_surjection(v, s)) ++count;
        std::size_t pos = n;
        while (pos-- > 0) {
          if (++v[pos] < s) break;
          v[pos] = 0;
        }
        if (pos == static_cast<std::size_t>(-1)) break;
      }
      auto all = enumerate_epi(n, s);
      CHECK(all.size() == count);
      for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(std::lexicographical_compare(all[i - 1].values().begin(), all[i - 1].values().end(),
                                           all[i].values().begin(), all[i].values().end()));
    }
}

TEST_CASE("rigid surjections compose") {
  RigidSurjection g({0, 1, 1, 2, 0}, 3);
  RigidSurjection s({0, 1, 1}, 2);
  RigidSurjection c = s.after(g);
  CHECK(std::vector<std::uint64_t>(c.values().begin(), c.values().end()) ==
        std::vector<std::uint64_t>{0, 1, 1, 1, 0});
  CHECK_THROWS_AS(g.after(s), Error);
}

TEST_CASE("phi produces full rank RCEF matrices") {
  AntilexOrder f21(F2, 1);
  auto epis = enumerate_epi(3, f21.size());
  REQUIRE(epis.size() == 3);
  for (const auto& f : epis) {
    FFMatrix m = phi(f, f21);
    CHECK(m.rows() == 3);
    CHECK(gf::is_rcef(m));
    CHECK(gf::rank(m) == 1);
    CHECK(phi_inverse(m) == f);
  }

  std::mt19937_64 rng(99);
  AntilexOrder f32(F3, 2);
  for (int t = 0; t < 200; ++t) {
    // Random rigid surjection 8 -> F_3^2 by random growth then rejection.
    std::vector<std::uint64_t> v(8);
    std::uint64_t seen = 0;
    for (auto& x : v) {
      std::uniform_int_distribution<std::uint64_t> d(0, std::min<std::uint64_t>(seen, 8));
      x = d(rng);
      if (x == seen) ++seen;
    }
    if (!is_rigid_surjection(v, f32.size())) continue;
    RigidSurjection f(v, f32.size());
    FFMatrix m = phi(f, f32);
    CHECK(gf::is_rcef(m));
    CHECK(gf::rank(m) == 2);
    CHECK(phi_inverse(m) == f);
  }
  // Exhaustive rigid surjections onto F_3^2 for n = 9 as well.
  for (const auto& f : enumerate_epi(9, f32.size())) CHECK(gf::is_rcef(phi(f, f32)));
}

TEST_CASE("min_preimage matches the F_5 example and brute force") {
  FFMatrix a = FFMatrix::from_rows(F5, {{1, 2, 0, 3, 0, 1}, {0, 0, 1, 4, 0, 2}, {0, 0, 0, 0, 1, 3}});
  std::vector<Residue> w{1, 2, 3};
  CHECK(min_preimage(a, w) == std::vector<Residue>{1, 0, 2, 0, 3, 0});
  CHECK(brute_min_preimage(a, w) == std::vector<Residue>{1, 0, 2, 0, 3, 0});
  std::vector<Residue> zero{0, 0, 0};
  CHECK(min_preimage(a, zero) == std::vector<Residue>(6, 0));

  FFMatrix b = FFMatrix::from_rows(F2, {{1, 1, 0, 1}, {0, 0, 1, 1}});
  REQUIRE(gf::is_rref(b));
  for (Residue w0 = 0; w0 < 2; ++w0)
    for (Residue w1 = 0; w1 < 2; ++w1) {
      std::vector<Residue> ww{w0, w1};
      CHECK(min_preimage(b, ww) == brute_min_preimage(b, ww));
    }

  FFMatrix not_rref = FFMatrix::from_rows(F2, {{0, 1}, {1, 0}});
  std::vector<Residue> w2{1, 0};
  CHECK_THROWS_AS(min_preimage(not_rref, w2), Error);
}

TEST_CASE("min_preimage equals the antilex minimum on sampled RREF matrices") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 60; ++t) {
    PrimeField f = t % 2 ? F3 : F2;
    std::size_t n = f.order() == 2 ? 4 + t % 9 : 3 + t % 5;
    std::size_t k = 1 + t % std::min<std::size_t>(3, n);
    FFMatrix a = random_rref(f, k, n, rng);
    std::vector<Residue> w = testutil::random_matrix(f, k, 1, rng).column(0);
    CHECK(min_preimage(a, w) == brute_min_preimage(a, w));
  }
}

TEST_CASE("RREF iff rigid surjection with all unit columns, exhaustively") {
  for (std::size_t k = 1; k <= 2; ++k)
    for (std::size_t n = k; n <= 4; ++n) {
      for (Code c = 0; c < (Code{1} << (k * n)); ++c) {
        FFMatrix a = gf::mat_decode(c, k, n, F2);
        if (gf::rank(a) != k) continue;
        bool rigid = is_rigid_surjection(linear_map_table(a), Code{1} << k);
        bool units = true;
        for (std::size_t i = 0; i < k; ++i) {
          bool found = false;
          for (std::size_t j = 0; j < n; ++j) {
            std::vector<Residue> col = a.column(j), u(k, 0);
            u[i] = 1;
            found = found || col == u;
          }
          units = units && found;
        }
        CHECK(gf::is_rref(a) == (rigid && units));
      }
    }
}

TEST_CASE("enumerate_partitions and coarsenings") {
  CHECK(enumerate_partitions(4, 2).size() == 7);
  auto discrete = enumerate_partitions(5, 5);
  REQUIRE(discrete.size() == 1);
  CHECK(discrete[0].block_count() == 5);
  CHECK(enumerate_partitions(5, 3).size() == 25);  // S(5,3)
  CHECK_THROWS_AS(enumerate_partitions(3, 0), Error);
  CHECK_THROWS_AS(enumerate_partitions(3, 4), Error);

  SetPartition d4 = enumerate_partitions(4, 4)[0];
  auto coarse = coarsenings(d4, 2);
  auto e24 = enumerate_partitions(4, 2);
  CHECK(coarse.size() == 7);
  auto key = [](const std::vector<SetPartition>& v) {
    std::set<std::vector<std::size_t>> s;
    for (const auto& p : v) s.insert(p.rgs());
    return s;
  };
  CHECK(key(coarse) == key(e24));

  SetPartition p(6, {{0, 3}, {1}, {2, 4, 5}});
  for (const auto& q : coarsenings(p, 2)) {
    CHECK(q.block_count() == 2);
    auto r = q.rgs();
    CHECK(r[0] == r[3]);
    CHECK(r[2] == r[4]);
    CHECK(r[4] == r[5]);
  }
  CHECK(coarsenings(p, 2).size() == 3);
  CHECK_THROWS_AS(SetPartition(3, {{0, 1}, {1, 2}}), Error);
  CHECK_THROWS_AS(SetPartition(3, {{0, 1}}), Error);
}

TEST_CASE("pi_factor") {
  BooleanMatrix oba = BooleanMatrix::from_assignment(std::vector<std::size_t>{0, 1, 0, 2}, 3);
  CHECK(oba.is_ordered());
  PiFactor f = pi_factor(oba);
  CHECK(f.sigma == std::vector<std::size_t>{0, 1, 2});
  CHECK(f.ordered == oba);

  BooleanMatrix swap(FFMatrix::from_rows(F2, {{0, 1}, {1, 0}}));
  f = pi_factor(swap);
  CHECK(f.sigma == std::vector<std::size_t>{1, 0});
  CHECK(f.ordered.matrix() == FFMatrix::identity(F2, 2));
  CHECK(f.ordered.matrix() * permutation_matrix(f.sigma) == swap.matrix());

  CHECK_THROWS_AS(BooleanMatrix(FFMatrix::from_rows(F2, {{1, 1}, {0, 1}})), Error);
  CHECK_THROWS_AS(BooleanMatrix(FFMatrix::from_rows(F2, {{1, 0}, {1, 0}})), Error);
}

TEST_CASE("pi_factor is a bijection M^ba <-> M^oba x S_k") {
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, n); ++k) {
      auto ba = enumerate_boolean(n, k, false);
      auto oba = enumerate_boolean(n, k, true);
      CHECK(ba.size() == oba.size() * factorial(k));
      std::set<std::pair<Code, std::vector<std::size_t>>> images;
      for (const auto& a : ba) {
        PiFactor f = pi_factor(a);
        CHECK(f.ordered.is_ordered());
        CHECK(f.ordered.matrix() * permutation_matrix(f.sigma) == a.matrix());
        images.emplace(gf::mat_encode(f.ordered.matrix()), f.sigma);
      }
      CHECK(images.size() == ba.size());
    }
}

TEST_CASE("canonical Boolean algebra order is total on P(k)") {
  for (std::uint64_t k = 1; k <= 5; ++k) {
    const std::uint64_t n = std::uint64_t{1} << k;
    for (std::uint64_t s = 0; s < n; ++s) {
      CHECK_FALSE(canonical_less(s, s));
      for (std::uint64_t t = 0; t < n; ++t) {
        if (s != t) CHECK(canonical_less(s, t) != canonical_less(t, s));
        for (std::uint64_t u = 0; u < n; ++u)
          if (canonical_less(s, t) && canonical_less(t, u)) CHECK(canonical_less(s, u));
      }
    }
  }
}

TEST_CASE("partition and rigid surjection text formats") {
  std::istringstream in("5 2\n0 2 4\n1 3\n");
  SetPartition p = read_partition(in);
  CHECK(p.rgs() == std::vector<std::size_t>{0, 1, 0, 1, 0});
  std::ostringstream out;
  write_partition(out, p);
  CHECK(out.str() == "5 2\n0 2 4\n1 3\n");

  std::istringstream rin("4 3\n0 1 0 2\n");
  RigidSurjection f = read_rigid_surjection(rin);
  CHECK(f.codomain_size() == 3);
  std::ostringstream rout;
  write_rigid_surjection(rout, f);
  CHECK(rout.str() == "4 3\n0 1 0 2\n");

  std::istringstream bad("3 2\n1 0 1\n");
  CHECK_THROWS_AS(read_rigid_surjection(bad), Error);
  std::istringstream overlap("3 2\n0 1\n1 2\n");
  CHECK_THROWS_AS(read_partition(overlap), Error);
}
