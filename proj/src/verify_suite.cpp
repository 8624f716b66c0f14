#include "ramsey/verify_suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <thread>

#include "ramsey/combinat.hpp"

namespace ramsey::verify {

namespace {

using gf::FFMatrix;
using gf::PrimeField;
using gf::Residue;
using metrics::MatrixXd;
using metrics::NormSpec;
using metrics::VectorXd;
using metrics::kInf;
using Eigen::Index;

class Ctx {
 public:
  Ctx(std::uint64_t seed, std::uint64_t trials) : rng(seed), trials_(trials) {}

  std::mt19937_64 rng;

  std::uint64_t trials() const { return trials_; }

  /// margin >= 0 passes.
  void record(double margin) {
    ++done_;
    if (!(margin >= 0)) ++failures_;
    if (std::isnan(margin)) margin = -1;
    worst_ = std::min(worst_, margin);
  }
  void record(bool ok) { record(ok ? 0.0 : -1.0); }

  std::uint64_t done() const { return done_; }
  std::uint64_t failures() const { return failures_; }
  double worst() const { return done_ == 0 ? 0.0 : worst_; }

 private:
  std::uint64_t trials_;
  std::uint64_t done_ = 0;
  std::uint64_t failures_ = 0;
  double worst_ = std::numeric_limits<double>::infinity();
};

struct CheckDef {
  std::string suite;
  std::string name;
  std::string anchor;
  CheckKind kind;
  std::uint64_t default_trials;  // 0 for fixed or exhaustive checks
  std::function<void(Ctx&)> run;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// ---- random inputs ----

const PrimeField kF2(2), kF3(3), kF5(5);

PrimeField small_field(std::size_t i) {
  const PrimeField fields[] = {kF2, kF3, kF5};
  return fields[i % 3];
}

FFMatrix random_matrix(PrimeField f, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::uniform_int_distribution<Residue> d(0, f.order() - 1);
  FFMatrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, d(rng));
  return m;
}

FFMatrix random_full_rank(PrimeField f, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  while (true) {
    FFMatrix m = random_matrix(f, r, c, rng);
    if (gf::rank(m) == std::min(r, c)) return m;
  }
}

std::size_t uniform(std::size_t lo, std::size_t hi, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

MatrixXd gaussian(Index r, Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXd m(r, c);
  for (auto& x : m.reshaped()) x = g(rng);
  return m;
}

NormSpec random_polyhedral(int dim, std::mt19937_64& rng) {
  while (true) {
    MatrixXd v = gaussian(dim + 2, dim, rng);
    if (metrics::numerical_rank(v) == static_cast<std::size_t>(dim)) return NormSpec::from_vertices(v);
  }
}

MatrixXd injective(Index r, Index c, std::mt19937_64& rng) {
  while (true) {
    MatrixXd m = gaussian(r, c, rng);
    if (metrics::numerical_rank(m, 1e-6) == static_cast<std::size_t>(c)) return m;
  }
}

bool exact(const metrics::MetricValue& v) { return v.certificate == metrics::Certificate::exact; }

// ---- gf_invariants ----

FFMatrix f5_example() {
  return FFMatrix::from_rows(kF5, {{1, 2, 0, 3, 0, 1}, {0, 0, 1, 4, 0, 2}, {0, 0, 0, 0, 1, 3}});
}

void check_f5_example(Ctx& ctx) {
  const FFMatrix a = f5_example();
  const FFMatrix expected =
      FFMatrix::from_rows(kF5, {{1, 0, 0}, {0, 0, 0}, {0, 1, 0}, {0, 0, 0}, {0, 0, 1}, {0, 0, 0}});
  ctx.record(gf::is_rref(a));
  ctx.record(gf::right_inverse_of_rref(a) == expected);
  ctx.record(a * expected == FFMatrix::identity(kF5, 3));
  const std::vector<Residue> w{1, 2, 3};
  ctx.record(combinat::min_preimage(a, w) == std::vector<Residue>{1, 0, 2, 0, 3, 0});
  const gf::RcefResult rc = gf::rcef_decompose(a.transpose());
  ctx.record(rc.tau.matrix() == FFMatrix::identity(kF5, 3));
  ctx.record(rc.right_inverse == expected);
}

// RREF uniqueness, the transform relation, A tau(A) in RCEF, tau(R B) = tau(B)
// for R in RCEF, and A I_A = Id for full row rank RREF A.
void echelon_trial(Ctx& ctx, const FFMatrix& a) {
  const PrimeField f = a.field();
  const gf::RrefResult r = gf::rank_and_rref(a);
  bool ok = gf::is_rref(r.reduced) && r.transform * a == r.reduced && r.rank == gf::rank(a);
  const FFMatrix g = random_full_rank(f, a.rows(), a.rows(), ctx.rng);
  ok = ok && gf::rank_and_rref(g * a).reduced == r.reduced;
  if (r.rank == a.rows()) {
    ok = ok && r.reduced * gf::right_inverse_of_rref(r.reduced) == FFMatrix::identity(f, a.rows());
    const FFMatrix b = a.transpose();
    const gf::RcefResult rc = gf::rcef_decompose(b);
    ok = ok && gf::is_rcef(b * rc.tau) && b * rc.tau == rc.reduced;
    const FFMatrix lead =
        gf::rcef_decompose(random_full_rank(f, b.rows() + uniform(0, 2, ctx.rng), b.rows(), ctx.rng)).reduced;
    ok = ok && gf::tau(lead * b) == rc.tau;
  }
  ctx.record(ok);
}

void check_echelon_exhaustive(Ctx& ctx) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (gf::Code c = 0; c < (gf::Code{1} << (2 * n)); ++c) echelon_trial(ctx, gf::mat_decode(c, 2, n, kF2));
}

void check_echelon_random(Ctx& ctx) {
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const PrimeField f = small_field(t);
    echelon_trial(ctx, random_matrix(f, uniform(1, 8, ctx.rng), uniform(1, 8, ctx.rng), ctx.rng));
  }
}

void check_tau2(Ctx& ctx) {
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const PrimeField f = small_field(t);
    const std::size_t k = 1 + t / 3 % 3, n = k + uniform(0, 2, ctx.rng);
    const FFMatrix a = random_full_rank(f, n, k, ctx.rng) * random_full_rank(f, k, n, ctx.rng);
    const gf::GLMatrix expected = gf::tau2(a);
    const gf::FullRankDecomposition base = gf::full_rank_decomposition(a);
    bool ok = true;
    for (int d = 0; d < 10; ++d) {
      const gf::GLMatrix g(random_full_rank(f, k, k, ctx.rng));
      const gf::FullRankDecomposition alt{base.left * g.matrix(), g.inverse().matrix() * base.right};
      ok = ok && alt.left * alt.right == a && gf::tau2_from(alt) == expected;
    }
    const FFMatrix a0 = gf::rcef_decompose(base.left).reduced;
    const FFMatrix a1 = gf::rcef_decompose(base.right.transpose()).reduced;
    ok = ok && a0 * expected.matrix() * a1.transpose() == a;
    ctx.record(ok);
  }
}

void check_gl_order(Ctx& ctx) {
  ctx.record(gf::gl_order(2, 2) == 6);
  for (std::uint32_t p : {2u, 3u})
    for (std::size_t k = 1; k <= 2; ++k)
      ctx.record(gf::enumerate_gl(PrimeField(p), k).size() == gf::gl_order(p, k));
  ctx.record(gf::enumerate_gl(kF2, 3).size() == gf::gl_order(2, 3));
}

// ---- combinat_equivalences ----

void check_rref_rigid(Ctx& ctx) {
  for (std::size_t k = 1; k <= 2; ++k)
    for (std::size_t n = k; n <= 4; ++n)
      for (gf::Code c = 0; c < (gf::Code{1} << (k * n)); ++c) {
        const FFMatrix a = gf::mat_decode(c, k, n, kF2);
        if (gf::rank(a) != k) continue;
        const bool rigid = combinat::is_rigid_surjection(combinat::linear_map_table(a), gf::Code{1} << k);
        bool units = true;
        for (std::size_t i = 0; i < k; ++i) {
          std::vector<Residue> u(k, 0);
          u[i] = 1;
          bool found = false;
          for (std::size_t j = 0; j < n; ++j) found = found || a.column(j) == u;
          units = units && found;
        }
        ctx.record(gf::is_rref(a) == (rigid && units));
      }
}

void check_min_preimage(Ctx& ctx) {
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const PrimeField f = small_field(t);
    const std::size_t n = f.order() == 2 ? uniform(2, 10, ctx.rng) : f.order() == 3 ? uniform(2, 6, ctx.rng)
                                                                                      : uniform(2, 4, ctx.rng);
    const std::size_t k = uniform(1, std::min<std::size_t>(3, n), ctx.rng);
    const FFMatrix a = gf::rank_and_rref(random_full_rank(f, k, n, ctx.rng)).reduced;
    const std::vector<Residue> w = random_matrix(f, k, 1, ctx.rng).column(0);
    // Brute force: the first solution in antilex rank order.
    const combinat::AntilexOrder order(f, n);
    std::vector<Residue> brute;
    for (std::uint64_t r = 0; r < order.size(); ++r) {
      std::vector<Residue> x = order.element(r);
      if (a * std::span<const Residue>(x) == w) {
        brute = std::move(x);
        break;
      }
    }
    ctx.record(combinat::min_preimage(a, w) == brute);
  }
}

void check_phi(Ctx& ctx) {
  struct Case {
    PrimeField f;
    std::size_t k, n_max;
  };
  for (const Case& cs : {Case{kF2, 1, 6}, Case{kF2, 2, 6}, Case{kF3, 1, 5}}) {
    const combinat::AntilexOrder order(cs.f, cs.k);
    for (std::size_t n = order.size(); n <= cs.n_max; ++n)
      for (const auto& fn : combinat::enumerate_epi(n, order.size())) {
        const FFMatrix m = combinat::phi(fn, order);
        ctx.record(gf::is_rcef(m) && gf::rank(m) == cs.k && combinat::phi_inverse(m) == fn);
      }
  }
}

void check_pi_factor(Ctx& ctx) {
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t k = 1; k <= n; ++k) {
      const auto all = combinat::enumerate_boolean(n, k, false);
      const auto ordered = combinat::enumerate_boolean(n, k, true);
      std::uint64_t fact = 1;
      for (std::size_t i = 2; i <= k; ++i) fact *= i;
      ctx.record(all.size() == ordered.size() * fact);
      for (const auto& a : all) {
        const combinat::PiFactor pf = combinat::pi_factor(a);
        ctx.record(pf.ordered.is_ordered() && pf.ordered.matrix() * combinat::permutation_matrix(pf.sigma) == a.matrix());
      }
    }
}

void check_partition_counts(Ctx& ctx) {
  // Stirling numbers of the second kind by recurrence.
  std::vector<std::vector<std::uint64_t>> s(8, std::vector<std::uint64_t>(8, 0));
  s[0][0] = 1;
  for (std::size_t n = 1; n < 8; ++n)
    for (std::size_t k = 1; k <= n; ++k) s[n][k] = k * s[n - 1][k] + s[n - 1][k - 1];
  for (std::size_t n = 1; n < 8; ++n)
    for (std::size_t k = 1; k <= n; ++k) {
      const auto parts = combinat::enumerate_partitions(n, k);
      ctx.record(parts.size() == s[n][k] && combinat::enumerate_boolean(n, k, true).size() == s[n][k]);
    }
}

// ---- ramsey_desk ----

engine::Params grass(std::size_t n) { return {engine::Kind::grassmannian, 2, n, 1}; }

void check_fano(Ctx& ctx) {
  const auto s = engine::exhaust_colorings(grass(3), 2, 2);
  ctx.record(s.all_pass && s.exhaustive && !s.counterexample);
}

void check_n2(Ctx& ctx) {
  const auto s = engine::exhaust_colorings(grass(2), 2, 2);
  ctx.record(!s.all_pass && s.exhaustive && s.counterexample.has_value());
}

void check_min_n(Ctx& ctx) {
  const auto r = engine::min_n_search(grass(0), 2, 2, 1, 4);
  ctx.record(r.n == std::optional<std::size_t>(3));
}

void check_full_rank_agrees(Ctx& ctx) {
  for (std::size_t n : {2u, 3u}) {
    const auto g = engine::exhaust_colorings(grass(n), 2, 2);
    const auto f = engine::exhaust_colorings({engine::Kind::full_rank, 2, n, 1}, 2, 2);
    ctx.record(g.all_pass == f.all_pass && g.colorings_checked == f.colorings_checked);
  }
  ctx.record(engine::tau_image_size(2, 3, 1) == 1);
}

void check_universe_counts(Ctx& ctx) {
  using engine::Kind;
  struct Case {
    engine::Params params;
    std::uint64_t expected;
  };
  for (const Case& cs : {Case{{Kind::grassmannian, 2, 3, 1}, 7}, Case{{Kind::grassmannian, 2, 3, 2}, 7},
                         Case{{Kind::full_rank, 2, 3, 2}, 42}, Case{{Kind::full_rank, 2, 2, 2}, 6}}) {
    ctx.record(engine::structure_count(cs.params) == cs.expected &&
               engine::enumerate_structures(cs.params).size() == cs.expected);
  }
}

engine::ColoringTable random_coloring(const engine::Params& params, std::uint32_t r, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> d(0, r - 1);
  std::vector<std::uint32_t> colors(engine::structure_count(params));
  for (auto& c : colors) c = d(rng);
  return engine::ColoringTable::from_colors(params, r, std::move(colors));
}

void check_witness_recheck(Ctx& ctx) {
  using engine::Kind;
  struct Case {
    engine::Params params;
    std::size_t m;
  };
  const Case cases[] = {{grass(4), 2},
                        {{Kind::grassmannian, 3, 3, 1}, 2},
                        {{Kind::full_rank, 2, 4, 2}, 2},
                        {{Kind::square, 2, 3, 1}, 2},
                        {{Kind::boolean, 2, 5, 2}, 3},
                        {{Kind::epi, 2, 6, 2}, 3}};
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const Case& cs = cases[t % std::size(cases)];
    const auto c = random_coloring(cs.params, 2, ctx.rng);
    const auto rep = engine::witness_search(c, cs.m);
    ctx.record(!rep.found || engine::recheck_witness(c, cs.m, rep));
  }
}

void check_jobs_determinism(Ctx& ctx) {
  engine::SearchOptions one, four;
  four.jobs = 4;
  for (std::size_t n : {2u, 3u})
    ctx.record(io::to_json(engine::exhaust_colorings(grass(n), 2, 2, one)) ==
               io::to_json(engine::exhaust_colorings(grass(n), 2, 2, four)));
  for (int t = 0; t < 4; ++t) {
    const auto c = random_coloring({engine::Kind::full_rank, 2, 4, 2}, 2, ctx.rng);
    ctx.record(io::to_json(engine::witness_search(c, 3, one), false) ==
               io::to_json(engine::witness_search(c, 3, four), false));
  }
}

// ---- metric_axioms ----

void check_omega_values(Ctx& ctx) {
  const auto l1 = NormSpec::lp(2, 1), l2 = NormSpec::lp(2, 2), li = NormSpec::lp(2, kInf);
  const auto a = metrics::omega(l1, li), b = metrics::omega(l2, li);
  ctx.record(exact(a) ? 1e-12 - std::abs(a.value - std::log(2.0)) : -1.0);
  ctx.record(exact(b) ? 1e-12 - std::abs(b.value - std::log(std::sqrt(2.0))) : -1.0);
}

void check_omega_triangle(Ctx& ctx) {
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const int d = 2 + static_cast<int>(t % 2);
    const NormSpec a = random_polyhedral(d, ctx.rng), b = random_polyhedral(d, ctx.rng),
                   c = random_polyhedral(d, ctx.rng);
    const auto ab = metrics::omega(a, b), ba = metrics::omega(b, a), bc = metrics::omega(b, c),
               ac = metrics::omega(a, c);
    const bool certified = exact(ab) && exact(bc) && exact(ac) && ab.value == ba.value;
    ctx.record(certified ? ab.value + bc.value - ac.value + 1e-8 : -1.0);
  }
}

MatrixXd line(double theta) { return (MatrixXd(2, 1) << std::cos(theta), std::sin(theta)).finished(); }

void check_gap_grid(Ctx& ctx) {
  const auto l2 = NormSpec::lp(2, 2);
  for (int i = 0; i < 20; ++i) {
    const double theta = (i + 1) * std::numbers::pi / 42;
    const auto g = metrics::gap_metric(metrics::SubspaceRep(l2, line(0)), metrics::SubspaceRep(l2, line(theta)));
    ctx.record(exact(g) ? 1e-6 - std::abs(g.value - std::sin(theta)) : -1.0);
  }
}

void check_alpha_example(Ctx& ctx) {
  const auto li = NormSpec::lp(2, kInf);
  const auto a = metrics::alpha_extrinsic(li, li, NormSpec::lp(2, 1));
  ctx.record(exact(a) ? 1e-8 - std::abs(a.value - 1) : -1.0);
}

void check_alpha_sandwich(Ctx& ctx) {
  std::uniform_real_distribution<double> u(0, 1);
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const double lambda = t % 2 ? 2.0 : 1.5;
    const int d = 2 + static_cast<int>(t / 2 % 2);
    const NormSpec x = random_polyhedral(d, ctx.rng);
    auto scaled = [&] {
      MatrixXd v = x.polytope()->vertices;
      for (Index i = 0; i < v.rows(); ++i) v.row(i) *= std::pow(lambda, u(ctx.rng) - 0.5);
      return NormSpec::from_vertices(v);
    };
    const NormSpec m = scaled(), n = scaled();
    const auto w = metrics::omega(m, n), a = metrics::alpha_extrinsic(x, m, n);
    const bool inside = metrics::omega(x, m).value <= std::log(lambda) + 1e-12 &&
                        metrics::omega(x, n).value <= std::log(lambda) + 1e-12;
    if (!inside || !exact(w) || !exact(a)) {
      ctx.record(-1.0);
      continue;
    }
    ctx.record(std::min(a.value - w.value / lambda, lambda * w.value - a.value) + 1e-8);
  }
}

void check_multiplication_isometry(Ctx& ctx) {
  const double ps[] = {1.0, 2.0, kInf};
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const double p = ps[t % 3];
    const int d = 2 + static_cast<int>(t / 3 % 2);
    const Index n = static_cast<Index>(uniform(static_cast<std::size_t>(d), 4, ctx.rng)), extra = static_cast<Index>(uniform(1, 2, ctx.rng));
    const NormSpec x = random_polyhedral(d, ctx.rng);
    const NormSpec small = NormSpec::lp(static_cast<std::size_t>(n), p),
                   big = NormSpec::lp(static_cast<std::size_t>(n + extra), p);
    MatrixXd incl = MatrixXd::Zero(n + extra, n);
    incl.topRows(n).setIdentity();
    const MatrixXd a = injective(n, d, ctx.rng), b = injective(n, d, ctx.rng);
    const double before = metrics::op_norm(MatrixXd(a - b), x, small).value;
    const double after = metrics::op_norm(MatrixXd(incl * (a - b)), x, big).value;
    double margin = 1e-12 * (1 + before) - std::abs(before - after);
    const NormSpec na = NormSpec::pushforward(a, small), nra = NormSpec::pushforward(incl * a, big);
    for (int s = 0; s < 10; ++s) {
      const VectorXd z = gaussian(d, 1, ctx.rng);
      margin = std::min(margin, 1e-12 * (1 + na(z)) - std::abs(na(z) - nra(z)));
    }
    ctx.record(margin);
  }
  // A non-isometric R changes distances.
  const auto li = NormSpec::lp(2, kInf);
  const MatrixXd r = (MatrixXd(2, 2) << 2, 0, 0, 1).finished();
  const MatrixXd id = MatrixXd::Identity(2, 2);
  const double before = metrics::op_norm(id, li, li).value, after = metrics::op_norm(MatrixXd(r * id), li, li).value;
  ctx.record(std::abs(after - before) - 0.5);
}

void check_bm_bounds(Ctx& ctx) {
  metrics::BmOptions opts;
  opts.seed = ctx.rng();
  const auto iso = metrics::bm_upper(NormSpec::lp(2, 1), NormSpec::lp(2, kInf), opts);
  ctx.record(1e-6 - iso.value.value);
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const int d = 2 + static_cast<int>(t % 2);
    const NormSpec m = random_polyhedral(d, ctx.rng), n = random_polyhedral(d, ctx.rng);
    opts.seed = ctx.rng();
    const double bm = metrics::bm_upper(m, n, opts).value.value, w = metrics::omega(m, n).value;
    ctx.record(std::min(2 * w - bm, bm) + 1e-9);
  }
}

void check_oscillation(Ctx& ctx) {
  const auto l2 = NormSpec::lp(2, 2);
  const std::vector<VectorXd> pts{VectorXd::Unit(2, 0), 2 * VectorXd::Unit(2, 0)};
  ctx.record(1e-12 - std::abs(metrics::oscillation([&](const VectorXd& v) { return l2(v); }, pts, l2) - 1));
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    std::vector<std::uint32_t> colors(uniform(1, 8, ctx.rng));
    const std::uint32_t r = static_cast<std::uint32_t>(uniform(1, 3, ctx.rng));
    for (auto& c : colors) c = static_cast<std::uint32_t>(uniform(0, r - 1, ctx.rng));
    const bool mono = std::all_of(colors.begin(), colors.end(), [&](auto c) { return c == colors.front(); });
    ctx.record((metrics::oscillation(colors) == 0) == mono);
  }
}

// ---- appendix_constructions ----

void check_extrinsic(Ctx& ctx) {
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const int d = 2 + static_cast<int>(t % 2);
    const NormSpec x = random_polyhedral(d, ctx.rng);
    const Index n = static_cast<Index>(d) + static_cast<Index>(uniform(0, 2, ctx.rng));
    const NormSpec amb = NormSpec::lp(static_cast<std::size_t>(n), kInf);
    const metrics::LinOp a{injective(n, d, ctx.rng), x, amb}, b{injective(n, d, ctx.rng), x, amb};
    const auto w = metrics::extrinsic_witness(a, b);
    const auto alpha = metrics::alpha_extrinsic(x, NormSpec::pushforward(a.matrix, amb),
                                                NormSpec::pushforward(b.matrix, amb));
    ctx.record(exact(w.distance) && exact(alpha) ? 1e-7 - std::abs(w.distance.value - alpha.value) : -1.0);
  }
}

struct AmalgamInput {
  NormSpec f, g;
  MatrixXd t;
};

AmalgamInput random_amalgam_input(std::uint64_t t, bool equal_dims, std::mt19937_64& rng) {
  const int kf = 1 + static_cast<int>(t % 3);
  const int kg = equal_dims ? kf : std::min(3, kf + static_cast<int>(t / 3 % 2));
  NormSpec f = kf == 1 ? NormSpec::lp(1, 1) : random_polyhedral(kf, rng);
  NormSpec g = t % 2 ? NormSpec::lp(static_cast<std::size_t>(kg), kInf) : random_polyhedral(kg, rng);
  MatrixXd m = injective(kg, kf, rng);
  m /= metrics::op_norm(m, f, g).value;
  return {f, g, m};
}

void check_amalgam_embeddings(Ctx& ctx) {
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const AmalgamInput in = random_amalgam_input(t, false, ctx.rng);
    const auto a = metrics::amalgam_norm(in.f, in.g, in.t);
    const auto c = metrics::check_amalgam(a, in.t);
    ctx.record(std::min({1e-8 - c.i_distortion, 1e-8 - c.j_distortion, c.defect_bound + 1e-6 - c.defect.value}));
  }
}

void check_amalgam_gap(Ctx& ctx) {
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const AmalgamInput in = random_amalgam_input(t, true, ctx.rng);
    const auto a = metrics::amalgam_norm(in.f, in.g, in.t);
    const auto c = metrics::check_amalgam(a, in.t);
    ctx.record(c.gap && c.gap_bound ? *c.gap_bound + 1e-6 - c.gap->value : -1.0);
  }
}

void check_dual_lift(Ctx& ctx) {
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const Index n = static_cast<Index>(uniform(2, 5, ctx.rng));
    const Index k = static_cast<Index>(uniform(1, static_cast<std::size_t>(std::min<Index>(n, 3)), ctx.rng));
    const double p = t % 2 ? kInf : 2.0;
    const metrics::LinOp op{injective(n, k, ctx.rng), NormSpec::lp(static_cast<std::size_t>(k), 2),
                            NormSpec::lp(static_cast<std::size_t>(n), p)};
    const VectorXd f = gaussian(k, 1, ctx.rng);
    const auto lift = metrics::dual_min_lift(op, f);
    const double polar = metrics::lift_by_polarity(op, f);
    const double residual = (op.matrix.transpose() * lift.functional - f).cwiseAbs().maxCoeff();
    ctx.record(std::min(1e-7 - std::abs(lift.value - polar), 1e-9 - residual));
  }
}

void check_basis_matching(Ctx& ctx) {
  const NormSpec li = NormSpec::lp(4, kInf);
  std::uniform_real_distribution<double> eps(0.002, 0.05);
  for (std::uint64_t t = 0, attempts = 0; t < ctx.trials() && attempts < 4 * ctx.trials(); ++attempts) {
    const Index k = 1 + static_cast<Index>(attempts % 2);
    const MatrixXd v = injective(4, k, ctx.rng);
    const MatrixXd w = v + eps(ctx.rng) * gaussian(4, k, ctx.rng);
    if (metrics::numerical_rank(w, 1e-6) != static_cast<std::size_t>(k)) continue;
    const auto b = metrics::basis_matching_map(metrics::SubspaceRep(li, v), metrics::SubspaceRep(li, w));
    if (!b.applicable) continue;
    ++t;
    ctx.record(b.bound * (1 + 1e-9) + 1e-9 - b.norm.value * b.inv_norm.value);
  }
}

void check_nu2(Ctx& ctx) {
  const NormSpec li = NormSpec::lp(4, kInf), k2 = NormSpec::lp(2, 2);
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    const metrics::LinOp a{injective(4, 2, ctx.rng), k2, li}, b{injective(4, 2, ctx.rng), k2, li};
    const double lambda = std::exp(metrics::nu2_tools(a, b, 1.0).omega.value);
    const auto q = metrics::nu2_tools(a, b, lambda);
    const double cap = lambda * (1 + 1e-6);
    double margin = std::min(cap - q.norm.value, cap - q.inv_norm.value);
    if (!q.member || !q.bounds_hold) margin = std::min(margin, -1.0);
    ctx.record(margin);
  }
}

void check_diam(Ctx& ctx) {
  const NormSpec li = NormSpec::lp(4, kInf), k2 = NormSpec::lp(2, 2);
  for (std::uint64_t t = 0; t < ctx.trials(); ++t) {
    auto op = [&] { return metrics::LinOp{injective(4, 2, ctx.rng), k2, li}; };
    const metrics::LinOp a0 = op(), a1 = op(), b0 = op(), b1 = op();
    const auto pa = metrics::nu2_tools(a0, a1, 1), pb = metrics::nu2_tools(b0, b1, 1);
    const double lambda = std::exp(std::max(pa.omega.value, pb.omega.value));
    metrics::BmOptions opts;
    opts.seed = ctx.rng();
    const auto c = metrics::diam_check(pa.pair, pb.pair, lambda, opts);
    ctx.record(c.a_member && c.b_member ? c.bound + 1e-8 - c.omega2 : -1.0);
  }
}

const std::vector<CheckDef>& registry() {
  using K = CheckKind;
  static const std::vector<CheckDef> defs{
      {"gf_invariants", "gf.f5_example", "gf_linalg.rcef_decompose", K::certified, 0, check_f5_example},
      {"gf_invariants", "gf.echelon_exhaustive", "gf_linalg.rank_and_rref", K::certified, 0, check_echelon_exhaustive},
      {"gf_invariants", "gf.echelon_random", "gf_linalg.rank_and_rref", K::certified, 2000, check_echelon_random},
      {"gf_invariants", "gf.tau2_decomposition_independence", "gf_linalg.tau2", K::certified, 200, check_tau2},
      {"gf_invariants", "gf.gl_order", "gf_linalg.rank_and_rref", K::certified, 0, check_gl_order},
      {"combinat_equivalences", "combinat.rref_rigid_surjection", "combinat.is_rigid_surjection", K::certified, 0,
       check_rref_rigid},
      {"combinat_equivalences", "combinat.min_preimage_antilex", "combinat.min_preimage", K::certified, 200,
       check_min_preimage},
      {"combinat_equivalences", "combinat.phi_roundtrip", "combinat.phi", K::certified, 0, check_phi},
      {"combinat_equivalences", "combinat.pi_factor_bijection", "combinat.pi_factor", K::certified, 0,
       check_pi_factor},
      {"combinat_equivalences", "combinat.partition_counts", "combinat.enumerate_partitions", K::certified, 0,
       check_partition_counts},
      {"ramsey_desk", "engine.fano_all_pass", "ramsey_engine.exhaust_colorings", K::certified, 0, check_fano},
      {"ramsey_desk", "engine.n2_counterexample", "ramsey_engine.exhaust_colorings", K::certified, 0, check_n2},
      {"ramsey_desk", "engine.min_n", "ramsey_engine.min_n_search", K::certified, 0, check_min_n},
      {"ramsey_desk", "engine.full_rank_agrees", "ramsey_engine.exhaust_colorings", K::certified, 0,
       check_full_rank_agrees},
      {"ramsey_desk", "engine.universe_counts", "ramsey_engine.enumerate_structures", K::certified, 0,
       check_universe_counts},
      {"ramsey_desk", "engine.witness_recheck", "ramsey_engine.witness_search", K::certified, 60,
       check_witness_recheck},
      {"ramsey_desk", "engine.jobs_determinism", "ramsey_engine.witness_search", K::certified, 0,
       check_jobs_determinism},
      {"metric_axioms", "metrics.omega_exact_values", "normed_metrics.omega", K::certified, 0, check_omega_values},
      {"metric_axioms", "metrics.omega_triangle", "normed_metrics.omega", K::certified, 500, check_omega_triangle},
      {"metric_axioms", "metrics.gap_angle_grid", "normed_metrics.gap_metric", K::certified, 0, check_gap_grid},
      {"metric_axioms", "metrics.alpha_example", "normed_metrics.alpha_extrinsic", K::certified, 0,
       check_alpha_example},
      {"metric_axioms", "metrics.alpha_omega_sandwich", "normed_metrics.alpha_extrinsic", K::certified, 100,
       check_alpha_sandwich},
      {"metric_axioms", "metrics.multiplication_isometry", "normed_metrics.op_norm", K::certified, 100,
       check_multiplication_isometry},
      {"metric_axioms", "metrics.bm_bounds", "normed_metrics.bm_upper", K::consistency, 10, check_bm_bounds},
      {"metric_axioms", "metrics.oscillation", "normed_metrics.oscillation", K::certified, 100, check_oscillation},
      {"appendix_constructions", "appendix.extrinsic_witness_agreement", "normed_metrics.extrinsic_witness",
       K::certified, 20, check_extrinsic},
      {"appendix_constructions", "appendix.amalgam_embeddings", "normed_metrics.amalgam_norm", K::certified, 20,
       check_amalgam_embeddings},
      {"appendix_constructions", "appendix.amalgam_gap", "normed_metrics.amalgam_norm", K::certified, 20,
       check_amalgam_gap},
      {"appendix_constructions", "appendix.dual_min_lift_two_route", "normed_metrics.dual_min_lift", K::certified,
       100, check_dual_lift},
      {"appendix_constructions", "appendix.basis_matching", "normed_metrics.auerbach_basis", K::certified, 20,
       check_basis_matching},
      {"appendix_constructions", "appendix.pair_norm_bounds", "normed_metrics.nu2_tools", K::certified, 20, check_nu2},
      {"appendix_constructions", "appendix.diameter_bound", "normed_metrics.bm_upper", K::consistency, 3, check_diam},
  };
  return defs;
}

}  // namespace

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.failures == 0; });
}

bool SuiteReport::certified_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.kind != CheckKind::certified || c.failures == 0; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gf_invariants", "combinat_equivalences", "ramsey_desk",
                                              "metric_axioms", "appendix_constructions"};
  return names;
}

std::vector<std::string> check_names(const std::string& suite) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw Error(Errc::UnknownSuite, "unknown suite '" + suite + "'");
  std::vector<std::string> out;
  for (const auto& d : registry())
    if (d.suite == suite) out.push_back(d.name);
  return out;
}

SuiteReport run_suite(const SuiteConfig& config) {
  std::set<std::string> wanted;
  for (const auto& s : config.suites)
    for (auto& n : check_names(s)) wanted.insert(std::move(n));
  for (const auto& n : config.only)
    if (!wanted.count(n)) throw Error(Errc::UnknownSuite, "unknown check '" + n + "' in the selected suites");
  for (const auto& [n, _] : config.check_trials)
    if (!wanted.count(n)) throw Error(Errc::UnknownSuite, "unknown check '" + n + "' in the selected suites");

  std::vector<const CheckDef*> todo;
  for (const auto& d : registry())
    if (wanted.count(d.name) &&
        (config.only.empty() || std::find(config.only.begin(), config.only.end(), d.name) != config.only.end()))
      todo.push_back(&d);
  std::sort(todo.begin(), todo.end(), [](const CheckDef* a, const CheckDef* b) { return a->name < b->name; });

  std::vector<CheckResult> results(todo.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      const CheckDef& d = *todo[i];
      std::uint64_t trials = d.default_trials;
      if (trials > 0 && config.trials) trials = *config.trials;
      if (auto it = config.check_trials.find(d.name); it != config.check_trials.end()) trials = it->second;
      Ctx ctx(config.seed ^ fnv1a(d.name), trials);
      const auto start = std::chrono::steady_clock::now();
      try {
        d.run(ctx);
      } catch (const std::exception&) {
        ctx.record(-1.0);
      }
      const std::chrono::duration<double, std::milli> took = std::chrono::steady_clock::now() - start;
      results[i] = {d.name, d.anchor, d.kind, ctx.done(), ctx.failures(), ctx.worst(), took.count()};
    }
  };
  const unsigned jobs = std::max(1u, config.jobs);
  if (jobs == 1 || todo.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < std::min<std::size_t>(jobs, todo.size()); ++j) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return {std::move(results)};
}

io::json to_json(const SuiteReport& r, bool timing) {
  io::json checks = io::json::array();
  for (const auto& c : r.checks) {
    io::json j;
    j["name"] = c.name;
    j["anchor"] = c.anchor;
    j["kind"] = c.kind == CheckKind::certified ? "certified" : "consistency";
    j["trials"] = c.trials;
    j["failures"] = c.failures;
    j["worst_margin"] = c.worst_margin;
    if (timing) j["millis"] = c.millis;
    checks.push_back(std::move(j));
  }
  io::json out;
  out["pass"] = r.pass();
  out["certified_pass"] = r.certified_pass();
  out["checks"] = std::move(checks);
  return out;
}

}  // namespace ramsey::verify
