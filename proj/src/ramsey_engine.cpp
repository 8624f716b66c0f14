#include "ramsey/ramsey_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ramsey/combinat.hpp"

namespace ramsey::engine {

using gf::FFMatrix;
using gf::PrimeField;
using gf::Residue;

namespace {

using u128 = unsigned __int128;
constexpr std::uint64_t kSat = ~std::uint64_t{0};

std::uint64_t sat(u128 v) { return v > kSat ? kSat : static_cast<std::uint64_t>(v); }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) { return sat(u128{a} * b); }

std::uint64_t sat_pow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r = sat_mul(r, b);
  return r;
}

// Gaussian binomial [n, k]_p via the recurrence on n.
std::uint64_t gaussian_binomial(std::uint64_t p, std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::vector<std::uint64_t> row(k + 1, 0);
  row[0] = 1;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = std::min(i, k); j >= 1; --j)
      row[j] = sat(u128{row[j - 1]} + u128{sat_mul(row[j], sat_pow(p, j))});
  return row[k];
}

std::uint64_t stirling2(std::size_t n, std::size_t k) {
  std::vector<std::uint64_t> row(k + 1, 0);
  row[0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = std::min(i, k); j >= 1; --j)
      row[j] = sat(u128{row[j - 1]} + u128{sat_mul(row[j], j)});
    row[0] = 0;
  }
  return row[k];
}

std::uint64_t gl_order_sat(std::uint64_t p, std::size_t k) {
  std::uint64_t r = 1;
  const std::uint64_t pk = sat_pow(p, k);
  for (std::size_t j = 0; j < k; ++j) r = sat_mul(r, pk - sat_pow(p, j));
  return r;
}

PrimeField field_of(const Params& params) {
  return (params.kind == Kind::boolean || params.kind == Kind::epi) ? PrimeField(2)
                                                                     : PrimeField(params.p);
}

std::size_t structure_cols(const Params& params) {
  return params.kind == Kind::square ? params.n : params.k;
}

void check_arity(const Params& params) {
  if (params.k == 0 || params.k > params.n)
    throw Error(Errc::BadArity, "need 1 <= k <= n");
}

// Every k x n RREF matrix of rank k, transposed to n x k RCEF.
std::vector<FFMatrix> rcef_bases(PrimeField f, std::size_t n, std::size_t k) {
  std::vector<FFMatrix> out;
  std::vector<std::size_t> piv(k);
  auto fill = [&](auto& self, std::size_t i, std::size_t from) -> void {
    if (i == k) {
      std::vector<std::pair<std::size_t, std::size_t>> free;
      std::vector<bool> is_piv(n, false);
      for (std::size_t c : piv) is_piv[c] = true;
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = piv[r] + 1; c < n; ++c)
          if (!is_piv[c]) free.emplace_back(r, c);
      FFMatrix base(f, k, n);
      for (std::size_t r = 0; r < k; ++r) base.set(r, piv[r], 1);
      std::vector<Residue> digits(free.size(), 0);
      while (true) {
        FFMatrix m = base;
        for (std::size_t t = 0; t < free.size(); ++t) m.set(free[t].first, free[t].second, digits[t]);
        out.push_back(m.transpose());
        std::size_t t = 0;
        for (; t < digits.size(); ++t) {
          if (++digits[t] < f.order()) break;
          digits[t] = 0;
        }
        if (t == digits.size()) break;
      }
      return;
    }
    for (std::size_t c = from; c + (k - i) <= n; ++c) {
      piv[i] = c;
      self(self, i + 1, c + 1);
    }
  };
  fill(fill, 0, 0);
  return out;
}

FFMatrix assignment_matrix(std::span<const std::uint64_t> values, std::size_t cols) {
  FFMatrix m(PrimeField(2), values.size(), cols);
  for (std::size_t i = 0; i < values.size(); ++i) m.set(i, values[i], 1);
  return m;
}

// Structures of the given kind with `cols` standing for k (or m for witnesses).
std::vector<FFMatrix> generate(Kind kind, PrimeField f, std::size_t n, std::size_t cols) {
  std::vector<FFMatrix> out;
  switch (kind) {
    case Kind::grassmannian:
      return rcef_bases(f, n, cols);
    case Kind::full_rank: {
      auto bases = rcef_bases(f, n, cols);
      auto gl = gf::enumerate_gl(f, cols);
      for (const auto& b : bases)
        for (const auto& g : gl) out.push_back(b * g);
      return out;
    }
    case Kind::square: {
      auto bases = rcef_bases(f, n, cols);
      auto gl = gf::enumerate_gl(f, cols);
      for (const auto& a0 : bases)
        for (const auto& g : gl) {
          FFMatrix left = a0 * g;
          for (const auto& a1 : bases) out.push_back(left * a1.transpose());
        }
      return out;
    }
    case Kind::boolean:
      for (auto& b : combinat::enumerate_boolean(n, cols, false)) out.push_back(b.matrix());
      return out;
    case Kind::epi:
      for (auto& e : combinat::enumerate_epi(n, cols)) out.push_back(assignment_matrix(e.values(), cols));
      return out;
  }
  return out;
}

std::uint64_t count_of(Kind kind, std::uint64_t p, std::size_t n, std::size_t k) {
  switch (kind) {
    case Kind::grassmannian:
      return gaussian_binomial(p, n, k);
    case Kind::full_rank:
      return sat_mul(gaussian_binomial(p, n, k), gl_order_sat(p, k));
    case Kind::square: {
      std::uint64_t g = gaussian_binomial(p, n, k);
      return sat_mul(sat_mul(g, g), gl_order_sat(p, k));
    }
    case Kind::boolean: {
      std::uint64_t f = 1;
      for (std::size_t i = 2; i <= k; ++i) f = sat_mul(f, i);
      return sat_mul(stirling2(n, k), f);
    }
    case Kind::epi:
      return stirling2(n, k);
  }
  return 0;
}

std::vector<Code> sorted_codes(const std::vector<FFMatrix>& ms) {
  std::vector<Code> c;
  c.reserve(ms.size());
  for (const auto& m : ms) c.push_back(gf::mat_encode(m));
  std::sort(c.begin(), c.end());
  return c;
}

// Least index i in [0, count) with pred(i), or count. Workers claim chunks in
// increasing order and stop once past the best hit, so the answer does not
// depend on the number of workers.
template <class Pred>
std::uint64_t parallel_first(std::uint64_t count, unsigned jobs, Pred pred) {
  constexpr std::uint64_t chunk = 64;
  std::atomic<std::uint64_t> best{count};
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto work = [&] {
    try {
      while (true) {
        std::uint64_t start = next.fetch_add(chunk);
        if (start >= count || start >= best.load()) return;
        std::uint64_t end = std::min(count, start + chunk);
        for (std::uint64_t i = start; i < end && i < best.load(); ++i) {
          if (pred(i)) {
            std::uint64_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
            break;
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(err_mu);
      if (!err) err = std::current_exception();
      best.store(0);
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1 || count <= chunk) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  return best.load();
}

std::size_t find_index(const std::vector<Code>& sorted, Code c) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), c);
  if (it == sorted.end() || *it != c) throw Error(Errc::KindMismatch, "structure outside the universe");
  return static_cast<std::size_t>(it - sorted.begin());
}

Code factor_code(Kind kind, const FFMatrix& a) {
  switch (kind) {
    case Kind::full_rank:
      return gf::mat_encode(gf::tau(a).matrix());
    case Kind::square:
      return gf::mat_encode(gf::tau2(a).matrix());
    case Kind::boolean:
      return gf::mat_encode(combinat::permutation_matrix(combinat::pi_factor(combinat::BooleanMatrix(a)).sigma));
    default:
      return 0;
  }
}

// Witness candidates, the sub-universe template and its factor values.
struct Context {
  Params params;
  std::size_t m;
  PrimeField field;
  std::vector<FFMatrix> wit;  // sorted by code
  std::vector<Code> wit_codes;
  bool pair;
  std::vector<FFMatrix> inner;
  std::vector<std::uint32_t> inner_factor;  // dense ids
  std::vector<Code> factor_codes;           // id -> code

  Context(const Params& p, std::size_t m_) : params(p), m(m_), field(field_of(p)), pair(p.kind == Kind::square) {
    check_arity(params);
    if (m < params.k) throw Error(Errc::BadArity, "witness size m must be at least k");
    if (m <= params.n) {
      const std::size_t wcols = m;
      const std::uint64_t wcount = (params.kind == Kind::boolean || params.kind == Kind::epi)
                                       ? stirling2(params.n, wcols)
                                       : gaussian_binomial(field.order(), params.n, wcols);
      if (!gf::encodable(field, params.n, wcols) || wcount > kMaxUniverse)
        throw Error(Errc::UniverseTooLarge, "too many witness candidates");
      std::vector<FFMatrix> w;
      if (params.kind == Kind::boolean) {
        for (auto& b : combinat::enumerate_boolean(params.n, m, true)) w.push_back(b.matrix());
      } else {
        w = generate(params.kind == Kind::epi ? Kind::epi : Kind::grassmannian, field, params.n, m);
      }
      std::vector<std::pair<Code, std::size_t>> order;
      for (std::size_t i = 0; i < w.size(); ++i) order.emplace_back(gf::mat_encode(w[i]), i);
      std::sort(order.begin(), order.end());
      for (auto& [c, i] : order) {
        wit_codes.push_back(c);
        wit.push_back(w[i]);
      }
      inner = generate(params.kind, field, m, params.k);
      std::map<Code, std::uint32_t> ids;
      for (const auto& a : inner) {
        Code fc = factor_code(params.kind, a);
        auto [it, fresh] = ids.emplace(fc, static_cast<std::uint32_t>(factor_codes.size()));
        if (fresh) factor_codes.push_back(fc);
        inner_factor.push_back(it->second);
      }
    }
  }

  std::uint64_t candidate_count() const {
    return pair ? std::uint64_t{wit.size()} * wit.size() : wit.size();
  }
  std::vector<Code> candidate_codes(std::uint64_t c) const {
    if (pair) return {wit_codes[c / wit.size()], wit_codes[c % wit.size()]};
    return {wit_codes[c]};
  }
  FFMatrix apply(std::uint64_t c, const FFMatrix& a) const {
    if (pair) return wit[c / wit.size()] * a * wit[c % wit.size()].transpose();
    return wit[c] * a;
  }
  std::vector<std::uint32_t> members(std::uint64_t c, const std::vector<Code>& universe) const {
    std::vector<std::uint32_t> idx;
    idx.reserve(inner.size());
    for (const auto& a : inner)
      idx.push_back(static_cast<std::uint32_t>(find_index(universe, gf::mat_encode(apply(c, a)))));
    return idx;
  }
};

std::string_view kind_names[] = {"full_rank", "grassmannian", "square", "boolean", "epi"};

}  // namespace

std::string_view kind_name(Kind k) noexcept { return kind_names[static_cast<int>(k)]; }

Kind parse_kind(std::string_view s) {
  for (int i = 0; i < 5; ++i)
    if (kind_names[i] == s) return static_cast<Kind>(i);
  throw Error(Errc::Parse, "unknown kind: " + std::string(s));
}

std::uint64_t structure_count(const Params& params) {
  check_arity(params);
  return count_of(params.kind, field_of(params).order(), params.n, params.k);
}

std::vector<Code> enumerate_structures(const Params& params) {
  check_arity(params);
  PrimeField f = field_of(params);
  if (structure_count(params) > kMaxUniverse || !gf::encodable(f, params.n, structure_cols(params)))
    throw Error(Errc::UniverseTooLarge, "universe exceeds desk scale");
  return sorted_codes(generate(params.kind, f, params.n, params.k));
}

ColoringTable::ColoringTable(Params params, std::uint32_t r, std::vector<Code> codes,
                             std::vector<std::uint32_t> colors)
    : params_(params), r_(r) {
  if (r == 0) throw Error(Errc::BadArity, "need at least one color");
  if (codes.size() != colors.size()) throw Error(Errc::DimensionMismatch, "codes and colors differ in length");
  std::vector<std::pair<Code, std::uint32_t>> rows;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (colors[i] >= r) throw Error(Errc::BadArity, "color out of range");
    rows.emplace_back(codes[i], colors[i]);
  }
  std::sort(rows.begin(), rows.end());
  for (auto& [c, col] : rows) {
    codes_.push_back(c);
    colors_.push_back(col);
  }
  if (codes_ != enumerate_structures(params_))
    throw Error(Errc::KindMismatch, "coloring is not total on the universe");
}

ColoringTable ColoringTable::from_colors(const Params& params, std::uint32_t r,
                                         std::vector<std::uint32_t> colors) {
  return ColoringTable(params, r, enumerate_structures(params), std::move(colors));
}

ColoringTable ColoringTable::constant(const Params& params, std::uint32_t r, std::uint32_t color) {
  auto codes = enumerate_structures(params);
  std::vector<std::uint32_t> colors(codes.size(), color);
  return ColoringTable(params, r, std::move(codes), std::move(colors));
}

ColoringTable ColoringTable::from_function(const Params& params, std::uint32_t r,
                                           const std::function<std::uint32_t(Code)>& fn) {
  auto codes = enumerate_structures(params);
  std::vector<std::uint32_t> colors;
  for (Code c : codes) colors.push_back(fn(c));
  return ColoringTable(params, r, std::move(codes), std::move(colors));
}

std::optional<std::size_t> ColoringTable::index_of(Code c) const {
  auto it = std::lower_bound(codes_.begin(), codes_.end(), c);
  if (it == codes_.end() || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::uint32_t ColoringTable::color_of(Code c) const {
  auto i = index_of(c);
  if (!i) throw Error(Errc::KindMismatch, "structure outside the universe");
  return colors_[*i];
}

void write_coloring_csv(std::ostream& out, const ColoringTable& c) {
  const Params& p = c.params();
  out << "kind,p,n,k,r\n"
      << kind_name(p.kind) << ',' << p.p << ',' << p.n << ',' << p.k << ',' << c.colors_count() << '\n';
  for (std::size_t i = 0; i < c.size(); ++i) out << c.code(i) << ',' << c.color(i) << '\n';
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::uint64_t parse_u64(const std::string& s) {
  std::string t = s;
  while (!t.empty() && (t.back() == '\r' || t.back() == ' ')) t.pop_back();
  std::size_t pos = 0;
  if (t.empty() || t[0] == '-') throw Error(Errc::Parse, "expected a non-negative integer: '" + s + "'");
  std::uint64_t v = 0;
  try {
    v = std::stoull(t, &pos);
  } catch (const std::exception&) {
    throw Error(Errc::Parse, "expected a non-negative integer: '" + s + "'");
  }
  if (pos != t.size()) throw Error(Errc::Parse, "trailing characters in '" + s + "'");
  return v;
}

}  // namespace

ColoringTable read_coloring_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::Parse, "empty coloring file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "kind,p,n,k,r") throw Error(Errc::Parse, "bad coloring header");
  if (!std::getline(in, line)) throw Error(Errc::Parse, "missing parameter line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto head = split_csv(line);
  if (head.size() != 5) throw Error(Errc::Parse, "parameter line needs five fields");
  Params params;
  params.kind = parse_kind(head[0]);
  params.p = static_cast<std::uint32_t>(parse_u64(head[1]));
  params.n = parse_u64(head[2]);
  params.k = parse_u64(head[3]);
  auto r = static_cast<std::uint32_t>(parse_u64(head[4]));
  std::vector<Code> codes;
  std::vector<std::uint32_t> colors;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != 2) throw Error(Errc::Parse, "row needs code,color: '" + line + "'");
    codes.push_back(parse_u64(cells[0]));
    colors.push_back(static_cast<std::uint32_t>(parse_u64(cells[1])));
  }
  std::set<Code> seen(codes.begin(), codes.end());
  if (seen.size() != codes.size()) throw Error(Errc::Parse, "duplicate structure code");
  return ColoringTable(params, r, std::move(codes), std::move(colors));
}

std::vector<std::vector<Code>> witness_candidates(const Params& params, std::size_t m) {
  Context ctx(params, m);
  std::vector<std::vector<Code>> out;
  for (std::uint64_t c = 0; c < ctx.candidate_count(); ++c) out.push_back(ctx.candidate_codes(c));
  return out;
}

WitnessReport witness_search(const ColoringTable& table, std::size_t m, const SearchOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  Context ctx(table.params(), m);
  std::vector<Code> universe;
  universe.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) universe.push_back(table.code(i));

  auto colors_for = [&](std::uint64_t c) {
    auto idx = ctx.members(c, universe);
    std::vector<std::int64_t> by_factor(ctx.factor_codes.size(), -1);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      auto& slot = by_factor[ctx.inner_factor[i]];
      std::int64_t col = table.color(idx[i]);
      if (slot == -1) {
        slot = col;
      } else if (slot != col) {
        return std::optional<std::vector<std::int64_t>>{};
      }
    }
    return std::optional<std::vector<std::int64_t>>{by_factor};
  };

  const std::uint64_t count = ctx.candidate_count();
  std::uint64_t best = parallel_first(count, opts.jobs, [&](std::uint64_t c) { return colors_for(c).has_value(); });

  WitnessReport rep;
  rep.found = best < count;
  rep.nodes = rep.found ? best + 1 : count;
  if (rep.found) {
    rep.witness = ctx.candidate_codes(best);
    auto by_factor = *colors_for(best);
    for (std::size_t f = 0; f < by_factor.size(); ++f)
      if (by_factor[f] >= 0) rep.factor_table.emplace_back(ctx.factor_codes[f], static_cast<std::uint32_t>(by_factor[f]));
    std::sort(rep.factor_table.begin(), rep.factor_table.end());
    for (std::size_t i = 1; i < rep.factor_table.size(); ++i)
      if (rep.factor_table[i].first == rep.factor_table[i - 1].first)
        throw std::logic_error("factor table is not a function");
  }
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

bool in_inner_set(Kind kind, const FFMatrix& a, std::size_t k) {
  switch (kind) {
    case Kind::grassmannian:
      return gf::is_rcef(a) && gf::rank(a) == k;
    case Kind::full_rank:
    case Kind::square:
      return gf::rank(a) == k;
    case Kind::boolean:
    case Kind::epi: {
      try {
        combinat::BooleanMatrix b(a);
        if (kind == Kind::boolean) return true;
        auto asg = b.assignment();
        std::vector<std::uint64_t> v(asg.begin(), asg.end());
        return combinat::is_rigid_surjection(v, a.cols());
      } catch (const Error&) {
        return false;
      }
    }
  }
  return false;
}

bool valid_witness(Kind kind, const FFMatrix& w, std::size_t m) {
  switch (kind) {
    case Kind::grassmannian:
    case Kind::full_rank:
    case Kind::square:
      return gf::is_rcef(w) && gf::rank(w) == m;
    case Kind::boolean:
      try {
        return combinat::BooleanMatrix(w).is_ordered();
      } catch (const Error&) {
        return false;
      }
    case Kind::epi:
      return in_inner_set(Kind::epi, w, m);
  }
  return false;
}

}  // namespace

bool recheck_witness(const ColoringTable& table, std::size_t m, const WitnessReport& report) {
  if (!report.found) return false;
  const Params& params = table.params();
  const PrimeField f = field_of(params);
  const bool pair = params.kind == Kind::square;
  if (report.witness.size() != (pair ? 2u : 1u)) return false;
  std::vector<FFMatrix> ws;
  for (Code c : report.witness) {
    FFMatrix w = gf::mat_decode(c, params.n, m, f);
    if (gf::mat_encode(w) != c || !valid_witness(params.kind, w, m)) return false;
    ws.push_back(std::move(w));
  }
  std::map<Code, std::uint32_t> table_map;
  for (auto& [fc, col] : report.factor_table)
    if (!table_map.emplace(fc, col).second) return false;

  const std::size_t rows = m, cols = pair ? m : params.k;
  std::vector<FFMatrix> inner;
  if (sat_pow(f.order(), rows * cols) <= (std::uint64_t{1} << 22)) {
    const std::uint64_t total = sat_pow(f.order(), rows * cols);
    for (Code c = 0; c < total; ++c) {
      FFMatrix a = gf::mat_decode(c, rows, cols, f);
      if (in_inner_set(params.kind, a, params.k)) inner.push_back(std::move(a));
    }
  } else {
    inner = generate(params.kind, f, m, params.k);
  }
  if (inner.size() != count_of(params.kind, f.order(), m, params.k)) return false;
  for (const auto& a : inner) {
    FFMatrix prod = pair ? ws[0] * a * ws[1].transpose() : ws[0] * a;
    auto idx = table.index_of(gf::mat_encode(prod));
    if (!idx) return false;
    auto it = table_map.find(factor_code(params.kind, prod));
    if (it == table_map.end() || it->second != table.color(*idx)) return false;
  }
  return true;
}

namespace {

// Candidate sub-universes split by factor value, as index lists.
struct Groups {
  std::vector<std::uint32_t> offsets{0};  // per candidate, into group_off
  std::vector<std::uint32_t> group_off{0};
  std::vector<std::uint32_t> items;
  std::vector<std::uint32_t> masks;  // filled when the universe fits in 32 bits

  std::size_t candidates() const { return offsets.size() - 1; }
};

Groups build_groups(const Context& ctx, const std::vector<Code>& universe) {
  Groups g;
  const std::size_t nf = ctx.factor_codes.size();
  std::vector<std::vector<std::uint32_t>> buckets(nf);
  for (std::uint64_t c = 0; c < ctx.candidate_count(); ++c) {
    auto idx = ctx.members(c, universe);
    for (auto& b : buckets) b.clear();
    for (std::size_t i = 0; i < idx.size(); ++i) buckets[ctx.inner_factor[i]].push_back(idx[i]);
    for (auto& b : buckets) {
      if (b.empty()) continue;
      g.items.insert(g.items.end(), b.begin(), b.end());
      g.group_off.push_back(static_cast<std::uint32_t>(g.items.size()));
      if (universe.size() <= 32) {
        std::uint32_t mask = 0;
        for (auto i : b) mask |= std::uint32_t{1} << i;
        g.masks.push_back(mask);
      }
    }
    g.offsets.push_back(static_cast<std::uint32_t>(g.group_off.size() - 1));
  }
  return g;
}

bool has_witness_mask(const Groups& g, std::uint32_t coloring) {
  for (std::size_t c = 0; c < g.candidates(); ++c) {
    bool ok = true;
    for (std::uint32_t j = g.offsets[c]; j < g.offsets[c + 1] && ok; ++j) {
      std::uint32_t hit = coloring & g.masks[j];
      ok = hit == 0 || hit == g.masks[j];
    }
    if (ok) return true;
  }
  return false;
}

bool has_witness_colors(const Groups& g, const std::vector<std::uint32_t>& colors) {
  for (std::size_t c = 0; c < g.candidates(); ++c) {
    bool ok = true;
    for (std::uint32_t j = g.offsets[c]; j < g.offsets[c + 1] && ok; ++j) {
      const std::uint32_t first = colors[g.items[g.group_off[j]]];
      for (std::uint32_t t = g.group_off[j] + 1; t < g.group_off[j + 1] && ok; ++t)
        ok = colors[g.items[t]] == first;
    }
    if (ok) return true;
  }
  return false;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<std::uint32_t> sample_coloring(std::uint64_t seed, std::uint64_t index, std::size_t size,
                                           std::uint32_t r) {
  std::vector<std::uint32_t> colors(size);
  std::uint64_t state = splitmix64(seed) ^ splitmix64(index + 0x5851f42d4c957f2dull);
  for (auto& c : colors) {
    state = splitmix64(state);
    c = static_cast<std::uint32_t>(state % r);
  }
  return colors;
}

std::vector<std::uint32_t> mask_colors(std::uint32_t mask, std::size_t size) {
  std::vector<std::uint32_t> colors(size);
  for (std::size_t i = 0; i < size; ++i) colors[i] = (mask >> i) & 1u;
  return colors;
}

// Permutations of the universe induced by generators of GL(F^n).
std::vector<std::vector<std::uint32_t>> gl_generator_actions(const Params& params,
                                                             const std::vector<Code>& universe) {
  const PrimeField f(params.p);
  const std::size_t n = params.n;
  std::vector<FFMatrix> gens;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) {
        FFMatrix g = FFMatrix::identity(f, n);
        g.set(i, j, 1);
        gens.push_back(g);
      }
  if (f.order() > 2) {
    // A primitive root generates F_p^*, so this diagonal plus the
    // transvections generates GL_n.
    Residue root = 2;
    for (; root < f.order(); ++root) {
      Residue x = 1;
      std::uint32_t ord = 0;
      do {
        x = f.mul(x, root);
        ++ord;
      } while (x != 1);
      if (ord == f.order() - 1) break;
    }
    FFMatrix d = FFMatrix::identity(f, n);
    d.set(0, 0, root);
    gens.push_back(d);
  }
  std::vector<std::vector<std::uint32_t>> acts;
  for (const auto& g : gens) {
    std::vector<std::uint32_t> perm(universe.size());
    for (std::size_t i = 0; i < universe.size(); ++i) {
      FFMatrix basis = gf::mat_decode(universe[i], n, params.k, f);
      Code img = gf::mat_encode(gf::rcef_decompose(g * basis).reduced);
      perm[i] = static_cast<std::uint32_t>(find_index(universe, img));
    }
    acts.push_back(std::move(perm));
  }
  return acts;
}

}  // namespace

SearchOutcome exhaust_colorings(const Params& params, std::uint32_t r, std::size_t m,
                                const SearchOptions& opts) {
  if (r == 0) throw Error(Errc::BadArity, "need at least one color");
  if (opts.canonize && params.kind != Kind::grassmannian)
    throw Error(Errc::KindMismatch, "GL canonization applies to the grassmannian kind only");
  const std::vector<Code> universe = enumerate_structures(params);
  const std::size_t size = universe.size();
  Context ctx(params, m);
  const bool sampled = r >= 3 || (r == 2 && opts.sampled);
  if (!sampled && r == 2 && size > 26) throw Error(Errc::UniverseTooLarge, "exhaustive mode needs at most 26 structures");

  SearchOutcome out;
  out.exhaustive = !sampled;
  auto refute = [&](std::vector<std::uint32_t> colors) {
    ColoringTable t(params, r, universe, std::move(colors));
    if (witness_search(t, m, opts).found) throw std::logic_error("counterexample admits a witness");
    out.all_pass = false;
    out.counterexample = std::move(t);
  };

  if (ctx.candidate_count() == 0) {
    out.colorings_checked = 1;
    refute(std::vector<std::uint32_t>(size, 0));
    return out;
  }
  if (r == 1) {
    out.colorings_checked = 1;
    return out;
  }
  const Groups groups = build_groups(ctx, universe);

  if (sampled) {
    std::uint64_t bad = parallel_first(opts.samples, opts.jobs, [&](std::uint64_t i) {
      return !has_witness_colors(groups, sample_coloring(opts.seed, i, size, r));
    });
    out.colorings_checked = bad < opts.samples ? bad + 1 : opts.samples;
    if (bad < opts.samples) refute(sample_coloring(opts.seed, bad, size, r));
    return out;
  }

  const std::uint64_t half = std::uint64_t{1} << (size - 1);
  if (!opts.canonize) {
    std::uint64_t bad = parallel_first(half, opts.jobs, [&](std::uint64_t i) {
      return !has_witness_mask(groups, static_cast<std::uint32_t>(i << 1));
    });
    out.colorings_checked = bad < half ? bad + 1 : half;
    if (bad < half) refute(mask_colors(static_cast<std::uint32_t>(bad << 1), size));
    return out;
  }

  // Orbit representatives under GL(F^n) and color swap, visited in increasing
  // mask order; the first failing representative is the least failing mask.
  const auto acts = gl_generator_actions(params, universe);
  const std::uint32_t full = size == 32 ? ~0u : (std::uint32_t{1} << size) - 1;
  std::vector<std::uint64_t> visited(((std::uint64_t{1} << size) + 63) / 64, 0);
  auto seen = [&](std::uint32_t x) { return (visited[x >> 6] >> (x & 63)) & 1u; };
  auto mark = [&](std::uint32_t x) { visited[x >> 6] |= std::uint64_t{1} << (x & 63); };
  std::vector<std::uint32_t> stack;
  for (std::uint64_t i = 0; i < half; ++i) {
    const auto mask = static_cast<std::uint32_t>(i << 1);
    if (seen(mask)) continue;
    ++out.colorings_checked;
    if (!has_witness_mask(groups, mask)) {
      refute(mask_colors(mask, size));
      return out;
    }
    mark(mask);
    stack.push_back(mask);
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      auto push = [&](std::uint32_t y) {
        if (!seen(y)) {
          mark(y);
          stack.push_back(y);
        }
      };
      push(x ^ full);
      for (const auto& perm : acts) {
        std::uint32_t y = 0;
        for (std::size_t b = 0; b < size; ++b)
          if ((x >> b) & 1u) y |= std::uint32_t{1} << perm[b];
        push(y);
      }
    }
  }
  return out;
}

MinNResult min_n_search(Params params, std::uint32_t r, std::size_t m, std::size_t n_lo,
                        std::size_t n_hi, const SearchOptions& opts) {
  if (n_lo < params.k) throw Error(Errc::BadArity, "range must start at n >= k");
  MinNResult res;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    params.n = n;
    SearchOutcome o = exhaust_colorings(params, r, m, opts);
    const bool pass = o.all_pass;
    res.log.emplace_back(n, std::move(o));
    if (pass) {
      res.n = n;
      break;
    }
  }
  return res;
}

std::uint64_t tau_image_size(std::uint32_t p, std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw Error(Errc::BadArity, "need 1 <= k <= n");
  PrimeField f(p);
  auto bases = rcef_bases(f, n, k);
  FFMatrix first = bases.front();
  Code least = gf::mat_encode(first);
  for (const auto& b : bases)
    if (Code c = gf::mat_encode(b); c < least) {
      least = c;
      first = b;
    }
  std::set<Code> image;
  for (const auto& g : gf::enumerate_gl(f, k)) image.insert(gf::mat_encode(gf::tau(first * g).matrix()));
  return image.size();
}

}  // namespace ramsey::engine
