#include "ramsey/combinat.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace ramsey::combinat {

std::strong_ordering antilex_cmp(std::span<const Residue> v, std::span<const Residue> w) {
  if (v.size() != w.size()) throw Error(Errc::DimensionMismatch, "antilex_cmp on unequal lengths");
  for (std::size_t i = v.size(); i-- > 0;)
    if (v[i] != w[i]) return v[i] <=> w[i];
  return std::strong_ordering::equal;
}

AntilexOrder::AntilexOrder(PrimeField field, std::size_t dim) : field_(field), dim_(dim), size_(1) {
  for (std::size_t i = 0; i < dim; ++i) {
    if (size_ > std::numeric_limits<std::uint64_t>::max() / field.order())
      throw Error(Errc::Overflow, "antilex order too large to rank");
    size_ *= field.order();
  }
}

std::uint64_t AntilexOrder::rank_of(std::span<const Residue> v) const {
  if (v.size() != dim_) throw Error(Errc::DimensionMismatch, "vector dimension");
  std::uint64_t r = 0;
  for (std::size_t i = dim_; i-- > 0;) r = r * field_.order() + v[i];
  return r;
}

std::vector<Residue> AntilexOrder::element(std::uint64_t rank) const {
  std::vector<Residue> v(dim_);
  for (auto& x : v) {
    x = static_cast<Residue>(rank % field_.order());
    rank /= field_.order();
  }
  return v;
}

std::uint64_t order_size(const OrderedSet& s) {
  return std::visit(
      [](const auto& o) -> std::uint64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(o)>, Chain>)
          return o.size;
        else
          return o.size();
      },
      s);
}

bool is_rigid_surjection(std::span<const std::uint64_t> values, std::uint64_t codomain_size) {
  // Walking the domain in order, each new value must be exactly the next
  // unseen one; that is equivalent to increasing preimage minima.
  std::uint64_t next = 0;
  for (std::uint64_t v : values) {
    if (v >= codomain_size) return false;
    if (v == next)
      ++next;
    else if (v > next)
      return false;
  }
  return next == codomain_size;
}

RigidSurjection::RigidSurjection(std::vector<std::uint64_t> values, std::uint64_t codomain_size)
    : values_(std::move(values)), codomain_size_(codomain_size) {
  if (!is_rigid_surjection(values_, codomain_size_))
    throw Error(Errc::BadArity, "value table is not a rigid surjection");
}

RigidSurjection RigidSurjection::after(const RigidSurjection& inner) const {
  if (inner.codomain_size() != domain_size())
    throw Error(Errc::DimensionMismatch, "composition of incompatible rigid surjections");
  std::vector<std::uint64_t> v(inner.domain_size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = values_[inner(j)];
  return RigidSurjection(std::move(v), codomain_size_);
}

std::vector<RigidSurjection> enumerate_epi(std::size_t n, std::uint64_t s) {
  if (s > n) throw Error(Errc::TooSmallDomain, "codomain larger than domain");
  std::vector<RigidSurjection> out;
  if (s == 0) {
    if (n == 0) out.emplace_back(std::vector<std::uint64_t>{}, 0);
    return out;
  }
  std::vector<std::uint64_t> table(n, 0);
  // Depth-first in lexicographic order; `seen` is the number of distinct
  // values used so far (always a prefix 0..seen-1).
  auto rec = [&](auto&& self, std::size_t pos, std::uint64_t seen) -> void {
    if (pos == n) {
      if (seen == s) out.emplace_back(table, s);
      return;
    }
    const std::uint64_t remaining = n - pos;
    for (std::uint64_t v = 0; v <= std::min<std::uint64_t>(seen, s - 1); ++v) {
      std::uint64_t seen2 = v == seen ? seen + 1 : seen;
      if (s - seen2 > remaining - 1) continue;
      table[pos] = v;
      self(self, pos + 1, seen2);
    }
  };
  rec(rec, 0, 0);
  return out;
}

std::vector<std::uint64_t> linear_map_table(const FFMatrix& a) {
  AntilexOrder dom(a.field(), a.cols()), cod(a.field(), a.rows());
  std::vector<std::uint64_t> table(dom.size());
  for (std::uint64_t x = 0; x < dom.size(); ++x) {
    std::vector<Residue> v = dom.element(x);
    table[x] = cod.rank_of(a * std::span<const Residue>(v));
  }
  return table;
}

FFMatrix phi(const RigidSurjection& f, const AntilexOrder& codomain) {
  if (f.codomain_size() != codomain.size())
    throw Error(Errc::DimensionMismatch, "rigid surjection codomain is not F^k");
  FFMatrix m(codomain.field(), f.domain_size(), codomain.dim());
  for (std::size_t j = 0; j < f.domain_size(); ++j) {
    std::vector<Residue> row = codomain.element(f(j));
    for (std::size_t i = 0; i < row.size(); ++i) m.set(j, i, row[i]);
  }
  return m;
}

RigidSurjection phi_inverse(const FFMatrix& a) {
  AntilexOrder cod(a.field(), a.cols());
  std::vector<std::uint64_t> v(a.rows());
  for (std::size_t j = 0; j < a.rows(); ++j) v[j] = cod.rank_of(a.row(j));
  return RigidSurjection(std::move(v), cod.size());
}

std::vector<Residue> min_preimage(const FFMatrix& a, std::span<const Residue> w) {
  FFMatrix ia = gf::right_inverse_of_rref(a);
  return ia * w;
}

SetPartition::SetPartition(std::size_t n, std::vector<std::vector<std::size_t>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  std::vector<bool> hit(n, false);
  for (auto& b : blocks_) {
    if (b.empty()) throw Error(Errc::BadArity, "empty block");
    std::sort(b.begin(), b.end());
    for (std::size_t x : b) {
      if (x >= n || hit[x]) throw Error(Errc::BadArity, "blocks overlap or exceed ground set");
      hit[x] = true;
    }
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end())
    throw Error(Errc::BadArity, "blocks do not cover the ground set");
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
}

SetPartition SetPartition::from_rgs(std::span<const std::size_t> rgs) {
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    if (rgs[i] > blocks.size()) throw Error(Errc::BadArity, "not a restricted growth string");
    if (rgs[i] == blocks.size()) blocks.emplace_back();
    blocks[rgs[i]].push_back(i);
  }
  return SetPartition(rgs.size(), std::move(blocks));
}

std::vector<std::size_t> SetPartition::rgs() const {
  std::vector<std::size_t> r(n_);
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (std::size_t x : blocks_[b]) r[x] = b;
  return r;
}

std::vector<SetPartition> enumerate_partitions(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw Error(Errc::BadArity, "need 1 <= k <= n");
  // Restricted growth strings are exactly rigid surjections n -> k.
  std::vector<SetPartition> out;
  for (const auto& f : enumerate_epi(n, k)) {
    std::vector<std::size_t> rgs(f.values().begin(), f.values().end());
    out.push_back(SetPartition::from_rgs(rgs));
  }
  return out;
}

std::vector<SetPartition> coarsenings(const SetPartition& p, std::size_t k) {
  if (k < 1 || k > p.block_count()) throw Error(Errc::BadArity, "need 1 <= k <= #blocks");
  std::vector<SetPartition> out;
  for (const auto& merge : enumerate_partitions(p.block_count(), k)) {
    std::vector<std::vector<std::size_t>> blocks(k);
    std::vector<std::size_t> g = merge.rgs();
    for (std::size_t b = 0; b < p.block_count(); ++b)
      blocks[g[b]].insert(blocks[g[b]].end(), p.blocks()[b].begin(), p.blocks()[b].end());
    out.emplace_back(p.ground_size(), std::move(blocks));
  }
  return out;
}

BooleanMatrix::BooleanMatrix(FFMatrix m) : m_(std::move(m)) {
  if (m_.field().order() != 2) throw Error(Errc::NotBooleanPartition, "Boolean matrices live over F_2");
  std::vector<bool> col_hit(m_.cols(), false);
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < m_.cols(); ++j)
      if (m_(i, j)) {
        ++ones;
        col_hit[j] = true;
      }
    if (ones != 1) throw Error(Errc::NotBooleanPartition, "row without exactly one 1");
  }
  if (std::find(col_hit.begin(), col_hit.end(), false) != col_hit.end())
    throw Error(Errc::NotBooleanPartition, "zero column");
}

BooleanMatrix BooleanMatrix::from_assignment(std::span<const std::size_t> assignment,
                                             std::size_t k) {
  FFMatrix m(PrimeField(2), assignment.size(), k);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] >= k) throw Error(Errc::NotBooleanPartition, "assignment out of range");
    m.set(i, assignment[i], 1);
  }
  return BooleanMatrix(std::move(m));
}

std::vector<std::size_t> BooleanMatrix::assignment() const {
  std::vector<std::size_t> a(m_.rows());
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = 0; j < m_.cols(); ++j)
      if (m_(i, j)) a[i] = j;
  return a;
}

bool BooleanMatrix::is_ordered() const {
  std::vector<std::uint64_t> a;
  for (std::size_t x : assignment()) a.push_back(x);
  return is_rigid_surjection(a, m_.cols());
}

FFMatrix permutation_matrix(std::span<const std::size_t> sigma) {
  FFMatrix p(PrimeField(2), sigma.size(), sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) p.set(sigma[i], i, 1);
  return p;
}

PiFactor pi_factor(const BooleanMatrix& a) {
  std::vector<std::size_t> asg = a.assignment();
  const std::size_t k = a.matrix().cols();
  // Relabel columns in order of first appearance.
  std::vector<std::size_t> sigma(k, k);
  std::size_t next = 0;
  for (std::size_t c : asg)
    if (sigma[c] == k) sigma[c] = next++;
  std::vector<std::size_t> ordered(asg.size());
  for (std::size_t i = 0; i < asg.size(); ++i) ordered[i] = sigma[asg[i]];
  return PiFactor{BooleanMatrix::from_assignment(ordered, k), std::move(sigma)};
}

std::vector<BooleanMatrix> enumerate_boolean(std::size_t n, std::size_t k, bool ordered_only) {
  std::vector<BooleanMatrix> out;
  if (k == 0 || k > n) return out;
  if (ordered_only) {
    for (const auto& f : enumerate_epi(n, k)) {
      std::vector<std::size_t> a(f.values().begin(), f.values().end());
      out.push_back(BooleanMatrix::from_assignment(a, k));
    }
    return out;
  }
  std::vector<std::size_t> a(n, 0);
  while (true) {
    std::vector<bool> hit(k, false);
    for (std::size_t x : a) hit[x] = true;
    if (std::find(hit.begin(), hit.end(), false) == hit.end())
      out.push_back(BooleanMatrix::from_assignment(a, k));
    std::size_t pos = n;
    while (pos-- > 0) {
      if (++a[pos] < k) break;
      a[pos] = 0;
    }
    if (pos == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

bool canonical_less(std::uint64_t s, std::uint64_t t) {
  std::uint64_t d = s ^ t;
  if (d == 0) return false;
  std::uint64_t least = d & (~d + 1);
  return (s & least) != 0;
}

SetPartition read_partition(std::istream& in) {
  std::size_t n = 0, k = 0;
  if (!(in >> n >> k)) throw Error(Errc::Parse, "expected header 'n k'");
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<std::size_t>> blocks;
  while (blocks.size() < k && std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::size_t> b;
    long long x;
    while (ls >> x) {
      if (x < 0) throw Error(Errc::Parse, "negative element");
      b.push_back(static_cast<std::size_t>(x));
    }
    if (!ls.eof()) throw Error(Errc::Parse, "non-numeric block entry");
    if (!b.empty()) blocks.push_back(std::move(b));
  }
  if (blocks.size() != k) throw Error(Errc::Parse, "expected " + std::to_string(k) + " blocks");
  return SetPartition(n, std::move(blocks));
}

void write_partition(std::ostream& out, const SetPartition& p) {
  out << p.ground_size() << ' ' << p.block_count() << '\n';
  for (const auto& b : p.blocks()) {
    for (std::size_t i = 0; i < b.size(); ++i) out << (i ? " " : "") << b[i];
    out << '\n';
  }
}

RigidSurjection read_rigid_surjection(std::istream& in) {
  std::size_t n = 0;
  std::uint64_t s = 0;
  if (!(in >> n >> s)) throw Error(Errc::Parse, "expected header 'n |S|'");
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) {
    long long y;
    if (!(in >> y) || y < 0) throw Error(Errc::Parse, "bad value table");
    x = static_cast<std::uint64_t>(y);
  }
  return RigidSurjection(std::move(v), s);
}

void write_rigid_surjection(std::ostream& out, const RigidSurjection& f) {
  out << f.domain_size() << ' ' << f.codomain_size() << '\n';
  for (std::size_t j = 0; j < f.domain_size(); ++j) out << (j ? " " : "") << f(j);
  out << '\n';
}

}  // namespace ramsey::combinat
