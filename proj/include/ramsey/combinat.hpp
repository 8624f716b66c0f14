#pragma once

// Orders, rigid surjections, set partitions and Boolean matrices.
//
// Finite linearly ordered sets are identified with an initial segment of the
// naturals by rank. For (F_p^k, <_alex) the rank of v is sum_i v_i p^i, which
// is exactly the antilexicographic position: coordinates are compared from
// the highest index downward with the residue order on F_p.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "ramsey/gf_linalg.hpp"

namespace ramsey::combinat {

using gf::FFMatrix;
using gf::PrimeField;
using gf::Residue;

/// Throws Errc::DimensionMismatch for vectors of different length.
std::strong_ordering antilex_cmp(std::span<const Residue> v, std::span<const Residue> w);

class AntilexOrder {
 public:
  AntilexOrder(PrimeField field, std::size_t dim);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t size() const noexcept { return size_; }

  std::uint64_t rank_of(std::span<const Residue> v) const;
  std::vector<Residue> element(std::uint64_t rank) const;

 private:
  PrimeField field_;
  std::size_t dim_;
  std::uint64_t size_;
};

struct Chain {
  std::size_t size;
};

/// The two codomain orders supported by rigid surjections.
using OrderedSet = std::variant<Chain, AntilexOrder>;
std::uint64_t order_size(const OrderedSet& s);

/// True iff `values` (ranks in [0, codomain_size)) is onto and the first
/// occurrence of each value increases with the value.
bool is_rigid_surjection(std::span<const std::uint64_t> values, std::uint64_t codomain_size);

class RigidSurjection {
 public:
  /// Throws Errc::BadArity if the table is not a rigid surjection.
  RigidSurjection(std::vector<std::uint64_t> values, std::uint64_t codomain_size);

  std::size_t domain_size() const noexcept { return values_.size(); }
  std::uint64_t codomain_size() const noexcept { return codomain_size_; }
  std::span<const std::uint64_t> values() const noexcept { return values_; }
  std::uint64_t operator()(std::size_t j) const { return values_[j]; }

  /// (this o inner): inner maps n -> m, this maps m -> k.
  RigidSurjection after(const RigidSurjection& inner) const;

  friend bool operator==(const RigidSurjection&, const RigidSurjection&) = default;

 private:
  std::vector<std::uint64_t> values_;
  std::uint64_t codomain_size_;
};

/// Lexicographic (by value table) list of Epi(n, s). Throws
/// Errc::TooSmallDomain when s > n.
std::vector<RigidSurjection> enumerate_epi(std::size_t n, std::uint64_t s);

/// Value table of x -> A x on F_p^cols, both sides ranked antilexicographically.
std::vector<std::uint64_t> linear_map_table(const FFMatrix& a);

/// Matrix whose j-th row is f(j) in F_p^k.
FFMatrix phi(const RigidSurjection& f, const AntilexOrder& codomain);
/// Inverse of phi on its image: reads rows back as antilex ranks.
RigidSurjection phi_inverse(const FFMatrix& a);

/// The antilex-least x with A x = w, computed as I_A w. Throws Errc::NotRref
/// unless A is in RREF with full row rank.
std::vector<Residue> min_preimage(const FFMatrix& a, std::span<const Residue> w);

class SetPartition {
 public:
  /// Blocks must be disjoint, nonempty and cover {0..n-1}; they are stored
  /// sorted by least element. Throws Errc::BadArity otherwise.
  SetPartition(std::size_t n, std::vector<std::vector<std::size_t>> blocks);
  /// From a restricted growth string.
  static SetPartition from_rgs(std::span<const std::size_t> rgs);

  std::size_t ground_size() const noexcept { return n_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  std::vector<std::size_t> rgs() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> blocks_;
};

/// All partitions of n into exactly k blocks in restricted-growth order.
/// Throws Errc::BadArity unless 1 <= k <= n.
std::vector<SetPartition> enumerate_partitions(std::size_t n, std::size_t k);
/// The k-block partitions whose blocks are unions of blocks of p.
std::vector<SetPartition> coarsenings(const SetPartition& p, std::size_t k);

/// An n x k 0/1 matrix whose columns partition the row set.
class BooleanMatrix {
 public:
  /// Throws Errc::NotBooleanPartition.
  explicit BooleanMatrix(FFMatrix m);
  /// Row i gets its single 1 in column assignment[i].
  static BooleanMatrix from_assignment(std::span<const std::size_t> assignment, std::size_t k);

  const FFMatrix& matrix() const noexcept { return m_; }
  /// Column index of the 1 in each row.
  std::vector<std::size_t> assignment() const;
  /// Column minima strictly increasing.
  bool is_ordered() const;

  friend bool operator==(const BooleanMatrix&, const BooleanMatrix&) = default;

 private:
  FFMatrix m_;
};

FFMatrix permutation_matrix(std::span<const std::size_t> sigma);

struct PiFactor {
  BooleanMatrix ordered;
  /// Column i of A is column sigma[i] of `ordered`; as a matrix
  /// A = ordered * permutation_matrix(sigma).
  std::vector<std::size_t> sigma;
};

PiFactor pi_factor(const BooleanMatrix& a);

/// M^ba_{n,k}, or M^oba_{n,k} when ordered_only, in lexicographic order of
/// the row assignment.
std::vector<BooleanMatrix> enumerate_boolean(std::size_t n, std::size_t k, bool ordered_only);

/// Canonical order on subsets of a chain given as bitmasks: s < t iff the
/// least element of the symmetric difference lies in s.
bool canonical_less(std::uint64_t s, std::uint64_t t);

/// Text formats: partition "n k" then one block per line; rigid surjection
/// "n |S|" then the value table.
SetPartition read_partition(std::istream& in);
void write_partition(std::ostream& out, const SetPartition& p);
RigidSurjection read_rigid_surjection(std::istream& in);
void write_rigid_surjection(std::ostream& out, const RigidSurjection& f);

}  // namespace ramsey::combinat
