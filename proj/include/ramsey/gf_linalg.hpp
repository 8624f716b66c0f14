#pragma once

// Exact linear algebra over prime fields GF(p): echelon forms and the
// canonical factor maps used by the Ramsey factorization engine.
//
// Conventions
//   * Entries are residues in [0, p), stored row-major.
//   * The field is ordered by residue value: 0 < 1 < ... < p-1.
//   * A matrix is in RREF when its nonzero rows come first, each leading
//     entry is 1, leading columns strictly increase, and every pivot column
//     is a unit vector. RCEF means the transpose is in RREF.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include "ramsey/error.hpp"

namespace ramsey::gf {

using Residue = std::uint32_t;
using Code = std::uint64_t;

class PrimeField {
 public:
  /// Throws Errc::NotPrime unless 2 <= p <= 2^16 and p is prime.
  explicit PrimeField(std::uint32_t p);

  std::uint32_t order() const noexcept { return p_; }

  Residue add(Residue a, Residue b) const noexcept { return (a + b) % p_; }
  Residue sub(Residue a, Residue b) const noexcept { return (a + p_ - b) % p_; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>((std::uint64_t{a} * b) % p_);
  }
  /// Throws Errc::NotInvertible for zero.
  Residue inv(Residue a) const;
  Residue reduce(std::int64_t v) const noexcept;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

class FFMatrix {
 public:
  FFMatrix(PrimeField field, std::size_t rows, std::size_t cols);
  /// Entries must already be reduced; throws Errc::Parse otherwise.
  FFMatrix(PrimeField field, std::size_t rows, std::size_t cols, std::vector<Residue> entries);

  static FFMatrix identity(PrimeField field, std::size_t n);
  /// Convenience for literals; entries must be < p.
  static FFMatrix from_rows(PrimeField field,
                            std::initializer_list<std::initializer_list<Residue>> rows);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const Residue> entries() const noexcept { return entries_; }

  Residue operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, Residue v);

  std::vector<Residue> row(std::size_t i) const;
  std::vector<Residue> column(std::size_t j) const;
  FFMatrix transpose() const;
  bool is_zero() const noexcept;
  bool is_square() const noexcept { return rows_ == cols_; }

  friend bool operator==(const FFMatrix&, const FFMatrix&) = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> entries_;
};

FFMatrix operator*(const FFMatrix& a, const FFMatrix& b);
std::vector<Residue> operator*(const FFMatrix& a, std::span<const Residue> v);

/// A square invertible matrix; construction verifies invertibility.
class GLMatrix {
 public:
  explicit GLMatrix(FFMatrix m);

  const FFMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.rows(); }
  GLMatrix inverse() const;

  friend bool operator==(const GLMatrix&, const GLMatrix&) = default;

 private:
  FFMatrix m_;
};

inline FFMatrix operator*(const GLMatrix& a, const FFMatrix& b) { return a.matrix() * b; }
inline FFMatrix operator*(const FFMatrix& a, const GLMatrix& b) { return a * b.matrix(); }
inline GLMatrix operator*(const GLMatrix& a, const GLMatrix& b) {
  return GLMatrix(a.matrix() * b.matrix());
}

std::size_t rank(const FFMatrix& a);
bool is_rref(const FFMatrix& a);
bool is_rcef(const FFMatrix& a);
/// Leading columns of the nonzero rows; requires is_rref(a).
std::vector<std::size_t> pivot_columns(const FFMatrix& a);

/// Throws Errc::NotInvertible.
FFMatrix inverse(const FFMatrix& a);

struct RrefResult {
  FFMatrix reduced;
  GLMatrix transform;  // transform * A == reduced
  std::size_t rank;
};

/// Gauss-Jordan elimination with leftmost pivot selection.
RrefResult rank_and_rref(const FFMatrix& a);

struct RcefResult {
  FFMatrix reduced;         // A * tau, in RCEF
  GLMatrix tau;             // the unique invertible matrix with A * tau in RCEF
  FFMatrix right_inverse;   // I for reduced^t: reduced^t * right_inverse == Id
};

/// Throws Errc::RankDeficient unless A has full column rank.
RcefResult rcef_decompose(const FFMatrix& a);
GLMatrix tau(const FFMatrix& a);

/// The 0/1 matrix with ones at (pivot_i, i). Requires an RREF matrix of full
/// row rank (Errc::NotRref otherwise).
FFMatrix right_inverse_of_rref(const FFMatrix& a);

struct FullRankDecomposition {
  FFMatrix left;   // n x k, rank k
  FFMatrix right;  // k x m, rank k
};

/// A = left * right. Throws Errc::ZeroMatrix for rank 0.
FullRankDecomposition full_rank_decomposition(const FFMatrix& a);

/// The invertible Gamma with A = A0 * Gamma * A1^t for A0, A1 in RCEF.
/// Throws Errc::ZeroMatrix for rank 0 and Errc::DimensionMismatch for
/// non-square input.
GLMatrix tau2(const FFMatrix& a);
/// Same value computed from a caller-supplied full rank decomposition.
GLMatrix tau2_from(const FullRankDecomposition& d);

/// Row-major base-p code: entry (i, j) is the digit of weight p^(i*cols+j),
/// so the last entry is the most significant. Throws Errc::Overflow when
/// p^(rows*cols) exceeds 2^64.
Code mat_encode(const FFMatrix& a);
FFMatrix mat_decode(Code code, std::size_t rows, std::size_t cols, PrimeField field);
/// True when every code of the given shape fits in 64 bits.
bool encodable(PrimeField field, std::size_t rows, std::size_t cols) noexcept;

/// |GL(F_p^k)| = prod_{j<k} (p^k - p^j).
std::uint64_t gl_order(std::uint32_t p, std::size_t k);
/// Every element of GL(F_p^k), in increasing code order.
std::vector<GLMatrix> enumerate_gl(PrimeField field, std::size_t k);

/// Text format: "p rows cols" then rows of residues.
FFMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const FFMatrix& a);

}  // namespace ramsey::gf
