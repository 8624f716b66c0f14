#include "ramsey/gf_linalg.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>

namespace ramsey::gf {

namespace {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p > (1u << 16) || !is_prime(p))
    throw Error(Errc::NotPrime, "field order " + std::to_string(p) + " is not a prime <= 65536");
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw Error(Errc::NotInvertible, "zero has no inverse");
  // Extended Euclid on (a, p).
  std::int64_t t = 0, new_t = 1, r = p_, new_r = a % p_;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::pair{new_t, t - q * new_t};
    std::tie(r, new_r) = std::pair{new_r, r - q * new_r};
  }
  return reduce(t);
}

Residue PrimeField::reduce(std::int64_t v) const noexcept {
  std::int64_t m = v % static_cast<std::int64_t>(p_);
  if (m < 0) m += p_;
  return static_cast<Residue>(m);
}

FFMatrix::FFMatrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

FFMatrix::FFMatrix(PrimeField field, std::size_t rows, std::size_t cols,
                   std::vector<Residue> entries)
    : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols)
    throw Error(Errc::DimensionMismatch, "entry count does not match shape");
  for (Residue v : entries_)
    if (v >= field_.order())
      throw Error(Errc::Parse, "entry " + std::to_string(v) + " out of range for F_" +
                                   std::to_string(field_.order()));
}

FFMatrix FFMatrix::identity(PrimeField field, std::size_t n) {
  FFMatrix id(field, n, n);
  for (std::size_t i = 0; i < n; ++i) id.entries_[i * n + i] = 1;
  return id;
}

FFMatrix FFMatrix::from_rows(PrimeField field,
                             std::initializer_list<std::initializer_list<Residue>> rows) {
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Residue> e;
  e.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(Errc::DimensionMismatch, "ragged matrix literal");
    e.insert(e.end(), row.begin(), row.end());
  }
  return FFMatrix(field, r, c, std::move(e));
}

void FFMatrix::set(std::size_t i, std::size_t j, Residue v) {
  entries_[i * cols_ + j] = v % field_.order();
}

std::vector<Residue> FFMatrix::row(std::size_t i) const {
  return {entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
          entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

std::vector<Residue> FFMatrix::column(std::size_t j) const {
  std::vector<Residue> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

FFMatrix FFMatrix::transpose() const {
  FFMatrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.entries_[j * rows_ + i] = (*this)(i, j);
  return t;
}

bool FFMatrix::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](Residue v) { return v == 0; });
}

FFMatrix operator*(const FFMatrix& a, const FFMatrix& b) {
  if (a.field() != b.field()) throw Error(Errc::DimensionMismatch, "field mismatch");
  if (a.cols() != b.rows()) throw Error(Errc::DimensionMismatch, "inner dimensions differ");
  const std::uint64_t p = a.field().order();
  FFMatrix c(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::uint64_t acc = 0;
      for (std::size_t l = 0; l < a.cols(); ++l) acc = (acc + std::uint64_t{a(i, l)} * b(l, j)) % p;
      c.set(i, j, static_cast<Residue>(acc));
    }
  return c;
}

std::vector<Residue> operator*(const FFMatrix& a, std::span<const Residue> v) {
  if (v.size() != a.cols()) throw Error(Errc::DimensionMismatch, "vector length differs");
  const std::uint64_t p = a.field().order();
  std::vector<Residue> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t l = 0; l < a.cols(); ++l) acc = (acc + std::uint64_t{a(i, l)} * v[l]) % p;
    out[i] = static_cast<Residue>(acc);
  }
  return out;
}

GLMatrix::GLMatrix(FFMatrix m) : m_(std::move(m)) {
  if (!m_.is_square() || rank(m_) != m_.rows())
    throw Error(Errc::NotInvertible, "matrix is not square invertible");
}

GLMatrix GLMatrix::inverse() const { return GLMatrix(gf::inverse(m_)); }

namespace {

// In-place Gauss-Jordan on `w`, restricted to the first `ncols` columns for
// pivot search. Returns the pivot columns.
std::vector<std::size_t> eliminate(FFMatrix& w, std::size_t ncols) {
  const PrimeField& f = w.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < w.rows(); ++c) {
    std::size_t sel = r;
    while (sel < w.rows() && w(sel, c) == 0) ++sel;
    if (sel == w.rows()) continue;
    if (sel != r)
      for (std::size_t j = 0; j < w.cols(); ++j) {
        Residue tmp = w(r, j);
        w.set(r, j, w(sel, j));
        w.set(sel, j, tmp);
      }
    Residue s = f.inv(w(r, c));
    for (std::size_t j = 0; j < w.cols(); ++j) w.set(r, j, f.mul(w(r, j), s));
    for (std::size_t i = 0; i < w.rows(); ++i) {
      if (i == r || w(i, c) == 0) continue;
      Residue factor = w(i, c);
      for (std::size_t j = 0; j < w.cols(); ++j)
        w.set(i, j, f.sub(w(i, j), f.mul(factor, w(r, j))));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const FFMatrix& a) {
  FFMatrix w = a;
  return eliminate(w, w.cols()).size();
}

bool is_rref(const FFMatrix& a) {
  std::size_t prev_lead = 0;
  bool seen_zero_row = false;
  bool first = true;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::size_t lead = 0;
    while (lead < a.cols() && a(i, lead) == 0) ++lead;
    if (lead == a.cols()) {
      seen_zero_row = true;
      continue;
    }
    if (seen_zero_row) return false;
    if (!first && lead <= prev_lead) return false;
    if (a(i, lead) != 1) return false;
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (r != i && a(r, lead) != 0) return false;
    prev_lead = lead;
    first = false;
  }
  return true;
}

bool is_rcef(const FFMatrix& a) { return is_rref(a.transpose()); }

std::vector<std::size_t> pivot_columns(const FFMatrix& a) {
  if (!is_rref(a)) throw Error(Errc::NotRref, "pivot_columns requires an RREF matrix");
  std::vector<std::size_t> piv;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::size_t lead = 0;
    while (lead < a.cols() && a(i, lead) == 0) ++lead;
    if (lead == a.cols()) break;
    piv.push_back(lead);
  }
  return piv;
}

FFMatrix inverse(const FFMatrix& a) {
  if (!a.is_square()) throw Error(Errc::NotInvertible, "non-square matrix");
  RrefResult r = rank_and_rref(a);
  if (r.rank != a.rows()) throw Error(Errc::NotInvertible, "singular matrix");
  return r.transform.matrix();
}

RrefResult rank_and_rref(const FFMatrix& a) {
  const std::size_t n = a.rows(), m = a.cols();
  FFMatrix w(a.field(), n, m + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) w.set(i, j, a(i, j));
    w.set(i, m + i, 1);
  }
  std::size_t rk = eliminate(w, m).size();
  FFMatrix reduced(a.field(), n, m), transform(a.field(), n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) reduced.set(i, j, w(i, j));
    for (std::size_t j = 0; j < n; ++j) transform.set(i, j, w(i, m + j));
  }
  // The transform is a product of elementary matrices, hence invertible; the
  // GLMatrix constructor re-verifies it.
  return RrefResult{std::move(reduced), GLMatrix(std::move(transform)), rk};
}

FFMatrix right_inverse_of_rref(const FFMatrix& a) {
  if (!is_rref(a)) throw Error(Errc::NotRref, "matrix is not in RREF");
  std::vector<std::size_t> piv = pivot_columns(a);
  if (piv.size() != a.rows()) throw Error(Errc::NotRref, "RREF matrix lacks full row rank");
  FFMatrix ia(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < piv.size(); ++i) ia.set(piv[i], i, 1);
  return ia;
}

RcefResult rcef_decompose(const FFMatrix& a) {
  RrefResult r = rank_and_rref(a.transpose());
  if (r.rank != a.cols())
    throw Error(Errc::RankDeficient, "rank " + std::to_string(r.rank) + " < " +
                                         std::to_string(a.cols()) + " columns");
  // U * A^t = R^t  <=>  A * U^t = R.
  FFMatrix reduced = r.reduced.transpose();
  FFMatrix ia = right_inverse_of_rref(r.reduced);
  return RcefResult{std::move(reduced), GLMatrix(r.transform.matrix().transpose()), std::move(ia)};
}

GLMatrix tau(const FFMatrix& a) { return rcef_decompose(a).tau; }

FullRankDecomposition full_rank_decomposition(const FFMatrix& a) {
  RrefResult r = rank_and_rref(a);
  if (r.rank == 0) throw Error(Errc::ZeroMatrix, "full rank decomposition of a zero matrix");
  const std::size_t k = r.rank;
  FFMatrix uinv = gf::inverse(r.transform.matrix());
  FFMatrix left(a.field(), a.rows(), k), right(a.field(), k, a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) left.set(i, j, uinv(i, j));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) right.set(i, j, r.reduced(i, j));
  return {std::move(left), std::move(right)};
}

GLMatrix tau2_from(const FullRankDecomposition& d) {
  // left = A0 * tau(left)^-1 and right^t = A1 * tau(right^t)^-1, so
  // A = A0 * [tau(left)^-1 * (tau(right^t)^-1)^t] * A1^t.
  GLMatrix t0 = tau(d.left);
  GLMatrix t1 = tau(d.right.transpose());
  return GLMatrix(t0.inverse().matrix() * t1.inverse().matrix().transpose());
}

GLMatrix tau2(const FFMatrix& a) {
  if (!a.is_square()) throw Error(Errc::DimensionMismatch, "tau2 requires a square matrix");
  return tau2_from(full_rank_decomposition(a));
}

bool encodable(PrimeField field, std::size_t rows, std::size_t cols) noexcept {
  unsigned __int128 bound = 1;
  const unsigned __int128 limit = static_cast<unsigned __int128>(1) << 64;
  for (std::size_t i = 0; i < rows * cols; ++i) {
    bound *= field.order();
    if (bound > limit) return false;
  }
  return true;
}

Code mat_encode(const FFMatrix& a) {
  if (!encodable(a.field(), a.rows(), a.cols()))
    throw Error(Errc::Overflow, "matrix code exceeds 64 bits");
  Code code = 0;
  auto e = a.entries();
  for (std::size_t i = e.size(); i-- > 0;) code = code * a.field().order() + e[i];
  return code;
}

FFMatrix mat_decode(Code code, std::size_t rows, std::size_t cols, PrimeField field) {
  if (!encodable(field, rows, cols)) throw Error(Errc::Overflow, "matrix code exceeds 64 bits");
  std::vector<Residue> e(rows * cols);
  for (auto& v : e) {
    v = static_cast<Residue>(code % field.order());
    code /= field.order();
  }
  if (code != 0) throw Error(Errc::Overflow, "code out of range for the given shape");
  return FFMatrix(field, rows, cols, std::move(e));
}

std::uint64_t gl_order(std::uint32_t p, std::size_t k) {
  std::uint64_t pk = 1;
  for (std::size_t i = 0; i < k; ++i) pk *= p;
  std::uint64_t order = 1, pj = 1;
  for (std::size_t j = 0; j < k; ++j) {
    order *= pk - pj;
    pj *= p;
  }
  return order;
}

std::vector<GLMatrix> enumerate_gl(PrimeField field, std::size_t k) {
  if (!encodable(field, k, k)) throw Error(Errc::Overflow, "GL enumeration too large");
  Code total = 1;
  for (std::size_t i = 0; i < k * k; ++i) total *= field.order();
  std::vector<GLMatrix> out;
  out.reserve(gl_order(field.order(), k));
  for (Code c = 0; c < total; ++c) {
    FFMatrix m = mat_decode(c, k, k, field);
    if (rank(m) == k) out.emplace_back(std::move(m));
  }
  return out;
}

FFMatrix read_matrix(std::istream& in) {
  std::int64_t p = 0, rows = -1, cols = -1;
  if (!(in >> p >> rows >> cols) || rows < 0 || cols < 0 || p < 2)
    throw Error(Errc::Parse, "expected header 'p rows cols'");
  PrimeField field(static_cast<std::uint32_t>(p));
  std::vector<Residue> e;
  e.reserve(static_cast<std::size_t>(rows * cols));
  for (std::int64_t i = 0; i < rows * cols; ++i) {
    std::int64_t v;
    if (!(in >> v)) throw Error(Errc::Parse, "matrix body truncated");
    if (v < 0 || v >= p)
      throw Error(Errc::Parse, "entry " + std::to_string(v) + " outside [0, p)");
    e.push_back(static_cast<Residue>(v));
  }
  std::string extra;
  if (in >> extra) throw Error(Errc::Parse, "trailing data after matrix body");
  return FFMatrix(field, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                  std::move(e));
}

void write_matrix(std::ostream& out, const FFMatrix& a) {
  out << a.field().order() << ' ' << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a(i, j);
    out << '\n';
  }
}

}  // namespace ramsey::gf
