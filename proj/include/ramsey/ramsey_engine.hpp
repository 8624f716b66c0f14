#pragma once

// Desk-scale Ramsey factorization search.
//
// Every structure is stored as the mat_encode code of a matrix:
//   grassmannian  n x k RCEF basis matrices of rank k (one per subspace)
//   full_rank     n x k matrices of rank k
//   square        n x n matrices of rank k
//   boolean       n x k 0/1 matrices whose columns partition the rows
//   epi           rigid surjections n -> k as n x k 0/1 matrices
// Witnesses are of the same shape with k replaced by m; the square kind
// takes a pair (R0, R1) and acts by A -> R0 A R1^t.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ramsey/gf_linalg.hpp"

namespace ramsey::engine {

using gf::Code;

enum class Kind { full_rank, grassmannian, square, boolean, epi };

std::string_view kind_name(Kind k) noexcept;
/// Throws Errc::Parse.
Kind parse_kind(std::string_view s);

struct Params {
  Kind kind = Kind::grassmannian;
  std::uint32_t p = 2;  // ignored by boolean and epi
  std::size_t n = 0;
  std::size_t k = 0;

  friend bool operator==(const Params&, const Params&) = default;
};

inline constexpr std::uint64_t kMaxUniverse = std::uint64_t{1} << 26;

/// Size of the universe, saturating at 2^64 - 1.
std::uint64_t structure_count(const Params& params);
/// Codes of the universe in increasing order. Throws Errc::UniverseTooLarge
/// above kMaxUniverse and Errc::BadArity for k = 0 or k > n.
std::vector<Code> enumerate_structures(const Params& params);

class ColoringTable {
 public:
  /// Codes must be exactly the universe of `params` (any order) and colors
  /// must lie in [0, r). Throws Errc::KindMismatch or Errc::BadArity.
  ColoringTable(Params params, std::uint32_t r, std::vector<Code> codes,
                std::vector<std::uint32_t> colors);

  static ColoringTable constant(const Params& params, std::uint32_t r, std::uint32_t color);
  static ColoringTable from_function(const Params& params, std::uint32_t r,
                                     const std::function<std::uint32_t(Code)>& fn);
  /// colors[i] is the color of the i-th structure in increasing code order.
  static ColoringTable from_colors(const Params& params, std::uint32_t r,
                                   std::vector<std::uint32_t> colors);

  const Params& params() const noexcept { return params_; }
  std::uint32_t colors_count() const noexcept { return r_; }
  std::size_t size() const noexcept { return codes_.size(); }
  Code code(std::size_t i) const { return codes_[i]; }
  std::uint32_t color(std::size_t i) const { return colors_[i]; }
  /// Throws Errc::KindMismatch if the code is not in the universe.
  std::uint32_t color_of(Code c) const;
  std::optional<std::size_t> index_of(Code c) const;

  friend bool operator==(const ColoringTable&, const ColoringTable&) = default;

 private:
  Params params_;
  std::uint32_t r_;
  std::vector<Code> codes_;  // increasing
  std::vector<std::uint32_t> colors_;
};

/// CSV: "kind,p,n,k,r", the parameter values, then "code,color" rows.
void write_coloring_csv(std::ostream& out, const ColoringTable& c);
ColoringTable read_coloring_csv(std::istream& in);

struct WitnessReport {
  bool found = false;
  std::vector<Code> witness;  // one code, or (R0, R1) for the square kind
  std::vector<std::pair<Code, std::uint32_t>> factor_table;  // sorted by factor code
  std::uint64_t nodes = 0;  // candidates scanned in order up to the answer
  double millis = 0;
};

struct SearchOptions {
  unsigned jobs = 1;
  /// Quotient colorings by GL(F^n) before searching; grassmannian only.
  bool canonize = false;
  /// Force sampled mode even for r = 2.
  bool sampled = false;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 1;
};

/// Candidate witnesses in increasing (lexicographic) code order.
std::vector<std::vector<Code>> witness_candidates(const Params& params, std::size_t m);

/// Least witness under code order. Throws Errc::BadArity for m < k.
WitnessReport witness_search(const ColoringTable& c, std::size_t m, const SearchOptions& opts = {});

/// Recomputes the sub-universe by brute force and the factor from each
/// product directly, then compares with the report.
bool recheck_witness(const ColoringTable& c, std::size_t m, const WitnessReport& report);

struct SearchOutcome {
  bool all_pass = true;
  bool exhaustive = true;
  std::uint64_t colorings_checked = 0;
  std::optional<ColoringTable> counterexample;
};

/// r = 2 runs through every coloring with the first structure colored 0
/// (swapping colors preserves witnesses); r >= 3 or opts.sampled draws
/// opts.samples colorings from opts.seed.
SearchOutcome exhaust_colorings(const Params& params, std::uint32_t r, std::size_t m,
                                const SearchOptions& opts = {});

struct MinNResult {
  std::optional<std::size_t> n;
  std::vector<std::pair<std::size_t, SearchOutcome>> log;
};

/// params.n is ignored; tries n_lo..n_hi in order and stops at the first AllPass.
MinNResult min_n_search(Params params, std::uint32_t r, std::size_t m, std::size_t n_lo,
                        std::size_t n_hi, const SearchOptions& opts = {});

/// Number of distinct tau(R A) as A ranges over GL(F_p^k), for the first R
/// in E_{n,k}.
std::uint64_t tau_image_size(std::uint32_t p, std::size_t n, std::size_t k);

}  // namespace ramsey::engine
