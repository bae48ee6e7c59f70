#pragma once

// Reduction-friendly forms and QMDS child extraction.
//
// With R generator rows, block width w = floor(R / 2m), sites j = 1..w are processed in order.
// Site j owns rows R-2mj+1 .. R-2m(j-1) (1-based): the first m carry Z_{alpha^k}, the next m carry
// X_{alpha^k} on site j, and every other row is the identity there. Rows above the blocks
// (R - 2mw of them, m when n is odd) end up with an all-identity left block.
// Row operations are Z_p-linear combinations on symplectic vectors; phases are dropped.

#include <optional>
#include <string>
#include <vector>

#include "ame/code.hpp"
#include "ame/errors.hpp"
#include "ame/pauli.hpp"
#include "ame/stabtab.hpp"
#include "ame/zp_matrix.hpp"

namespace ame {

enum class Layout { even, odd };

inline const char* to_string(Layout l) { return l == Layout::even ? "even" : "odd"; }

struct ReductionFriendlyForm {
  GeneratorTable table;
  int block_width = 0;
  Layout layout = Layout::even;
};

/// How the pivot rows of a site are turned into the Z/X targets.
enum class PivotMethod {
  automatic,  // bezout for prime fields, linear otherwise
  linear,     // C = T * P^-1 on the 2m pivot rows
  bezout,     // prime fields only: solve beta*b + delta*d = 0, then normalize
};

namespace detail {

struct WorkRows {
  int p;
  std::size_t m;
  std::size_t n;
  std::vector<std::vector<int>> rows;

  std::size_t block(std::size_t site) const { return 2 * m * site; }

  void add_multiple(std::size_t dst, std::size_t src, int factor) {
    factor = mod_p(factor, p);
    if (factor == 0) return;
    for (std::size_t c = 0; c < rows[dst].size(); ++c)
      rows[dst][c] = mod_p(rows[dst][c] + static_cast<long long>(factor) * rows[src][c], p);
  }
  void scale(std::size_t r, int factor) {
    for (int& v : rows[r]) v = mod_p(static_cast<long long>(v) * factor, p);
  }
};

inline std::size_t rows_per_site(const FieldSpec& f) { return 2 * static_cast<std::size_t>(f.m()); }

/// Unit target for slot s of a site block: slots 0..m-1 are Z_{alpha^k}, slots m..2m-1 are X_{alpha^k}.
/// In the symplectic layout [x-coeffs | z-coeffs], Z_{alpha^k} is the unit at m+k and X_{alpha^k} at k.
inline std::size_t target_column(std::size_t slot, std::size_t m) { return slot < m ? m + slot : slot - m; }

inline std::vector<std::size_t> lowest_spanning_rows(const WorkRows& w, std::size_t site, std::size_t active) {
  const std::size_t width = 2 * w.m;
  const std::size_t base = w.block(site);
  std::vector<std::size_t> chosen;
  std::vector<std::vector<int>> basis;  // reduced copies, each with a pivot column
  std::vector<std::size_t> pivot_col;
  for (std::size_t r = 0; r < active && chosen.size() < width; ++r) {
    std::vector<int> v(w.rows[r].begin() + static_cast<std::ptrdiff_t>(base),
                       w.rows[r].begin() + static_cast<std::ptrdiff_t>(base + width));
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const int f = v[pivot_col[b]];
      if (f == 0) continue;
      for (std::size_t c = 0; c < width; ++c) v[c] = mod_p(v[c] - static_cast<long long>(f) * basis[b][c], w.p);
    }
    std::size_t pc = width;
    for (std::size_t c = 0; c < width; ++c)
      if (v[c] != 0) {
        pc = c;
        break;
      }
    if (pc == width) continue;
    const int inv = inv_mod(v[pc], w.p);
    for (int& x : v) x = mod_p(static_cast<long long>(x) * inv, w.p);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const int f = basis[b][pc];
      if (f == 0) continue;
      for (std::size_t c = 0; c < width; ++c) basis[b][c] = mod_p(basis[b][c] - static_cast<long long>(f) * v[c], w.p);
    }
    basis.push_back(std::move(v));
    pivot_col.push_back(pc);
    chosen.push_back(r);
  }
  if (chosen.size() < width)
    throw DomainError("no independent pivot on site " + std::to_string(site + 1) + " (only " +
                      std::to_string(chosen.size()) + " of " + std::to_string(width) +
                      " independent non-identity rows)");
  return chosen;
}

/// Replaces the pivot rows by combinations whose site block equals the targets (slot order).
inline void normalize_linear(WorkRows& w, std::size_t site, std::vector<std::size_t>& pivots) {
  const std::size_t width = 2 * w.m;
  const std::size_t base = w.block(site);
  ZpMatrix pm(w.p, width, width);
  for (std::size_t i = 0; i < width; ++i)
    for (std::size_t c = 0; c < width; ++c) pm.at(i, c) = w.rows[pivots[i]][base + c];
  const auto pinv = inverse(pm);
  if (!pinv) throw InvariantError("pivot block is singular");
  ZpMatrix target(w.p, width, width);
  for (std::size_t s = 0; s < width; ++s) target.at(s, target_column(s, w.m)) = 1;
  const ZpMatrix coeff = target.multiply(*pinv);
  std::vector<std::vector<int>> fresh(width, std::vector<int>(w.rows.front().size(), 0));
  for (std::size_t s = 0; s < width; ++s)
    for (std::size_t i = 0; i < width; ++i) {
      const int f = coeff.at(s, i);
      if (f == 0) continue;
      for (std::size_t c = 0; c < fresh[s].size(); ++c)
        fresh[s][c] = mod_p(fresh[s][c] + static_cast<long long>(f) * w.rows[pivots[i]][c], w.p);
    }
  // Pivot rows are assigned to slots in index order.
  for (std::size_t s = 0; s < width; ++s) w.rows[pivots[s]] = std::move(fresh[s]);
}

/// Prime-field path on the two pivot rows u = (a, b), v = (c, d) (site restricted, X then Z exponent).
inline void normalize_bezout(WorkRows& w, std::size_t site, std::vector<std::size_t>& pivots) {
  if (w.m != 1) throw DomainError("the Bezout path needs a prime field");
  const int p = w.p;
  const std::size_t base = w.block(site);
  std::size_t u = pivots[0];
  std::size_t v = pivots[1];
  auto x_of = [&](std::size_t r) { return w.rows[r][base]; };
  auto z_of = [&](std::size_t r) { return w.rows[r][base + 1]; };

  if (z_of(u) == 0) std::swap(u, v);  // some pivot has a Z part since the pair spans the site
  const int b = z_of(u);
  const int d = z_of(v);
  // Eliminate Z^d: smallest (beta, delta), delta != 0, with beta*b + delta*d = 0.
  int beta = -1, delta = -1;
  for (int bb = 0; bb < p && beta < 0; ++bb)
    for (int dd = 1; dd < p; ++dd)
      if (mod_p(static_cast<long long>(bb) * b + static_cast<long long>(dd) * d, p) == 0) {
        beta = bb;
        delta = dd;
        break;
      }
  if (beta < 0) throw InvariantError("no Bezout solution");
  // v' = u^beta v^delta has site (c', 0).
  w.scale(v, delta);
  w.add_multiple(v, u, beta);
  const int cprime = x_of(v);
  if (cprime == 0 || z_of(v) != 0) throw InvariantError("Bezout elimination left a degenerate row");
  w.scale(v, inv_mod(cprime, p));  // X
  // u <- u * X^(-a), then scale to Z.
  w.add_multiple(u, v, p - x_of(u));
  w.scale(u, inv_mod(z_of(u), p));  // Z
  pivots = {u, v};
}

inline void clear_site(WorkRows& w, std::size_t site, const std::vector<std::size_t>& pivots) {
  const std::size_t width = 2 * w.m;
  const std::size_t base = w.block(site);
  std::vector<bool> is_pivot(w.rows.size(), false);
  for (std::size_t r : pivots) is_pivot[r] = true;
  for (std::size_t r = 0; r < w.rows.size(); ++r) {
    if (is_pivot[r]) continue;
    for (std::size_t s = 0; s < width; ++s) {
      const int f = w.rows[r][base + target_column(s, w.m)];
      if (f != 0) w.add_multiple(r, pivots[s], w.p - f);
    }
  }
}

inline void check_table_for_reduction(const GeneratorTable& t) {
  if (t.gens.size() != t.expected_generator_count())
    throw DomainError("table has " + std::to_string(t.gens.size()) + " generators, expected " +
                      std::to_string(t.expected_generator_count()));
  for (const auto& g : t.gens)
    if (static_cast<int>(g.size()) != t.n || !same_field(g.field(), t.field))
      throw DomainError("generator shape or field mismatch");
  if (auto c = check_commutation(t); !c.ok)
    throw DomainError("generators g" + std::to_string(c.first) + " and g" + std::to_string(c.second) + " do not commute");
  if (auto i = check_independence(t); !i.ok) throw DomainError("generators are not independent");
}

}  // namespace detail

/// Lowest-index rows (0-based) whose restriction to `site` (0-based) spans the site's symplectic space.
inline std::vector<std::size_t> find_pivot_rows(const GeneratorTable& t, std::size_t site) {
  if (site >= static_cast<std::size_t>(t.n)) throw DomainError("site out of range");
  detail::WorkRows w{t.field->p(), static_cast<std::size_t>(t.field->m()), static_cast<std::size_t>(t.n), {}};
  for (const auto& g : t.gens) w.rows.push_back(to_symplectic(g));
  return detail::lowest_spanning_rows(w, site, w.rows.size());
}

inline ReductionFriendlyForm to_reduction_friendly(const GeneratorTable& t, PivotMethod method = PivotMethod::automatic) {
  detail::check_table_for_reduction(t);
  const FieldSpec& f = *t.field;
  if (method == PivotMethod::automatic) method = f.is_prime_field() ? PivotMethod::bezout : PivotMethod::linear;
  if (method == PivotMethod::bezout && !f.is_prime_field()) throw DomainError("the Bezout path needs a prime field");

  detail::WorkRows w{f.p(), static_cast<std::size_t>(f.m()), static_cast<std::size_t>(t.n), {}};
  for (const auto& g : t.gens) w.rows.push_back(to_symplectic(g));
  const std::size_t R = w.rows.size();
  const std::size_t per = 2 * w.m;
  const std::size_t width = R / per;

  for (std::size_t j = 0; j < width; ++j) {
    const std::size_t active = R - per * j;
    std::vector<std::size_t> pivots = detail::lowest_spanning_rows(w, j, active);
    if (method == PivotMethod::bezout)
      detail::normalize_bezout(w, j, pivots);
    else
      detail::normalize_linear(w, j, pivots);
    detail::clear_site(w, j, pivots);

    // Non-pivot active rows keep their order; pivots move to the bottom of the active range.
    std::vector<bool> is_pivot(R, false);
    for (std::size_t r : pivots) is_pivot[r] = true;
    std::vector<std::vector<int>> reordered;
    reordered.reserve(R);
    for (std::size_t r = 0; r < active; ++r)
      if (!is_pivot[r]) reordered.push_back(std::move(w.rows[r]));
    for (std::size_t r : pivots) reordered.push_back(std::move(w.rows[r]));
    for (std::size_t r = active; r < R; ++r) reordered.push_back(std::move(w.rows[r]));
    w.rows = std::move(reordered);
  }

  ReductionFriendlyForm out;
  out.table = t;
  out.table.gens.clear();
  for (const auto& row : w.rows) out.table.gens.push_back(from_symplectic(t.field, row));
  out.block_width = static_cast<int>(width);
  out.layout = R == per * width ? Layout::even : Layout::odd;
  return out;
}

/// Empty string if the left block matches the staircase layout, else a description of the first mismatch.
inline std::string layout_mismatch(const GeneratorTable& t, int block_width) {
  const FieldSpec& f = *t.field;
  const std::size_t m = static_cast<std::size_t>(f.m());
  const std::size_t per = 2 * m;
  const std::size_t R = t.gens.size();
  if (static_cast<std::size_t>(block_width) * per > R) return "block width exceeds the row count";
  if (block_width > t.n) return "block width exceeds the site count";
  for (std::size_t j = 0; j < static_cast<std::size_t>(block_width); ++j) {
    const std::size_t first = R - per * (j + 1);
    for (std::size_t r = 0; r < R; ++r) {
      SiteOp want{};
      if (r >= first && r < first + per) {
        const std::size_t slot = r - first;
        const int a = f.alpha_power(static_cast<long long>(slot % m));
        want = slot < m ? SiteOp{0, a} : SiteOp{a, 0};
      }
      if (!(t.gens[r].site(j) == want))
        return "row " + std::to_string(r + 1) + " site " + std::to_string(j + 1) + ": expected " + format_site(want) +
               ", found " + format_site(t.gens[r].site(j));
    }
  }
  return {};
}

inline bool matches_layout(const ReductionFriendlyForm& f) { return layout_mismatch(f.table, f.block_width).empty(); }

/// Drops the last 2m rows and site 1: [[n, k, d]] -> [[n-1, k+1, d-1]]. Needs block width >= 2.
inline ReductionFriendlyForm child_form(const ReductionFriendlyForm& f) {
  if (f.block_width < 2)
    throw DomainError("no reduction step remains for " + f.table.label() + " (block width " +
                      std::to_string(f.block_width) + ")");
  if (auto why = layout_mismatch(f.table, f.block_width); !why.empty())
    throw DomainError("input is not in reduction-friendly form: " + why);
  const std::size_t per = detail::rows_per_site(*f.table.field);
  ReductionFriendlyForm out;
  GeneratorTable& c = out.table;
  c.field = f.table.field;
  c.n = f.table.n - 1;
  c.k = f.table.k + 1;
  if (f.table.d) c.d = *f.table.d - 1;
  const std::size_t keep = f.table.gens.size() - per;
  for (std::size_t r = 0; r < keep; ++r) {
    const auto sites = f.table.gens[r].sites();
    c.gens.emplace_back(c.field, std::vector<SiteOp>(sites.begin() + 1, sites.end()));
  }
  out.block_width = f.block_width - 1;
  out.layout = f.layout;
  return out;
}

inline GeneratorTable child_code(const ReductionFriendlyForm& f) { return child_form(f).table; }

struct FamilyMember {
  CodeParams params;  // d is the expected floor(n/2)+1-k of the parent family
  GeneratorTable table;
  bool commutes = false;
  bool independent = false;
  std::optional<int> verified_distance;  // nullopt if the scan ran out of budget or range
  std::string budget_note;

  bool verified() const { return commutes && independent && verified_distance && *verified_distance == params.d; }
};

/// Parent at k = 0 followed by every child down to block width 1.
inline std::vector<FamilyMember> derive_family(const GeneratorTable& t, const DistanceOptions& opt = {},
                                               PivotMethod method = PivotMethod::automatic) {
  if (t.k != 0) throw DomainError("family derivation starts from a k=0 table");
  ReductionFriendlyForm f = to_reduction_friendly(t, method);
  const int d0 = t.d ? *t.d : t.n / 2 + 1;
  f.table.d = d0;
  std::vector<FamilyMember> out;
  while (true) {
    FamilyMember mbr;
    mbr.table = f.table;
    mbr.params = {f.table.n, f.table.k, d0 - f.table.k, f.table.q()};
    mbr.table.d = mbr.params.d;
    mbr.commutes = check_commutation(mbr.table).ok;
    mbr.independent = check_independence(mbr.table).ok;
    try {
      const DistanceResult r = compute_distance(mbr.table, mbr.params.d + 1, opt);
      mbr.verified_distance = r.distance;
      if (!r.distance) mbr.budget_note = "distance exceeds " + std::to_string(r.d_max);
    } catch (const ResourceError& e) {
      mbr.budget_note = e.what();
    }
    out.push_back(std::move(mbr));
    if (f.block_width < 2) break;
    f = child_form(f);
  }
  return out;
}

}  // namespace ame
