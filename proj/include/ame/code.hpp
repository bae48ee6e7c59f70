#pragma once

// Verification of generator tables: commutation, independence, brute-force distance,
// and stabilizer-side subsystem entropies.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ame/errors.hpp"
#include "ame/pauli.hpp"
#include "ame/stabtab.hpp"
#include "ame/zp_matrix.hpp"

namespace ame {

/// Rows are the symplectic vectors of the generators (length 2mn over Z_p).
inline ZpMatrix symplectic_matrix(const Field& field, std::span<const PauliString> gens) {
  const std::size_t cols = gens.empty() ? 0 : 2 * static_cast<std::size_t>(field->m()) * gens.front().size();
  ZpMatrix m(field->p(), gens.size(), cols);
  for (std::size_t r = 0; r < gens.size(); ++r) {
    auto v = to_symplectic(gens[r]);
    if (v.size() != cols) throw DomainError("generators have different lengths");
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = v[c];
  }
  return m;
}

inline ZpMatrix symplectic_matrix(const GeneratorTable& t) { return symplectic_matrix(t.field, t.gens); }

struct CommutationResult {
  bool ok = true;
  std::size_t first = 0;   // 1-based indices of the first failing pair
  std::size_t second = 0;
  int exponent = 0;
};

inline CommutationResult check_commutation(const GeneratorTable& t) {
  for (std::size_t i = 0; i < t.gens.size(); ++i)
    for (std::size_t j = i + 1; j < t.gens.size(); ++j)
      if (int s = commutation_exp(t.gens[i], t.gens[j]); s != 0) return {false, i + 1, j + 1, s};
  return {};
}

struct IndependenceResult {
  bool ok = true;
  std::size_t rank = 0;
  std::vector<int> witness;  // nonzero combination of rows summing to the identity
};

inline IndependenceResult check_independence(const GeneratorTable& t) {
  const ZpMatrix m = symplectic_matrix(t);
  IndependenceResult r;
  r.rank = rank(m);
  r.ok = r.rank == t.gens.size();
  if (!r.ok) r.witness = left_kernel_vector(m).value_or(std::vector<int>{});
  return r;
}

/// True iff both generator lists span the same Z_p-subspace (the same projective group).
inline bool same_span(const Field& field, std::span<const PauliString> a, std::span<const PauliString> b) {
  const ZpMatrix ma = symplectic_matrix(field, a);
  const ZpMatrix mb = symplectic_matrix(field, b);
  if (ma.cols() != mb.cols() && !a.empty() && !b.empty()) return false;
  ZpMatrix stacked(field->p(), ma.rows() + mb.rows(), std::max(ma.cols(), mb.cols()));
  for (std::size_t r = 0; r < ma.rows(); ++r)
    for (std::size_t c = 0; c < ma.cols(); ++c) stacked.at(r, c) = ma.at(r, c);
  for (std::size_t r = 0; r < mb.rows(); ++r)
    for (std::size_t c = 0; c < mb.cols(); ++c) stacked.at(ma.rows() + r, c) = mb.at(r, c);
  const std::size_t ra = rank(ma);
  return ra == rank(mb) && ra == rank(stacked);
}

inline bool same_span(const GeneratorTable& a, const GeneratorTable& b) {
  return same_field(a.field, b.field) && same_span(a.field, a.gens, b.gens);
}

/// Membership of a Pauli string (projectively) in the group generated by an RREF basis.
class SpanMembership {
 public:
  explicit SpanMembership(const ZpMatrix& rows) : echelon_(row_reduce(rows)) {}

  bool contains(std::vector<int> v) const {
    const ZpMatrix& m = echelon_.matrix;
    const int p = m.modulus();
    for (std::size_t i = 0; i < echelon_.rank(); ++i) {
      const std::size_t c = echelon_.pivot_cols[i];
      const int f = v[c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = mod_p(v[j] - static_cast<long long>(f) * m.at(i, j), p);
    }
    for (int x : v)
      if (x != 0) return false;
    return true;
  }

 private:
  RowEchelon echelon_;
};

struct DistanceOptions {
  std::uint64_t budget = 1'000'000'000ULL;  // commutation tests (errors x generators), cumulative
  unsigned jobs = 1;
};

struct DistanceResult {
  std::optional<int> distance;  // nullopt: nothing found up to d_max
  int d_max = 0;
  std::optional<PauliString> witness;
  std::uint64_t tests = 0;

  bool exceeds() const noexcept { return !distance; }
  std::string describe() const { return distance ? std::to_string(*distance) : ">" + std::to_string(d_max); }
};

namespace detail {

class DistanceScan {
 public:
  DistanceScan(const GeneratorTable& t) : t_(t), R_(t.gens.size()), q_(t.q()), p_(t.field->p()) {
    const FieldSpec& f = *t.field;
    const std::size_t n = static_cast<std::size_t>(t.n);
    const std::size_t pairs = static_cast<std::size_t>(q_ * q_);
    contrib_.assign(n * pairs * R_, 0);
    for (std::size_t s = 0; s < n; ++s)
      for (int x = 0; x < q_; ++x)
        for (int z = 0; z < q_; ++z)
          for (std::size_t g = 0; g < R_; ++g) {
            const SiteOp& o = t.gens[g].site(s);
            contrib_[(s * pairs + static_cast<std::size_t>(x * q_ + z)) * R_ + g] =
                mod_p(f.trace(f.mul(z, o.x)) - f.trace(f.mul(x, o.z)), p_);
          }
    if (t.k > 0) membership_.emplace(symplectic_matrix(t));
  }

  /// First hit (lexicographic) among the weight-w errors on subset `sites`, as pair ids.
  std::optional<std::vector<int>> scan_subset(const std::vector<std::size_t>& sites) const {
    const std::size_t w = sites.size();
    std::vector<int> pair(w, 0);
    std::vector<int> acc((w + 1) * R_, 0);
    const int last_pair = q_ * q_ - 1;
    std::size_t depth = 0;
    // Iterative DFS: acc[depth+1] = acc[depth] + contrib(sites[depth], pair[depth]).
    while (true) {
      if (depth == w) {
        const int* a = &acc[w * R_];
        bool zero = true;
        for (std::size_t g = 0; g < R_ && zero; ++g) zero = a[g] == 0;
        if (zero && accept(sites, pair)) return pair;
        --depth;
        continue;
      }
      if (pair[depth] == last_pair) {
        pair[depth] = 0;
        if (depth == 0) return std::nullopt;
        --depth;
        continue;
      }
      ++pair[depth];
      const int* c = &contrib_[(sites[depth] * static_cast<std::size_t>(q_ * q_) + static_cast<std::size_t>(pair[depth])) * R_];
      const int* prev = &acc[depth * R_];
      int* next = &acc[(depth + 1) * R_];
      for (std::size_t g = 0; g < R_; ++g) {
        const int v = prev[g] + c[g];
        next[g] = v >= p_ ? v - p_ : v;
      }
      ++depth;
    }
  }

  PauliString make_error(const std::vector<std::size_t>& sites, const std::vector<int>& pair) const {
    std::vector<SiteOp> ops(static_cast<std::size_t>(t_.n));
    for (std::size_t i = 0; i < sites.size(); ++i) ops[sites[i]] = {pair[i] / q_, pair[i] % q_};
    return {t_.field, std::move(ops)};
  }

  std::size_t generator_count() const noexcept { return R_; }

 private:
  bool accept(const std::vector<std::size_t>& sites, const std::vector<int>& pair) const {
    if (!membership_) return true;
    return !membership_->contains(to_symplectic(make_error(sites, pair)));
  }

  const GeneratorTable& t_;
  std::size_t R_;
  int q_;
  int p_;
  std::vector<int> contrib_;  // [site][pair][generator]
  std::optional<SpanMembership> membership_;
};

}  // namespace detail

/// Smallest weight of an error that commutes with every generator and, for k > 0, is not itself
/// in the stabilizer group. For k = 0 stabilizer elements count. Deterministic for any job count.
inline DistanceResult compute_distance(const GeneratorTable& t, int d_max, const DistanceOptions& opt = {}) {
  if (d_max < 1) throw DomainError("d_max must be at least 1");
  DistanceResult result;
  result.d_max = d_max;
  const detail::DistanceScan scan(t);
  const auto n = static_cast<std::size_t>(t.n);
  const std::uint64_t R = std::max<std::uint64_t>(1, scan.generator_count());
  const int top = std::min<int>(d_max, t.n);

  for (int w = 1; w <= top; ++w) {
    const std::uint64_t errors = count_errors(t.q(), n, static_cast<std::size_t>(w));
    const std::uint64_t cost = errors > UINT64_MAX / R ? UINT64_MAX : errors * R;
    if (cost > opt.budget || result.tests > opt.budget - cost)
      throw ResourceError("distance scan at weight " + std::to_string(w) + " needs " + std::to_string(cost) +
                          " commutation tests; budget " + std::to_string(opt.budget) + " (" +
                          std::to_string(result.tests) + " already used)");

    const unsigned jobs = std::max(1u, opt.jobs);
    std::atomic<std::uint64_t> best{UINT64_MAX};
    std::mutex mu;
    std::vector<std::size_t> best_sites;
    std::vector<int> best_pair;

    auto worker = [&](unsigned id) {
      std::vector<std::size_t> sites(static_cast<std::size_t>(w));
      for (std::size_t i = 0; i < sites.size(); ++i) sites[i] = i;
      std::uint64_t index = 0;
      do {
        if (index >= best.load(std::memory_order_relaxed)) return;
        if (index % jobs == id) {
          if (auto hit = scan.scan_subset(sites)) {
            std::lock_guard lock(mu);
            if (index < best.load()) {
              best.store(index);
              best_sites = sites;
              best_pair = *hit;
            }
            return;
          }
        }
        ++index;
      } while (next_combination(sites, n));
    };

    if (jobs == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned id = 0; id < jobs; ++id) pool.emplace_back(worker, id);
      for (auto& th : pool) th.join();
    }
    result.tests += cost;
    if (best.load() != UINT64_MAX) {
      result.distance = w;
      result.witness = scan.make_error(best_sites, best_pair);
      return result;
    }
  }
  return result;
}

/// Entropy in bits of the reduced state on `sites` (0-based) for a k = 0 table, from symplectic ranks.
inline double subsystem_entropy(const GeneratorTable& t, std::span<const std::size_t> sites) {
  if (t.k != 0) throw DomainError("subsystem entropy needs a k=0 table");
  if (sites.empty()) throw DomainError("subsystem must be nonempty");
  const auto n = static_cast<std::size_t>(t.n);
  const auto m = static_cast<std::size_t>(t.field->m());
  std::vector<bool> in_a(n, false);
  for (std::size_t s : sites) {
    if (s >= n) throw DomainError("site index out of range");
    in_a[s] = true;
  }
  std::size_t a_size = 0;
  for (bool b : in_a) a_size += b;
  const ZpMatrix full = symplectic_matrix(t);
  ZpMatrix comp(full.modulus(), full.rows(), 2 * m * (n - a_size));
  for (std::size_t r = 0; r < full.rows(); ++r) {
    std::size_t col = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (in_a[s]) continue;
      for (std::size_t c = 0; c < 2 * m; ++c) comp.at(r, col++) = full.at(r, 2 * m * s + c);
    }
  }
  const std::size_t dim_sa = full.rows() - rank(comp);
  const long long dim = static_cast<long long>(a_size * m) - static_cast<long long>(dim_sa);
  return static_cast<double>(dim) * std::log2(static_cast<double>(full.modulus()));
}

inline bool is_ame(const GeneratorTable& t, const DistanceOptions& opt = {}) {
  if (t.k != 0) throw DomainError("AME check needs a k=0 table");
  const int target = t.n / 2 + 1;
  const DistanceResult r = compute_distance(t, target, opt);
  return r.distance && *r.distance == target;
}

}  // namespace ame
