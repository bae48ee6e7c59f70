#pragma once

// Dense ground truth for small instances (q^n <= 4096 amplitudes).
//
// Generator operators act as written, with one adjustment for p = 2: a generator whose
// sum of tr(a_i b_i) is odd squares to -1, so it is multiplied by i to make it an involution.
// All sums run in index order.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ame/code.hpp"
#include "ame/errors.hpp"
#include "ame/pauli.hpp"
#include "ame/stabtab.hpp"

namespace ame {

using cplx = std::complex<double>;

inline constexpr std::size_t dense_budget = 4096;

struct CodewordSet {
  Field field;
  std::size_t n = 0;
  std::vector<BasisStateVector> words;

  std::size_t size() const noexcept { return words.size(); }
};

inline std::size_t dense_dimension(int q, std::size_t n) {
  std::size_t d = 1;
  for (std::size_t i = 0; i < n; ++i) {
    d *= static_cast<std::size_t>(q);
    if (d > dense_budget)
      throw ResourceError("dense budget exceeded: q^n > " + std::to_string(dense_budget) + " (q=" + std::to_string(q) +
                          ", n=" + std::to_string(n) + ")");
  }
  return d;
}

inline cplx inner(const BasisStateVector& a, const BasisStateVector& b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return s;
}

/// Rotate so the first amplitude of maximal modulus (within 1e-12) is real and positive.
inline void normalize_global_phase(BasisStateVector& v) {
  double best = 0;
  for (const auto& a : v.amplitudes) best = std::max(best, std::abs(a));
  if (best == 0) return;
  for (const auto& a : v.amplitudes)
    if (std::abs(a) >= best - 1e-12) {
      const cplx rot = std::conj(a) / std::abs(a);
      for (auto& x : v.amplitudes) x *= rot;
      return;
    }
}

inline bool equal_up_to_phase(const BasisStateVector& a, const BasisStateVector& b, double tol) {
  if (a.amplitudes.size() != b.amplitudes.size()) return false;
  const cplx ov = inner(a, b);
  if (std::abs(ov) < 1e-15) return a.norm() < tol && b.norm() < tol;
  const cplx ph = ov / std::abs(ov);
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
    if (std::abs(b.amplitudes[i] - ph * a.amplitudes[i]) > tol) return false;
  return true;
}

namespace detail {

/// g scaled so that g^p = I.
inline cplx involution_factor(const PauliString& g) {
  const FieldSpec& f = g.spec();
  if (f.p() != 2) return 1.0;
  int t = 0;
  for (const SiteOp& s : g.sites()) t ^= f.trace(f.mul(s.x, s.z));
  return t ? cplx(0, 1) : cplx(1, 0);
}

/// v <- (1/p) sum_s (c g)^s v
inline void project(const PauliString& g, BasisStateVector& v) {
  const int p = g.spec().p();
  const cplx c = involution_factor(g);
  BasisStateVector acc = v;
  BasisStateVector cur = v;
  for (int s = 1; s < p; ++s) {
    cur = apply(g, cur);
    for (auto& a : cur.amplitudes) a *= c;
    for (std::size_t i = 0; i < acc.amplitudes.size(); ++i) acc.amplitudes[i] += cur.amplitudes[i];
  }
  for (auto& a : acc.amplitudes) a /= static_cast<double>(p);
  v = std::move(acc);
}

/// Gram-Schmidt step; returns false if v is (numerically) in the span.
inline bool orthonormalize_against(const std::vector<BasisStateVector>& basis, BasisStateVector& v, double tol = 1e-8) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) {
      const cplx c = inner(b, v);
      for (std::size_t i = 0; i < v.amplitudes.size(); ++i) v.amplitudes[i] -= c * b.amplitudes[i];
    }
  const double nv = v.norm();
  if (nv < tol) return false;
  for (auto& a : v.amplitudes) a /= nv;
  return true;
}

}  // namespace detail

/// Orthonormal basis of the joint +1 eigenspace (dimension q^k).
inline CodewordSet expand_stabilizer(const GeneratorTable& t) {
  const std::size_t dim = dense_dimension(t.q(), static_cast<std::size_t>(t.n));
  std::size_t K = 1;
  for (int i = 0; i < t.k; ++i) K *= static_cast<std::size_t>(t.q());
  CodewordSet out{t.field, static_cast<std::size_t>(t.n), {}};
  for (std::size_t j = 0; j < dim && out.words.size() < K; ++j) {
    BasisStateVector v = BasisStateVector::basis(t.field, out.n, j);
    for (const auto& g : t.gens) detail::project(g, v);
    if (v.norm() < 1e-8) continue;
    if (detail::orthonormalize_against(out.words, v)) out.words.push_back(std::move(v));
  }
  if (out.words.empty()) throw DomainError("inconsistent phases: the generators stabilize no state");
  if (out.words.size() != K)
    throw InvariantError("joint eigenspace has dimension " + std::to_string(out.words.size()) + ", expected " +
                         std::to_string(K));
  if (K == 1) normalize_global_phase(out.words.front());
  return out;
}

/// Word i is the renormalized projection of `state` onto message value i on the leading sites.
inline CodewordSet ame_projection_codewords(const BasisStateVector& state, std::size_t message_sites) {
  const int q = state.field->q();
  if (message_sites == 0 || message_sites >= state.n) throw DomainError("message sites must be in [1, n)");
  dense_dimension(q, state.n);
  const std::size_t rest = state.n - message_sites;
  std::size_t msg_dim = 1, rest_dim = 1;
  for (std::size_t i = 0; i < message_sites; ++i) msg_dim *= static_cast<std::size_t>(q);
  for (std::size_t i = 0; i < rest; ++i) rest_dim *= static_cast<std::size_t>(q);
  if (state.amplitudes.size() != msg_dim * rest_dim) throw DomainError("state vector has wrong length");
  CodewordSet out{state.field, rest, {}};
  for (std::size_t i = 0; i < msg_dim; ++i) {
    BasisStateVector w = BasisStateVector::zero(state.field, rest);
    for (std::size_t r = 0; r < rest_dim; ++r) w.amplitudes[r] = state.amplitudes[i * rest_dim + r];
    const double nw = w.norm();
    if (nw < 1e-12) throw DomainError("state not supported on message symbol " + std::to_string(i));
    for (auto& a : w.amplitudes) a /= nw;
    out.words.push_back(std::move(w));
  }
  return out;
}

struct KLResult {
  bool ok = true;
  std::optional<PauliString> witness;  // E^dagger F with E = I
  std::size_t checked = 0;
};

namespace detail {

inline bool kl_scalar(const CodewordSet& c, const PauliString& p, double tol) {
  const std::size_t K = c.words.size();
  std::vector<BasisStateVector> images;
  images.reserve(K);
  for (const auto& w : c.words) images.push_back(apply(p, w));
  const cplx diag = inner(c.words[0], images[0]);
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b < K; ++b) {
      const cplx v = inner(c.words[a], images[b]);
      const cplx want = a == b ? diag : cplx(0);
      if (std::abs(v - want) > tol) return false;
    }
  return true;
}

}  // namespace detail

/// <psi_m| P |psi_m'> = f(P) delta_mm' for every P with 1 <= wt(P) < d.
inline KLResult knill_laflamme_check(const CodewordSet& c, int d, double tol = 1e-9) {
  if (c.words.empty()) throw DomainError("empty codeword set");
  dense_dimension(c.field->q(), c.n);
  KLResult r;
  for (int w = 1; w < d && w <= static_cast<int>(c.n); ++w) {
    ErrorEnumerator en(c.field, c.n, static_cast<std::size_t>(w));
    while (auto p = en.next()) {
      ++r.checked;
      if (!detail::kl_scalar(c, *p, tol)) {
        r.ok = false;
        r.witness = std::move(*p);
        return r;
      }
    }
  }
  return r;
}

/// Smallest weight of an operator that breaks detection. For a single word this is the smallest
/// weight with |<psi|P|psi>| > tol (a stabilizer element up to phase).
inline std::optional<int> dense_distance(const CodewordSet& c, int d_max, double tol = 1e-9) {
  if (c.words.empty()) throw DomainError("empty codeword set");
  dense_dimension(c.field->q(), c.n);
  for (int w = 1; w <= d_max && w <= static_cast<int>(c.n); ++w) {
    ErrorEnumerator en(c.field, c.n, static_cast<std::size_t>(w));
    while (auto p = en.next()) {
      if (c.words.size() == 1) {
        if (std::abs(inner(c.words[0], apply(*p, c.words[0]))) > tol) return w;
      } else if (!detail::kl_scalar(c, *p, tol)) {
        return w;
      }
    }
  }
  return std::nullopt;
}

/// rho_A for a pure state; A as 0-based sites, kept in increasing order.
inline Eigen::MatrixXcd reduced_density_matrix(const BasisStateVector& state, std::vector<std::size_t> sites) {
  const int q = state.field->q();
  const std::size_t n = state.n;
  dense_dimension(q, n);
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  for (std::size_t s : sites)
    if (s >= n) throw DomainError("site index out of range");
  std::vector<bool> in_a(n, false);
  for (std::size_t s : sites) in_a[s] = true;
  std::size_t da = 1;
  for (std::size_t i = 0; i < sites.size(); ++i) da *= static_cast<std::size_t>(q);
  std::size_t db = state.amplitudes.size() / da;
  // psi as a da x db matrix: row index = digits on A, column index = digits on the complement.
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db));
  for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx) {
    const auto digits = basis_digits(idx, q, n);
    std::size_t ra = 0, rb = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (in_a[s])
        ra = ra * static_cast<std::size_t>(q) + static_cast<std::size_t>(digits[s]);
      else
        rb = rb * static_cast<std::size_t>(q) + static_cast<std::size_t>(digits[s]);
    }
    psi(static_cast<Eigen::Index>(ra), static_cast<Eigen::Index>(rb)) = state.amplitudes[idx];
  }
  return psi * psi.adjoint();
}

/// Von Neumann entropy (bits) of rho_A; eigenvalues below 1e-12 count as zero.
/// The smaller side is traced out since both sides share the spectrum of a pure state.
inline double reduced_entropy(const BasisStateVector& state, const std::vector<std::size_t>& sites) {
  std::vector<bool> in_a(state.n, false);
  for (std::size_t s : sites) {
    if (s >= state.n) throw DomainError("site index out of range");
    in_a[s] = true;
  }
  std::vector<std::size_t> a, b;
  for (std::size_t s = 0; s < state.n; ++s) (in_a[s] ? a : b).push_back(s);
  if (a.empty() || b.empty()) return 0.0;
  const Eigen::MatrixXcd rho = reduced_density_matrix(state, a.size() <= b.size() ? a : b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-12) s -= l * std::log2(l);
  }
  return s;
}

/// The state (1/q) sum_{i,j} |i>|j>|i+j>|i+2j> over Z_q, q an odd prime.
inline BasisStateVector ame43_state(const Field& f) {
  if (!f->is_prime_field() || f->p() < 3) throw DomainError("needs an odd prime field");
  const int q = f->q();
  BasisStateVector v = BasisStateVector::zero(f, 4);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const std::size_t idx = ((static_cast<std::size_t>(i) * q + j) * q + (i + j) % q) * q + (i + 2 * j) % q;
      v.amplitudes[idx] += 1.0 / q;
    }
  return v;
}

/// True iff both sets span the same subspace (tolerance on projected norms).
inline bool same_codespace(const CodewordSet& a, const CodewordSet& b, double tol = 1e-9) {
  if (a.words.size() != b.words.size()) return false;
  for (const auto& w : b.words) {
    double proj = 0;
    for (const auto& u : a.words) proj += std::norm(inner(u, w));
    if (std::abs(proj - w.norm() * w.norm()) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// State files: optional `# state q=<q> n=<n>` header, then one `re im` pair per line in
// big-endian base-q index order.

inline BasisStateVector parse_state(std::string_view text, const std::string& source, std::optional<int> q_hint = {}) {
  std::optional<int> q = q_hint;
  std::optional<int> n;
  std::vector<cplx> amps;
  std::istringstream in{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string_view v = detail::trim_view(line);
    if (v.empty()) continue;
    if (v.front() == '#') {
      std::istringstream hs{std::string(v.substr(1))};
      std::string word;
      while (hs >> word) {
        if (word.starts_with("q=")) q = detail::parse_int(std::string_view(word).substr(2));
        if (word.starts_with("n=")) n = detail::parse_int(std::string_view(word).substr(2));
      }
      continue;
    }
    std::istringstream ls{std::string(v)};
    double re = 0, im = 0;
    std::string extra;
    if (!(ls >> re >> im) || (ls >> extra)) throw ParseError(source, no, "expected 're im'");
    amps.emplace_back(re, im);
  }
  if (!q) throw ParseError(source, no, "local dimension unknown: add '# state q=<q>' or pass q");
  const Field f = FieldSpec::make(*q);
  std::size_t sites = 0, dim = 1;
  while (dim < amps.size()) {
    dim *= static_cast<std::size_t>(*q);
    ++sites;
  }
  if (dim != amps.size() || amps.empty())
    throw ParseError(source, no, std::to_string(amps.size()) + " amplitudes is not a power of q=" + std::to_string(*q));
  if (n && static_cast<std::size_t>(*n) != sites)
    throw ParseError(source, no, "header says n=" + std::to_string(*n) + " but data has " + std::to_string(sites) + " sites");
  return {f, sites, std::move(amps)};
}

inline BasisStateVector read_state(const std::string& path, std::optional<int> q_hint = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state(ss.str(), path, q_hint);
}

inline std::string emit_state(const BasisStateVector& v) {
  std::ostringstream os;
  os << "# state q=" << v.field->q() << " n=" << v.n << "\n";
  os << std::setprecision(17);
  for (const auto& a : v.amplitudes) os << a.real() << " " << a.imag() << "\n";
  return os.str();
}

}  // namespace ame
