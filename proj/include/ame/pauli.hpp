#pragma once

// Generalized Pauli strings over Z_p / GF(p^m) in symplectic form.
//
// A site (x, z) denotes X_x Z_z with X_a|j> = |j+a>, Z_b|j> = w^tr(b j)|j>, w = exp(2 pi i / p).
// Each site is stored X-part first; phases from reordering accumulate in phase_exp (a power of w).
// Multiplication uses Z_b X_c = w^tr(bc) X_c Z_b, so
//   (X_a Z_b)(X_c Z_d) = w^tr(bc) X_(a+c) Z_(b+d).

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ame/errors.hpp"
#include "ame/field.hpp"

namespace ame {

struct SiteOp {
  int x = 0;
  int z = 0;
  bool is_identity() const noexcept { return x == 0 && z == 0; }
  friend bool operator==(const SiteOp&, const SiteOp&) = default;
};

class PauliString {
 public:
  /// Identity on n sites.
  PauliString(Field field, std::size_t n) : field_(std::move(field)), sites_(n) { check_field(); }

  PauliString(Field field, std::vector<SiteOp> sites, int phase_exp = 0)
      : field_(std::move(field)), sites_(std::move(sites)) {
    check_field();
    for (const SiteOp& s : sites_)
      if (s.x < 0 || s.x >= field_->q() || s.z < 0 || s.z >= field_->q())
        throw DomainError("site element out of range for " + field_->name());
    phase_exp_ = mod_p(phase_exp, field_->p());
  }

  const Field& field() const noexcept { return field_; }
  const FieldSpec& spec() const noexcept { return *field_; }
  std::size_t size() const noexcept { return sites_.size(); }
  std::span<const SiteOp> sites() const noexcept { return sites_; }
  const SiteOp& site(std::size_t i) const { return sites_.at(i); }
  int phase_exp() const noexcept { return phase_exp_; }

  void set_site(std::size_t i, SiteOp op) {
    if (op.x < 0 || op.x >= field_->q() || op.z < 0 || op.z >= field_->q())
      throw DomainError("site element out of range for " + field_->name());
    sites_.at(i) = op;
  }

  PauliString with_phase(int phase_exp) const {
    PauliString out = *this;
    out.phase_exp_ = mod_p(phase_exp, field_->p());
    return out;
  }

  bool is_identity() const noexcept {
    return std::all_of(sites_.begin(), sites_.end(), [](const SiteOp& s) { return s.is_identity(); });
  }

  /// Equality up to a power of w.
  bool projectively_equal(const PauliString& other) const {
    return same_field(field_, other.field_) && sites_ == other.sites_;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.phase_exp_ == b.phase_exp_ && a.projectively_equal(b);
  }

 private:
  void check_field() const {
    if (!field_) throw DomainError("null field");
  }

  Field field_;
  std::vector<SiteOp> sites_;
  int phase_exp_ = 0;
};

namespace detail {
inline void check_compatible(const PauliString& p, const PauliString& q) {
  if (!same_field(p.field(), q.field())) throw DomainError("Pauli strings over different fields");
  if (p.size() != q.size())
    throw DomainError("Pauli strings of different length (" + std::to_string(p.size()) + " vs " +
                      std::to_string(q.size()) + ")");
}
}  // namespace detail

inline PauliString pauli_mul(const PauliString& p, const PauliString& q) {
  detail::check_compatible(p, q);
  const FieldSpec& f = p.spec();
  std::vector<SiteOp> sites(p.size());
  int phase = p.phase_exp() + q.phase_exp();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const SiteOp& a = p.site(i);
    const SiteOp& b = q.site(i);
    sites[i] = {f.add(a.x, b.x), f.add(a.z, b.z)};
    phase += f.trace(f.mul(a.z, b.x));
  }
  return {p.field(), std::move(sites), phase};
}

/// s with P Q = w^s Q P.
inline int commutation_exp(const PauliString& p, const PauliString& q) {
  detail::check_compatible(p, q);
  const FieldSpec& f = p.spec();
  int s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const SiteOp& a = p.site(i);
    const SiteOp& b = q.site(i);
    s += f.trace(f.mul(a.z, b.x)) - f.trace(f.mul(a.x, b.z));
  }
  return mod_p(s, f.p());
}

/// P^s for s >= 0, with the exact phase: w^(s*phase + tr(sum a_i b_i) * s(s-1)/2).
inline PauliString pauli_pow(const PauliString& p, long long s) {
  if (s < 0) throw DomainError("pauli_pow requires a non-negative exponent");
  const FieldSpec& f = p.spec();
  const int sf = f.from_integer(s);
  std::vector<SiteOp> sites(p.size());
  long long xz = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const SiteOp& a = p.site(i);
    sites[i] = {f.mul(sf, a.x), f.mul(sf, a.z)};
    xz += f.trace(f.mul(a.x, a.z));
  }
  const int pp = f.p();
  const long long tri = (s % (2LL * pp)) * ((s - 1) % (2LL * pp) + 2LL * pp) / 2;  // s(s-1)/2 mod p
  const long long phase = (s % pp) * p.phase_exp() + mod_p(xz, pp) * (tri % pp);
  return {p.field(), std::move(sites), mod_p(phase, pp)};
}

inline std::size_t weight(const PauliString& p) {
  return static_cast<std::size_t>(
      std::count_if(p.sites().begin(), p.sites().end(), [](const SiteOp& s) { return !s.is_identity(); }));
}

// ---------------------------------------------------------------------------
// Site tokens: `i`, `x<e>`, `z<e>`, `x<e>z<e>` with <e> a canonical element index.

inline std::string format_site(SiteOp op) {
  if (op.is_identity()) return "i";
  std::string out;
  if (op.x != 0) out += "x" + std::to_string(op.x);
  if (op.z != 0) out += "z" + std::to_string(op.z);
  return out;
}

/// Throws DomainError with a short reason on malformed tokens.
inline SiteOp parse_site(const FieldSpec& f, std::string_view token) {
  std::string t(token);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "i") return {};
  SiteOp op;
  std::size_t pos = 0;
  auto read_number = [&](char tag) {
    const std::size_t start = pos;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos == start) throw DomainError("bad site token '" + std::string(token) + "': missing index after '" + tag + "'");
    if (pos - start > 4) throw DomainError("bad site token '" + std::string(token) + "': index too long");
    const int v = std::stoi(t.substr(start, pos - start));
    if (v >= f.q())
      throw DomainError("bad site token '" + std::string(token) + "': index " + std::to_string(v) + " >= q=" +
                        std::to_string(f.q()));
    return v;
  };
  bool any = false;
  if (pos < t.size() && t[pos] == 'x') {
    ++pos;
    op.x = read_number('x');
    any = true;
  }
  if (pos < t.size() && t[pos] == 'z') {
    ++pos;
    op.z = read_number('z');
    any = true;
  }
  if (!any || pos != t.size()) throw DomainError("bad site token '" + std::string(token) + "'");
  return op;
}

inline std::string to_string(const PauliString& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += format_site(p.site(i));
  }
  return out;
}

inline PauliString parse_pauli(const Field& field, std::string_view text) {
  std::vector<SiteOp> sites;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) sites.push_back(parse_site(*field, text.substr(start, i - start)));
  }
  return {field, std::move(sites)};
}

// ---------------------------------------------------------------------------
// Symplectic vectors over Z_p: per site, m x-coefficients then m z-coefficients.

inline std::vector<int> to_symplectic(const PauliString& p) {
  const FieldSpec& f = p.spec();
  const auto m = static_cast<std::size_t>(f.m());
  std::vector<int> v(2 * m * p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto cx = f.coefficients(p.site(i).x);
    auto cz = f.coefficients(p.site(i).z);
    std::copy(cx.begin(), cx.end(), v.begin() + static_cast<std::ptrdiff_t>(2 * m * i));
    std::copy(cz.begin(), cz.end(), v.begin() + static_cast<std::ptrdiff_t>(2 * m * i + m));
  }
  return v;
}

inline PauliString from_symplectic(const Field& field, std::span<const int> v) {
  const auto m = static_cast<std::size_t>(field->m());
  if (v.size() % (2 * m) != 0) throw DomainError("symplectic vector length is not a multiple of 2m");
  const std::size_t n = v.size() / (2 * m);
  std::vector<SiteOp> sites(n);
  for (std::size_t i = 0; i < n; ++i)
    sites[i] = {field->from_coefficients(v.subspan(2 * m * i, m)), field->from_coefficients(v.subspan(2 * m * i + m, m))};
  return {field, std::move(sites)};
}

/// True when X and Z on a single site commute (tr(1) = 0, e.g. GF(4)).
inline bool single_site_xz_commute(const FieldSpec& f) { return f.trace(f.one()) == 0; }

// ---------------------------------------------------------------------------
// Dense action on computational basis states.

struct BasisStateVector {
  Field field;
  std::size_t n = 0;
  std::vector<std::complex<double>> amplitudes;

  static constexpr std::size_t max_dimension = std::size_t{1} << 20;

  static BasisStateVector zero(const Field& f, std::size_t n) {
    return {f, n, std::vector<std::complex<double>>(dimension(f->q(), n), 0.0)};
  }
  static BasisStateVector basis(const Field& f, std::size_t n, std::size_t index) {
    BasisStateVector v = zero(f, n);
    v.amplitudes.at(index) = 1.0;
    return v;
  }

  /// q^n, or throws ResourceError past the desk-scale guard.
  static std::size_t dimension(int q, std::size_t n) {
    std::size_t d = 1;
    for (std::size_t i = 0; i < n; ++i) {
      d *= static_cast<std::size_t>(q);
      if (d > max_dimension) throw ResourceError("state dimension q^n exceeds 2^20");
    }
    return d;
  }

  double norm() const {
    double s = 0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }
};

inline std::complex<double> omega_power(int p, long long e) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod_p(e, p)) / p;
  return {std::cos(angle), std::sin(angle)};
}

/// Big-endian base-q digits: site 0 is the most significant digit.
inline std::vector<int> basis_digits(std::size_t index, int q, std::size_t n) {
  std::vector<int> d(n);
  for (std::size_t i = n; i-- > 0;) {
    d[i] = static_cast<int>(index % static_cast<std::size_t>(q));
    index /= static_cast<std::size_t>(q);
  }
  return d;
}

inline BasisStateVector apply(const PauliString& p, const BasisStateVector& v) {
  if (!same_field(p.field(), v.field)) throw DomainError("operator and state over different fields");
  if (p.size() != v.n) throw DomainError("operator and state have different site counts");
  const FieldSpec& f = p.spec();
  const int q = f.q();
  const std::size_t dim = BasisStateVector::dimension(q, v.n);
  if (v.amplitudes.size() != dim) throw DomainError("state vector has wrong length");
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(f.p()));
  for (int e = 0; e < f.p(); ++e) roots[static_cast<std::size_t>(e)] = omega_power(f.p(), e);

  BasisStateVector out = BasisStateVector::zero(p.field(), v.n);
  std::vector<int> digits(v.n);
  for (std::size_t index = 0; index < dim; ++index) {
    if (v.amplitudes[index] == 0.0) continue;
    std::size_t rest = index;
    for (std::size_t i = v.n; i-- > 0;) {
      digits[i] = static_cast<int>(rest % static_cast<std::size_t>(q));
      rest /= static_cast<std::size_t>(q);
    }
    long long phase = p.phase_exp();
    std::size_t target = 0;
    for (std::size_t i = 0; i < v.n; ++i) {
      const SiteOp& s = p.site(i);
      phase += f.trace(f.mul(s.z, digits[i]));
      target = target * static_cast<std::size_t>(q) + static_cast<std::size_t>(f.add(digits[i], s.x));
    }
    out.amplitudes[target] += roots[static_cast<std::size_t>(mod_p(phase, f.p()))] * v.amplitudes[index];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Error enumeration.

/// Advance a strictly increasing k-subset of {0..n-1} lexicographically.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// C(n,w) (q^2-1)^w, saturating at UINT64_MAX.
inline std::uint64_t count_errors(int q, std::size_t n, std::size_t w) {
  long double c = static_cast<long double>(binomial(n, w));
  for (std::size_t i = 0; i < w; ++i) c *= static_cast<long double>(q) * q - 1;
  return c >= 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(c);
}

/// Streams every weight-w Pauli string (phase 0) once, in lexicographic order:
/// site subsets first, then nonzero (x, z) pairs with the last site varying fastest.
class ErrorEnumerator {
 public:
  ErrorEnumerator(Field field, std::size_t n, std::size_t w) : field_(std::move(field)), n_(n), w_(w) {
    if (w > n) throw DomainError("error weight exceeds site count");
    subset_.resize(w);
    for (std::size_t i = 0; i < w; ++i) subset_[i] = i;
    pairs_.assign(w, 1);
  }

  std::optional<PauliString> next() {
    if (done_) return std::nullopt;
    const int q = field_->q();
    std::vector<SiteOp> sites(n_);
    for (std::size_t i = 0; i < w_; ++i) sites[subset_[i]] = {pairs_[i] / q, pairs_[i] % q};
    PauliString out(field_, std::move(sites));
    advance();
    return out;
  }

 private:
  void advance() {
    const int last_pair = field_->q() * field_->q() - 1;
    for (std::size_t i = w_; i-- > 0;) {
      if (pairs_[i] < last_pair) {
        ++pairs_[i];
        return;
      }
      pairs_[i] = 1;
    }
    if (!next_combination(subset_, n_)) done_ = true;
  }

  Field field_;
  std::size_t n_;
  std::size_t w_;
  std::vector<std::size_t> subset_;
  std::vector<int> pairs_;  // pair id = x * q + z, never 0
  bool done_ = false;
};

inline ErrorEnumerator enumerate_errors(const Field& field, std::size_t n, std::size_t w) { return {field, n, w}; }

}  // namespace ame
