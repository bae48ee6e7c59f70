#pragma once

// Exact arithmetic in Z_p and GF(p^m).
//
// Elements are addressed by a canonical index in [0, q):
//   - prime fields (m = 1): the index is the residue itself, so index 2 is the integer 2;
//   - extension fields (m > 1): index 0 is zero and index e >= 1 is alpha^(e-1), where alpha
//     is the class of x modulo the (primitive) modulus polynomial.
// Every FieldSpec precomputes full addition/multiplication tables (q <= 64), the trace and the
// coefficient vectors of each element over the polynomial basis {1, alpha, ..., alpha^(m-1)}.

#include <cstdint>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ame/errors.hpp"
#include "ame/zp_matrix.hpp"

namespace ame {

class FieldSpec;
using Field = std::shared_ptr<const FieldSpec>;

inline bool is_prime(int v) noexcept {
  if (v < 2) return false;
  for (int d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

namespace detail {

// Polynomials over Z_p stored low-degree first.
using Poly = std::vector<int>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mod(Poly a, const Poly& m, int p) {
  trim(a);
  const int lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const int factor = mod_p(static_cast<long long>(a.back()) * lead_inv, p);
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i)
      a[shift + i] = mod_p(a[shift + i] - static_cast<long long>(factor) * m[i], p);
    trim(a);
  }
  return a;
}

/// Exhaustive search for a monic factor of degree 1..deg/2.
inline bool is_irreducible(const Poly& f, int p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= static_cast<std::size_t>(p);
    for (std::size_t code = 0; code < count; ++code) {
      Poly g(d + 1, 0);
      g[d] = 1;
      std::size_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<int>(c % static_cast<std::size_t>(p));
        c /= static_cast<std::size_t>(p);
      }
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

inline int smallest_primitive_root(int p) {
  if (p == 2) return 1;
  for (int g = 2; g < p; ++g) {
    int x = 1;
    int order = 0;
    do {
      x = x * g % p;
      ++order;
    } while (x != 1);
    if (order == p - 1) return g;
  }
  return 1;
}

}  // namespace detail

class FieldSpec {
 public:
  static constexpr int max_prime = 64;
  static constexpr int max_extension_q = 9;

  /// Field of order q with the pinned modulus for q in {4, 8, 9}.
  static Field make(int q) {
    if (is_prime(q)) return make(q, {});
    switch (q) {
      case 4: return make(2, {1, 1, 1});
      case 8: return make(2, {1, 0, 1, 1});
      case 9: return make(3, {1, 1, 2});
      default: break;
    }
    throw DomainError("unsupported field order q=" + std::to_string(q) +
                      " (primes <= 64 and q in {4, 8, 9} are supported)");
  }

  /// modulus: coefficients c_m, ..., c_0 (highest degree first); empty or degree 1 for a prime field.
  static Field make(int p, std::vector<int> modulus) {
    return std::shared_ptr<const FieldSpec>(new FieldSpec(p, std::move(modulus)));
  }

  int p() const noexcept { return p_; }
  int m() const noexcept { return m_; }
  int q() const noexcept { return q_; }
  bool is_prime_field() const noexcept { return m_ == 1; }
  /// Highest degree first, empty for prime fields.
  const std::vector<int>& modulus() const noexcept { return modulus_; }
  int alpha_index() const noexcept { return alpha_index_; }

  std::string name() const {
    std::ostringstream os;
    if (m_ == 1)
      os << "Z_" << p_;
    else
      os << "GF(" << q_ << ")";
    return os.str();
  }

  int add(int x, int y) const { return add_[idx(x) * q_ + idx(y)]; }
  int mul(int x, int y) const { return mul_[idx(x) * q_ + idx(y)]; }
  int neg(int x) const { return neg_[idx(x)]; }
  int sub(int x, int y) const { return add(x, neg(y)); }
  int inv(int x) const {
    if (idx(x) == 0) throw DomainError("zero has no inverse");
    return inv_[x];
  }
  int pow(int x, long long s) const {
    idx(x);
    if (s < 0) {
      x = inv(x);
      s = -s;
    }
    int result = one();
    int base = x;
    while (s > 0) {
      if (s & 1) result = mul(result, base);
      base = mul(base, base);
      s >>= 1;
    }
    return result;
  }
  /// Galois trace tr(x) = x + x^p + ... + x^(p^(m-1)), as a residue in Z_p.
  int trace(int x) const { return trace_[idx(x)]; }

  int zero() const noexcept { return 0; }
  int one() const noexcept { return 1; }
  int alpha() const noexcept { return alpha_index_; }
  int alpha_power(long long e) const { return pow(alpha_index_, e); }

  /// Image of an integer under Z -> Z_p -> GF(q).
  int from_integer(long long v) const { return from_coeff_value(mod_p(v, p_)); }

  /// Coefficients over {1, alpha, ..., alpha^(m-1)}, low degree first.
  std::span<const int> coefficients(int x) const {
    return {coeffs_.data() + static_cast<std::size_t>(idx(x)) * m_, static_cast<std::size_t>(m_)};
  }

  int from_coefficients(std::span<const int> c) const {
    if (c.size() != static_cast<std::size_t>(m_)) throw DomainError("coefficient vector has wrong dimension");
    int value = 0;
    for (int i = m_ - 1; i >= 0; --i) value = value * p_ + mod_p(c[i], p_);
    return from_coeff_value(value);
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) noexcept {
    return a.p_ == b.p_ && a.m_ == b.m_ && a.modulus_ == b.modulus_;
  }

 private:
  FieldSpec(int p, std::vector<int> modulus) : p_(p) {
    if (!is_prime(p)) throw DomainError("characteristic p=" + std::to_string(p) + " is not prime");
    if (p > max_prime) throw DomainError("prime fields are capped at p <= 64");
    if (modulus.size() <= 2) modulus.clear();
    m_ = modulus.empty() ? 1 : static_cast<int>(modulus.size()) - 1;
    q_ = 1;
    for (int i = 0; i < m_; ++i) q_ *= p_;
    if (m_ > 1 && q_ > max_extension_q)
      throw DomainError("extension fields are capped at q <= 9, got q=" + std::to_string(q_));
    for (int& c : modulus) c = mod_p(c, p_);
    modulus_ = std::move(modulus);
    if (m_ == 1)
      build_prime();
    else
      build_extension();
    build_trace();
  }

  int idx(int x) const {
    if (x < 0 || x >= q_) throw DomainError("field element index " + std::to_string(x) + " out of range for " + name());
    return x;
  }

  int from_coeff_value(int value) const { return index_of_value_[value]; }

  void build_prime() {
    alpha_index_ = detail::smallest_primitive_root(p_);
    coeffs_.resize(q_);
    index_of_value_.resize(q_);
    for (int v = 0; v < q_; ++v) coeffs_[v] = index_of_value_[v] = v;
    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b < q_; ++b) {
        add_[a * q_ + b] = (a + b) % p_;
        mul_[a * q_ + b] = (a * b) % p_;
      }
    neg_.resize(q_);
    inv_.assign(q_, 0);
    for (int a = 0; a < q_; ++a) {
      neg_[a] = (p_ - a) % p_;
      if (a != 0) inv_[a] = inv_mod(a, p_);
    }
  }

  void build_extension() {
    detail::Poly f(modulus_.rbegin(), modulus_.rend());  // low degree first
    if (f.back() != 1) throw DomainError("modulus must be monic");
    if (!detail::is_irreducible(f, p_)) throw DomainError("modulus is reducible over Z_" + std::to_string(p_));

    // Successive powers of x modulo f give the log/antilog correspondence.
    coeffs_.assign(static_cast<std::size_t>(q_) * m_, 0);
    index_of_value_.assign(q_, -1);
    index_of_value_[0] = 0;
    std::vector<int> power(m_, 0);
    power[0] = 1;
    auto value_of = [&](const std::vector<int>& c) {
      int v = 0;
      for (int i = m_ - 1; i >= 0; --i) v = v * p_ + c[i];
      return v;
    };
    for (int e = 0; e < q_ - 1; ++e) {
      const int v = value_of(power);
      if (index_of_value_[v] != -1)
        throw DomainError("modulus is not primitive: x has order " + std::to_string(e));
      index_of_value_[v] = e + 1;
      std::copy(power.begin(), power.end(), coeffs_.begin() + static_cast<std::ptrdiff_t>(e + 1) * m_);
      // power *= x (mod f)
      const int top = power[m_ - 1];
      for (int i = m_ - 1; i > 0; --i) power[i] = power[i - 1];
      power[0] = 0;
      for (int i = 0; i < m_; ++i) power[i] = mod_p(power[i] - static_cast<long long>(top) * f[i], p_);
    }
    alpha_index_ = 2;

    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    std::vector<int> sum(m_);
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b < q_; ++b) {
        for (int i = 0; i < m_; ++i) sum[i] = (coeffs_[a * m_ + i] + coeffs_[b * m_ + i]) % p_;
        add_[a * q_ + b] = index_of_value_[value_of(sum)];
        mul_[a * q_ + b] = (a == 0 || b == 0) ? 0 : ((a - 1) + (b - 1)) % (q_ - 1) + 1;
      }
    neg_.resize(q_);
    inv_.assign(q_, 0);
    for (int a = 0; a < q_; ++a) {
      for (int i = 0; i < m_; ++i) sum[i] = (p_ - coeffs_[a * m_ + i]) % p_;
      neg_[a] = index_of_value_[value_of(sum)];
      if (a != 0) inv_[a] = (q_ - 1 - (a - 1)) % (q_ - 1) + 1;
    }
  }

  void build_trace() {
    trace_.resize(q_);
    for (int x = 0; x < q_; ++x) {
      int acc = 0;
      int frob = x;
      for (int i = 0; i < m_; ++i) {
        acc = add_[acc * q_ + frob];
        frob = pow(frob, p_);
      }
      // acc lies in the prime subfield: coefficient vector (t, 0, ..., 0).
      for (int i = 1; i < m_; ++i)
        if (coeffs_[acc * m_ + i] != 0) throw InvariantError("trace left the prime subfield");
      trace_[x] = coeffs_[acc * m_];
    }
  }

  int p_;
  int m_ = 1;
  int q_ = 0;
  std::vector<int> modulus_;
  int alpha_index_ = 1;
  std::vector<int> add_, mul_, neg_, inv_, trace_;
  std::vector<int> coeffs_;          // q * m, low degree first
  std::vector<int> index_of_value_;  // sum_i c_i p^i -> index
};

inline bool same_field(const FieldSpec& a, const FieldSpec& b) noexcept { return &a == &b || a == b; }
inline bool same_field(const Field& a, const Field& b) noexcept { return a && b && same_field(*a, *b); }

/// An element of a FieldSpec, addressed by canonical index.
class FieldElement {
 public:
  FieldElement(Field field, int index) : field_(std::move(field)), index_(index) {
    if (!field_) throw DomainError("null field");
    if (index < 0 || index >= field_->q())
      throw DomainError("field element index " + std::to_string(index) + " out of range for " + field_->name());
  }

  static FieldElement zero(const Field& f) { return {f, 0}; }
  static FieldElement one(const Field& f) { return {f, 1}; }
  static FieldElement alpha(const Field& f) { return {f, f->alpha_index()}; }

  const Field& field() const noexcept { return field_; }
  const FieldSpec& spec() const noexcept { return *field_; }
  int index() const noexcept { return index_; }
  bool is_zero() const noexcept { return index_ == 0; }

  std::vector<int> coefficients() const {
    auto c = field_->coefficients(index_);
    return {c.begin(), c.end()};
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
    return a.index_ == b.index_ && same_field(a.field_, b.field_);
  }

 private:
  Field field_;
  int index_;
};

namespace detail {
inline const FieldSpec& common_field(const FieldElement& x, const FieldElement& y) {
  if (!same_field(x.field(), y.field()))
    throw DomainError("operands belong to different fields (" + x.spec().name() + " vs " + y.spec().name() + ")");
  return x.spec();
}
}  // namespace detail

inline FieldElement ff_add(const FieldElement& x, const FieldElement& y) {
  return {x.field(), detail::common_field(x, y).add(x.index(), y.index())};
}
inline FieldElement ff_mul(const FieldElement& x, const FieldElement& y) {
  return {x.field(), detail::common_field(x, y).mul(x.index(), y.index())};
}
inline FieldElement ff_neg(const FieldElement& x) { return {x.field(), x.spec().neg(x.index())}; }
inline FieldElement ff_inv(const FieldElement& x) { return {x.field(), x.spec().inv(x.index())}; }
inline FieldElement ff_pow(const FieldElement& x, long long s) { return {x.field(), x.spec().pow(x.index(), s)}; }
inline int ff_trace(const FieldElement& x) { return x.spec().trace(x.index()); }

inline FieldElement operator+(const FieldElement& x, const FieldElement& y) { return ff_add(x, y); }
inline FieldElement operator-(const FieldElement& x, const FieldElement& y) { return ff_add(x, ff_neg(y)); }
inline FieldElement operator-(const FieldElement& x) { return ff_neg(x); }
inline FieldElement operator*(const FieldElement& x, const FieldElement& y) { return ff_mul(x, y); }
inline FieldElement operator/(const FieldElement& x, const FieldElement& y) { return ff_mul(x, ff_inv(y)); }

namespace detail {

/// m x m matrix whose row i is the coefficient vector of basis[i]; throws on rank deficiency.
inline ZpMatrix basis_matrix(std::span<const FieldElement> basis) {
  if (basis.empty()) throw DomainError("empty basis");
  const FieldSpec& f = basis.front().spec();
  const auto m = static_cast<std::size_t>(f.m());
  if (basis.size() != m)
    throw DomainError("basis must have m=" + std::to_string(m) + " elements, got " + std::to_string(basis.size()));
  ZpMatrix b(f.p(), m, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!same_field(basis[i].spec(), f)) throw DomainError("basis elements belong to different fields");
    auto c = f.coefficients(basis[i].index());
    for (std::size_t l = 0; l < m; ++l) b.at(i, l) = c[l];
  }
  if (rank(b) < m) throw DomainError("basis is linearly dependent over Z_" + std::to_string(f.p()) + " (rank deficient)");
  return b;
}

}  // namespace detail

/// Coordinates of x over `basis`: sum_i out[i] * basis[i] = x.
inline std::vector<int> base_decompose(const FieldElement& x, std::span<const FieldElement> basis) {
  const ZpMatrix b = detail::basis_matrix(basis);
  const FieldSpec& f = x.spec();
  if (!same_field(f, basis.front().spec())) throw DomainError("element and basis belong to different fields");
  // Solve B^T c = coeff(x).
  const std::size_t m = b.rows();
  ZpMatrix bt(f.p(), m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) bt.at(i, j) = b.at(j, i);
  auto coeffs = f.coefficients(x.index());
  auto c = solve(bt, coeffs);
  if (!c) throw InvariantError("independent basis failed to span the field");
  return *c;
}

/// The trace-dual basis {beta_j}: tr(basis[i] * beta_j) = delta_ij.
inline std::vector<FieldElement> dual_basis(std::span<const FieldElement> basis) {
  detail::basis_matrix(basis);
  const Field& field = basis.front().field();
  const FieldSpec& f = *field;
  const auto m = static_cast<std::size_t>(f.m());
  // T[i][l] = tr(basis_i * alpha^l); beta_j = sum_l y_l alpha^l with T y = e_j.
  ZpMatrix t(f.p(), m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < m; ++l)
      t.at(i, l) = f.trace(f.mul(basis[i].index(), f.alpha_power(static_cast<long long>(l))));
  auto tinv = inverse(t);
  if (!tinv) throw InvariantError("trace form is degenerate");
  std::vector<FieldElement> out;
  out.reserve(m);
  std::vector<int> y(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < m; ++l) y[l] = tinv->at(l, j);
    out.emplace_back(field, f.from_coefficients(y));
  }
  return out;
}

/// The polynomial basis {1, alpha, ..., alpha^(m-1)}.
inline std::vector<FieldElement> polynomial_basis(const Field& field) {
  std::vector<FieldElement> out;
  for (int l = 0; l < field->m(); ++l) out.emplace_back(field, field->alpha_power(l));
  return out;
}

}  // namespace ame
