#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "ame/field.hpp"

using namespace ame;

namespace {

// Independent polynomial oracle: elements as coefficient vectors (low degree first) over Z_p,
// reduced modulo a monic modulus given highest degree first.
struct PolyOracle {
  int p;
  std::vector<int> mod_low;  // low degree first, monic
  int m;

  PolyOracle(int p_, std::vector<int> high_first) : p(p_) {
    mod_low.assign(high_first.rbegin(), high_first.rend());
    m = static_cast<int>(mod_low.size()) - 1;
  }

  std::vector<int> add(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> c(m);
    for (int i = 0; i < m; ++i) c[i] = (a[i] + b[i]) % p;
    return c;
  }

  std::vector<int> mul(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> full(2 * m - 1, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) full[i + j] = (full[i + j] + a[i] * b[j]) % p;
    for (int d = 2 * m - 2; d >= m; --d) {
      const int f = full[d];
      if (f == 0) continue;
      for (int i = 0; i <= m; ++i) full[d - m + i] = ((full[d - m + i] - f * mod_low[i]) % p + p) % p;
    }
    full.resize(m);
    return full;
  }

  // index e >= 1 -> x^(e-1) by repeated multiplication
  std::vector<std::vector<int>> index_table() const {
    std::vector<std::vector<int>> t;
    t.push_back(std::vector<int>(m, 0));
    std::vector<int> cur(m, 0);
    cur[0] = 1;
    std::vector<int> x(m, 0);
    x[1] = 1;
    int q = 1;
    for (int i = 0; i < m; ++i) q *= p;
    for (int e = 1; e < q; ++e) {
      t.push_back(cur);
      cur = mul(cur, x);
    }
    return t;
  }
};

int oracle_index(const std::vector<std::vector<int>>& table, const std::vector<int>& c) {
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] == c) return static_cast<int>(i);
  return -1;
}

const std::vector<int> kSmallQ = {2, 3, 4, 5, 7, 8, 9};

}  // namespace

TEST(FiniteField, AddCancelsInZ3) {
  auto f = FieldSpec::make(3);
  EXPECT_EQ(f->add(1, 2), 0);
}

TEST(FiniteField, AddZeroIsIdentity) {
  for (int q : kSmallQ) {
    auto f = FieldSpec::make(q);
    for (int x = 0; x < q; ++x) EXPECT_EQ(f->add(x, 0), x);
  }
}

TEST(FiniteField, Gf4AlphaPlusOneIsAlphaSquared) {
  auto f = FieldSpec::make(4);
  PolyOracle o(2, {1, 1, 1});
  auto table = o.index_table();
  // alpha = x (index 2), one (index 1), alpha^2 = index 3
  EXPECT_EQ(oracle_index(table, o.add(table[2], table[1])), 3);
  EXPECT_EQ(f->add(2, 1), 3);
  EXPECT_EQ(ff_add(FieldElement(f, 2), FieldElement::one(f)).index(), 3);
}

TEST(FiniteField, ExtensionTablesMatchPolynomialOracle) {
  const std::vector<std::pair<int, std::vector<int>>> cases = {{2, {1, 1, 1}}, {2, {1, 0, 1, 1}}, {3, {1, 1, 2}}};
  for (const auto& [p, mod] : cases) {
    auto f = FieldSpec::make(p, mod);
    PolyOracle o(p, mod);
    auto table = o.index_table();
    ASSERT_EQ(static_cast<int>(table.size()), f->q());
    for (int a = 0; a < f->q(); ++a) {
      auto c = f->coefficients(a);
      EXPECT_EQ(std::vector<int>(c.begin(), c.end()), table[a]);
      for (int b = 0; b < f->q(); ++b) {
        EXPECT_EQ(f->add(a, b), oracle_index(table, o.add(table[a], table[b])));
        EXPECT_EQ(f->mul(a, b), oracle_index(table, o.mul(table[a], table[b])));
      }
    }
  }
}

TEST(FiniteField, InverseOfTwoInZ5) {
  auto f = FieldSpec::make(5);
  int oracle = -1;
  for (int y = 0; y < 5; ++y)
    if (2 * y % 5 == 1) oracle = y;
  EXPECT_EQ(oracle, 3);
  EXPECT_EQ(ff_inv(FieldElement(f, 2)).index(), 3);
}

TEST(FiniteField, InverseOfZeroThrows) {
  auto f = FieldSpec::make(9);
  try {
    ff_inv(FieldElement::zero(f));
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("zero has no inverse"), std::string::npos);
  }
}

TEST(FiniteField, Gf9AlphaToTheEighthIsOne) {
  PolyOracle o(3, {1, 1, 2});
  std::vector<int> acc = {1, 0}, x = {0, 1};
  for (int i = 0; i < 8; ++i) acc = o.mul(acc, x);
  EXPECT_EQ(acc, (std::vector<int>{1, 0}));
  auto f = FieldSpec::make(9);
  EXPECT_EQ(ff_pow(FieldElement::alpha(f), 8), FieldElement::one(f));
  for (int s = 1; s < 8; ++s) EXPECT_NE(f->alpha_power(s), f->one()) << s;
}

TEST(FiniteField, MulByOneIsIdentity) {
  for (int q : kSmallQ) {
    auto f = FieldSpec::make(q);
    for (int x = 0; x < q; ++x) EXPECT_EQ(f->mul(x, 1), x);
  }
}

TEST(FiniteField, TraceValues) {
  auto f4 = FieldSpec::make(4);
  EXPECT_EQ(f4->trace(1), 0);
  auto f9 = FieldSpec::make(9);
  EXPECT_EQ(f9->trace(1), 2);
  for (int q : kSmallQ) EXPECT_EQ(FieldSpec::make(q)->trace(0), 0);
  // tr(x) = x + x^3 evaluated by the polynomial oracle
  PolyOracle o(3, {1, 1, 2});
  auto table = o.index_table();
  for (int x = 0; x < 9; ++x) {
    auto x3 = o.mul(o.mul(table[x], table[x]), table[x]);
    auto t = o.add(table[x], x3);
    EXPECT_EQ(t[1], 0);
    EXPECT_EQ(f9->trace(x), t[0]);
  }
}

TEST(FiniteField, TraceIsLinearAndNonDegenerate) {
  for (int q : kSmallQ) {
    auto f = FieldSpec::make(q);
    for (int x = 0; x < q; ++x) {
      for (int y = 0; y < q; ++y)
        for (int c = 0; c < f->p(); ++c) {
          const int cx = f->mul(f->from_integer(c), x);
          EXPECT_EQ(f->trace(f->add(cx, y)), (c * f->trace(x) + f->trace(y)) % f->p());
        }
      if (x == 0) continue;
      bool found = false;
      for (int y = 0; y < q && !found; ++y) found = f->trace(f->mul(x, y)) != 0;
      EXPECT_TRUE(found) << "q=" << q << " x=" << x;
    }
  }
}

TEST(FiniteField, AxiomsExhaustiveSmallFields) {
  for (int q : kSmallQ) {
    auto f = FieldSpec::make(q);
    for (int a = 0; a < q; ++a) {
      EXPECT_EQ(f->add(a, f->neg(a)), 0);
      if (a) {
        EXPECT_EQ(f->mul(a, f->inv(a)), 1);
      }
      for (int b = 0; b < q; ++b) {
        EXPECT_EQ(f->add(a, b), f->add(b, a));
        EXPECT_EQ(f->mul(a, b), f->mul(b, a));
        for (int c = 0; c < q; ++c) {
          ASSERT_EQ(f->add(f->add(a, b), c), f->add(a, f->add(b, c)));
          ASSERT_EQ(f->mul(f->mul(a, b), c), f->mul(a, f->mul(b, c)));
          ASSERT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
        }
      }
    }
  }
}

TEST(FiniteField, AxiomsRandomizedLargePrimes) {
  std::mt19937 rng(7);
  for (int p : {11, 13, 31, 61}) {
    auto f = FieldSpec::make(p);
    std::uniform_int_distribution<int> u(0, p - 1);
    for (int i = 0; i < 2000; ++i) {
      const int a = u(rng), b = u(rng), c = u(rng);
      EXPECT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
      EXPECT_EQ(f->mul(f->mul(a, b), c), f->mul(a, f->mul(b, c)));
      if (a) {
        EXPECT_EQ(f->mul(a, f->inv(a)), 1);
      }
    }
    EXPECT_NE(f->alpha_power((p - 1) / 2), 1);
    EXPECT_EQ(f->alpha_power(p - 1), 1);
  }
}

TEST(FiniteField, IndexCoefficientRoundTrip) {
  for (int q : kSmallQ) {
    auto f = FieldSpec::make(q);
    for (int x = 0; x < q; ++x) EXPECT_EQ(f->from_coefficients(f->coefficients(x)), x);
  }
}

TEST(FiniteField, MultiplicationIsIndexAdditionForExtensions) {
  for (int q : {4, 8, 9}) {
    auto f = FieldSpec::make(q);
    for (int a = 1; a < q; ++a)
      for (int b = 1; b < q; ++b) EXPECT_EQ(f->mul(a, b), (a - 1 + b - 1) % (q - 1) + 1);
  }
}

TEST(FiniteField, RejectsUnsupportedOrders) {
  EXPECT_THROW(FieldSpec::make(6), DomainError);
  EXPECT_THROW(FieldSpec::make(16), DomainError);
  EXPECT_THROW(FieldSpec::make(67), DomainError);
  EXPECT_THROW(FieldSpec::make(4, {1, 1, 1}), DomainError);  // 4 is not prime
}

TEST(FiniteField, RejectsReducibleOrImprimitiveModulus) {
  EXPECT_THROW(FieldSpec::make(2, {1, 0, 1}), DomainError);  // (x+1)^2
  try {
    FieldSpec::make(3, {1, 0, 1});  // x^2+1 is irreducible over Z_3, x has order 4
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("primitive"), std::string::npos);
  }
}

TEST(FiniteField, MismatchedFieldsThrow) {
  auto a = FieldSpec::make(3);
  auto b = FieldSpec::make(5);
  EXPECT_THROW(ff_add(FieldElement(a, 1), FieldElement(b, 1)), DomainError);
  EXPECT_THROW(ff_mul(FieldElement(a, 1), FieldElement(b, 1)), DomainError);
  // Same parameters built twice compare equal.
  EXPECT_NO_THROW(ff_add(FieldElement(FieldSpec::make(9), 2), FieldElement(FieldSpec::make(9), 3)));
}

TEST(FiniteField, DualBasisPrimeField) {
  auto f = FieldSpec::make(7);
  std::vector<FieldElement> basis = {FieldElement::one(f)};
  auto dual = dual_basis(basis);
  ASSERT_EQ(dual.size(), 1u);
  EXPECT_EQ(dual[0].index(), 1);
}

TEST(FiniteField, DualBasisMatchesExhaustiveSearch) {
  for (int q : {4, 8, 9}) {
    auto f = FieldSpec::make(q);
    const int m = f->m();
    std::vector<int> basis_idx;
    for (int l = 0; l < m; ++l) basis_idx.push_back(f->alpha_power(l));
    std::vector<FieldElement> basis;
    for (int b : basis_idx) basis.emplace_back(f, b);
    auto dual = dual_basis(basis);
    // Each beta_j is the unique element with tr(b_i beta_j) = delta_ij.
    for (int j = 0; j < m; ++j) {
      std::vector<int> hits;
      for (int y = 0; y < q; ++y) {
        bool okay = true;
        for (int i = 0; i < m; ++i) okay = okay && f->trace(f->mul(basis_idx[i], y)) == (i == j ? 1 : 0);
        if (okay) hits.push_back(y);
      }
      ASSERT_EQ(hits.size(), 1u);
      EXPECT_EQ(dual[j].index(), hits[0]);
    }
  }
}

TEST(FiniteField, DualBasisOfEveryIndependentPair) {
  for (int q : {4, 9}) {
    auto f = FieldSpec::make(q);
    for (int a = 1; a < q; ++a)
      for (int b = 1; b < q; ++b) {
        std::vector<FieldElement> basis = {FieldElement(f, a), FieldElement(f, b)};
        bool dependent = false;
        for (int c = 1; c < f->p(); ++c) dependent = dependent || f->mul(f->from_integer(c), a) == b;
        if (dependent) {
          EXPECT_THROW(dual_basis(basis), DomainError);
          continue;
        }
        auto dual = dual_basis(basis);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) EXPECT_EQ(ff_trace(basis[i] * dual[j]), i == j ? 1 : 0);
      }
  }
}

TEST(FiniteField, BaseDecompose) {
  auto f = FieldSpec::make(9);
  auto basis = polynomial_basis(f);
  EXPECT_EQ(base_decompose(basis[0], basis), (std::vector<int>{1, 0}));
  EXPECT_EQ(base_decompose(FieldElement::zero(f), basis), (std::vector<int>{0, 0}));
  // x^2 = -x - 2 = 1 + 2x modulo x^2 + x + 2
  PolyOracle o(3, {1, 1, 2});
  EXPECT_EQ(o.mul({0, 1}, {0, 1}), (std::vector<int>{1, 2}));
  EXPECT_EQ(base_decompose(ff_pow(FieldElement::alpha(f), 2), basis), (std::vector<int>{1, 2}));
  // Arbitrary basis: recombination reproduces the element.
  std::vector<FieldElement> other = {FieldElement(f, 3), FieldElement(f, 4)};
  for (int x = 0; x < 9; ++x) {
    auto c = base_decompose(FieldElement(f, x), other);
    auto sum = FieldElement::zero(f);
    for (int i = 0; i < 2; ++i) sum = sum + FieldElement(f, f->from_integer(c[i])) * other[i];
    EXPECT_EQ(sum.index(), x);
  }
}

TEST(FiniteField, DependentBasisIsRankDeficient) {
  auto f = FieldSpec::make(4);
  std::vector<FieldElement> basis = {FieldElement(f, 2), FieldElement(f, 2)};
  try {
    base_decompose(FieldElement::one(f), basis);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("rank deficient"), std::string::npos);
  }
}
