#pragma once

#include <random>
#include <string>
#include <vector>

#include "ame/code.hpp"
#include "ame/stabtab.hpp"

namespace ame::test {

inline std::string catalog_file(const std::string& name) { return std::string(AME_CATALOG_DIR) + "/" + name; }
inline std::string printed_file(const std::string& name) { return std::string(AME_TEST_DATA_DIR) + "/printed/" + name; }

inline GeneratorTable catalog_table(const std::string& id) { return read_stabtab(catalog_file(id + ".stabtab")); }
inline GeneratorTable printed_table(const std::string& id) { return read_stabtab(printed_file(id + ".stabtab")); }

inline std::vector<std::vector<int>> symplectic_rows(const GeneratorTable& t) {
  std::vector<std::vector<int>> rows;
  for (const auto& g : t.gens) rows.push_back(to_symplectic(g));
  return rows;
}

inline GeneratorTable from_rows(const GeneratorTable& shape, const std::vector<std::vector<int>>& rows) {
  GeneratorTable out = shape;
  out.gens.clear();
  for (const auto& r : rows) out.gens.push_back(from_symplectic(shape.field, r));
  return out;
}

/// Random invertible Z_p row operations (g_i <- g_i^s prod_j g_j^{s_j}) followed by a random row permutation.
inline GeneratorTable scramble_rows(const GeneratorTable& t, std::mt19937& rng, int ops = 40) {
  const int p = t.field->p();
  auto rows = symplectic_rows(t);
  const std::size_t R = rows.size();
  if (R == 0) return t;
  std::uniform_int_distribution<std::size_t> pick(0, R - 1);
  std::uniform_int_distribution<int> unit(1, p - 1), any(0, p - 1);
  for (int o = 0; o < ops; ++o) {
    const std::size_t i = pick(rng);
    const int s = unit(rng);
    for (auto& v : rows[i]) v = v * s % p;
    for (std::size_t j = 0; j < R; ++j) {
      if (j == i) continue;
      const int c = any(rng);
      if (c == 0) continue;
      for (std::size_t col = 0; col < rows[i].size(); ++col) rows[i][col] = (rows[i][col] + c * rows[j][col]) % p;
    }
  }
  std::shuffle(rows.begin(), rows.end(), rng);
  return from_rows(t, rows);
}

/// Site-wise maps preserving the commutation form: (x, z) -> (a x, a^-1 z), (x, z) -> (z, -x), (x, z) -> (x, z + c x).
inline GeneratorTable scramble_sites(const GeneratorTable& t, std::mt19937& rng) {
  const FieldSpec& f = *t.field;
  std::uniform_int_distribution<int> nonzero(1, f.q() - 1), any(0, f.q() - 1), coin(0, 1);
  GeneratorTable out = t;
  for (int s = 0; s < t.n; ++s) {
    const int a = nonzero(rng), c = any(rng);
    const bool swap = coin(rng);
    for (auto& g : out.gens) {
      SiteOp op = g.site(static_cast<std::size_t>(s));
      op = {f.mul(a, op.x), f.mul(f.inv(a), op.z)};
      if (swap) op = {op.z, f.neg(op.x)};
      op = {op.x, f.add(op.z, f.mul(c, op.x))};
      g.set_site(static_cast<std::size_t>(s), op);
    }
  }
  return out;
}

}  // namespace ame::test
