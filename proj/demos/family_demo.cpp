// Derives the QMDS family of a catalog AME table and prints per-child repeater costs.
//   family_demo [stabtab] [L_tot km]

#include <iomanip>
#include <iostream>
#include <string>

#include "ame/ame.hpp"

#ifndef AME_DEFAULT_CATALOG
#define AME_DEFAULT_CATALOG "catalog"
#endif

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : std::string(AME_DEFAULT_CATALOG) + "/ame_6_2.stabtab";
  const double l_tot = argc > 2 ? std::stod(argv[2]) : 1000.0;
  try {
    const ame::GeneratorTable t = ame::read_stabtab(path);
    const auto family = ame::derive_family(t);
    std::cout << "family of " << t.label() << ", costs at L_tot = " << l_tot << " km\n";
    for (const auto& m : family) {
      std::cout << std::left << std::setw(14) << m.params.label();
      std::cout << " distance " << (m.verified_distance ? std::to_string(*m.verified_distance) : "?");
      if (m.params.k > 0) {
        const auto st = ame::cost_short_term(m.params, l_tot);
        const auto lt = ame::cost_long_term(m.params, l_tot);
        std::cout << "  C_ST " << std::setw(12) << st.value << " C_LT " << std::setw(12) << lt.value << " L0 "
                  << st.plan.l0() << " km";
      }
      std::cout << "\n";
      for (const auto& g : m.table.gens) std::cout << "    " << ame::to_string(g) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
