#pragma once

// One-way repeater cost model over an erasure channel.
//
//   p_l       = 1 - eta_c exp(-L0 / L_att)
//   P_success = sum_{j < d} C(n, j) p_l^j (1 - p_l)^(n - j)
//   R t0      = k log2(q) P_success^r,            r = L_tot / L0
//   C_ST      = min_L0 n log2(q) / (L0 R t0)
//   C_LT      = min_L0 n q / (L0 R t0)
//
// Costs are minimized in the log domain, so very long chains do not underflow.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ame/errors.hpp"
#include "ame/existence.hpp"
#include "ame/pauli.hpp"
#include "ame/stabtab.hpp"

namespace ame {

struct ChannelParams {
  double l_att = 20.0;  // km
  double eta_c = 1.0;
  double t0 = 1.0;

  void validate() const {
    if (!(l_att > 0)) throw DomainError("L_att must be positive");
    if (!(eta_c >= 0 && eta_c <= 1)) throw DomainError("eta_c must lie in [0, 1]");
    if (!(t0 > 0)) throw DomainError("t0 must be positive");
  }
};

struct LinkPlan {
  double l_tot = 0;  // km
  double r = 1;      // number of links; integral on the integer grid
  double l0() const { return l_tot / r; }
};

enum class GridKind {
  integer_r,  // L0 = L_tot / r, r = 1 .. floor(L_tot / 0.1 km)
  fine_l0,    // L0 = 0.01 km, 0.02 km, ..., <= L_tot
};

inline const char* to_string(GridKind g) { return g == GridKind::integer_r ? "integer-r" : "fine-L0"; }

inline double loss_probability(double l0, const ChannelParams& ch) {
  ch.validate();
  if (l0 < 0 || std::isnan(l0)) throw DomainError("link length must be non-negative");
  return 1.0 - ch.eta_c * std::exp(-l0 / ch.l_att);
}

inline void validate_code(const CodeParams& c) {
  if (c.n < 1 || c.d < 1 || c.k < 0 || c.q < 2) throw DomainError("invalid code parameters " + c.label());
  if (c.n > 64) throw DomainError("n > 64 is outside the exact binomial range");
}

/// Probability that at most d - 1 of the n carriers are lost. Neumaier summation.
inline double p_success(const CodeParams& code, double p_l) {
  validate_code(code);
  if (!(p_l >= 0 && p_l <= 1)) throw DomainError("loss probability must lie in [0, 1]");
  const int top = std::min(code.d - 1, code.n);
  double sum = 0, comp = 0;
  for (int j = 0; j <= top; ++j) {
    const double term = static_cast<double>(binomial(static_cast<std::uint64_t>(code.n), static_cast<std::uint64_t>(j))) *
                        std::pow(p_l, j) * std::pow(1.0 - p_l, code.n - j);
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return std::min(1.0, std::max(0.0, sum + comp));
}

/// R t0 in qubits per t0.
inline double rate(const CodeParams& code, const LinkPlan& plan, const ChannelParams& ch) {
  if (!(plan.r >= 1) || !(plan.l_tot > 0)) throw DomainError("link plan needs L_tot > 0 and r >= 1");
  const double ps = p_success(code, loss_probability(plan.l0(), ch));
  return code.k * std::log2(static_cast<double>(code.q)) * std::pow(ps, plan.r);
}

/// Rate R itself, in qubits per unit time.
inline double rate_per_time(const CodeParams& code, const LinkPlan& plan, const ChannelParams& ch) {
  return rate(code, plan, ch) / ch.t0;
}

struct CostResult {
  double value = 0;      // may be +inf when exp overflows
  double log_value = 0;  // natural log, always finite unless P_success = 0 everywhere
  LinkPlan plan;
};

enum class CostKind { short_term, long_term };

namespace detail {

inline double log_cost(const CodeParams& code, double numerator, double l_tot, double r, const ChannelParams& ch) {
  const double l0 = l_tot / r;
  const double ps = p_success(code, loss_probability(l0, ch));
  if (ps <= 0) return std::numeric_limits<double>::infinity();
  return std::log(numerator) - std::log(l0) - std::log(code.k * std::log2(static_cast<double>(code.q))) - r * std::log(ps);
}

inline CostResult minimize_cost(const CodeParams& code, double numerator, double l_tot, const ChannelParams& ch,
                                GridKind grid) {
  validate_code(code);
  ch.validate();
  if (code.k < 1) throw DomainError("cost needs k >= 1 (a k=0 code carries no rate)");
  if (!(l_tot > 0)) throw DomainError("total distance must be positive");
  CostResult best;
  best.log_value = std::numeric_limits<double>::infinity();
  bool any = false;
  if (grid == GridKind::integer_r) {
    const auto r_max = static_cast<long long>(std::floor(l_tot / 0.1 + 1e-9));
    for (long long r = 1; r <= r_max; ++r) {
      const double lc = log_cost(code, numerator, l_tot, static_cast<double>(r), ch);
      any = true;
      if (lc < best.log_value) {
        best.log_value = lc;
        best.plan = {l_tot, static_cast<double>(r)};
      }
    }
  } else {
    const auto steps = static_cast<long long>(std::floor(l_tot / 0.01 + 1e-9));
    for (long long i = 1; i <= steps; ++i) {
      const double l0 = 0.01 * static_cast<double>(i);
      const double lc = log_cost(code, numerator, l_tot, l_tot / l0, ch);
      any = true;
      if (lc < best.log_value) {
        best.log_value = lc;
        best.plan = {l_tot, l_tot / l0};
      }
    }
  }
  if (!any) throw DomainError("empty L0 grid for L_tot=" + std::to_string(l_tot) + " km");
  best.value = std::exp(best.log_value);
  return best;
}

}  // namespace detail

inline CostResult cost_short_term(const CodeParams& code, double l_tot, const ChannelParams& ch = {},
                                  GridKind grid = GridKind::integer_r) {
  return detail::minimize_cost(code, code.n * std::log2(static_cast<double>(code.q)), l_tot, ch, grid);
}

inline CostResult cost_long_term(const CodeParams& code, double l_tot, const ChannelParams& ch = {},
                                 GridKind grid = GridKind::integer_r) {
  return detail::minimize_cost(code, static_cast<double>(code.n) * code.q, l_tot, ch, grid);
}

inline CostResult cost(CostKind kind, const CodeParams& code, double l_tot, const ChannelParams& ch = {},
                       GridKind grid = GridKind::integer_r) {
  return kind == CostKind::short_term ? cost_short_term(code, l_tot, ch, grid) : cost_long_term(code, l_tot, ch, grid);
}

/// Cost at a fixed plan (no minimization).
inline double cost_at(CostKind kind, const CodeParams& code, const LinkPlan& plan, const ChannelParams& ch = {}) {
  const double num = kind == CostKind::short_term ? code.n * std::log2(static_cast<double>(code.q))
                                                  : static_cast<double>(code.n) * code.q;
  return num / (plan.l0() * rate(code, plan, ch));
}

/// Children [[n-k, k, floor(n/2)+1-k]]_q for k = 1 .. floor(n/2)-1.
inline std::vector<CodeParams> child_family(int n, int q) {
  std::vector<CodeParams> out;
  for (int k = 1; k <= n / 2 - 1; ++k) out.push_back({n - k, k, n / 2 + 1 - k, q});
  return out;
}

struct FamilyChoice {
  CodeParams best;
  double log_cost = 0;
  std::vector<double> log_costs;  // per child, same order as child_family
};

/// argmin over the family of the chosen cost; exact ties go to the smaller k.
inline FamilyChoice best_child(int n, int q, double l_tot, CostKind kind, const ChannelParams& ch = {},
                               GridKind grid = GridKind::integer_r) {
  const auto family = child_family(n, q);
  if (family.empty()) throw DomainError("AME(" + std::to_string(n) + "," + std::to_string(q) + ") has no children");
  FamilyChoice out;
  out.log_cost = std::numeric_limits<double>::infinity();
  for (const auto& c : family) {
    const double lc = cost(kind, c, l_tot, ch, grid).log_value;
    out.log_costs.push_back(lc);
    if (lc < out.log_cost) {
      out.log_cost = lc;
      out.best = c;
    }
  }
  return out;
}

struct OptimalKCell {
  int n = 0;
  int q = 0;
  Existence existence = Existence::unknown;
  std::vector<int> best_k;          // per distance; empty unless exists
  std::vector<double> best_log_cost;

  /// "k1,k2" for existing AMEs, otherwise the grid marker.
  std::string text() const {
    if (existence != Existence::exists) return existence_marker(existence);
    std::string s;
    for (std::size_t i = 0; i < best_k.size(); ++i) s += (i ? "," : "") + std::to_string(best_k[i]);
    return s;
  }
};

struct GridCell {
  int n = 0;
  int q = 0;
  Existence existence = Existence::unknown;
};

inline std::vector<OptimalKCell> optimal_k_table(const std::vector<GridCell>& cells, const std::vector<double>& distances,
                                                 const ChannelParams& ch = {}, GridKind grid = GridKind::integer_r) {
  std::vector<OptimalKCell> out;
  for (const auto& c : cells) {
    OptimalKCell cell{c.n, c.q, c.existence, {}, {}};
    if (c.existence == Existence::exists && c.n >= 4) {
      for (double l : distances) {
        const FamilyChoice fc = best_child(c.n, c.q, l, CostKind::long_term, ch, grid);
        cell.best_k.push_back(fc.best.k);
        cell.best_log_cost.push_back(fc.log_cost);
      }
    }
    out.push_back(std::move(cell));
  }
  return out;
}

/// CSV: l_tot_km,code,rate_t0_l0_1km,c_st,c_st_l0_km
inline std::string emit_figure_data(const std::vector<CodeParams>& family, const ChannelParams& ch,
                                    const std::vector<double>& sweep, GridKind grid = GridKind::integer_r) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "l_tot_km,code,rate_t0_l0_1km,c_st,c_st_l0_km\n";
  for (double l : sweep)
    for (const auto& c : family) {
      const double r = std::max(1.0, std::round(l / 1.0));
      const double rt = rate(c, {l, r}, ch);
      const CostResult cs = cost_short_term(c, l, ch, grid);
      os << l << "," << c.label() << "," << rt << "," << cs.value << "," << cs.plan.l0() << "\n";
    }
  return os.str();
}

}  // namespace ame
