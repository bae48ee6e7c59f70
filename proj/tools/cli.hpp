#pragma once

// Subcommand driver for the amecodes executable. Exit codes:
//   0 success, 1 negative verdict, 2 usage/domain/parse error, 3 budget exceeded.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ame/ame.hpp"

#ifndef AME_DEFAULT_CATALOG
#define AME_DEFAULT_CATALOG "catalog"
#endif

namespace ame::cli {

enum Exit { ok = 0, failed = 1, usage = 2, resource = 3 };

namespace detail {

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw DomainError("bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

inline CodeParams parse_code(const std::string& s) {
  const auto v = parse_list(s);
  if (v.size() != 4) throw DomainError("code must be n,k,d,q: '" + s + "'");
  return {static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]), static_cast<int>(v[3])};
}

inline GridKind parse_grid(const std::string& s) {
  if (s == "integer-r") return GridKind::integer_r;
  if (s == "fine-l0") return GridKind::fine_l0;
  throw DomainError("grid must be integer-r or fine-l0");
}

inline std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write " + path);
  f << text;
}

inline std::string params_label(const GeneratorTable& t, const DistanceResult& d) {
  return "[[" + std::to_string(t.n) + "," + std::to_string(t.k) + "," + d.describe() + "]]_" + std::to_string(t.q());
}

inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k == 0 || k > n) return out;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  do out.push_back(c);
  while (next_combination(c, n));
  return out;
}

inline std::string subset_text(const std::vector<std::size_t>& a) {
  std::string s = "{";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i] + 1);
  return s + "}";
}

}  // namespace detail

struct Options {
  std::string file;
  int dmax = 0;
  std::uint64_t budget = DistanceOptions{}.budget;
  unsigned jobs = 1;
  std::string out;
  std::string outdir = ".";
  int kl_d = 0;
  int entropy_subsets = -1;
  int message_sites = 0;
  int n = 0, k = 0, d = 0, q = 0;
  std::string ltot;  // per-command default when empty
  double l0 = 1.0;
  bool optimize = false;
  double latt = 20.0;
  double etac = 1.0;
  double t0 = 1.0;
  std::string csv;
  std::string format = "text";
  std::string grid = "integer-r";
  std::string catalog = AME_DEFAULT_CATALOG;
  std::vector<std::string> extra_codes;
  std::string catalog_action;
  std::string catalog_id;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  ChannelParams channel() const {
    ChannelParams ch{o_.latt, o_.etac, o_.t0};
    ch.validate();
    return ch;
  }
  DistanceOptions distance_options() const { return {o_.budget, o_.jobs}; }

  int verify() {
    const GeneratorTable t = read_stabtab(o_.file);
    out_ << "code " << t.label() << " over " << t.field->name() << ", " << t.gens.size() << " generators\n";
    if (!t.field->is_prime_field() && single_site_xz_commute(*t.field))
      err_ << "warning: X and Z commute on a single site of " << t.field->name() << "\n";
    bool good = true;
    const auto c = check_commutation(t);
    if (c.ok) {
      out_ << "commutation: pass\n";
    } else {
      out_ << "commutation: FAIL at pair (g" << c.first << ", g" << c.second << "), exponent " << c.exponent << "\n";
      good = false;
    }
    const auto ind = check_independence(t);
    if (ind.ok) {
      out_ << "independence: pass (rank " << ind.rank << ")\n";
    } else {
      out_ << "independence: FAIL (rank " << ind.rank << "), dependency";
      for (int w : ind.witness) out_ << " " << w;
      out_ << "\n";
      good = false;
    }
    if (!good) return failed;
    const int dmax = o_.dmax > 0 ? o_.dmax : (t.d ? *t.d + 1 : t.n);
    const DistanceResult d = compute_distance(t, dmax, distance_options());
    out_ << "distance: " << d.describe();
    if (d.witness) out_ << " (witness " << to_string(*d.witness) << ")";
    out_ << "\n";
    if (t.d) {
      const bool match = d.distance && *d.distance == *t.d;
      out_ << "claimed d=" << *t.d << ": " << (match ? "confirmed" : "MISMATCH") << "\n";
      good = good && match;
    }
    if (!d.distance) return good ? ok : failed;
    const CodeParams p{t.n, t.k, *d.distance, t.q()};
    const SingletonClass cls = classify_singleton(p);
    out_ << "singleton: " << to_string(cls) << "\n";
    if (t.k == 0) {
      const bool ame = *d.distance == t.n / 2 + 1;
      out_ << "AME: " << (ame ? "yes" : "no") << ", d=" << *d.distance << ", " << to_string(cls) << "\n";
    } else {
      out_ << "code: " << p.label() << ", " << to_string(cls) << "\n";
    }
    return good ? ok : failed;
  }

  int reduce() {
    const GeneratorTable t = read_stabtab(o_.file);
    const ReductionFriendlyForm f = to_reduction_friendly(t);
    const std::string text = emit_stabtab(f.table);
    if (o_.out.empty()) {
      out_ << text;
    } else {
      detail::write_file(o_.out, text);
      out_ << "wrote " << o_.out << " (block width " << f.block_width << ", " << to_string(f.layout) << " layout)\n";
    }
    return ok;
  }

  int children() {
    const GeneratorTable t = read_stabtab(o_.file);
    const auto family = derive_family(t, distance_options());
    std::filesystem::create_directories(o_.outdir);
    bool good = true;
    for (const auto& m : family) {
      if (m.params.k == 0) continue;
      const std::string name = "qmds_" + std::to_string(m.params.n) + "_" + std::to_string(m.params.k) + "_" +
                               std::to_string(m.params.d) + "_" + std::to_string(m.params.q) + ".stabtab";
      const auto path = (std::filesystem::path(o_.outdir) / name).string();
      detail::write_file(path, emit_stabtab(m.table));
      out_ << m.params.label() << " -> " << path << ": commutation " << (m.commutes ? "pass" : "FAIL")
           << ", independence " << (m.independent ? "pass" : "FAIL") << ", distance ";
      if (m.verified_distance)
        out_ << *m.verified_distance;
      else
        out_ << "unverified (" << m.budget_note << ")";
      out_ << ", " << to_string(classify_singleton(m.params)) << "\n";
      good = good && m.commutes && m.independent && (!m.verified_distance || *m.verified_distance == m.params.d);
    }
    return good ? ok : failed;
  }

  int oracle() {
    CodewordSet words;
    std::optional<BasisStateVector> state;
    int claimed_d = 0;
    if (o_.file.ends_with(".state")) {
      state = read_state(o_.file, o_.q > 0 ? std::optional<int>(o_.q) : std::nullopt);
      out_ << "state on " << state->n << " sites, q=" << state->field->q() << ", norm " << detail::fmt(state->norm(), 12)
           << "\n";
      if (o_.message_sites > 0) {
        words = ame_projection_codewords(*state, static_cast<std::size_t>(o_.message_sites));
        out_ << "codewords: " << words.size() << " projections on the first " << o_.message_sites << " site(s)\n";
        claimed_d = static_cast<int>(state->n) / 2 + 1 - o_.message_sites;
      } else {
        words = {state->field, state->n, {*state}};
        claimed_d = static_cast<int>(state->n) / 2 + 1;
      }
    } else {
      const GeneratorTable t = read_stabtab(o_.file);
      words = expand_stabilizer(t);
      out_ << "code " << t.label() << ": joint eigenspace of dimension " << words.size() << "\n";
      if (t.k == 0) state = words.words.front();
      claimed_d = t.d.value_or(0);
    }
    if (state) {
      const std::size_t n = state->n;
      const std::size_t top = o_.entropy_subsets >= 0 ? static_cast<std::size_t>(o_.entropy_subsets) : n / 2;
      for (std::size_t s = 1; s <= std::min(top, n); ++s) {
        double lo = 1e300, hi = -1e300;
        for (const auto& a : detail::subsets_of_size(n, s)) {
          const double e = reduced_entropy(*state, a);
          lo = std::min(lo, e);
          hi = std::max(hi, e);
        }
        out_ << "entropy |A|=" << s << ": min " << detail::fmt(lo, 10) << " max " << detail::fmt(hi, 10) << " bits (max "
             << detail::fmt(static_cast<double>(s) * std::log2(state->field->q()), 10) << ")\n";
      }
    }
    const int d = o_.kl_d > 0 ? o_.kl_d : claimed_d;
    bool good = true;
    if (d > 0) {
      const KLResult kl = knill_laflamme_check(words, d);
      out_ << "Knill-Laflamme at d=" << d << ": " << (kl.ok ? "pass" : "FAIL");
      if (kl.witness) out_ << " (witness " << to_string(*kl.witness) << ", weight " << weight(*kl.witness) << ")";
      out_ << "\n";
      good = kl.ok;
    }
    const auto dd = dense_distance(words, static_cast<int>(words.n));
    out_ << "dense distance: " << (dd ? std::to_string(*dd) : ">" + std::to_string(words.n)) << "\n";
    return good ? ok : failed;
  }

  CodeParams code_from_flags() const {
    CodeParams c{o_.n, o_.k, o_.d, o_.q};
    if (c.n < 1 || c.q < 2 || c.d < 1) throw DomainError("--n, --k, --d and --q are required");
    return c;
  }

  int rate_cmd() {
    const CodeParams c = code_from_flags();
    const ChannelParams ch = channel();
    std::ostringstream csv;
    csv << "l_tot_km,code,l0_km,r,p_success,rate_t0\n";
    if (o_.format == "text") out_ << "code " << c.label() << "\n";
    for (double l : detail::parse_list(o_.ltot.empty() ? std::string("1000") : o_.ltot)) {
      LinkPlan plan;
      if (o_.optimize) {
        plan = cost_short_term(c, l, ch, detail::parse_grid(o_.grid)).plan;
      } else {
        plan = {l, l / o_.l0};
        if (std::abs(plan.r - std::round(plan.r)) > 1e-9) throw DomainError("L_tot must be a multiple of L0");
        plan.r = std::round(plan.r);
      }
      const double ps = p_success(c, loss_probability(plan.l0(), ch));
      const double rt = rate(c, plan, ch);
      csv << detail::fmt(l, 10) << "," << c.label() << "," << detail::fmt(plan.l0(), 10) << "," << detail::fmt(plan.r, 10)
          << "," << detail::fmt(ps, 12) << "," << detail::fmt(rt, 12) << "\n";
      if (o_.format == "text")
        out_ << "L_tot=" << l << " km, L0=" << detail::fmt(plan.l0()) << " km, r=" << plan.r
             << ": P_success=" << detail::fmt(ps, 10) << ", R*t0=" << detail::fmt(rt, 10) << "\n";
    }
    emit_csv(csv.str());
    return ok;
  }

  int cost_cmd() {
    const CodeParams c = code_from_flags();
    const ChannelParams ch = channel();
    const GridKind g = detail::parse_grid(o_.grid);
    std::ostringstream csv;
    csv << "l_tot_km,code,grid,c_st,c_lt,l0_km,r\n";
    if (o_.format == "text") out_ << "code " << c.label() << ", grid " << to_string(g) << "\n";
    for (double l : detail::parse_list(o_.ltot.empty() ? std::string("1000") : o_.ltot)) {
      const CostResult st = cost_short_term(c, l, ch, g);
      const CostResult lt = cost_long_term(c, l, ch, g);
      csv << detail::fmt(l, 10) << "," << c.label() << "," << to_string(g) << "," << detail::fmt(st.value, 12) << ","
          << detail::fmt(lt.value, 12) << "," << detail::fmt(st.plan.l0(), 10) << "," << detail::fmt(st.plan.r, 10) << "\n";
      if (o_.format == "text")
        out_ << "L_tot=" << l << " km: C_ST=" << detail::fmt(st.value, 10) << ", C_LT=" << detail::fmt(lt.value, 10)
             << " at L0=" << detail::fmt(st.plan.l0()) << " km (r=" << st.plan.r << ")\n";
    }
    emit_csv(csv.str());
    return ok;
  }

  int table_cmd() {
    const auto grid = catalog_grid(o_.catalog);
    const auto dist = detail::parse_list(o_.ltot.empty() ? std::string("1000,10000") : o_.ltot);
    const auto cells = optimal_k_table(grid, dist, channel(), detail::parse_grid(o_.grid));
    std::ostringstream csv;
    csv << "n,q,existence";
    for (double l : dist) csv << ",k_" << detail::fmt(l, 10) << "km";
    csv << "\n";
    for (const auto& c : cells) {
      csv << c.n << "," << c.q << "," << to_string(c.existence);
      for (std::size_t i = 0; i < dist.size(); ++i) csv << "," << (i < c.best_k.size() ? std::to_string(c.best_k[i]) : "");
      csv << "\n";
    }
    if (o_.format == "text") {
      out_ << "optimal k (C_LT) at L_tot =";
      for (double l : dist) out_ << " " << l;
      out_ << " km\n n\\q";
      for (int q = 2; q <= 8; ++q) out_ << std::setw(8) << q;
      out_ << "\n";
      for (int n = 4; n <= 14; ++n) {
        out_ << std::setw(4) << n;
        for (const auto& c : cells)
          if (c.n == n) out_ << std::setw(8) << c.text();
        out_ << "\n";
      }
    }
    emit_csv(csv.str());
    return ok;
  }

  int figure_cmd() {
    std::vector<CodeParams> family;
    if (o_.n > 0 && o_.q > 0) family = child_family(o_.n, o_.q);
    for (const auto& s : o_.extra_codes) family.push_back(detail::parse_code(s));
    if (family.empty()) throw DomainError("figure needs --n and --q (AME family) and/or --code n,k,d,q");
    const std::string text = emit_figure_data(family, channel(), detail::parse_list(o_.ltot.empty() ? std::string("100,200,500,1000,2000,5000,10000") : o_.ltot), detail::parse_grid(o_.grid));
    if (o_.csv.empty())
      out_ << text;
    else {
      detail::write_file(o_.csv, text);
      out_ << "wrote " << o_.csv << "\n";
    }
    return ok;
  }

  int catalog_cmd() {
    if (o_.catalog_action == "grid") {
      const auto grid = catalog_grid(o_.catalog);
      out_ << " n\\q";
      for (int q = 2; q <= 8; ++q) out_ << std::setw(4) << q;
      out_ << "\n";
      for (int n = 4; n <= 14; ++n) {
        out_ << std::setw(4) << n;
        for (int q = 2; q <= 8; ++q) out_ << std::setw(4) << existence_marker(grid_lookup(grid, n, q));
        out_ << "\n";
      }
      return ok;
    }
    CatalogOptions copt;
    copt.distance = distance_options();
    const auto entries = load_catalog(o_.catalog, copt);
    if (o_.catalog_action == "list") {
      for (const auto& e : entries)
        out_ << std::left << std::setw(14) << e.id << std::setw(16) << e.params.label() << std::setw(9)
             << to_string(e.source) << "verified d=" << (e.verified_distance ? std::to_string(*e.verified_distance) : "?")
             << "\n";
      out_ << std::right << entries.size() << " entries\n";
      return ok;
    }
    for (const auto& e : entries)
      if (e.id == o_.catalog_id) {
        out_ << "id: " << e.id << "\nparams: " << e.params.label() << "\nsource: " << to_string(e.source)
             << "\nnote: " << e.note << "\nfile: " << e.file << "\n"
             << emit_stabtab(e.table);
        return ok;
      }
    throw DomainError("no catalog entry '" + o_.catalog_id + "'");
  }

 private:
  void emit_csv(const std::string& text) {
    if (!o_.csv.empty()) detail::write_file(o_.csv, text);
    if (o_.format == "csv") out_ << text;
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

/// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Stabilizer tables for AME states, their QMDS children, and repeater costs"};
  app.require_subcommand(1);

  auto add_budget = [&](CLI::App* s) {
    s->add_option("--budget", o.budget, "commutation-test budget for distance scans");
    s->add_option("--jobs", o.jobs, "worker threads for distance scans")->check(CLI::Range(1u, 256u));
  };
  auto add_channel = [&](CLI::App* s) {
    s->add_option("--latt", o.latt, "attenuation length, km");
    s->add_option("--etac", o.etac, "coupling efficiency");
    s->add_option("--t0", o.t0, "local operation time");
    s->add_option("--csv", o.csv, "also write CSV to this path");
    s->add_option("--format", o.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    s->add_option("--grid", o.grid, "L0 grid: integer-r or fine-l0")->check(CLI::IsMember({"integer-r", "fine-l0"}));
  };
  auto add_code = [&](CLI::App* s) {
    s->add_option("--n", o.n, "physical qudits");
    s->add_option("--k", o.k, "logical qudits");
    s->add_option("--d", o.d, "distance");
    s->add_option("--q", o.q, "local dimension");
  };

  auto* verify = app.add_subcommand("verify", "check commutation, independence, distance and Singleton class");
  verify->add_option("file", o.file, "stabtab file")->required();
  verify->add_option("--dmax", o.dmax, "largest weight scanned");
  add_budget(verify);

  auto* reduce = app.add_subcommand("reduce", "emit the reduction-friendly form");
  reduce->add_option("file", o.file, "stabtab file")->required();
  reduce->add_option("--out", o.out, "output path (stdout if omitted)");

  auto* children = app.add_subcommand("children", "write every child code, one stabtab per k");
  children->add_option("file", o.file, "stabtab file of a k=0 code")->required();
  children->add_option("--outdir", o.outdir, "output directory");
  add_budget(children);

  auto* oracle = app.add_subcommand("oracle", "dense checks on a stabtab or state file");
  oracle->add_option("file", o.file, "stabtab or .state file")->required();
  oracle->add_option("--kl-d", o.kl_d, "distance for the Knill-Laflamme check");
  oracle->add_option("--entropy-subsets", o.entropy_subsets, "largest subset size for entropies");
  oracle->add_option("--message-sites", o.message_sites, "project a state onto its leading sites");
  oracle->add_option("--q", o.q, "local dimension for headerless state files");

  auto* rate = app.add_subcommand("rate", "R*t0 for a code");
  add_code(rate);
  rate->add_option("--ltot", o.ltot, "total distance(s), km, comma separated");
  rate->add_option("--l0", o.l0, "link length, km");
  rate->add_flag("--optimize", o.optimize, "use the C_ST-optimal L0 instead of --l0");
  add_channel(rate);

  auto* cost = app.add_subcommand("cost", "C_ST and C_LT minimized over L0");
  add_code(cost);
  cost->add_option("--ltot", o.ltot, "total distance(s), km");
  add_channel(cost);

  auto* table = app.add_subcommand("table", "optimal k per AME(n,q) cell");
  table->add_option("--ltot", o.ltot, "total distances, km (default 1000,10000)");
  table->add_option("--catalog", o.catalog, "catalog directory");
  add_channel(table);

  auto* figure = app.add_subcommand("figure", "rate at L0 = 1 km and optimal C_ST over a sweep");
  figure->add_option("--n", o.n, "AME size");
  figure->add_option("--q", o.q, "AME local dimension");
  figure->add_option("--code", o.extra_codes, "extra code n,k,d,q");
  figure->add_option("--ltot", o.ltot, "sweep of total distances, km");
  add_channel(figure);

  auto* catalog = app.add_subcommand("catalog", "browse the catalog");
  catalog->add_option("action", o.catalog_action, "list, show or grid")
      ->required()
      ->check(CLI::IsMember({"list", "show", "grid"}));
  catalog->add_option("id", o.catalog_id, "entry id for show");
  catalog->add_option("--catalog", o.catalog, "catalog directory");
  add_budget(catalog);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }

  Runner run(o, out, err);
  try {
    if (*verify) return run.verify();
    if (*reduce) return run.reduce();
    if (*children) return run.children();
    if (*oracle) return run.oracle();
    if (*rate) return run.rate_cmd();
    if (*cost) return run.cost_cmd();
    if (*table) return run.table_cmd();
    if (*figure) return run.figure_cmd();
    if (*catalog) {
      if (o.catalog_action == "show" && o.catalog_id.empty()) throw DomainError("catalog show needs an id");
      return run.catalog_cmd();
    }
  } catch (const ResourceError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return resource;
  } catch (const InvariantError& e) {
    err << "verification failed: " << e.what() << "\n";
    return failed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

}  // namespace ame::cli
