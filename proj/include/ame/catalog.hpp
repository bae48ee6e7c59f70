#pragma once

// Catalog directory: stabtab files plus a flat key/value manifest `index.toml`.
//
//   # comment
//   entry.<id>.file   = "<file name relative to the directory>"
//   entry.<id>.source = "printed" | "derived"
//   entry.<id>.note   = "<free text>"
//   grid.<n>.<q>      = "exists" | "not-exists" | "unknown"
//
// Values are double-quoted with no escapes. Keys may appear in any order; ids are reported sorted.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ame/code.hpp"
#include "ame/errors.hpp"
#include "ame/existence.hpp"
#include "ame/repeater.hpp"
#include "ame/stabtab.hpp"

namespace ame {

enum class EntrySource { printed, derived };

inline const char* to_string(EntrySource s) { return s == EntrySource::printed ? "printed" : "derived"; }

struct CatalogEntry {
  std::string id;
  CodeParams params;
  EntrySource source = EntrySource::printed;
  std::string file;  // absolute or directory-relative path of the stabtab file
  std::string note;
  GeneratorTable table;
  Existence existence = Existence::exists;
  std::optional<int> verified_distance;
};

struct Manifest {
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> entries;  // id -> key -> (value, line)
  std::map<std::pair<int, int>, Existence> grid;
};

inline Manifest parse_manifest(std::string_view text, const std::string& source = "index.toml") {
  Manifest m;
  std::istringstream in{std::string(text)};
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    std::string_view line = detail::trim_view(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, no, "expected key = \"value\"");
    const std::string key(detail::trim_view(line.substr(0, eq)));
    std::string_view val = detail::trim_view(line.substr(eq + 1));
    if (val.size() < 2 || val.front() != '"' || val.back() != '"')
      throw ParseError(source, no, "value for '" + key + "' must be double-quoted");
    const std::string value(val.substr(1, val.size() - 2));
    if (value.find('"') != std::string::npos) throw ParseError(source, no, "embedded quote in value");
    for (char c : key)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-'))
        throw ParseError(source, no, "bad character in key '" + key + "'");

    std::vector<std::string> parts;
    std::stringstream ks(key);
    for (std::string part; std::getline(ks, part, '.');) parts.push_back(part);
    if (parts.size() == 3 && parts[0] == "entry") {
      if (parts[2] != "file" && parts[2] != "source" && parts[2] != "note")
        throw ParseError(source, no, "unknown entry field '" + parts[2] + "'");
      auto& fields = m.entries[parts[1]];
      if (fields.count(parts[2])) throw ParseError(source, no, "duplicate key '" + key + "'");
      fields[parts[2]] = {value, no};
    } else if (parts.size() == 3 && parts[0] == "grid") {
      const auto n = detail::parse_int(parts[1]);
      const auto q = detail::parse_int(parts[2]);
      if (!n || !q) throw ParseError(source, no, "grid key needs integers: '" + key + "'");
      const auto e = parse_existence(value);
      if (!e) throw ParseError(source, no, "existence must be exists, not-exists or unknown");
      if (!m.grid.emplace(std::pair{*n, *q}, *e).second) throw ParseError(source, no, "duplicate key '" + key + "'");
    } else {
      throw ParseError(source, no, "unknown key '" + key + "'");
    }
  }
  return m;
}

inline std::optional<Manifest> read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "index.toml";
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.string());
}

struct CatalogOptions {
  bool verify = true;
  DistanceOptions distance;
};

/// Parses and verifies every table entry. A directory without a manifest is an empty catalog.
inline std::vector<CatalogEntry> load_catalog(const std::filesystem::path& dir, const CatalogOptions& opt = {}) {
  if (!std::filesystem::is_directory(dir)) throw DomainError("catalog directory not found: " + dir.string());
  const auto manifest = read_manifest(dir);
  if (!manifest) return {};
  std::vector<CatalogEntry> out;
  const std::string mpath = (dir / "index.toml").string();
  for (const auto& [id, fields] : manifest->entries) {
    auto field = [&](const std::string& name) -> const std::pair<std::string, int>* {
      auto it = fields.find(name);
      return it == fields.end() ? nullptr : &it->second;
    };
    const int line = fields.begin()->second.second;
    const auto* file = field("file");
    if (!file) throw ParseError(mpath, line, "entry '" + id + "' has no file");
    CatalogEntry e;
    e.id = id;
    e.file = (dir / file->first).string();
    if (const auto* s = field("source")) {
      if (s->first == "printed")
        e.source = EntrySource::printed;
      else if (s->first == "derived")
        e.source = EntrySource::derived;
      else
        throw ParseError(mpath, s->second, "source must be printed or derived");
    }
    if (const auto* n = field("note")) e.note = n->first;
    if (e.source == EntrySource::derived && e.note.empty())
      throw ParseError(mpath, line, "derived entry '" + id + "' needs a provenance note");
    e.table = read_stabtab(e.file);
    if (!e.table.d) throw InvariantError("catalog entry " + id + ": table has no d= claim");
    e.params = *e.table.claimed();
    if (opt.verify) {
      const auto c = check_commutation(e.table);
      if (!c.ok)
        throw InvariantError("catalog entry " + id + ": commutation fails for g" + std::to_string(c.first) + ", g" +
                             std::to_string(c.second));
      if (!check_independence(e.table).ok) throw InvariantError("catalog entry " + id + ": generators are dependent");
      const DistanceResult d = compute_distance(e.table, e.params.d, opt.distance);
      if (!d.distance || *d.distance != e.params.d)
        throw InvariantError("catalog entry " + id + ": distance " + d.describe() + " differs from claimed d=" +
                             std::to_string(e.params.d));
      e.verified_distance = d.distance;
    }
    out.push_back(std::move(e));
  }
  return out;
}

/// Existence grid for n = 4..n_max, q = 2..q_max from the manifest; missing cells are unknown.
inline std::vector<GridCell> catalog_grid(const std::filesystem::path& dir, int n_max = 14, int q_max = 8) {
  const auto manifest = read_manifest(dir);
  std::vector<GridCell> out;
  for (int n = 4; n <= n_max; ++n)
    for (int q = 2; q <= q_max; ++q) {
      Existence e = Existence::unknown;
      if (manifest)
        if (auto it = manifest->grid.find({n, q}); it != manifest->grid.end()) e = it->second;
      out.push_back({n, q, e});
    }
  return out;
}

inline Existence grid_lookup(const std::vector<GridCell>& grid, int n, int q) {
  for (const auto& c : grid)
    if (c.n == n && c.q == q) return c.existence;
  return Existence::unknown;
}

}  // namespace ame
