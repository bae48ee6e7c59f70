#pragma once

// Code parameters, generator tables and the `stabtab v1` text format.
//
//   # stabtab v1
//   # free-form note lines
//   code n=<n> q=<q> [k=<k>] [d=<d>]
//   modulus: <c_m>,...,<c_0>          (required iff q is a proper prime power)
//   g1: <tok> ... <tok>
//
// Emission is canonical: header, notes, code line (k always written), modulus, then g1..gR.

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ame/errors.hpp"
#include "ame/field.hpp"
#include "ame/pauli.hpp"

namespace ame {

enum class SingletonClass { qmds, suboptimal_qmds, below_bound };

inline const char* to_string(SingletonClass c) {
  switch (c) {
    case SingletonClass::qmds: return "QMDS";
    case SingletonClass::suboptimal_qmds: return "suboptimal QMDS";
    case SingletonClass::below_bound: return "below bound";
  }
  return "?";
}

struct CodeParams {
  int n = 0;
  int k = 0;
  int d = 0;
  int q = 0;

  std::string label() const {
    return "[[" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(d) + "]]_" + std::to_string(q);
  }
  bool satisfies_singleton() const noexcept { return n - k >= 2 * (d - 1); }
  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

/// Throws InvariantError if the parameters break n - k >= 2(d - 1).
inline SingletonClass classify_singleton(const CodeParams& c) {
  if (c.n < 1 || c.k < 0 || c.d < 1 || (c.k >= c.n && c.k != 0))
    throw DomainError("invalid code parameters " + c.label());
  if (!c.satisfies_singleton())
    throw InvariantError(c.label() + " violates the quantum Singleton bound n-k >= 2(d-1)");
  const int gap = c.n - c.k;
  if (gap == 2 * (c.d - 1)) return SingletonClass::qmds;
  if (gap % 2 == 1 && gap == 2 * (c.d - 1) + 1) return SingletonClass::suboptimal_qmds;
  return SingletonClass::below_bound;
}

struct GeneratorTable {
  Field field;
  int n = 0;
  int k = 0;
  std::optional<int> d;
  std::vector<PauliString> gens;
  std::vector<std::string> notes;

  int q() const { return field->q(); }
  std::size_t expected_generator_count() const { return static_cast<std::size_t>(field->m()) * (n - k); }

  std::optional<CodeParams> claimed() const {
    if (!d) return std::nullopt;
    return CodeParams{n, k, *d, q()};
  }
  std::string label() const {
    return "[[" + std::to_string(n) + "," + std::to_string(k) + "," + (d ? std::to_string(*d) : std::string("?")) +
           "]]_" + std::to_string(q());
  }
};

/// (p, m) with p^m = q, or nullopt if q is not a prime power.
inline std::optional<std::pair<int, int>> prime_power(int q) {
  if (q < 2) return std::nullopt;
  int p = 2;
  while (q % p != 0) ++p;
  int m = 0;
  int r = q;
  while (r % p == 0) {
    r /= p;
    ++m;
  }
  if (r != 1) return std::nullopt;
  return std::pair{p, m};
}

namespace detail {

inline std::string_view trim_view(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

}  // namespace detail

inline GeneratorTable parse_stabtab(std::string_view text, const std::string& source = "<input>") {
  GeneratorTable t;
  std::vector<std::pair<int, std::string>> lines;
  {
    std::size_t pos = 0;
    int no = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      const auto end = nl == std::string_view::npos ? text.size() : nl;
      ++no;
      lines.emplace_back(no, std::string(text.substr(pos, end - pos)));
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
  }
  if (lines.empty() || detail::trim_view(lines.front().second) != "# stabtab v1")
    throw ParseError(source, 1, "missing '# stabtab v1' header");

  bool have_code = false;
  int code_line = 0;
  int q = 0;
  std::optional<std::vector<int>> modulus;
  int modulus_line = 0;
  std::vector<std::pair<int, std::string>> gen_lines;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const int no = lines[li].first;
    std::string_view raw = lines[li].second;
    std::string_view line = detail::trim_view(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view note = line.substr(1);
      if (!note.empty() && note.front() == ' ') note.remove_prefix(1);
      t.notes.emplace_back(note);
      continue;
    }
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = detail::trim_view(line.substr(0, hash));

    if (line.starts_with("code")) {
      if (have_code) throw ParseError(source, no, "duplicate code line");
      have_code = true;
      code_line = no;
      bool have_n = false, have_q = false;
      auto words = detail::split_ws(line);
      if (words.front() != "code") throw ParseError(source, no, "expected 'code n=<n> q=<q> ...'");
      for (std::size_t w = 1; w < words.size(); ++w) {
        const auto eq = words[w].find('=');
        if (eq == std::string_view::npos) throw ParseError(source, no, "expected key=value, got '" + std::string(words[w]) + "'");
        const std::string_view key = words[w].substr(0, eq);
        const std::string_view val = words[w].substr(eq + 1);
        const auto v = detail::parse_int(val);
        if (!v) throw ParseError(source, no, "non-integer value for '" + std::string(key) + "'");
        if (key == "n") {
          t.n = *v;
          have_n = true;
        } else if (key == "q") {
          q = *v;
          have_q = true;
        } else if (key == "k") {
          t.k = *v;
        } else if (key == "d") {
          t.d = *v;
        } else {
          throw ParseError(source, no, "unknown key '" + std::string(key) + "'");
        }
      }
      if (!have_n || !have_q) throw ParseError(source, no, "code line needs n= and q=");
      if (t.n < 1) throw ParseError(source, no, "n must be positive");
      if (t.k < 0 || (t.k >= t.n && t.k != 0)) throw ParseError(source, no, "k out of range");
      if (t.d && *t.d < 1) throw ParseError(source, no, "d must be positive");
      if (!prime_power(q)) throw ParseError(source, no, "q=" + std::to_string(q) + " is not a prime power");
      continue;
    }
    if (line.starts_with("modulus:")) {
      if (modulus) throw ParseError(source, no, "duplicate modulus line");
      std::vector<int> coeffs;
      std::string body(detail::trim_view(line.substr(8)));
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto v = detail::parse_int(detail::trim_view(item));
        if (!v) throw ParseError(source, no, "bad modulus coefficient '" + item + "'");
        coeffs.push_back(*v);
      }
      modulus = std::move(coeffs);
      modulus_line = no;
      continue;
    }
    if (line.front() == 'g') {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) throw ParseError(source, no, "generator line needs 'g<i>:'");
      const auto idx = detail::parse_int(line.substr(1, colon - 1));
      if (!idx || *idx != static_cast<int>(gen_lines.size()) + 1)
        throw ParseError(source, no, "expected generator label g" + std::to_string(gen_lines.size() + 1));
      if (!have_code) throw ParseError(source, no, "generator before code line");
      gen_lines.emplace_back(no, std::string(line.substr(colon + 1)));
      continue;
    }
    throw ParseError(source, no, "unrecognized line '" + std::string(line) + "'");
  }
  if (!have_code) throw ParseError(source, static_cast<int>(lines.size()), "missing code line");

  const auto [p, m] = *prime_power(q);
  try {
    if (m > 1) {
      if (!modulus) throw ParseError(source, code_line, "modulus line required for q=" + std::to_string(q));
      if (static_cast<int>(modulus->size()) != m + 1)
        throw ParseError(source, modulus_line, "modulus must have degree " + std::to_string(m));
      t.field = FieldSpec::make(p, *modulus);
    } else {
      if (modulus) throw ParseError(source, modulus_line, "modulus given for prime q=" + std::to_string(q));
      t.field = FieldSpec::make(q);
    }
  } catch (const DomainError& e) {
    throw ParseError(source, modulus_line ? modulus_line : 1, e.what());
  }

  if (gen_lines.size() != t.expected_generator_count())
    throw ParseError(source, gen_lines.empty() ? static_cast<int>(lines.size()) : gen_lines.back().first,
                     "wrong generator count: got " + std::to_string(gen_lines.size()) + ", expected " +
                         std::to_string(t.expected_generator_count()));
  for (const auto& [no, body] : gen_lines) {
    try {
      PauliString g = parse_pauli(t.field, body);
      if (static_cast<int>(g.size()) != t.n)
        throw ParseError(source, no, "expected " + std::to_string(t.n) + " site tokens, got " + std::to_string(g.size()));
      t.gens.push_back(std::move(g));
    } catch (const DomainError& e) {
      throw ParseError(source, no, e.what());
    }
  }
  return t;
}

inline GeneratorTable read_stabtab(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_stabtab(ss.str(), path);
}

inline std::string emit_stabtab(const GeneratorTable& t) {
  std::string out = "# stabtab v1\n";
  for (const auto& note : t.notes) out += note.empty() ? "#\n" : "# " + note + "\n";
  out += "code n=" + std::to_string(t.n) + " q=" + std::to_string(t.q()) + " k=" + std::to_string(t.k);
  if (t.d) out += " d=" + std::to_string(*t.d);
  out += "\n";
  if (!t.field->is_prime_field()) {
    out += "modulus: ";
    for (std::size_t i = 0; i < t.field->modulus().size(); ++i) {
      if (i) out += ",";
      out += std::to_string(t.field->modulus()[i]);
    }
    out += "\n";
  }
  for (std::size_t i = 0; i < t.gens.size(); ++i) out += "g" + std::to_string(i + 1) + ": " + to_string(t.gens[i]) + "\n";
  return out;
}

inline void write_stabtab(const GeneratorTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << emit_stabtab(t);
}

/// Table from token rows, mostly for tests and tooling.
inline GeneratorTable make_table(const Field& field, int k, std::optional<int> d, const std::vector<std::string>& rows) {
  GeneratorTable t;
  t.field = field;
  t.k = k;
  t.d = d;
  for (const auto& r : rows) t.gens.push_back(parse_pauli(field, r));
  t.n = t.gens.empty() ? 0 : static_cast<int>(t.gens.front().size());
  for (const auto& g : t.gens)
    if (static_cast<int>(g.size()) != t.n) throw DomainError("generator rows have different lengths");
  return t;
}

}  // namespace ame
