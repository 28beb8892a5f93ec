#include "capk/fixtures/fixture.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "capk/errors.hpp"

namespace capk {

namespace {

struct Token {
  std::string text;
  std::size_t col;  // 1-based
};

class Parser {
 public:
  Parser(const std::string& text, std::string source) : text_(text), src_(std::move(source)) {}
  FixtureFile run();

 private:
  [[noreturn]] void error(std::size_t line, std::size_t col, const std::string& msg) const {
    fail(ErrorKind::ParseError, src_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  std::vector<Token> tokens(const Token& v) const {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < v.text.size()) {
      while (i < v.text.size() && std::isspace(static_cast<unsigned char>(v.text[i]))) ++i;
      std::size_t s = i;
      while (i < v.text.size() && !std::isspace(static_cast<unsigned char>(v.text[i]))) ++i;
      if (i > s) out.push_back({v.text.substr(s, i - s), v.col + s});
    }
    return out;
  }

  // Splits at every occurrence of sep, keeping columns.
  std::vector<Token> split(const Token& v, char sep) const {
    std::vector<Token> out;
    std::size_t s = 0;
    for (std::size_t i = 0; i <= v.text.size(); ++i)
      if (i == v.text.size() || v.text[i] == sep) {
        out.push_back({v.text.substr(s, i - s), v.col + s});
        s = i + 1;
      }
    return out;
  }

  Int integer(const Token& t) const {
    static const std::regex re("[+-]?[0-9]+");
    if (!std::regex_match(t.text, re)) error(line_, t.col, "expected an integer, found '" + t.text + "'");
    return Int(t.text[0] == '+' ? t.text.substr(1) : t.text);
  }

  Rat rational(const Token& t) const {
    static const std::regex re("[+-]?[0-9]+(/[0-9]+)?");
    if (!std::regex_match(t.text, re)) error(line_, t.col, "expected a rational number, found '" + t.text + "'");
    std::string s = t.text[0] == '+' ? t.text.substr(1) : t.text;
    auto slash = s.find('/');
    if (slash != std::string::npos && Int(s.substr(slash + 1)) == 0) error(line_, t.col, "zero denominator");
    Rat q(s);
    q.canonicalize();
    return q;
  }

  long small(const Token& t, long lo, long hi) const {
    Int v = integer(t);
    if (v < lo || v > hi) error(line_, t.col, "value " + t.text + " out of range");
    return v.get_si();
  }

  IntVec int_list(const Token& v) const {
    IntVec out;
    for (auto& t : tokens(v)) out.push_back(integer(t));
    return out;
  }

  RatVec rat_list(const Token& v, bool nonempty = true) const {
    RatVec out;
    for (auto& t : tokens(v)) out.push_back(rational(t));
    if (nonempty && out.empty()) error(line_, v.col, "expected at least one number");
    return out;
  }

  std::pair<Token, Token> pair(const Token& v) const {
    auto parts = split(v, ':');
    if (parts.size() != 2) error(line_, v.col, "expected 'left : right'");
    return {parts[0], parts[1]};
  }

  PrimeEntry prime(const Token& v) const {
    auto [l, r] = pair(v);
    auto ts = tokens(l);
    if (ts.size() != 1) error(line_, l.col, "expected one rational prime before ':'");
    return {integer(ts[0]), rat_list(r)};
  }

  RatMatrix matrix(const Token& v) const {
    std::vector<RatVec> rows;
    for (auto& r : split(v, '|')) {
      rows.push_back(rat_list(r));
      if (rows.back().size() != rows[0].size()) error(line_, r.col, "rows of different lengths");
    }
    return RatMatrix::from_rows(rows, rows[0].size());
  }

  std::vector<std::vector<int>> table(const Token& v) const {
    std::vector<std::vector<int>> rows;
    for (auto& r : split(v, '|')) {
      std::vector<int> row;
      for (auto& t : tokens(r)) row.push_back(static_cast<int>(small(t, 0, 1 << 20)));
      if (row.empty()) error(line_, r.col, "empty table row");
      rows.push_back(row);
    }
    return rows;
  }

  std::string word(const Token& v, const std::set<std::string>& allowed) const {
    auto ts = tokens(v);
    if (ts.size() != 1 || !allowed.count(ts[0].text)) error(line_, v.col, "unexpected value '" + v.text + "'");
    return ts[0].text;
  }

  std::string trimmed(const Token& v) const {
    auto ts = tokens(v);
    if (ts.empty()) return "";
    std::size_t a = ts.front().col - v.col, b = ts.back().col - v.col + ts.back().text.size();
    return v.text.substr(a, b - a);
  }

  const std::string& text_;
  std::string src_;
  std::size_t line_ = 0;
};

FixtureFile Parser::run() {
  FixtureFile f;
  std::string section;
  std::size_t section_line = 0;
  std::set<std::string> seen_sections, seen_keys;
  std::map<std::string, std::size_t> header_lines;
  bool has_version = false;

  using Handler = std::function<void(const std::string& key, const Token& v, std::size_t key_col)>;
  auto field_handler = [&](FieldBlock& b) -> Handler {
    return [&](const std::string& k, const Token& v, std::size_t c) {
      if (k == "label") b.label = trimmed(v);
      else if (k == "polynomial") b.polynomial = int_list(v);
      else if (k == "basis") b.basis = matrix(v);
      else if (k == "discriminant") {
        auto ts = tokens(v);
        if (ts.size() != 1) error(line_, v.col, "expected one integer");
        b.discriminant = integer(ts[0]);
      } else if (k == "signature") {
        auto ts = tokens(v);
        if (ts.size() != 2) error(line_, v.col, "expected 'r1 r2'");
        b.signature = std::make_pair(static_cast<int>(small(ts[0], 0, 1 << 16)),
                                     static_cast<int>(small(ts[1], 0, 1 << 16)));
      } else error(line_, c, "unknown key '" + k + "' in [" + section + "]");
    };
  };
  auto classgroup_handler = [&](ClassGroupBlock& b) -> Handler {
    return [&](const std::string& k, const Token& v, std::size_t c) {
      if (k == "prime") b.primes.push_back(prime(v));
      else if (k == "relation") {
        auto [l, r] = pair(v);
        b.relations.push_back({int_list(l), rat_list(r)});
      } else error(line_, c, "unknown key '" + k + "' in [" + section + "]");
    };
  };
  auto units_handler = [&](UnitsBlock& b) -> Handler {
    return [&](const std::string& k, const Token& v, std::size_t c) {
      if (k == "torsion") {
        auto [l, r] = pair(v);
        b.torsion = rat_list(l);
        auto ts = tokens(r);
        if (ts.size() != 1) error(line_, r.col, "expected the order of the torsion generator");
        b.torsion_order = small(ts[0], 1, 1 << 20);
      } else if (k == "free") b.free.push_back(rat_list(v));
      else error(line_, c, "unknown key '" + k + "' in [" + section + "]");
    };
  };
  std::map<std::string, Handler> handlers;
  handlers[""] = [&](const std::string& k, const Token& v, std::size_t c) {
    auto one = [&] {
      auto ts = tokens(v);
      if (ts.size() != 1) error(line_, v.col, "expected one value");
      return ts[0];
    };
    if (k == "format_version") {
      f.format_version = static_cast<int>(small(one(), 0, 1 << 16));
      if (f.format_version != kFixtureFormatVersion)
        error(line_, v.col, "unsupported format_version " + std::to_string(f.format_version));
      has_version = true;
    } else if (k == "name") f.name = trimmed(v);
    else if (k == "seed") {
      Token t = one();
      Int s = integer(t);
      if (s < 0 || !s.fits_ulong_p()) error(line_, t.col, "seed must fit in 64 bits");
      f.seed = s.get_ui();
    } else error(line_, c, "unknown top-level key '" + k + "'");
  };
  handlers["field F"] = field_handler(f.F);
  handlers["field K"] = field_handler(f.K);
  handlers["embedding"] = [&](const std::string& k, const Token& v, std::size_t c) {
    if (k != "image") error(line_, c, "unknown key '" + k + "' in [embedding]");
    f.embedding = rat_list(v);
  };
  handlers["galois"] = [&](const std::string& k, const Token& v, std::size_t c) {
    if (k == "order") {
      auto ts = tokens(v);
      if (ts.size() != 1) error(line_, v.col, "expected one integer");
      f.galois_order = static_cast<int>(small(ts[0], 1, 1 << 20));
    } else if (k == "table") f.table = table(v);
    else if (k == "automorphism") f.automorphisms.push_back(rat_list(v));
    else error(line_, c, "unknown key '" + k + "' in [galois]");
  };
  handlers["sigma"] = [&](const std::string& k, const Token& v, std::size_t c) {
    if (k == "prime") f.sigma.primes.push_back(prime(v));
    else if (k == "archimedean") f.sigma.archimedean = word(v, {"all", "none"});
    else if (k == "infinite_ramification") f.sigma.infinite_ramification = word(v, {"none", "real"});
    else error(line_, c, "unknown key '" + k + "' in [sigma]");
  };
  handlers["classgroup F"] = classgroup_handler(f.classgroup_F);
  handlers["classgroup K"] = classgroup_handler(f.classgroup_K);
  handlers["units F"] = units_handler(f.units_F);
  handlers["units K"] = units_handler(f.units_K);
  handlers["expectations"] = [&](const std::string& k, const Token& v, std::size_t c) {
    auto one = [&] {
      auto ts = tokens(v);
      if (ts.size() != 1) error(line_, v.col, "expected one integer");
      return integer(ts[0]);
    };
    auto& e = f.expectations;
    if (k == "term_orders") {
      e.term_orders = int_list(v);
      if (e.term_orders->size() != 5) error(line_, v.col, "term_orders needs five entries");
    } else if (k == "kernel_invariants") e.kernel_invariants = int_list(v);
    else if (k == "class_number_F") e.class_number_F = one();
    else if (k == "class_number_K") e.class_number_K = one();
    else if (k == "torsion_order_K") e.torsion_order_K = one().get_si();
    else if (k == "unit_rank_K") e.unit_rank_K = one().get_si();
    else error(line_, c, "unknown key '" + k + "' in [expectations]");
  };
  const std::set<std::string> repeatable{"prime", "relation", "automorphism", "free"};

  std::istringstream in(text_);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::size_t s = raw.find_first_not_of(" \t");
    if (s == std::string::npos || raw[s] == '#') continue;
    if (raw[s] == '[') {
      std::size_t e = raw.find(']', s);
      if (e == std::string::npos) error(line_, s + 1, "unterminated section header");
      if (raw.find_first_not_of(" \t", e + 1) != std::string::npos)
        error(line_, raw.find_first_not_of(" \t", e + 1) + 1, "text after section header");
      std::string name = raw.substr(s + 1, e - s - 1);
      if (name.empty() || !handlers.count(name)) error(line_, s + 2, "unknown section [" + name + "]");
      if (!seen_sections.insert(name).second) error(line_, s + 1, "duplicate section [" + name + "]");
      section = name;
      section_line = line_;
      header_lines[name] = line_;
      seen_keys.clear();
      continue;
    }
    std::size_t eq = raw.find('=');
    if (eq == std::string::npos) error(line_, s + 1, "expected 'key = value'");
    std::size_t ke = raw.find_last_not_of(" \t", eq == 0 ? 0 : eq - 1);
    if (ke == std::string::npos || ke < s || eq == s) error(line_, s + 1, "missing key");
    std::string key = raw.substr(s, ke - s + 1);
    static const std::regex key_re("[A-Za-z_][A-Za-z0-9_]*");
    if (!std::regex_match(key, key_re)) error(line_, s + 1, "malformed key '" + key + "'");
    if (!repeatable.count(key) && !seen_keys.insert(key).second) error(line_, s + 1, "duplicate key '" + key + "'");
    handlers[section](key, Token{raw.substr(eq + 1), eq + 2}, s + 1);
  }
  (void)section_line;
  ++line_;
  if (!has_version) error(1, 1, "missing format_version");
  for (const char* req : {"field F", "field K", "embedding", "galois", "units F", "units K"})
    if (!seen_sections.count(req)) error(line_, 1, std::string("missing section [") + req + "]");
  auto need = [&](bool ok, const std::string& sec, const std::string& what) {
    if (!ok) error(header_lines[sec], 1, "[" + sec + "] is missing '" + what + "'");
  };
  need(!f.F.polynomial.empty(), "field F", "polynomial");
  need(f.F.basis.rows() > 0, "field F", "basis");
  need(!f.K.polynomial.empty(), "field K", "polynomial");
  need(f.K.basis.rows() > 0, "field K", "basis");
  need(!f.embedding.empty(), "embedding", "image");
  need(f.galois_order > 0, "galois", "order");
  need(!f.table.empty(), "galois", "table");
  need(!f.units_F.torsion.empty(), "units F", "torsion");
  need(!f.units_K.torsion.empty(), "units K", "torsion");
  return f;
}

std::string join(const RatVec& v) {
  std::string s;
  for (auto& q : v) s += (s.empty() ? "" : " ") + q.get_str();
  return s;
}

std::string join(const IntVec& v) {
  std::string s;
  for (auto& q : v) s += (s.empty() ? "" : " ") + q.get_str();
  return s;
}

std::string kv(const std::string& k, const std::string& v) { return v.empty() ? k + " =\n" : k + " = " + v + "\n"; }

std::string field_text(const std::string& name, const FieldBlock& b) {
  std::string s = "[field " + name + "]\n";
  s += kv("label", b.label);
  s += kv("polynomial", join(b.polynomial));
  std::string rows;
  for (std::size_t i = 0; i < b.basis.rows(); ++i) rows += (i ? " | " : "") + join(b.basis.row(i));
  s += kv("basis", rows);
  if (b.discriminant) s += kv("discriminant", b.discriminant->get_str());
  if (b.signature) s += kv("signature", std::to_string(b.signature->first) + " " + std::to_string(b.signature->second));
  return s;
}

std::string prime_text(const PrimeEntry& p) { return p.p.get_str() + " : " + join(p.gen); }

// Strips the "Kind: " prefix that Error adds to its message.
std::string bare(const Error& e) {
  std::string w = e.what(), pre = std::string(error_kind_name(e.kind())) + ": ";
  return w.rfind(pre, 0) == 0 ? w.substr(pre.size()) : w;
}

template <class Fn>
auto in_context(const std::string& where, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    fail(e.kind(), where + ": " + bare(e));
  }
}

}  // namespace

FixtureFile parse_fixture(const std::string& text, const std::string& source) { return Parser(text, source).run(); }

FixtureFile load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fixture(ss.str(), path);
}

std::string serialize_fixture(const FixtureFile& f) {
  std::string s;
  s += kv("format_version", std::to_string(f.format_version));
  s += kv("name", f.name);
  s += kv("seed", std::to_string(f.seed));
  s += "\n" + field_text("F", f.F) + "\n" + field_text("K", f.K);
  s += "\n[embedding]\n" + kv("image", join(f.embedding));
  s += "\n[galois]\n" + kv("order", std::to_string(f.galois_order));
  std::string rows;
  for (std::size_t i = 0; i < f.table.size(); ++i) {
    if (i) rows += " | ";
    for (std::size_t j = 0; j < f.table[i].size(); ++j) rows += (j ? " " : "") + std::to_string(f.table[i][j]);
  }
  s += kv("table", rows);
  for (auto& a : f.automorphisms) s += kv("automorphism", join(a));
  s += "\n[sigma]\n";
  for (auto& p : f.sigma.primes) s += kv("prime", prime_text(p));
  s += kv("archimedean", f.sigma.archimedean) + kv("infinite_ramification", f.sigma.infinite_ramification);
  auto cg = [&](const std::string& name, const ClassGroupBlock& b) {
    s += "\n[classgroup " + name + "]\n";
    for (auto& p : b.primes) s += kv("prime", prime_text(p));
    for (auto& r : b.relations) s += kv("relation", join(r.exponents) + " : " + join(r.witness));
  };
  cg("F", f.classgroup_F);
  cg("K", f.classgroup_K);
  auto un = [&](const std::string& name, const UnitsBlock& b) {
    s += "\n[units " + name + "]\n" + kv("torsion", join(b.torsion) + " : " + std::to_string(b.torsion_order));
    for (auto& u : b.free) s += kv("free", join(u));
  };
  un("F", f.units_F);
  un("K", f.units_K);
  const Expectations& e = f.expectations;
  s += "\n[expectations]\n";
  if (e.term_orders) s += kv("term_orders", join(*e.term_orders));
  if (e.kernel_invariants) s += kv("kernel_invariants", join(*e.kernel_invariants));
  if (e.class_number_F) s += kv("class_number_F", e.class_number_F->get_str());
  if (e.class_number_K) s += kv("class_number_K", e.class_number_K->get_str());
  if (e.torsion_order_K) s += kv("torsion_order_K", std::to_string(*e.torsion_order_K));
  if (e.unit_rank_K) s += kv("unit_rank_K", std::to_string(*e.unit_rank_K));
  return s;
}

FieldElement element_from(const RatVec& coords) {
  Int den = 1;
  for (auto& q : coords) den = lcm(den, q.get_den());
  IntVec num;
  for (auto& q : coords) num.push_back(q.get_num() * (den / q.get_den()));
  return FieldElement(num, den);
}

CoveringInput covering_input(const FixtureFile& f) {
  CoveringInput in;
  auto field = [&](const std::string& name, const FieldBlock& b) {
    return in_context("field " + name, [&] {
      return std::make_shared<const NumberField>(b.label.empty() ? name : b.label, b.polynomial, b.basis,
                                                 b.discriminant, b.signature);
    });
  };
  in.F.field = field("F", f.F);
  in.K.field = field("K", f.K);
  auto check_len = [](const NumberField& K, const RatVec& v, const std::string& what) {
    if (v.size() != static_cast<std::size_t>(K.degree()))
      fail(ErrorKind::ValidationError, what + " has " + std::to_string(v.size()) + " coordinates, expected " +
                                           std::to_string(K.degree()));
    return element_from(v);
  };
  auto primes = [&](const NumberField& K, const std::vector<PrimeEntry>& ps, const std::string& where) {
    std::vector<PrimeIdeal> out;
    for (std::size_t i = 0; i < ps.size(); ++i)
      out.push_back(in_context(where + " prime " + std::to_string(i + 1), [&] {
        return make_prime(K, ps[i].p, check_len(K, ps[i].gen, "generator"));
      }));
    return out;
  };
  auto fill = [&](FieldInput& fi, const ClassGroupBlock& cg, const UnitsBlock& u, const std::string& name) {
    const NumberField& K = *fi.field;
    fi.factor_base = primes(K, cg.primes, "classgroup " + name);
    fi.relations = IntMatrix(0, fi.factor_base.size());
    for (auto& r : cg.relations) {
      if (r.exponents.size() != fi.factor_base.size())
        fail(ErrorKind::ValidationError, "classgroup " + name + ": relation " + join(r.exponents) + " has " +
                                             std::to_string(r.exponents.size()) + " exponents for " +
                                             std::to_string(fi.factor_base.size()) + " primes");
      fi.relations.append_row(r.exponents);
      fi.witnesses.push_back(check_len(K, r.witness, "classgroup " + name + " witness"));
    }
    fi.torsion = check_len(K, u.torsion, "units " + name + " torsion");
    fi.torsion_order = u.torsion_order;
    for (auto& g : u.free) fi.free_units.push_back(check_len(K, g, "units " + name + " free unit"));
  };
  fill(in.F, f.classgroup_F, f.units_F, "F");
  fill(in.K, f.classgroup_K, f.units_K, "K");
  in.embedding_image = check_len(*in.K.field, f.embedding, "embedding image");
  if (f.table.size() != static_cast<std::size_t>(f.galois_order))
    fail(ErrorKind::ValidationError, "galois table has " + std::to_string(f.table.size()) + " rows but order is " +
                                         std::to_string(f.galois_order));
  in.table = f.table;
  for (auto& a : f.automorphisms) in.automorphisms.push_back(check_len(*in.K.field, a, "automorphism"));
  in.sigma_F = primes(*in.F.field, f.sigma.primes, "sigma");
  in.archimedean_all = f.sigma.archimedean == "all";
  in.infinite_ramification = f.sigma.infinite_ramification;
  return in;
}

LoadedFixture parse_and_validate(const std::string& path, const CoveringOptions& opt) {
  LoadedFixture lf;
  lf.file = load_fixture(path);
  lf.datum = validate_covering(covering_input(lf.file), opt);
  return lf;
}

}  // namespace capk
