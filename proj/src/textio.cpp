#include "delasp/textio.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace delasp {

namespace {

// ---------------------------------------------------------------------------
// Token stream shared by the formula, program, and plan readers.

struct Token {
  enum Type { Ident, Sym, End } type = End;
  std::string text;
  SourceSpan span;
};

std::vector<Token> lex(const std::string& text, const std::string& origin) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto span = [&] { return SourceSpan{origin, line, col}; };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      Token t{Token::Ident, "", span()};
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        t.text += text[i++];
        ++col;
      }
      out.push_back(std::move(t));
      continue;
    }
    Token t{Token::Sym, std::string(1, c), span()};
    ++i;
    ++col;
    if (c == '-' && i < text.size() && text[i] == '>') {
      t.text = "->";
      ++i;
      ++col;
    } else if (c == ':' && i < text.size() && text[i] == '-') {
      t.text = ":-";
      ++i;
      ++col;
    }
    static const std::string kSingles = "()[]<>{}~&|,.;:'-";
    if (t.text.size() == 1 && kSingles.find(c) == std::string::npos) {
      throw ParseError(t.span, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  out.push_back({Token::End, "", span()});
  return out;
}

bool reserved_word(const std::string& s) {
  static const std::set<std::string> kWords = {
      "not",  "top",    "bot",      "fluent", "action", "inertial", "world",
      "cell", "model",  "atoms",    "event",  "post",   "edge",     "point",
      "rel",  "if",     "then",     "else",   "skip",   "K",        "L",
      "O",    "U",      "classical", "literal"};
  return kWords.count(s) > 0;
}

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& get() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
  bool at_end() const { return toks_[pos_].type == Token::End; }

  bool try_sym(const std::string& s) {
    if (toks_[pos_].type == Token::Sym && toks_[pos_].text == s) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool try_word(const std::string& s) {
    if (toks_[pos_].type == Token::Ident && toks_[pos_].text == s) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_sym(const std::string& s) {
    if (!try_sym(s)) {
      throw ParseError(peek().span, "expected '" + s + "', found " + describe(peek()));
    }
  }
  void expect_word(const std::string& s) {
    if (!try_word(s)) {
      throw ParseError(peek().span, "expected '" + s + "', found " + describe(peek()));
    }
  }

  static std::string describe(const Token& t) {
    switch (t.type) {
      case Token::End:
        return "end of input";
      default:
        return "'" + t.text + "'";
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Formula parser. Mirrors the precedence of the canonical printer:
// -> (right associative) < | < & < prefixes.

class FormulaParser {
 public:
  FormulaParser(TokenCursor& cur, Layer layer) : cur_(cur), layer_(layer) {}

  Formula parse() { return parse_implies(); }

 private:
  Formula parse_implies() {
    Formula a = parse_or();
    if (cur_.try_sym("->")) {
      return Formula::implies(std::move(a), parse_implies());
    }
    return a;
  }

  Formula parse_or() {
    Formula a = parse_and();
    while (cur_.try_sym("|")) a = Formula::disj(std::move(a), parse_and());
    return a;
  }

  Formula parse_and() {
    Formula a = parse_unary();
    while (cur_.try_sym("&")) a = Formula::conj(std::move(a), parse_unary());
    return a;
  }

  Formula parse_unary() {
    const Token& t = cur_.peek();
    if (cur_.try_word("not")) {
      return Formula::neg_default(parse_unary());
    }
    if (cur_.try_sym("~")) {
      require_query(t, "~");
      return Formula::neg_class(parse_unary());
    }
    if (cur_.try_word("top")) {
      return layer_ == Layer::Rule ? Formula::verum_rule() : Formula::verum_query();
    }
    if (cur_.try_word("bot")) return Formula::falsum();
    if (cur_.try_word("K")) return Formula::know(parse_unary());
    if (cur_.try_word("L")) {
      require_rule(t, "L");
      return Formula::belief(parse_unary());
    }
    if (cur_.try_word("U")) {
      require_rule(t, "U");
      return undecided(parse_op_atom());
    }
    if (cur_.try_word("O")) {
      require_rule(t, "O");
      return observed(parse_op_atom());
    }
    if (cur_.try_sym("[")) {
      require_query(t, "[...]");
      std::string id = parse_object_id();
      cur_.expect_sym("]");
      return Formula::update(std::move(id), parse_unary());
    }
    if (cur_.try_sym("<")) {
      require_query(t, "<...>");
      std::string id = parse_object_id();
      cur_.expect_sym(">");
      return Formula::update_dual(std::move(id), parse_unary());
    }
    if (cur_.try_sym("(")) {
      Formula f = parse_implies();
      cur_.expect_sym(")");
      return f;
    }
    return Formula::lit(parse_literal());
  }

  // U and O take a plain or previous-state atom, optionally parenthesized.
  Atom parse_op_atom() {
    bool paren = cur_.try_sym("(");
    Literal l = parse_literal();
    if (l.strong_neg) {
      throw ParseError(cur_.peek().span, "U/O apply to an atom, not a literal");
    }
    if (paren) cur_.expect_sym(")");
    return l.atom;
  }

  std::string parse_object_id() {
    const Token& t = cur_.get();
    if (t.type != Token::Ident) {
      throw ParseError(t.span, "expected an object name, found " + TokenCursor::describe(t));
    }
    return t.text;
  }

  Literal parse_literal() {
    Literal l;
    const Token& first = cur_.peek();
    if (cur_.try_sym("-")) l.strong_neg = true;
    if (cur_.try_sym("'")) l.atom.prev = true;
    const Token& t = cur_.get();
    if (t.type != Token::Ident) {
      throw ParseError(first.span, "expected an atom, found " + TokenCursor::describe(t));
    }
    if (reserved_word(t.text)) {
      throw ParseError(t.span, "'" + t.text + "' is a reserved word, not an atom");
    }
    l.atom.name = t.text;
    return l;
  }

  static Formula undecided(const Atom& a) {
    // U p = not p & not -p
    Formula p = Formula::lit(Literal{a, false});
    Formula np = Formula::lit(Literal{a, true});
    return Formula::conj(Formula::neg_default(p), Formula::neg_default(np));
  }

  static Formula observed(const Atom& a) {
    // O p = (p -> L(not not p)) & (-p -> L(not not -p))
    //       & (U p -> L(not not U p))
    Formula p = Formula::lit(Literal{a, false});
    Formula np = Formula::lit(Literal{a, true});
    Formula up = undecided(a);
    auto guard = [](Formula cond, Formula body) {
      return Formula::implies(std::move(cond),
                              Formula::belief(Formula::neg_default(
                                  Formula::neg_default(std::move(body)))));
    };
    return Formula::conj(Formula::conj(guard(p, p), guard(np, np)), guard(up, up));
  }

  void require_rule(const Token& t, const std::string& what) {
    if (layer_ != Layer::Rule) {
      throw ParseError(t.span, what + " belongs to the rule layer");
    }
  }
  void require_query(const Token& t, const std::string& what) {
    if (layer_ != Layer::Query) {
      throw ParseError(t.span, what + " belongs to the query layer");
    }
  }

  TokenCursor& cur_;
  Layer layer_;
};

Formula parse_formula_tokens(TokenCursor& cur, Layer layer) {
  return FormulaParser(cur, layer).parse();
}

// ---------------------------------------------------------------------------
// Line splitting for the line-oriented formats.

struct Line {
  std::string text;
  int number = 0;
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    auto cut = raw.find('%');
    if (cut != std::string::npos) raw.erase(cut);
    auto b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = raw.find_last_not_of(" \t\r");
    out.push_back({raw.substr(b, e - b + 1), n});
  }
  return out;
}

std::vector<std::string> split_fields(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string f;
  while (in >> f) out.push_back(f);
  return out;
}

// First word of the line and the remainder after it.
std::pair<std::string, std::string> split_head(const std::string& s) {
  auto sp = s.find_first_of(" \t");
  if (sp == std::string::npos) return {s, ""};
  auto rest = s.find_first_not_of(" \t", sp);
  return {s.substr(0, sp), rest == std::string::npos ? "" : s.substr(rest)};
}

Atom parse_atom_field(const std::string& s, const SourceSpan& at) {
  Atom a;
  std::size_t i = 0;
  if (i < s.size() && s[i] == '\'') {
    a.prev = true;
    ++i;
  }
  if (i >= s.size()) throw ParseError(at, "bad atom '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    char c = s[j];
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    if (j == i) ok = std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    if (!ok) throw ParseError(at, "bad atom '" + s + "'");
  }
  a.name = s.substr(i);
  if (reserved_word(a.name)) {
    throw ParseError(at, "'" + a.name + "' is a reserved word, not an atom");
  }
  return a;
}

Literal parse_literal_field(const std::string& s, const SourceSpan& at) {
  Literal l;
  std::string rest = s;
  if (!rest.empty() && rest[0] == '-') {
    l.strong_neg = true;
    rest.erase(0, 1);
  }
  l.atom = parse_atom_field(rest, at);
  return l;
}

std::string dirname_of(const std::string& path) {
  auto cut = path.find_last_of('/');
  return cut == std::string::npos ? std::string() : path.substr(0, cut + 1);
}

std::string resolve_relative(const std::string& origin, const std::string& path) {
  if (!path.empty() && path[0] == '/') return path;
  if (origin.empty() || origin[0] == '<') return path;
  return dirname_of(origin) + path;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Formula parse_formula(const std::string& text, Layer layer, const std::string& origin) {
  TokenCursor cur(lex(text, origin));
  Formula f = parse_formula_tokens(cur, layer);
  if (!cur.at_end()) {
    throw ParseError(cur.peek().span,
                     "trailing input after formula: " + TokenCursor::describe(cur.peek()));
  }
  if (layer == Layer::Rule) {
    validate_rule_layer(f);
  } else {
    validate_query_layer(f);
  }
  return f;
}

std::string formula_str(const Formula& f) { return f.key(); }

// ---------------------------------------------------------------------------
// Programs.

Theory parse_program(const std::string& text, const std::string& origin) {
  TokenCursor cur(lex(text, origin));
  Theory t;
  std::set<std::string> fluent_set, action_set, inertial_set;
  auto read_names = [&](const char* what) {
    std::vector<std::string> names;
    while (cur.peek().type == Token::Ident && !reserved_word(cur.peek().text)) {
      names.push_back(cur.get().text);
    }
    if (names.empty()) {
      throw ParseError(cur.peek().span, std::string("expected atom names after '") +
                                            what + "'");
    }
    cur.expect_sym(".");
    return names;
  };
  while (!cur.at_end()) {
    const Token& t0 = cur.peek();
    if (cur.try_word("fluent")) {
      for (auto& n : read_names("fluent")) {
        if (action_set.count(n)) {
          throw ParseError(t0.span, "'" + n + "' is declared as both fluent and action");
        }
        if (fluent_set.insert(n).second) t.fluents.push_back(n);
      }
      continue;
    }
    if (cur.try_word("action")) {
      for (auto& n : read_names("action")) {
        if (fluent_set.count(n)) {
          throw ParseError(t0.span, "'" + n + "' is declared as both fluent and action");
        }
        if (action_set.insert(n).second) t.actions.push_back(n);
      }
      continue;
    }
    if (cur.try_word("inertial")) {
      for (auto& n : read_names("inertial")) {
        if (!fluent_set.count(n)) {
          throw ParseError(t0.span, "inertial atom '" + n + "' is not a declared fluent");
        }
        if (!inertial_set.insert(n).second) continue;
        t.inertial.push_back(n);
        // f <- 'f & not -f   and   -f <- -'f & not f
        Formula cur_pos = Formula::lit(n);
        Formula cur_neg = Formula::lit(n, true);
        Formula prev_pos = Formula::lit(n, false, true);
        Formula prev_neg = Formula::lit(n, true, true);
        t.formulas.push_back(Formula::implies(
            Formula::conj(prev_pos, Formula::neg_default(cur_neg)), cur_pos));
        t.formulas.push_back(Formula::implies(
            Formula::conj(prev_neg, Formula::neg_default(cur_pos)), cur_neg));
      }
      continue;
    }
    if (cur.try_sym("{")) {
      Formula f = parse_formula_tokens(cur, Layer::Rule);
      cur.expect_sym("}");
      cur.expect_sym(".");
      t.formulas.push_back(Formula::disj(f, Formula::neg_default(f)));
      continue;
    }
    if (cur.try_sym(":-")) {
      // constraint: bot <- body
      std::vector<Formula> body{parse_formula_tokens(cur, Layer::Rule)};
      while (cur.try_sym(",")) body.push_back(parse_formula_tokens(cur, Layer::Rule));
      cur.expect_sym(".");
      t.formulas.push_back(Formula::implies(Formula::conj_all(body), Formula::falsum()));
      continue;
    }
    Formula head = parse_formula_tokens(cur, Layer::Rule);
    if (cur.try_sym(":-")) {
      std::vector<Formula> body{parse_formula_tokens(cur, Layer::Rule)};
      while (cur.try_sym(",")) body.push_back(parse_formula_tokens(cur, Layer::Rule));
      cur.expect_sym(".");
      t.formulas.push_back(Formula::implies(Formula::conj_all(body), std::move(head)));
    } else {
      cur.expect_sym(".");
      t.formulas.push_back(std::move(head));
    }
  }
  for (const Formula& f : t.formulas) validate_rule_layer(f);
  return t;
}

Theory load_program(const std::string& path) {
  return parse_program(read_file(path), path);
}

std::string serialize_program(const Theory& t) {
  std::string out;
  auto names = [&out](const char* head, const std::vector<std::string>& ns) {
    if (ns.empty()) return;
    out += head;
    for (const auto& n : ns) {
      out += ' ';
      out += n;
    }
    out += ".\n";
  };
  names("fluent", t.fluents);
  names("action", t.actions);
  // Inertia rules are already part of `formulas`; the inertial declaration is
  // parse-time sugar and is not re-emitted.
  for (const Formula& f : t.formulas) {
    out += f.key();
    out += ".\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Epistemic models.

ParsedModel parse_model(const std::string& text, const std::string& origin) {
  ParsedModel out;
  EpistemicModel& m = out.model;
  bool have_header = false, have_atoms = false;
  std::vector<Atom> atoms;
  std::map<std::string, int> world_ids;
  for (const Line& ln : split_lines(text)) {
    SourceSpan at{origin, ln.number, 1};
    auto [head, rest] = split_head(ln.text);
    if (head == "model") {
      if (have_header) throw ParseError(at, "duplicate model line");
      have_header = true;
      if (rest == "classical") {
        m.flavor = ValFlavor::Classical;
      } else if (rest == "literal") {
        m.flavor = ValFlavor::Literal;
      } else {
        throw ParseError(at, "expected 'model classical' or 'model literal'");
      }
    } else if (head == "atoms") {
      if (have_atoms) throw ParseError(at, "duplicate atoms line");
      have_atoms = true;
      for (const auto& f : split_fields(rest)) atoms.push_back(parse_atom_field(f, at));
      m.sig = make_signature(atoms);
    } else if (head == "world") {
      if (!have_atoms) throw ParseError(at, "world line before atoms line");
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError(at, "world line without ':'");
      std::string id = rest.substr(0, colon);
      while (!id.empty() && (id.back() == ' ' || id.back() == '\t')) id.pop_back();
      if (id.empty()) throw ParseError(at, "world line without an id");
      if (world_ids.count(id)) throw ParseError(at, "duplicate world id '" + id + "'");
      Valuation v;
      for (const auto& f : split_fields(rest.substr(colon + 1))) {
        Literal l = parse_literal_field(f, at);
        if (m.flavor == ValFlavor::Classical && (l.strong_neg || l.atom.prev)) {
          throw ParseError(at, "classical worlds list plain true atoms only");
        }
        int idx = m.sig->index_of(l.atom);
        if (idx < 0) throw ParseError(at, "literal '" + f + "' not in atoms line");
        v.set(idx, l.strong_neg);
      }
      if (m.flavor == ValFlavor::Classical && m.sig->size() > 0) {
        std::uint64_t all = (std::uint64_t{1} << m.sig->size()) - 1;
        v.neg = all & ~v.pos;
      }
      world_ids.emplace(id, static_cast<int>(m.worlds.size()));
      m.worlds.push_back({id, v});
    } else if (head == "cell") {
      std::vector<int> cell;
      for (const auto& f : split_fields(rest)) {
        auto it = world_ids.find(f);
        if (it == world_ids.end()) throw ParseError(at, "unknown world '" + f + "' in cell");
        cell.push_back(it->second);
      }
      if (cell.empty()) throw ParseError(at, "empty cell line");
      m.cells.push_back(std::move(cell));
    } else if (head == "rel") {
      auto arrow = rest.find("->");
      if (arrow == std::string::npos) throw ParseError(at, "rel line without '->'");
      auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t");
        if (b == std::string::npos) return std::string();
        auto e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
      };
      std::string from = trim(rest.substr(0, arrow));
      std::string to = trim(rest.substr(arrow + 2));
      if (from.empty() || to.empty()) throw ParseError(at, "rel line needs two world ids");
      out.rel.emplace_back(std::move(from), std::move(to));
    } else {
      throw ParseError(at, "unknown directive '" + head + "'");
    }
  }
  if (!have_header) throw Error(origin + ": missing model line");
  if (!have_atoms) throw Error(origin + ": missing atoms line");
  if (m.cells.empty() && !m.worlds.empty()) {
    std::vector<int> all(m.worlds.size());
    std::iota(all.begin(), all.end(), 0);
    m.cells.push_back(std::move(all));
  }
  m.canonicalize();
  m.validate();
  return out;
}

EpistemicModel load_model(const std::string& path) {
  return parse_model(read_file(path), path).model;
}

std::string serialize_model(const EpistemicModel& m) {
  EpistemicModel c = m;
  c.canonicalize();
  c.validate();
  std::string out = "model ";
  out += c.flavor == ValFlavor::Classical ? "classical" : "literal";
  out += "\natoms";
  for (const Atom& a : c.sig->atoms()) {
    out += ' ';
    out += a.str();
  }
  out += '\n';
  for (const auto& w : c.worlds) {
    out += "world " + w.id + " :";
    if (c.flavor == ValFlavor::Classical) {
      for (int i = 0; i < c.sig->size(); ++i) {
        if (w.val.has(i, false)) {
          out += ' ';
          out += c.sig->atom(i).str();
        }
      }
    } else {
      for (int i = 0; i < c.sig->size(); ++i) {
        if (!w.val.decides(i)) continue;
        out += ' ';
        out += Literal{c.sig->atom(i), w.val.has(i, true)}.str();
      }
    }
    out += '\n';
  }
  for (const auto& cell : c.cells) {
    out += "cell";
    for (int w : cell) {
      out += ' ';
      out += c.worlds[w].id;
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Event models.

EventModel parse_event_model(const std::string& text, const std::string& origin) {
  EventModel e;
  std::vector<Atom> atoms;
  bool have_atoms = false;
  SigPtr sig;
  std::map<std::string, int> ids;
  std::vector<std::pair<std::string, std::string>> edges;
  auto check_atoms = [&](const Formula& f, const SourceSpan& at) {
    std::vector<Atom> used;
    collect_atoms(f, used);
    for (const Atom& a : used) {
      if (!sig->contains(a)) {
        throw ParseError(at, "atom '" + a.str() + "' not in atoms line");
      }
    }
  };
  for (const Line& ln : split_lines(text)) {
    SourceSpan at{origin, ln.number, 1};
    auto [head, rest] = split_head(ln.text);
    if (head == "atoms") {
      if (have_atoms) throw ParseError(at, "duplicate atoms line");
      have_atoms = true;
      for (const auto& f : split_fields(rest)) {
        Atom a = parse_atom_field(f, at);
        if (a.prev) throw ParseError(at, "event models use current-state atoms only");
        atoms.push_back(a);
      }
      sig = make_signature(atoms);
    } else if (head == "event") {
      if (!have_atoms) throw ParseError(at, "event line before atoms line");
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError(at, "event line without ':'");
      auto fields = split_fields(rest.substr(0, colon));
      if (fields.size() != 1) throw ParseError(at, "event line needs one id");
      if (ids.count(fields[0])) throw ParseError(at, "duplicate event '" + fields[0] + "'");
      Formula pre =
          parse_formula(rest.substr(colon + 1), Layer::Query, origin);
      if (!is_dynamic_free(pre)) {
        throw ParseError(at, "event preconditions cannot nest dynamic operators");
      }
      check_atoms(pre, at);
      ids.emplace(fields[0], static_cast<int>(e.events.size()));
      e.events.push_back({fields[0], std::move(pre), {}});
    } else if (head == "post") {
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError(at, "post line without ':'");
      auto fields = split_fields(rest.substr(0, colon));
      if (fields.size() != 2) throw ParseError(at, "post line needs an event id and an atom");
      auto it = ids.find(fields[0]);
      if (it == ids.end()) throw ParseError(at, "unknown event '" + fields[0] + "'");
      Atom target = parse_atom_field(fields[1], at);
      if (target.prev) throw ParseError(at, "post targets are current-state atoms");
      if (!sig->contains(target)) {
        throw ParseError(at, "post target '" + target.str() + "' not in atoms line");
      }
      Formula f = parse_formula(rest.substr(colon + 1), Layer::Query, origin);
      if (!is_dynamic_free(f)) {
        throw ParseError(at, "event postconditions cannot nest dynamic operators");
      }
      check_atoms(f, at);
      for (const auto& [a, unused] : e.events[it->second].post) {
        if (a == target) {
          throw ParseError(at, "duplicate post for atom '" + target.str() + "'");
        }
      }
      e.events[it->second].post.emplace_back(std::move(target), std::move(f));
    } else if (head == "edge") {
      auto fields = split_fields(rest);
      if (fields.size() != 2) throw ParseError(at, "edge line needs two event ids");
      edges.emplace_back(fields[0], fields[1]);
    } else if (head == "point") {
      auto fields = split_fields(rest);
      if (fields.size() != 1) throw ParseError(at, "point line needs one event id");
      if (e.point) throw ParseError(at, "duplicate point line");
      e.point = fields[0];
    } else {
      throw ParseError(at, "unknown directive '" + head + "'");
    }
  }
  if (!have_atoms) throw Error(origin + ": missing atoms line");
  if (e.events.empty()) throw Error(origin + ": no events");
  std::sort(e.events.begin(), e.events.end(),
            [](const EventModel::Event& a, const EventModel::Event& b) {
              return a.id < b.id;
            });
  for (auto& ev : e.events) {
    std::sort(ev.post.begin(), ev.post.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  e.rel.assign(e.events.size(), 0);
  for (const auto& [from, to] : edges) {
    int i = e.event_index(from);
    int j = e.event_index(to);
    if (i < 0) throw Error(origin + ": unknown event '" + from + "' in edge");
    if (j < 0) throw Error(origin + ": unknown event '" + to + "' in edge");
    e.rel[i] |= std::uint64_t{1} << j;
  }
  e.close_relation();
  e.validate();
  if (e.point && e.event_index(*e.point) < 0) {
    throw Error(origin + ": unknown point event '" + *e.point + "'");
  }
  return e;
}

EventModel load_event_model(const std::string& path) {
  return parse_event_model(read_file(path), path);
}

std::string serialize_event_model(const EventModel& e) {
  std::string out = "atoms";
  std::set<Atom> atoms;
  for (const auto& ev : e.events) {
    std::vector<Atom> used;
    collect_atoms(ev.pre, used);
    for (const auto& [a, f] : ev.post) {
      used.push_back(a);
      collect_atoms(f, used);
    }
    atoms.insert(used.begin(), used.end());
  }
  for (const Atom& a : atoms) {
    out += ' ';
    out += a.str();
  }
  out += '\n';
  for (const auto& ev : e.events) {
    out += "event " + ev.id + " : " + ev.pre.key() + '\n';
    for (const auto& [a, f] : ev.post) {
      out += "post " + ev.id + ' ' + a.str() + " : " + f.key() + '\n';
    }
  }
  for (std::size_t i = 0; i < e.events.size(); ++i) {
    for (std::size_t j = i + 1; j < e.events.size(); ++j) {
      if (e.rel[i] >> j & 1) {
        out += "edge " + e.events[i].id + ' ' + e.events[j].id + '\n';
      }
    }
  }
  if (e.point) out += "point " + *e.point + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Plans.

namespace {

Plan parse_plan_tokens(TokenCursor& cur, const std::string& origin);

Plan parse_plan_unit(TokenCursor& cur, const std::string& origin) {
  if (cur.try_sym("(")) {
    Plan p = parse_plan_tokens(cur, origin);
    cur.expect_sym(")");
    return p;
  }
  if (cur.try_word("skip")) return Plan::skip();
  if (cur.try_word("if")) {
    cur.expect_word("K");
    cur.expect_sym("(");
    Formula cond = parse_formula_tokens(cur, Layer::Query);
    cur.expect_sym(")");
    if (!is_modality_free(cond) || !is_dynamic_free(cond)) {
      throw ParseError(cur.peek().span, "plan conditions must be objective formulas");
    }
    cur.expect_word("then");
    Plan then_branch = parse_plan_unit(cur, origin);
    cur.expect_word("else");
    Plan else_branch = parse_plan_unit(cur, origin);
    return Plan::if_know(std::move(cond), std::move(then_branch), std::move(else_branch));
  }
  const Token& t = cur.get();
  if (t.type != Token::Ident || reserved_word(t.text)) {
    throw ParseError(t.span, "expected an action name, found " + TokenCursor::describe(t));
  }
  return Plan::action(t.text);
}

Plan parse_plan_tokens(TokenCursor& cur, const std::string& origin) {
  std::vector<Plan> parts{parse_plan_unit(cur, origin)};
  while (cur.try_sym(";")) parts.push_back(parse_plan_unit(cur, origin));
  return Plan::seq(std::move(parts));
}

}  // namespace

Plan parse_plan(const std::string& text, const std::string& origin) {
  TokenCursor cur(lex(text, origin));
  Plan p = parse_plan_tokens(cur, origin);
  if (!cur.at_end()) {
    throw ParseError(cur.peek().span,
                     "trailing input after plan: " + TokenCursor::describe(cur.peek()));
  }
  return p;
}

Plan load_plan(const std::string& path) { return parse_plan(read_file(path), path); }

// ---------------------------------------------------------------------------
// Planning tasks.

PlanningTask parse_task(const std::string& text, const std::string& origin) {
  PlanningTask task;
  bool have_goal = false, have_theory = false, have_init_file = false;
  for (const Line& ln : split_lines(text)) {
    SourceSpan at{origin, ln.number, 1};
    auto [head, rest] = split_head(ln.text);
    if (head == "fluents") {
      for (const auto& f : split_fields(rest)) {
        Atom a = parse_atom_field(f, at);
        if (a.prev) throw ParseError(at, "fluents are current-state atoms");
        task.fluents.push_back(a.name);
      }
    } else if (head == "actions") {
      for (const auto& f : split_fields(rest)) {
        Atom a = parse_atom_field(f, at);
        if (a.prev) throw ParseError(at, "actions are current-state atoms");
        task.actions.push_back(a.name);
      }
    } else if (head == "theory:") {
      if (have_theory) throw ParseError(at, "duplicate theory line");
      have_theory = true;
      task.transition = load_program(resolve_relative(origin, rest));
    } else if (head == "init:") {
      task.init.formulas.push_back(parse_formula(rest, Layer::Rule, origin));
    } else if (head == "init-file:") {
      if (have_init_file) throw ParseError(at, "duplicate init-file line");
      have_init_file = true;
      Theory t = load_program(resolve_relative(origin, rest));
      for (auto& f : t.formulas) task.init.formulas.push_back(std::move(f));
    } else if (head == "goal:") {
      if (have_goal) throw ParseError(at, "duplicate goal line");
      have_goal = true;
      task.goal = parse_formula(rest, Layer::Query, origin);
    } else {
      throw ParseError(at, "unknown directive '" + head + "'");
    }
  }
  if (!have_theory) throw Error(origin + ": missing theory line");
  if (!have_goal) throw Error(origin + ": missing goal line");
  if (task.init.formulas.empty()) throw Error(origin + ": missing init line");
  // Merge declarations from the transition theory.
  for (const auto& n : task.transition.fluents) {
    if (std::find(task.fluents.begin(), task.fluents.end(), n) == task.fluents.end()) {
      task.fluents.push_back(n);
    }
  }
  for (const auto& n : task.transition.actions) {
    if (std::find(task.actions.begin(), task.actions.end(), n) == task.actions.end()) {
      task.actions.push_back(n);
    }
  }
  std::sort(task.fluents.begin(), task.fluents.end());
  task.fluents.erase(std::unique(task.fluents.begin(), task.fluents.end()),
                     task.fluents.end());
  std::sort(task.actions.begin(), task.actions.end());
  task.actions.erase(std::unique(task.actions.begin(), task.actions.end()),
                     task.actions.end());
  task.validate();
  return task;
}

PlanningTask load_task(const std::string& path) {
  return parse_task(read_file(path), path);
}

// ---------------------------------------------------------------------------
// DOT export.

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const EpistemicModel& m) {
  EpistemicModel c = m;
  c.canonicalize();
  std::string out = "graph epistemic_model {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const auto& w : c.worlds) {
    std::string label = w.id + " : ";
    if (c.flavor == ValFlavor::Classical) {
      bool first = true;
      for (int i = 0; i < c.sig->size(); ++i) {
        if (!w.val.has(i, false)) continue;
        if (!first) label += ' ';
        first = false;
        label += c.sig->atom(i).str();
      }
    } else {
      label += w.val.str(*c.sig);
    }
    out += "  \"" + dot_escape(w.id) + "\" [label=\"" + dot_escape(label) + "\"];\n";
  }
  for (const auto& cell : c.cells) {
    for (std::size_t i = 0; i < cell.size(); ++i) {
      for (std::size_t j = i + 1; j < cell.size(); ++j) {
        out += "  \"" + dot_escape(c.worlds[cell[i]].id) + "\" -- \"" +
               dot_escape(c.worlds[cell[j]].id) + "\";\n";
      }
    }
  }
  out += "}\n";
  return out;
}

std::string export_dot(const HTModel& m) {
  std::string out = "digraph ht_model {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const auto& w : m.worlds) {
    std::string label =
        w.id + " : h={" + w.vh.str(*m.sig) + "} t={" + w.vt.str(*m.sig) + "}";
    out += "  \"" + dot_escape(w.id) + "\" [label=\"" + dot_escape(label) + "\"];\n";
  }
  for (std::size_t i = 0; i < m.worlds.size(); ++i) {
    for (std::size_t j = 0; j < m.worlds.size(); ++j) {
      if (m.rel[i] >> j & 1) {
        out += "  \"" + dot_escape(m.worlds[i].id) + "\" -> \"" +
               dot_escape(m.worlds[j].id) + "\";\n";
      }
    }
  }
  out += "}\n";
  return out;
}

}  // namespace delasp
