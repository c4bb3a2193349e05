#include "dlinterp/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "dlinterp/errors.hpp"

namespace dlinterp {

const char* dialect_name(Dialect d) { return d == Dialect::ALCH ? "alch" : "alcq"; }

Dialect parse_dialect(std::string_view text) {
  std::string s(text);
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (s == "alch") return Dialect::ALCH;
  if (s == "alcq") return Dialect::ALCQ;
  throw DialectError("unknown dialect '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Role hierarchy

RoleOrder::RoleOrder(const std::vector<RoleInclusion>& ris) {
  std::map<Name, std::set<Name>> direct;
  for (const auto& ri : ris) {
    roles_.insert(ri.sub);
    roles_.insert(ri.super);
    direct[ri.sub].insert(ri.super);
  }
  // DFS from every role; the hierarchy is tiny.
  for (Name r : roles_) {
    std::set<Name>& up = up_[r];
    std::vector<Name> stack{r};
    while (!stack.empty()) {
      Name cur = stack.back();
      stack.pop_back();
      if (!up.insert(cur).second) continue;
      auto it = direct.find(cur);
      if (it == direct.end()) continue;
      for (Name nx : it->second) stack.push_back(nx);
    }
  }
}

bool RoleOrder::subsumes(Name sub, Name super) const {
  if (sub == super) return true;
  auto it = up_.find(sub);
  return it != up_.end() && it->second.count(super) != 0;
}

std::vector<Name> RoleOrder::supers(Name sub) const {
  auto it = up_.find(sub);
  if (it == up_.end()) return {sub};
  return {it->second.begin(), it->second.end()};
}

Ontology::Ontology(Dialect dialect, std::vector<Inclusion> cis, std::vector<RoleInclusion> ris)
    : dialect_(dialect), cis_(std::move(cis)), ris_(std::move(ris)), order_(ris_) {
  if (dialect_ == Dialect::ALCQ && !ris_.empty())
    throw DialectError("role inclusion in ALCQ mode");
  if (dialect_ == Dialect::ALCH) {
    for (const auto& ci : cis_)
      if (!is_alc(ci.lhs) || !is_alc(ci.rhs))
        throw DialectError("counting restriction in ALCH ontology");
  }
}

bool Ontology::role_subsumes(Name r, Name s) const {
  if (dialect_ != Dialect::ALCH) throw DialectError("role_subsumes: unsupported in ALCQ mode");
  return order_.subsumes(r, s);
}

NameSets Ontology::names() const {
  NameSets out;
  for (const auto& ci : cis_) {
    collect_names(ci.lhs, out);
    collect_names(ci.rhs, out);
  }
  for (const auto& ri : ris_) {
    out.roles.push_back(ri.sub);
    out.roles.push_back(ri.super);
  }
  std::sort(out.roles.begin(), out.roles.end());
  out.roles.erase(std::unique(out.roles.begin(), out.roles.end()), out.roles.end());
  return out;
}

bool within_signature(Concept c, const Signature& sigma) {
  NameSets ns = names_of(c);
  for (Name a : ns.atoms)
    if (!sigma.contains(a)) return false;
  for (Name r : ns.roles)
    if (!sigma.contains(r)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lexer

bool is_name(std::string_view w) {
  if (w.empty() || !std::isalpha(static_cast<unsigned char>(w[0]))) return false;
  return std::all_of(w.begin(), w.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
}

bool is_nat(std::string_view w) {
  return !w.empty() &&
         std::all_of(w.begin(), w.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

void SexpLexer::skip_space() {
  while (pos_ < src_.size()) {
    char ch = src_[pos_];
    if (ch == ';') {  // line comment
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++pos_;
    } else {
      break;
    }
  }
}

Token SexpLexer::peek() {
  std::size_t save = pos_;
  Token t = next();
  pos_ = save;
  return t;
}

Token SexpLexer::next() {
  skip_space();
  if (pos_ >= src_.size()) return {Token::End, {}, pos_};
  std::size_t start = pos_;
  char ch = src_[pos_];
  if (ch == '(') {
    ++pos_;
    return {Token::LParen, src_.substr(start, 1), start};
  }
  if (ch == ')') {
    ++pos_;
    return {Token::RParen, src_.substr(start, 1), start};
  }
  while (pos_ < src_.size()) {
    char c = src_[pos_];
    if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
    ++pos_;
  }
  return {Token::Word, src_.substr(start, pos_ - start), start};
}

Token SexpLexer::expect_word(const char* what) {
  Token t = next();
  if (t.kind != Token::Word) throw ParseError(std::string("expected ") + what, t.offset);
  return t;
}

void SexpLexer::expect(Token::Kind kind, const char* what) {
  Token t = next();
  if (t.kind != kind) throw ParseError(std::string("expected ") + what, t.offset);
}

// ---------------------------------------------------------------------------
// Concept parser

namespace {

std::uint32_t parse_count(const Token& t) {
  if (!is_nat(t.text)) throw ParseError("expected natural number", t.offset);
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size())
    throw ParseError("number out of range", t.offset);
  return v;
}

Name parse_role(SexpLexer& lx) {
  Token t = lx.expect_word("role name");
  if (!is_name(t.text)) throw ParseError("invalid role name '" + std::string(t.text) + "'", t.offset);
  return intern_name(t.text);
}

// `leaf` resolves bare words; the tree grammar maps them to atoms and the DAG
// grammar to earlier definitions.
template <typename Leaf>
Concept parse_expr(SexpLexer& lx, Leaf&& leaf, int depth = 0) {
  if (depth > 100000) throw ParseError("nesting too deep", lx.offset());
  Token t = lx.next();
  if (t.kind == Token::Word) return leaf(t);
  if (t.kind != Token::LParen) throw ParseError("expected concept", t.offset);
  Token head = lx.expect_word("operator");
  std::string_view op = head.text;
  auto sub = [&] { return parse_expr(lx, leaf, depth + 1); };
  auto many = [&](std::size_t min) {
    std::vector<Concept> parts;
    while (lx.peek().kind != Token::RParen) {
      if (lx.peek().kind == Token::End) throw ParseError("unterminated list", lx.offset());
      parts.push_back(sub());
    }
    if (parts.size() < min)
      throw ParseError("arity error: '" + std::string(op) + "' needs at least " +
                           std::to_string(min) + " operands",
                       head.offset);
    return parts;
  };
  Concept out;
  if (op == "not") {
    out = neg(sub());
  } else if (op == "and") {
    out = conj(many(2));
  } else if (op == "or") {
    out = disj(many(2));
  } else if (op == "some" || op == "all") {
    Name r = parse_role(lx);
    Concept c = sub();
    out = op == "some" ? some(r, c) : all(r, c);
  } else if (op == "atleast" || op == "atmost") {
    std::uint32_t n = parse_count(lx.expect_word("number"));
    Name r = parse_role(lx);
    Concept c = sub();
    if (op == "atmost" && n == std::numeric_limits<std::uint32_t>::max())
      throw ParseError("number out of range", head.offset);
    out = op == "atleast" ? at_least(n, r, c) : at_most(n, r, c);
  } else {
    throw ParseError("unknown operator '" + std::string(op) + "'", head.offset);
  }
  Token close = lx.next();
  if (close.kind != Token::RParen)
    throw ParseError("arity error: too many operands for '" + std::string(op) + "'", close.offset);
  return out;
}

Concept tree_leaf(const Token& t) {
  if (t.text == "top") return top();
  if (t.text == "bot") return bot();
  if (!is_name(t.text)) throw ParseError("invalid name '" + std::string(t.text) + "'", t.offset);
  return atom(t.text);
}

bool looks_like_dag(std::string_view text) { return text.find(":=") != std::string_view::npos; }

}  // namespace

Concept parse_concept(std::string_view text) {
  SexpLexer lx(text);
  Concept c = parse_expr(lx, tree_leaf);
  Token t = lx.next();
  if (t.kind != Token::End) throw ParseError("trailing input", t.offset);
  return c;
}

Concept parse_concept_dag(std::string_view text) {
  std::unordered_map<std::string, Concept> defs;
  std::size_t pos = 0;
  std::optional<Concept> root;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    std::size_t base = pos;
    pos = eol + 1;
    SexpLexer lx(line);
    Token first = lx.next();
    if (first.kind == Token::End) continue;
    if (root) throw ParseError("input after root line", base + first.offset);
    if (first.kind != Token::Word) throw ParseError("expected definition", base + first.offset);
    if (first.text == "root") {
      Token ref = lx.expect_word("reference");
      auto it = defs.find(std::string(ref.text));
      if (it == defs.end()) throw ParseError("undefined reference", base + ref.offset);
      root = it->second;
      if (lx.next().kind != Token::End) throw ParseError("trailing input", base + lx.offset());
      continue;
    }
    Token assign = lx.expect_word("':='");
    if (assign.text != ":=") throw ParseError("expected ':='", base + assign.offset);
    Concept c;
    try {
      if (lx.peek().kind == Token::Word) {
        c = tree_leaf(lx.next());
      } else {
        c = parse_expr(lx, [&](const Token& t) {
          auto it = defs.find(std::string(t.text));
          if (it == defs.end()) throw ParseError("undefined reference", t.offset);
          return it->second;
        });
      }
      Token rest = lx.next();
      if (rest.kind != Token::End) throw ParseError("trailing input", rest.offset);
    } catch (const ParseError& e) {
      throw ParseError(std::string("in DAG line: ") + e.what(), base + e.offset);
    }
    if (!defs.emplace(std::string(first.text), c).second)
      throw ParseError("duplicate definition", base + first.offset);
  }
  if (!root) throw ParseError("missing root line", text.size());
  return *root;
}

Concept parse_concept_any(std::string_view text) {
  return looks_like_dag(text) ? parse_concept_dag(text) : parse_concept(text);
}

Ontology parse_ontology(std::string_view text, Dialect dialect) {
  SexpLexer lx(text);
  std::vector<Inclusion> cis;
  std::vector<RoleInclusion> ris;
  while (lx.peek().kind != Token::End) {
    lx.expect(Token::LParen, "'('");
    Token head = lx.expect_word("axiom keyword");
    if (head.text == "implies") {
      Concept l = parse_expr(lx, tree_leaf);
      Concept r = parse_expr(lx, tree_leaf);
      cis.push_back({l, r});
    } else if (head.text == "role-implies") {
      Name a = parse_role(lx);
      Name b = parse_role(lx);
      if (dialect == Dialect::ALCQ) throw DialectError("role inclusion in ALCQ mode");
      ris.push_back({a, b});
    } else {
      throw ParseError("unknown axiom '" + std::string(head.text) + "'", head.offset);
    }
    Token close = lx.next();
    if (close.kind != Token::RParen) throw ParseError("arity error in axiom", close.offset);
  }
  return Ontology(dialect, std::move(cis), std::move(ris));
}

Signature parse_signature(std::string_view text) {
  SexpLexer lx(text);
  Signature s;
  for (Token t = lx.next(); t.kind != Token::End; t = lx.next()) {
    if (t.kind != Token::Word || !is_name(t.text))
      throw ParseError("expected name in signature", t.offset);
    s.insert(intern_name(t.text));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

void print_tree(Concept c, std::string& out) {
  switch (c.kind()) {
    case Kind::Top:
      out += "top";
      return;
    case Kind::Atom:
      out += name_str(c.name());
      return;
    case Kind::And:
      out += "(and";
      for (Concept k : c.children()) {
        out += ' ';
        print_tree(k, out);
      }
      out += ')';
      return;
    case Kind::AtLeast:
      if (c.count() == 1) {
        out += "(some " + name_str(c.name()) + ' ';
      } else {
        out += "(atleast " + std::to_string(c.count()) + ' ' + name_str(c.name()) + ' ';
      }
      print_tree(c.child(), out);
      out += ')';
      return;
    case Kind::Not:
      break;
  }
  Concept x = c.child();
  switch (x.kind()) {
    case Kind::Top:
      out += "bot";
      return;
    case Kind::And:
      out += "(or";
      for (Concept k : x.children()) {
        out += ' ';
        print_tree(neg(k), out);
      }
      out += ')';
      return;
    case Kind::AtLeast:
      if (x.count() == 1) {
        out += "(all " + name_str(x.name()) + ' ';
        print_tree(neg(x.child()), out);
      } else {
        out += "(atmost " + std::to_string(x.count() - 1) + ' ' + name_str(x.name()) + ' ';
        print_tree(x.child(), out);
      }
      out += ')';
      return;
    default:
      out += "(not ";
      print_tree(x, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print_concept(Concept c, PrintMode mode) {
  std::string out;
  if (mode == PrintMode::Tree) {
    print_tree(c, out);
    return out;
  }
  std::unordered_map<std::uint32_t, std::size_t> num;
  auto ref = [&](Concept k) { return "n" + std::to_string(num.at(k.id())); };
  for (Concept s : subterms(c)) {
    std::size_t k = num.size();
    num[s.id()] = k;
    out += "n" + std::to_string(k) + " := ";
    switch (s.kind()) {
      case Kind::Top:
        out += "top";
        break;
      case Kind::Atom:
        out += name_str(s.name());
        break;
      case Kind::Not:
        out += "(not " + ref(s.child()) + ")";
        break;
      case Kind::And:
        out += "(and";
        for (Concept ch : s.children()) out += " " + ref(ch);
        out += ")";
        break;
      case Kind::AtLeast:
        if (s.count() == 1)
          out += "(some " + name_str(s.name()) + " " + ref(s.child()) + ")";
        else
          out += "(atleast " + std::to_string(s.count()) + " " + name_str(s.name()) + " " +
                 ref(s.child()) + ")";
        break;
    }
    out += '\n';
  }
  out += "root " + ref(c) + "\n";
  return out;
}

std::string print_ontology(const Ontology& o) {
  std::string out;
  for (const auto& ci : o.cis())
    out += "(implies " + print_concept(ci.lhs) + " " + print_concept(ci.rhs) + ")\n";
  for (const auto& ri : o.ris())
    out += "(role-implies " + name_str(ri.sub) + " " + name_str(ri.super) + ")\n";
  return out;
}

std::string print_signature(const Signature& s) {
  std::vector<std::string> names;
  for (Name n : s.names()) names.push_back(name_str(n));
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ' ';
    out += n;
  }
  return out;
}

}  // namespace dlinterp
