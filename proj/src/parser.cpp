#include "colprob/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace colprob {

ParseError::ParseError(int l, int c, std::string msg, std::string exp)
    : Error([&] {
        std::string s = std::to_string(l) + ":" + std::to_string(c) + ": " + msg;
        if (!exp.empty()) s += " (expected " + exp + ")";
        return s;
      }()),
      line(l),
      column(c),
      message(std::move(msg)),
      expected(std::move(exp)) {}

namespace {

enum class Tok {
  kIdent, kInt, kAt, kTilde, kAmp, kAmpAmp, kBar, kBarBar, kLParen, kRParen,
  kGiven, kPGiven, kColon, kComma, kEquals, kSlash, kMinus, kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

bool is_keyword(std::string_view s) { return s == "given" || s == "pgiven"; }

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kIdent: return "identifier '" + t.text + "'";
    case Tok::kInt: return "number '" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

std::vector<Token> tokenize(std::string_view src, int first_line = 1) {
  std::vector<Token> out;
  int line = first_line, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word(src.substr(i, j - i));
      Tok kind = word == "given" ? Tok::kGiven : word == "pgiven" ? Tok::kPGiven : Tok::kIdent;
      out.push_back({kind, word, l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        throw ParseError(l, cl + static_cast<int>(j - i), "malformed number");
      out.push_back({Tok::kInt, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    auto two = [&](char next) { return i + 1 < src.size() && src[i + 1] == next; };
    Token t{Tok::kEnd, std::string(1, c), l, cl};
    std::size_t len = 1;
    switch (c) {
      case '@': t.kind = Tok::kAt; break;
      case '~': t.kind = Tok::kTilde; break;
      case '(': t.kind = Tok::kLParen; break;
      case ')': t.kind = Tok::kRParen; break;
      case ':': t.kind = Tok::kColon; break;
      case ',': t.kind = Tok::kComma; break;
      case '=': t.kind = Tok::kEquals; break;
      case '/': t.kind = Tok::kSlash; break;
      case '-': t.kind = Tok::kMinus; break;
      case '&':
        t.kind = two('&') ? Tok::kAmpAmp : Tok::kAmp;
        len = two('&') ? 2 : 1;
        break;
      case '|':
        t.kind = two('|') ? Tok::kBarBar : Tok::kBar;
        len = two('|') ? 2 : 1;
        break;
      default: {
        std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "\\x" + std::to_string(static_cast<unsigned char>(c));
        throw ParseError(l, cl, "unknown character '" + shown + "'");
      }
    }
    t.text = std::string(src.substr(i, len));
    out.push_back(std::move(t));
    advance(len);
  }
  out.push_back({Tok::kEnd, "", line, col});
  return out;
}

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail("unexpected " + describe(peek()), what);
    return next();
  }

  [[noreturn]] void fail(const std::string& msg, const std::string& expected = {}) const {
    throw ParseError(peek().line, peek().column, msg, expected);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// formula := cond
// cond    := disj (("given" | "pgiven") disj)?
// disj    := conj (("|" | "||") conj)*
// conj    := unary (("&" | "&&") unary)*
// unary   := "~" unary | "(" formula ")" | atom
// atom    := OUTCOME "@" IDENT | LOWER_IDENT
class FormulaParser {
 public:
  explicit FormulaParser(TokenStream& ts) : ts_(ts) {}

  Formula formula() {
    Formula lhs = disj();
    if (ts_.at(Tok::kGiven) || ts_.at(Tok::kPGiven)) {
      const bool additive = ts_.next().kind == Tok::kGiven;
      Formula rhs = disj();
      if (ts_.at(Tok::kGiven) || ts_.at(Tok::kPGiven))
        ts_.fail("conditionals do not chain; parenthesize one side");
      return additive ? Formula::given_add(std::move(lhs), std::move(rhs))
                      : Formula::given_par(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

 private:
  Formula disj() {
    Formula f = conj();
    while (ts_.at(Tok::kBar) || ts_.at(Tok::kBarBar)) {
      const bool choice = ts_.next().kind == Tok::kBar;
      Formula rhs = conj();
      f = choice ? Formula::choice_or(std::move(f), std::move(rhs))
                 : Formula::par_or(std::move(f), std::move(rhs));
    }
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (ts_.at(Tok::kAmp) || ts_.at(Tok::kAmpAmp)) {
      const bool choice = ts_.next().kind == Tok::kAmp;
      Formula rhs = unary();
      f = choice ? Formula::choice_and(std::move(f), std::move(rhs))
                 : Formula::par_and(std::move(f), std::move(rhs));
    }
    return f;
  }

  Formula unary() {
    if (++nesting_ > kMaxNesting) ts_.fail("formula nested too deeply");
    Formula f = [&] {
      if (ts_.accept(Tok::kTilde)) return Formula::negation(unary());
      if (ts_.accept(Tok::kLParen)) {
        Formula inner = formula();
        ts_.expect(Tok::kRParen, "')'");
        return inner;
      }
      return atom();
    }();
    --nesting_;
    return f;
  }

  Formula atom() {
    const Token& t = ts_.peek();
    if (t.kind != Tok::kIdent && t.kind != Tok::kInt)
      ts_.fail("unexpected " + describe(t), "atom, '~' or '('");
    Token outcome = ts_.next();
    if (ts_.accept(Tok::kAt)) {
      Token exp = ts_.expect(Tok::kIdent, "experiment name");
      return Formula::atom(exp.text, outcome.text);
    }
    if (outcome.kind == Tok::kIdent && std::islower(static_cast<unsigned char>(outcome.text[0])))
      return Formula::atom(outcome.text, kPredicateTrue);
    ts_.fail("unexpected " + describe(ts_.peek()) + " after outcome '" + outcome.text + "'", "'@'");
  }

  static constexpr int kMaxNesting = 2000;

  TokenStream& ts_;
  int nesting_ = 0;
};

enum Level { kCondLevel = 1, kOrLevel = 2, kAndLevel = 3, kUnaryLevel = 4 };

int level(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::kAtom:
    case FormulaKind::kNot:
      return kUnaryLevel;
    case FormulaKind::kChoiceAnd:
    case FormulaKind::kParAnd:
      return kAndLevel;
    case FormulaKind::kChoiceOr:
    case FormulaKind::kParOr:
      return kOrLevel;
    case FormulaKind::kGivenAdd:
    case FormulaKind::kGivenPar:
      return kCondLevel;
  }
  return kUnaryLevel;
}

void render(const Formula& f, std::string& out);

void render_child(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  render(f, out);
  if (parens) out += ')';
}

void render(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::kAtom: {
      const Atom& a = f.atom();
      if (a.outcome == kPredicateTrue && std::islower(static_cast<unsigned char>(a.experiment[0])) &&
          !is_keyword(a.experiment)) {
        out += a.experiment;
      } else {
        out += a.outcome + "@" + a.experiment;
      }
      return;
    }
    case FormulaKind::kNot:
      out += '~';
      render_child(f.lhs(), level(f.lhs()) < kUnaryLevel, out);
      return;
    default: {
      const int l = level(f);
      const bool cond = l == kCondLevel;
      render_child(f.lhs(), cond ? level(f.lhs()) <= l : level(f.lhs()) < l, out);
      out += ' ';
      out += operator_symbol(f.kind());
      out += ' ';
      render_child(f.rhs(), level(f.rhs()) <= l, out);
    }
  }
}

// ---- model files ----------------------------------------------------------

Rational parse_rational(TokenStream& ts) {
  const bool negative = ts.accept(Tok::kMinus);
  Token num = ts.expect(Tok::kInt, "rational <int> or <int>/<int>");
  std::string text = (negative ? "-" : "") + num.text;
  if (ts.accept(Tok::kSlash)) {
    Token den = ts.expect(Tok::kInt, "denominator");
    if (den.text.find_first_not_of('0') == std::string::npos)
      throw ParseError(den.line, den.column, "zero denominator");
    text += "/" + den.text;
  }
  return Rational::parse(text);
}

Outcome parse_outcome(TokenStream& ts) {
  if (ts.at(Tok::kIdent) || ts.at(Tok::kInt)) return ts.next().text;
  ts.fail("unexpected " + describe(ts.peek()), "outcome");
}

void expect_end(TokenStream& ts) {
  if (!ts.at(Tok::kEnd)) ts.fail("unexpected " + describe(ts.peek()), "end of line");
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return !is_keyword(s);
}

Formula parse_formula(std::string_view text) {
  TokenStream ts(tokenize(text));
  FormulaParser p(ts);
  Formula f = p.formula();
  if (!ts.at(Tok::kEnd)) {
    if (ts.at(Tok::kRParen)) ts.fail("unbalanced ')'");
    ts.fail("unexpected " + describe(ts.peek()), "operator or end of input");
  }
  return f;
}

std::string format_formula(const Formula& f) {
  std::string out;
  render(f, out);
  return out;
}

Model parse_model(std::string_view text) {
  std::vector<ExperimentDecl> decls;
  std::optional<std::size_t> last_dependent;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    TokenStream ts(tokenize(text.substr(start, end - start), line_no));
    start = end + 1;
    if (ts.at(Tok::kEnd)) continue;

    Token head = ts.expect(Tok::kIdent, "'experiment', 'cpt' or 'predicate'");
    if (head.text == "experiment") {
      ExperimentDecl d;
      d.id = ts.expect(Tok::kIdent, "experiment name").text;
      d.line = line_no;
      ts.expect(Tok::kColon, "':'");
      std::vector<std::pair<Outcome, std::optional<Rational>>> items;
      do {
        if (ts.at(Tok::kIdent) && ts.peek().text == "depends") break;
        Outcome o = parse_outcome(ts);
        std::optional<Rational> w;
        if (ts.accept(Tok::kEquals)) w = parse_rational(ts);
        items.emplace_back(std::move(o), std::move(w));
      } while (ts.accept(Tok::kComma));
      if (items.empty()) ts.fail("experiment '" + d.id + "' declares no outcomes", "outcome");
      std::size_t weighted = 0;
      for (const auto& it : items) weighted += it.second.has_value();
      if (weighted != 0 && weighted != items.size())
        throw ParseError(head.line, head.column,
                         "weights must be given for all outcomes of '" + d.id + "' or for none");
      for (auto& it : items) d.outcomes.push_back(it.first);

      if (ts.at(Tok::kIdent) && ts.peek().text == "depends") {
        const Token dep = ts.next();
        if (weighted != 0)
          throw ParseError(dep.line, dep.column,
                           "dependent experiment '" + d.id + "' takes its probabilities from cpt lines");
        do {
          d.parents.push_back(ts.expect(Tok::kIdent, "parent experiment").text);
        } while (ts.accept(Tok::kComma));
        last_dependent = decls.size();
      } else {
        auto& row = d.cpt[{}];
        const Rational uniform(1, static_cast<std::int64_t>(items.size()));
        for (auto& it : items) row[it.first] = it.second.value_or(uniform);
        last_dependent.reset();
      }
      expect_end(ts);
      decls.push_back(std::move(d));
    } else if (head.text == "cpt") {
      if (!last_dependent)
        throw ParseError(head.line, head.column, "cpt line without a preceding dependent experiment");
      ExperimentDecl& d = decls[*last_dependent];
      Outcome o = parse_outcome(ts);
      ts.expect(Tok::kBar, "'|'");
      std::map<ExperimentId, Outcome> given;
      do {
        Token p = ts.expect(Tok::kIdent, "parent experiment");
        if (std::find(d.parents.begin(), d.parents.end(), p.text) == d.parents.end())
          throw ParseError(p.line, p.column, "'" + p.text + "' is not a parent of '" + d.id + "'");
        ts.expect(Tok::kEquals, "'='");
        if (!given.emplace(p.text, parse_outcome(ts)).second)
          throw ParseError(p.line, p.column, "parent '" + p.text + "' assigned twice");
      } while (ts.accept(Tok::kComma));
      ts.expect(Tok::kEquals, "'='");
      Rational w = parse_rational(ts);
      expect_end(ts);
      ExperimentDecl::ParentKey key;
      for (const auto& p : d.parents) {
        auto it = given.find(p);
        if (it == given.end())
          throw ParseError(head.line, head.column, "cpt line does not assign parent '" + p + "'");
        key.push_back(it->second);
      }
      if (!d.cpt[key].emplace(o, w).second)
        throw ParseError(head.line, head.column, "duplicate cpt entry for '" + o + "'");
    } else if (head.text == "predicate") {
      Token id = ts.expect(Tok::kIdent, "predicate name");
      ts.expect(Tok::kEquals, "'='");
      Rational p = parse_rational(ts);
      expect_end(ts);
      ExperimentDecl d = ExperimentDecl::make_predicate(id.text, p);
      d.line = line_no;
      if (p < Rational(0) || p > Rational(1))
        throw ParseError(id.line, id.column, "predicate probability " + p.to_string() + " outside [0, 1]");
      decls.push_back(std::move(d));
      last_dependent.reset();
    } else {
      throw ParseError(head.line, head.column, "unknown statement '" + head.text + "'",
                       "'experiment', 'cpt' or 'predicate'");
    }
  }

  Model model(std::move(decls));
  require_valid(model);
  return model;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace colprob
