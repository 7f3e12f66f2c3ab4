#include "parse/TptpParser.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "kernel/Builtins.hpp"

namespace peregrine {

namespace {

enum class Tok : uint8_t {
  LowerWord,
  UpperWord,
  DollarWord,
  SingleQuoted,
  IntNum,
  RatNum,
  RealNum,
  Punct,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

bool isLowerStart(unsigned char c) {
  // Bytes above ASCII are treated as word characters so that names
  // containing UTF-8 letters (skolem symbols in printed proofs) re-parse.
  return (c >= 'a' && c <= 'z') || c >= 0x80;
}

bool isWordChar(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

std::vector<Token> lexTptp(const std::string& text, const std::string& file) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1;
  int col = 1;
  auto fail = [&](const std::string& msg) -> void { throw ParseError(file, line, col, msg); };
  auto advance = [&](size_t n) {
    for (; n > 0; --n, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  static const char* multiPunct[] = {"<=>", "<~>", "!=", "!>", "=>", "<=", "~&", "~|", ":="};
  static const std::string singlePunct = "()[],.:!?~&|=*><";

  while (i < text.size()) {
    unsigned char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      advance(2);
      while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) advance(1);
      if (i + 1 >= text.size()) fail("unterminated block comment");
      advance(2);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (isLowerStart(c)) {
      size_t j = i;
      while (j < text.size() && isWordChar(text[j])) ++j;
      t.kind = Tok::LowerWord;
      t.text = text.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isupper(c)) {
      size_t j = i;
      while (j < text.size() && isWordChar(text[j])) ++j;
      t.kind = Tok::UpperWord;
      t.text = text.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '$') {
      size_t j = i + 1;
      if (j < text.size() && text[j] == '$') ++j;
      size_t wordStart = j;
      while (j < text.size() && isWordChar(text[j])) ++j;
      if (j == wordStart) fail("stray '$'");
      t.kind = Tok::DollarWord;
      t.text = text.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '\'') {
      std::string val;
      size_t j = i + 1;
      for (;;) {
        if (j >= text.size()) fail("unterminated quoted name");
        if (text[j] == '\\') {
          if (j + 1 >= text.size()) fail("unterminated escape");
          val.push_back(text[j + 1]);
          j += 2;
          continue;
        }
        if (text[j] == '\'') break;
        val.push_back(text[j]);
        ++j;
      }
      t.kind = Tok::SingleQuoted;
      t.text = std::move(val);
      advance(j + 1 - i);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"') {
      throw UnsupportedError(file + ":" + std::to_string(line) + ":" + std::to_string(col) +
                             ": distinct object syntax is not supported");
    }
    if (std::isdigit(c) ||
        ((c == '+' || c == '-') && i + 1 < text.size() && std::isdigit(text[i + 1]))) {
      size_t j = i;
      if (text[j] == '+' || text[j] == '-') ++j;
      while (j < text.size() && std::isdigit(text[j])) ++j;
      t.kind = Tok::IntNum;
      if (j < text.size() && text[j] == '/') {
        size_t k = j + 1;
        while (k < text.size() && std::isdigit(text[k])) ++k;
        if (k == j + 1) fail("malformed rational");
        j = k;
        t.kind = Tok::RatNum;
      } else {
        if (j + 1 < text.size() && text[j] == '.' && std::isdigit(text[j + 1])) {
          ++j;
          while (j < text.size() && std::isdigit(text[j])) ++j;
          t.kind = Tok::RealNum;
        }
        if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
          size_t k = j + 1;
          if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
          size_t ds = k;
          while (k < text.size() && std::isdigit(text[k])) ++k;
          if (k > ds) {
            j = k;
            t.kind = Tok::RealNum;
          }
        }
      }
      t.text = text.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const char* p : multiPunct) {
      size_t len = std::strlen(p);
      if (text.compare(i, len, p) == 0) {
        t.kind = Tok::Punct;
        t.text = p;
        advance(len);
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (singlePunct.find(static_cast<char>(c)) != std::string::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, static_cast<char>(c));
      advance(1);
      out.push_back(std::move(t));
      continue;
    }
    fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

Rational parseRealToken(const std::string& s) {
  size_t e = s.find_first_of("eE");
  std::string mantissa = e == std::string::npos ? s : s.substr(0, e);
  Rational value = rationalFromDecimal(mantissa);
  if (e != std::string::npos) {
    long exp = std::stol(s.substr(e + 1));
    Rational ten(10);
    for (long k = 0; k < std::labs(exp); ++k) {
      if (exp > 0) {
        value *= ten;
      } else {
        value /= ten;
      }
    }
  }
  return value;
}

bool containsQuantifier(const FormulaPtr& f) {
  if (f->isQuantifier()) return true;
  for (const auto& s : f->subs()) {
    if (containsQuantifier(s)) return true;
  }
  return false;
}

/** Recursive-descent parser for one file; includes spawn nested parsers. */
class TptpUnitParser {
public:
  TptpUnitParser(Problem& prob, const TptpOptions& opts, std::set<std::string>& active,
                 std::string file, const std::string& text)
      : _prob(prob),
        _opts(opts),
        _active(active),
        _file(std::move(file)),
        _toks(lexTptp(text, _file)) {}

  void parseUnits(const std::set<std::string>* selection) {
    while (peek().kind != Tok::End) {
      parseUnit(selection);
    }
  }

private:
  Problem& _prob;
  const TptpOptions& _opts;
  std::set<std::string>& _active;
  std::string _file;
  std::vector<Token> _toks;
  size_t _pos = 0;
  bool _typed = false;
  unsigned _varCounter = 0;
  /** Innermost binding last; names can shadow. */
  std::vector<std::pair<std::string, TermPtr>> _scope;
  /** Variables auto-bound in untyped units, in first-occurrence order. */
  std::vector<std::pair<unsigned, TermPtr>> _freeVars;

  const Token& peek(size_t ahead = 0) const {
    size_t k = _pos + ahead;
    return k < _toks.size() ? _toks[k] : _toks.back();
  }
  const Token& next() {
    const Token& t = _toks[_pos];
    if (t.kind != Tok::End) ++_pos;
    return t;
  }
  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw ParseError(_file, at.line, at.col, msg);
  }
  [[noreturn]] void unsupported(const Token& at, const std::string& msg) const {
    throw UnsupportedError(_file + ":" + std::to_string(at.line) + ":" +
                           std::to_string(at.col) + ": " + msg);
  }
  bool peekPunct(const std::string& p, size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Punct && t.text == p;
  }
  void expectPunct(const std::string& p) {
    if (!peekPunct(p)) fail(peek(), "expected '" + p + "'");
    next();
  }

  TermPtr lookupVar(const std::string& name) const {
    for (auto it = _scope.rbegin(); it != _scope.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    return nullptr;
  }

  // ---- units ----

  void parseUnit(const std::set<std::string>* selection) {
    const Token& head = peek();
    if (head.kind != Tok::LowerWord) fail(head, "expected an annotated formula");
    if (head.text == "include") {
      parseInclude();
      return;
    }
    if (head.text == "thf" || head.text == "tcf" || head.text == "tpi") {
      unsupported(head, head.text + " units are not supported");
    }
    if (head.text != "fof" && head.text != "tff" && head.text != "cnf") {
      fail(head, "unknown unit kind '" + head.text + "'");
    }
    bool typed = head.text == "tff";
    bool cnf = head.text == "cnf";
    next();
    expectPunct("(");
    std::string name = parseName();
    expectPunct(",");
    const Token& roleTok = peek();
    if (roleTok.kind != Tok::LowerWord) fail(roleTok, "expected a formula role");
    std::string role = next().text;
    expectPunct(",");

    _typed = typed;
    _varCounter = 0;
    _scope.clear();
    _freeVars.clear();

    if (role == "type") {
      if (!typed) fail(roleTok, "type declarations need a tff unit");
      parseTypeDecl();
    } else if (role == "datatype") {
      if (!typed) fail(roleTok, "datatype declarations need a tff unit");
      parseDatatypeDecl();
    } else {
      FormulaPtr f = cnf ? parseCnfFormula() : parseFormula();
      for (auto it = _freeVars.rbegin(); it != _freeVars.rend(); ++it) {
        f = Formula::mkQuant(Connective::Forall, it->first, it->second, f);
      }
      InputFormula input;
      input.name = name;
      input.role = mapRole(roleTok, role, cnf);
      input.formula = std::move(f);
      if (!selection || selection->count(name)) {
        _prob.formulas.push_back(std::move(input));
      }
    }
    skipAnnotations();
    expectPunct(")");
    expectPunct(".");
  }

  std::string parseName() {
    const Token& t = peek();
    if (t.kind == Tok::LowerWord || t.kind == Tok::SingleQuoted || t.kind == Tok::IntNum) {
      return next().text;
    }
    fail(t, "expected a unit name");
  }

  FormulaRole mapRole(const Token& at, const std::string& role, bool cnf) {
    if (role == "axiom" || role == "lemma" || role == "theorem" || role == "corollary" ||
        role == "definition" || role == "plain") {
      return FormulaRole::Axiom;
    }
    if (role == "hypothesis" || role == "assumption") return FormulaRole::Hypothesis;
    if (role == "conjecture") {
      if (cnf) fail(at, "cnf units cannot state a conjecture");
      return FormulaRole::Conjecture;
    }
    if (role == "negated_conjecture") return FormulaRole::NegatedConjecture;
    fail(at, "unknown formula role '" + role + "'");
  }

  void skipAnnotations() {
    while (peekPunct(",")) {
      next();
      int depth = 0;
      for (;;) {
        const Token& t = peek();
        if (t.kind == Tok::End) fail(t, "unterminated annotation");
        if (depth == 0 && t.kind == Tok::Punct && (t.text == ")" || t.text == ",")) break;
        next();
        if (t.kind == Tok::Punct && (t.text == "(" || t.text == "[")) ++depth;
        if (t.kind == Tok::Punct && (t.text == ")" || t.text == "]")) --depth;
      }
    }
  }

  // ---- type and datatype declarations ----

  void parseTypeDecl() {
    bool wrapped = peekPunct("(");
    if (wrapped) next();
    const Token& nameTok = peek();
    if (nameTok.kind != Tok::LowerWord && nameTok.kind != Tok::SingleQuoted) {
      fail(nameTok, "expected a symbol name in a type declaration");
    }
    std::string name = next().text;
    expectPunct(":");

    unsigned sortVars = 0;
    if (peekPunct("!>")) {
      next();
      expectPunct("[");
      for (;;) {
        const Token& v = peek();
        if (v.kind != Tok::UpperWord) fail(v, "expected a sort variable");
        std::string vn = next().text;
        expectPunct(":");
        const Token& s = peek();
        if (s.kind != Tok::DollarWord || s.text != "$tType") {
          fail(s, "sort variables must be declared at $tType");
        }
        next();
        // Declaration patterns index their parameters 0..n-1 directly.
        _scope.emplace_back(vn, Term::mkSortVar(sortVars++));
        if (peekPunct(",")) {
          next();
          continue;
        }
        break;
      }
      expectPunct("]");
      expectPunct(":");
    }

    auto [argSorts, result] = parseTypeBody();
    if (wrapped) expectPunct(")");
    _scope.clear();

    declareParsed(nameTok, name, sortVars, std::move(argSorts), std::move(result));
  }

  /**
   * Rank-1 monotypes: an atomic sort, `s > r`, `(s1 * s2) > r`, each
   * optionally wrapped in one layer of parentheses.
   */
  std::pair<std::vector<TermPtr>, TermPtr> parseTypeBody() {
    if (peekPunct("(")) {
      next();
      std::vector<TermPtr> parts;
      if (peekPunct("(")) {
        next();
        parts.push_back(parseSortExpr());
        while (peekPunct("*")) {
          next();
          parts.push_back(parseSortExpr());
        }
        expectPunct(")");
        expectPunct(">");
        TermPtr result = parseSortExpr();
        expectPunct(")");
        return {std::move(parts), std::move(result)};
      }
      parts.push_back(parseSortExpr());
      if (peekPunct("*")) {
        while (peekPunct("*")) {
          next();
          parts.push_back(parseSortExpr());
        }
        expectPunct(")");
        expectPunct(">");
        return {std::move(parts), parseSortExpr()};
      }
      if (peekPunct(">")) {
        next();
        TermPtr result = parseSortExpr();
        expectPunct(")");
        return {std::move(parts), std::move(result)};
      }
      expectPunct(")");
      if (peekPunct(">")) {
        next();
        return {std::move(parts), parseSortExpr()};
      }
      return {{}, parts[0]};
    }
    TermPtr first = parseSortExpr();
    if (peekPunct(">")) {
      next();
      return {{std::move(first)}, parseSortExpr()};
    }
    return {{}, std::move(first)};
  }

  void declareParsed(const Token& at, const std::string& name, unsigned sortVars,
                     std::vector<TermPtr> argSorts, TermPtr result) {
    SymbolKind kind;
    TermPtr resultSort;
    unsigned sortArity = sortVars;
    if (result.get() == Term::tType().get()) {
      if (sortVars > 0) {
        unsupported(at, "sort constructors quantified over sorts are not supported");
      }
      for (const auto& a : argSorts) {
        if (a.get() != Term::tType().get()) {
          fail(at, "sort constructor arguments must be $tType");
        }
      }
      kind = SymbolKind::SortCtor;
      sortArity = static_cast<unsigned>(argSorts.size());
      argSorts.clear();
    } else if (Term::equal(result, Term::boolSort())) {
      kind = SymbolKind::Predicate;
    } else {
      kind = SymbolKind::Function;
      resultSort = result;
    }
    for (const auto& a : argSorts) {
      if (a.get() == Term::tType().get()) {
        fail(at, "$tType cannot be an argument of a function or predicate");
      }
    }
    if (auto existing = _prob.sig.lookup(name)) {
      const SymbolDecl& d = _prob.sig[*existing];
      bool same = d.kind == kind && d.sortArity == sortArity &&
                  d.argSorts.size() == argSorts.size() &&
                  (d.resultSort == nullptr) == (resultSort == nullptr);
      for (size_t i = 0; same && i < argSorts.size(); ++i) {
        same = Term::equal(d.argSorts[i], argSorts[i]);
      }
      if (same && resultSort) same = Term::equal(d.resultSort, resultSort);
      if (!same) throw SortError("conflicting declarations for symbol " + name);
      return;
    }
    _prob.sig.declare(name, kind, sortArity, std::move(argSorts), std::move(resultSort));
  }

  void parseDatatypeDecl() {
    const Token& at = peek();
    expectPunct("[");
    std::vector<SymbolId> ctors;
    for (;;) {
      const Token& t = peek();
      if (t.kind != Tok::LowerWord && t.kind != Tok::SingleQuoted) {
        fail(t, "expected a constructor name");
      }
      auto id = _prob.sig.lookup(t.text);
      if (!id) fail(t, "undeclared constructor '" + t.text + "'");
      ctors.push_back(*id);
      next();
      if (peekPunct(",")) {
        next();
        continue;
      }
      break;
    }
    expectPunct("]");

    auto resultOf = [&](SymbolId c) -> TermPtr {
      const SymbolDecl& d = _prob.sig[c];
      if ((d.kind != SymbolKind::Function && d.kind != SymbolKind::DatatypeCtor) ||
          !d.resultSort || !d.resultSort->isApp()) {
        throw SortError("datatype constructor " + d.name + " is not a function into a sort");
      }
      return d.resultSort;
    };
    TermPtr first = resultOf(ctors[0]);
    SymbolId sortCtor = first->symbol();
    const SymbolDecl& sortDecl = _prob.sig[sortCtor];
    if (sortDecl.kind != SymbolKind::SortCtor) {
      throw SortError("datatype constructors must build a declared sort");
    }
    for (SymbolId c : ctors) {
      const SymbolDecl& d = _prob.sig[c];
      TermPtr r = resultOf(c);
      if (r->symbol() != sortCtor || d.sortArity != sortDecl.sortArity) {
        throw SortError("datatype constructors disagree on the sort they build");
      }
      for (unsigned i = 0; i < d.sortArity; ++i) {
        const TermPtr& s = r->sortArgs()[i];
        if (!s->isVar() || !s->isSortVar() || s->varId() != i) {
          throw SortError("constructor " + d.name + " must build the fully general instance");
        }
      }
    }
    if (sortDecl.datatype >= 0) {
      const Datatype& dt = _prob.sig.datatypes()[sortDecl.datatype];
      if (dt.ctors != ctors) {
        throw SortError("conflicting datatype declarations for " + sortDecl.name);
      }
      (void)at;
      return;
    }
    _prob.sig.addDatatype(sortCtor, std::move(ctors));
  }

  // ---- sorts ----

  TermPtr parseSortExpr(bool allowTType = true) {
    const Token& at = peek();
    TermPtr t = parseTerm();
    if (t.get() == Term::tType().get()) {
      if (!allowTType) fail(at, "$tType is not a sort here");
      return t;
    }
    if (!t->isSortTerm()) fail(at, "expected a sort");
    return t;
  }

  // ---- formulas ----

  bool peekBinaryConnective() const {
    const Token& t = peek();
    if (t.kind != Tok::Punct) return false;
    return t.text == "&" || t.text == "|" || t.text == "=>" || t.text == "<=" ||
           t.text == "<=>" || t.text == "<~>" || t.text == "~&" || t.text == "~|";
  }

  FormulaPtr parseFormula() {
    FormulaPtr first = parseUnitary();
    if (!peekBinaryConnective()) return first;
    std::string op = peek().text;
    if (op == "&" || op == "|") {
      std::vector<FormulaPtr> parts{first};
      while (peekPunct(op)) {
        next();
        parts.push_back(parseUnitary());
      }
      if (peekBinaryConnective()) {
        fail(peek(), "mixing binary connectives needs parentheses");
      }
      return Formula::mkJunction(op == "&" ? Connective::And : Connective::Or,
                                 std::move(parts));
    }
    next();
    FormulaPtr rhs = parseUnitary();
    if (peekBinaryConnective()) {
      fail(peek(), "'" + op + "' does not associate, use parentheses");
    }
    if (op == "=>") return Formula::mkBinary(Connective::Implies, first, rhs);
    if (op == "<=") return Formula::mkBinary(Connective::Implies, rhs, first);
    if (op == "<=>") return Formula::mkBinary(Connective::Iff, first, rhs);
    if (op == "<~>") return Formula::mkNot(Formula::mkBinary(Connective::Iff, first, rhs));
    if (op == "~&") return Formula::mkNot(Formula::mkJunction(Connective::And, {first, rhs}));
    PER_ASSERT(op == "~|");
    return Formula::mkNot(Formula::mkJunction(Connective::Or, {first, rhs}));
  }

  FormulaPtr parseUnitary() {
    const Token& t = peek();
    if (peekPunct("~")) {
      next();
      return Formula::mkNot(parseUnitary());
    }
    if (peekPunct("!") || peekPunct("?") || peekPunct("!>")) {
      return parseQuantified();
    }
    if (peekPunct("(")) {
      next();
      FormulaPtr f = parseFormula();
      expectPunct(")");
      return f;
    }
    (void)t;
    return parseAtomic();
  }

  FormulaPtr parseQuantified() {
    const Token& qt = next();
    bool forall = qt.text == "!" || qt.text == "!>";
    expectPunct("[");
    struct Binding {
      unsigned var;
      TermPtr sort;
      bool isSortQuant;
    };
    std::vector<Binding> bindings;
    size_t scopeBase = _scope.size();
    for (;;) {
      const Token& v = peek();
      if (v.kind != Tok::UpperWord) fail(v, "expected a variable");
      std::string name = next().text;
      TermPtr sort = Term::indSort();
      if (peekPunct(":")) {
        const Token& colon = peek();
        if (!_typed) fail(colon, "typed bindings need a tff unit");
        next();
        sort = parseSortExpr();
      }
      bool isSortQuant = sort.get() == Term::tType().get();
      if (isSortQuant && !forall) {
        unsupported(v, "existential quantification over sorts is not supported");
      }
      unsigned id = _varCounter++;
      TermPtr var = isSortQuant ? Term::mkSortVar(id) : Term::mkVar(id, sort);
      _scope.emplace_back(name, var);
      bindings.push_back({id, sort, isSortQuant});
      if (peekPunct(",")) {
        next();
        continue;
      }
      break;
    }
    expectPunct("]");
    expectPunct(":");
    FormulaPtr body = parseUnitary();
    _scope.resize(scopeBase);
    for (auto it = bindings.rbegin(); it != bindings.rend(); ++it) {
      Connective c = it->isSortQuant ? Connective::SortForall
                     : forall        ? Connective::Forall
                                     : Connective::Exists;
      body = Formula::mkQuant(c, it->var, it->isSortQuant ? Term::tType() : it->sort, body);
    }
    return body;
  }

  FormulaPtr parseAtomic() {
    if (!_typed) return parseUntypedAtom();
    const Token& at = peek();
    if (at.kind == Tok::DollarWord && (at.text == "$ite" || at.text == "$let")) {
      // These take formula-valued arguments when they sit at a formula
      // position but term-valued ones below an equality; try the term
      // reading first and fall back to the formula reading.
      size_t savePos = _pos;
      size_t saveScope = _scope.size();
      unsigned saveVars = _varCounter;
      try {
        return finishAtomFromTerm(parseTerm());
      } catch (const ParseError&) {
        _pos = savePos;
        _scope.resize(saveScope);
        _varCounter = saveVars;
      }
      return at.text == "$ite" ? parseFormulaIte() : parseFormulaLet();
    }
    return finishAtomFromTerm(parseTerm());
  }

  FormulaPtr finishAtomFromTerm(const TermPtr& t) {
    const Token& at = peek();
    if (peekPunct("=") || peekPunct("!=")) {
      bool positive = peek().text == "=";
      next();
      TermPtr rhs = parseTerm();
      return Formula::mkAtom(mkEqualityChecked(at, t, rhs, positive));
    }
    if (Term::equal(t->sort(), Term::boolSort())) {
      return boolTermToFormula(t, _prob.sig);
    }
    fail(at, "expected '=' after a term at formula level");
  }

  Literal mkEqualityChecked(const Token& at, TermPtr lhs, TermPtr rhs, bool positive) {
    if (!Term::equal(lhs->sort(), rhs->sort())) {
      TermPtr lc = coerceNumeral(lhs, rhs->sort());
      TermPtr rc = coerceNumeral(rhs, lhs->sort());
      if (lc) {
        lhs = lc;
      } else if (rc) {
        rhs = rc;
      } else {
        throw SortError(where(at) + ": equality between different sorts");
      }
    }
    return Literal::mkEq(std::move(lhs), std::move(rhs), positive);
  }

  FormulaPtr parseFormulaIte() {
    next();
    expectPunct("(");
    FormulaPtr c = parseFormula();
    expectPunct(",");
    FormulaPtr a = parseFormula();
    expectPunct(",");
    FormulaPtr b = parseFormula();
    expectPunct(")");
    return Formula::mkJunction(
        Connective::Or, {Formula::mkJunction(Connective::And, {c, a}),
                         Formula::mkJunction(Connective::And, {Formula::mkNot(c), b})});
  }

  FormulaPtr parseFormulaLet() {
    next();
    expectPunct("(");
    const Token& v = peek();
    if (v.kind != Tok::UpperWord) fail(v, "$let binds a variable");
    std::string name = next().text;
    expectPunct(":=");
    TermPtr value = parseTerm();
    expectPunct(",");
    // A formula-level let is inlined at parse time: occurrences of the
    // bound variable resolve directly to the definition.
    _scope.emplace_back(name, value);
    FormulaPtr body = parseFormula();
    _scope.pop_back();
    expectPunct(")");
    return body;
  }

  // ---- untyped (fof/cnf) atoms ----

  FormulaPtr parseUntypedAtom() {
    const Token& at = peek();
    if (at.kind == Tok::DollarWord) {
      if (at.text == "$true") {
        next();
        return Formula::mkTruth(true);
      }
      if (at.text == "$false") {
        next();
        return Formula::mkTruth(false);
      }
      unsupported(at, "'" + at.text + "' needs a typed (tff) unit");
    }
    if (at.kind == Tok::UpperWord) {
      TermPtr lhs = parseUntypedTerm();
      if (!peekPunct("=") && !peekPunct("!=")) {
        fail(at, "a variable is not a formula in untyped input");
      }
      bool positive = next().text == "=";
      TermPtr rhs = parseUntypedTerm();
      return Formula::mkAtom(Literal::mkEq(lhs, rhs, positive));
    }
    if (at.kind != Tok::LowerWord && at.kind != Tok::SingleQuoted) {
      fail(at, "expected an atom");
    }
    std::string name = next().text;
    std::vector<TermPtr> args;
    if (peekPunct("(")) {
      next();
      for (;;) {
        args.push_back(parseUntypedTerm());
        if (peekPunct(",")) {
          next();
          continue;
        }
        break;
      }
      expectPunct(")");
    }
    if (peekPunct("=") || peekPunct("!=")) {
      bool positive = next().text == "=";
      SymbolId f = declareUntypedChecked(at, name, SymbolKind::Function, args.size());
      TermPtr lhs = Term::mkApp(_prob.sig, f, {}, std::move(args));
      TermPtr rhs = parseUntypedTerm();
      return Formula::mkAtom(Literal::mkEq(lhs, rhs, positive));
    }
    SymbolId p = declareUntypedChecked(at, name, SymbolKind::Predicate, args.size());
    return Formula::mkAtom(Literal::mkPred(_prob.sig, p, {}, std::move(args), true));
  }

  TermPtr parseUntypedTerm() {
    const Token& at = peek();
    if (at.kind == Tok::UpperWord) {
      std::string name = next().text;
      if (TermPtr v = lookupVar(name)) return v;
      // Untyped dialects quantify free variables implicitly.
      unsigned id = _varCounter++;
      TermPtr var = Term::mkVar(id, Term::indSort());
      _scope.emplace_back(name, var);
      _freeVars.emplace_back(id, Term::indSort());
      return var;
    }
    if (at.kind == Tok::IntNum || at.kind == Tok::RatNum || at.kind == Tok::RealNum) {
      unsupported(at, "numbers need a typed (tff) unit");
    }
    if (at.kind != Tok::LowerWord && at.kind != Tok::SingleQuoted) {
      fail(at, "expected a term");
    }
    std::string name = next().text;
    std::vector<TermPtr> args;
    if (peekPunct("(")) {
      next();
      for (;;) {
        args.push_back(parseUntypedTerm());
        if (peekPunct(",")) {
          next();
          continue;
        }
        break;
      }
      expectPunct(")");
    }
    SymbolId f = declareUntypedChecked(at, name, SymbolKind::Function, args.size());
    return Term::mkApp(_prob.sig, f, {}, std::move(args));
  }

  SymbolId declareUntypedChecked(const Token& at, const std::string& name, SymbolKind kind,
                                 size_t arity) {
    if (auto existing = _prob.sig.lookup(name)) {
      const SymbolDecl& d = _prob.sig[*existing];
      if (d.kind != kind || d.arity() != arity) {
        throw SortError(where(at) + ": symbol " + name + " used with conflicting " +
                        (d.arity() != arity ? "arity" : "kind"));
      }
      return *existing;
    }
    return _prob.sig.declareUntyped(name, kind, static_cast<unsigned>(arity));
  }

  FormulaPtr parseCnfFormula() {
    bool wrapped = peekPunct("(");
    if (wrapped) next();
    std::vector<FormulaPtr> lits;
    for (;;) {
      if (peekPunct("~")) {
        next();
        lits.push_back(Formula::mkNot(parseUntypedAtom()));
      } else {
        lits.push_back(parseUntypedAtom());
      }
      if (peekPunct("|")) {
        next();
        continue;
      }
      break;
    }
    if (wrapped) expectPunct(")");
    return Formula::mkJunction(Connective::Or, std::move(lits));
  }

  // ---- typed terms ----

  std::string where(const Token& at) const {
    return _file + ":" + std::to_string(at.line) + ":" + std::to_string(at.col);
  }

  /** Int numerals coerce to $real where a real is expected; else null. */
  TermPtr coerceNumeral(const TermPtr& t, const TermPtr& want) const {
    if (t->isNum() && Term::equal(t->sort(), Term::intSort()) &&
        Term::equal(want, Term::realSort())) {
      return Term::mkNum(t->number(), false);
    }
    return nullptr;
  }

  /** Negation that folds numerals, keeping them directly coercible. */
  TermPtr negTerm(const TermPtr& t, bool isInt) const {
    if (t->isNum()) {
      Rational n = -t->number();
      return Term::mkNum(n, isInt);
    }
    return Term::mkApp(_prob.sig, Signature::negFor(isInt), {}, {t});
  }

  TermPtr parseTerm() {
    const Token& at = peek();
    switch (at.kind) {
      case Tok::UpperWord: {
        std::string name = next().text;
        if (TermPtr v = lookupVar(name)) return v;
        fail(at, "unbound variable " + name);
      }
      case Tok::IntNum: {
        std::string text = next().text;
        if (!text.empty() && text[0] == '+') text = text.substr(1);
        return Term::mkNum(Rational(Integer(text)), true);
      }
      case Tok::RatNum: {
        std::string text = next().text;
        size_t slash = text.find('/');
        Integer den(text.substr(slash + 1));
        if (den == 0) fail(at, "rational with zero denominator");
        std::string numText = text.substr(0, slash);
        if (!numText.empty() && numText[0] == '+') numText = numText.substr(1);
        return Term::mkNum(Rational(Integer(numText), den), false);
      }
      case Tok::RealNum:
        return Term::mkNum(parseRealToken(next().text), false);
      case Tok::DollarWord:
        return parseDefinedTerm();
      case Tok::LowerWord:
      case Tok::SingleQuoted:
        return parseApplication();
      default:
        fail(at, "expected a term");
    }
  }

  TermPtr parseDefinedTerm() {
    const Token& at = peek();
    const std::string& w = at.text;
    if (w == "$true") {
      next();
      return Term::trueTerm();
    }
    if (w == "$false") {
      next();
      return Term::falseTerm();
    }
    if (w == "$tType") {
      next();
      return Term::tType();
    }
    if (w == "$real") {
      next();
      return Term::realSort();
    }
    if (w == "$int") {
      next();
      return Term::intSort();
    }
    if (w == "$o") {
      next();
      return Term::boolSort();
    }
    if (w == "$i") {
      next();
      return Term::indSort();
    }
    if (w == "$sum" || w == "$difference" || w == "$product") {
      next();
      expectPunct("(");
      TermPtr a = parseTerm();
      expectPunct(",");
      TermPtr b = parseTerm();
      expectPunct(")");
      if (w == "$difference") {
        auto [ca, cb, isInt] = alignArith(at, a, b);
        return Term::mkApp(_prob.sig, Signature::addFor(isInt), {}, {ca, negTerm(cb, isInt)});
      }
      auto [ca, cb, isInt] = alignArith(at, a, b);
      SymbolId f = w == "$sum" ? Signature::addFor(isInt) : Signature::mulFor(isInt);
      return Term::mkApp(_prob.sig, f, {}, {ca, cb});
    }
    if (w == "$uminus") {
      next();
      expectPunct("(");
      TermPtr a = parseTerm();
      expectPunct(")");
      bool isInt = arithKind(at, a);
      return negTerm(a, isInt);
    }
    if (w == "$quotient") {
      next();
      expectPunct("(");
      TermPtr a = parseTerm();
      expectPunct(",");
      TermPtr b = parseTerm();
      expectPunct(")");
      return makeQuotient(at, a, b);
    }
    if (w == "$less" || w == "$lesseq" || w == "$greater" || w == "$greatereq") {
      next();
      expectPunct("(");
      TermPtr a = parseTerm();
      expectPunct(",");
      TermPtr b = parseTerm();
      expectPunct(")");
      auto [ca, cb, isInt] = alignArith(at, a, b);
      bool strict = w == "$less" || w == "$greater";
      bool swap = w == "$greater" || w == "$greatereq";
      if (swap) std::swap(ca, cb);
      SymbolId p = strict ? Signature::lessFor(isInt) : Signature::leqFor(isInt);
      return Term::mkApp(_prob.sig, p, {}, {ca, cb});
    }
    if (w == "$ite") {
      next();
      expectPunct("(");
      FormulaPtr c = parseFormula();
      if (containsQuantifier(c)) {
        // A ParseError lets an atom-position $ite fall back to the
        // formula reading, where quantified conditions are fine.
        fail(at, "quantifiers inside term-level $ite are not supported");
      }
      expectPunct(",");
      TermPtr a = parseTerm();
      expectPunct(",");
      TermPtr b = parseTerm();
      expectPunct(")");
      if (!Term::equal(a->sort(), b->sort())) {
        if (TermPtr cb = coerceNumeral(b, a->sort())) {
          b = cb;
        } else if (TermPtr ca = coerceNumeral(a, b->sort())) {
          a = ca;
        } else {
          throw SortError(where(at) + ": $ite branches have different sorts");
        }
      }
      TermPtr cond = formulaToBoolTerm(c, _prob.sig);
      return Term::mkApp(_prob.sig, SYM_FOOL_ITE, {a->sort()}, {cond, a, b});
    }
    if (w == "$let") {
      next();
      expectPunct("(");
      const Token& v = peek();
      if (v.kind != Tok::UpperWord) fail(v, "$let binds a variable");
      std::string name = next().text;
      expectPunct(":=");
      TermPtr value = parseTerm();
      expectPunct(",");
      unsigned id = _varCounter++;
      TermPtr var = Term::mkVar(id, value->sort());
      _scope.emplace_back(name, var);
      TermPtr body = parseTerm();
      _scope.pop_back();
      expectPunct(")");
      return Term::mkLet(var, value, body);
    }
    if (w == "$to_real") {
      next();
      expectPunct("(");
      TermPtr a = parseTerm();
      expectPunct(")");
      if (Term::equal(a->sort(), Term::realSort())) return a;
      if (a->isNum()) return Term::mkNum(a->number(), false);
      unsupported(at, "$to_real of a non-constant term is not supported");
    }
    unsupported(at, "'" + w + "' is not supported");
  }

  /** $quotient: numerals fold; a numeral divisor becomes a scaling. */
  TermPtr makeQuotient(const Token& at, TermPtr a, TermPtr b) {
    if (TermPtr c = coerceNumeral(a, Term::realSort())) a = c;
    if (TermPtr c = coerceNumeral(b, Term::realSort())) b = c;
    if (!Term::equal(a->sort(), Term::realSort()) || !Term::equal(b->sort(), Term::realSort())) {
      throw SortError(where(at) + ": $quotient needs $real arguments");
    }
    if (!b->isNum()) {
      unsupported(at, "$quotient with a non-constant divisor is not linear");
    }
    if (b->number() == 0) throw SortError(where(at) + ": division by zero");
    if (a->isNum()) {
      return Term::mkNum(a->number() / b->number(), false);
    }
    TermPtr inv = Term::mkNum(Rational(1) / b->number(), false);
    return Term::mkApp(_prob.sig, SYM_MUL_R, {}, {inv, a});
  }

  bool arithKind(const Token& at, const TermPtr& t) const {
    if (Term::equal(t->sort(), Term::intSort())) return true;
    if (Term::equal(t->sort(), Term::realSort())) return false;
    throw SortError(where(at) + ": arithmetic over a non-numeric sort");
  }

  /** Resolves int/real overloading: any real argument makes the pair real. */
  std::tuple<TermPtr, TermPtr, bool> alignArith(const Token& at, TermPtr a, TermPtr b) {
    bool aInt = arithKind(at, a);
    bool bInt = arithKind(at, b);
    if (aInt == bInt) return {a, b, aInt};
    if (TermPtr c = coerceNumeral(a, Term::realSort()); c && !bInt) return {c, b, false};
    if (TermPtr c = coerceNumeral(b, Term::realSort()); c && !aInt) return {a, c, false};
    throw SortError(where(at) + ": mixed $int/$real arithmetic");
  }

  TermPtr parseApplication() {
    const Token& at = peek();
    std::string name = next().text;
    auto id = _prob.sig.lookup(name);
    if (!id) {
      fail(at, "undeclared symbol '" + name + "' (typed units need type declarations)");
    }
    std::vector<TermPtr> all;
    if (peekPunct("(")) {
      next();
      for (;;) {
        all.push_back(parseTerm());
        if (peekPunct(",")) {
          next();
          continue;
        }
        break;
      }
      expectPunct(")");
    }
    return buildApp(at, *id, std::move(all));
  }

  /** Splits sort arguments off, checks sorts, coerces numerals, applies. */
  TermPtr buildApp(const Token& at, SymbolId f, std::vector<TermPtr> all) {
    const SymbolDecl& d = _prob.sig[f];
    size_t expectCount = d.sortArity + (d.kind == SymbolKind::SortCtor ? 0 : d.arity());
    if (all.size() != expectCount) {
      fail(at, d.name + " expects " + std::to_string(expectCount) + " arguments, got " +
                   std::to_string(all.size()));
    }
    std::vector<TermPtr> sortArgs(all.begin(), all.begin() + d.sortArity);
    std::vector<TermPtr> args(all.begin() + d.sortArity, all.end());
    for (const auto& s : sortArgs) {
      if (!s->isSortTerm()) {
        throw SortError(where(at) + ": " + d.name + " expects a sort as its leading argument");
      }
    }
    for (size_t i = 0; i < args.size(); ++i) {
      TermPtr expected = Term::instantiatePattern(d.argSorts[i], sortArgs);
      if (!Term::equal(args[i]->sort(), expected)) {
        if (TermPtr c = coerceNumeral(args[i], expected)) {
          args[i] = c;
          continue;
        }
        throw SortError(where(at) + ": argument " + std::to_string(i + 1) + " of " + d.name +
                        " is ill-sorted");
      }
    }
    return Term::mkApp(_prob.sig, f, std::move(sortArgs), std::move(args));
  }

  // ---- includes ----

  void parseInclude() {
    const Token& at = peek();
    next();
    expectPunct("(");
    const Token& fileTok = peek();
    if (fileTok.kind != Tok::SingleQuoted && fileTok.kind != Tok::LowerWord) {
      fail(fileTok, "include expects a quoted file name");
    }
    std::string target = next().text;
    std::set<std::string> selection;
    bool haveSelection = false;
    if (peekPunct(",")) {
      next();
      expectPunct("[");
      haveSelection = true;
      for (;;) {
        selection.insert(parseName());
        if (peekPunct(",")) {
          next();
          continue;
        }
        break;
      }
      expectPunct("]");
    }
    expectPunct(")");
    expectPunct(".");

    namespace fs = std::filesystem;
    std::vector<fs::path> candidates;
    fs::path self(_file);
    if (self.has_parent_path()) {
      candidates.push_back(self.parent_path() / target);
    } else {
      candidates.push_back(fs::path(target));
    }
    for (const auto& dir : _opts.includeDirs) {
      candidates.push_back(fs::path(dir) / target);
    }
    if (const char* tptpEnv = std::getenv("TPTP")) {
      candidates.push_back(fs::path(tptpEnv) / target);
    }
    std::string resolved;
    for (const auto& c : candidates) {
      std::error_code ec;
      if (fs::exists(c, ec) && !ec) {
        resolved = c.string();
        break;
      }
    }
    if (resolved.empty()) {
      fail(at, "cannot resolve include '" + target + "'");
    }
    std::error_code ec;
    std::string canonical = fs::weakly_canonical(resolved, ec).string();
    if (ec) canonical = resolved;
    if (_active.count(canonical)) {
      fail(at, "include cycle through '" + target + "'");
    }
    std::ifstream in(resolved);
    if (!in) {
      fail(at, "cannot open include '" + resolved + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    _active.insert(canonical);
    TptpUnitParser sub(_prob, _opts, _active, resolved, buffer.str());
    sub.parseUnits(haveSelection ? &selection : nullptr);
    _active.erase(canonical);
  }
};

} // namespace

Problem parseTptpString(const std::string& text, const std::string& name,
                        const TptpOptions& opts) {
  Problem p;
  std::set<std::string> active;
  TptpUnitParser parser(p, opts, active, name, text);
  parser.parseUnits(nullptr);
  validateProblem(p);
  return p;
}

Problem parseTptpFile(const std::string& path, const TptpOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path, 0, 0, "cannot open file");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  Problem p;
  std::set<std::string> active;
  std::error_code ec;
  std::string canonical = std::filesystem::weakly_canonical(path, ec).string();
  if (ec) canonical = path;
  active.insert(canonical);
  TptpUnitParser parser(p, opts, active, path, buffer.str());
  parser.parseUnits(nullptr);
  validateProblem(p);
  return p;
}

} // namespace peregrine
