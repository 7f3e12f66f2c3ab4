#include "parse/SmtlibParser.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "kernel/Builtins.hpp"
#include "kernel/Unify.hpp"
#include "parse/Formula.hpp"

namespace peregrine {

namespace {

// ---- S-expression reader ----

struct SExpr {
  enum class Kind : uint8_t { Symbol, Numeral, Decimal, String, Keyword, List };
  Kind kind = Kind::List;
  std::string text;
  std::vector<SExpr> items;
  unsigned line = 1;
  unsigned col = 1;

  bool isSymbol() const { return kind == Kind::Symbol; }
  bool isSymbol(const char* s) const { return kind == Kind::Symbol && text == s; }
  bool isList() const { return kind == Kind::List; }
};

class SExprReader {
public:
  SExprReader(std::string text, std::string file)
      : _text(std::move(text)), _file(std::move(file)) {}

  std::vector<SExpr> readAll() {
    std::vector<SExpr> out;
    skipSpace();
    while (_pos < _text.size()) {
      out.push_back(read());
      skipSpace();
    }
    return out;
  }

private:
  [[noreturn]] void fail(unsigned line, unsigned col, const std::string& what) {
    throw ParseError(_file, line, col, what);
  }

  void advance() {
    if (_text[_pos] == '\n') {
      ++_line;
      _col = 1;
    } else {
      ++_col;
    }
    ++_pos;
  }

  void skipSpace() {
    while (_pos < _text.size()) {
      char c = _text[_pos];
      if (c == ';') {
        while (_pos < _text.size() && _text[_pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  static bool atomChar(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' &&
           c != ';' && c != '"' && c != '|';
  }

  SExpr read() {
    skipSpace();
    if (_pos >= _text.size()) fail(_line, _col, "unexpected end of input");
    SExpr e;
    e.line = _line;
    e.col = _col;
    char c = _text[_pos];
    if (c == '(') {
      advance();
      e.kind = SExpr::Kind::List;
      skipSpace();
      while (_pos < _text.size() && _text[_pos] != ')') {
        e.items.push_back(read());
        skipSpace();
      }
      if (_pos >= _text.size()) fail(e.line, e.col, "unclosed '('");
      advance();
      return e;
    }
    if (c == ')') fail(_line, _col, "unexpected ')'");
    if (c == '|') {
      advance();
      e.kind = SExpr::Kind::Symbol;
      while (_pos < _text.size() && _text[_pos] != '|') {
        e.text += _text[_pos];
        advance();
      }
      if (_pos >= _text.size()) fail(e.line, e.col, "unclosed '|'");
      advance();
      return e;
    }
    if (c == '"') {
      advance();
      e.kind = SExpr::Kind::String;
      while (_pos < _text.size()) {
        if (_text[_pos] == '"') {
          if (_pos + 1 < _text.size() && _text[_pos + 1] == '"') {
            e.text += '"';
            advance();
            advance();
            continue;
          }
          advance();
          return e;
        }
        e.text += _text[_pos];
        advance();
      }
      fail(e.line, e.col, "unclosed string literal");
    }
    while (_pos < _text.size() && atomChar(_text[_pos])) {
      e.text += _text[_pos];
      advance();
    }
    if (e.text.empty()) fail(e.line, e.col, std::string("stray character '") + c + "'");
    if (e.text[0] == ':') {
      e.kind = SExpr::Kind::Keyword;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(e.text[0]))) {
      bool digitsOnly = true;
      bool decimal = false;
      for (size_t i = 0; i < e.text.size(); ++i) {
        char d = e.text[i];
        if (d == '.' && !decimal && i + 1 < e.text.size()) {
          decimal = true;
        } else if (!std::isdigit(static_cast<unsigned char>(d))) {
          digitsOnly = false;
          break;
        }
      }
      if (digitsOnly) {
        e.kind = decimal ? SExpr::Kind::Decimal : SExpr::Kind::Numeral;
        return e;
      }
      fail(e.line, e.col, "malformed numeral '" + e.text + "'");
    }
    e.kind = SExpr::Kind::Symbol;
    return e;
  }

  std::string _text;
  std::string _file;
  size_t _pos = 0;
  unsigned _line = 1;
  unsigned _col = 1;
};

// ---- Script interpretation ----

const char* kReservedNames[] = {
    "true", "false", "and", "or",  "not", "=>",  "ite", "let",  "forall", "exists",
    "par",  "as",    "!",   "_",   "=",   "distinct", "<", "<=", ">",     ">=",
    "+",    "-",     "*",   "/",   "div", "mod", "abs", "Bool", "Int",    "Real"};

bool isReservedName(const std::string& s) {
  for (const char* r : kReservedNames) {
    if (s == r) return true;
  }
  return false;
}

struct DefineFun {
  std::vector<std::pair<std::string, TermPtr>> params;
  TermPtr resultSort;
  SExpr body;
};

struct SelectorInfo {
  SymbolId selector;
  SymbolId ctor;
  unsigned index;
};

class SmtlibParser {
public:
  SmtlibParser(std::string file) : _file(std::move(file)) {
    _prob.fromSmtlib = true;
  }

  Problem run(const std::vector<SExpr>& commands) {
    for (const SExpr& cmd : commands) {
      if (!runCommand(cmd)) break;
    }
    appendSelectorAxioms();
    validateProblem(_prob);
    return std::move(_prob);
  }

private:
  [[noreturn]] void fail(const SExpr& at, const std::string& what) {
    throw ParseError(_file, at.line, at.col, what);
  }

  std::string where(const SExpr& at) const {
    return _file + ":" + std::to_string(at.line) + ":" + std::to_string(at.col) + ": ";
  }

  // ---- commands ----

  bool runCommand(const SExpr& cmd) {
    if (!cmd.isList() || cmd.items.empty() || !cmd.items[0].isSymbol()) {
      fail(cmd, "expected a command");
    }
    const std::string& head = cmd.items[0].text;
    if (head == "set-logic" || head == "set-info" || head == "set-option" ||
        head == "get-info" || head == "get-model" || head == "get-proof" ||
        head == "get-unsat-core" || head == "echo") {
      return true;
    }
    if (head == "exit") return false;
    if (head == "check-sat") {
      if (_checkSatSeen) {
        throw UnsupportedError(where(cmd) + "incremental scripts with several check-sat");
      }
      _checkSatSeen = true;
      return true;
    }
    if (head == "declare-sort") return cmdDeclareSort(cmd);
    if (head == "declare-datatypes") return cmdDeclareDatatypes(cmd);
    if (head == "declare-datatype") return cmdDeclareDatatype(cmd);
    if (head == "declare-fun") return cmdDeclareFun(cmd);
    if (head == "declare-const") return cmdDeclareConst(cmd);
    if (head == "define-fun") return cmdDefineFun(cmd);
    if (head == "assert") return cmdAssert(cmd);
    if (head == "push" || head == "pop" || head == "reset" || head == "define-fun-rec" ||
        head == "define-funs-rec") {
      throw UnsupportedError(where(cmd) + "the " + head + " command is not supported");
    }
    throw UnsupportedError(where(cmd) + "unknown command '" + head + "'");
  }

  const std::string& symbolText(const SExpr& e, const char* what) {
    if (!e.isSymbol()) fail(e, std::string("expected ") + what);
    return e.text;
  }

  unsigned numeralValue(const SExpr& e) {
    if (e.kind != SExpr::Kind::Numeral) fail(e, "expected a numeral");
    return static_cast<unsigned>(std::stoul(e.text));
  }

  void checkDeclarable(const SExpr& at, const std::string& name) {
    if (isReservedName(name)) {
      throw UnsupportedError(where(at) + "'" + name + "' shadows a builtin name");
    }
    if (_prob.sig.lookup(name) || _defines.count(name)) {
      throw SortError(where(at) + "'" + name + "' is already declared");
    }
  }

  bool cmdDeclareSort(const SExpr& cmd) {
    if (cmd.items.size() != 3) fail(cmd, "declare-sort takes a name and an arity");
    const std::string& name = symbolText(cmd.items[1], "a sort name");
    unsigned arity = numeralValue(cmd.items[2]);
    if (name == "$i" && arity == 0) return true;
    checkDeclarable(cmd.items[1], name);
    _prob.sig.declare(name, SymbolKind::SortCtor, arity, {}, Term::tType());
    return true;
  }

  bool cmdDeclareDatatypes(const SExpr& cmd) {
    if (cmd.items.size() != 3 || !cmd.items[1].isList() || !cmd.items[2].isList()) {
      fail(cmd, "declare-datatypes takes a sort list and a declaration list");
    }
    const auto& sortDecls = cmd.items[1].items;
    const auto& dtDecls = cmd.items[2].items;
    if (sortDecls.size() != dtDecls.size() || sortDecls.empty()) {
      fail(cmd, "declare-datatypes needs one declaration per sort");
    }
    std::vector<SymbolId> sortIds;
    std::vector<unsigned> arities;
    for (const SExpr& sd : sortDecls) {
      if (!sd.isList() || sd.items.size() != 2) fail(sd, "expected (name arity)");
      const std::string& name = symbolText(sd.items[0], "a sort name");
      unsigned arity = numeralValue(sd.items[1]);
      checkDeclarable(sd.items[0], name);
      sortIds.push_back(_prob.sig.declare(name, SymbolKind::SortCtor, arity, {}, Term::tType()));
      arities.push_back(arity);
    }
    for (size_t i = 0; i < dtDecls.size(); ++i) {
      declareDatatypeBody(sortIds[i], arities[i], dtDecls[i]);
    }
    return true;
  }

  bool cmdDeclareDatatype(const SExpr& cmd) {
    if (cmd.items.size() != 3) fail(cmd, "declare-datatype takes a name and a declaration");
    const std::string& name = symbolText(cmd.items[1], "a sort name");
    checkDeclarable(cmd.items[1], name);
    unsigned arity = 0;
    if (cmd.items[2].isList() && !cmd.items[2].items.empty() &&
        cmd.items[2].items[0].isSymbol("par")) {
      if (cmd.items[2].items.size() != 3 || !cmd.items[2].items[1].isList()) {
        fail(cmd.items[2], "expected (par (vars) (constructors))");
      }
      arity = static_cast<unsigned>(cmd.items[2].items[1].items.size());
    }
    SymbolId id = _prob.sig.declare(name, SymbolKind::SortCtor, arity, {}, Term::tType());
    declareDatatypeBody(id, arity, cmd.items[2]);
    return true;
  }

  void declareDatatypeBody(SymbolId sortCtor, unsigned arity, const SExpr& decl) {
    const SExpr* ctorList = &decl;
    size_t scopeMark = _sortVars.size();
    if (decl.isList() && !decl.items.empty() && decl.items[0].isSymbol("par")) {
      if (decl.items.size() != 3 || !decl.items[1].isList() || !decl.items[2].isList()) {
        fail(decl, "expected (par (vars) (constructors))");
      }
      if (decl.items[1].items.size() != arity) {
        fail(decl, "datatype arity does not match its par binder");
      }
      for (unsigned j = 0; j < arity; ++j) {
        _sortVars.emplace_back(symbolText(decl.items[1].items[j], "a sort variable"),
                               Term::mkSortVar(j));
      }
      ctorList = &decl.items[2];
    } else if (arity != 0) {
      fail(decl, "a parametric datatype needs a par declaration");
    }
    if (!ctorList->isList() || ctorList->items.empty()) {
      fail(*ctorList, "a datatype needs at least one constructor");
    }
    std::vector<TermPtr> resultArgs;
    for (unsigned j = 0; j < arity; ++j) resultArgs.push_back(Term::mkSortVar(j));
    TermPtr result = Term::mkApp(_prob.sig, sortCtor, resultArgs, {});
    std::vector<SymbolId> ctors;
    for (const SExpr& cd : ctorList->items) {
      const SExpr* nameExpr = &cd;
      std::vector<std::pair<const SExpr*, TermPtr>> fields;
      if (cd.isList()) {
        if (cd.items.empty()) fail(cd, "empty constructor declaration");
        nameExpr = &cd.items[0];
        for (size_t i = 1; i < cd.items.size(); ++i) {
          const SExpr& field = cd.items[i];
          if (!field.isList() || field.items.size() != 2) {
            fail(field, "expected (selector sort)");
          }
          fields.emplace_back(&field.items[0], parseSort(field.items[1]));
        }
      }
      const std::string& cname = symbolText(*nameExpr, "a constructor name");
      checkDeclarable(*nameExpr, cname);
      std::vector<TermPtr> argSorts;
      for (const auto& f : fields) argSorts.push_back(f.second);
      SymbolId ctor = _prob.sig.declare(cname, SymbolKind::Function, arity, argSorts, result);
      ctors.push_back(ctor);
      for (size_t i = 0; i < fields.size(); ++i) {
        const std::string& sname = symbolText(*fields[i].first, "a selector name");
        checkDeclarable(*fields[i].first, sname);
        SymbolId sel =
            _prob.sig.declare(sname, SymbolKind::Function, arity, {result}, fields[i].second);
        _selectors.push_back({sel, ctor, static_cast<unsigned>(i)});
      }
    }
    _sortVars.resize(scopeMark);
    _prob.sig.addDatatype(sortCtor, std::move(ctors));
  }

  bool cmdDeclareFun(const SExpr& cmd) {
    if (cmd.items.size() == 3 && cmd.items[2].isList() && !cmd.items[2].items.empty() &&
        cmd.items[2].items[0].isSymbol("par")) {
      const SExpr& par = cmd.items[2];
      if (par.items.size() != 4 || !par.items[1].isList() || !par.items[2].isList()) {
        fail(par, "expected (par (vars) (argument sorts) result)");
      }
      declareFun(cmd.items[1], par.items[1].items, par.items[2].items, par.items[3]);
      return true;
    }
    if (cmd.items.size() != 4 || !cmd.items[2].isList()) {
      fail(cmd, "declare-fun takes a name, argument sorts and a result sort");
    }
    declareFun(cmd.items[1], {}, cmd.items[2].items, cmd.items[3]);
    return true;
  }

  bool cmdDeclareConst(const SExpr& cmd) {
    if (cmd.items.size() != 3) fail(cmd, "declare-const takes a name and a sort");
    if (cmd.items[2].isList() && !cmd.items[2].items.empty() &&
        cmd.items[2].items[0].isSymbol("par")) {
      const SExpr& par = cmd.items[2];
      if (par.items.size() != 3 || !par.items[1].isList()) {
        fail(par, "expected (par (vars) sort)");
      }
      declareFun(cmd.items[1], par.items[1].items, {}, par.items[2]);
      return true;
    }
    declareFun(cmd.items[1], {}, {}, cmd.items[2]);
    return true;
  }

  void declareFun(const SExpr& nameExpr, const std::vector<SExpr>& sortVars,
                  const std::vector<SExpr>& argExprs, const SExpr& resultExpr) {
    const std::string& name = symbolText(nameExpr, "a function name");
    checkDeclarable(nameExpr, name);
    size_t scopeMark = _sortVars.size();
    for (size_t j = 0; j < sortVars.size(); ++j) {
      _sortVars.emplace_back(symbolText(sortVars[j], "a sort variable"),
                             Term::mkSortVar(static_cast<unsigned>(j)));
    }
    std::vector<TermPtr> argSorts;
    for (const SExpr& a : argExprs) argSorts.push_back(parseSort(a));
    TermPtr result = parseSort(resultExpr);
    _sortVars.resize(scopeMark);
    SymbolKind kind = Term::equal(result, Term::boolSort()) ? SymbolKind::Predicate
                                                            : SymbolKind::Function;
    if (kind == SymbolKind::Predicate) result = Term::boolSort();
    _prob.sig.declare(name, kind, static_cast<unsigned>(sortVars.size()), std::move(argSorts),
                      result);
  }

  bool cmdDefineFun(const SExpr& cmd) {
    if (cmd.items.size() != 5 || !cmd.items[2].isList()) {
      fail(cmd, "define-fun takes a name, parameters, a result sort and a body");
    }
    const std::string& name = symbolText(cmd.items[1], "a function name");
    checkDeclarable(cmd.items[1], name);
    DefineFun def;
    for (const SExpr& p : cmd.items[2].items) {
      if (!p.isList() || p.items.size() != 2) fail(p, "expected (parameter sort)");
      def.params.emplace_back(symbolText(p.items[0], "a parameter name"),
                              parseSort(p.items[1]));
    }
    def.resultSort = parseSort(cmd.items[3]);
    def.body = cmd.items[4];
    _defines.emplace(name, std::move(def));
    return true;
  }

  bool cmdAssert(const SExpr& cmd) {
    if (cmd.items.size() != 2) fail(cmd, "assert takes one formula");
    const SExpr* body = &cmd.items[1];
    std::string name = "assertion_" + std::to_string(_assertCounter++);
    while (body->isList() && !body->items.empty() && body->items[0].isSymbol("!")) {
      for (size_t i = 2; i < body->items.size(); ++i) {
        const SExpr& attr = body->items[i];
        if (attr.kind == SExpr::Kind::Keyword && attr.text == ":named" &&
            i + 1 < body->items.size() && body->items[i + 1].isSymbol()) {
          name = body->items[i + 1].text;
        }
      }
      if (body->items.size() < 2) fail(*body, "empty annotation");
      body = &body->items[1];
    }
    _varCounter = 0;
    std::vector<unsigned> parVars;
    size_t scopeMark = _sortVars.size();
    while (body->isList() && !body->items.empty() && body->items[0].isSymbol("par")) {
      if (body->items.size() != 3 || !body->items[1].isList()) {
        fail(*body, "expected (par (vars) formula)");
      }
      for (const SExpr& v : body->items[1].items) {
        unsigned id = _varCounter++;
        _sortVars.emplace_back(symbolText(v, "a sort variable"), Term::mkSortVar(id));
        parVars.push_back(id);
      }
      body = &body->items[2];
    }
    FormulaPtr f = parseFormula(*body);
    _sortVars.resize(scopeMark);
    for (size_t i = parVars.size(); i-- > 0;) {
      f = Formula::mkQuant(Connective::SortForall, parVars[i], Term::tType(), std::move(f));
    }
    _prob.formulas.push_back({std::move(name), FormulaRole::Axiom, std::move(f), false});
    return true;
  }

  // ---- sorts ----

  TermPtr parseSort(const SExpr& e) {
    if (e.isSymbol()) {
      if (e.text == "Bool") return Term::boolSort();
      if (e.text == "Int") return Term::intSort();
      if (e.text == "Real") return Term::realSort();
      if (e.text == "$i") return Term::indSort();
      for (size_t i = _sortVars.size(); i-- > 0;) {
        if (_sortVars[i].first == e.text) return _sortVars[i].second;
      }
      auto id = _prob.sig.lookup(e.text);
      if (!id || _prob.sig[*id].kind != SymbolKind::SortCtor) {
        fail(e, "unknown sort '" + e.text + "'");
      }
      if (_prob.sig[*id].sortArity != 0) {
        throw SortError(where(e) + "sort '" + e.text + "' expects arguments");
      }
      return Term::mkApp(_prob.sig, *id, {}, {});
    }
    if (!e.isList() || e.items.empty() || !e.items[0].isSymbol()) {
      fail(e, "expected a sort");
    }
    auto id = _prob.sig.lookup(e.items[0].text);
    if (!id || _prob.sig[*id].kind != SymbolKind::SortCtor) {
      fail(e.items[0], "unknown sort '" + e.items[0].text + "'");
    }
    if (_prob.sig[*id].sortArity != e.items.size() - 1) {
      throw SortError(where(e) + "sort '" + e.items[0].text + "' applied to " +
                      std::to_string(e.items.size() - 1) + " arguments, expected " +
                      std::to_string(_prob.sig[*id].sortArity));
    }
    std::vector<TermPtr> args;
    for (size_t i = 1; i < e.items.size(); ++i) args.push_back(parseSort(e.items[i]));
    return Term::mkApp(_prob.sig, *id, std::move(args), {});
  }

  // ---- terms ----

  TermPtr coerceNumeral(const TermPtr& t, const TermPtr& want) const {
    if (t && t->tag() == Term::Tag::Num && Term::equal(t->sort(), Term::intSort()) &&
        Term::equal(want, Term::realSort())) {
      return Term::mkNum(t->number(), false);
    }
    return nullptr;
  }

  bool isNumericSort(const TermPtr& s) const {
    return Term::equal(s, Term::intSort()) || Term::equal(s, Term::realSort());
  }

  /** Brings all operands of an arithmetic operator to one numeric sort. */
  bool alignArith(const SExpr& at, std::vector<TermPtr>& args) {
    bool allInt = true;
    for (const TermPtr& a : args) {
      if (!isNumericSort(a->sort())) {
        throw SortError(where(at) + "arithmetic over a non-numeric sort");
      }
      if (!Term::equal(a->sort(), Term::intSort())) allInt = false;
    }
    if (allInt) return true;
    for (TermPtr& a : args) {
      if (Term::equal(a->sort(), Term::intSort())) {
        TermPtr c = coerceNumeral(a, Term::realSort());
        if (!c) throw SortError(where(at) + "mixed Int/Real arithmetic");
        a = c;
      }
    }
    return false;
  }

  std::vector<TermPtr> parseArgs(const SExpr& e, size_t from) {
    std::vector<TermPtr> out;
    for (size_t i = from; i < e.items.size(); ++i) out.push_back(parseTerm(e.items[i]));
    return out;
  }

  void needArgs(const SExpr& e, size_t n) {
    if (e.items.size() - 1 < n) {
      fail(e, "'" + e.items[0].text + "' needs at least " + std::to_string(n) +
                  " arguments");
    }
  }

  TermPtr mkFool(SymbolId f, std::vector<TermPtr> sortArgs, std::vector<TermPtr> args) {
    return Term::mkApp(_prob.sig, f, std::move(sortArgs), std::move(args));
  }

  TermPtr requireBool(const SExpr& at, TermPtr t) {
    if (!Term::equal(t->sort(), Term::boolSort())) {
      throw SortError(where(at) + "expected a Boolean term");
    }
    return t;
  }

  /** Equality of two already-parsed terms, coercing numerals across sorts. */
  std::pair<TermPtr, TermPtr> alignPair(const SExpr& at, TermPtr a, TermPtr b) {
    if (!Term::equal(a->sort(), b->sort())) {
      if (TermPtr c = coerceNumeral(a, b->sort())) {
        a = c;
      } else if (TermPtr c2 = coerceNumeral(b, a->sort())) {
        b = c2;
      } else {
        throw SortError(where(at) + "equality between different sorts");
      }
    }
    return {std::move(a), std::move(b)};
  }

  TermPtr parseTerm(const SExpr& e) {
    switch (e.kind) {
      case SExpr::Kind::Numeral:
        return Term::mkNum(Rational(Integer(e.text)), true);
      case SExpr::Kind::Decimal:
        return Term::mkNum(rationalFromDecimal(e.text), false);
      case SExpr::Kind::String:
      case SExpr::Kind::Keyword:
        fail(e, "expected a term");
      case SExpr::Kind::Symbol:
        return parseSymbolTerm(e);
      case SExpr::Kind::List:
        break;
    }
    if (e.items.empty()) fail(e, "expected a term");
    if (e.items[0].isList()) {
      TermPtr qualified = parseQualified(e.items[0], &e);
      if (qualified) return qualified;
      fail(e.items[0], "expected a function symbol");
    }
    const std::string& head = e.items[0].text;
    if (head == "as") {
      TermPtr qualified = parseQualified(e, nullptr);
      if (qualified) return qualified;
      fail(e, "expected (as name sort)");
    }
    if (head == "let") {
      size_t scopeMark = pushLetBindings(e);
      TermPtr body = parseTerm(e.items[2]);
      _scope.resize(scopeMark);
      return body;
    }
    if (head == "forall" || head == "exists") {
      fail(e, "quantifiers are not supported inside terms");
    }
    if (head == "ite") {
      needArgs(e, 3);
      if (e.items.size() != 4) fail(e, "ite takes three arguments");
      TermPtr cond = requireBool(e.items[1], parseTerm(e.items[1]));
      auto [a, b] = alignPair(e, parseTerm(e.items[2]), parseTerm(e.items[3]));
      TermPtr sort = a->sort();
      return mkFool(SYM_FOOL_ITE, {std::move(sort)}, {std::move(cond), std::move(a), std::move(b)});
    }
    if (head == "and" || head == "or") {
      if (e.items.size() == 1) return head == "and" ? Term::trueTerm() : Term::falseTerm();
      SymbolId f = head == "and" ? SYM_FOOL_AND : SYM_FOOL_OR;
      TermPtr acc = requireBool(e.items[1], parseTerm(e.items[1]));
      for (size_t i = 2; i < e.items.size(); ++i) {
        acc = mkFool(f, {}, {std::move(acc), requireBool(e.items[i], parseTerm(e.items[i]))});
      }
      return acc;
    }
    if (head == "not") {
      if (e.items.size() != 2) fail(e, "not takes one argument");
      return mkFool(SYM_FOOL_NOT, {}, {requireBool(e.items[1], parseTerm(e.items[1]))});
    }
    if (head == "=>") {
      needArgs(e, 2);
      std::vector<TermPtr> args = parseArgs(e, 1);
      TermPtr acc = requireBool(e.items.back(), args.back());
      for (size_t i = args.size() - 1; i-- > 0;) {
        acc = mkFool(SYM_FOOL_IMP, {},
                     {requireBool(e.items[i + 1], args[i]), std::move(acc)});
      }
      return acc;
    }
    if (head == "=" || head == "distinct") {
      needArgs(e, 2);
      std::vector<TermPtr> args = parseArgs(e, 1);
      std::vector<TermPtr> atoms;
      for (size_t i = 0; i + 1 < args.size(); ++i) {
        for (size_t j = i + 1; j < args.size(); ++j) {
          if (head == "=" && j != i + 1) continue;
          auto [a, b] = alignPair(e, args[i], args[j]);
          TermPtr sort = a->sort();
          TermPtr eq = mkFool(SYM_FOOL_EQ, {std::move(sort)}, {std::move(a), std::move(b)});
          if (head == "distinct") eq = mkFool(SYM_FOOL_NOT, {}, {std::move(eq)});
          atoms.push_back(std::move(eq));
        }
      }
      TermPtr acc = atoms[0];
      for (size_t i = 1; i < atoms.size(); ++i) {
        acc = mkFool(SYM_FOOL_AND, {}, {std::move(acc), std::move(atoms[i])});
      }
      return acc;
    }
    if (head == "+" || head == "*") {
      needArgs(e, 2);
      std::vector<TermPtr> args = parseArgs(e, 1);
      bool isInt = alignArith(e, args);
      SymbolId f = head == "+" ? Signature::addFor(isInt) : Signature::mulFor(isInt);
      TermPtr acc = args[0];
      for (size_t i = 1; i < args.size(); ++i) {
        acc = Term::mkApp(_prob.sig, f, {}, {std::move(acc), std::move(args[i])});
      }
      return acc;
    }
    if (head == "-") {
      needArgs(e, 1);
      std::vector<TermPtr> args = parseArgs(e, 1);
      bool isInt = alignArith(e, args);
      if (args.size() == 1) return negate(args[0], isInt);
      TermPtr acc = args[0];
      for (size_t i = 1; i < args.size(); ++i) {
        acc = Term::mkApp(_prob.sig, Signature::addFor(isInt), {},
                          {std::move(acc), negate(args[i], isInt)});
      }
      return acc;
    }
    if (head == "/") {
      needArgs(e, 2);
      std::vector<TermPtr> args = parseArgs(e, 1);
      for (TermPtr& a : args) {
        if (TermPtr c = coerceNumeral(a, Term::realSort())) a = c;
        if (!Term::equal(a->sort(), Term::realSort())) {
          throw SortError(where(e) + "'/' is division on Real");
        }
      }
      TermPtr acc = args[0];
      for (size_t i = 1; i < args.size(); ++i) acc = quotient(e, acc, args[i]);
      return acc;
    }
    if (head == "<" || head == "<=" || head == ">" || head == ">=") {
      needArgs(e, 2);
      if (e.items.size() != 3) fail(e, "chained comparisons are only supported as formulas");
      std::vector<TermPtr> args = parseArgs(e, 1);
      bool isInt = alignArith(e, args);
      bool strict = head == "<" || head == ">";
      SymbolId p = strict ? Signature::lessFor(isInt) : Signature::leqFor(isInt);
      if (head == ">" || head == ">=") std::swap(args[0], args[1]);
      return Term::mkApp(_prob.sig, p, {}, {std::move(args[0]), std::move(args[1])});
    }
    if (head == "div" || head == "mod" || head == "abs" || head == "to_int" ||
        head == "is_int") {
      throw UnsupportedError(where(e) + "the '" + head + "' operator is not supported");
    }
    if (head == "to_real") {
      if (e.items.size() != 2) fail(e, "to_real takes one argument");
      TermPtr a = parseTerm(e.items[1]);
      if (Term::equal(a->sort(), Term::realSort())) return a;
      if (TermPtr c = coerceNumeral(a, Term::realSort())) return c;
      throw UnsupportedError(where(e) + "to_real of a non-numeral term");
    }
    if (head == "_") {
      throw UnsupportedError(where(e) + "indexed identifiers are not supported");
    }
    return applySymbol(e.items[0], parseArgs(e, 1), nullptr);
  }

  TermPtr negate(const TermPtr& a, bool isInt) {
    if (a->tag() == Term::Tag::Num) {
      Rational n = -a->number();
      return Term::mkNum(n, isInt);
    }
    return Term::mkApp(_prob.sig, Signature::negFor(isInt), {}, {a});
  }

  TermPtr quotient(const SExpr& at, const TermPtr& a, const TermPtr& b) {
    if (b->tag() != Term::Tag::Num) {
      throw UnsupportedError(where(at) + "division by a non-numeral is not linear");
    }
    if (b->number() == 0) throw SortError(where(at) + "division by zero");
    if (a->tag() == Term::Tag::Num) {
      Rational q = a->number() / b->number();
      return Term::mkNum(q, false);
    }
    Rational inv = Rational(1) / b->number();
    return Term::mkApp(_prob.sig, SYM_MUL_R, {}, {Term::mkNum(inv, false), a});
  }

  TermPtr parseSymbolTerm(const SExpr& e) {
    for (size_t i = _scope.size(); i-- > 0;) {
      if (_scope[i].first == e.text) return _scope[i].second;
    }
    if (e.text == "true") return Term::trueTerm();
    if (e.text == "false") return Term::falseTerm();
    auto def = _defines.find(e.text);
    if (def != _defines.end()) return applyDefine(e, def->second, {});
    return applySymbol(e, {}, nullptr);
  }

  /** Handles (as f sort) heads; returns null when the list is no qualifier. */
  TermPtr parseQualified(const SExpr& head, const SExpr* app) {
    if (head.items.empty() || !head.items[0].isSymbol()) return nullptr;
    if (head.items[0].text == "_") {
      throw UnsupportedError(where(head) + "indexed identifiers are not supported");
    }
    if (head.items[0].text != "as") return nullptr;
    if (head.items.size() != 3 || !head.items[1].isSymbol()) {
      fail(head, "expected (as name sort)");
    }
    TermPtr target = parseSort(head.items[2]);
    std::vector<TermPtr> args = app ? parseArgs(*app, 1) : std::vector<TermPtr>();
    return applySymbol(head.items[1], std::move(args), &target);
  }

  TermPtr applySymbol(const SExpr& nameExpr, std::vector<TermPtr> args,
                      const TermPtr* asSort) {
    const std::string& name = nameExpr.text;
    auto def = _defines.find(name);
    if (def != _defines.end()) return applyDefine(nameExpr, def->second, std::move(args));
    auto id = _prob.sig.lookup(name);
    if (!id) fail(nameExpr, "unknown symbol '" + name + "'");
    const SymbolDecl& d = _prob.sig[*id];
    if (d.kind == SymbolKind::SortCtor) {
      throw SortError(where(nameExpr) + "sort '" + name + "' used as a term");
    }
    if (d.arity() != args.size()) {
      throw SortError(where(nameExpr) + "'" + name + "' applied to " +
                      std::to_string(args.size()) + " arguments, expected " +
                      std::to_string(d.arity()));
    }
    for (size_t i = 0; i < args.size(); ++i) {
      if (TermPtr c = coerceNumeral(args[i], d.argSorts[i])) args[i] = c;
    }
    std::vector<std::pair<TermPtr, TermPtr>> pairs;
    if (asSort) pairs.emplace_back(d.resultSort, *asSort);
    for (size_t i = 0; i < args.size(); ++i) {
      pairs.emplace_back(d.argSorts[i], args[i]->sort());
    }
    auto match = matchTerms(pairs);
    if (!match) {
      throw SortError(where(nameExpr) + "arguments of '" + name + "' are ill-sorted");
    }
    std::vector<TermPtr> sortArgs;
    for (unsigned j = 0; j < d.sortArity; ++j) {
      const TermPtr* bound = match->lookup(j);
      if (!bound) {
        throw SortError(where(nameExpr) + "cannot infer the sort arguments of '" + name +
                        "'; qualify it with (as " + name + " <sort>)");
      }
      sortArgs.push_back(*bound);
    }
    return Term::mkApp(_prob.sig, *id, std::move(sortArgs), std::move(args));
  }

  TermPtr applyDefine(const SExpr& at, const DefineFun& def, std::vector<TermPtr> args) {
    if (args.size() != def.params.size()) {
      throw SortError(where(at) + "'" + at.text + "' applied to " +
                      std::to_string(args.size()) + " arguments, expected " +
                      std::to_string(def.params.size()));
    }
    size_t scopeMark = _scope.size();
    for (size_t i = 0; i < args.size(); ++i) {
      if (TermPtr c = coerceNumeral(args[i], def.params[i].second)) args[i] = c;
      if (!Term::equal(args[i]->sort(), def.params[i].second)) {
        throw SortError(where(at) + "argument " + std::to_string(i + 1) + " of '" + at.text +
                        "' is ill-sorted");
      }
      _scope.emplace_back(def.params[i].first, args[i]);
    }
    TermPtr body = parseTerm(def.body);
    _scope.resize(scopeMark);
    if (TermPtr c = coerceNumeral(body, def.resultSort)) body = c;
    if (!Term::equal(body->sort(), def.resultSort)) {
      throw SortError(where(at) + "the body of '" + at.text +
                      "' does not match its declared result sort");
    }
    return body;
  }

  /** Parses let values in the outer scope, then binds them all at once. */
  size_t pushLetBindings(const SExpr& e) {
    if (e.items.size() != 3 || !e.items[1].isList()) {
      fail(e, "expected (let ((name value) ...) body)");
    }
    std::vector<std::pair<std::string, TermPtr>> bindings;
    for (const SExpr& b : e.items[1].items) {
      if (!b.isList() || b.items.size() != 2) fail(b, "expected (name value)");
      bindings.emplace_back(symbolText(b.items[0], "a let binding"), parseTerm(b.items[1]));
    }
    size_t scopeMark = _scope.size();
    for (auto& b : bindings) _scope.push_back(std::move(b));
    return scopeMark;
  }

  // ---- formulas ----

  FormulaPtr termAsFormula(const SExpr& at, TermPtr t) {
    requireBool(at, t);
    return boolTermToFormula(t, _prob.sig);
  }

  FormulaPtr parseFormula(const SExpr& e) {
    if (e.isSymbol("true")) return Formula::mkTruth(true);
    if (e.isSymbol("false")) return Formula::mkTruth(false);
    if (!e.isList() || e.items.empty() || !e.items[0].isSymbol()) {
      return termAsFormula(e, parseTerm(e));
    }
    const std::string& head = e.items[0].text;
    if (head == "and" || head == "or") {
      Connective c = head == "and" ? Connective::And : Connective::Or;
      if (e.items.size() == 1) return Formula::mkTruth(head == "and");
      std::vector<FormulaPtr> subs;
      for (size_t i = 1; i < e.items.size(); ++i) subs.push_back(parseFormula(e.items[i]));
      return Formula::mkJunction(c, std::move(subs));
    }
    if (head == "not") {
      if (e.items.size() != 2) fail(e, "not takes one argument");
      return Formula::mkNot(parseFormula(e.items[1]));
    }
    if (head == "=>") {
      needArgs(e, 2);
      FormulaPtr acc = parseFormula(e.items.back());
      for (size_t i = e.items.size() - 1; i-- > 1;) {
        acc = Formula::mkBinary(Connective::Implies, parseFormula(e.items[i]), std::move(acc));
      }
      return acc;
    }
    if (head == "ite") {
      if (e.items.size() != 4) fail(e, "ite takes three arguments");
      FormulaPtr c = parseFormula(e.items[1]);
      FormulaPtr a = parseFormula(e.items[2]);
      FormulaPtr b = parseFormula(e.items[3]);
      std::vector<FormulaPtr> pos;
      pos.push_back(c);
      pos.push_back(std::move(a));
      std::vector<FormulaPtr> neg;
      neg.push_back(Formula::mkNot(std::move(c)));
      neg.push_back(std::move(b));
      std::vector<FormulaPtr> branches;
      branches.push_back(Formula::mkJunction(Connective::And, std::move(pos)));
      branches.push_back(Formula::mkJunction(Connective::And, std::move(neg)));
      return Formula::mkJunction(Connective::Or, std::move(branches));
    }
    if (head == "let") {
      size_t scopeMark = pushLetBindings(e);
      FormulaPtr body = parseFormula(e.items[2]);
      _scope.resize(scopeMark);
      return body;
    }
    if (head == "forall" || head == "exists") {
      if (e.items.size() != 3 || !e.items[1].isList() || e.items[1].items.empty()) {
        fail(e, "expected (" + head + " ((var sort) ...) body)");
      }
      Connective q = head == "forall" ? Connective::Forall : Connective::Exists;
      size_t scopeMark = _scope.size();
      std::vector<std::pair<unsigned, TermPtr>> bound;
      for (const SExpr& b : e.items[1].items) {
        if (!b.isList() || b.items.size() != 2) fail(b, "expected (var sort)");
        TermPtr sort = parseSort(b.items[1]);
        unsigned id = _varCounter++;
        bound.emplace_back(id, sort);
        _scope.emplace_back(symbolText(b.items[0], "a variable"), Term::mkVar(id, sort));
      }
      FormulaPtr body = parseFormula(e.items[2]);
      _scope.resize(scopeMark);
      for (size_t i = bound.size(); i-- > 0;) {
        body = Formula::mkQuant(q, bound[i].first, bound[i].second, std::move(body));
      }
      return body;
    }
    if (head == "par") {
      throw UnsupportedError(where(e) + "par is only allowed at the top of an assertion");
    }
    if (head == "=" || head == "distinct") {
      needArgs(e, 2);
      std::vector<TermPtr> args = parseArgs(e, 1);
      std::vector<FormulaPtr> atoms;
      for (size_t i = 0; i + 1 < args.size(); ++i) {
        for (size_t j = i + 1; j < args.size(); ++j) {
          if (head == "=" && j != i + 1) continue;
          auto [a, b] = alignPair(e, args[i], args[j]);
          // Disequalities print back as (not (= ...)), so build that very
          // shape here to keep parse(print(f)) structurally equal.
          FormulaPtr atom = Formula::mkAtom(Literal::mkEq(a, b, true));
          if (head == "distinct") atom = Formula::mkNot(std::move(atom));
          atoms.push_back(std::move(atom));
        }
      }
      return Formula::mkJunction(Connective::And, std::move(atoms));
    }
    if (head == "<" || head == "<=" || head == ">" || head == ">=") {
      needArgs(e, 2);
      std::vector<TermPtr> args = parseArgs(e, 1);
      bool isInt = alignArith(e, args);
      bool strict = head == "<" || head == ">";
      bool flip = head == ">" || head == ">=";
      SymbolId p = strict ? Signature::lessFor(isInt) : Signature::leqFor(isInt);
      std::vector<FormulaPtr> atoms;
      for (size_t i = 0; i + 1 < args.size(); ++i) {
        TermPtr a = flip ? args[i + 1] : args[i];
        TermPtr b = flip ? args[i] : args[i + 1];
        atoms.push_back(Formula::mkAtom(
            Literal::mkPred(_prob.sig, p, {}, {std::move(a), std::move(b)}, true)));
      }
      return Formula::mkJunction(Connective::And, std::move(atoms));
    }
    return termAsFormula(e, parseTerm(e));
  }

  // ---- selector axioms ----

  static void collectTermSymbols(const TermPtr& t, std::set<SymbolId>& out) {
    switch (t->tag()) {
      case Term::Tag::Var:
      case Term::Tag::Num:
        return;
      case Term::Tag::Let:
        collectTermSymbols(t->letValue(), out);
        collectTermSymbols(t->letBody(), out);
        return;
      case Term::Tag::App:
        break;
    }
    out.insert(t->symbol());
    for (const auto& s : t->sortArgs()) collectTermSymbols(s, out);
    for (const auto& a : t->args()) collectTermSymbols(a, out);
  }

  static void collectFormulaSymbols(const FormulaPtr& f, std::set<SymbolId>& out) {
    if (f->is(Connective::Atom)) {
      const Literal& l = f->atom();
      if (!l.isEquality()) out.insert(l.predicate());
      for (const auto& a : l.args()) collectTermSymbols(a, out);
      return;
    }
    for (const auto& s : f->subs()) collectFormulaSymbols(s, out);
  }

  /**
   * Selectors get defining axioms sel(c(x1..xn)) = xi, but only when the
   * script actually uses the selector; an unused selector would otherwise
   * drag every datatype axiom into saturation.
   */
  void appendSelectorAxioms() {
    if (_selectors.empty()) return;
    std::set<SymbolId> used;
    for (const InputFormula& f : _prob.formulas) collectFormulaSymbols(f.formula, used);
    for (const SelectorInfo& si : _selectors) {
      if (!used.count(si.selector)) continue;
      const SymbolDecl& cd = _prob.sig[si.ctor];
      unsigned k = cd.sortArity;
      std::vector<TermPtr> sortArgs;
      for (unsigned j = 0; j < k; ++j) sortArgs.push_back(Term::mkSortVar(j));
      std::vector<TermPtr> vars;
      for (unsigned i = 0; i < cd.arity(); ++i) {
        vars.push_back(Term::mkVar(k + i, cd.argSorts[i]));
      }
      TermPtr ctorApp = Term::mkApp(_prob.sig, si.ctor, sortArgs, vars);
      TermPtr selApp = Term::mkApp(_prob.sig, si.selector, sortArgs, {std::move(ctorApp)});
      FormulaPtr f = Formula::mkAtom(Literal::mkEq(std::move(selApp), vars[si.index], true));
      for (unsigned i = cd.arity(); i-- > 0;) {
        f = Formula::mkQuant(Connective::Forall, k + i, cd.argSorts[i], std::move(f));
      }
      for (unsigned j = k; j-- > 0;) {
        f = Formula::mkQuant(Connective::SortForall, j, Term::tType(), std::move(f));
      }
      _prob.formulas.push_back({"selector_" + _prob.sig[si.selector].name, FormulaRole::Axiom,
                                std::move(f), true});
    }
  }

  Problem _prob;
  std::string _file;
  std::vector<std::pair<std::string, TermPtr>> _sortVars;
  std::vector<std::pair<std::string, TermPtr>> _scope;
  std::map<std::string, DefineFun> _defines;
  std::vector<SelectorInfo> _selectors;
  unsigned _varCounter = 0;
  unsigned _assertCounter = 0;
  bool _checkSatSeen = false;
};

} // namespace

Problem parseSmtlibString(const std::string& text, const std::string& name) {
  SExprReader reader(text, name);
  SmtlibParser parser(name);
  return parser.run(reader.readAll());
}

Problem parseSmtlibFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseSmtlibString(buf.str(), path);
}

} // namespace peregrine
