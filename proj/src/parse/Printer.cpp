#include "parse/Printer.hpp"

#include <sstream>

#include "kernel/Builtins.hpp"
#include "kernel/Clause.hpp"

namespace peregrine {

namespace {

bool plainLowerWord(const std::string& s) {
  if (s.empty()) return false;
  unsigned char c0 = static_cast<unsigned char>(s[0]);
  if (!((c0 >= 'a' && c0 <= 'z') || c0 >= 0x80)) return false;
  for (char ch : s) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '_' || c >= 0x80)) return false;
  }
  return true;
}

std::string quoteTptp(const std::string& s) {
  if (plainLowerWord(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += "'";
  return out;
}

const char* tptpBuiltin(SymbolId f) {
  switch (f) {
    case SYM_TTYPE: return "$tType";
    case SYM_REAL: return "$real";
    case SYM_INT: return "$int";
    case SYM_BOOL: return "$o";
    case SYM_IND: return "$i";
    case SYM_TRUE: return "$true";
    case SYM_FALSE: return "$false";
    case SYM_ADD_R:
    case SYM_ADD_I: return "$sum";
    case SYM_NEG_R:
    case SYM_NEG_I: return "$uminus";
    case SYM_MUL_R:
    case SYM_MUL_I: return "$product";
    case SYM_LESS_R:
    case SYM_LESS_I: return "$less";
    case SYM_LEQ_R:
    case SYM_LEQ_I: return "$lesseq";
    default: return nullptr;
  }
}

std::string varName(const TermPtr& t) {
  return (t->isSortVar() ? "A" : "X") + std::to_string(t->varId());
}

std::string numTptp(const TermPtr& t) {
  const Rational& q = t->number();
  if (Term::equal(t->sort(), Term::intSort())) {
    return numerator(q).str();
  }
  std::string dec;
  if (rationalToDecimal(q, dec)) return dec;
  return numerator(q).str() + "/" + denominator(q).str();
}

// ---- TPTP ----

std::string formulaTptp(const Signature& sig, const FormulaPtr& f);

std::string termTptp(const Signature& sig, const TermPtr& t) {
  switch (t->tag()) {
    case Term::Tag::Var:
      return varName(t);
    case Term::Tag::Num:
      return numTptp(t);
    case Term::Tag::Let:
      return "$let(" + termTptp(sig, t->letVar()) + " := " + termTptp(sig, t->letValue()) +
             ", " + termTptp(sig, t->letBody()) + ")";
    case Term::Tag::App:
      break;
  }
  SymbolId f = t->symbol();
  if (f == SYM_FOOL_ITE) {
    return "$ite(" + formulaTptp(sig, boolTermToFormula(t->args()[0], sig)) + ", " +
           termTptp(sig, t->args()[1]) + ", " + termTptp(sig, t->args()[2]) + ")";
  }
  if (Signature::isFoolSymbol(f)) {
    // Embedded Boolean structure renders as a parenthesized formula; only
    // $ite conditions produce this and they re-parse through the formula
    // grammar.
    return "(" + formulaTptp(sig, boolTermToFormula(t, sig)) + ")";
  }
  const char* builtin = tptpBuiltin(f);
  std::string out = builtin ? builtin : quoteTptp(sig[f].name);
  if (t->sortArgs().empty() && t->args().empty()) return out;
  out += "(";
  bool first = true;
  for (const auto& s : t->sortArgs()) {
    if (!first) out += ", ";
    out += termTptp(sig, s);
    first = false;
  }
  for (const auto& a : t->args()) {
    if (!first) out += ", ";
    out += termTptp(sig, a);
    first = false;
  }
  out += ")";
  return out;
}

std::string literalTptp(const Signature& sig, const Literal& l) {
  if (l.isEquality()) {
    return termTptp(sig, l.lhs()) + (l.positive() ? " = " : " != ") + termTptp(sig, l.rhs());
  }
  std::string atom = termTptp(sig, l.atomTerm(sig));
  return l.positive() ? atom : "~" + atom;
}

std::string formulaTptp(const Signature& sig, const FormulaPtr& f) {
  switch (f->kind()) {
    case Connective::Atom:
      return literalTptp(sig, f->atom());
    case Connective::True:
      return "$true";
    case Connective::False:
      return "$false";
    case Connective::Not:
      return "~(" + formulaTptp(sig, f->sub(0)) + ")";
    case Connective::And:
    case Connective::Or: {
      const char* op = f->is(Connective::And) ? " & " : " | ";
      std::string out = "(";
      for (size_t i = 0; i < f->subs().size(); ++i) {
        if (i) out += op;
        out += formulaTptp(sig, f->sub(i));
      }
      return out + ")";
    }
    case Connective::Implies:
      return "(" + formulaTptp(sig, f->sub(0)) + " => " + formulaTptp(sig, f->sub(1)) + ")";
    case Connective::Iff:
      return "(" + formulaTptp(sig, f->sub(0)) + " <=> " + formulaTptp(sig, f->sub(1)) + ")";
    case Connective::Forall:
    case Connective::Exists:
    case Connective::SortForall: {
      bool isSort = f->is(Connective::SortForall);
      std::string head = f->is(Connective::Exists) ? "?" : "!";
      std::string var = (isSort ? "A" : "X") + std::to_string(f->boundVar());
      std::string sort = isSort ? "$tType" : termTptp(sig, f->boundSort());
      return head + "[" + var + ": " + sort + "]: " + formulaTptp(sig, f->body());
    }
  }
  return "";
}

// ---- Human ----

std::string formulaHuman(const Signature& sig, const FormulaPtr& f);

std::string termHuman(const Signature& sig, const TermPtr& t) {
  switch (t->tag()) {
    case Term::Tag::Var:
      return varName(t);
    case Term::Tag::Num:
      return numTptp(t);
    case Term::Tag::Let:
      return "$let(" + termHuman(sig, t->letVar()) + " := " + termHuman(sig, t->letValue()) +
             ", " + termHuman(sig, t->letBody()) + ")";
    case Term::Tag::App:
      break;
  }
  SymbolId f = t->symbol();
  switch (f) {
    case SYM_ADD_R:
    case SYM_ADD_I:
      return "(" + termHuman(sig, t->args()[0]) + " + " + termHuman(sig, t->args()[1]) + ")";
    case SYM_MUL_R:
    case SYM_MUL_I:
      return "(" + termHuman(sig, t->args()[0]) + " * " + termHuman(sig, t->args()[1]) + ")";
    case SYM_NEG_R:
    case SYM_NEG_I:
      return "-" + termHuman(sig, t->args()[0]);
    case SYM_LESS_R:
    case SYM_LESS_I:
      return "(" + termHuman(sig, t->args()[0]) + " < " + termHuman(sig, t->args()[1]) + ")";
    case SYM_LEQ_R:
    case SYM_LEQ_I:
      return "(" + termHuman(sig, t->args()[0]) + " <= " + termHuman(sig, t->args()[1]) + ")";
    default:
      break;
  }
  if (f == SYM_FOOL_ITE) {
    return "$ite(" + formulaHuman(sig, boolTermToFormula(t->args()[0], sig)) + ", " +
           termHuman(sig, t->args()[1]) + ", " + termHuman(sig, t->args()[2]) + ")";
  }
  if (Signature::isFoolSymbol(f)) {
    return "(" + formulaHuman(sig, boolTermToFormula(t, sig)) + ")";
  }
  const char* builtin = tptpBuiltin(f);
  std::string out = builtin ? builtin : sig[f].name;
  if (t->sortArgs().empty() && t->args().empty()) return out;
  out += "(";
  bool first = true;
  for (const auto& s : t->sortArgs()) {
    if (!first) out += ",";
    out += termHuman(sig, s);
    first = false;
  }
  for (const auto& a : t->args()) {
    if (!first) out += ",";
    out += termHuman(sig, a);
    first = false;
  }
  return out + ")";
}

std::string literalHuman(const Signature& sig, const Literal& l) {
  if (l.isEquality()) {
    return termHuman(sig, l.lhs()) + (l.positive() ? " = " : " != ") + termHuman(sig, l.rhs());
  }
  SymbolId p = l.predicate();
  if (Signature::isArithPredicate(p)) {
    const char* op = (p == SYM_LESS_R || p == SYM_LESS_I) ? " < " : " <= ";
    std::string atom = termHuman(sig, l.args()[0]) + op + termHuman(sig, l.args()[1]);
    return l.positive() ? atom : "~(" + atom + ")";
  }
  std::string atom = termHuman(sig, l.atomTerm(sig));
  return l.positive() ? atom : "~" + atom;
}

std::string formulaHuman(const Signature& sig, const FormulaPtr& f) {
  switch (f->kind()) {
    case Connective::Atom:
      return literalHuman(sig, f->atom());
    case Connective::True:
      return "$true";
    case Connective::False:
      return "$false";
    case Connective::Not:
      return "~(" + formulaHuman(sig, f->sub(0)) + ")";
    case Connective::And:
    case Connective::Or: {
      const char* op = f->is(Connective::And) ? " & " : " | ";
      std::string out = "(";
      for (size_t i = 0; i < f->subs().size(); ++i) {
        if (i) out += op;
        out += formulaHuman(sig, f->sub(i));
      }
      return out + ")";
    }
    case Connective::Implies:
      return "(" + formulaHuman(sig, f->sub(0)) + " => " + formulaHuman(sig, f->sub(1)) + ")";
    case Connective::Iff:
      return "(" + formulaHuman(sig, f->sub(0)) + " <=> " + formulaHuman(sig, f->sub(1)) + ")";
    case Connective::Forall:
    case Connective::Exists:
    case Connective::SortForall: {
      bool isSort = f->is(Connective::SortForall);
      std::string head = f->is(Connective::Exists) ? "?" : "!";
      std::string var = (isSort ? "A" : "X") + std::to_string(f->boundVar());
      std::string sort = isSort ? "$tType" : termHuman(sig, f->boundSort());
      return head + "[" + var + ": " + sort + "]: " + formulaHuman(sig, f->body());
    }
  }
  return "";
}

// ---- SMT-LIB ----

const char* smtBuiltin(SymbolId f) {
  switch (f) {
    case SYM_REAL: return "Real";
    case SYM_INT: return "Int";
    case SYM_BOOL: return "Bool";
    case SYM_IND: return "$i";
    case SYM_TRUE: return "true";
    case SYM_FALSE: return "false";
    case SYM_ADD_R:
    case SYM_ADD_I: return "+";
    case SYM_NEG_R:
    case SYM_NEG_I: return "-";
    case SYM_MUL_R:
    case SYM_MUL_I: return "*";
    case SYM_LESS_R:
    case SYM_LESS_I: return "<";
    case SYM_LEQ_R:
    case SYM_LEQ_I: return "<=";
    case SYM_FOOL_ITE: return "ite";
    case SYM_FOOL_AND: return "and";
    case SYM_FOOL_OR: return "or";
    case SYM_FOOL_IMP: return "=>";
    case SYM_FOOL_IFF: return "=";
    case SYM_FOOL_NOT: return "not";
    case SYM_FOOL_EQ: return "=";
    default: return nullptr;
  }
}

bool smtSimpleSymbol(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  for (char ch : s) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || extra.find(ch) != std::string::npos)) return false;
  }
  static const char* reserved[] = {"and", "or",     "not", "ite", "let", "forall",
                                   "exists", "par", "as",  "true", "false", "distinct"};
  for (const char* r : reserved) {
    if (s == r) return false;
  }
  return true;
}

std::string quoteSmt(const std::string& s) {
  if (smtSimpleSymbol(s)) return s;
  return "|" + s + "|";
}

std::string numSmt(const TermPtr& t) {
  const Rational& q = t->number();
  bool neg = q < 0;
  Rational a = neg ? Rational(-q) : q;
  std::string body;
  if (Term::equal(t->sort(), Term::intSort())) {
    body = numerator(a).str();
  } else {
    if (!rationalToDecimal(a, body)) {
      body = "(/ " + numerator(a).str() + " " + denominator(a).str() + ")";
    }
  }
  return neg ? "(- " + body + ")" : body;
}

/** A polymorphic application needs (as ...) when args leave a sort open. */
bool argsDetermineSorts(const SymbolDecl& d) {
  std::map<unsigned, TermPtr> seen;
  for (const auto& pat : d.argSorts) {
    pat->collectVars(seen);
  }
  for (unsigned i = 0; i < d.sortArity; ++i) {
    if (!seen.count(i)) return false;
  }
  return true;
}

std::string termSmt(const Signature& sig, const TermPtr& t) {
  switch (t->tag()) {
    case Term::Tag::Var:
      return varName(t);
    case Term::Tag::Num:
      return numSmt(t);
    case Term::Tag::Let:
      return "(let ((" + varName(t->letVar()) + " " + termSmt(sig, t->letValue()) + ")) " +
             termSmt(sig, t->letBody()) + ")";
    case Term::Tag::App:
      break;
  }
  SymbolId f = t->symbol();
  const SymbolDecl& d = sig[f];
  std::string head;
  if (const char* builtin = smtBuiltin(f)) {
    head = builtin;
  } else if (d.kind == SymbolKind::SortCtor) {
    head = quoteSmt(d.name);
    if (t->sortArgs().empty()) return head;
    std::string out = "(" + head;
    for (const auto& s : t->sortArgs()) {
      out += " " + termSmt(sig, s);
    }
    return out + ")";
  } else {
    head = quoteSmt(d.name);
    if (d.sortArity > 0 && !argsDetermineSorts(d)) {
      head = "(as " + head + " " + termSmt(sig, t->sort()) + ")";
    }
  }
  if (t->args().empty()) return head;
  std::string out = "(" + head;
  for (const auto& a : t->args()) {
    out += " " + termSmt(sig, a);
  }
  return out + ")";
}

std::string literalSmt(const Signature& sig, const Literal& l) {
  std::string atom;
  if (l.isEquality()) {
    atom = "(= " + termSmt(sig, l.lhs()) + " " + termSmt(sig, l.rhs()) + ")";
  } else {
    atom = termSmt(sig, l.atomTerm(sig));
  }
  return l.positive() ? atom : "(not " + atom + ")";
}

std::string formulaSmt(const Signature& sig, const FormulaPtr& f) {
  switch (f->kind()) {
    case Connective::Atom:
      return literalSmt(sig, f->atom());
    case Connective::True:
      return "true";
    case Connective::False:
      return "false";
    case Connective::Not:
      return "(not " + formulaSmt(sig, f->sub(0)) + ")";
    case Connective::And:
    case Connective::Or: {
      std::string out = f->is(Connective::And) ? "(and" : "(or";
      for (const auto& s : f->subs()) {
        out += " " + formulaSmt(sig, s);
      }
      return out + ")";
    }
    case Connective::Implies:
      return "(=> " + formulaSmt(sig, f->sub(0)) + " " + formulaSmt(sig, f->sub(1)) + ")";
    case Connective::Iff:
      return "(= " + formulaSmt(sig, f->sub(0)) + " " + formulaSmt(sig, f->sub(1)) + ")";
    case Connective::Forall:
    case Connective::Exists: {
      std::string head = f->is(Connective::Forall) ? "(forall ((" : "(exists ((";
      return head + "X" + std::to_string(f->boundVar()) + " " +
             termSmt(sig, f->boundSort()) + ")) " + formulaSmt(sig, f->body()) + ")";
    }
    case Connective::SortForall:
      return "(par (A" + std::to_string(f->boundVar()) + ") " +
             formulaSmt(sig, f->body()) + ")";
  }
  return "";
}

std::string declTypeTptp(const Signature& sig, const SymbolDecl& d) {
  if (d.kind == SymbolKind::SortCtor) {
    if (d.sortArity == 0) return "$tType";
    if (d.sortArity == 1) return "$tType > $tType";
    std::string out = "(";
    for (unsigned i = 0; i < d.sortArity; ++i) {
      if (i) out += " * ";
      out += "$tType";
    }
    return out + ") > $tType";
  }
  std::string result = d.kind == SymbolKind::Predicate ? "$o" : termTptp(sig, d.resultSort);
  std::string core;
  if (d.argSorts.empty()) {
    core = result;
  } else if (d.argSorts.size() == 1) {
    core = termTptp(sig, d.argSorts[0]) + " > " + result;
  } else {
    core = "(";
    for (size_t i = 0; i < d.argSorts.size(); ++i) {
      if (i) core += " * ";
      core += termTptp(sig, d.argSorts[i]);
    }
    core += ") > " + result;
  }
  if (d.sortArity == 0) return core;
  std::string out = "!>[";
  for (unsigned i = 0; i < d.sortArity; ++i) {
    if (i) out += ", ";
    out += "A" + std::to_string(i) + ": $tType";
  }
  out += "]: ";
  if (d.argSorts.empty()) return out + core;
  return out + "(" + core + ")";
}

const char* roleName(FormulaRole r) {
  switch (r) {
    case FormulaRole::Axiom: return "axiom";
    case FormulaRole::Hypothesis: return "hypothesis";
    case FormulaRole::Conjecture: return "conjecture";
    case FormulaRole::NegatedConjecture: return "negated_conjecture";
  }
  return "axiom";
}

std::string printProblemTptp(const Problem& p) {
  std::ostringstream out;
  unsigned declIdx = 0;
  for (SymbolId id = SYM_N_BUILTINS; id < p.sig.size(); ++id) {
    const SymbolDecl& d = p.sig[id];
    out << "tff(decl_" << declIdx++ << ", type, " << quoteTptp(d.name) << ": "
        << declTypeTptp(p.sig, d) << ").\n";
  }
  for (const Datatype& dt : p.sig.datatypes()) {
    out << "tff(" << quoteTptp("dt_" + p.sig[dt.sortCtor].name) << ", datatype, [";
    for (size_t i = 0; i < dt.ctors.size(); ++i) {
      if (i) out << ", ";
      out << quoteTptp(p.sig[dt.ctors[i]].name);
    }
    out << "]).\n";
  }
  for (const InputFormula& f : p.formulas) {
    out << "tff(" << quoteTptp(f.name) << ", " << roleName(f.role) << ", "
        << formulaTptp(p.sig, f.formula) << ").\n";
  }
  return out.str();
}

std::string printProblemSmt(const Problem& p) {
  std::ostringstream out;
  out << "(set-logic ALL)\n";
  for (SymbolId id = SYM_N_BUILTINS; id < p.sig.size(); ++id) {
    const SymbolDecl& d = p.sig[id];
    if (d.kind == SymbolKind::SortCtor && d.datatype < 0) {
      out << "(declare-sort " << quoteSmt(d.name) << " " << d.sortArity << ")\n";
    }
  }
  for (const Datatype& dt : p.sig.datatypes()) {
    const SymbolDecl& sd = p.sig[dt.sortCtor];
    out << "(declare-datatypes ((" << quoteSmt(sd.name) << " " << sd.sortArity << ")) (";
    std::string ctors;
    for (SymbolId c : dt.ctors) {
      const SymbolDecl& cd = p.sig[c];
      ctors += "(" + quoteSmt(cd.name);
      for (size_t i = 0; i < cd.argSorts.size(); ++i) {
        // Field names are only output decoration; a fresh selector-style
        // name keeps the declaration well-formed.
        ctors += " (" + quoteSmt(cd.name + "_" + std::to_string(i)) + " " +
                 termSmt(p.sig, cd.argSorts[i]) + ")";
      }
      ctors += ")";
    }
    if (sd.sortArity == 0) {
      out << "(" << ctors << ")";
    } else {
      out << "(par (";
      for (unsigned i = 0; i < sd.sortArity; ++i) {
        if (i) out << " ";
        out << "A" << i;
      }
      out << ") (" << ctors << "))";
    }
    out << "))\n";
  }
  for (SymbolId id = SYM_N_BUILTINS; id < p.sig.size(); ++id) {
    const SymbolDecl& d = p.sig[id];
    if (d.kind != SymbolKind::Function && d.kind != SymbolKind::Predicate) continue;
    std::string args;
    for (const auto& a : d.argSorts) {
      if (!args.empty()) args += " ";
      args += termSmt(p.sig, a);
    }
    std::string result = d.kind == SymbolKind::Predicate ? "Bool" : termSmt(p.sig, d.resultSort);
    out << "(declare-fun " << quoteSmt(d.name) << " ";
    if (d.sortArity == 0) {
      out << "(" << args << ") " << result;
    } else {
      out << "(par (";
      for (unsigned i = 0; i < d.sortArity; ++i) {
        if (i) out << " ";
        out << "A" << i;
      }
      out << ") (" << args << ") " << result << ")";
    }
    out << ")\n";
  }
  for (const InputFormula& f : p.formulas) {
    if (f.introduced) continue;
    std::vector<unsigned> parVars;
    FormulaPtr body = f.formula;
    while (body->is(Connective::SortForall)) {
      parVars.push_back(body->boundVar());
      body = body->body();
    }
    std::string s = formulaSmt(p.sig, body);
    if (f.role == FormulaRole::Conjecture) {
      if (!parVars.empty()) {
        throw UnsupportedError("a sort-quantified conjecture cannot be negated rank-1");
      }
      s = "(not " + s + ")";
    }
    if (!parVars.empty()) {
      std::string par = "(par (";
      for (size_t i = 0; i < parVars.size(); ++i) {
        if (i) par += " ";
        par += "A" + std::to_string(parVars[i]);
      }
      s = par + ") " + s + ")";
    }
    out << "(assert " << s << ")\n";
  }
  out << "(check-sat)\n";
  return out.str();
}

} // namespace

std::string printTerm(const Signature& sig, const TermPtr& t, Dialect d) {
  switch (d) {
    case Dialect::Tptp: return termTptp(sig, t);
    case Dialect::Smtlib: return termSmt(sig, t);
    case Dialect::Human: return termHuman(sig, t);
  }
  return "";
}

std::string printLiteral(const Signature& sig, const Literal& l, Dialect d) {
  switch (d) {
    case Dialect::Tptp: return literalTptp(sig, l);
    case Dialect::Smtlib: return literalSmt(sig, l);
    case Dialect::Human: return literalHuman(sig, l);
  }
  return "";
}

std::string printFormula(const Signature& sig, const FormulaPtr& f, Dialect d) {
  switch (d) {
    case Dialect::Tptp: return formulaTptp(sig, f);
    case Dialect::Smtlib: return formulaSmt(sig, f);
    case Dialect::Human: return formulaHuman(sig, f);
  }
  return "";
}

std::string printClause(const Signature& sig, const Clause& c, Dialect d) {
  if (c.literals().empty()) {
    return "$false";
  }
  std::string out;
  for (size_t i = 0; i < c.literals().size(); ++i) {
    if (i) out += " | ";
    out += printLiteral(sig, c.literals()[i], d);
  }
  return out;
}

std::string printProblem(const Problem& p, Dialect d) {
  if (d == Dialect::Tptp) return printProblemTptp(p);
  if (d == Dialect::Smtlib) return printProblemSmt(p);
  std::ostringstream out;
  for (const InputFormula& f : p.formulas) {
    out << f.name << " [" << roleName(f.role) << "]: " << formulaHuman(p.sig, f.formula)
        << "\n";
  }
  return out.str();
}

} // namespace peregrine
