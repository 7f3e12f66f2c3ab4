#pragma once

#include <cstdint>

namespace peregrine {

using SymbolId = uint32_t;

/**
 * Symbols every signature starts with, in a fixed order so their ids are
 * compile-time constants. The FOOL_* symbols encode formula structure
 * inside terms between parsing and clausification; they never survive
 * into a clause.
 */
enum BuiltinSymbol : SymbolId {
  SYM_TTYPE = 0,
  SYM_REAL,
  SYM_INT,
  SYM_BOOL,
  SYM_IND,
  SYM_TRUE,
  SYM_FALSE,
  SYM_ADD_R,
  SYM_ADD_I,
  SYM_NEG_R,
  SYM_NEG_I,
  SYM_MUL_R,
  SYM_MUL_I,
  SYM_LESS_R,
  SYM_LESS_I,
  SYM_LEQ_R,
  SYM_LEQ_I,
  SYM_FOOL_ITE,
  SYM_FOOL_AND,
  SYM_FOOL_OR,
  SYM_FOOL_IMP,
  SYM_FOOL_IFF,
  SYM_FOOL_NOT,
  SYM_FOOL_EQ,
  SYM_N_BUILTINS
};

} // namespace peregrine
