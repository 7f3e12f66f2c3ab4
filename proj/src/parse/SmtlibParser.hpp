#pragma once

#include <string>

#include "parse/Problem.hpp"

namespace peregrine {

/**
 * SMT-LIB 2 script reader covering the declaration and assertion subset
 * the prover understands: declare-sort, declare-datatypes (including
 * parametric datatypes), declare-fun/declare-const with rank-1 `par`
 * polymorphism, define-fun macros, assert and check-sat. Assertions
 * become axioms; satisfiability of the script is the proof task, so the
 * resulting problem has no conjecture and fromSmtlib is set.
 */
Problem parseSmtlibFile(const std::string& path);
Problem parseSmtlibString(const std::string& text, const std::string& name = "<input>");

} // namespace peregrine
