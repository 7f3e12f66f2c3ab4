#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace peregrine {

/**
 * Raised for defects inside the prover itself. User-level problems
 * (bad input files, unsupported constructs) use the error types in
 * parse/Problem.hpp instead.
 */
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

#define PER_ASSERT(cond)                                                     \
  do {                                                                       \
    if (!(cond)) {                                                           \
      throw ::peregrine::InternalError(std::string("assertion failed: ")    \
          + #cond + " at " + __FILE__ + ":" + std::to_string(__LINE__));     \
    }                                                                        \
  } while (0)

#define PER_ASSERT_MSG(cond, msg)                                            \
  do {                                                                       \
    if (!(cond)) {                                                           \
      throw ::peregrine::InternalError(std::string("assertion failed: ")    \
          + (msg) + " at " + __FILE__ + ":" + std::to_string(__LINE__));     \
    }                                                                        \
  } while (0)

inline size_t hashCombine(size_t seed, size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

} // namespace peregrine
