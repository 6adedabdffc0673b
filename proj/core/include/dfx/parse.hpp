#pragma once

// Text grammar for expressions; see docs/grammar.md.
//
// Infix:  w0^2/2 + exp((r1-r2)/2)*r3_1 - Phi{1,0}
// Prefix: (+ (* 1/2 (^ w0 2)) (* 1 r3_1 (exp (+ (* 1/2 r1) (* -1/2 r2)))))
//
// parse() accepts both; a leading '(' followed by an operator token selects
// the prefix reader.

#include <string>

#include "dfx/expr.hpp"

namespace dfx {

Expr parse(const std::string& text);

}  // namespace dfx
