#pragma once

#include <string_view>

#include "pdfa/ast.hpp"

namespace pdfa {

/// Parses a program: a header of `var x : 0..n;` declarations followed by
/// one statement. Block labels may be given as `[stmt]^k` (elementary
/// blocks) or `fi^k` / `od^k` (tests); missing labels are filled in by
/// assign_labels afterwards. Throws ParseError with line/column, or
/// InputError for semantic problems (duplicate labels, undeclared
/// variables, bad distributions).
Program parse_program(std::string_view text);

/// parse_program without the automatic labelling pass; labels stay
/// exactly as written (possibly absent).
Program parse_program_raw(std::string_view text);

}  // namespace pdfa
