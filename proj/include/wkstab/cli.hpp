#pragma once

#include <iosfwd>
#include <string>

#include "wkstab/weight_expr.hpp"

namespace wkstab::cli {

/// Command-line weight shorthand:
///   one | zero | const:K | expaff:x1,..,xn | affpow:M:c,u1,..,un |
///   file:PATH | inline JSON object
WeightExpr parse_weight_spec(const std::string& spec, int n, const std::string& flag);

/// Runs one subcommand. The JSON report (or error object) goes to `out`
/// unless --out names a file. Returns 0 on success, 1 on error, 2 when the
/// mathematical verdict is negative or inconclusive.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wkstab::cli
