#pragma once

#include <iosfwd>
#include <string>

#include "monosig/order.hpp"
#include "monosig/system.hpp"

namespace monosig::cli {

/// Builder names: "long", "kng:K", "counterexample",
/// "committed:A[,B...][@base]" (base defaults to "long"). Committed states
/// send the same message mix as the state they hold.
SignallingSystem build(const std::string& spec);

/// Comma-separated numbers.
Eigen::VectorXd parse_vector(const std::string& text);

/// Chain given as comma-separated labels, lowest first; unlisted states
/// stay incomparable.
PartialOrder parse_chain(const std::string& text, const SpinSpace& spins);

/// Exit codes: 0 success, 1 configuration or validation error, 2 when
/// --strict is given and the result is negative.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace monosig::cli
