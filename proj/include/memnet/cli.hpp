#pragma once

#include <iosfwd>

namespace memnet::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kOther = 1;
inline constexpr int kMissingInput = 2;
inline constexpr int kParseFailure = 3;
inline constexpr int kConfigMismatch = 4;

/// Entry point for the memnet tool: train, eval, attn, bench and stats.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace memnet::cli
