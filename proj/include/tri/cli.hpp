#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tri::cli {

inline constexpr const char* kToolName = "trielliptic";
inline constexpr const char* kVersion = "0.1.0";

// exit codes
inline constexpr int kOk = 0;
inline constexpr int kRejected = 1;      // invalid curve, signature or parameter
inline constexpr int kInconsistent = 2;  // a mathematical invariant failed
inline constexpr int kUsage = 64;        // unknown subcommand or malformed flags

/**
 * Runs one subcommand. args excludes the program name. Reports go to `out`
 * (or to --out PATH, in which case a manifest line is appended to
 * PATH.manifest.jsonl); diagnostics go to `err`.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tri::cli
