#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace bornless::cli {

inline constexpr const char* kToolName = "bornless";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kInputError = 2 };

/// Runs one subcommand. `args` excludes the program name. The report goes to
/// --out when given, else to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shape problems of a report (missing or mistyped fields); empty when valid.
std::vector<std::string> validate_report(const nlohmann::json& report);

/// Serialization used for every report: two-space indent, trailing newline.
std::string dump_report(const nlohmann::json& report);

}  // namespace bornless::cli
