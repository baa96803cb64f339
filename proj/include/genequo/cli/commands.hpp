#pragma once

// The five genequo commands. Each returns a machine report (JSON, every number
// tagged with its provenance), a human summary, optional plot columns and an
// exit code: 0 success, 2 verdict failure. Input errors throw InputError.

#include <string>
#include <vector>

#include "genequo/cli/spec.hpp"

namespace genequo::cli {

enum class Source { ClosedForm, Sampled, Certificate };

std::string to_string(Source source);

/// {"provenance": ..., "value": ...}; infinities become the strings "inf" and
/// "-inf", NaN becomes "nan".
Json tagged(double value, Source source);
Json tagged(const Vector& value, Source source);
Json tagged_count(long long value, Source source);

enum class ExitCode { Success = 0, InputError = 1, VerdictFailure = 2 };

struct CommandResult {
  Json report = Json::object();
  std::vector<std::string> summary;
  std::string plot;
  ExitCode exit = ExitCode::Success;
};

const std::vector<std::string>& command_names();

/// Dispatches on the command name. Throws InputError for an unknown command
/// or an inconsistent spec.
CommandResult run_command(const std::string& command, const ProblemSpec& spec);

CommandResult cmd_solve(const ProblemSpec& spec);
CommandResult cmd_certify(const ProblemSpec& spec);
CommandResult cmd_bounds(const ProblemSpec& spec);
CommandResult cmd_penalty(const ProblemSpec& spec);
CommandResult cmd_ideal(const ProblemSpec& spec);

/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string render_machine(const CommandResult& result);
std::string render_human(const CommandResult& result);

}  // namespace genequo::cli
