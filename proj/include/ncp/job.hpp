#pragma once

#include <string>

#include <json.hpp>

namespace ncp {

using Json = nlohmann::ordered_json;

/// One batch job: a command name, its JSON payload, and the output format
/// ("json" or "csv").
struct JobRequest {
  std::string command;
  Json payload;
  std::string format = "json";
};

/// What the process should do with the run: emit body on the selected
/// stream and terminate with exit_code; message goes to stderr when the
/// code is nonzero.
struct JobOutcome {
  int exit_code = 0;
  std::string body;
  std::string message;
};

/// Validates the payload against the command's schema (errors name the
/// offending field), dispatches to the library, and serializes the result
/// envelope {command, version, inputs, tolerances, result}.  Exit codes:
/// 0 success, 2 schema or payload violation, 3 size cap, 4 numerical
/// contract failure (including a failing check suite), 1 anything else.
/// The body is deterministic byte for byte for identical requests.
JobOutcome run_job(const JobRequest& request);

}  // namespace ncp
