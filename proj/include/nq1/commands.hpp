#pragma once

#include "nq1/dsl.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nq1 {

/// Command-line overrides; unset values fall back to the document's
/// settings block, then to the defaults.
struct RunOptions {
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_xi_degree;
  std::optional<int> max_base_degree;
};

enum ExitCode { exit_pass = 0, exit_fail = 1, exit_usage = 2 };

struct CommandResult {
  int exit_code = exit_pass;
  nlohmann::ordered_json json;
  /// Human-readable report (for reduce, extract-algebroid and build-q the
  /// derived DSL text).
  std::string text;
};

const std::vector<std::string>& command_names();

/// Runs one command. Input problems (missing blocks, bad references)
/// become exit code 2 with an "error" entry; they do not throw.
CommandResult run_command(const std::string& command, const Document& doc, const RunOptions& opt = {});

/// Parses the text first; parse errors become exit code 2.
CommandResult run_command_text(const std::string& command, const std::string& text, const RunOptions& opt = {});

SampleOptions sample_options(const Document& doc, const RunOptions& opt);
ReductionSetting reduction_setting(const Document& doc, const RunOptions& opt);

/// Distribution of a distribution block (generators split by degree).
Distribution block_distribution(const Document& doc, const DistributionBlock& b, const SampleOptions& opt);

}  // namespace nq1
