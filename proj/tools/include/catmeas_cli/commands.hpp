#pragma once

#include "catmeas_cli/model.hpp"
#include "catmeas_cli/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace catmeas::cli {

struct Options {
  std::uint64_t seed = 0;
  bool exhaustive = false;
  std::optional<std::string> element;
  std::optional<std::string> to;
  std::optional<std::string> measure;
  std::optional<std::string> control;
  std::optional<std::string> function;
  std::optional<std::string> cosheaf;
  std::optional<std::string> sheaf;
  std::optional<std::string> space;
  std::size_t max_blocks = 0;
};

const std::vector<std::string>& command_names();

/// Dispatches one command. Throws UnknownCommand for a name outside
/// command_names() and CommandMismatch when the model lacks what the command
/// needs.
Report run(const std::string& command, const Model& model, const Options& options);

/// Full command line entry point: returns 0 on success, 1 when a
/// verification failed and 2 on an input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catmeas::cli
