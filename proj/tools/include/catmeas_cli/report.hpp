#pragma once

#include "catmeas/boolalg.hpp"
#include "catmeas/finban.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace catmeas::cli {

enum class Format { Text, Structured };

/// Outcome of one command. `verified` is false when a check the command
/// performs did not hold; the results still describe what was found.
struct Report {
  std::string command;
  nlohmann::json echo;
  nlohmann::json results;
  bool verified = true;
  /// Wall-clock microseconds; only reported when requested.
  std::optional<std::int64_t> elapsed_us;
};

/// Structured output is the JSON document with sorted keys; the text form is
/// an indented rendering of the same document.
std::string emit_report(const Report& report, Format format);

nlohmann::json rational_json(const Rational& r);
nlohmann::json vector_json(const Vec& v);
nlohmann::json matrix_json(const Matrix& m);
nlohmann::json witness_json(const IsoWitness& w);
nlohmann::json atoms_json(const BoolAlg& alg, Element e);
nlohmann::json partition_json(const BoolAlg& alg, const Partition& p);

}  // namespace catmeas::cli
