#include "catmeas_cli/report.hpp"

#include <sstream>

namespace catmeas::cli {

using nlohmann::json;

json rational_json(const Rational& r) { return to_string(r); }

json vector_json(const Vec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r)));
  return out;
}

json witness_json(const IsoWitness& w) {
  return json{{"forward", matrix_json(w.forward.matrix())},
              {"backward", matrix_json(w.backward.matrix())},
              {"isometric", w.is_isometric()}};
}

json atoms_json(const BoolAlg& alg, Element e) {
  json out = json::array();
  for (auto a : alg.atoms_below(e)) out.push_back(alg.atom_id(a));
  return out;
}

json partition_json(const BoolAlg& alg, const Partition& p) {
  json blocks = json::array();
  for (const auto& b : p.blocks) blocks.push_back(atoms_json(alg, b));
  return json{{"parent", atoms_json(alg, p.parent)}, {"blocks", blocks}};
}

namespace {

bool is_scalar(const json& v) { return !v.is_object() && !v.is_array(); }

bool is_flat(const json& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (!is_scalar(x)) return false;
  return true;
}

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::string flat_text(const json& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + scalar_text(v[i]);
  return out + "]";
}

void render(std::ostringstream& out, const json& v, const std::string& label, std::size_t indent) {
  const std::string pad(indent, ' ');
  if (is_scalar(v)) {
    out << pad << label << ": " << scalar_text(v) << "\n";
  } else if (is_flat(v)) {
    out << pad << label << ": " << flat_text(v) << "\n";
  } else if (v.is_array()) {
    out << pad << label << ":\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (is_flat(v[i]) || is_scalar(v[i])) {
        out << pad << "  " << (is_scalar(v[i]) ? scalar_text(v[i]) : flat_text(v[i])) << "\n";
      } else {
        render(out, v[i], "[" + std::to_string(i) + "]", indent + 2);
      }
    }
  } else {
    out << pad << label << ":\n";
    for (const auto& [k, x] : v.items()) render(out, x, k, indent + 2);
  }
}

}  // namespace

std::string emit_report(const Report& report, Format format) {
  json doc{{"command", report.command},
           {"input", report.echo},
           {"results", report.results},
           {"status", report.verified ? "ok" : "failed"}};
  if (report.elapsed_us) doc["elapsed_us"] = *report.elapsed_us;
  if (format == Format::Structured) return doc.dump(2) + "\n";
  std::ostringstream out;
  out << "command: " << report.command << "\n";
  render(out, report.echo, "input", 0);
  render(out, report.results, "results", 0);
  out << "status: " << (report.verified ? "ok" : "failed") << "\n";
  if (report.elapsed_us) out << "elapsed_us: " << *report.elapsed_us << "\n";
  return out.str();
}

}  // namespace catmeas::cli
