#pragma once

#include "catmeas/boolalg.hpp"
#include "catmeas/bundles2v.hpp"
#include "catmeas/errors.hpp"
#include "catmeas/finban.hpp"
#include "catmeas/measures.hpp"
#include "catmeas/shcosh.hpp"
#include "catmeas/simple.hpp"

#include <map>
#include <optional>
#include <string>

namespace catmeas::cli {

/// A model error located in the source file. `path` is a JSON pointer;
/// line and column are 1-based, or 0 when the location is unknown.
class ModelError : public Error {
 public:
  ModelError(ErrorCode code, std::string path, std::size_t line, std::size_t column, const std::string& message);
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string path_;
  std::size_t line_;
  std::size_t column_;
};

/// Two-factor product section used by the Fubini command.
struct ProductModel {
  BoolAlg left;
  BoolAlg right;
  Coproduct coproduct;
  MeasureAlgebra left_measure;
  MeasureAlgebra right_measure;
  std::map<std::string, SimpleElement> functions;
};

/// Poset-indexed functor and a monotone map of posets, for Kan extensions.
struct KanModel {
  FunctorData functor;
  CategoryFunctor inclusion;
};

struct Model {
  std::string source;
  BoolAlg algebra;
  std::map<std::string, FinBanSpace> spaces;
  std::map<std::string, VectorMeasure> measures;
  std::map<std::string, SimpleElement> functions;
  std::map<std::string, VectorSimple> vector_functions;
  std::map<std::string, Bundle> bundles;
  std::map<std::string, FunctorMatrix> functor_matrices;
  std::map<std::string, PreCosheaf> cosheaves;
  std::map<std::string, PreSheaf> sheaves;
  std::optional<ProductModel> product;
  std::optional<KanModel> kan;
};

/// Reads and fully validates a model file.
Model parse_model(const std::string& path);
/// Same as parse_model on in-memory text; `source` names it in diagnostics.
Model parse_model_text(const std::string& text, const std::string& source = "<model>");

/// The measure as a measure algebra when it is scalar and nonnegative.
std::optional<MeasureAlgebra> as_measure_algebra(const VectorMeasure& nu);

}  // namespace catmeas::cli
