#pragma once

#include "catmeas/linalg.hpp"

#include <string>
#include <tuple>
#include <vector>

namespace catmeas {

/// SUM is the weighted l1 norm (the coproduct side), SUP the weighted
/// l-infinity norm (the product side).
enum class Flavor { Sum, Sup };

std::string_view to_string(Flavor f);

/// Finite-dimensional rational space with a weighted l1 or l-infinity norm.
class FinBanSpace {
 public:
  /// The zero space (SUM flavor).
  FinBanSpace() = default;
  /// Throws NonPositiveWeight / ShapeMismatch on malformed input.
  FinBanSpace(std::vector<std::string> basis, std::vector<Rational> weights, Flavor flavor);

  static FinBanSpace l1(std::size_t n, const std::string& prefix = "e");
  static FinBanSpace linf(std::size_t n, const std::string& prefix = "e");
  /// The base field as a one-dimensional SUM space with unit weight.
  static FinBanSpace scalars();
  static FinBanSpace zero(Flavor flavor = Flavor::Sum);

  std::size_t dim() const { return basis_.size(); }
  Flavor flavor() const { return flavor_; }
  const std::vector<std::string>& basis() const { return basis_; }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& weight(std::size_t i) const { return weights_[i]; }

  Rational norm(const Vec& v) const;
  /// Same basis and weights, other flavor.
  FinBanSpace with_flavor(Flavor f) const { return FinBanSpace(basis_, weights_, f); }

  bool operator==(const FinBanSpace&) const = default;

 private:
  std::vector<std::string> basis_;
  std::vector<Rational> weights_;
  Flavor flavor_ = Flavor::Sum;
};

/// Bounded linear map; matrix is target-rows by source-columns.
class LinMap {
 public:
  LinMap() = default;
  LinMap(FinBanSpace source, FinBanSpace target, Matrix matrix);

  static LinMap identity(const FinBanSpace& space);
  static LinMap zero(const FinBanSpace& source, const FinBanSpace& target);

  const FinBanSpace& source() const { return source_; }
  const FinBanSpace& target() const { return target_; }
  const Matrix& matrix() const { return matrix_; }

  Vec operator()(const Vec& v) const { return matrix_ * v; }
  /// (*this) after first.
  LinMap after(const LinMap& first) const;
  LinMap operator+(const LinMap& other) const;
  LinMap scaled(const Rational& k) const;

  bool operator==(const LinMap&) const = default;

 private:
  FinBanSpace source_;
  FinBanSpace target_;
  Matrix matrix_;
};

/// Exact operator norm. SUM->SUM, SUP->SUP and SUM->SUP use closed forms
/// (column or row rules); SUP->SUM maximizes over the 2^n vertices of the
/// source ball and is limited to source dimension <= 20.
Rational operator_norm(const LinMap& map);

/// Both directions of an isomorphism, kept together so the isometry claim is
/// decidable.
struct IsoWitness {
  LinMap forward;
  LinMap backward;

  bool is_inverse_pair() const;
  /// Inverse pair with both operator norms <= 1.
  bool is_isometric() const;
};

struct DirectSum {
  FinBanSpace space;
  std::vector<LinMap> injections;
  std::vector<LinMap> projections;

  /// Coproduct mediation: the map out of the sum restricting to each arm.
  LinMap copair(const std::vector<LinMap>& arms) const;
  /// Product mediation: the map into the sum projecting to each arm.
  LinMap pair(const std::vector<LinMap>& arms) const;
};

/// Basis labels are "<k>:<label>". Throws FlavorMismatch on mixed flavors.
/// The empty sum is the zero space of the requested flavor.
DirectSum direct_sum(const std::vector<FinBanSpace>& spaces, Flavor empty_flavor = Flavor::Sum);
/// The sum space alone, without injections or projections.
FinBanSpace direct_sum_space(const std::vector<FinBanSpace>& spaces, Flavor empty_flavor = Flavor::Sum);

struct TensorProduct {
  FinBanSpace space;
  std::size_t right_dim = 0;

  std::size_t index(std::size_t i, std::size_t j) const { return i * right_dim + j; }
  Vec embed(const Vec& a, const Vec& b) const;
};

/// Projective tensor of SUM spaces: product basis in row-major order
/// ("x*y" labels), weights multiply. Throws FlavorMismatch for SUP inputs.
TensorProduct projective_tensor(const FinBanSpace& a, const FinBanSpace& b);

/// Tensor product of maps between projective tensors.
LinMap tensor(const LinMap& f, const LinMap& g);

/// Quotient of a SUM space by the span of a set of vectors.
struct Quotient {
  FinBanSpace ambient;
  /// Coordinates are the classes of the ambient basis vectors not pivoted by
  /// the relations; weights are their quotient norms.
  FinBanSpace space;
  LinMap projection;      ///< ambient -> space
  Matrix section;         ///< space coordinates -> ambient representatives
  Matrix relations;       ///< columns span the subspace divided out
  /// True when the weighted-l1 model of `space` is exactly the quotient norm,
  /// i.e. the projection is contractive in that model.
  bool weighted_l1 = false;

  /// Exact quotient norm min over w in span of ||v - w||, by linear programming.
  Rational norm(const Vec& ambient_vector) const;
  Rational norm_of_class(const Vec& coords) const { return norm(section * coords); }
};

Quotient quotient(const FinBanSpace& ambient, const std::vector<Vec>& relations);

/// Finite category: arrow i < object_count() is the identity of object i,
/// composition is a full table over composable pairs.
class FiniteCategory {
 public:
  struct Arrow {
    std::string name;
    std::size_t source;
    std::size_t target;
  };

  /// arrows lists the non-identity arrows; compose(g, f) must be provided for
  /// every composable non-identity pair as an index into the full arrow list
  /// (identities first). Validates closure and associativity.
  FiniteCategory(std::vector<std::string> objects, std::vector<Arrow> arrows,
                 const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& composition);

  static FiniteCategory discrete(std::vector<std::string> objects);
  /// Thin category of a partial order given by generating relations (a <= b).
  static FiniteCategory from_poset(std::vector<std::string> objects,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& relations);

  std::size_t object_count() const { return objects_.size(); }
  std::size_t arrow_count() const { return arrows_.size(); }
  const std::vector<std::string>& objects() const { return objects_; }
  const Arrow& arrow(std::size_t i) const { return arrows_[i]; }
  std::size_t identity(std::size_t object) const { return object; }
  bool is_identity(std::size_t arrow) const { return arrow < objects_.size(); }
  /// g after f; requires target(f) = source(g).
  std::size_t compose(std::size_t g, std::size_t f) const;
  std::vector<std::size_t> hom(std::size_t a, std::size_t b) const;

 private:
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<std::size_t> table_;
};

/// Covariant functor C -> Ban given by spaces and one map per arrow.
struct FunctorData {
  FiniteCategory category;
  std::vector<FinBanSpace> spaces;
  std::vector<LinMap> maps;
};

/// Throws NotAFunctor if identities or the composition table are violated.
void validate_functor(const FunctorData& f);

/// Bifunctor C^op x C -> Ban. spaces[a*n + b] = F(a, b);
/// left[f*n + c] = F(f, 1): F(b, c) -> F(a, c) for f: a -> b;
/// right[g*n + c] = F(1, g): F(c, a) -> F(c, b) for g: a -> b.
struct BifunctorData {
  FiniteCategory category;
  std::vector<FinBanSpace> spaces;
  std::vector<LinMap> left;
  std::vector<LinMap> right;

  const FinBanSpace& at(std::size_t a, std::size_t b) const { return spaces[a * category.object_count() + b]; }
};

/// Throws NotAFunctor on a violated identity, composition or interchange law.
void validate_bifunctor(const BifunctorData& f);

struct Coend {
  DirectSum sum;              ///< direct sum of the diagonal F(a, a)
  Quotient quotient;          ///< sum modulo F(f,1)x - F(1,f)x
  std::vector<LinMap> wedge;  ///< F(a, a) -> coend

  const FinBanSpace& space() const { return quotient.space; }
};

Coend coend(const BifunctorData& f);

/// Equalizer inside the product of the diagonal; the norm of an element is the
/// maximum of its component norms.
struct End {
  std::vector<FinBanSpace> components;
  std::vector<std::size_t> offsets;
  Matrix basis;               ///< columns span the end inside the product coordinates
  std::vector<Matrix> wedge;  ///< end coordinates -> F(a, a)

  std::size_t dim() const { return basis.cols(); }
  Rational norm(const Vec& coords) const;
};

End end(const BifunctorData& f);

}  // namespace catmeas
