#pragma once

#include "catmeas/boolalg.hpp"
#include "catmeas/finban.hpp"

#include <functional>
#include <optional>

namespace catmeas {

/// Finitely additive map from a finite Boolean algebra into a FinBanSpace,
/// stored on atoms so that additivity holds by construction.
class VectorMeasure {
 public:
  VectorMeasure(BoolAlg algebra, FinBanSpace target, std::vector<Vec> atom_values);

  /// Scalar measure with values in FinBanSpace::scalars().
  static VectorMeasure scalar(BoolAlg algebra, const std::vector<Rational>& atom_values);

  const BoolAlg& algebra() const { return algebra_; }
  const FinBanSpace& target() const { return target_; }
  const std::vector<Vec>& atom_values() const { return values_; }
  const Vec& atom_value(std::size_t i) const { return values_[i]; }

  Vec operator()(Element e) const;
  /// Scalar value; requires a one-dimensional target.
  Rational scalar_value(Element e) const;
  bool is_scalar() const { return target_.dim() == 1; }

  /// Null atoms: atoms whose value is zero.
  std::vector<bool> null_atoms() const;

  /// T after nu, a measure into T's target.
  VectorMeasure pushed_forward(const LinMap& t) const;

 private:
  BoolAlg algebra_;
  FinBanSpace target_;
  std::vector<Vec> values_;
};

/// A positive scalar measure (Omega, mu).
class MeasureAlgebra {
 public:
  /// Throws InvalidModel on a negative value.
  MeasureAlgebra(BoolAlg algebra, std::vector<Rational> atom_values);

  const BoolAlg& algebra() const { return algebra_; }
  const std::vector<Rational>& atom_values() const { return values_; }
  Rational operator()(Element e) const;
  VectorMeasure as_measure() const { return VectorMeasure::scalar(algebra_, values_); }
  std::vector<bool> null_atoms() const;

 private:
  BoolAlg algebra_;
  std::vector<Rational> values_;
};

/// sup over partitions of E of sum ||nu(F)||, reduced to the atomic partition.
Rational variation(const VectorMeasure& nu, Element e);

/// sup over dual-ball functionals and partitions of E of sum |<b*, nu(F)>|,
/// evaluated at the atomic partition over the extreme points of the dual ball.
Rational semivariation(const VectorMeasure& nu, Element e);

/// Extreme points of the dual unit ball of a SUM or SUP space, up to sign.
std::vector<Vec> dual_ball_extreme_points(const FinBanSpace& space);

struct LipschitzNorm {
  bool bounded = true;
  Rational value;  ///< meaningful only when bounded
};

/// Least C with ||nu(E)|| <= C mu(E) for every element E, maximized over all
/// nonzero elements. Unbounded iff a mu-null atom carries nonzero nu.
LipschitzNorm lipschitz_norm(const VectorMeasure& nu, const MeasureAlgebra& mu);

/// (phi* nu)(E) = nu(phi(E)).
VectorMeasure pullback(const BoolMorphism& phi, const VectorMeasure& nu);

/// mu (x) nu on the coproduct of the two algebras, with value mu(a) nu(b) at (a, b).
VectorMeasure product_measure(const VectorMeasure& mu, const VectorMeasure& nu, const Coproduct& cp);

/// Associative product on a target space, for the spectrality check.
struct AlgebraStructure {
  std::function<Vec(const Vec&, const Vec&)> multiply;
  Vec unit;
};

/// Pointwise product on functions over n points (the algebra L-infinity).
AlgebraStructure pointwise_algebra(std::size_t n);
/// Matrix product on n x n matrices flattened row-major.
AlgebraStructure matrix_algebra(std::size_t n);

/// nu(E meet F) = nu(E) nu(F) for every pair and nu(top) = unit.
bool is_spectral(const VectorMeasure& nu, const AlgebraStructure& algebra);

/// The null-ideal quotient of nu's algebra.
NullQuotient quotient_by_null(const VectorMeasure& mu);

/// The unique measure on the quotient whose pullback along the projection is
/// nu, or nullopt when nu charges a null atom of the quotient.
std::optional<VectorMeasure> factor_through(const NullQuotient& q, const VectorMeasure& nu);

}  // namespace catmeas
