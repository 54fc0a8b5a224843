#pragma once

#include "catmeas/boolalg.hpp"
#include "catmeas/finban.hpp"
#include "catmeas/measures.hpp"

namespace catmeas {

/// Simple element of a finite algebra, stored as its value on each atom.
class SimpleElement {
 public:
  struct Block {
    Element set;
    Rational coefficient;
    bool operator==(const Block&) const = default;
  };

  SimpleElement(BoolAlg algebra, std::vector<Rational> atom_values);

  static SimpleElement zero(const BoolAlg& alg);
  /// chi(E) scaled by k.
  static SimpleElement characteristic(const BoolAlg& alg, Element e, const Rational& k = 1);

  const BoolAlg& algebra() const { return algebra_; }
  const std::vector<Rational>& atom_values() const { return values_; }
  const Rational& at(std::size_t atom) const { return values_[atom]; }

  /// Canonical form: disjoint blocks with pairwise distinct nonzero
  /// coefficients, ordered by lowest atom.
  std::vector<Block> blocks() const;
  bool is_zero() const;

  SimpleElement operator+(const SimpleElement& o) const;
  SimpleElement operator-(const SimpleElement& o) const;
  SimpleElement operator*(const SimpleElement& o) const;
  SimpleElement scaled(const Rational& k) const;

  bool operator==(const SimpleElement&) const = default;

 private:
  BoolAlg algebra_;
  std::vector<Rational> values_;
};

/// One term k chi(E) of a raw linear combination.
struct CharacteristicTerm {
  BoolAlg algebra;
  Element set;
  Rational coefficient;
};

/// Sums the terms into canonical form. Throws AlgebraMismatch if a term lives
/// in another algebra.
SimpleElement canonicalize(const BoolAlg& alg, const std::vector<CharacteristicTerm>& terms);

Rational linf_norm(const SimpleElement& f);
SimpleElement multiply(const SimpleElement& f, const SimpleElement& g);

/// L-infinity of the algebra: functions on atoms, SUP flavor, unit weights.
FinBanSpace linf_space(const BoolAlg& alg);
Vec to_vector(const SimpleElement& f);

/// E -> chi(E) as a measure into linf_space.
VectorMeasure characteristic_measure(const BoolAlg& alg);

/// sum k_n nu(E_n). Throws AlgebraMismatch.
Vec integrate(const SimpleElement& f, const VectorMeasure& nu);
/// The lift of nu to L-infinity, whose operator norm is the semivariation.
LinMap integral_map(const VectorMeasure& nu);

/// L1(Omega, mu): classes modulo the null ideal, coordinates indexed by the
/// non-null atoms, weights mu(atom), SUM flavor.
struct L1Space {
  MeasureAlgebra measure;
  std::vector<std::size_t> atoms;  ///< coordinate -> atom of the algebra
  FinBanSpace space;

  Vec coordinates(const SimpleElement& f) const;
  Rational norm(const SimpleElement& f) const { return space.norm(coordinates(f)); }
};

/// Throws DegenerateQuotient if mu vanishes identically.
L1Space l1_space(const MeasureAlgebra& mu);

/// The extension of f -> sum k_n nu(E_n) to L1(Omega, mu). Throws SupportError
/// if nu is not mu-Lipschitz.
LinMap lipschitz_integral_map(const VectorMeasure& nu, const L1Space& l1);

/// Simple function with coefficients in a SUM space, stored per atom.
struct VectorSimple {
  BoolAlg algebra;
  FinBanSpace coefficients;
  std::vector<Vec> atom_values;

  /// Sum of elementary tensors chi(E_n) (x) b_n.
  static VectorSimple from_terms(const BoolAlg& alg, const FinBanSpace& coefficients,
                                 const std::vector<std::pair<Element, Vec>>& terms);
  /// T after f.
  VectorSimple mapped(const LinMap& t) const;
};

struct BochnerResult {
  Vec integral;
  Rational l1_norm;
  /// L1(Omega, mu, B) with basis "b@a" (coefficient-major), weights mu(a) w_b.
  FinBanSpace bochner_space;
  Vec element;  ///< f in bochner_space coordinates
  /// bochner_space -> L1(Omega, mu) (x) B.
  IsoWitness witness;
  TensorProduct tensor;
};

/// Throws FlavorMismatch for SUP coefficients, AlgebraMismatch otherwise.
BochnerResult bochner(const VectorSimple& f, const MeasureAlgebra& mu);

struct FubiniResult {
  Rational joint;        ///< over the product algebra
  Rational inner_right;  ///< integrate over the right factor first
  Rational inner_left;   ///< integrate over the left factor first
  /// L1(Omega (x) Sigma, mu (x) nu) -> L1(Omega, mu) (x) L1(Sigma, nu).
  IsoWitness witness;
};

FubiniResult fubini(const SimpleElement& f, const Coproduct& cp, const MeasureAlgebra& mu, const MeasureAlgebra& nu);

/// f as a function on the Stone points, i.e. on the clopen powerset algebra.
SimpleElement stone_transfer(const SimpleElement& f, const StoneSpace& stone);
/// nu transported to the clopen powerset algebra.
VectorMeasure transfer_measure(const VectorMeasure& nu, const StoneSpace& stone);

/// e = chi(G) splits through L-infinity of the ideal below G.
struct IdempotentSplitting {
  Element support;
  LinMap section;     ///< L-inf(G) -> L-inf(Omega), extension by zero
  LinMap retraction;  ///< L-inf(Omega) -> L-inf(G), restriction
};

/// Throws NotIdempotent when e * e != e.
IdempotentSplitting split_idempotent(const SimpleElement& e);

}  // namespace catmeas
