#pragma once

#include "catmeas/boolalg.hpp"
#include "catmeas/finban.hpp"
#include "catmeas/measures.hpp"
#include "catmeas/simple.hpp"

#include <functional>
#include <optional>
#include <unordered_map>

namespace catmeas {

/// Functor on the element poset of an algebra, covariant (a precosheaf) or
/// contravariant (a presheaf). Built from the maps along covering pairs
/// (F below F + one atom); every other structure map is a composite along a
/// chain, and commuting diamonds make the choice of chain irrelevant.
class ElementDiagram {
 public:
  /// Called with (smaller, larger) where larger = smaller plus one atom. For a
  /// covariant diagram the map goes smaller -> larger, otherwise larger -> smaller.
  using CoverFn = std::function<LinMap(Element smaller, Element larger)>;

  ElementDiagram() = default;
  /// spaces has one entry per element, indexed by its bits. Throws
  /// NotAFunctor if a diamond fails to commute or (when requested) a cover map
  /// is not contractive. Limited to 10 atoms.
  ElementDiagram(BoolAlg algebra, std::vector<FinBanSpace> spaces, const CoverFn& covers, bool covariant,
                 bool require_contractive);

  const BoolAlg& algebra() const { return algebra_; }
  bool covariant() const { return covariant_; }
  const FinBanSpace& space(Element e) const { return spaces_[e.bits()]; }
  /// The map between F <= E in the diagram's direction. Throws ShapeMismatch
  /// when F is not below E.
  LinMap map_between(Element smaller, Element larger) const;
  const Matrix& matrix_between(Element smaller, Element larger) const;

 private:
  BoolAlg algebra_;
  std::vector<FinBanSpace> spaces_;
  bool covariant_ = true;
  std::unordered_map<std::uint64_t, Matrix> maps_;
};

/// Covariant: extension maps mu_{F,E}: mu(F) -> mu(E) for F <= E.
class PreCosheaf : public ElementDiagram {
 public:
  PreCosheaf() = default;
  PreCosheaf(BoolAlg algebra, std::vector<FinBanSpace> spaces, const CoverFn& covers,
             bool require_contractive = true)
      : ElementDiagram(std::move(algebra), std::move(spaces), covers, true, require_contractive) {}

  LinMap extension(Element from, Element to) const { return map_between(from, to); }
};

/// Contravariant: restriction maps p_{E,F}: xi(E) -> xi(F) for F <= E.
class PreSheaf : public ElementDiagram {
 public:
  PreSheaf() = default;
  PreSheaf(BoolAlg algebra, std::vector<FinBanSpace> spaces, const CoverFn& covers,
           bool require_contractive = true)
      : ElementDiagram(std::move(algebra), std::move(spaces), covers, false, require_contractive) {}

  LinMap restriction(Element from, Element to) const { return map_between(to, from); }
};

/// E -> weighted l1 on the non-null atoms below E, weights mu(atom), with
/// coordinate inclusions.
PreCosheaf l1_cosheaf(const MeasureAlgebra& mu);
/// E -> b for every E (including bottom), identity maps.
PreCosheaf constant_precosheaf(const BoolAlg& alg, const FinBanSpace& b);
PreCosheaf zero_precosheaf(const BoolAlg& alg);
PreSheaf zero_presheaf(const BoolAlg& alg);
/// E -> direct sum of the given atom fibers below E, block inclusions.
PreCosheaf cosheaf_from_atoms(const BoolAlg& alg, const std::vector<FinBanSpace>& atom_fibers);
/// E -> product (SUP) of the given atom stalks below E, coordinate projections.
PreSheaf sheaf_from_stalks(const BoolAlg& alg, const std::vector<FinBanSpace>& stalks);

struct ConditionVerdict {
  bool holds = true;
  /// First failing partition; for the empty partition of bottom the parent is
  /// bottom and the block list is empty.
  std::optional<Partition> counterexample;
  std::string reason;
};

/// Checks that every binary partition {F, E - F} induces an isometric
/// isomorphism mu(F) (+) mu(E - F) -> mu(E), then that mu(bottom) = 0. The
/// exhaustive mode checks every partition of every element.
ConditionVerdict is_cosheaf(const PreCosheaf& mu, bool exhaustive = false);
/// Dual product condition xi(E) -> xi(F) x xi(E - F).
ConditionVerdict is_sheaf(const PreSheaf& xi, bool exhaustive = false);

/// A verified cosheaf together with its projections p_{E,F}.
class Cosheaf {
 public:
  /// Throws NotACosheaf when the condition fails.
  explicit Cosheaf(PreCosheaf mu);

  const PreCosheaf& diagram() const { return mu_; }
  const BoolAlg& algebra() const { return mu_.algebra(); }
  const FinBanSpace& space(Element e) const { return mu_.space(e); }
  LinMap extension(Element from, Element to) const { return mu_.extension(from, to); }
  /// The unique p with p mu_{F,E} = id and p mu_{E-F,E} = 0.
  LinMap projection(Element from, Element to) const;

 private:
  PreCosheaf mu_;
  std::unordered_map<std::uint64_t, Matrix> projections_;
};

struct SpectralData {
  BoolAlg algebra;
  FinBanSpace carrier;
  std::vector<LinMap> projections;  ///< P_E indexed by element bits

  const LinMap& at(Element e) const { return projections[e.bits()]; }
  /// f -> sum k_n P_{E_n}.
  LinMap action(const SimpleElement& f) const;
};

SpectralData spectral_measure(const Cosheaf& mu);

struct SpectralLaws {
  bool unit = true;
  bool bottom = true;
  bool idempotent = true;
  bool multiplicative = true;
  bool additive = true;
  bool all() const { return unit && bottom && idempotent && multiplicative && additive; }
};

/// Exhaustive over all elements and pairs.
SpectralLaws verify_spectral(const SpectralData& s);

/// max |f(a)| over the atoms whose projection is nonzero; equals the sup norm
/// when every atom has a nonzero fiber.
Rational essential_sup(const SimpleElement& f, const SpectralData& s);

/// sum k_n mu_{E_n,F} p_{E,E_n}. Throws SupportError unless f vanishes off E meet F.
LinMap integrate_simple_morphism(const SimpleElement& f, const Cosheaf& mu, Element e, Element f_target);

/// chi(E): F -> L-infinity on the atoms below E meet F, coordinate projections.
PreSheaf characteristic_sheaf(const BoolAlg& alg, Element e);

/// Natural transformations between two diagrams of the same variance, as the
/// nullspace of the commuting-square constraints along covering pairs.
struct NaturalTransformations {
  std::vector<std::size_t> offsets;  ///< per element bits, start of its block
  std::vector<std::size_t> rows;     ///< per element, target dimension
  std::vector<std::size_t> cols;     ///< per element, source dimension
  Matrix constraints;
  Matrix basis;                      ///< columns span the solutions

  std::size_t dim() const { return basis.cols(); }
  std::size_t unknowns() const { return constraints.cols(); }
  /// Component at e of the transformation with the given basis coordinates.
  Matrix component(const Vec& coords, Element e) const;
  /// Component at e of a vector in unknown coordinates.
  Matrix component_of(const Vec& unknowns, Element e) const;
  /// Unknown coordinates of a family of components indexed by element bits.
  Vec flatten(const std::vector<Matrix>& components) const;
  bool is_natural(const std::vector<Matrix>& components) const;
};

NaturalTransformations natural_transformations(const ElementDiagram& source, const ElementDiagram& target);

/// Sheaf hom; the norm of a transformation is the sup of its component norms.
NaturalTransformations sheaf_hom(const PreSheaf& xi, const PreSheaf& zeta);

struct Cosheafification {
  PreCosheaf cosheaf;
  std::vector<LinMap> counit;  ///< per element bits: cosheaf(E) -> theta(E)
};

/// E -> direct sum of theta(atom) over atoms below E, counit sum of theta_{a,E}.
Cosheafification cosheafify(const PreCosheaf& theta);

struct Factorization {
  std::vector<LinMap> map;  ///< nu(E) -> cosheafify(theta)(E)
  bool natural = false;
  bool commutes = false;    ///< counit after map equals tau
  bool unique = false;      ///< no nonzero natural map is killed by the counit
};

/// The factorization of tau: nu -> theta through the cosheafification, with
/// tau~_E(m) = (tau_a p_{E,a} m)_a.
Factorization factor_through_cosheafification(const Cosheaf& nu, const std::vector<LinMap>& tau,
                                               const Cosheafification& c);

/// bva(E, B): B-valued measures on the ideal below E stored atomwise, with
/// the total-variation norm (weighted l1) and block inclusions.
PreCosheaf bva_cosheaf(const BoolAlg& alg, const FinBanSpace& b);
/// The measure on the algebra represented by coordinates of bva(E, B).
VectorMeasure bva_measure(const BoolAlg& alg, const FinBanSpace& b, Element e, const Vec& coords);

/// For a cocone tau_E: theta(E) -> B, the cosheaf map theta -> bva sending m
/// to F -> tau_F(p_{E,F} m), stored atomwise.
std::vector<LinMap> constant_universal_map(const Cosheaf& theta, const std::vector<LinMap>& tau,
                                           const FinBanSpace& b);
/// Evaluation at E: bva(E, B) -> B, summing the atom values.
LinMap bva_evaluation(const BoolAlg& alg, const FinBanSpace& b, Element e);

/// Y^b(F) = scalars iff F <= b, identity restrictions where nonzero.
PreSheaf yoneda_presheaf(const BoolAlg& alg, Element b);
/// Y_a(b) = scalars iff a <= b, identity extensions where nonzero.
PreCosheaf yoneda_precosheaf(const BoolAlg& alg, Element a);

/// L xi (a) = Nat(xi, Y^a), covariant in a. Spaces carry unit-weight bases;
/// contractivity is not imposed on the structure maps.
PreCosheaf isbell(const PreSheaf& xi);
/// R mu (a) = Nat(mu, Y_a), contravariant in a.
PreSheaf isbell_adjoint(const PreCosheaf& mu);

struct IsbellAdjunction {
  std::size_t left_dim = 0;   ///< dim Nat(mu, L xi)
  std::size_t right_dim = 0;  ///< dim Nat(xi, R mu)
  /// Transposes of a basis of Nat(mu, L xi), in Nat(xi, R mu) unknown coordinates.
  std::vector<Vec> transposed;
  bool transposes_natural = false;
  bool bijective = false;
};

/// Transposes every basis transformation through the shared pairing
/// xi(F) x mu(b) -> scalars, F <= b, and checks the result is a bijection.
IsbellAdjunction verify_isbell_adjunction(const PreSheaf& xi, const PreCosheaf& mu);

/// Sheaf -> stalks at the Stone points -> sheaf, with the comparison maps
/// xi(E) -> product of stalks below E.
struct StoneSheafTransfer {
  std::vector<FinBanSpace> stalks;  ///< per Stone point
  PreSheaf rebuilt;
  std::vector<IsoWitness> comparison;  ///< per element bits: xi(E) -> rebuilt(E)
};

StoneSheafTransfer stone_transfer_sheaf(const PreSheaf& xi, const StoneSpace& stone);

}  // namespace catmeas
