#pragma once

#include "catmeas/finban.hpp"
#include "catmeas/shcosh.hpp"

#include <string>
#include <vector>

namespace catmeas {

/// Family of SUM spaces indexed by a finite ordered base set.
class Bundle {
 public:
  Bundle() = default;
  /// Throws ShapeMismatch on a size mismatch, InvalidModel on repeated base
  /// points and FlavorMismatch on a SUP fiber.
  Bundle(std::vector<std::string> base, std::vector<FinBanSpace> fibers);

  const std::vector<std::string>& base() const { return base_; }
  const std::vector<FinBanSpace>& fibers() const { return fibers_; }
  const FinBanSpace& fiber(std::size_t x) const { return fibers_[x]; }
  std::size_t size() const { return base_.size(); }
  std::size_t total_dim() const;
  /// Throws UnknownPoint.
  std::size_t index_of(const std::string& point) const;

  bool operator==(const Bundle&) const = default;

 private:
  std::vector<std::string> base_;
  std::vector<FinBanSpace> fibers_;
};

/// v at x, zero elsewhere. Throws UnknownPoint.
Bundle delta_bundle(const std::vector<std::string>& base, const std::string& x,
                    const FinBanSpace& v = FinBanSpace::scalars());
Bundle zero_bundle(const std::vector<std::string>& base);
/// Fiberwise projective tensor. Throws BaseMismatch.
Bundle tensor(const Bundle& a, const Bundle& b);
/// Every fiber tensored with v.
Bundle tensor(const Bundle& a, const FinBanSpace& v);
/// Fiberwise direct sum. Throws BaseMismatch.
Bundle bundle_sum(const std::vector<Bundle>& parts, const std::vector<std::string>& base);

/// Product over the base of Hom(xi_x, zeta_x); each block is a row-major
/// target-by-source matrix and the norm is the sup of the operator norms.
class HomSpace {
 public:
  HomSpace(std::vector<FinBanSpace> sources, std::vector<FinBanSpace> targets);

  std::size_t dim() const { return offsets_.back(); }
  std::size_t blocks() const { return sources_.size(); }
  std::size_t offset(std::size_t x) const { return offsets_[x]; }
  LinMap block(const Vec& coords, std::size_t x) const;
  Vec from_blocks(const std::vector<Matrix>& blocks) const;
  Rational norm(const Vec& coords) const;

 private:
  std::vector<FinBanSpace> sources_;
  std::vector<FinBanSpace> targets_;
  std::vector<std::size_t> offsets_;
};

/// Throws BaseMismatch.
HomSpace hom_space(const Bundle& xi, const Bundle& zeta);

/// rho^zeta: fiber at x has one coordinate per entry of a map zeta_x -> rho_x,
/// row-major, labelled "<target>^<source>" with unit weights. Its norm is the
/// operator norm, which a weighted basis cannot express, so norm claims go
/// through CurryingAdjunction::curried_norm.
Bundle exponential(const Bundle& rho, const Bundle& zeta);

/// Hom(xi (x) zeta, rho) ~ Hom(xi, rho^zeta).
struct CurryingAdjunction {
  HomSpace tensor_side;
  HomSpace curried_side;
  std::vector<FinBanSpace> xi;    ///< needed for the curried norm
  std::vector<FinBanSpace> zeta;
  std::vector<FinBanSpace> rho;
  /// Coordinate permutation between the two hom spaces, on unit-weight
  /// coordinate spaces (dimension-matched bases).
  IsoWitness witness;

  Vec curry(const Vec& tensor_coords) const { return witness.forward(tensor_coords); }
  Vec uncurry(const Vec& curried_coords) const { return witness.backward(curried_coords); }
  /// sup over x and basis vectors e_i of xi_x of ||g(e_i)||_op / w_i.
  Rational curried_norm(const Vec& curried_coords) const;
};

CurryingAdjunction currying(const Bundle& xi, const Bundle& zeta, const Bundle& rho);

/// Cocontinuous functor between free 2-spaces over X and Y; entries[y][x] = T_x^y.
struct FunctorMatrix {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::vector<std::vector<FinBanSpace>> entries;

  const FinBanSpace& at(std::size_t y, std::size_t x) const { return entries[y][x]; }
  /// Scalars on the diagonal, zero spaces elsewhere.
  static FunctorMatrix identity(const std::vector<std::string>& base);
  /// Throws ShapeMismatch on a non-rectangular table, FlavorMismatch on SUP entries.
  void validate() const;

  bool operator==(const FunctorMatrix&) const = default;
};

/// (T xi)_y = sum_x xi_x (x) T_x^y. Throws BaseMismatch.
Bundle apply(const FunctorMatrix& t, const Bundle& xi);
/// (S T)_x^z = sum_y S_y^z (x) T_x^y, i.e. S after T. Throws BaseMismatch.
FunctorMatrix compose(const FunctorMatrix& s, const FunctorMatrix& t);

/// Entrywise maps between two functor matrices of the same shape.
struct MatrixTwoCell {
  FunctorMatrix source;
  FunctorMatrix target;
  std::vector<std::vector<LinMap>> entries;  ///< [y][x]

  /// other after *this.
  MatrixTwoCell then(const MatrixTwoCell& other) const;
  bool is_isometric_iso() const;
};

/// ((R S) T) => (R (S T)), a coordinate permutation on each entry.
MatrixTwoCell associator(const FunctorMatrix& r, const FunctorMatrix& s, const FunctorMatrix& t);
/// I_Y T => T.
MatrixTwoCell left_unitor(const FunctorMatrix& t);
/// T I_X => T.
MatrixTwoCell right_unitor(const FunctorMatrix& t);
/// q theta: q B => q B'.
MatrixTwoCell whisker_left(const FunctorMatrix& q, const MatrixTwoCell& theta);
/// theta t: A t => A' t.
MatrixTwoCell whisker_right(const MatrixTwoCell& theta, const FunctorMatrix& t);

/// Both reassociation routes from (((Q R) S) T) to (Q (R (S T))) agree.
bool pentagon_holds(const FunctorMatrix& q, const FunctorMatrix& r, const FunctorMatrix& s, const FunctorMatrix& t);

/// xi ~ sum_x xi_x (x) delta_x, one witness per base point.
struct CanonicalDecomposition {
  Bundle decomposed;
  std::vector<IsoWitness> witness;
};

CanonicalDecomposition canonical_decomposition(const Bundle& xi);

/// S (T xi) ~ (S T) xi, one witness per point of the final base.
std::vector<IsoWitness> apply_compose_witness(const FunctorMatrix& s, const FunctorMatrix& t, const Bundle& xi);

/// Bundles over X x Y (base "x|y", x-major) correspond to matrices X -> Y.
Bundle product_bundle(const FunctorMatrix& t);
FunctorMatrix matrix_of(const Bundle& xi, const std::vector<std::string>& x, const std::vector<std::string>& y);

/// Categorified measure on a finite set: a space per point.
struct DiscreteCosheafMeasure {
  std::vector<std::string> base;
  std::vector<FinBanSpace> weights;
};

struct DirectIntegral {
  /// sum_x xi_x (x) mu(x), in base order.
  FinBanSpace total;
  /// E -> integral over E, on the powerset algebra of the base (atoms sorted).
  PreCosheaf indefinite;
};

/// Throws BaseMismatch.
DirectIntegral direct_integral_discrete(const Bundle& xi, const DiscreteCosheafMeasure& mu);

/// For T from a one-point base: T(integral of xi dmu) ~ integral of xi d(T mu),
/// one witness per point of T's target base.
std::vector<IsoWitness> integral_naturality(const Bundle& xi, const DiscreteCosheafMeasure& mu, const FunctorMatrix& t);

/// Atom data of a precosheaf on a powerset algebra.
DiscreteCosheafMeasure restrict_to_points(const PreCosheaf& mu);
/// E -> sum of the point spaces in E, block inclusions.
PreCosheaf extend_by_sums(const DiscreteCosheafMeasure& m);

/// Functor between finite categories.
struct CategoryFunctor {
  FiniteCategory source;
  FiniteCategory target;
  std::vector<std::size_t> objects;
  std::vector<std::size_t> arrows;
};

/// Throws NotAFunctor if identities, endpoints or composition are not preserved.
void validate_category_functor(const CategoryFunctor& i);
bool is_fully_faithful(const CategoryFunctor& i);

struct KanExtension {
  /// Lan_I F(a) = coend over m of l1[A(I m, a)] (x) F(m), per object a.
  std::vector<Coend> values;
  /// F(m) -> Lan_I F(I m), u -> class of id (x) u.
  std::vector<LinMap> eta;
  /// Per m, whether eta_m is an isometric isomorphism onto the quotient norm.
  std::vector<bool> eta_isometric_iso;
};

/// Throws NotAFunctor for invalid input.
KanExtension kan_extension_discrete(const FunctorData& f, const CategoryFunctor& i);

/// Exact isometry test of a linear iso from a SUM space onto a quotient with
/// its LP norm (map given in quotient coordinates).
bool is_isometric_onto_quotient(const LinMap& map, const Quotient& q);

}  // namespace catmeas
