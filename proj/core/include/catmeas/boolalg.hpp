#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace catmeas {

/// An element of a finite Boolean algebra: the set of atoms below it, as a
/// bitset over the algebra's atom order.
class Element {
 public:
  constexpr Element() = default;
  constexpr explicit Element(std::uint64_t bits) : bits_(bits) {}

  static constexpr Element atom(std::size_t index) { return Element(std::uint64_t{1} << index); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool is_bottom() const { return bits_ == 0; }
  constexpr bool has_atom(std::size_t index) const { return (bits_ >> index) & 1U; }
  constexpr std::size_t atom_count() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  /// Index of the first atom below this element; undefined for bottom.
  constexpr std::size_t lowest_atom() const { return static_cast<std::size_t>(std::countr_zero(bits_)); }

  constexpr bool operator<=(const Element& other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool disjoint(const Element& other) const { return (bits_ & other.bits_) == 0; }

  constexpr Element operator&(const Element& o) const { return Element(bits_ & o.bits_); }
  constexpr Element operator|(const Element& o) const { return Element(bits_ | o.bits_); }
  /// Relative complement: this minus other.
  constexpr Element operator-(const Element& o) const { return Element(bits_ & ~o.bits_); }

  constexpr bool operator==(const Element&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Finite Boolean algebra in atomic (powerset) form. Atom identifiers are kept
/// in lexicographic order; that order fixes every bit and basis encoding.
class BoolAlg {
 public:
  static constexpr std::size_t kMaxAtoms = 62;

  /// Placeholder with no atoms, only for default-constructed holders.
  BoolAlg() = default;
  /// Throws InvalidModel on an empty or duplicated atom list.
  explicit BoolAlg(std::vector<std::string> atom_ids);

  std::size_t atom_count() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& atom_id(std::size_t i) const { return atoms_[i]; }
  std::optional<std::size_t> index_of(const std::string& id) const;

  /// Number of elements, 2^n. Throws if n is too large to enumerate.
  std::uint64_t element_count() const;

  Element top() const { return Element(top_bits()); }
  Element bottom() const { return Element(); }
  Element complement(Element e) const { return Element(~e.bits() & top_bits()); }
  bool contains(Element e) const { return (e.bits() & ~top_bits()) == 0; }

  /// Element from atom identifiers; throws InvalidModel on an unknown id.
  Element element(const std::vector<std::string>& ids) const;
  std::vector<std::size_t> atoms_below(Element e) const;
  /// "{a,b}" rendering with atoms in algebra order.
  std::string format(Element e) const;

  /// Ground-set members of each atom when the algebra was generated from
  /// subsets of a ground set; empty otherwise.
  const std::vector<std::vector<std::string>>& cells() const { return cells_; }

  bool operator==(const BoolAlg& other) const { return atoms_ == other.atoms_; }

  /// Calls fn for every element in increasing bit order.
  void for_each_element(const std::function<void(Element)>& fn) const;

 private:
  friend BoolAlg build_algebra(const std::vector<std::string>&, const std::vector<std::vector<std::string>>&);
  std::uint64_t top_bits() const { return (std::uint64_t{1} << atoms_.size()) - 1; }

  std::vector<std::string> atoms_;
  std::vector<std::vector<std::string>> cells_;
};

/// Canonical atomic form of the algebra generated by subsets of a ground set:
/// atoms are the nonempty cells of the common refinement, named by their
/// members joined with '+'.
BoolAlg build_algebra(const std::vector<std::string>& ground,
                      const std::vector<std::vector<std::string>>& generators);

/// A finite partition of a nonzero element. Blocks are sorted by lowest atom.
struct Partition {
  Element parent;
  std::vector<Element> blocks;

  bool operator==(const Partition&) const = default;
};

/// Validates and canonicalizes; throws InvalidModel if blocks overlap, are
/// zero, or do not join to parent.
Partition make_partition(Element parent, std::vector<Element> blocks);

/// finer refines coarser: every block of finer lies below a block of coarser.
bool refines(const Partition& finer, const Partition& coarser);

Partition atomic_partition(const BoolAlg& alg, Element e);

/// Enumerates the partitions of e with at most max_blocks blocks in a
/// deterministic order. Throws EmptyElement for e = bottom.
void for_each_partition(const BoolAlg& alg, Element e, std::size_t max_blocks,
                        const std::function<void(const Partition&)>& fn);
std::vector<Partition> partitions_of(const BoolAlg& alg, Element e, std::size_t max_blocks);

/// Map of Boolean algebras given by the images of source atoms, extended by
/// joins. Images must be pairwise disjoint; the map is unital when they cover
/// the target top. Non-unital instances model ring morphisms such as ideal
/// inclusions.
class BoolMorphism {
 public:
  BoolMorphism(BoolAlg source, BoolAlg target, std::vector<Element> atom_images);

  static BoolMorphism identity(const BoolAlg& alg);

  const BoolAlg& source() const { return source_; }
  const BoolAlg& target() const { return target_; }
  const std::vector<Element>& atom_images() const { return images_; }

  Element operator()(Element e) const;
  bool is_unital() const;
  /// Exhaustive check that meets, joins and complements are preserved.
  bool preserves_operations() const;

  /// (*this) after first.
  BoolMorphism after(const BoolMorphism& first) const;

  bool operator==(const BoolMorphism& other) const = default;

 private:
  BoolAlg source_;
  BoolAlg target_;
  std::vector<Element> images_;
};

/// All unital morphisms source -> target, one per map from target atoms to
/// source atoms.
std::vector<BoolMorphism> unital_morphisms(const BoolAlg& source, const BoolAlg& target);

struct Ultrafilter {
  Element generator;  ///< the atom the filter is principal at
  bool contains(Element e) const { return generator <= e; }
};

/// Stone space of a finite algebra. Points are ultrafilters in atom order; a
/// subset of points is encoded as a bitset over that order.
struct StoneSpace {
  BoolAlg algebra;
  std::vector<Ultrafilter> points;

  /// Clopen of ultrafilters containing e.
  std::uint64_t eta(Element e) const;
  /// The element whose clopen is the given point set.
  Element eta_inverse(std::uint64_t point_set) const;
  /// Powerset algebra of the points, atoms named "u:<atom>".
  BoolAlg clopen_algebra() const;
};

StoneSpace stone_space(const BoolAlg& alg);

/// Exhaustive check that eta is a Boolean isomorphism onto the powerset of
/// points (bijective, preserves top, bottom, meets, joins, complements).
bool verify_stone_roundtrip(const StoneSpace& stone);

struct Coproduct {
  BoolAlg algebra;
  BoolMorphism left;   ///< E -> E (x) top
  BoolMorphism right;  ///< F -> top (x) F
  std::vector<std::size_t> pair_atoms;  ///< index i * |right atoms| + j -> atom of (i, j)
  std::size_t right_count = 0;

  std::size_t pair_atom(std::size_t i, std::size_t j) const { return pair_atoms[i * right_count + j]; }
  Element rectangle(Element e, Element f) const;
  /// Unique h with h.left = phi and h.right = psi.
  BoolMorphism mediate(const BoolMorphism& phi, const BoolMorphism& psi) const;
};

Coproduct coproduct(const BoolAlg& left, const BoolAlg& right);

/// Brute-force universal-property check against one pair of unital morphisms
/// into a common target: exactly one morphism from the coproduct restricts to
/// (phi, psi), and it equals mediate(phi, psi).
bool verify_coproduct(const Coproduct& cp, const BoolMorphism& phi, const BoolMorphism& psi);

struct NullQuotient {
  BoolAlg algebra;
  BoolMorphism projection;
  std::vector<bool> null_atoms;
};

/// Quotient by the ideal generated by the given null atoms. Throws
/// DegenerateQuotient when every atom is null.
NullQuotient quotient_by_null(const BoolAlg& alg, const std::vector<bool>& null_atoms);

struct PrincipalIdeal {
  BoolAlg ideal;
  Element unit;                ///< E, as an element of the parent algebra
  BoolMorphism inclusion;      ///< ideal -> parent, not unital unless E = top
  BoolMorphism projection;     ///< parent -> ideal, G -> G meet E
  std::vector<std::size_t> parent_atoms;  ///< ideal atom -> parent atom
};

/// Throws EmptyElement for e = bottom.
PrincipalIdeal principal_ideal(const BoolAlg& alg, Element e);

}  // namespace catmeas
