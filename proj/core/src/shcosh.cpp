#include "catmeas/shcosh.hpp"

#include "catmeas/errors.hpp"

#include <algorithm>
#include <functional>

namespace catmeas {

namespace {

constexpr std::size_t kMaxDiagramAtoms = 10;

std::uint64_t pair_key(Element smaller, Element larger) { return (smaller.bits() << 32) | larger.bits(); }

std::string describe(const BoolAlg& alg, const Partition& p) {
  std::string out = alg.format(p.parent) + " = ";
  for (std::size_t i = 0; i < p.blocks.size(); ++i) out += (i ? " + " : "") + alg.format(p.blocks[i]);
  if (p.blocks.empty()) out += "(empty)";
  return out;
}

/// 0/1 matrix sending the coordinates listed in `small` to their positions in `large`.
Matrix inclusion_matrix(const std::vector<std::size_t>& small, const std::vector<std::size_t>& large) {
  Matrix m(large.size(), small.size());
  for (std::size_t c = 0; c < small.size(); ++c) {
    const auto it = std::find(large.begin(), large.end(), small[c]);
    m(static_cast<std::size_t>(it - large.begin()), c) = 1;
  }
  return m;
}

/// Coordinates (atom, index within fiber) of the direct sum of atom fibers below e.
std::vector<std::size_t> block_coordinates(const BoolAlg& alg, const std::vector<std::size_t>& fiber_dims, Element e) {
  std::vector<std::size_t> out;
  std::size_t base = 0;
  for (std::size_t a = 0; a < alg.atom_count(); ++a) {
    if (e.has_atom(a))
      for (std::size_t k = 0; k < fiber_dims[a]; ++k) out.push_back(base + k);
    base += fiber_dims[a];
  }
  return out;
}

FinBanSpace sup_scalars() { return FinBanSpace({"1"}, {Rational(1)}, Flavor::Sup); }

void require_same_algebra(const BoolAlg& a, const BoolAlg& b) {
  if (!(a == b)) throw Error(ErrorCode::AlgebraMismatch, "diagrams over different algebras");
}

}  // namespace

ElementDiagram::ElementDiagram(BoolAlg algebra, std::vector<FinBanSpace> spaces, const CoverFn& covers, bool covariant,
                               bool require_contractive)
    : algebra_(std::move(algebra)), spaces_(std::move(spaces)), covariant_(covariant) {
  const std::size_t n = algebra_.atom_count();
  if (n > kMaxDiagramAtoms) throw Error(ErrorCode::InvalidModel, "diagrams are limited to 10 atoms");
  const std::uint64_t count = std::uint64_t{1} << n;
  if (spaces_.size() != count) throw Error(ErrorCode::ShapeMismatch, "one space per element is required");
  const Flavor expected = covariant_ ? Flavor::Sum : Flavor::Sup;
  for (const auto& s : spaces_) {
    if (s.dim() > 0 && s.flavor() != expected) {
      throw Error(ErrorCode::FlavorMismatch, covariant_ ? "precosheaf spaces carry SUM norms"
                                                        : "presheaf spaces carry SUP norms");
    }
  }

  for (std::uint64_t f = 0; f < count; ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      const Element small(f);
      if (small.has_atom(i)) continue;
      const Element large = small | Element::atom(i);
      const LinMap m = covers(small, large);
      const FinBanSpace& src = covariant_ ? space(small) : space(large);
      const FinBanSpace& dst = covariant_ ? space(large) : space(small);
      if (m.matrix().rows() != dst.dim() || m.matrix().cols() != src.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "structure map " + algebra_.format(small) + " / " +
                                                  algebra_.format(large) + " has the wrong shape");
      }
      if (require_contractive && operator_norm(LinMap(src, dst, m.matrix())) > 1) {
        throw Error(ErrorCode::NotAFunctor, "structure map " + algebra_.format(small) + " / " +
                                                algebra_.format(large) + " is not contractive");
      }
      maps_[pair_key(small, large)] = m.matrix();
    }
  }

  // Diamonds F < F+i, F+j < F+i+j must commute.
  for (std::uint64_t f = 0; f < count; ++f) {
    const Element bottom(f);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (bottom.has_atom(i) || bottom.has_atom(j)) continue;
        const Element fi = bottom | Element::atom(i);
        const Element fj = bottom | Element::atom(j);
        const Element top = fi | fj;
        const Matrix& a1 = maps_.at(pair_key(bottom, fi));
        const Matrix& a2 = maps_.at(pair_key(fi, top));
        const Matrix& b1 = maps_.at(pair_key(bottom, fj));
        const Matrix& b2 = maps_.at(pair_key(fj, top));
        const bool ok = covariant_ ? (a2 * a1 == b2 * b1) : (a1 * a2 == b1 * b2);
        if (!ok) {
          throw Error(ErrorCode::NotAFunctor,
                      "structure maps around " + algebra_.format(bottom) + " < " + algebra_.format(top) + " do not commute");
        }
      }
    }
  }

  // Fill every comparable pair by peeling off the lowest missing atom.
  std::function<const Matrix&(Element, Element)> fill = [&](Element small, Element large) -> const Matrix& {
    const auto key = pair_key(small, large);
    if (auto it = maps_.find(key); it != maps_.end()) return it->second;
    if (small == large) return maps_[key] = Matrix::identity(space(small).dim());
    const Element step = small | Element::atom((large - small).lowest_atom());
    const Matrix& first = maps_.at(pair_key(small, step));
    const Matrix& rest = fill(step, large);
    Matrix composite = covariant_ ? rest * first : first * rest;
    return maps_[key] = std::move(composite);
  };
  for (std::uint64_t e = 0; e < count; ++e) {
    // Enumerate the submasks of e.
    for (std::uint64_t s = e;; s = (s - 1) & e) {
      fill(Element(s), Element(e));
      if (s == 0) break;
    }
  }
}

const Matrix& ElementDiagram::matrix_between(Element smaller, Element larger) const {
  if (!(smaller <= larger) || !algebra_.contains(larger)) {
    throw Error(ErrorCode::ShapeMismatch, "no structure map: " + algebra_.format(smaller) + " is not below " +
                                              algebra_.format(larger));
  }
  return maps_.at(pair_key(smaller, larger));
}

LinMap ElementDiagram::map_between(Element smaller, Element larger) const {
  const Matrix& m = matrix_between(smaller, larger);
  return covariant_ ? LinMap(space(smaller), space(larger), m) : LinMap(space(larger), space(smaller), m);
}

PreCosheaf l1_cosheaf(const MeasureAlgebra& mu) {
  const BoolAlg& alg = mu.algebra();
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  std::vector<FinBanSpace> spaces;
  std::vector<std::vector<std::size_t>> coords(count);
  for (std::uint64_t e = 0; e < count; ++e) {
    std::vector<std::string> basis;
    std::vector<Rational> weights;
    for (auto a : alg.atoms_below(Element(e))) {
      if (mu.atom_values()[a] == 0) continue;
      coords[e].push_back(a);
      basis.push_back(alg.atom_id(a));
      weights.push_back(mu.atom_values()[a]);
    }
    spaces.emplace_back(std::move(basis), std::move(weights), Flavor::Sum);
  }
  return PreCosheaf(alg, spaces, [&](Element small, Element large) {
    return LinMap(spaces[small.bits()], spaces[large.bits()], inclusion_matrix(coords[small.bits()], coords[large.bits()]));
  });
}

PreCosheaf constant_precosheaf(const BoolAlg& alg, const FinBanSpace& b) {
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  return PreCosheaf(alg, std::vector<FinBanSpace>(count, b), [&](Element, Element) { return LinMap::identity(b); });
}

PreCosheaf zero_precosheaf(const BoolAlg& alg) { return constant_precosheaf(alg, FinBanSpace::zero(Flavor::Sum)); }

PreSheaf zero_presheaf(const BoolAlg& alg) {
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  const FinBanSpace z = FinBanSpace::zero(Flavor::Sup);
  return PreSheaf(alg, std::vector<FinBanSpace>(count, z), [&](Element, Element) { return LinMap::identity(z); });
}

namespace {

struct AtomBlocks {
  std::vector<FinBanSpace> spaces;
  std::vector<std::vector<std::size_t>> coords;
};

AtomBlocks atom_blocks(const BoolAlg& alg, const std::vector<FinBanSpace>& fibers, Flavor flavor) {
  if (fibers.size() != alg.atom_count()) throw Error(ErrorCode::ShapeMismatch, "one fiber per atom");
  std::vector<std::size_t> dims;
  for (const auto& f : fibers) dims.push_back(f.dim());
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  AtomBlocks out;
  for (std::uint64_t e = 0; e < count; ++e) {
    std::vector<FinBanSpace> parts;
    for (auto a : alg.atoms_below(Element(e))) parts.push_back(fibers[a]);
    out.spaces.push_back(direct_sum_space(parts, flavor));
    out.coords.push_back(block_coordinates(alg, dims, Element(e)));
  }
  return out;
}

}  // namespace

PreCosheaf cosheaf_from_atoms(const BoolAlg& alg, const std::vector<FinBanSpace>& atom_fibers) {
  const AtomBlocks blocks = atom_blocks(alg, atom_fibers, Flavor::Sum);
  return PreCosheaf(alg, blocks.spaces, [&](Element small, Element large) {
    return LinMap(blocks.spaces[small.bits()], blocks.spaces[large.bits()],
                  inclusion_matrix(blocks.coords[small.bits()], blocks.coords[large.bits()]));
  });
}

PreSheaf sheaf_from_stalks(const BoolAlg& alg, const std::vector<FinBanSpace>& stalks) {
  const AtomBlocks blocks = atom_blocks(alg, stalks, Flavor::Sup);
  return PreSheaf(alg, blocks.spaces, [&](Element small, Element large) {
    return LinMap(blocks.spaces[large.bits()], blocks.spaces[small.bits()],
                  inclusion_matrix(blocks.coords[small.bits()], blocks.coords[large.bits()]).transpose());
  });
}

namespace {

/// Why the comparison map of a partition fails to be an isometric iso, or "".
std::string comparison_failure(const LinMap& forward) {
  const Matrix& m = forward.matrix();
  if (m.rows() != m.cols()) return "comparison map is not square";
  const auto inv = inverse(m);
  if (!inv) return "comparison map is not invertible";
  if (operator_norm(forward) > 1) return "comparison map is not contractive";
  if (operator_norm(LinMap(forward.target(), forward.source(), *inv)) > 1) return "inverse comparison map is not contractive";
  return "";
}

LinMap cosheaf_comparison(const PreCosheaf& mu, const Partition& p) {
  std::vector<FinBanSpace> parts;
  std::vector<Matrix> arms;
  for (auto b : p.blocks) {
    parts.push_back(mu.space(b));
    arms.push_back(mu.matrix_between(b, p.parent));
  }
  return LinMap(direct_sum_space(parts, Flavor::Sum), mu.space(p.parent),
                Matrix::hstack(arms, mu.space(p.parent).dim()));
}

LinMap sheaf_comparison(const PreSheaf& xi, const Partition& p) {
  std::vector<FinBanSpace> parts;
  std::vector<Matrix> arms;
  for (auto b : p.blocks) {
    parts.push_back(xi.space(b));
    arms.push_back(xi.matrix_between(b, p.parent));
  }
  return LinMap(xi.space(p.parent), direct_sum_space(parts, Flavor::Sup),
                Matrix::vstack(arms, xi.space(p.parent).dim()));
}

template <typename Diagram, typename Comparison>
ConditionVerdict check_condition(const Diagram& d, bool exhaustive, Comparison comparison) {
  const BoolAlg& alg = d.algebra();
  ConditionVerdict verdict;
  auto check = [&](const Partition& p) {
    if (!verdict.holds) return;
    const std::string why = comparison_failure(comparison(d, p));
    if (!why.empty()) {
      verdict.holds = false;
      verdict.counterexample = p;
      verdict.reason = why + " for " + describe(alg, p);
    }
  };
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  for (std::uint64_t bits = 1; bits < count && verdict.holds; ++bits) {
    const Element e(bits);
    if (e.atom_count() < 2) continue;
    if (exhaustive) {
      for_each_partition(alg, e, alg.atom_count(), check);
      continue;
    }
    const Element low = Element::atom(e.lowest_atom());
    const std::uint64_t rest = (e - low).bits();
    // Proper submasks of rest give binary partitions {low + s, e - low - s}.
    for (std::uint64_t s = (rest - 1) & rest;; s = (s - 1) & rest) {
      const Element first = low | Element(s);
      check(make_partition(e, {first, e - first}));
      if (s == 0 || !verdict.holds) break;
    }
  }
  if (verdict.holds && d.space(alg.bottom()).dim() != 0) {
    verdict.holds = false;
    verdict.counterexample = Partition{alg.bottom(), {}};
    verdict.reason = "the empty partition of bottom needs a zero space";
  }
  return verdict;
}

}  // namespace

ConditionVerdict is_cosheaf(const PreCosheaf& mu, bool exhaustive) {
  return check_condition(mu, exhaustive, cosheaf_comparison);
}

ConditionVerdict is_sheaf(const PreSheaf& xi, bool exhaustive) {
  return check_condition(xi, exhaustive, sheaf_comparison);
}

Cosheaf::Cosheaf(PreCosheaf mu) : mu_(std::move(mu)) {
  const ConditionVerdict v = is_cosheaf(mu_);
  if (!v.holds) throw Error(ErrorCode::NotACosheaf, v.reason);
  const BoolAlg& alg = mu_.algebra();
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  for (std::uint64_t e = 0; e < count; ++e) {
    const Element whole(e);
    for (std::uint64_t s = e;; s = (s - 1) & e) {
      const Element part(s);
      const std::size_t df = mu_.space(part).dim();
      const std::size_t de = mu_.space(whole).dim();
      Matrix p;
      if (part == whole) {
        p = Matrix::identity(de);
      } else if (part.is_bottom()) {
        p = Matrix(0, de);
      } else {
        const Element other = whole - part;
        const std::size_t dg = mu_.space(other).dim();
        const Matrix a = Matrix::hstack({mu_.matrix_between(part, whole), mu_.matrix_between(other, whole)}, de);
        Matrix rhs(df + dg, df);
        for (std::size_t i = 0; i < df; ++i) rhs(i, i) = 1;
        const auto x = solve_unique(a.transpose(), rhs);
        if (!x) throw Error(ErrorCode::NotACosheaf, "projection onto " + alg.format(part) + " has no unique solution");
        p = x->transpose();
      }
      projections_[pair_key(part, whole)] = std::move(p);
      if (s == 0) break;
    }
  }
}

LinMap Cosheaf::projection(Element from, Element to) const {
  if (!(to <= from) || !algebra().contains(from)) {
    throw Error(ErrorCode::ShapeMismatch, "no projection: " + algebra().format(to) + " is not below " + algebra().format(from));
  }
  return LinMap(space(from), space(to), projections_.at(pair_key(to, from)));
}

LinMap SpectralData::action(const SimpleElement& f) const {
  if (!(f.algebra() == algebra)) throw Error(ErrorCode::AlgebraMismatch, "spectral action of a foreign element");
  LinMap out = LinMap::zero(carrier, carrier);
  for (const auto& b : f.blocks()) out = out + at(b.set).scaled(b.coefficient);
  return out;
}

SpectralData spectral_measure(const Cosheaf& mu) {
  const BoolAlg& alg = mu.algebra();
  const Element top = alg.top();
  SpectralData out{alg, mu.space(top), {}};
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  for (std::uint64_t e = 0; e < count; ++e) {
    out.projections.push_back(mu.extension(Element(e), top).after(mu.projection(top, Element(e))));
  }
  return out;
}

SpectralLaws verify_spectral(const SpectralData& s) {
  SpectralLaws laws;
  const BoolAlg& alg = s.algebra;
  const Matrix id = Matrix::identity(s.carrier.dim());
  laws.unit = s.at(alg.top()).matrix() == id;
  laws.bottom = s.at(alg.bottom()).matrix().is_zero();
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  for (std::uint64_t e = 0; e < count; ++e) {
    const Matrix& pe = s.projections[e].matrix();
    if (!(pe * pe == pe)) laws.idempotent = false;
    for (std::uint64_t f = 0; f < count; ++f) {
      const Matrix& pf = s.projections[f].matrix();
      if (!(s.projections[e & f].matrix() == pe * pf)) laws.multiplicative = false;
      if ((e & f) == 0 && !(s.projections[e | f].matrix() == pe + pf)) laws.additive = false;
    }
  }
  return laws;
}

Rational essential_sup(const SimpleElement& f, const SpectralData& s) {
  Rational out;
  for (std::size_t a = 0; a < s.algebra.atom_count(); ++a) {
    if (!s.at(Element::atom(a)).matrix().is_zero()) out = std::max(out, rabs(f.at(a)));
  }
  return out;
}

LinMap integrate_simple_morphism(const SimpleElement& f, const Cosheaf& mu, Element e, Element f_target) {
  if (!(f.algebra() == mu.algebra())) throw Error(ErrorCode::AlgebraMismatch, "integrand lives in another algebra");
  const Element support = e & f_target;
  for (std::size_t a = 0; a < f.algebra().atom_count(); ++a) {
    if (f.at(a) != 0 && !support.has_atom(a)) {
      throw Error(ErrorCode::SupportError, "integrand does not vanish off " + mu.algebra().format(support));
    }
  }
  LinMap out = LinMap::zero(mu.space(e), mu.space(f_target));
  for (const auto& b : f.blocks()) {
    out = out + mu.extension(b.set, f_target).after(mu.projection(e, b.set)).scaled(b.coefficient);
  }
  return out;
}

PreSheaf characteristic_sheaf(const BoolAlg& alg, Element e) {
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  std::vector<FinBanSpace> spaces;
  std::vector<std::vector<std::size_t>> coords(count);
  for (std::uint64_t f = 0; f < count; ++f) {
    std::vector<std::string> basis;
    for (auto a : alg.atoms_below(e & Element(f))) {
      coords[f].push_back(a);
      basis.push_back(alg.atom_id(a));
    }
    const std::size_t d = basis.size();
    spaces.emplace_back(std::move(basis), std::vector<Rational>(d, Rational(1)), Flavor::Sup);
  }
  return PreSheaf(alg, spaces, [&](Element small, Element large) {
    return LinMap(spaces[large.bits()], spaces[small.bits()],
                  inclusion_matrix(coords[small.bits()], coords[large.bits()]).transpose());
  });
}

Matrix NaturalTransformations::component_of(const Vec& unknowns, Element e) const {
  const std::size_t off = offsets[e.bits()];
  Matrix m(rows[e.bits()], cols[e.bits()]);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = unknowns[off + r * m.cols() + c];
  return m;
}

Matrix NaturalTransformations::component(const Vec& coords, Element e) const {
  return component_of(basis * coords, e);
}

Vec NaturalTransformations::flatten(const std::vector<Matrix>& components) const {
  Vec out(unknowns());
  for (std::size_t e = 0; e < components.size(); ++e) {
    const Matrix& m = components[e];
    if (m.rows() != rows[e] || m.cols() != cols[e]) throw Error(ErrorCode::ShapeMismatch, "component has the wrong shape");
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) out[offsets[e] + r * m.cols() + c] = m(r, c);
  }
  return out;
}

bool NaturalTransformations::is_natural(const std::vector<Matrix>& components) const {
  return is_zero(constraints * flatten(components));
}

NaturalTransformations natural_transformations(const ElementDiagram& source, const ElementDiagram& target) {
  require_same_algebra(source.algebra(), target.algebra());
  if (source.covariant() != target.covariant()) throw Error(ErrorCode::ShapeMismatch, "diagrams of different variance");
  const BoolAlg& alg = source.algebra();
  const std::size_t n = alg.atom_count();
  const std::uint64_t count = std::uint64_t{1} << n;

  NaturalTransformations out;
  std::size_t total = 0;
  for (std::uint64_t e = 0; e < count; ++e) {
    out.offsets.push_back(total);
    out.rows.push_back(target.space(Element(e)).dim());
    out.cols.push_back(source.space(Element(e)).dim());
    total += out.rows.back() * out.cols.back();
  }

  // For each covering pair with maps S: src(a) -> src(b), T: tgt(a) -> tgt(b):
  // T theta_a - theta_b S = 0.
  std::vector<Vec> rows_list;
  for (std::uint64_t f = 0; f < count; ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      const Element small(f);
      if (small.has_atom(i)) continue;
      const Element large = small | Element::atom(i);
      const Element a = source.covariant() ? small : large;
      const Element b = source.covariant() ? large : small;
      const Matrix& s = source.matrix_between(small, large);
      const Matrix& t = target.matrix_between(small, large);
      const std::size_t ra = out.rows[a.bits()], ca = out.cols[a.bits()];
      const std::size_t rb = out.rows[b.bits()], cb = out.cols[b.bits()];
      for (std::size_t r = 0; r < rb; ++r) {
        for (std::size_t c = 0; c < ca; ++c) {
          Vec row(total);
          for (std::size_t k = 0; k < ra; ++k) row[out.offsets[a.bits()] + k * ca + c] += t(r, k);
          for (std::size_t k = 0; k < cb; ++k) row[out.offsets[b.bits()] + r * cb + k] -= s(k, c);
          if (!is_zero(row)) rows_list.push_back(std::move(row));
        }
      }
    }
  }
  out.constraints = Matrix::from_rows(rows_list, total);
  out.basis = nullspace(out.constraints);
  return out;
}

NaturalTransformations sheaf_hom(const PreSheaf& xi, const PreSheaf& zeta) { return natural_transformations(xi, zeta); }

Cosheafification cosheafify(const PreCosheaf& theta) {
  const BoolAlg& alg = theta.algebra();
  std::vector<FinBanSpace> fibers;
  for (std::size_t a = 0; a < alg.atom_count(); ++a) fibers.push_back(theta.space(Element::atom(a)));
  Cosheafification out{cosheaf_from_atoms(alg, fibers), {}};
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  for (std::uint64_t e = 0; e < count; ++e) {
    const Element whole(e);
    std::vector<Matrix> arms;
    for (auto a : alg.atoms_below(whole)) arms.push_back(theta.matrix_between(Element::atom(a), whole));
    out.counit.emplace_back(out.cosheaf.space(whole), theta.space(whole),
                            Matrix::hstack(arms, theta.space(whole).dim()));
  }
  return out;
}

Factorization factor_through_cosheafification(const Cosheaf& nu, const std::vector<LinMap>& tau,
                                               const Cosheafification& c) {
  const BoolAlg& alg = nu.algebra();
  require_same_algebra(alg, c.cosheaf.algebra());
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  if (tau.size() != count) throw Error(ErrorCode::ShapeMismatch, "one component per element");

  Factorization out;
  std::vector<Matrix> components;
  for (std::uint64_t e = 0; e < count; ++e) {
    const Element whole(e);
    std::vector<Matrix> parts;
    for (auto a : alg.atoms_below(whole)) {
      const Element atom = Element::atom(a);
      parts.push_back(tau[atom.bits()].matrix() * nu.projection(whole, atom).matrix());
    }
    components.push_back(Matrix::vstack(parts, nu.space(whole).dim()));
    out.map.emplace_back(nu.space(whole), c.cosheaf.space(whole), components.back());
  }

  const NaturalTransformations nat = natural_transformations(nu.diagram(), c.cosheaf);
  out.natural = nat.is_natural(components);
  out.commutes = true;
  for (std::uint64_t e = 0; e < count; ++e) {
    if (!(c.counit[e].matrix() * components[e] == tau[e].matrix())) out.commutes = false;
  }

  // Uniqueness: no nonzero natural sigma with counit_E sigma_E = 0 for all E.
  std::vector<Vec> rows;
  for (std::uint64_t e = 0; e < count; ++e) {
    const Matrix& eps = c.counit[e].matrix();
    const std::size_t r_sigma = nat.rows[e], c_sigma = nat.cols[e];
    for (std::size_t r = 0; r < eps.rows(); ++r) {
      for (std::size_t col = 0; col < c_sigma; ++col) {
        Vec row(nat.unknowns());
        for (std::size_t k = 0; k < r_sigma; ++k) row[nat.offsets[e] + k * c_sigma + col] = eps(r, k);
        if (!is_zero(row)) rows.push_back(std::move(row));
      }
    }
  }
  for (std::size_t r = 0; r < nat.constraints.rows(); ++r) rows.push_back(nat.constraints.row(r));
  out.unique = rank(Matrix::from_rows(rows, nat.unknowns())) == nat.unknowns();
  return out;
}

PreCosheaf bva_cosheaf(const BoolAlg& alg, const FinBanSpace& b) {
  if (b.flavor() != Flavor::Sum && b.dim() > 0) throw Error(ErrorCode::FlavorMismatch, "bva needs a SUM coefficient space");
  return cosheaf_from_atoms(alg, std::vector<FinBanSpace>(alg.atom_count(), b));
}

VectorMeasure bva_measure(const BoolAlg& alg, const FinBanSpace& b, Element e, const Vec& coords) {
  const auto below = alg.atoms_below(e);
  if (coords.size() != below.size() * b.dim()) throw Error(ErrorCode::ShapeMismatch, "bva coordinates");
  std::vector<Vec> vals(alg.atom_count(), Vec(b.dim()));
  for (std::size_t k = 0; k < below.size(); ++k)
    for (std::size_t j = 0; j < b.dim(); ++j) vals[below[k]][j] = coords[k * b.dim() + j];
  return VectorMeasure(alg, b, std::move(vals));
}

LinMap bva_evaluation(const BoolAlg& alg, const FinBanSpace& b, Element e) {
  const auto below = alg.atoms_below(e);
  std::vector<FinBanSpace> parts(below.size(), b);
  std::vector<Matrix> arms(below.size(), Matrix::identity(b.dim()));
  return LinMap(direct_sum_space(parts, Flavor::Sum), b, Matrix::hstack(arms, b.dim()));
}

std::vector<LinMap> constant_universal_map(const Cosheaf& theta, const std::vector<LinMap>& tau, const FinBanSpace& b) {
  const BoolAlg& alg = theta.algebra();
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  if (tau.size() != count) throw Error(ErrorCode::ShapeMismatch, "one cocone component per element");
  const PreCosheaf bva = bva_cosheaf(alg, b);
  std::vector<LinMap> out;
  for (std::uint64_t e = 0; e < count; ++e) {
    const Element whole(e);
    std::vector<Matrix> parts;
    for (auto a : alg.atoms_below(whole)) {
      const Element atom = Element::atom(a);
      parts.push_back(tau[atom.bits()].matrix() * theta.projection(whole, atom).matrix());
    }
    out.emplace_back(theta.space(whole), bva.space(whole), Matrix::vstack(parts, theta.space(whole).dim()));
  }
  return out;
}

PreSheaf yoneda_presheaf(const BoolAlg& alg, Element b) {
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  std::vector<FinBanSpace> spaces;
  for (std::uint64_t f = 0; f < count; ++f) {
    spaces.push_back(Element(f) <= b ? sup_scalars() : FinBanSpace::zero(Flavor::Sup));
  }
  return PreSheaf(alg, spaces, [&](Element small, Element large) {
    Matrix m(spaces[small.bits()].dim(), spaces[large.bits()].dim());
    if (large <= b) m(0, 0) = 1;
    return LinMap(spaces[large.bits()], spaces[small.bits()], m);
  });
}

PreCosheaf yoneda_precosheaf(const BoolAlg& alg, Element a) {
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  std::vector<FinBanSpace> spaces;
  for (std::uint64_t f = 0; f < count; ++f) {
    spaces.push_back(a <= Element(f) ? FinBanSpace::scalars() : FinBanSpace::zero(Flavor::Sum));
  }
  return PreCosheaf(alg, spaces, [&](Element small, Element large) {
    Matrix m(spaces[large.bits()].dim(), spaces[small.bits()].dim());
    if (a <= small) m(0, 0) = 1;
    return LinMap(spaces[small.bits()], spaces[large.bits()], m);
  });
}

namespace {

FinBanSpace unit_space(std::size_t dim, Flavor flavor, const std::string& prefix) {
  std::vector<std::string> basis;
  for (std::size_t i = 0; i < dim; ++i) basis.push_back(prefix + std::to_string(i));
  return FinBanSpace(std::move(basis), std::vector<Rational>(dim, Rational(1)), flavor);
}

/// Matrix of postcomposition with a Yoneda comparison, from Nat(d, Y_from) to
/// Nat(d, Y_to) in basis coordinates. A component survives exactly where the
/// old representable was nonzero; elsewhere the new component is zero.
Matrix yoneda_postcompose(const NaturalTransformations& from, const NaturalTransformations& to, std::uint64_t count) {
  Matrix out(to.dim(), from.dim());
  for (std::size_t k = 0; k < from.dim(); ++k) {
    const Vec old = from.basis.column(k);
    std::vector<Matrix> comps;
    for (std::uint64_t e = 0; e < count; ++e) {
      Matrix c(to.rows[e], to.cols[e]);
      if (from.rows[e] == 1 && to.rows[e] == 1) c = from.component_of(old, Element(e));
      comps.push_back(std::move(c));
    }
    const auto coords = solve_unique(to.basis, Matrix::from_columns({to.flatten(comps)}, to.unknowns()));
    if (!coords) throw Error(ErrorCode::NotAFunctor, "postcomposition leaves the space of natural maps");
    for (std::size_t r = 0; r < to.dim(); ++r) out(r, k) = (*coords)(r, 0);
  }
  return out;
}

}  // namespace

PreCosheaf isbell(const PreSheaf& xi) {
  const BoolAlg& alg = xi.algebra();
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  std::vector<NaturalTransformations> nat;
  std::vector<FinBanSpace> spaces;
  for (std::uint64_t a = 0; a < count; ++a) {
    nat.push_back(natural_transformations(xi, yoneda_presheaf(alg, Element(a))));
    spaces.push_back(unit_space(nat.back().dim(), Flavor::Sum, "n"));
  }
  return PreCosheaf(
      alg, spaces,
      [&](Element small, Element large) {
        return LinMap(spaces[small.bits()], spaces[large.bits()],
                      yoneda_postcompose(nat[small.bits()], nat[large.bits()], count));
      },
      false);
}

PreSheaf isbell_adjoint(const PreCosheaf& mu) {
  const BoolAlg& alg = mu.algebra();
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  std::vector<NaturalTransformations> nat;
  std::vector<FinBanSpace> spaces;
  for (std::uint64_t a = 0; a < count; ++a) {
    nat.push_back(natural_transformations(mu, yoneda_precosheaf(alg, Element(a))));
    spaces.push_back(unit_space(nat.back().dim(), Flavor::Sup, "n"));
  }
  return PreSheaf(
      alg, spaces,
      [&](Element small, Element large) {
        return LinMap(spaces[large.bits()], spaces[small.bits()],
                      yoneda_postcompose(nat[large.bits()], nat[small.bits()], count));
      },
      false);
}

IsbellAdjunction verify_isbell_adjunction(const PreSheaf& xi, const PreCosheaf& mu) {
  const BoolAlg& alg = xi.algebra();
  require_same_algebra(alg, mu.algebra());
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  const PreCosheaf lxi = isbell(xi);
  const PreSheaf rmu = isbell_adjoint(mu);
  std::vector<NaturalTransformations> n_left;   // Nat(xi, Y^b)
  std::vector<NaturalTransformations> n_right;  // Nat(mu, Y_F)
  for (std::uint64_t e = 0; e < count; ++e) {
    n_left.push_back(natural_transformations(xi, yoneda_presheaf(alg, Element(e))));
    n_right.push_back(natural_transformations(mu, yoneda_precosheaf(alg, Element(e))));
  }
  const NaturalTransformations left = natural_transformations(mu, lxi);
  const NaturalTransformations right = natural_transformations(xi, rmu);

  IsbellAdjunction out;
  out.left_dim = left.dim();
  out.right_dim = right.dim();
  out.transposes_natural = true;
  for (std::size_t k = 0; k < left.dim(); ++k) {
    const Vec sigma = left.basis.column(k);
    // beta[F][b](i, j) = pairing of xi(F)_i with mu(b)_j, for F <= b.
    std::vector<Matrix> rho(count);
    for (std::uint64_t f = 0; f < count; ++f) {
      const Element small(f);
      const std::size_t dxi = xi.space(small).dim();
      rho[f] = Matrix(right.rows[f], dxi);
      for (std::size_t i = 0; i < dxi; ++i) {
        std::vector<Matrix> comps;
        for (std::uint64_t b = 0; b < count; ++b) {
          Matrix row(n_right[f].rows[b], n_right[f].cols[b]);
          if (small <= Element(b)) {
            const Matrix sig_b = left.component_of(sigma, Element(b));
            for (std::size_t j = 0; j < row.cols(); ++j) {
              const Vec functional = n_left[b].basis * sig_b.column(j);
              row(0, j) = n_left[b].component_of(functional, small)(0, i);
            }
          }
          comps.push_back(std::move(row));
        }
        const auto coords = solve_unique(n_right[f].basis,
                                         Matrix::from_columns({n_right[f].flatten(comps)}, n_right[f].unknowns()));
        if (!coords) {
          out.transposes_natural = false;
          continue;
        }
        for (std::size_t r = 0; r < rho[f].rows(); ++r) rho[f](r, i) = (*coords)(r, 0);
      }
    }
    if (!right.is_natural(rho)) out.transposes_natural = false;
    out.transposed.push_back(right.flatten(rho));
  }
  out.bijective = out.transposes_natural && out.left_dim == out.right_dim &&
                  rank(Matrix::from_columns(out.transposed, right.unknowns())) == out.left_dim;
  return out;
}

StoneSheafTransfer stone_transfer_sheaf(const PreSheaf& xi, const StoneSpace& stone) {
  const BoolAlg& alg = xi.algebra();
  require_same_algebra(alg, stone.algebra);
  StoneSheafTransfer out;
  std::vector<FinBanSpace> by_atom(alg.atom_count());
  for (const auto& p : stone.points) {
    out.stalks.push_back(xi.space(p.generator));
    by_atom[p.generator.lowest_atom()] = out.stalks.back();
  }
  out.rebuilt = sheaf_from_stalks(alg, by_atom);
  const std::uint64_t count = std::uint64_t{1} << alg.atom_count();
  for (std::uint64_t e = 0; e < count; ++e) {
    const Element whole(e);
    std::vector<Matrix> arms;
    for (auto a : alg.atoms_below(whole)) arms.push_back(xi.matrix_between(Element::atom(a), whole));
    const Matrix fwd = Matrix::vstack(arms, xi.space(whole).dim());
    const auto inv = inverse(fwd);
    const FinBanSpace& target = out.rebuilt.space(whole);
    out.comparison.push_back(IsoWitness{LinMap(xi.space(whole), target, fwd),
                                        inv ? LinMap(target, xi.space(whole), *inv) : LinMap::zero(target, xi.space(whole))});
  }
  return out;
}

}  // namespace catmeas
