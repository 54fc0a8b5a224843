#include "catmeas/simple.hpp"

#include "catmeas/errors.hpp"

#include <algorithm>
#include <map>

namespace catmeas {

namespace {

void require_same(const BoolAlg& a, const BoolAlg& b, const char* what) {
  if (!(a == b)) throw Error(ErrorCode::AlgebraMismatch, std::string(what) + ": elements of different algebras");
}

}  // namespace

SimpleElement::SimpleElement(BoolAlg algebra, std::vector<Rational> atom_values)
    : algebra_(std::move(algebra)), values_(std::move(atom_values)) {
  if (values_.size() != algebra_.atom_count()) throw Error(ErrorCode::ShapeMismatch, "one value per atom");
}

SimpleElement SimpleElement::zero(const BoolAlg& alg) {
  return SimpleElement(alg, std::vector<Rational>(alg.atom_count()));
}

SimpleElement SimpleElement::characteristic(const BoolAlg& alg, Element e, const Rational& k) {
  if (!alg.contains(e)) throw Error(ErrorCode::AlgebraMismatch, "characteristic of a foreign element");
  std::vector<Rational> vals(alg.atom_count());
  for (auto i : alg.atoms_below(e)) vals[i] = k;
  return SimpleElement(alg, std::move(vals));
}

std::vector<SimpleElement::Block> SimpleElement::blocks() const {
  std::map<Rational, Element> by_value;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0) by_value[values_[i]] = by_value[values_[i]] | Element::atom(i);
  }
  std::vector<Block> out;
  for (const auto& [k, e] : by_value) out.push_back(Block{e, k});
  std::sort(out.begin(), out.end(),
            [](const Block& a, const Block& b) { return a.set.lowest_atom() < b.set.lowest_atom(); });
  return out;
}

bool SimpleElement::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Rational& x) { return x == 0; });
}

SimpleElement SimpleElement::operator+(const SimpleElement& o) const {
  require_same(algebra_, o.algebra_, "sum");
  return SimpleElement(algebra_, catmeas::operator+(values_, o.values_));
}

SimpleElement SimpleElement::operator-(const SimpleElement& o) const {
  require_same(algebra_, o.algebra_, "difference");
  return SimpleElement(algebra_, catmeas::operator-(values_, o.values_));
}

SimpleElement SimpleElement::operator*(const SimpleElement& o) const {
  require_same(algebra_, o.algebra_, "product");
  std::vector<Rational> vals(values_.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = values_[i] * o.values_[i];
  return SimpleElement(algebra_, std::move(vals));
}

SimpleElement SimpleElement::scaled(const Rational& k) const {
  return SimpleElement(algebra_, catmeas::scaled(values_, k));
}

SimpleElement canonicalize(const BoolAlg& alg, const std::vector<CharacteristicTerm>& terms) {
  SimpleElement out = SimpleElement::zero(alg);
  for (const auto& t : terms) {
    require_same(alg, t.algebra, "canonicalize");
    out = out + SimpleElement::characteristic(alg, t.set, t.coefficient);
  }
  return out;
}

Rational linf_norm(const SimpleElement& f) {
  Rational out;
  for (const auto& x : f.atom_values()) out = std::max(out, rabs(x));
  return out;
}

SimpleElement multiply(const SimpleElement& f, const SimpleElement& g) { return f * g; }

FinBanSpace linf_space(const BoolAlg& alg) {
  return FinBanSpace(alg.atoms(), std::vector<Rational>(alg.atom_count(), Rational(1)), Flavor::Sup);
}

Vec to_vector(const SimpleElement& f) { return f.atom_values(); }

VectorMeasure characteristic_measure(const BoolAlg& alg) {
  std::vector<Vec> vals;
  for (std::size_t i = 0; i < alg.atom_count(); ++i) {
    Vec v(alg.atom_count());
    v[i] = 1;
    vals.push_back(std::move(v));
  }
  return VectorMeasure(alg, linf_space(alg), std::move(vals));
}

Vec integrate(const SimpleElement& f, const VectorMeasure& nu) {
  require_same(f.algebra(), nu.algebra(), "integrate");
  Vec out(nu.target().dim());
  for (const auto& b : f.blocks()) out = out + scaled(nu(b.set), b.coefficient);
  return out;
}

LinMap integral_map(const VectorMeasure& nu) {
  return LinMap(linf_space(nu.algebra()), nu.target(), Matrix::from_columns(nu.atom_values(), nu.target().dim()));
}

Vec L1Space::coordinates(const SimpleElement& f) const {
  require_same(f.algebra(), measure.algebra(), "L1 class");
  Vec out;
  for (auto a : atoms) out.push_back(f.at(a));
  return out;
}

L1Space l1_space(const MeasureAlgebra& mu) {
  L1Space out{mu, {}, {}};
  std::vector<std::string> basis;
  std::vector<Rational> weights;
  for (std::size_t i = 0; i < mu.algebra().atom_count(); ++i) {
    if (mu.atom_values()[i] == 0) continue;
    out.atoms.push_back(i);
    basis.push_back(mu.algebra().atom_id(i));
    weights.push_back(mu.atom_values()[i]);
  }
  if (out.atoms.empty()) throw Error(ErrorCode::DegenerateQuotient, "L1 of the zero measure");
  out.space = FinBanSpace(std::move(basis), std::move(weights), Flavor::Sum);
  return out;
}

LinMap lipschitz_integral_map(const VectorMeasure& nu, const L1Space& l1) {
  require_same(nu.algebra(), l1.measure.algebra(), "Lipschitz integral");
  if (!lipschitz_norm(nu, l1.measure).bounded) {
    throw Error(ErrorCode::SupportError, "measure charges a null atom of the control measure");
  }
  Matrix m(nu.target().dim(), l1.atoms.size());
  for (std::size_t c = 0; c < l1.atoms.size(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = nu.atom_value(l1.atoms[c])[r];
  return LinMap(l1.space, nu.target(), std::move(m));
}

VectorSimple VectorSimple::from_terms(const BoolAlg& alg, const FinBanSpace& coefficients,
                                      const std::vector<std::pair<Element, Vec>>& terms) {
  VectorSimple out{alg, coefficients, std::vector<Vec>(alg.atom_count(), Vec(coefficients.dim()))};
  for (const auto& [e, b] : terms) {
    if (!alg.contains(e)) throw Error(ErrorCode::AlgebraMismatch, "term outside the algebra");
    if (b.size() != coefficients.dim()) throw Error(ErrorCode::ShapeMismatch, "coefficient has the wrong dimension");
    for (auto i : alg.atoms_below(e)) out.atom_values[i] = out.atom_values[i] + b;
  }
  return out;
}

VectorSimple VectorSimple::mapped(const LinMap& t) const {
  if (!(t.source() == coefficients)) throw Error(ErrorCode::ShapeMismatch, "map from another coefficient space");
  VectorSimple out{algebra, t.target(), {}};
  for (const auto& v : atom_values) out.atom_values.push_back(t(v));
  return out;
}

BochnerResult bochner(const VectorSimple& f, const MeasureAlgebra& mu) {
  require_same(f.algebra, mu.algebra(), "Bochner integral");
  if (f.coefficients.flavor() != Flavor::Sum) {
    throw Error(ErrorCode::FlavorMismatch, "Bochner coefficients must carry a SUM norm");
  }
  const L1Space l1 = l1_space(mu);
  const FinBanSpace& b = f.coefficients;
  const std::size_t m = l1.atoms.size();
  const std::size_t d = b.dim();

  BochnerResult out;
  out.integral = Vec(d);
  for (std::size_t i = 0; i < mu.algebra().atom_count(); ++i) {
    out.integral = out.integral + scaled(f.atom_values[i], mu.atom_values()[i]);
    out.l1_norm += mu.atom_values()[i] * b.norm(f.atom_values[i]);
  }

  std::vector<std::string> basis;
  std::vector<Rational> weights;
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t c = 0; c < m; ++c) {
      basis.push_back(b.basis()[k] + "@" + l1.space.basis()[c]);
      weights.push_back(b.weight(k) * l1.space.weight(c));
      out.element.push_back(f.atom_values[l1.atoms[c]][k]);
    }
  }
  out.bochner_space = FinBanSpace(std::move(basis), std::move(weights), Flavor::Sum);
  out.tensor = projective_tensor(l1.space, b);

  Matrix fwd(m * d, m * d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t c = 0; c < m; ++c) fwd(out.tensor.index(c, k), k * m + c) = 1;
  out.witness = IsoWitness{LinMap(out.bochner_space, out.tensor.space, fwd),
                           LinMap(out.tensor.space, out.bochner_space, fwd.transpose())};
  return out;
}

FubiniResult fubini(const SimpleElement& f, const Coproduct& cp, const MeasureAlgebra& mu, const MeasureAlgebra& nu) {
  require_same(f.algebra(), cp.algebra, "Fubini");
  require_same(cp.left.source(), mu.algebra(), "Fubini left factor");
  require_same(cp.right.source(), nu.algebra(), "Fubini right factor");
  const std::size_t n = mu.algebra().atom_count();
  const std::size_t m = nu.algebra().atom_count();

  FubiniResult out;
  const VectorMeasure joint = product_measure(mu.as_measure(), nu.as_measure(), cp);
  out.joint = integrate(f, joint)[0];

  // Inner integral over the right factor gives a simple function on the left.
  std::vector<Rational> left_fn(n);
  std::vector<Rational> right_fn(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Rational& v = f.at(cp.pair_atom(i, j));
      left_fn[i] += v * nu.atom_values()[j];
      right_fn[j] += v * mu.atom_values()[i];
    }
  }
  out.inner_right = integrate(SimpleElement(mu.algebra(), left_fn), mu.as_measure())[0];
  out.inner_left = integrate(SimpleElement(nu.algebra(), right_fn), nu.as_measure())[0];

  const L1Space joint_l1 = l1_space(MeasureAlgebra(cp.algebra, [&] {
    std::vector<Rational> v;
    for (const auto& x : joint.atom_values()) v.push_back(x[0]);
    return v;
  }()));
  const L1Space left = l1_space(mu);
  const L1Space right = l1_space(nu);
  const TensorProduct t = projective_tensor(left.space, right.space);
  std::vector<std::size_t> joint_pos(cp.algebra.atom_count(), 0);
  for (std::size_t c = 0; c < joint_l1.atoms.size(); ++c) joint_pos[joint_l1.atoms[c]] = c;

  Matrix fwd(t.space.dim(), joint_l1.space.dim());
  for (std::size_t a = 0; a < left.atoms.size(); ++a)
    for (std::size_t b = 0; b < right.atoms.size(); ++b)
      fwd(t.index(a, b), joint_pos[cp.pair_atom(left.atoms[a], right.atoms[b])]) = 1;
  out.witness = IsoWitness{LinMap(joint_l1.space, t.space, fwd), LinMap(t.space, joint_l1.space, fwd.transpose())};
  return out;
}

namespace {

std::vector<std::size_t> point_atoms(const StoneSpace& stone, const BoolAlg& clopens) {
  std::vector<std::size_t> out;
  for (const auto& p : stone.points) {
    out.push_back(*clopens.index_of("u:" + stone.algebra.atom_id(p.generator.lowest_atom())));
  }
  return out;
}

}  // namespace

SimpleElement stone_transfer(const SimpleElement& f, const StoneSpace& stone) {
  require_same(f.algebra(), stone.algebra, "Stone transfer");
  const BoolAlg clopens = stone.clopen_algebra();
  const auto pos = point_atoms(stone, clopens);
  std::vector<Rational> vals(clopens.atom_count());
  for (std::size_t p = 0; p < stone.points.size(); ++p) vals[pos[p]] = f.at(stone.points[p].generator.lowest_atom());
  return SimpleElement(clopens, std::move(vals));
}

VectorMeasure transfer_measure(const VectorMeasure& nu, const StoneSpace& stone) {
  require_same(nu.algebra(), stone.algebra, "measure transfer");
  const BoolAlg clopens = stone.clopen_algebra();
  const auto pos = point_atoms(stone, clopens);
  std::vector<Vec> vals(clopens.atom_count());
  for (std::size_t p = 0; p < stone.points.size(); ++p) vals[pos[p]] = nu(stone.points[p].generator);
  return VectorMeasure(clopens, nu.target(), std::move(vals));
}

IdempotentSplitting split_idempotent(const SimpleElement& e) {
  if (!(e * e == e)) throw Error(ErrorCode::NotIdempotent, "element is not idempotent");
  const BoolAlg& alg = e.algebra();
  IdempotentSplitting out;
  std::vector<std::string> ids;
  std::vector<std::size_t> atoms;
  for (std::size_t i = 0; i < alg.atom_count(); ++i) {
    if (e.at(i) == 0) continue;
    out.support = out.support | Element::atom(i);
    ids.push_back(alg.atom_id(i));
    atoms.push_back(i);
  }
  const FinBanSpace whole = linf_space(alg);
  const FinBanSpace part(ids, std::vector<Rational>(ids.size(), Rational(1)), Flavor::Sup);
  Matrix s(whole.dim(), part.dim());
  for (std::size_t c = 0; c < atoms.size(); ++c) s(atoms[c], c) = 1;
  out.section = LinMap(part, whole, s);
  out.retraction = LinMap(whole, part, s.transpose());
  return out;
}

}  // namespace catmeas
