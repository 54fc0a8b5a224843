#include "catmeas/measures.hpp"

#include "catmeas/errors.hpp"

#include <algorithm>

namespace catmeas {

VectorMeasure::VectorMeasure(BoolAlg algebra, FinBanSpace target, std::vector<Vec> atom_values)
    : algebra_(std::move(algebra)), target_(std::move(target)), values_(std::move(atom_values)) {
  if (values_.size() != algebra_.atom_count()) throw Error(ErrorCode::ShapeMismatch, "one value per atom");
  for (const auto& v : values_)
    if (v.size() != target_.dim()) throw Error(ErrorCode::ShapeMismatch, "measure value has the wrong dimension");
}

VectorMeasure VectorMeasure::scalar(BoolAlg algebra, const std::vector<Rational>& atom_values) {
  std::vector<Vec> vals;
  for (const auto& x : atom_values) vals.push_back(Vec{x});
  return VectorMeasure(std::move(algebra), FinBanSpace::scalars(), std::move(vals));
}

Vec VectorMeasure::operator()(Element e) const {
  if (!algebra_.contains(e)) throw Error(ErrorCode::AlgebraMismatch, "element outside the measure's algebra");
  Vec out(target_.dim());
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (e.has_atom(i)) out = out + values_[i];
  return out;
}

Rational VectorMeasure::scalar_value(Element e) const {
  if (!is_scalar()) throw Error(ErrorCode::ShapeMismatch, "scalar value of a vector measure");
  return (*this)(e)[0];
}

std::vector<bool> VectorMeasure::null_atoms() const {
  std::vector<bool> out;
  for (const auto& v : values_) out.push_back(is_zero(v));
  return out;
}

VectorMeasure VectorMeasure::pushed_forward(const LinMap& t) const {
  if (!(t.source() == target_)) throw Error(ErrorCode::ShapeMismatch, "push-forward along a map from another space");
  std::vector<Vec> vals;
  for (const auto& v : values_) vals.push_back(t(v));
  return VectorMeasure(algebra_, t.target(), std::move(vals));
}

MeasureAlgebra::MeasureAlgebra(BoolAlg algebra, std::vector<Rational> atom_values)
    : algebra_(std::move(algebra)), values_(std::move(atom_values)) {
  if (values_.size() != algebra_.atom_count()) throw Error(ErrorCode::ShapeMismatch, "one value per atom");
  for (const auto& v : values_)
    if (v < 0) throw Error(ErrorCode::InvalidModel, "measure algebra value " + to_string(v) + " is negative");
}

Rational MeasureAlgebra::operator()(Element e) const {
  Rational out;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (e.has_atom(i)) out += values_[i];
  return out;
}

std::vector<bool> MeasureAlgebra::null_atoms() const {
  std::vector<bool> out;
  for (const auto& v : values_) out.push_back(v == 0);
  return out;
}

Rational variation(const VectorMeasure& nu, Element e) {
  Rational out;
  for (auto i : nu.algebra().atoms_below(e)) out += nu.target().norm(nu.atom_value(i));
  return out;
}

std::vector<Vec> dual_ball_extreme_points(const FinBanSpace& space) {
  const std::size_t d = space.dim();
  std::vector<Vec> out;
  if (space.flavor() == Flavor::Sum) {
    // Dual of weighted l1 is sup with |phi_i| <= w_i; vertices are sign patterns.
    if (d == 0) return out;
    if (d > 20) throw Error(ErrorCode::FlavorMismatch, "dual-ball enumeration limited to dimension 20");
    const std::uint64_t count = std::uint64_t{1} << (d - 1);
    for (std::uint64_t signs = 0; signs < count; ++signs) {
      Vec phi(d);
      for (std::size_t i = 0; i < d; ++i)
        phi[i] = (i > 0 && ((signs >> (i - 1)) & 1U)) ? Rational(-space.weight(i)) : space.weight(i);
      out.push_back(std::move(phi));
    }
  } else {
    // Dual of weighted sup is l1 with sum |phi_i| / w_i <= 1; vertices are w_i e_i.
    for (std::size_t i = 0; i < d; ++i) {
      Vec phi(d);
      phi[i] = space.weight(i);
      out.push_back(std::move(phi));
    }
  }
  return out;
}

Rational semivariation(const VectorMeasure& nu, Element e) {
  const std::vector<std::size_t> atoms = nu.algebra().atoms_below(e);
  Rational best;
  for (const auto& phi : dual_ball_extreme_points(nu.target())) {
    Rational total;
    for (auto i : atoms) {
      Rational pairing;
      for (std::size_t k = 0; k < phi.size(); ++k) pairing += phi[k] * nu.atom_value(i)[k];
      total += rabs(pairing);
    }
    best = std::max(best, total);
  }
  return best;
}

LipschitzNorm lipschitz_norm(const VectorMeasure& nu, const MeasureAlgebra& mu) {
  if (!(nu.algebra() == mu.algebra())) throw Error(ErrorCode::AlgebraMismatch, "Lipschitz norm across algebras");
  for (std::size_t i = 0; i < nu.algebra().atom_count(); ++i) {
    if (mu.atom_values()[i] == 0 && !is_zero(nu.atom_value(i))) return LipschitzNorm{false, Rational(0)};
  }
  LipschitzNorm out;
  nu.algebra().for_each_element([&](Element e) {
    const Rational m = mu(e);
    if (m == 0) return;
    out.value = std::max(out.value, Rational(nu.target().norm(nu(e)) / m));
  });
  return out;
}

VectorMeasure pullback(const BoolMorphism& phi, const VectorMeasure& nu) {
  if (!(phi.target() == nu.algebra())) throw Error(ErrorCode::AlgebraMismatch, "pullback: measure lives elsewhere");
  std::vector<Vec> vals;
  for (const auto& img : phi.atom_images()) vals.push_back(nu(img));
  return VectorMeasure(phi.source(), nu.target(), std::move(vals));
}

VectorMeasure product_measure(const VectorMeasure& mu, const VectorMeasure& nu, const Coproduct& cp) {
  if (!mu.is_scalar() || !nu.is_scalar()) throw Error(ErrorCode::ShapeMismatch, "product measure of vector measures");
  if (!(cp.left.source() == mu.algebra()) || !(cp.right.source() == nu.algebra())) {
    throw Error(ErrorCode::AlgebraMismatch, "product measure: coproduct of other algebras");
  }
  std::vector<Rational> vals(cp.algebra.atom_count());
  for (std::size_t i = 0; i < mu.algebra().atom_count(); ++i)
    for (std::size_t j = 0; j < nu.algebra().atom_count(); ++j)
      vals[cp.pair_atom(i, j)] = mu.atom_value(i)[0] * nu.atom_value(j)[0];
  return VectorMeasure::scalar(cp.algebra, vals);
}

AlgebraStructure pointwise_algebra(std::size_t n) {
  return AlgebraStructure{[](const Vec& a, const Vec& b) {
                            Vec out(a.size());
                            for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
                            return out;
                          },
                          Vec(n, Rational(1))};
}

AlgebraStructure matrix_algebra(std::size_t n) {
  Vec unit(n * n);
  for (std::size_t i = 0; i < n; ++i) unit[i * n + i] = 1;
  return AlgebraStructure{[n](const Vec& a, const Vec& b) {
                            Vec out(n * n);
                            for (std::size_t i = 0; i < n; ++i)
                              for (std::size_t k = 0; k < n; ++k)
                                for (std::size_t j = 0; j < n; ++j) out[i * n + j] += a[i * n + k] * b[k * n + j];
                            return out;
                          },
                          std::move(unit)};
}

bool is_spectral(const VectorMeasure& nu, const AlgebraStructure& algebra) {
  const BoolAlg& alg = nu.algebra();
  if (nu(alg.top()) != algebra.unit) return false;
  bool ok = true;
  alg.for_each_element([&](Element e) {
    if (!ok) return;
    const Vec ne = nu(e);
    alg.for_each_element([&](Element f) {
      if (ok && nu(e & f) != algebra.multiply(ne, nu(f))) ok = false;
    });
  });
  return ok;
}

NullQuotient quotient_by_null(const VectorMeasure& mu) { return quotient_by_null(mu.algebra(), mu.null_atoms()); }

std::optional<VectorMeasure> factor_through(const NullQuotient& q, const VectorMeasure& nu) {
  if (!(q.projection.source() == nu.algebra())) throw Error(ErrorCode::AlgebraMismatch, "factor_through: algebra");
  std::vector<Vec> vals(q.algebra.atom_count(), Vec(nu.target().dim()));
  for (std::size_t i = 0; i < nu.algebra().atom_count(); ++i) {
    if (q.null_atoms[i]) {
      if (!is_zero(nu.atom_value(i))) return std::nullopt;
      continue;
    }
    vals[q.projection.atom_images()[i].lowest_atom()] = nu.atom_value(i);
  }
  return VectorMeasure(q.algebra, nu.target(), std::move(vals));
}

}  // namespace catmeas
