#include "catmeas/bundles2v.hpp"

#include "catmeas/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace catmeas {

namespace {

using Key = std::vector<std::size_t>;

void require_same_base(const std::vector<std::string>& a, const std::vector<std::string>& b, const char* what) {
  if (a != b) throw Error(ErrorCode::BaseMismatch, std::string(what) + ": base sets differ");
}

/// Permutation matrix sending the coordinate labelled k in the source order
/// to the coordinate labelled k in the target order.
IsoWitness permutation_witness(const FinBanSpace& src, const std::vector<Key>& src_keys, const FinBanSpace& dst,
                               const std::vector<Key>& dst_keys) {
  if (src_keys.size() != src.dim() || dst_keys.size() != dst.dim() || src.dim() != dst.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "canonical isomorphism between spaces of different dimension");
  }
  std::map<Key, std::size_t> position;
  for (std::size_t i = 0; i < dst_keys.size(); ++i) position.emplace(dst_keys[i], i);
  Matrix fwd(dst.dim(), src.dim());
  for (std::size_t i = 0; i < src_keys.size(); ++i) {
    const auto it = position.find(src_keys[i]);
    if (it == position.end()) throw Error(ErrorCode::ShapeMismatch, "canonical isomorphism has no matching coordinate");
    fwd(it->second, i) = 1;
  }
  return IsoWitness{LinMap(src, dst, fwd), LinMap(dst, src, fwd.transpose())};
}

FinBanSpace sum_of_tensors(const std::vector<std::pair<const FinBanSpace*, const FinBanSpace*>>& terms) {
  std::vector<FinBanSpace> parts;
  for (const auto& [a, b] : terms) parts.push_back(projective_tensor(*a, *b).space);
  return direct_sum_space(parts, Flavor::Sum);
}

}  // namespace

Bundle::Bundle(std::vector<std::string> base, std::vector<FinBanSpace> fibers)
    : base_(std::move(base)), fibers_(std::move(fibers)) {
  if (base_.size() != fibers_.size()) throw Error(ErrorCode::ShapeMismatch, "one fiber per base point");
  const std::set<std::string> distinct(base_.begin(), base_.end());
  if (distinct.size() != base_.size()) throw Error(ErrorCode::InvalidModel, "repeated base point");
  for (const auto& f : fibers_)
    if (f.dim() > 0 && f.flavor() != Flavor::Sum) throw Error(ErrorCode::FlavorMismatch, "bundle fibers carry SUM norms");
}

std::size_t Bundle::total_dim() const {
  std::size_t out = 0;
  for (const auto& f : fibers_) out += f.dim();
  return out;
}

std::size_t Bundle::index_of(const std::string& point) const {
  const auto it = std::find(base_.begin(), base_.end(), point);
  if (it == base_.end()) throw Error(ErrorCode::UnknownPoint, "\"" + point + "\" is not a base point");
  return static_cast<std::size_t>(it - base_.begin());
}

Bundle delta_bundle(const std::vector<std::string>& base, const std::string& x, const FinBanSpace& v) {
  Bundle zero = zero_bundle(base);
  std::vector<FinBanSpace> fibers = zero.fibers();
  fibers[zero.index_of(x)] = v;
  return Bundle(base, std::move(fibers));
}

Bundle zero_bundle(const std::vector<std::string>& base) {
  return Bundle(base, std::vector<FinBanSpace>(base.size(), FinBanSpace::zero()));
}

Bundle tensor(const Bundle& a, const Bundle& b) {
  require_same_base(a.base(), b.base(), "bundle tensor");
  std::vector<FinBanSpace> fibers;
  for (std::size_t x = 0; x < a.size(); ++x) fibers.push_back(projective_tensor(a.fiber(x), b.fiber(x)).space);
  return Bundle(a.base(), std::move(fibers));
}

Bundle tensor(const Bundle& a, const FinBanSpace& v) {
  std::vector<FinBanSpace> fibers;
  for (const auto& f : a.fibers()) fibers.push_back(projective_tensor(f, v).space);
  return Bundle(a.base(), std::move(fibers));
}

Bundle bundle_sum(const std::vector<Bundle>& parts, const std::vector<std::string>& base) {
  std::vector<FinBanSpace> fibers;
  for (std::size_t x = 0; x < base.size(); ++x) {
    std::vector<FinBanSpace> summands;
    for (const auto& p : parts) {
      require_same_base(p.base(), base, "bundle sum");
      summands.push_back(p.fiber(x));
    }
    fibers.push_back(direct_sum_space(summands, Flavor::Sum));
  }
  return Bundle(base, std::move(fibers));
}

HomSpace::HomSpace(std::vector<FinBanSpace> sources, std::vector<FinBanSpace> targets)
    : sources_(std::move(sources)), targets_(std::move(targets)) {
  if (sources_.size() != targets_.size()) throw Error(ErrorCode::ShapeMismatch, "hom space blocks");
  offsets_.push_back(0);
  for (std::size_t x = 0; x < sources_.size(); ++x) offsets_.push_back(offsets_.back() + sources_[x].dim() * targets_[x].dim());
}

LinMap HomSpace::block(const Vec& coords, std::size_t x) const {
  Matrix m(targets_[x].dim(), sources_[x].dim());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = coords[offsets_[x] + r * m.cols() + c];
  return LinMap(sources_[x], targets_[x], std::move(m));
}

Vec HomSpace::from_blocks(const std::vector<Matrix>& blocks) const {
  Vec out(dim());
  for (std::size_t x = 0; x < blocks.size(); ++x)
    for (std::size_t r = 0; r < blocks[x].rows(); ++r)
      for (std::size_t c = 0; c < blocks[x].cols(); ++c) out[offsets_[x] + r * blocks[x].cols() + c] = blocks[x](r, c);
  return out;
}

Rational HomSpace::norm(const Vec& coords) const {
  Rational out;
  for (std::size_t x = 0; x < blocks(); ++x) out = std::max(out, operator_norm(block(coords, x)));
  return out;
}

HomSpace hom_space(const Bundle& xi, const Bundle& zeta) {
  require_same_base(xi.base(), zeta.base(), "hom space");
  return HomSpace(xi.fibers(), zeta.fibers());
}

Bundle exponential(const Bundle& rho, const Bundle& zeta) {
  require_same_base(rho.base(), zeta.base(), "exponential");
  std::vector<FinBanSpace> fibers;
  for (std::size_t x = 0; x < rho.size(); ++x) {
    std::vector<std::string> basis;
    for (const auto& r : rho.fiber(x).basis())
      for (const auto& z : zeta.fiber(x).basis()) basis.push_back(r + "^" + z);
    const std::size_t d = basis.size();
    fibers.emplace_back(std::move(basis), std::vector<Rational>(d, Rational(1)), Flavor::Sum);
  }
  return Bundle(rho.base(), std::move(fibers));
}

Rational CurryingAdjunction::curried_norm(const Vec& curried_coords) const {
  Rational out;
  for (std::size_t x = 0; x < xi.size(); ++x) {
    const LinMap g = curried_side.block(curried_coords, x);  // xi_x -> rho_x^zeta_x
    const std::size_t dz = zeta[x].dim(), dr = rho[x].dim();
    for (std::size_t i = 0; i < xi[x].dim(); ++i) {
      Matrix op(dr, dz);
      for (std::size_t r = 0; r < dr; ++r)
        for (std::size_t j = 0; j < dz; ++j) op(r, j) = g.matrix()(r * dz + j, i);
      out = std::max(out, Rational(operator_norm(LinMap(zeta[x], rho[x], op)) / xi[x].weight(i)));
    }
  }
  return out;
}

CurryingAdjunction currying(const Bundle& xi, const Bundle& zeta, const Bundle& rho) {
  require_same_base(xi.base(), zeta.base(), "currying");
  require_same_base(xi.base(), rho.base(), "currying");
  const Bundle xz = tensor(xi, zeta);
  const Bundle rz = exponential(rho, zeta);
  CurryingAdjunction out{hom_space(xz, rho), hom_space(xi, rz), xi.fibers(), zeta.fibers(), rho.fibers(), {}};

  std::vector<Key> tensor_keys;
  std::vector<Key> curried_keys;
  for (std::size_t x = 0; x < xi.size(); ++x) {
    const std::size_t dx = xi.fiber(x).dim(), dz = zeta.fiber(x).dim(), dr = rho.fiber(x).dim();
    for (std::size_t r = 0; r < dr; ++r)
      for (std::size_t i = 0; i < dx; ++i)
        for (std::size_t j = 0; j < dz; ++j) tensor_keys.push_back({x, r, i, j});
    for (std::size_t r = 0; r < dr; ++r)
      for (std::size_t j = 0; j < dz; ++j)
        for (std::size_t i = 0; i < dx; ++i) curried_keys.push_back({x, r, i, j});
  }
  out.witness = permutation_witness(FinBanSpace::l1(out.tensor_side.dim(), "t"), tensor_keys,
                                    FinBanSpace::l1(out.curried_side.dim(), "c"), curried_keys);
  return out;
}

FunctorMatrix FunctorMatrix::identity(const std::vector<std::string>& base) {
  FunctorMatrix out{base, base, {}};
  for (std::size_t y = 0; y < base.size(); ++y) {
    out.entries.emplace_back();
    for (std::size_t x = 0; x < base.size(); ++x) {
      out.entries.back().push_back(x == y ? FinBanSpace::scalars() : FinBanSpace::zero());
    }
  }
  return out;
}

void FunctorMatrix::validate() const {
  if (entries.size() != target.size()) throw Error(ErrorCode::ShapeMismatch, "functor matrix needs one row per target point");
  for (const auto& row : entries) {
    if (row.size() != source.size()) throw Error(ErrorCode::ShapeMismatch, "functor matrix rows must match the source base");
    for (const auto& e : row)
      if (e.dim() > 0 && e.flavor() != Flavor::Sum) throw Error(ErrorCode::FlavorMismatch, "functor matrix entries carry SUM norms");
  }
}

Bundle apply(const FunctorMatrix& t, const Bundle& xi) {
  t.validate();
  require_same_base(t.source, xi.base(), "apply");
  std::vector<FinBanSpace> fibers;
  for (std::size_t y = 0; y < t.target.size(); ++y) {
    std::vector<std::pair<const FinBanSpace*, const FinBanSpace*>> terms;
    for (std::size_t x = 0; x < t.source.size(); ++x) terms.emplace_back(&xi.fiber(x), &t.at(y, x));
    fibers.push_back(sum_of_tensors(terms));
  }
  return Bundle(t.target, std::move(fibers));
}

FunctorMatrix compose(const FunctorMatrix& s, const FunctorMatrix& t) {
  s.validate();
  t.validate();
  require_same_base(s.source, t.target, "compose");
  FunctorMatrix out{t.source, s.target, {}};
  for (std::size_t z = 0; z < s.target.size(); ++z) {
    out.entries.emplace_back();
    for (std::size_t x = 0; x < t.source.size(); ++x) {
      std::vector<std::pair<const FinBanSpace*, const FinBanSpace*>> terms;
      for (std::size_t y = 0; y < t.target.size(); ++y) terms.emplace_back(&s.at(z, y), &t.at(y, x));
      out.entries.back().push_back(sum_of_tensors(terms));
    }
  }
  return out;
}

MatrixTwoCell MatrixTwoCell::then(const MatrixTwoCell& other) const {
  if (!(target == other.source)) throw Error(ErrorCode::ShapeMismatch, "two-cells do not compose");
  MatrixTwoCell out{source, other.target, entries};
  for (std::size_t y = 0; y < entries.size(); ++y)
    for (std::size_t x = 0; x < entries[y].size(); ++x) out.entries[y][x] = other.entries[y][x].after(entries[y][x]);
  return out;
}

bool MatrixTwoCell::is_isometric_iso() const {
  for (const auto& row : entries) {
    for (const auto& e : row) {
      const auto inv = inverse(e.matrix());
      if (!inv || !IsoWitness{e, LinMap(e.target(), e.source(), *inv)}.is_isometric()) return false;
    }
  }
  return true;
}

MatrixTwoCell associator(const FunctorMatrix& r, const FunctorMatrix& s, const FunctorMatrix& t) {
  const FunctorMatrix lhs = compose(compose(r, s), t);
  const FunctorMatrix rhs = compose(r, compose(s, t));
  MatrixTwoCell out{lhs, rhs, {}};
  const std::size_t nx = t.source.size(), ny = t.target.size(), nz = s.target.size(), nw = r.target.size();
  for (std::size_t w = 0; w < nw; ++w) {
    out.entries.emplace_back();
    for (std::size_t x = 0; x < nx; ++x) {
      // Keys (y, z, r, s, t) in the construction order of each side.
      std::vector<Key> left_keys, right_keys;
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t z = 0; z < nz; ++z)
          for (std::size_t i = 0; i < r.at(w, z).dim(); ++i)
            for (std::size_t j = 0; j < s.at(z, y).dim(); ++j)
              for (std::size_t k = 0; k < t.at(y, x).dim(); ++k) left_keys.push_back({y, z, i, j, k});
      for (std::size_t z = 0; z < nz; ++z)
        for (std::size_t i = 0; i < r.at(w, z).dim(); ++i)
          for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t j = 0; j < s.at(z, y).dim(); ++j)
              for (std::size_t k = 0; k < t.at(y, x).dim(); ++k) right_keys.push_back({y, z, i, j, k});
      out.entries.back().push_back(permutation_witness(lhs.at(w, x), left_keys, rhs.at(w, x), right_keys).forward);
    }
  }
  return out;
}

MatrixTwoCell left_unitor(const FunctorMatrix& t) {
  const FunctorMatrix lhs = compose(FunctorMatrix::identity(t.target), t);
  MatrixTwoCell out{lhs, t, {}};
  for (std::size_t y = 0; y < t.target.size(); ++y) {
    out.entries.emplace_back();
    for (std::size_t x = 0; x < t.source.size(); ++x) {
      // Only the y-th summand (scalars (x) T_x^y) is nonzero.
      out.entries.back().emplace_back(lhs.at(y, x), t.at(y, x), Matrix::identity(t.at(y, x).dim()));
    }
  }
  return out;
}

MatrixTwoCell right_unitor(const FunctorMatrix& t) {
  const FunctorMatrix lhs = compose(t, FunctorMatrix::identity(t.source));
  MatrixTwoCell out{lhs, t, {}};
  for (std::size_t y = 0; y < t.target.size(); ++y) {
    out.entries.emplace_back();
    for (std::size_t x = 0; x < t.source.size(); ++x) {
      out.entries.back().emplace_back(lhs.at(y, x), t.at(y, x), Matrix::identity(t.at(y, x).dim()));
    }
  }
  return out;
}

MatrixTwoCell whisker_left(const FunctorMatrix& q, const MatrixTwoCell& theta) {
  const FunctorMatrix src = compose(q, theta.source);
  const FunctorMatrix dst = compose(q, theta.target);
  MatrixTwoCell out{src, dst, {}};
  for (std::size_t z = 0; z < q.target.size(); ++z) {
    out.entries.emplace_back();
    for (std::size_t x = 0; x < theta.source.source.size(); ++x) {
      std::vector<Matrix> blocks;
      for (std::size_t y = 0; y < q.source.size(); ++y) {
        blocks.push_back(Matrix::kron(Matrix::identity(q.at(z, y).dim()), theta.entries[y][x].matrix()));
      }
      out.entries.back().emplace_back(src.at(z, x), dst.at(z, x), Matrix::block_diagonal(blocks));
    }
  }
  return out;
}

MatrixTwoCell whisker_right(const MatrixTwoCell& theta, const FunctorMatrix& t) {
  const FunctorMatrix src = compose(theta.source, t);
  const FunctorMatrix dst = compose(theta.target, t);
  MatrixTwoCell out{src, dst, {}};
  for (std::size_t z = 0; z < theta.source.target.size(); ++z) {
    out.entries.emplace_back();
    for (std::size_t x = 0; x < t.source.size(); ++x) {
      std::vector<Matrix> blocks;
      for (std::size_t y = 0; y < t.target.size(); ++y) {
        blocks.push_back(Matrix::kron(theta.entries[z][y].matrix(), Matrix::identity(t.at(y, x).dim())));
      }
      out.entries.back().emplace_back(src.at(z, x), dst.at(z, x), Matrix::block_diagonal(blocks));
    }
  }
  return out;
}

bool pentagon_holds(const FunctorMatrix& q, const FunctorMatrix& r, const FunctorMatrix& s, const FunctorMatrix& t) {
  const MatrixTwoCell route1 = associator(compose(q, r), s, t).then(associator(q, r, compose(s, t)));
  const MatrixTwoCell route2 = whisker_right(associator(q, r, s), t)
                                   .then(associator(q, compose(r, s), t))
                                   .then(whisker_left(q, associator(r, s, t)));
  if (!(route1.source == route2.source) || !(route1.target == route2.target)) return false;
  for (std::size_t y = 0; y < route1.entries.size(); ++y)
    for (std::size_t x = 0; x < route1.entries[y].size(); ++x)
      if (!(route1.entries[y][x].matrix() == route2.entries[y][x].matrix())) return false;
  return true;
}

CanonicalDecomposition canonical_decomposition(const Bundle& xi) {
  std::vector<Bundle> parts;
  for (std::size_t x = 0; x < xi.size(); ++x) parts.push_back(tensor(delta_bundle(xi.base(), xi.base()[x]), xi.fiber(x)));
  CanonicalDecomposition out{bundle_sum(parts, xi.base()), {}};
  for (std::size_t y = 0; y < xi.size(); ++y) {
    // Fiber y of the sum is 0 + ... + (scalars (x) xi_y) + ... + 0.
    const Matrix m = Matrix::identity(xi.fiber(y).dim());
    out.witness.push_back(IsoWitness{LinMap(xi.fiber(y), out.decomposed.fiber(y), m),
                                     LinMap(out.decomposed.fiber(y), xi.fiber(y), m)});
  }
  return out;
}

std::vector<IsoWitness> apply_compose_witness(const FunctorMatrix& s, const FunctorMatrix& t, const Bundle& xi) {
  const Bundle lhs = apply(s, apply(t, xi));
  const Bundle rhs = apply(compose(s, t), xi);
  std::vector<IsoWitness> out;
  for (std::size_t z = 0; z < s.target.size(); ++z) {
    // Keys (x, y, i, t, s).
    std::vector<Key> left_keys, right_keys;
    for (std::size_t y = 0; y < t.target.size(); ++y)
      for (std::size_t x = 0; x < xi.size(); ++x)
        for (std::size_t i = 0; i < xi.fiber(x).dim(); ++i)
          for (std::size_t k = 0; k < t.at(y, x).dim(); ++k)
            for (std::size_t j = 0; j < s.at(z, y).dim(); ++j) left_keys.push_back({x, y, i, k, j});
    for (std::size_t x = 0; x < xi.size(); ++x)
      for (std::size_t i = 0; i < xi.fiber(x).dim(); ++i)
        for (std::size_t y = 0; y < t.target.size(); ++y)
          for (std::size_t j = 0; j < s.at(z, y).dim(); ++j)
            for (std::size_t k = 0; k < t.at(y, x).dim(); ++k) right_keys.push_back({x, y, i, k, j});
    out.push_back(permutation_witness(lhs.fiber(z), left_keys, rhs.fiber(z), right_keys));
  }
  return out;
}

Bundle product_bundle(const FunctorMatrix& t) {
  t.validate();
  std::vector<std::string> base;
  std::vector<FinBanSpace> fibers;
  for (std::size_t x = 0; x < t.source.size(); ++x) {
    for (std::size_t y = 0; y < t.target.size(); ++y) {
      base.push_back(t.source[x] + "|" + t.target[y]);
      fibers.push_back(t.at(y, x));
    }
  }
  return Bundle(std::move(base), std::move(fibers));
}

FunctorMatrix matrix_of(const Bundle& xi, const std::vector<std::string>& x, const std::vector<std::string>& y) {
  FunctorMatrix out{x, y, std::vector<std::vector<FinBanSpace>>(y.size(), std::vector<FinBanSpace>(x.size()))};
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) out.entries[j][i] = xi.fiber(xi.index_of(x[i] + "|" + y[j]));
  if (xi.size() != x.size() * y.size()) throw Error(ErrorCode::BaseMismatch, "bundle base is not the product X x Y");
  return out;
}

namespace {

FinBanSpace integral_total(const Bundle& xi, const DiscreteCosheafMeasure& mu) {
  require_same_base(xi.base(), mu.base, "direct integral");
  std::vector<std::pair<const FinBanSpace*, const FinBanSpace*>> terms;
  for (std::size_t x = 0; x < xi.size(); ++x) terms.emplace_back(&xi.fiber(x), &mu.weights[x]);
  return sum_of_tensors(terms);
}

}  // namespace

DirectIntegral direct_integral_discrete(const Bundle& xi, const DiscreteCosheafMeasure& mu) {
  DirectIntegral out{integral_total(xi, mu), {}};
  const BoolAlg alg(xi.base());
  std::vector<FinBanSpace> atom_fibers;
  for (std::size_t a = 0; a < alg.atom_count(); ++a) {
    const std::size_t x = xi.index_of(alg.atom_id(a));
    atom_fibers.push_back(projective_tensor(xi.fiber(x), mu.weights[x]).space);
  }
  out.indefinite = cosheaf_from_atoms(alg, atom_fibers);
  return out;
}

std::vector<IsoWitness> integral_naturality(const Bundle& xi, const DiscreteCosheafMeasure& mu, const FunctorMatrix& t) {
  t.validate();
  if (t.source.size() != 1) throw Error(ErrorCode::BaseMismatch, "naturality needs a functor out of a one-point base");
  const Bundle lhs = apply(t, Bundle(t.source, {integral_total(xi, mu)}));

  // T mu: each mu(x) pushed through T, a bundle over T's target.
  std::vector<Bundle> pushed;
  for (const auto& m : mu.weights) pushed.push_back(apply(t, Bundle(t.source, {m})));

  std::vector<IsoWitness> out;
  for (std::size_t y = 0; y < t.target.size(); ++y) {
    std::vector<std::pair<const FinBanSpace*, const FinBanSpace*>> terms;
    for (std::size_t x = 0; x < xi.size(); ++x) terms.emplace_back(&xi.fiber(x), &pushed[x].fiber(y));
    const FinBanSpace rhs = sum_of_tensors(terms);
    const std::size_t dt = t.at(y, 0).dim();
    // Keys (x, i, m, t).
    std::vector<Key> left_keys, right_keys;
    for (std::size_t x = 0; x < xi.size(); ++x)
      for (std::size_t i = 0; i < xi.fiber(x).dim(); ++i)
        for (std::size_t m = 0; m < mu.weights[x].dim(); ++m)
          for (std::size_t k = 0; k < dt; ++k) left_keys.push_back({x, i, m, k});
    right_keys = left_keys;  // both sides enumerate x, then xi_x, then mu(x), then T^y
    out.push_back(permutation_witness(lhs.fiber(y), left_keys, rhs, right_keys));
  }
  return out;
}

DiscreteCosheafMeasure restrict_to_points(const PreCosheaf& mu) {
  const BoolAlg& alg = mu.algebra();
  DiscreteCosheafMeasure out{alg.atoms(), {}};
  for (std::size_t a = 0; a < alg.atom_count(); ++a) out.weights.push_back(mu.space(Element::atom(a)));
  return out;
}

PreCosheaf extend_by_sums(const DiscreteCosheafMeasure& m) {
  const BoolAlg alg(m.base);
  std::vector<FinBanSpace> fibers;
  for (std::size_t a = 0; a < alg.atom_count(); ++a) {
    const auto it = std::find(m.base.begin(), m.base.end(), alg.atom_id(a));
    fibers.push_back(m.weights[static_cast<std::size_t>(it - m.base.begin())]);
  }
  return cosheaf_from_atoms(alg, fibers);
}

void validate_category_functor(const CategoryFunctor& i) {
  const auto& m = i.source;
  const auto& a = i.target;
  if (i.objects.size() != m.object_count() || i.arrows.size() != m.arrow_count()) {
    throw Error(ErrorCode::NotAFunctor, "functor must map every object and arrow");
  }
  for (auto o : i.objects)
    if (o >= a.object_count()) throw Error(ErrorCode::NotAFunctor, "object image out of range");
  for (std::size_t f = 0; f < m.arrow_count(); ++f) {
    const std::size_t g = i.arrows[f];
    if (g >= a.arrow_count()) throw Error(ErrorCode::NotAFunctor, "arrow image out of range");
    if (a.arrow(g).source != i.objects[m.arrow(f).source] || a.arrow(g).target != i.objects[m.arrow(f).target]) {
      throw Error(ErrorCode::NotAFunctor, "arrow " + m.arrow(f).name + " is sent to an arrow with wrong endpoints");
    }
  }
  for (std::size_t o = 0; o < m.object_count(); ++o) {
    if (i.arrows[m.identity(o)] != a.identity(i.objects[o])) throw Error(ErrorCode::NotAFunctor, "identity not preserved");
  }
  for (std::size_t f = 0; f < m.arrow_count(); ++f)
    for (std::size_t g = 0; g < m.arrow_count(); ++g)
      if (m.arrow(f).target == m.arrow(g).source && i.arrows[m.compose(g, f)] != a.compose(i.arrows[g], i.arrows[f])) {
        throw Error(ErrorCode::NotAFunctor, "composition not preserved");
      }
}

bool is_fully_faithful(const CategoryFunctor& i) {
  for (std::size_t p = 0; p < i.source.object_count(); ++p) {
    for (std::size_t q = 0; q < i.source.object_count(); ++q) {
      std::set<std::size_t> images;
      for (auto f : i.source.hom(p, q)) images.insert(i.arrows[f]);
      const auto target_hom = i.target.hom(i.objects[p], i.objects[q]);
      if (images.size() != i.source.hom(p, q).size() || images.size() != target_hom.size()) return false;
    }
  }
  return true;
}

bool is_isometric_onto_quotient(const LinMap& map, const Quotient& q) {
  const Matrix& m = map.matrix();
  const auto inv = inverse(m);
  if (!inv || m.rows() != q.space.dim()) return false;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (q.norm_of_class(m.column(j)) > map.source().weight(j)) return false;
  }
  // The quotient ball is the image of the ambient ball, whose vertices are +-e_k / w_k.
  const Matrix back = *inv * q.projection.matrix();
  for (std::size_t k = 0; k < q.ambient.dim(); ++k) {
    if (map.source().norm(back.column(k)) > q.ambient.weight(k)) return false;
  }
  return true;
}

KanExtension kan_extension_discrete(const FunctorData& f, const CategoryFunctor& i) {
  validate_functor(f);
  validate_category_functor(i);
  const FiniteCategory& m = i.source;
  const FiniteCategory& a = i.target;
  if (!(f.category.objects() == m.objects()) || f.category.arrow_count() != m.arrow_count()) {
    throw Error(ErrorCode::NotAFunctor, "functor data lives on another category");
  }
  const std::size_t n = m.object_count();

  KanExtension out;
  for (std::size_t target = 0; target < a.object_count(); ++target) {
    // l1 on the hom set A(I p, target), one unit-weight coordinate per arrow.
    std::vector<std::vector<std::size_t>> homs(n);
    std::vector<FinBanSpace> hom_spaces;
    for (std::size_t p = 0; p < n; ++p) {
      homs[p] = a.hom(i.objects[p], target);
      std::vector<std::string> labels;
      for (auto h : homs[p]) labels.push_back(a.arrow(h).name);
      hom_spaces.emplace_back(std::move(labels), std::vector<Rational>(homs[p].size(), Rational(1)), Flavor::Sum);
    }
    BifunctorData g{m, {}, {}, {}};
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t c = 0; c < n; ++c) g.spaces.push_back(projective_tensor(hom_spaces[p], f.spaces[c]).space);
    for (std::size_t arr = 0; arr < m.arrow_count(); ++arr) {
      const std::size_t p = m.arrow(arr).source, q = m.arrow(arr).target;
      // Precomposition with I(arr): A(I q, target) -> A(I p, target).
      Matrix pre(homs[p].size(), homs[q].size());
      for (std::size_t k = 0; k < homs[q].size(); ++k) {
        const std::size_t composite = a.compose(homs[q][k], i.arrows[arr]);
        const auto it = std::find(homs[p].begin(), homs[p].end(), composite);
        pre(static_cast<std::size_t>(it - homs[p].begin()), k) = 1;
      }
      const LinMap pre_map(hom_spaces[q], hom_spaces[p], pre);
      for (std::size_t c = 0; c < n; ++c) {
        g.left.push_back(tensor(pre_map, LinMap::identity(f.spaces[c])));
      }
    }
    for (std::size_t arr = 0; arr < m.arrow_count(); ++arr) {
      for (std::size_t c = 0; c < n; ++c) g.right.push_back(tensor(LinMap::identity(hom_spaces[c]), f.maps[arr]));
    }
    out.values.push_back(coend(g));
  }

  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t ip = i.objects[p];
    const Coend& c = out.values[ip];
    const auto homs = a.hom(ip, ip);
    const std::size_t id_pos = static_cast<std::size_t>(std::find(homs.begin(), homs.end(), a.identity(ip)) - homs.begin());
    const std::size_t d = f.spaces[p].dim();
    Matrix embed(homs.size() * d, d);
    for (std::size_t j = 0; j < d; ++j) embed(id_pos * d + j, j) = 1;
    out.eta.emplace_back(f.spaces[p], c.space(), c.wedge[p].matrix() * embed);
    out.eta_isometric_iso.push_back(is_isometric_onto_quotient(out.eta.back(), c.quotient));
  }
  return out;
}

}  // namespace catmeas
