#include "catmeas/finban.hpp"

#include "catmeas/errors.hpp"
#include "catmeas/lp.hpp"

#include <algorithm>
#include <map>

namespace catmeas {

std::string_view to_string(Flavor f) { return f == Flavor::Sum ? "sum" : "sup"; }

FinBanSpace::FinBanSpace(std::vector<std::string> basis, std::vector<Rational> weights, Flavor flavor)
    : basis_(std::move(basis)), weights_(std::move(weights)), flavor_(flavor) {
  if (basis_.size() != weights_.size()) throw Error(ErrorCode::ShapeMismatch, "one weight per basis vector");
  for (const auto& w : weights_)
    if (w <= 0) throw Error(ErrorCode::NonPositiveWeight, "weight " + to_string(w) + " is not positive");
}

FinBanSpace FinBanSpace::l1(std::size_t n, const std::string& prefix) {
  std::vector<std::string> basis;
  for (std::size_t i = 0; i < n; ++i) basis.push_back(prefix + std::to_string(i));
  return FinBanSpace(std::move(basis), std::vector<Rational>(n, Rational(1)), Flavor::Sum);
}

FinBanSpace FinBanSpace::linf(std::size_t n, const std::string& prefix) {
  return l1(n, prefix).with_flavor(Flavor::Sup);
}

FinBanSpace FinBanSpace::scalars() { return FinBanSpace({"1"}, {Rational(1)}, Flavor::Sum); }

FinBanSpace FinBanSpace::zero(Flavor flavor) { return FinBanSpace({}, {}, flavor); }

Rational FinBanSpace::norm(const Vec& v) const {
  if (v.size() != dim()) throw Error(ErrorCode::ShapeMismatch, "vector length does not match space");
  Rational out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Rational term = weights_[i] * rabs(v[i]);
    if (flavor_ == Flavor::Sum) {
      out += term;
    } else if (term > out) {
      out = term;
    }
  }
  return out;
}

LinMap::LinMap(FinBanSpace source, FinBanSpace target, Matrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "matrix shape " + std::to_string(matrix_.rows()) + "x" +
                                              std::to_string(matrix_.cols()) + " does not match spaces " +
                                              std::to_string(source_.dim()) + " -> " + std::to_string(target_.dim()));
  }
}

LinMap LinMap::identity(const FinBanSpace& space) { return LinMap(space, space, Matrix::identity(space.dim())); }

LinMap LinMap::zero(const FinBanSpace& source, const FinBanSpace& target) {
  return LinMap(source, target, Matrix(target.dim(), source.dim()));
}

LinMap LinMap::after(const LinMap& first) const {
  if (first.target_.dim() != source_.dim()) throw Error(ErrorCode::ShapeMismatch, "composition of incompatible maps");
  return LinMap(first.source_, target_, matrix_ * first.matrix_);
}

LinMap LinMap::operator+(const LinMap& other) const {
  return LinMap(source_, target_, matrix_ + other.matrix_);
}

LinMap LinMap::scaled(const Rational& k) const { return LinMap(source_, target_, matrix_.scaled(k)); }

Rational operator_norm(const LinMap& map) {
  const FinBanSpace& s = map.source();
  const FinBanSpace& t = map.target();
  const Matrix& a = map.matrix();
  Rational best;
  if (s.flavor() == Flavor::Sum && t.flavor() == Flavor::Sum) {
    for (std::size_t j = 0; j < s.dim(); ++j) {
      Rational col;
      for (std::size_t i = 0; i < t.dim(); ++i) col += t.weight(i) * rabs(a(i, j));
      best = std::max(best, Rational(col / s.weight(j)));
    }
  } else if (s.flavor() == Flavor::Sup && t.flavor() == Flavor::Sup) {
    for (std::size_t i = 0; i < t.dim(); ++i) {
      Rational row;
      for (std::size_t j = 0; j < s.dim(); ++j) row += rabs(a(i, j)) / s.weight(j);
      best = std::max(best, Rational(row * t.weight(i)));
    }
  } else if (s.flavor() == Flavor::Sum && t.flavor() == Flavor::Sup) {
    for (std::size_t i = 0; i < t.dim(); ++i)
      for (std::size_t j = 0; j < s.dim(); ++j) best = std::max(best, Rational(t.weight(i) * rabs(a(i, j)) / s.weight(j)));
  } else {
    if (s.dim() > 20) throw Error(ErrorCode::FlavorMismatch, "sup -> sum operator norm limited to source dimension 20");
    if (s.dim() == 0) return best;
    // Vertices of the weighted sup ball are (+-1/w_j); v and -v give the same norm.
    const std::uint64_t count = std::uint64_t{1} << (s.dim() - 1);
    for (std::uint64_t signs = 0; signs < count; ++signs) {
      Vec v(s.dim());
      for (std::size_t j = 0; j < s.dim(); ++j) {
        const Rational x = Rational(1) / s.weight(j);
        v[j] = (j > 0 && ((signs >> (j - 1)) & 1U)) ? Rational(-x) : x;
      }
      best = std::max(best, t.norm(a * v));
    }
  }
  return best;
}

namespace {

// Decides a * b == I entry by entry, without materializing the product.
bool product_is_identity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) return false;
  const Rational zero, one(1);
  Rational acc, term;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      acc = zero;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const Rational& x = a(i, k);
        const Rational& y = b(k, j);
        if (x.is_zero() || y.is_zero()) continue;
        term = x;
        term *= y;
        acc += term;
      }
      if (i == j ? acc != one : !acc.is_zero()) return false;
    }
  }
  return true;
}

}  // namespace

bool IsoWitness::is_inverse_pair() const {
  if (forward.source().dim() != backward.target().dim() || forward.target().dim() != backward.source().dim()) {
    return false;
  }
  return product_is_identity(backward.matrix(), forward.matrix()) &&
         product_is_identity(forward.matrix(), backward.matrix());
}

bool IsoWitness::is_isometric() const {
  return is_inverse_pair() && operator_norm(forward) <= 1 && operator_norm(backward) <= 1;
}

LinMap DirectSum::copair(const std::vector<LinMap>& arms) const {
  if (arms.size() != injections.size()) throw Error(ErrorCode::ShapeMismatch, "copair: one arm per summand");
  if (arms.empty()) throw Error(ErrorCode::ShapeMismatch, "copair of an empty sum needs a target");
  std::vector<Matrix> blocks;
  for (const auto& arm : arms) blocks.push_back(arm.matrix());
  return LinMap(space, arms.front().target(), Matrix::hstack(blocks, arms.front().target().dim()));
}

LinMap DirectSum::pair(const std::vector<LinMap>& arms) const {
  if (arms.size() != projections.size()) throw Error(ErrorCode::ShapeMismatch, "pair: one arm per factor");
  if (arms.empty()) throw Error(ErrorCode::ShapeMismatch, "pair into an empty product needs a source");
  std::vector<Matrix> blocks;
  for (const auto& arm : arms) blocks.push_back(arm.matrix());
  return LinMap(arms.front().source(), space, Matrix::vstack(blocks, arms.front().source().dim()));
}

FinBanSpace direct_sum_space(const std::vector<FinBanSpace>& spaces, Flavor empty_flavor) {
  const Flavor flavor = spaces.empty() ? empty_flavor : spaces.front().flavor();
  std::vector<std::string> basis;
  std::vector<Rational> weights;
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    if (spaces[k].flavor() != flavor) throw Error(ErrorCode::FlavorMismatch, "direct sum of mixed flavors");
    for (std::size_t i = 0; i < spaces[k].dim(); ++i) {
      basis.push_back(std::to_string(k) + ":" + spaces[k].basis()[i]);
      weights.push_back(spaces[k].weight(i));
    }
  }
  return FinBanSpace(std::move(basis), std::move(weights), flavor);
}

DirectSum direct_sum(const std::vector<FinBanSpace>& spaces, Flavor empty_flavor) {
  DirectSum out{direct_sum_space(spaces, empty_flavor), {}, {}};
  std::size_t offset = 0;
  for (const auto& s : spaces) {
    Matrix inj(out.space.dim(), s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) inj(offset + i, i) = 1;
    out.projections.emplace_back(out.space, s, inj.transpose());
    out.injections.emplace_back(s, out.space, std::move(inj));
    offset += s.dim();
  }
  return out;
}

Vec TensorProduct::embed(const Vec& a, const Vec& b) const {
  if (b.size() != right_dim || a.size() * right_dim != space.dim()) throw Error(ErrorCode::ShapeMismatch, "tensor embed");
  Vec out(space.dim());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[index(i, j)] = a[i] * b[j];
  return out;
}

TensorProduct projective_tensor(const FinBanSpace& a, const FinBanSpace& b) {
  if (a.flavor() != Flavor::Sum || b.flavor() != Flavor::Sum) {
    throw Error(ErrorCode::FlavorMismatch, "projective tensor is defined here for SUM spaces only");
  }
  std::vector<std::string> basis;
  std::vector<Rational> weights;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) {
      basis.push_back(a.basis()[i] + "*" + b.basis()[j]);
      weights.push_back(a.weight(i) * b.weight(j));
    }
  return TensorProduct{FinBanSpace(std::move(basis), std::move(weights), Flavor::Sum), b.dim()};
}

LinMap tensor(const LinMap& f, const LinMap& g) {
  return LinMap(projective_tensor(f.source(), g.source()).space, projective_tensor(f.target(), g.target()).space,
                Matrix::kron(f.matrix(), g.matrix()));
}

Rational Quotient::norm(const Vec& v) const {
  const std::size_t n = ambient.dim();
  if (v.size() != n) throw Error(ErrorCode::ShapeMismatch, "quotient norm: vector length");
  const std::size_t r = relations.cols();
  if (r == 0) return ambient.norm(v);
  // v = p - q + R t+ - R t-, minimize sum w (p + q).
  LinearProgram lp;
  lp.equality = Matrix(n, 2 * n + 2 * r);
  lp.rhs = v;
  lp.cost.assign(2 * n + 2 * r, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    lp.equality(i, i) = 1;
    lp.equality(i, n + i) = -1;
    lp.cost[i] = ambient.weight(i);
    lp.cost[n + i] = ambient.weight(i);
    for (std::size_t k = 0; k < r; ++k) {
      lp.equality(i, 2 * n + k) = relations(i, k);
      lp.equality(i, 2 * n + r + k) = -relations(i, k);
    }
  }
  const LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) throw Error(ErrorCode::InvalidModel, "quotient norm program not optimal");
  return res.value;
}

Quotient quotient(const FinBanSpace& ambient, const std::vector<Vec>& relations) {
  if (ambient.flavor() != Flavor::Sum) throw Error(ErrorCode::FlavorMismatch, "quotient requires a SUM space");
  const std::size_t n = ambient.dim();
  for (const auto& w : relations)
    if (w.size() != n) throw Error(ErrorCode::ShapeMismatch, "relation vector length");
  const RowEchelon e = rref(Matrix::from_rows(relations, n));
  const std::size_t r = e.pivots.size();

  std::vector<std::optional<std::size_t>> pivot_row(n);
  for (std::size_t k = 0; k < r; ++k) pivot_row[e.pivots[k]] = k;
  std::vector<std::size_t> kept;
  std::vector<std::size_t> position(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!pivot_row[j]) {
      position[j] = kept.size();
      kept.push_back(j);
    }
  }

  Matrix rel(n, r);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t j = 0; j < n; ++j) rel(j, k) = e.reduced(k, j);

  Matrix proj(kept.size(), n);
  Matrix section(n, kept.size());
  for (std::size_t j = 0; j < n; ++j) {
    if (!pivot_row[j]) {
      proj(position[j], j) = 1;
      section(j, position[j]) = 1;
    } else {
      for (std::size_t k = 0; k < kept.size(); ++k) proj(k, j) = -e.reduced(*pivot_row[j], kept[k]);
    }
  }

  Quotient q;
  q.ambient = ambient;
  q.relations = rel;
  q.section = section;
  std::vector<std::string> basis;
  std::vector<Rational> weights;
  for (auto j : kept) {
    basis.push_back("[" + ambient.basis()[j] + "]");
    Vec ej(n);
    ej[j] = 1;
    weights.push_back(q.norm(ej));
  }
  q.space = FinBanSpace(std::move(basis), std::move(weights), Flavor::Sum);
  q.projection = LinMap(ambient, q.space, std::move(proj));
  q.weighted_l1 = operator_norm(q.projection) <= 1;
  return q;
}

FiniteCategory::FiniteCategory(std::vector<std::string> objects, std::vector<Arrow> arrows,
                               const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& composition)
    : objects_(std::move(objects)) {
  const std::size_t n = objects_.size();
  for (std::size_t i = 0; i < n; ++i) arrows_.push_back(Arrow{"id_" + objects_[i], i, i});
  for (auto& a : arrows) {
    if (a.source >= n || a.target >= n) throw Error(ErrorCode::InvalidModel, "arrow endpoint out of range");
    arrows_.push_back(std::move(a));
  }
  const std::size_t m = arrows_.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  table_.assign(m * m, kUnset);
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t f = 0; f < m; ++f) {
      if (arrows_[f].target != arrows_[g].source) continue;
      if (is_identity(g)) table_[g * m + f] = f;
      else if (is_identity(f)) table_[g * m + f] = g;
    }
  for (const auto& [g, f, h] : composition) {
    if (g >= m || f >= m || h >= m) throw Error(ErrorCode::NotAFunctor, "composition entry out of range");
    if (arrows_[f].target != arrows_[g].source || arrows_[h].source != arrows_[f].source ||
        arrows_[h].target != arrows_[g].target) {
      throw Error(ErrorCode::NotAFunctor, "composition entry has wrong endpoints");
    }
    table_[g * m + f] = h;
  }
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t f = 0; f < m; ++f)
      if (arrows_[f].target == arrows_[g].source && table_[g * m + f] == kUnset) {
        throw Error(ErrorCode::NotAFunctor, "missing composite " + arrows_[g].name + " o " + arrows_[f].name);
      }
  for (std::size_t h = 0; h < m; ++h)
    for (std::size_t g = 0; g < m; ++g) {
      if (arrows_[g].target != arrows_[h].source) continue;
      for (std::size_t f = 0; f < m; ++f) {
        if (arrows_[f].target != arrows_[g].source) continue;
        if (compose(h, compose(g, f)) != compose(compose(h, g), f)) {
          throw Error(ErrorCode::NotAFunctor, "composition table is not associative");
        }
      }
    }
}

FiniteCategory FiniteCategory::discrete(std::vector<std::string> objects) {
  return FiniteCategory(std::move(objects), {}, {});
}

FiniteCategory FiniteCategory::from_poset(std::vector<std::string> objects,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& relations) {
  const std::size_t n = objects.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (const auto& [a, b] : relations) {
    if (a >= n || b >= n) throw Error(ErrorCode::InvalidModel, "poset relation out of range");
    leq[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
  std::vector<Arrow> arrows;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[{i, i}] = i;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !leq[i][j]) continue;
      if (leq[j][i]) throw Error(ErrorCode::InvalidModel, "relations are not antisymmetric");
      index[{i, j}] = n + arrows.size();
      arrows.push_back(Arrow{objects[i] + "<" + objects[j], i, j});
    }
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> comp;
  for (const auto& [ab, f] : index)
    for (const auto& [cd, g] : index) {
      if (ab.second != cd.first || f < n || g < n) continue;
      comp.emplace_back(g, f, index.at({ab.first, cd.second}));
    }
  return FiniteCategory(std::move(objects), std::move(arrows), comp);
}

std::size_t FiniteCategory::compose(std::size_t g, std::size_t f) const {
  const std::size_t h = table_[g * arrows_.size() + f];
  if (h == static_cast<std::size_t>(-1)) throw Error(ErrorCode::NotAFunctor, "arrows are not composable");
  return h;
}

std::vector<std::size_t> FiniteCategory::hom(std::size_t a, std::size_t b) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < arrows_.size(); ++i)
    if (arrows_[i].source == a && arrows_[i].target == b) out.push_back(i);
  return out;
}

void validate_functor(const FunctorData& f) {
  const auto& c = f.category;
  if (f.spaces.size() != c.object_count() || f.maps.size() != c.arrow_count()) {
    throw Error(ErrorCode::NotAFunctor, "functor needs one space per object and one map per arrow");
  }
  for (std::size_t i = 0; i < c.arrow_count(); ++i) {
    const auto& a = c.arrow(i);
    if (!(f.maps[i].source() == f.spaces[a.source]) || !(f.maps[i].target() == f.spaces[a.target])) {
      throw Error(ErrorCode::NotAFunctor, "map for " + a.name + " has the wrong spaces");
    }
    if (c.is_identity(i) && !(f.maps[i].matrix() == Matrix::identity(f.spaces[i].dim()))) {
      throw Error(ErrorCode::NotAFunctor, "identity arrow " + a.name + " is not sent to the identity");
    }
  }
  for (std::size_t g = 0; g < c.arrow_count(); ++g)
    for (std::size_t h = 0; h < c.arrow_count(); ++h) {
      if (c.arrow(h).target != c.arrow(g).source) continue;
      if (!(f.maps[c.compose(g, h)].matrix() == f.maps[g].after(f.maps[h]).matrix())) {
        throw Error(ErrorCode::NotAFunctor, "composition " + c.arrow(g).name + " o " + c.arrow(h).name + " not preserved");
      }
    }
}

void validate_bifunctor(const BifunctorData& f) {
  const auto& c = f.category;
  const std::size_t n = c.object_count();
  const std::size_t m = c.arrow_count();
  if (f.spaces.size() != n * n || f.left.size() != m * n || f.right.size() != m * n) {
    throw Error(ErrorCode::NotAFunctor, "bifunctor data has the wrong number of entries");
  }
  for (std::size_t a = 0; a < m; ++a) {
    const auto& arr = c.arrow(a);
    for (std::size_t x = 0; x < n; ++x) {
      const LinMap& l = f.left[a * n + x];
      const LinMap& r = f.right[a * n + x];
      if (!(l.source() == f.at(arr.target, x)) || !(l.target() == f.at(arr.source, x))) {
        throw Error(ErrorCode::NotAFunctor, "contravariant action of " + arr.name + " has the wrong spaces");
      }
      if (!(r.source() == f.at(x, arr.source)) || !(r.target() == f.at(x, arr.target))) {
        throw Error(ErrorCode::NotAFunctor, "covariant action of " + arr.name + " has the wrong spaces");
      }
      if (c.is_identity(a) && (!(l.matrix() == Matrix::identity(l.source().dim())) ||
                               !(r.matrix() == Matrix::identity(r.source().dim())))) {
        throw Error(ErrorCode::NotAFunctor, "identity " + arr.name + " does not act trivially");
      }
    }
  }
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t h = 0; h < m; ++h) {
      if (c.arrow(h).target != c.arrow(g).source) continue;
      const std::size_t gh = c.compose(g, h);
      for (std::size_t x = 0; x < n; ++x) {
        if (!(f.left[gh * n + x].matrix() == f.left[h * n + x].after(f.left[g * n + x]).matrix()) ||
            !(f.right[gh * n + x].matrix() == f.right[g * n + x].after(f.right[h * n + x]).matrix())) {
          throw Error(ErrorCode::NotAFunctor, "bifunctor does not preserve composition");
        }
      }
    }
  for (std::size_t fa = 0; fa < m; ++fa)
    for (std::size_t ga = 0; ga < m; ++ga) {
      const std::size_t a = c.arrow(fa).source, b = c.arrow(fa).target;
      const std::size_t x = c.arrow(ga).source, d = c.arrow(ga).target;
      const LinMap one = f.right[ga * n + a].after(f.left[fa * n + x]);
      const LinMap two = f.left[fa * n + d].after(f.right[ga * n + b]);
      if (!(one.matrix() == two.matrix())) throw Error(ErrorCode::NotAFunctor, "left and right actions do not commute");
    }
}

Coend coend(const BifunctorData& f) {
  validate_bifunctor(f);
  const auto& c = f.category;
  const std::size_t n = c.object_count();
  std::vector<FinBanSpace> diagonal;
  for (std::size_t a = 0; a < n; ++a) diagonal.push_back(f.at(a, a));
  Coend out{direct_sum(diagonal), {}, {}};
  std::vector<Vec> relations;
  for (std::size_t arr = n; arr < c.arrow_count(); ++arr) {
    const std::size_t a = c.arrow(arr).source, b = c.arrow(arr).target;
    const LinMap& contra = f.left[arr * n + a];  // F(b, a) -> F(a, a)
    const LinMap& co = f.right[arr * n + b];     // F(b, a) -> F(b, b)
    for (std::size_t k = 0; k < f.at(b, a).dim(); ++k) {
      Vec x(f.at(b, a).dim());
      x[k] = 1;
      Vec rel = out.sum.injections[a](contra(x)) - out.sum.injections[b](co(x));
      if (!is_zero(rel)) relations.push_back(std::move(rel));
    }
  }
  out.quotient = quotient(out.sum.space, relations);
  for (std::size_t a = 0; a < n; ++a) out.wedge.push_back(out.quotient.projection.after(out.sum.injections[a]));
  return out;
}

Rational End::norm(const Vec& coords) const {
  const Vec v = basis * coords;
  Rational best;
  for (std::size_t k = 0; k < components.size(); ++k) {
    const Vec part(v.begin() + static_cast<std::ptrdiff_t>(offsets[k]),
                   v.begin() + static_cast<std::ptrdiff_t>(offsets[k] + components[k].dim()));
    best = std::max(best, components[k].norm(part));
  }
  return best;
}

End end(const BifunctorData& f) {
  validate_bifunctor(f);
  const auto& c = f.category;
  const std::size_t n = c.object_count();
  End out;
  std::size_t total = 0;
  for (std::size_t a = 0; a < n; ++a) {
    out.components.push_back(f.at(a, a));
    out.offsets.push_back(total);
    total += f.at(a, a).dim();
  }
  std::vector<Vec> rows;
  for (std::size_t arr = n; arr < c.arrow_count(); ++arr) {
    const std::size_t a = c.arrow(arr).source, b = c.arrow(arr).target;
    const Matrix& co = f.right[arr * n + a].matrix();     // F(a, a) -> F(a, b)
    const Matrix& contra = f.left[arr * n + b].matrix();  // F(b, b) -> F(a, b)
    for (std::size_t i = 0; i < f.at(a, b).dim(); ++i) {
      Vec row(total);
      for (std::size_t j = 0; j < co.cols(); ++j) row[out.offsets[a] + j] += co(i, j);
      for (std::size_t j = 0; j < contra.cols(); ++j) row[out.offsets[b] + j] -= contra(i, j);
      rows.push_back(std::move(row));
    }
  }
  out.basis = rows.empty() ? Matrix::identity(total) : nullspace(Matrix::from_rows(rows, total));
  for (std::size_t a = 0; a < n; ++a) {
    Matrix w(f.at(a, a).dim(), out.basis.cols());
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) = out.basis(out.offsets[a] + i, j);
    out.wedge.push_back(std::move(w));
  }
  return out;
}

}  // namespace catmeas
