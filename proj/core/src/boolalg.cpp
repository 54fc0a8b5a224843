#include "catmeas/boolalg.hpp"

#include "catmeas/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace catmeas {

BoolAlg::BoolAlg(std::vector<std::string> atom_ids) : atoms_(std::move(atom_ids)) {
  if (atoms_.empty()) throw Error(ErrorCode::InvalidModel, "Boolean algebra needs at least one atom");
  if (atoms_.size() > kMaxAtoms) throw Error(ErrorCode::InvalidModel, "too many atoms");
  std::sort(atoms_.begin(), atoms_.end());
  if (std::adjacent_find(atoms_.begin(), atoms_.end()) != atoms_.end()) {
    throw Error(ErrorCode::InvalidModel, "duplicate atom identifier");
  }
}

std::optional<std::size_t> BoolAlg::index_of(const std::string& id) const {
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), id);
  if (it == atoms_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - atoms_.begin());
}

std::uint64_t BoolAlg::element_count() const {
  if (atoms_.size() > 24) throw Error(ErrorCode::InvalidModel, "algebra too large to enumerate elements");
  return std::uint64_t{1} << atoms_.size();
}

Element BoolAlg::element(const std::vector<std::string>& ids) const {
  Element e;
  for (const auto& id : ids) {
    const auto idx = index_of(id);
    if (!idx) throw Error(ErrorCode::InvalidModel, "unknown atom \"" + id + "\"");
    e = e | Element::atom(*idx);
  }
  return e;
}

std::vector<std::size_t> BoolAlg::atoms_below(Element e) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (e.has_atom(i)) out.push_back(i);
  return out;
}

std::string BoolAlg::format(Element e) const {
  std::string out = "{";
  bool first = true;
  for (auto i : atoms_below(e)) {
    if (!first) out += ",";
    out += atoms_[i];
    first = false;
  }
  return out + "}";
}

void BoolAlg::for_each_element(const std::function<void(Element)>& fn) const {
  const std::uint64_t count = element_count();
  for (std::uint64_t b = 0; b < count; ++b) fn(Element(b));
}

BoolAlg build_algebra(const std::vector<std::string>& ground,
                      const std::vector<std::vector<std::string>>& generators) {
  if (ground.empty()) throw Error(ErrorCode::InvalidModel, "empty ground set");
  std::set<std::string> ground_set(ground.begin(), ground.end());
  if (ground_set.size() != ground.size()) throw Error(ErrorCode::InvalidModel, "duplicate ground element");

  // Each ground point gets a signature: which generators contain it. Cells of
  // the common refinement are the classes of equal signature.
  std::vector<std::set<std::string>> gens;
  for (const auto& g : generators) {
    std::set<std::string> s(g.begin(), g.end());
    for (const auto& x : s)
      if (!ground_set.count(x)) throw Error(ErrorCode::InvalidModel, "generator member \"" + x + "\" not in ground set");
    gens.push_back(std::move(s));
  }
  std::map<std::vector<bool>, std::vector<std::string>> cells;
  for (const auto& x : ground_set) {
    std::vector<bool> sig;
    for (const auto& g : gens) sig.push_back(g.count(x) > 0);
    cells[sig].push_back(x);
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> named;
  for (auto& [sig, members] : cells) {
    std::string id;
    for (std::size_t i = 0; i < members.size(); ++i) id += (i ? "+" : "") + members[i];
    named.emplace_back(std::move(id), std::move(members));
  }
  std::sort(named.begin(), named.end());
  std::vector<std::string> ids;
  for (const auto& n : named) ids.push_back(n.first);
  BoolAlg alg(std::move(ids));
  for (auto& n : named) alg.cells_.push_back(std::move(n.second));
  return alg;
}

Partition make_partition(Element parent, std::vector<Element> blocks) {
  Element acc;
  for (const auto& b : blocks) {
    if (b.is_bottom()) throw Error(ErrorCode::InvalidModel, "partition has a zero block");
    if (!acc.disjoint(b)) throw Error(ErrorCode::InvalidModel, "partition blocks overlap");
    acc = acc | b;
  }
  if (acc != parent) throw Error(ErrorCode::InvalidModel, "partition blocks do not join to the parent");
  std::sort(blocks.begin(), blocks.end(),
            [](const Element& a, const Element& b) { return a.lowest_atom() < b.lowest_atom(); });
  return Partition{parent, std::move(blocks)};
}

bool refines(const Partition& finer, const Partition& coarser) {
  if (finer.parent != coarser.parent) return false;
  return std::all_of(finer.blocks.begin(), finer.blocks.end(), [&](const Element& f) {
    return std::any_of(coarser.blocks.begin(), coarser.blocks.end(), [&](const Element& c) { return f <= c; });
  });
}

Partition atomic_partition(const BoolAlg& alg, Element e) {
  if (e.is_bottom()) throw Error(ErrorCode::EmptyElement, "atomic partition of bottom");
  std::vector<Element> blocks;
  for (auto i : alg.atoms_below(e)) blocks.push_back(Element::atom(i));
  return Partition{e, std::move(blocks)};
}

void for_each_partition(const BoolAlg& alg, Element e, std::size_t max_blocks,
                        const std::function<void(const Partition&)>& fn) {
  if (!alg.contains(e)) throw Error(ErrorCode::InvalidModel, "element outside algebra");
  if (e.is_bottom()) throw Error(ErrorCode::EmptyElement, "partitions of bottom");
  const std::vector<std::size_t> atoms = alg.atoms_below(e);
  // Restricted growth strings: atom k joins an existing block or opens the next one.
  std::vector<Element> blocks;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == atoms.size()) {
      fn(Partition{e, blocks});
      return;
    }
    const Element a = Element::atom(atoms[k]);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      blocks[i] = blocks[i] | a;
      rec(k + 1);
      blocks[i] = blocks[i] - a;
    }
    if (blocks.size() < max_blocks) {
      blocks.push_back(a);
      rec(k + 1);
      blocks.pop_back();
    }
  };
  rec(0);
}

std::vector<Partition> partitions_of(const BoolAlg& alg, Element e, std::size_t max_blocks) {
  std::vector<Partition> out;
  for_each_partition(alg, e, max_blocks, [&](const Partition& p) { out.push_back(p); });
  return out;
}

BoolMorphism::BoolMorphism(BoolAlg source, BoolAlg target, std::vector<Element> atom_images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(atom_images)) {
  if (images_.size() != source_.atom_count()) throw Error(ErrorCode::InvalidModel, "morphism needs one image per atom");
  Element acc;
  for (const auto& img : images_) {
    if (!target_.contains(img)) throw Error(ErrorCode::InvalidModel, "morphism image outside target");
    if (!acc.disjoint(img)) throw Error(ErrorCode::InvalidModel, "images of distinct atoms overlap");
    acc = acc | img;
  }
}

BoolMorphism BoolMorphism::identity(const BoolAlg& alg) {
  std::vector<Element> imgs;
  for (std::size_t i = 0; i < alg.atom_count(); ++i) imgs.push_back(Element::atom(i));
  return BoolMorphism(alg, alg, std::move(imgs));
}

Element BoolMorphism::operator()(Element e) const {
  Element out;
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (e.has_atom(i)) out = out | images_[i];
  return out;
}

bool BoolMorphism::is_unital() const { return (*this)(source_.top()) == target_.top(); }

bool BoolMorphism::preserves_operations() const {
  if ((*this)(source_.bottom()) != target_.bottom()) return false;
  if (!is_unital()) return false;
  bool ok = true;
  source_.for_each_element([&](Element e) {
    if (!ok) return;
    if ((*this)(source_.complement(e)) != target_.complement((*this)(e))) ok = false;
    source_.for_each_element([&](Element f) {
      if (!ok) return;
      if ((*this)(e & f) != ((*this)(e) & (*this)(f))) ok = false;
      if ((*this)(e | f) != ((*this)(e) | (*this)(f))) ok = false;
    });
  });
  return ok;
}

BoolMorphism BoolMorphism::after(const BoolMorphism& first) const {
  if (!(first.target() == source_)) throw Error(ErrorCode::AlgebraMismatch, "morphism composition");
  std::vector<Element> imgs;
  for (const auto& img : first.atom_images()) imgs.push_back((*this)(img));
  return BoolMorphism(first.source(), target_, std::move(imgs));
}

std::vector<BoolMorphism> unital_morphisms(const BoolAlg& source, const BoolAlg& target) {
  std::vector<BoolMorphism> out;
  const std::size_t n = source.atom_count();
  const std::size_t m = target.atom_count();
  std::vector<std::size_t> choice(m, 0);
  for (;;) {
    std::vector<Element> imgs(n);
    for (std::size_t t = 0; t < m; ++t) imgs[choice[t]] = imgs[choice[t]] | Element::atom(t);
    out.emplace_back(source, target, std::move(imgs));
    std::size_t k = 0;
    while (k < m && ++choice[k] == n) choice[k++] = 0;
    if (k == m) break;
  }
  return out;
}

std::uint64_t StoneSpace::eta(Element e) const {
  std::uint64_t out = 0;
  for (std::size_t p = 0; p < points.size(); ++p)
    if (points[p].contains(e)) out |= std::uint64_t{1} << p;
  return out;
}

Element StoneSpace::eta_inverse(std::uint64_t point_set) const {
  Element out;
  for (std::size_t p = 0; p < points.size(); ++p)
    if ((point_set >> p) & 1U) out = out | points[p].generator;
  return out;
}

BoolAlg StoneSpace::clopen_algebra() const {
  std::vector<std::string> ids;
  for (const auto& p : points) ids.push_back("u:" + algebra.atom_id(p.generator.lowest_atom()));
  return BoolAlg(std::move(ids));
}

StoneSpace stone_space(const BoolAlg& alg) {
  // In atomic form every ultrafilter is principal at an atom.
  StoneSpace s{alg, {}};
  for (std::size_t i = 0; i < alg.atom_count(); ++i) s.points.push_back(Ultrafilter{Element::atom(i)});
  return s;
}

bool verify_stone_roundtrip(const StoneSpace& stone) {
  const BoolAlg& alg = stone.algebra;
  if (stone.points.size() != alg.atom_count()) return false;
  const std::uint64_t all_points = (std::uint64_t{1} << stone.points.size()) - 1;
  if (stone.eta(alg.top()) != all_points || stone.eta(alg.bottom()) != 0) return false;
  std::vector<bool> hit(alg.element_count(), false);
  bool ok = true;
  alg.for_each_element([&](Element e) {
    if (!ok) return;
    const std::uint64_t img = stone.eta(e);
    if (img > all_points || hit[img]) {
      ok = false;
      return;
    }
    hit[img] = true;
    if (stone.eta_inverse(img) != e) ok = false;
    if (stone.eta(alg.complement(e)) != (all_points & ~img)) ok = false;
    alg.for_each_element([&](Element f) {
      if (!ok) return;
      if (stone.eta(e & f) != (img & stone.eta(f))) ok = false;
      if (stone.eta(e | f) != (img | stone.eta(f))) ok = false;
    });
  });
  return ok && std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

Element Coproduct::rectangle(Element e, Element f) const {
  Element out;
  for (std::size_t i = 0; i < left.source().atom_count(); ++i) {
    if (!e.has_atom(i)) continue;
    for (std::size_t j = 0; j < right_count; ++j)
      if (f.has_atom(j)) out = out | Element::atom(pair_atom(i, j));
  }
  return out;
}

BoolMorphism Coproduct::mediate(const BoolMorphism& phi, const BoolMorphism& psi) const {
  if (!(phi.source() == left.source()) || !(psi.source() == right.source()) || !(phi.target() == psi.target())) {
    throw Error(ErrorCode::AlgebraMismatch, "coproduct mediation");
  }
  std::vector<Element> imgs(algebra.atom_count());
  for (std::size_t i = 0; i < left.source().atom_count(); ++i)
    for (std::size_t j = 0; j < right_count; ++j)
      imgs[pair_atom(i, j)] = phi.atom_images()[i] & psi.atom_images()[j];
  return BoolMorphism(algebra, phi.target(), std::move(imgs));
}

Coproduct coproduct(const BoolAlg& l, const BoolAlg& r) {
  std::vector<std::string> ids;
  for (const auto& a : l.atoms())
    for (const auto& b : r.atoms()) ids.push_back(a + "*" + b);
  BoolAlg alg(ids);
  std::vector<std::size_t> pairs;
  for (const auto& id : ids) pairs.push_back(*alg.index_of(id));
  const std::size_t n = l.atom_count(), m = r.atom_count();
  std::vector<Element> left_imgs(n), right_imgs(m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Element a = Element::atom(pairs[i * m + j]);
      left_imgs[i] = left_imgs[i] | a;
      right_imgs[j] = right_imgs[j] | a;
    }
  return Coproduct{alg, BoolMorphism(l, alg, std::move(left_imgs)), BoolMorphism(r, alg, std::move(right_imgs)),
                   std::move(pairs), m};
}

bool verify_coproduct(const Coproduct& cp, const BoolMorphism& phi, const BoolMorphism& psi) {
  const BoolMorphism h = cp.mediate(phi, psi);
  if (!h.preserves_operations()) return false;
  std::size_t matches = 0;
  for (const auto& cand : unital_morphisms(cp.algebra, phi.target())) {
    if (cand.after(cp.left) == phi && cand.after(cp.right) == psi) {
      ++matches;
      if (!(cand == h)) return false;
    }
  }
  return matches == 1;
}

NullQuotient quotient_by_null(const BoolAlg& alg, const std::vector<bool>& null_atoms) {
  if (null_atoms.size() != alg.atom_count()) throw Error(ErrorCode::ShapeMismatch, "null mask length");
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < alg.atom_count(); ++i)
    if (!null_atoms[i]) kept.push_back(alg.atom_id(i));
  if (kept.empty()) throw Error(ErrorCode::DegenerateQuotient, "every atom is null; quotient has one element");
  BoolAlg q(kept);
  std::vector<Element> imgs;
  for (std::size_t i = 0; i < alg.atom_count(); ++i) {
    imgs.push_back(null_atoms[i] ? Element() : Element::atom(*q.index_of(alg.atom_id(i))));
  }
  return NullQuotient{q, BoolMorphism(alg, q, std::move(imgs)), null_atoms};
}

PrincipalIdeal principal_ideal(const BoolAlg& alg, Element e) {
  if (!alg.contains(e)) throw Error(ErrorCode::InvalidModel, "element outside algebra");
  if (e.is_bottom()) throw Error(ErrorCode::EmptyElement, "principal ideal of bottom");
  const std::vector<std::size_t> below = alg.atoms_below(e);
  std::vector<std::string> ids;
  for (auto i : below) ids.push_back(alg.atom_id(i));
  BoolAlg ideal(ids);
  std::vector<Element> incl, proj(alg.atom_count());
  for (std::size_t k = 0; k < below.size(); ++k) {
    incl.push_back(Element::atom(below[k]));
    proj[below[k]] = Element::atom(k);
  }
  return PrincipalIdeal{ideal, e, BoolMorphism(ideal, alg, std::move(incl)), BoolMorphism(alg, ideal, std::move(proj)),
                        below};
}

}  // namespace catmeas
