#include "catmeas_cli/model.hpp"

#include "catmeas_cli/expr.hpp"
#include "locator.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace catmeas::cli {

using nlohmann::json;

namespace {

std::string locate(const std::string& path, std::size_t line, std::size_t column) {
  std::string out;
  if (line > 0) out = std::to_string(line) + ":" + std::to_string(column) + ": ";
  if (!path.empty()) out += "at " + path + ": ";
  return out;
}

std::string strip_code(const Error& e) {
  const std::string what = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

std::string child(const std::string& ptr, const std::string& key) {
  std::string out = ptr + "/";
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

class Reader {
 public:
  Reader(const std::string& text, std::string source) : loc_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(ErrorCode code, const std::string& ptr, const std::string& msg) const {
    const auto [line, col] = loc_.find(ptr);
    throw ModelError(code, ptr, line, col, source_ + ":" + locate(ptr, line, col) + msg);
  }

  /// Runs fn, attaching the pointer to any library error it raises.
  template <class F>
  auto at(const std::string& ptr, F&& fn) const -> decltype(fn()) {
    try {
      return fn();
    } catch (const ModelError&) {
      throw;
    } catch (const Error& e) {
      fail(e.code(), ptr, strip_code(e));
    }
  }

  const json& object(const json& v, const std::string& ptr) const {
    if (!v.is_object()) fail(ErrorCode::InvalidModel, ptr, "expected an object");
    return v;
  }

  const json& array(const json& v, const std::string& ptr) const {
    if (!v.is_array()) fail(ErrorCode::InvalidModel, ptr, "expected an array");
    return v;
  }

  std::string string(const json& v, const std::string& ptr) const {
    if (!v.is_string()) fail(ErrorCode::InvalidModel, ptr, "expected a string");
    return v.get<std::string>();
  }

  const json& member(const json& obj, const std::string& ptr, const std::string& key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(ErrorCode::InvalidModel, ptr, "missing \"" + key + "\"");
    return *it;
  }

  void only_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
    for (const auto& [k, v] : obj.items()) {
      bool known = false;
      for (const char* key : keys) known = known || k == key;
      if (!known) fail(ErrorCode::InvalidModel, child(ptr, k), "unknown key \"" + k + "\"");
    }
  }

  std::vector<std::string> names(const json& v, const std::string& ptr) const {
    std::vector<std::string> out;
    std::size_t i = 0;
    for (const auto& item : array(v, ptr)) out.push_back(string(item, child(ptr, i++)));
    return out;
  }

  Rational rational(const json& v, const std::string& ptr) const {
    if (v.is_string()) {
      try {
        return parse_rational(v.get<std::string>());
      } catch (const Error&) {
        fail(ErrorCode::SyntaxError, ptr, "malformed rational \"" + v.get<std::string>() + "\"");
      }
    }
    if (v.is_number_integer()) return parse_rational(v.dump());
    if (v.is_number_float()) fail(ErrorCode::SyntaxError, ptr, "rationals are written as \"p/q\" strings, not decimals");
    fail(ErrorCode::InvalidModel, ptr, "expected a rational");
  }

  Vec vector(const json& v, const std::string& ptr, std::size_t dim) const {
    array(v, ptr);
    if (v.size() != dim)
      fail(ErrorCode::ShapeMismatch, ptr, "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
    Vec out;
    for (std::size_t i = 0; i < dim; ++i) out.push_back(rational(v[i], child(ptr, i)));
    return out;
  }

  Matrix matrix(const json& v, const std::string& ptr, std::size_t rows, std::size_t cols) const {
    array(v, ptr);
    if (v.size() != rows)
      fail(ErrorCode::ShapeMismatch, ptr, "expected " + std::to_string(rows) + " rows, got " + std::to_string(v.size()));
    std::vector<Vec> out;
    for (std::size_t r = 0; r < rows; ++r) out.push_back(vector(v[r], child(ptr, r), cols));
    return Matrix::from_rows(out, cols);
  }

  Flavor flavor(const json& obj, const std::string& ptr, Flavor fallback) const {
    const auto it = obj.find("flavor");
    if (it == obj.end()) return fallback;
    const std::string f = string(*it, child(ptr, "flavor"));
    if (f == "sum") return Flavor::Sum;
    if (f == "sup") return Flavor::Sup;
    fail(ErrorCode::InvalidModel, child(ptr, "flavor"), "flavor is \"sum\" or \"sup\"");
  }

  /// A space is a name from the spaces section or an inline descriptor.
  FinBanSpace space(const json& v, const std::string& ptr, Flavor fallback,
                    const std::map<std::string, FinBanSpace>& named) const {
    if (v.is_string()) {
      const auto it = named.find(v.get<std::string>());
      if (it == named.end()) fail(ErrorCode::UnresolvedReference, ptr, "unknown space \"" + v.get<std::string>() + "\"");
      return it->second;
    }
    object(v, ptr);
    only_keys(v, ptr, {"dim", "weights", "basis", "flavor"});
    const Flavor fl = flavor(v, ptr, fallback);
    std::vector<Rational> weights;
    if (const auto w = v.find("weights"); w != v.end()) {
      const std::string wp = child(ptr, "weights");
      std::size_t i = 0;
      for (const auto& item : array(*w, wp)) {
        const std::string ip = child(wp, i++);
        const Rational r = rational(item, ip);
        if (r <= 0) fail(ErrorCode::NonPositiveWeight, ip, "weight " + to_string(r) + " is not positive");
        weights.push_back(r);
      }
      if (const auto d = v.find("dim"); d != v.end() && d->get<std::size_t>() != weights.size())
        fail(ErrorCode::ShapeMismatch, child(ptr, "dim"), "dim disagrees with the number of weights");
    } else {
      const json& d = member(v, ptr, "dim");
      if (!d.is_number_unsigned() && !(d.is_number_integer() && d.get<long long>() >= 0))
        fail(ErrorCode::InvalidModel, child(ptr, "dim"), "dim is a nonnegative integer");
      weights.assign(d.get<std::size_t>(), Rational(1));
    }
    std::vector<std::string> basis;
    if (const auto b = v.find("basis"); b != v.end()) {
      basis = names(*b, child(ptr, "basis"));
      if (basis.size() != weights.size())
        fail(ErrorCode::ShapeMismatch, child(ptr, "basis"), "one basis label per weight is required");
    } else {
      for (std::size_t i = 0; i < weights.size(); ++i) basis.push_back("e" + std::to_string(i));
    }
    return at(ptr, [&] { return FinBanSpace(basis, weights, fl); });
  }

  BoolAlg algebra(const json& v, const std::string& ptr) const {
    object(v, ptr);
    only_keys(v, ptr, {"atoms", "ground", "generators"});
    if (v.contains("atoms")) {
      const auto ids = names(v["atoms"], child(ptr, "atoms"));
      if (ids.empty()) fail(ErrorCode::InvalidModel, child(ptr, "atoms"), "at least one atom is required");
      std::set<std::string> seen;
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (!seen.insert(ids[i]).second)
          fail(ErrorCode::InvalidModel, child(child(ptr, "atoms"), i), "duplicate atom \"" + ids[i] + "\"");
      return at(ptr, [&] { return BoolAlg(ids); });
    }
    const auto ground = names(member(v, ptr, "ground"), child(ptr, "ground"));
    if (ground.empty()) fail(ErrorCode::InvalidModel, child(ptr, "ground"), "the ground set is empty");
    const std::set<std::string> known(ground.begin(), ground.end());
    std::vector<std::vector<std::string>> gens;
    const std::string gp = child(ptr, "generators");
    std::size_t g = 0;
    for (const auto& item : array(member(v, ptr, "generators"), gp)) {
      const std::string ip = child(gp, g++);
      auto gen = names(item, ip);
      for (std::size_t i = 0; i < gen.size(); ++i)
        if (!known.count(gen[i]))
          fail(ErrorCode::UnresolvedReference, child(ip, i), "\"" + gen[i] + "\" is not in the ground set");
      gens.push_back(std::move(gen));
    }
    return at(ptr, [&] { return build_algebra(ground, gens); });
  }

  Element element(const BoolAlg& alg, const json& v, const std::string& ptr) const {
    const std::string text = string(v, ptr);
    return at(ptr, [&] { return parse_element(alg, text); });
  }

  Element element_key(const BoolAlg& alg, const std::string& key, const std::string& ptr) const {
    return at(ptr, [&] { return parse_element(alg, key); });
  }

  std::size_t atom(const BoolAlg& alg, const std::string& id, const std::string& ptr) const {
    const auto idx = alg.index_of(id);
    if (!idx) fail(ErrorCode::UnresolvedReference, ptr, "unknown atom \"" + id + "\"");
    return *idx;
  }

  std::size_t point(const std::vector<std::string>& base, const std::string& id, const std::string& ptr) const {
    for (std::size_t i = 0; i < base.size(); ++i)
      if (base[i] == id) return i;
    fail(ErrorCode::UnresolvedReference, ptr, "unknown point \"" + id + "\"");
  }

  /// Scalar atom values keyed by atom id; absent atoms are zero.
  std::vector<Rational> atom_scalars(const BoolAlg& alg, const json& v, const std::string& ptr) const {
    std::vector<Rational> out(alg.atom_count());
    for (const auto& [k, item] : object(v, ptr).items()) {
      const std::string ip = child(ptr, k);
      out[atom(alg, k, ip)] = rational(item, ip);
    }
    return out;
  }

  std::vector<Vec> atom_vectors(const BoolAlg& alg, const json& v, const std::string& ptr, std::size_t dim) const {
    std::vector<Vec> out(alg.atom_count(), Vec(dim));
    for (const auto& [k, item] : object(v, ptr).items()) {
      const std::string ip = child(ptr, k);
      out[atom(alg, k, ip)] = vector(item, ip, dim);
    }
    return out;
  }

 private:
  Locator loc_;
  std::string source_;
};

/// Spaces per element and maps on covering pairs, read from the explicit form.
/// Cosheaf maps go from the smaller element to the larger; sheaf maps from the
/// larger to the smaller. Missing spaces are zero and missing maps are zero.
template <class Diagram>
Diagram explicit_diagram(const Reader& rd, const BoolAlg& alg, const json& v, const std::string& ptr,
                         const std::map<std::string, FinBanSpace>& named, bool covariant) {
  const Flavor fl = covariant ? Flavor::Sum : Flavor::Sup;
  std::vector<FinBanSpace> spaces(std::size_t{1} << alg.atom_count(), FinBanSpace::zero(fl));
  std::vector<bool> given(spaces.size(), false);
  const std::string sp = child(ptr, "spaces");
  for (const auto& [k, item] : rd.object(rd.member(v, ptr, "spaces"), sp).items()) {
    const std::string ip = child(sp, k);
    const Element e = rd.element_key(alg, k, ip);
    if (given[e.bits()]) rd.fail(ErrorCode::InvalidModel, ip, "element " + alg.format(e) + " is given twice");
    given[e.bits()] = true;
    spaces[e.bits()] = rd.space(item, ip, fl, named);
  }
  std::unordered_map<std::uint64_t, Matrix> maps;
  if (const auto m = v.find("maps"); m != v.end()) {
    const std::string mp = child(ptr, "maps");
    std::size_t i = 0;
    for (const auto& item : rd.array(*m, mp)) {
      const std::string ip = child(mp, i++);
      rd.object(item, ip);
      rd.only_keys(item, ip, {"from", "to", "matrix"});
      const Element from = rd.element(alg, rd.member(item, ip, "from"), child(ip, "from"));
      const Element to = rd.element(alg, rd.member(item, ip, "to"), child(ip, "to"));
      const Element small = covariant ? from : to;
      const Element large = covariant ? to : from;
      if (!(small <= large) || (large - small).atom_count() != 1)
        rd.fail(ErrorCode::InvalidModel, ip,
                std::string(covariant ? "extension" : "restriction") +
                    " maps are given on covering pairs, one atom apart, " +
                    (covariant ? "from the smaller element to the larger" : "from the larger element to the smaller"));
      const std::uint64_t key = small.bits() * (std::uint64_t{1} << alg.atom_count()) + large.bits();
      if (maps.count(key)) rd.fail(ErrorCode::InvalidModel, ip, "map given twice");
      maps[key] = rd.matrix(rd.member(item, ip, "matrix"), child(ip, "matrix"), spaces[to.bits()].dim(),
                            spaces[from.bits()].dim());
    }
  }
  const auto covers = [&](Element small, Element large) {
    const FinBanSpace& src = covariant ? spaces[small.bits()] : spaces[large.bits()];
    const FinBanSpace& dst = covariant ? spaces[large.bits()] : spaces[small.bits()];
    const std::uint64_t key = small.bits() * (std::uint64_t{1} << alg.atom_count()) + large.bits();
    const auto it = maps.find(key);
    return it == maps.end() ? LinMap::zero(src, dst) : LinMap(src, dst, it->second);
  };
  return rd.at(ptr, [&] { return Diagram(alg, spaces, covers); });
}

FiniteCategory poset(const Reader& rd, const json& v, const std::string& ptr) {
  rd.object(v, ptr);
  rd.only_keys(v, ptr, {"objects", "relations"});
  const auto objects = rd.names(rd.member(v, ptr, "objects"), child(ptr, "objects"));
  std::vector<std::pair<std::size_t, std::size_t>> rels;
  if (const auto r = v.find("relations"); r != v.end()) {
    const std::string rp = child(ptr, "relations");
    std::size_t i = 0;
    for (const auto& item : rd.array(*r, rp)) {
      const std::string ip = child(rp, i++);
      const auto pair = rd.names(item, ip);
      if (pair.size() != 2) rd.fail(ErrorCode::InvalidModel, ip, "a relation is a pair [smaller, larger]");
      rels.emplace_back(rd.point(objects, pair[0], child(ip, 0)), rd.point(objects, pair[1], child(ip, 1)));
    }
  }
  return rd.at(ptr, [&] { return FiniteCategory::from_poset(objects, rels); });
}

KanModel kan_section(const Reader& rd, const json& v, const std::string& ptr,
                     const std::map<std::string, FinBanSpace>& named) {
  rd.object(v, ptr);
  rd.only_keys(v, ptr, {"source", "target", "object_map", "spaces", "maps"});
  const FiniteCategory src = poset(rd, rd.member(v, ptr, "source"), child(ptr, "source"));
  const FiniteCategory tgt = poset(rd, rd.member(v, ptr, "target"), child(ptr, "target"));

  std::vector<std::size_t> objects(src.object_count());
  std::vector<bool> mapped(src.object_count(), false);
  const std::string op = child(ptr, "object_map");
  for (const auto& [k, item] : rd.object(rd.member(v, ptr, "object_map"), op).items()) {
    const std::string ip = child(op, k);
    const std::size_t a = rd.point(src.objects(), k, ip);
    objects[a] = rd.point(tgt.objects(), rd.string(item, ip), ip);
    mapped[a] = true;
  }
  for (std::size_t a = 0; a < src.object_count(); ++a)
    if (!mapped[a]) rd.fail(ErrorCode::InvalidModel, op, "object \"" + src.objects()[a] + "\" is not mapped");

  std::vector<std::size_t> arrows(src.arrow_count());
  for (std::size_t f = 0; f < src.arrow_count(); ++f) {
    const auto& arr = src.arrow(f);
    const auto hom = tgt.hom(objects[arr.source], objects[arr.target]);
    if (hom.empty())
      rd.fail(ErrorCode::InvalidModel, op, "the object map does not preserve the order at \"" + arr.name + "\"");
    arrows[f] = hom.front();
  }

  std::vector<FinBanSpace> spaces(src.object_count());
  const std::string sp = child(ptr, "spaces");
  for (const auto& [k, item] : rd.object(rd.member(v, ptr, "spaces"), sp).items()) {
    const std::string ip = child(sp, k);
    spaces[rd.point(src.objects(), k, ip)] = rd.space(item, ip, Flavor::Sum, named);
  }

  // Maps are given per arrow "a<b"; arrows left out are composites of given
  // ones, or zero when no factorization is available.
  std::vector<std::optional<LinMap>> maps(src.arrow_count());
  for (std::size_t a = 0; a < src.object_count(); ++a) maps[a] = LinMap::identity(spaces[a]);
  if (const auto m = v.find("maps"); m != v.end()) {
    const std::string mp = child(ptr, "maps");
    for (const auto& [k, item] : rd.object(*m, mp).items()) {
      const std::string ip = child(mp, k);
      std::optional<std::size_t> idx;
      for (std::size_t f = src.object_count(); f < src.arrow_count(); ++f)
        if (src.arrow(f).name == k) idx = f;
      if (!idx) rd.fail(ErrorCode::UnresolvedReference, ip, "no arrow \"" + k + "\" in the source order");
      const auto& arr = src.arrow(*idx);
      maps[*idx] = LinMap(spaces[arr.source], spaces[arr.target],
                          rd.matrix(item, ip, spaces[arr.target].dim(), spaces[arr.source].dim()));
    }
  }
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t h = 0; h < src.arrow_count(); ++h) {
      if (maps[h]) continue;
      for (std::size_t f = src.object_count(); f < src.arrow_count() && !maps[h]; ++f) {
        for (std::size_t g = src.object_count(); g < src.arrow_count() && !maps[h]; ++g) {
          if (src.arrow(f).target != src.arrow(g).source || !maps[f] || !maps[g]) continue;
          if (src.compose(g, f) == h) {
            maps[h] = maps[g]->after(*maps[f]);
            progress = true;
          }
        }
      }
    }
  }
  FunctorData functor{src, spaces, {}};
  for (std::size_t f = 0; f < src.arrow_count(); ++f) {
    const auto& arr = src.arrow(f);
    functor.maps.push_back(maps[f] ? *maps[f] : LinMap::zero(spaces[arr.source], spaces[arr.target]));
  }
  CategoryFunctor inclusion{src, tgt, objects, arrows};
  rd.at(ptr, [&] {
    validate_functor(functor);
    validate_category_functor(inclusion);
    return 0;
  });
  return KanModel{functor, inclusion};
}

Model build(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    if (const auto p = msg.find(": syntax error"); p != std::string::npos) msg = msg.substr(p + 2);
    throw ModelError(ErrorCode::SyntaxError, "", line, col, source + ":" + locate("", line, col) + msg);
  }
  const Reader rd(text, source);
  rd.object(doc, "");
  rd.only_keys(doc, "", {"description", "algebra", "spaces", "measures", "functions", "bundles", "functor_matrices",
                         "cosheaves", "sheaves", "product", "kan"});

  Model m;
  m.source = source;
  m.algebra = rd.algebra(rd.member(doc, "", "algebra"), "/algebra");
  const BoolAlg& alg = m.algebra;

  if (const auto s = doc.find("spaces"); s != doc.end()) {
    for (const auto& [k, item] : rd.object(*s, "/spaces").items()) {
      if (item.is_string()) rd.fail(ErrorCode::InvalidModel, child("/spaces", k), "named spaces are given inline");
      m.spaces.emplace(k, rd.space(item, child("/spaces", k), Flavor::Sum, m.spaces));
    }
  }

  if (const auto s = doc.find("measures"); s != doc.end()) {
    for (const auto& [k, item] : rd.object(*s, "/measures").items()) {
      const std::string ip = child("/measures", k);
      rd.object(item, ip);
      rd.only_keys(item, ip, {"target", "values"});
      const json& values = rd.member(item, ip, "values");
      if (const auto t = item.find("target"); t != item.end()) {
        const FinBanSpace target = rd.space(*t, child(ip, "target"), Flavor::Sum, m.spaces);
        const auto vals = rd.atom_vectors(alg, values, child(ip, "values"), target.dim());
        m.measures.emplace(k, rd.at(ip, [&] { return VectorMeasure(alg, target, vals); }));
      } else {
        const auto vals = rd.atom_scalars(alg, values, child(ip, "values"));
        m.measures.emplace(k, rd.at(ip, [&] { return VectorMeasure::scalar(alg, vals); }));
      }
    }
  }

  if (const auto s = doc.find("functions"); s != doc.end()) {
    for (const auto& [k, item] : rd.object(*s, "/functions").items()) {
      const std::string ip = child("/functions", k);
      rd.object(item, ip);
      rd.only_keys(item, ip, {"target", "values", "terms"});
      const auto t = item.find("target");
      std::optional<FinBanSpace> target;
      if (t != item.end()) target = rd.space(*t, child(ip, "target"), Flavor::Sum, m.spaces);
      if (item.contains("terms")) {
        const std::string tp = child(ip, "terms");
        std::vector<CharacteristicTerm> scalar_terms;
        std::vector<std::pair<Element, Vec>> vector_terms;
        std::size_t i = 0;
        for (const auto& term : rd.array(item["terms"], tp)) {
          const std::string ep = child(tp, i++);
          rd.object(term, ep);
          rd.only_keys(term, ep, {"set", "coefficient"});
          const Element e = rd.element(alg, rd.member(term, ep, "set"), child(ep, "set"));
          const json& c = rd.member(term, ep, "coefficient");
          if (target) {
            vector_terms.emplace_back(e, rd.vector(c, child(ep, "coefficient"), target->dim()));
          } else {
            scalar_terms.push_back(CharacteristicTerm{alg, e, rd.rational(c, child(ep, "coefficient"))});
          }
        }
        if (target) {
          m.vector_functions.emplace(k, rd.at(ip, [&] { return VectorSimple::from_terms(alg, *target, vector_terms); }));
        } else {
          m.functions.emplace(k, rd.at(ip, [&] { return canonicalize(alg, scalar_terms); }));
        }
      } else {
        const json& values = rd.member(item, ip, "values");
        if (target) {
          m.vector_functions.emplace(
              k, VectorSimple{alg, *target, rd.atom_vectors(alg, values, child(ip, "values"), target->dim())});
        } else {
          m.functions.emplace(k, SimpleElement(alg, rd.atom_scalars(alg, values, child(ip, "values"))));
        }
      }
    }
  }

  if (const auto s = doc.find("bundles"); s != doc.end()) {
    for (const auto& [k, item] : rd.object(*s, "/bundles").items()) {
      const std::string ip = child("/bundles", k);
      rd.object(item, ip);
      rd.only_keys(item, ip, {"base", "fibers"});
      const auto base = rd.names(rd.member(item, ip, "base"), child(ip, "base"));
      std::vector<FinBanSpace> fibers(base.size());
      if (const auto f = item.find("fibers"); f != item.end()) {
        const std::string fp = child(ip, "fibers");
        for (const auto& [x, sp] : rd.object(*f, fp).items()) {
          const std::string xp = child(fp, x);
          fibers[rd.point(base, x, xp)] = rd.space(sp, xp, Flavor::Sum, m.spaces);
        }
      }
      m.bundles.emplace(k, rd.at(ip, [&] { return Bundle(base, fibers); }));
    }
  }

  if (const auto s = doc.find("functor_matrices"); s != doc.end()) {
    for (const auto& [k, item] : rd.object(*s, "/functor_matrices").items()) {
      const std::string ip = child("/functor_matrices", k);
      rd.object(item, ip);
      rd.only_keys(item, ip, {"source", "target", "entries"});
      FunctorMatrix t;
      t.source = rd.names(rd.member(item, ip, "source"), child(ip, "source"));
      t.target = rd.names(rd.member(item, ip, "target"), child(ip, "target"));
      t.entries.assign(t.target.size(), std::vector<FinBanSpace>(t.source.size()));
      if (const auto e = item.find("entries"); e != item.end()) {
        const std::string ep = child(ip, "entries");
        for (const auto& [y, row] : rd.object(*e, ep).items()) {
          const std::string yp = child(ep, y);
          const std::size_t yi = rd.point(t.target, y, yp);
          for (const auto& [x, sp] : rd.object(row, yp).items()) {
            const std::string xp = child(yp, x);
            t.entries[yi][rd.point(t.source, x, xp)] = rd.space(sp, xp, Flavor::Sum, m.spaces);
          }
        }
      }
      rd.at(ip, [&] {
        t.validate();
        return 0;
      });
      m.functor_matrices.emplace(k, t);
    }
  }

  if (const auto s = doc.find("cosheaves"); s != doc.end()) {
    for (const auto& [k, item] : rd.object(*s, "/cosheaves").items()) {
      const std::string ip = child("/cosheaves", k);
      if (item.is_string()) {
        const std::string ref = item.get<std::string>();
        const std::string prefix = "l1-of:";
        if (ref.rfind(prefix, 0) != 0) rd.fail(ErrorCode::InvalidModel, ip, "expected \"l1-of:<measure>\"");
        const auto it = m.measures.find(ref.substr(prefix.size()));
        if (it == m.measures.end())
          rd.fail(ErrorCode::UnresolvedReference, ip, "unknown measure \"" + ref.substr(prefix.size()) + "\"");
        const auto mu = as_measure_algebra(it->second);
        if (!mu) rd.fail(ErrorCode::InvalidModel, ip, "l1-of needs a nonnegative scalar measure");
        m.cosheaves.emplace(k, rd.at(ip, [&] { return l1_cosheaf(*mu); }));
        continue;
      }
      rd.object(item, ip);
      if (item.contains("constant")) {
        rd.only_keys(item, ip, {"constant"});
        const FinBanSpace b = rd.space(item["constant"], child(ip, "constant"), Flavor::Sum, m.spaces);
        m.cosheaves.emplace(k, rd.at(ip, [&] { return constant_precosheaf(alg, b); }));
      } else if (item.contains("bva")) {
        rd.only_keys(item, ip, {"bva"});
        const FinBanSpace b = rd.space(item["bva"], child(ip, "bva"), Flavor::Sum, m.spaces);
        m.cosheaves.emplace(k, rd.at(ip, [&] { return bva_cosheaf(alg, b); }));
      } else if (item.contains("atoms")) {
        rd.only_keys(item, ip, {"atoms"});
        std::vector<FinBanSpace> fibers(alg.atom_count());
        const std::string ap = child(ip, "atoms");
        for (const auto& [a, sp] : rd.object(item["atoms"], ap).items()) {
          const std::string xp = child(ap, a);
          fibers[rd.atom(alg, a, xp)] = rd.space(sp, xp, Flavor::Sum, m.spaces);
        }
        m.cosheaves.emplace(k, rd.at(ip, [&] { return cosheaf_from_atoms(alg, fibers); }));
      } else {
        rd.only_keys(item, ip, {"spaces", "maps"});
        m.cosheaves.emplace(k, explicit_diagram<PreCosheaf>(rd, alg, item, ip, m.spaces, true));
      }
    }
  }

  if (const auto s = doc.find("sheaves"); s != doc.end()) {
    for (const auto& [k, item] : rd.object(*s, "/sheaves").items()) {
      const std::string ip = child("/sheaves", k);
      rd.object(item, ip);
      if (item.contains("stalks")) {
        rd.only_keys(item, ip, {"stalks"});
        std::vector<FinBanSpace> stalks(alg.atom_count(), FinBanSpace::zero(Flavor::Sup));
        const std::string sp = child(ip, "stalks");
        for (const auto& [a, space] : rd.object(item["stalks"], sp).items()) {
          const std::string xp = child(sp, a);
          stalks[rd.atom(alg, a, xp)] = rd.space(space, xp, Flavor::Sup, m.spaces);
        }
        m.sheaves.emplace(k, rd.at(ip, [&] { return sheaf_from_stalks(alg, stalks); }));
      } else if (item.contains("characteristic")) {
        rd.only_keys(item, ip, {"characteristic"});
        const Element e = rd.element(alg, item["characteristic"], child(ip, "characteristic"));
        m.sheaves.emplace(k, rd.at(ip, [&] { return characteristic_sheaf(alg, e); }));
      } else {
        rd.only_keys(item, ip, {"spaces", "maps"});
        m.sheaves.emplace(k, explicit_diagram<PreSheaf>(rd, alg, item, ip, m.spaces, false));
      }
    }
  }

  if (const auto s = doc.find("product"); s != doc.end()) {
    const std::string ip = "/product";
    rd.object(*s, ip);
    rd.only_keys(*s, ip, {"left", "right", "left_measure", "right_measure", "functions"});
    const BoolAlg left = rd.algebra(rd.member(*s, ip, "left"), child(ip, "left"));
    const BoolAlg right = rd.algebra(rd.member(*s, ip, "right"), child(ip, "right"));
    const Coproduct cp = rd.at(ip, [&] { return coproduct(left, right); });
    const auto lv = rd.atom_scalars(left, rd.member(*s, ip, "left_measure"), child(ip, "left_measure"));
    const auto rv = rd.atom_scalars(right, rd.member(*s, ip, "right_measure"), child(ip, "right_measure"));
    const MeasureAlgebra lm = rd.at(child(ip, "left_measure"), [&] { return MeasureAlgebra(left, lv); });
    const MeasureAlgebra rm = rd.at(child(ip, "right_measure"), [&] { return MeasureAlgebra(right, rv); });
    std::map<std::string, SimpleElement> functions;
    if (const auto f = s->find("functions"); f != s->end()) {
      const std::string fp = child(ip, "functions");
      for (const auto& [k, vals] : rd.object(*f, fp).items())
        functions.emplace(k, SimpleElement(cp.algebra, rd.atom_scalars(cp.algebra, vals, child(fp, k))));
    }
    m.product = ProductModel{left, right, cp, lm, rm, std::move(functions)};
  }

  if (const auto s = doc.find("kan"); s != doc.end()) m.kan = kan_section(rd, *s, "/kan", m.spaces);

  return m;
}

}  // namespace

ModelError::ModelError(ErrorCode code, std::string path, std::size_t line, std::size_t column,
                       const std::string& message)
    : Error(code, message), path_(std::move(path)), line_(line), column_(column) {}

Model parse_model_text(const std::string& text, const std::string& source) { return build(text, source); }

Model parse_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError(ErrorCode::InvalidModel, "", 0, 0, path + ": cannot open the model file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return build(buf.str(), path);
}

std::optional<MeasureAlgebra> as_measure_algebra(const VectorMeasure& nu) {
  if (!nu.is_scalar() || nu.target().flavor() != Flavor::Sum || nu.target().weight(0) != 1) return std::nullopt;
  std::vector<Rational> vals;
  for (const auto& v : nu.atom_values()) {
    if (v[0] < 0) return std::nullopt;
    vals.push_back(v[0]);
  }
  return MeasureAlgebra(nu.algebra(), vals);
}

}  // namespace catmeas::cli
