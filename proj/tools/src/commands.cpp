#include "catmeas_cli/commands.hpp"

#include "catmeas_cli/expr.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>

namespace catmeas::cli {

using nlohmann::json;

namespace {

using Rng = std::mt19937_64;

template <class Map>
std::pair<std::string, const typename Map::mapped_type*> select(const Map& entries,
                                                                 const std::optional<std::string>& name,
                                                                 const std::string& what, const std::string& flag) {
  if (entries.empty()) throw Error(ErrorCode::CommandMismatch, "the model defines no " + what);
  if (!name) return {entries.begin()->first, &entries.begin()->second};
  const auto it = entries.find(*name);
  if (it == entries.end()) throw Error(ErrorCode::UnresolvedReference, flag + ": no " + what + " named \"" + *name + "\"");
  return {it->first, &it->second};
}

Element resolve(const BoolAlg& alg, const std::optional<std::string>& text, Element fallback) {
  return text ? parse_element(alg, *text) : fallback;
}

std::pair<std::string, MeasureAlgebra> select_control(const Model& m, const std::optional<std::string>& name,
                                                      const std::string& flag) {
  if (name) {
    const auto [key, nu] = select(m.measures, name, "measure", flag);
    auto mu = as_measure_algebra(*nu);
    if (!mu) throw Error(ErrorCode::CommandMismatch, flag + ": \"" + key + "\" is not a nonnegative scalar measure");
    return {key, *mu};
  }
  for (const auto& [key, nu] : m.measures)
    if (auto mu = as_measure_algebra(nu)) return {key, *mu};
  throw Error(ErrorCode::CommandMismatch, "the model defines no nonnegative scalar measure");
}

json dims_by_element(const ElementDiagram& d) {
  json out = json::object();
  d.algebra().for_each_element([&](Element e) { out[d.algebra().format(e)] = d.space(e).dim(); });
  return out;
}

json verdict_json(const BoolAlg& alg, const ConditionVerdict& v, bool exhaustive) {
  json out{{"holds", v.holds}, {"mode", exhaustive ? "exhaustive" : "binary"}};
  out["counterexample"] = v.counterexample ? partition_json(alg, *v.counterexample) : json(nullptr);
  if (!v.reason.empty()) out["reason"] = v.reason;
  return out;
}

json blocks_json(const SimpleElement& f) {
  json out = json::array();
  for (const auto& b : f.blocks())
    out.push_back(json{{"set", atoms_json(f.algebra(), b.set)}, {"coefficient", rational_json(b.coefficient)}});
  return out;
}

std::optional<IsoWitness> inverse_witness(const LinMap& forward) {
  const auto inv = inverse(forward.matrix());
  if (!inv) return std::nullopt;
  return IsoWitness{forward, LinMap(forward.target(), forward.source(), *inv)};
}

bool isometric_iso(const LinMap& forward) {
  const auto w = inverse_witness(forward);
  return w && w->is_isometric();
}

SimpleElement random_simple(Rng& rng, const BoolAlg& alg) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  std::vector<Rational> vals;
  for (std::size_t a = 0; a < alg.atom_count(); ++a) vals.push_back(Rational(num(rng), den(rng)));
  return SimpleElement(alg, vals);
}

std::uint64_t bell(std::size_t n) {
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    row = next;
  }
  return row.front();
}

// Commands.

void cmd_stone(const Model& m, const Options& o, Report& r) {
  const StoneSpace s = stone_space(m.algebra);
  json points = json::array();
  for (const auto& p : s.points)
    points.push_back(json{{"point", "u:" + m.algebra.atom_id(p.generator.lowest_atom())},
                          {"generator", atoms_json(m.algebra, p.generator)}});
  r.results["points"] = points;
  r.results["atom_count"] = m.algebra.atom_count();
  const bool ok = verify_stone_roundtrip(s) && s.points.size() == m.algebra.atom_count();
  r.results["roundtrip"] = ok;
  if (o.element) {
    const Element e = parse_element(m.algebra, *o.element);
    json pts = json::array();
    const std::uint64_t set = s.eta(e);
    for (std::size_t i = 0; i < s.points.size(); ++i)
      if ((set >> i) & 1U) pts.push_back("u:" + m.algebra.atom_id(s.points[i].generator.lowest_atom()));
    r.results["eta"] = pts;
  }
  r.verified = ok;
}

void cmd_partitions(const Model& m, const Options& o, Report& r) {
  constexpr std::size_t kListed = 1000;
  const Element e = resolve(m.algebra, o.element, m.algebra.top());
  json list = json::array();
  std::uint64_t count = 0;
  const std::size_t limit = o.max_blocks ? o.max_blocks : e.atom_count();
  for_each_partition(m.algebra, e, limit, [&](const Partition& p) {
    if (count++ < kListed) list.push_back(partition_json(m.algebra, p)["blocks"]);
  });
  r.results["element"] = atoms_json(m.algebra, e);
  r.results["count"] = count;
  r.results["partitions"] = list;
  if (count > kListed) r.results["listed"] = kListed;
}

void cmd_variation(const Model& m, const Options& o, Report& r, bool semi) {
  const auto [name, nu] = select(m.measures, o.measure, "measure", "--measure");
  const Element e = resolve(m.algebra, o.element, m.algebra.top());
  r.results["measure"] = name;
  r.results["element"] = atoms_json(m.algebra, e);
  r.results["value"] = vector_json((*nu)(e));
  r.results["variation"] = rational_json(variation(*nu, e));
  if (semi) r.results["semivariation"] = rational_json(semivariation(*nu, e));
}

void cmd_lipschitz(const Model& m, const Options& o, Report& r) {
  const auto [name, nu] = select(m.measures, o.measure, "measure", "--measure");
  const auto [control, mu] = select_control(m, o.control, "--control");
  const LipschitzNorm l = lipschitz_norm(*nu, mu);
  r.results["measure"] = name;
  r.results["control"] = control;
  r.results["bounded"] = l.bounded;
  r.results["value"] = l.bounded ? rational_json(l.value) : json(nullptr);
  if (!l.bounded) {
    json bad = json::array();
    const auto null = mu.null_atoms();
    for (std::size_t a = 0; a < m.algebra.atom_count(); ++a)
      if (null[a] && !is_zero(nu->atom_value(a))) bad.push_back(m.algebra.atom_id(a));
    r.results["charged_null_atoms"] = bad;
  } else {
    r.results["integral_map"] = matrix_json(lipschitz_integral_map(*nu, l1_space(mu)).matrix());
  }
}

void cmd_integrate(const Model& m, const Options& o, Report& r) {
  const auto [fname, f] = select(m.functions, o.function, "scalar function", "--function");
  const auto [name, nu] = select(m.measures, o.measure, "measure", "--measure");
  const LinMap lift = integral_map(*nu);
  r.results["function"] = fname;
  r.results["measure"] = name;
  r.results["canonical_form"] = blocks_json(*f);
  r.results["linf_norm"] = rational_json(linf_norm(*f));
  r.results["integral"] = vector_json(integrate(*f, *nu));
  r.results["integral_map"] = matrix_json(lift.matrix());
  r.results["operator_norm"] = rational_json(operator_norm(lift));
  r.results["semivariation"] = rational_json(semivariation(*nu, m.algebra.top()));
}

void cmd_bochner(const Model& m, const Options& o, Report& r) {
  const auto [fname, f] = select(m.vector_functions, o.function, "vector function", "--function");
  const auto [control, mu] = select_control(m, o.measure, "--measure");
  const BochnerResult b = bochner(*f, mu);
  r.results["function"] = fname;
  r.results["measure"] = control;
  r.results["integral"] = vector_json(b.integral);
  r.results["l1_norm"] = rational_json(b.l1_norm);
  r.results["element"] = vector_json(b.element);
  r.results["witness"] = witness_json(b.witness);
  r.results["integral_norm"] = rational_json(f->coefficients.norm(b.integral));
  r.verified = b.witness.is_isometric() && f->coefficients.norm(b.integral) <= b.l1_norm;
}

void cmd_fubini(const Model& m, const Options& o, Report& r) {
  if (!m.product) throw Error(ErrorCode::CommandMismatch, "the model has no product section");
  const ProductModel& p = *m.product;
  const auto [fname, f] = select(p.functions, o.function, "product function", "--function");
  const FubiniResult fr = fubini(*f, p.coproduct, p.left_measure, p.right_measure);
  r.results["function"] = fname;
  r.results["joint"] = rational_json(fr.joint);
  r.results["inner_left"] = rational_json(fr.inner_left);
  r.results["inner_right"] = rational_json(fr.inner_right);
  r.results["witness"] = witness_json(fr.witness);
  const bool equal = fr.joint == fr.inner_left && fr.joint == fr.inner_right;
  r.results["equal"] = equal;
  r.verified = equal && fr.witness.is_isometric();
}

template <class Map, class Check>
void check_all(const Map& entries, const std::optional<std::string>& name, const std::string& what,
               const std::string& flag, const Options& o, Report& r, Check check) {
  std::vector<std::string> names;
  if (name) {
    names.push_back(select(entries, name, what, flag).first);
  } else {
    if (entries.empty()) throw Error(ErrorCode::CommandMismatch, "the model defines no " + what);
    for (const auto& [k, v] : entries) names.push_back(k);
  }
  for (const auto& k : names) {
    const auto& d = entries.at(k);
    const ConditionVerdict v = check(d, o.exhaustive);
    r.results[k] = verdict_json(d.algebra(), v, o.exhaustive);
    r.verified = r.verified && v.holds;
  }
}

void cmd_check_cosheaf(const Model& m, const Options& o, Report& r) {
  check_all(m.cosheaves, o.cosheaf, "cosheaf", "--cosheaf", o, r,
            [](const PreCosheaf& d, bool ex) { return is_cosheaf(d, ex); });
}

void cmd_check_sheaf(const Model& m, const Options& o, Report& r) {
  check_all(m.sheaves, o.sheaf, "sheaf", "--sheaf", o, r, [](const PreSheaf& d, bool ex) { return is_sheaf(d, ex); });
}

/// The selected precosheaf as a cosheaf, or a failed report with the witness.
std::optional<Cosheaf> require_cosheaf(const Model& m, const Options& o, Report& r) {
  const auto [name, d] = select(m.cosheaves, o.cosheaf, "cosheaf", "--cosheaf");
  r.results["cosheaf"] = name;
  const ConditionVerdict v = is_cosheaf(*d, o.exhaustive);
  if (!v.holds) {
    r.results["condition"] = verdict_json(m.algebra, v, o.exhaustive);
    r.verified = false;
    return std::nullopt;
  }
  return Cosheaf(*d);
}

void cmd_spectral(const Model& m, const Options& o, Report& r) {
  const auto mu = require_cosheaf(m, o, r);
  if (!mu) return;
  const SpectralData s = spectral_measure(*mu);
  r.results["carrier_dim"] = s.carrier.dim();
  json proj = json::object();
  for (std::size_t a = 0; a < m.algebra.atom_count(); ++a)
    proj[m.algebra.format(Element::atom(a))] = matrix_json(s.at(Element::atom(a)).matrix());
  if (o.element) {
    const Element e = parse_element(m.algebra, *o.element);
    proj[m.algebra.format(e)] = matrix_json(s.at(e).matrix());
  }
  r.results["projections"] = proj;
  const SpectralLaws laws = verify_spectral(s);
  r.results["laws"] = json{{"unit", laws.unit},
                           {"bottom", laws.bottom},
                           {"idempotent", laws.idempotent},
                           {"multiplicative", laws.multiplicative},
                           {"additive", laws.additive}};
  r.verified = laws.all();
  if (o.function) {
    const auto [fname, f] = select(m.functions, o.function, "scalar function", "--function");
    const LinMap act = s.action(*f);
    r.results["action"] = json{{"function", fname},
                               {"matrix", matrix_json(act.matrix())},
                               {"operator_norm", rational_json(operator_norm(act))},
                               {"essential_sup", rational_json(essential_sup(*f, s))}};
    r.verified = r.verified && operator_norm(act) == essential_sup(*f, s);
  }
}

void cmd_integrate_morphism(const Model& m, const Options& o, Report& r) {
  const auto mu = require_cosheaf(m, o, r);
  if (!mu) return;
  const auto [fname, f] = select(m.functions, o.function, "scalar function", "--function");
  const Element e = resolve(m.algebra, o.element, m.algebra.top());
  const Element t = resolve(m.algebra, o.to, m.algebra.top());
  const LinMap map = integrate_simple_morphism(*f, *mu, e, t);
  r.results["function"] = fname;
  r.results["from"] = atoms_json(m.algebra, e);
  r.results["to"] = atoms_json(m.algebra, t);
  r.results["map"] = matrix_json(map.matrix());
  r.results["operator_norm"] = rational_json(operator_norm(map));
  r.results["linf_norm"] = rational_json(linf_norm(*f));
  r.verified = operator_norm(map) <= linf_norm(*f);
}

void cmd_cosheafify(const Model& m, const Options& o, Report& r) {
  const auto [name, d] = select(m.cosheaves, o.cosheaf, "cosheaf", "--cosheaf");
  const Cosheafification c = cosheafify(*d);
  const ConditionVerdict in = is_cosheaf(*d, o.exhaustive);
  const ConditionVerdict out = is_cosheaf(c.cosheaf, o.exhaustive);
  r.results["cosheaf"] = name;
  r.results["input"] = verdict_json(m.algebra, in, o.exhaustive);
  r.results["output"] = verdict_json(m.algebra, out, o.exhaustive);
  r.results["dims"] = dims_by_element(c.cosheaf);
  const Element e = resolve(m.algebra, o.element, m.algebra.top());
  r.results["counit"] = json{{"element", atoms_json(m.algebra, e)}, {"matrix", matrix_json(c.counit[e.bits()].matrix())}};
  bool iso = true;
  if (in.holds)
    m.algebra.for_each_element([&](Element x) { iso = iso && isometric_iso(c.counit[x.bits()]); });
  r.results["counit_isometric_on_cosheaf_input"] = in.holds ? json(iso) : json(nullptr);
  r.verified = out.holds && iso;
}

void cmd_bva(const Model& m, const Options& o, Report& r) {
  const auto [name, b] = select(m.spaces, o.space, "space", "--space");
  const PreCosheaf bva = bva_cosheaf(m.algebra, *b);
  const ConditionVerdict v = is_cosheaf(bva, o.exhaustive);
  r.results["space"] = name;
  r.results["dims"] = dims_by_element(bva);
  r.results["condition"] = verdict_json(m.algebra, v, o.exhaustive);
  const Element e = resolve(m.algebra, o.element, m.algebra.top());
  const LinMap ev = bva_evaluation(m.algebra, *b, e);
  r.results["evaluation"] = json{{"element", atoms_json(m.algebra, e)},
                                 {"matrix", matrix_json(ev.matrix())},
                                 {"operator_norm", rational_json(operator_norm(ev))}};
  r.verified = v.holds;
}

void cmd_kan(const Model& m, const Options&, Report& r) {
  if (!m.kan) throw Error(ErrorCode::CommandMismatch, "the model has no kan section");
  const KanModel& k = *m.kan;
  const KanExtension ext = kan_extension_discrete(k.functor, k.inclusion);
  const bool ff = is_fully_faithful(k.inclusion);
  json values = json::object();
  for (std::size_t x = 0; x < k.inclusion.target.object_count(); ++x)
    values[k.inclusion.target.objects()[x]] = ext.values[x].space().dim();
  json eta = json::object();
  bool all_iso = true;
  for (std::size_t a = 0; a < k.inclusion.source.object_count(); ++a) {
    eta[k.inclusion.source.objects()[a]] =
        json{{"matrix", matrix_json(ext.eta[a].matrix())}, {"isometric_iso", static_cast<bool>(ext.eta_isometric_iso[a])}};
    all_iso = all_iso && ext.eta_isometric_iso[a];
  }
  r.results["fully_faithful"] = ff;
  r.results["values"] = values;
  r.results["unit"] = eta;
  r.verified = !ff || all_iso;
}

void cmd_isbell(const Model& m, const Options& o, Report& r) {
  const auto [name, xi] = select(m.sheaves, o.sheaf, "sheaf", "--sheaf");
  r.results["sheaf"] = name;
  r.results["conjugate_dims"] = dims_by_element(isbell(*xi));
  if (o.cosheaf) {
    const auto [cname, mu] = select(m.cosheaves, o.cosheaf, "cosheaf", "--cosheaf");
    const IsbellAdjunction adj = verify_isbell_adjunction(*xi, *mu);
    r.results["adjunction"] = json{{"cosheaf", cname},
                                   {"left_dim", adj.left_dim},
                                   {"right_dim", adj.right_dim},
                                   {"transposes_natural", adj.transposes_natural},
                                   {"bijective", adj.bijective}};
    r.verified = adj.bijective && adj.transposes_natural;
  }
}

// verify-all.

class Checks {
 public:
  void add(const std::string& name, bool ok, json detail = json::object()) {
    detail["name"] = name;
    detail["status"] = ok ? "pass" : "fail";
    (ok ? passed_ : failed_)++;
    list_.push_back(std::move(detail));
  }
  /// Runs a check body; a library error counts as a failure of that check.
  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      add(name, false, json{{"error", e.what()}});
    }
  }
  bool ok() const { return failed_ == 0; }
  json result() const { return json{{"checks", list_}, {"passed", passed_}, {"failed", failed_}}; }

 private:
  json list_ = json::array();
  std::size_t passed_ = 0;
  std::size_t failed_ = 0;
};

void verify_measures(const Model& m, const Options& o, Rng& rng, Checks& c) {
  const BoolAlg& alg = m.algebra;
  const bool enumerate = o.exhaustive || alg.atom_count() <= 5;
  for (const auto& [name, nu] : m.measures) {
    c.guarded("variation/" + name, [&] {
      const Rational v = variation(nu, alg.top());
      Rational best;
      if (enumerate) {
        for_each_partition(alg, alg.top(), alg.atom_count(), [&](const Partition& p) {
          Rational s;
          for (auto b : p.blocks) s += nu.target().norm(nu(b));
          best = std::max(best, s);
        });
      } else {
        for (auto b : atomic_partition(alg, alg.top()).blocks) best += nu.target().norm(nu(b));
      }
      c.add("variation/" + name, v == best, json{{"variation", rational_json(v)}, {"partition_supremum", rational_json(best)}});
    });
    c.guarded("semivariation/" + name, [&] {
      const Rational sv = semivariation(nu, alg.top());
      bool ok = sv <= variation(nu, alg.top());
      // Sampled dual-ball functionals never exceed the semivariation.
      const auto extremes = dual_ball_extreme_points(nu.target());
      std::uniform_int_distribution<std::size_t> pick(0, extremes.size() - 1);
      for (int k = 0; k < 16 && !extremes.empty(); ++k) {
        const Vec& x = extremes[pick(rng)];
        Rational s;
        for (const auto& v : nu.atom_values()) {
          Rational dot;
          for (std::size_t i = 0; i < v.size(); ++i) dot += x[i] * v[i];
          s += rabs(dot);
        }
        ok = ok && s <= sv;
      }
      c.add("semivariation/" + name, ok, json{{"semivariation", rational_json(sv)}});
    });
    c.guarded("integral-lift/" + name, [&] {
      const LinMap lift = integral_map(nu);
      bool ok = true;
      alg.for_each_element([&](Element e) {
        ok = ok && integrate(SimpleElement::characteristic(alg, e), nu) == nu(e);
      });
      const Rational norm = operator_norm(lift);
      const Rational sv = semivariation(nu, alg.top());
      c.add("integral-lift/" + name, ok && norm == sv,
            json{{"operator_norm", rational_json(norm)}, {"semivariation", rational_json(sv)}});
    });
    for (const auto& [cname, cnu] : m.measures) {
      const auto mu = as_measure_algebra(cnu);
      if (!mu) continue;
      const std::string label = "lipschitz/" + name + "/" + cname;
      c.guarded(label, [&] {
        const LipschitzNorm l = lipschitz_norm(nu, *mu);
        bool supported = true;
        const auto null = mu->null_atoms();
        for (std::size_t a = 0; a < alg.atom_count(); ++a)
          if (null[a] && !is_zero(nu.atom_value(a))) supported = false;
        bool ok = l.bounded == supported;
        json detail{{"bounded", l.bounded}};
        if (l.bounded) {
          const Rational norm = operator_norm(lipschitz_integral_map(nu, l1_space(*mu)));
          ok = ok && norm == l.value;
          detail["value"] = rational_json(l.value);
        }
        c.add(label, ok, detail);
      });
    }
  }
  for (const auto& [fname, f] : m.functions) {
    for (const auto& [name, nu] : m.measures) {
      const std::string label = "integrate/" + fname + "/" + name;
      c.guarded(label, [&] {
        const Vec v = integrate(f, nu);
        const bool ok = v == integral_map(nu)(to_vector(f)) &&
                        nu.target().norm(v) <= linf_norm(f) * semivariation(nu, alg.top());
        c.add(label, ok, json{{"integral", vector_json(v)}});
      });
    }
  }
  for (const auto& [fname, f] : m.vector_functions) {
    for (const auto& [name, nu] : m.measures) {
      const auto mu = as_measure_algebra(nu);
      if (!mu) continue;
      const std::string label = "bochner/" + fname + "/" + name;
      c.guarded(label, [&] {
        const BochnerResult b = bochner(f, *mu);
        c.add(label, b.witness.is_isometric() && f.coefficients.norm(b.integral) <= b.l1_norm,
              json{{"l1_norm", rational_json(b.l1_norm)}, {"integral", vector_json(b.integral)}});
      });
    }
  }
  if (m.product) {
    const ProductModel& p = *m.product;
    for (const auto& [fname, f] : p.functions) {
      c.guarded("fubini/" + fname, [&] {
        const FubiniResult fr = fubini(f, p.coproduct, p.left_measure, p.right_measure);
        c.add("fubini/" + fname,
              fr.joint == fr.inner_left && fr.joint == fr.inner_right && fr.witness.is_isometric(),
              json{{"joint", rational_json(fr.joint)}});
      });
    }
  }
}

void verify_diagrams(const Model& m, const Options& o, Rng& rng, Checks& c) {
  const BoolAlg& alg = m.algebra;
  for (const auto& [name, d] : m.cosheaves) {
    const ConditionVerdict v = is_cosheaf(d, o.exhaustive);
    c.add("cosheaf/" + name, v.holds, verdict_json(alg, v, o.exhaustive));
    c.guarded("cosheafify/" + name, [&] {
      const Cosheafification cz = cosheafify(d);
      bool ok = is_cosheaf(cz.cosheaf, o.exhaustive).holds;
      if (v.holds) alg.for_each_element([&](Element e) { ok = ok && isometric_iso(cz.counit[e.bits()]); });
      c.add("cosheafify/" + name, ok);
    });
    if (!v.holds) continue;
    c.guarded("spectral/" + name, [&] {
      const SpectralData s = spectral_measure(Cosheaf(d));
      bool ok = verify_spectral(s).all();
      for (int k = 0; k < 4; ++k) {
        const SimpleElement f = random_simple(rng, alg);
        ok = ok && operator_norm(s.action(f)) == essential_sup(f, s);
      }
      c.add("spectral/" + name, ok);
    });
  }
  for (const auto& [name, d] : m.sheaves) {
    const ConditionVerdict v = is_sheaf(d, o.exhaustive);
    c.add("sheaf/" + name, v.holds, verdict_json(alg, v, o.exhaustive));
    if (!v.holds) continue;
    c.guarded("stone-transfer/" + name, [&] {
      const StoneSheafTransfer t = stone_transfer_sheaf(d, stone_space(alg));
      bool ok = true;
      for (const auto& w : t.comparison) ok = ok && w.is_isometric();
      c.add("stone-transfer/" + name, ok);
    });
  }
  for (const auto& [name, b] : m.spaces) {
    if (b.flavor() != Flavor::Sum) continue;
    c.guarded("bva/" + name, [&] {
      const ConditionVerdict v = is_cosheaf(bva_cosheaf(alg, b), o.exhaustive);
      c.add("bva/" + name, v.holds, verdict_json(alg, v, o.exhaustive));
    });
  }
}

void verify_bundles(const Model& m, Checks& c) {
  for (const auto& [name, xi] : m.bundles) {
    c.guarded("canonical-decomposition/" + name, [&] {
      const CanonicalDecomposition d = canonical_decomposition(xi);
      bool ok = d.decomposed.base() == xi.base();
      for (const auto& w : d.witness) ok = ok && w.is_isometric();
      c.add("canonical-decomposition/" + name, ok);
    });
  }
  for (const auto& [tn, t] : m.functor_matrices) {
    c.guarded("unitors/" + tn, [&] {
      c.add("unitors/" + tn, left_unitor(t).is_isometric_iso() && right_unitor(t).is_isometric_iso());
    });
    for (const auto& [sn, s] : m.functor_matrices) {
      if (s.source != t.target) continue;
      for (const auto& [bn, xi] : m.bundles) {
        if (xi.base() != t.source) continue;
        const std::string label = "apply-compose/" + sn + "/" + tn + "/" + bn;
        c.guarded(label, [&] {
          bool ok = true;
          for (const auto& w : apply_compose_witness(s, t, xi)) ok = ok && w.is_isometric();
          c.add(label, ok);
        });
      }
      for (const auto& [rn, rr] : m.functor_matrices) {
        if (rr.source != s.target) continue;
        const std::string label = "associator/" + rn + "/" + sn + "/" + tn;
        c.guarded(label, [&] { c.add(label, associator(rr, s, t).is_isometric_iso()); });
      }
    }
  }
  if (m.kan) {
    c.guarded("kan/unit", [&] {
      const KanExtension ext = kan_extension_discrete(m.kan->functor, m.kan->inclusion);
      bool ok = true;
      if (is_fully_faithful(m.kan->inclusion))
        for (bool iso : ext.eta_isometric_iso) ok = ok && iso;
      c.add("kan/unit", ok);
    });
  }
}

void cmd_verify_all(const Model& m, const Options& o, Report& r) {
  Rng rng(o.seed);
  Checks c;
  const StoneSpace s = stone_space(m.algebra);
  c.add("stone/roundtrip", verify_stone_roundtrip(s) && s.points.size() == m.algebra.atom_count());
  if (m.algebra.atom_count() <= 8) {
    const auto count = partitions_of(m.algebra, m.algebra.top(), m.algebra.atom_count()).size();
    c.add("partitions/bell", count == bell(m.algebra.atom_count()), json{{"count", count}});
  }
  verify_measures(m, o, rng, c);
  verify_diagrams(m, o, rng, c);
  verify_bundles(m, c);
  r.results = c.result();
  r.verified = c.ok();
}

using Command = std::function<void(const Model&, const Options&, Report&)>;

const std::vector<std::pair<std::string, Command>>& registry() {
  static const std::vector<std::pair<std::string, Command>> commands{
      {"stone", cmd_stone},
      {"partitions", cmd_partitions},
      {"variation", [](const Model& m, const Options& o, Report& r) { cmd_variation(m, o, r, false); }},
      {"semivariation", [](const Model& m, const Options& o, Report& r) { cmd_variation(m, o, r, true); }},
      {"lipschitz", cmd_lipschitz},
      {"integrate", cmd_integrate},
      {"bochner", cmd_bochner},
      {"fubini", cmd_fubini},
      {"check-sheaf", cmd_check_sheaf},
      {"check-cosheaf", cmd_check_cosheaf},
      {"spectral", cmd_spectral},
      {"integrate-morphism", cmd_integrate_morphism},
      {"cosheafify", cmd_cosheafify},
      {"bva", cmd_bva},
      {"kan", cmd_kan},
      {"isbell", cmd_isbell},
      {"verify-all", cmd_verify_all},
  };
  return commands;
}

json echo_json(const std::string& model, const Options& o) {
  json echo{{"model", model}, {"seed", o.seed}, {"exhaustive", o.exhaustive}};
  const std::pair<const char*, const std::optional<std::string>*> selectors[] = {
      {"element", &o.element}, {"to", &o.to},         {"measure", &o.measure}, {"control", &o.control},
      {"function", &o.function}, {"cosheaf", &o.cosheaf}, {"sheaf", &o.sheaf}, {"space", &o.space}};
  for (const auto& [k, v] : selectors)
    if (*v) echo[k] = **v;
  if (o.max_blocks) echo["max_blocks"] = o.max_blocks;
  return echo;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
  }();
  return names;
}

Report run(const std::string& command, const Model& model, const Options& options) {
  for (const auto& [name, fn] : registry()) {
    if (name != command) continue;
    Report r{command, echo_json(model.source, options), json::object(), true, std::nullopt};
    fn(model, options, r);
    return r;
  }
  throw Error(ErrorCode::UnknownCommand, "unknown command \"" + command + "\"");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact finite measure, integration and cosheaf calculator", "catmeas"};
  std::string command, model_path, format = "text";
  Options o;
  bool timing = false;
  std::string names;
  for (const auto& n : command_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", command, "One of: " + names)->required();
  app.add_option("--model", model_path, "Model file (JSON)")->required();
  app.add_option("--seed", o.seed, "Seed for randomized checks");
  app.add_flag("--exhaustive", o.exhaustive, "Check every partition instead of binary splits");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--element", o.element, "Element expression, e.g. \"{a,b} | ~c\"");
  app.add_option("--to", o.to, "Target element expression");
  app.add_option("--measure", o.measure, "Measure name");
  app.add_option("--control", o.control, "Control measure name");
  app.add_option("--function", o.function, "Function name");
  app.add_option("--cosheaf", o.cosheaf, "Cosheaf name");
  app.add_option("--sheaf", o.sheaf, "Sheaf name");
  app.add_option("--space", o.space, "Space name");
  app.add_option("--max-blocks", o.max_blocks, "Limit partitions to this many blocks (0 = no limit)");
  app.add_flag("--timing", timing, "Report wall-clock time");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n";
    return 2;
  }

  try {
    if (std::find(command_names().begin(), command_names().end(), command) == command_names().end())
      throw Error(ErrorCode::UnknownCommand, "unknown command \"" + command + "\"; expected one of: " + names);
    const auto start = std::chrono::steady_clock::now();
    const Model model = parse_model(model_path);
    Report report = run(command, model, o);
    if (timing)
      report.elapsed_us =
          std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
    out << emit_report(report, format == "structured" ? Format::Structured : Format::Text);
    return report.verified ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace catmeas::cli
