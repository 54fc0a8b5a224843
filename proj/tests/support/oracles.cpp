#include "oracles.hpp"

#include "catmeas/lp.hpp"

#include <algorithm>
#include <functional>

namespace catmeas::testing {

std::vector<Element> brute_force_ultrafilters(const BoolAlg& alg) {
  std::vector<Element> out;
  alg.for_each_element([&](Element g) {
    if (g.is_bottom()) return;
    bool prime = true;
    alg.for_each_element([&](Element e) {
      const bool in_e = g <= e;
      const bool in_complement = g <= alg.complement(e);
      if (in_e == in_complement) prime = false;
    });
    if (prime) out.push_back(g);
  });
  return out;
}

std::uint64_t bell_number(std::size_t n) {
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

std::vector<std::vector<Element>> brute_force_partitions(const BoolAlg& alg, Element e) {
  const auto atoms = alg.atoms_below(e);
  std::vector<std::vector<Element>> out;
  std::vector<Element> blocks;
  std::function<void(std::size_t)> place = [&](std::size_t k) {
    if (k == atoms.size()) {
      out.push_back(blocks);
      return;
    }
    const Element atom = Element::atom(atoms[k]);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Element saved = blocks[b];
      blocks[b] = saved | atom;
      place(k + 1);
      blocks[b] = saved;
    }
    blocks.push_back(atom);
    place(k + 1);
    blocks.pop_back();
  };
  place(0);
  return out;
}

Rational brute_force_variation(const VectorMeasure& nu, Element e) {
  Rational best;
  for (const auto& partition : brute_force_partitions(nu.algebra(), e)) {
    Rational total;
    for (auto block : partition) total += nu.target().norm(nu(block));
    best = std::max(best, total);
  }
  return best;
}

Rational signed_sum_semivariation(const VectorMeasure& nu, Element e) {
  const auto atoms = nu.algebra().atoms_below(e);
  Rational best;
  for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << atoms.size()); ++signs) {
    Vec total(nu.target().dim());
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const Vec& v = nu.atom_value(atoms[k]);
      total = ((signs >> k) & 1U) ? total - v : total + v;
    }
    best = std::max(best, nu.target().norm(total));
  }
  return best;
}

namespace {

/// A random functional of dual norm exactly 1.
Vec random_dual_unit(Rng& rng, const FinBanSpace& space) {
  const std::size_t d = space.dim();
  Vec phi(d);
  if (space.flavor() == Flavor::Sum) {
    // Dual norm max |phi_i| / w_i.
    for (std::size_t i = 0; i < d; ++i) phi[i] = random_rational(rng, 4, 4) / 4 * space.weight(i);
    Rational m;
    for (std::size_t i = 0; i < d; ++i) m = std::max(m, rabs(phi[i]) / space.weight(i));
    if (m == 0) phi[0] = space.weight(0), m = 1;
    for (auto& x : phi) x /= m;
  } else {
    // Dual norm sum |phi_i| / w_i.
    for (std::size_t i = 0; i < d; ++i) phi[i] = random_rational(rng) * space.weight(i);
    Rational s;
    for (std::size_t i = 0; i < d; ++i) s += rabs(phi[i]) / space.weight(i);
    if (s == 0) phi[0] = space.weight(0), s = 1;
    for (auto& x : phi) x /= s;
  }
  return phi;
}

Rational pairing(const Vec& a, const Vec& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Rational sampled_semivariation(Rng& rng, const VectorMeasure& nu, Element e, std::size_t samples) {
  if (nu.target().dim() == 0) return Rational(0);
  const auto partitions = brute_force_partitions(nu.algebra(), e);
  Rational best;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec phi = random_dual_unit(rng, nu.target());
    for (const auto& partition : partitions) {
      Rational total;
      for (auto block : partition) total += rabs(pairing(phi, nu(block)));
      best = std::max(best, total);
    }
  }
  return best;
}

Rational vertex_operator_norm(const LinMap& map) {
  const FinBanSpace& src = map.source();
  const std::size_t d = src.dim();
  Rational best;
  if (src.flavor() == Flavor::Sum) {
    for (std::size_t i = 0; i < d; ++i) {
      Vec v(d);
      v[i] = Rational(1) / src.weight(i);
      best = std::max(best, map.target().norm(map(v)));
    }
    return best;
  }
  for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << d); ++signs) {
    Vec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = (((signs >> i) & 1U) ? Rational(-1) : Rational(1)) / src.weight(i);
    best = std::max(best, map.target().norm(map(v)));
  }
  return best;
}

Rational lp_projective_norm(Rng& rng, const FinBanSpace& a, const FinBanSpace& b, const Vec& t, std::size_t extra) {
  auto unit_vectors = [&](const FinBanSpace& s) {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < s.dim(); ++i) {
      Vec v(s.dim());
      v[i] = Rational(1) / s.weight(i);
      out.push_back(v);
    }
    for (std::size_t k = 0; k < extra; ++k) {
      Vec v = random_vec(rng, s.dim());
      const Rational n = s.norm(v);
      if (n == 0) continue;
      for (auto& x : v) x /= n;
      out.push_back(v);
    }
    return out;
  };
  const auto xs = unit_vectors(a);
  const auto ys = unit_vectors(b);
  std::vector<Vec> generators;
  for (const auto& x : xs)
    for (const auto& y : ys) {
      Vec g;
      for (const auto& xi : x)
        for (const auto& yj : y) g.push_back(xi * yj);
      generators.push_back(std::move(g));
    }
  const std::size_t n = t.size();
  const std::size_t k = generators.size();
  LinearProgram lp;
  lp.equality = Matrix(n, 2 * k);
  lp.rhs = t;
  lp.cost.assign(2 * k, Rational(1));
  for (std::size_t g = 0; g < k; ++g)
    for (std::size_t i = 0; i < n; ++i) {
      lp.equality(i, g) = generators[g][i];
      lp.equality(i, k + g) = -generators[g][i];
    }
  const LpResult res = solve_lp(lp);
  return res.value;
}

Rational brute_force_lipschitz(const VectorMeasure& nu, const MeasureAlgebra& mu) {
  Rational best;
  nu.algebra().for_each_element([&](Element e) {
    const Rational m = mu(e);
    if (m > 0) best = std::max(best, Rational(nu.target().norm(nu(e)) / m));
  });
  return best;
}

}  // namespace catmeas::testing
