#include "catmeas/errors.hpp"
#include "catmeas/shcosh.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace catmeas;
using namespace catmeas::testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidModel;
}

bool isometric_iso(const LinMap& m) {
  const auto inv = inverse(m.matrix());
  if (!inv) return false;
  return IsoWitness{m, LinMap(m.target(), m.source(), *inv)}.is_isometric();
}

MeasureAlgebra positive_measure(Rng& rng, std::size_t atoms) { return random_measure_algebra(rng, algebra_with(atoms)); }

std::vector<FinBanSpace> random_stalks(Rng& rng, std::size_t n, std::size_t max_dim, Flavor fl) {
  std::vector<FinBanSpace> out;
  for (std::size_t a = 0; a < n; ++a) out.push_back(random_space(rng, uniform(rng, 0, max_dim), fl, "s"));
  return out;
}

}  // namespace

TEST(CosheafCondition, L1CosheafHolds) {
  Rng rng(81);
  for (std::size_t n = 1; n <= 4; ++n) {
    const PreCosheaf mu = l1_cosheaf(positive_measure(rng, n));
    EXPECT_TRUE(is_cosheaf(mu).holds);
    EXPECT_TRUE(is_cosheaf(mu, true).holds);
  }
}

TEST(CosheafCondition, ConstantPrecosheafFailsWithPartition) {
  for (std::size_t n = 2; n <= 4; ++n) {
    const BoolAlg alg = algebra_with(n);
    const ConditionVerdict v = is_cosheaf(constant_precosheaf(alg, FinBanSpace::l1(1)));
    EXPECT_FALSE(v.holds);
    ASSERT_TRUE(v.counterexample.has_value());
    EXPECT_GE(v.counterexample->blocks.size(), 2U);
    EXPECT_FALSE(v.reason.empty());
  }
}

TEST(CosheafCondition, ZeroPrecosheafHoldsAndOneAtomConstantFailsAtBottom) {
  const BoolAlg alg = algebra_with(3);
  EXPECT_TRUE(is_cosheaf(zero_precosheaf(alg)).holds);
  EXPECT_TRUE(is_sheaf(zero_presheaf(alg)).holds);
  const ConditionVerdict v = is_cosheaf(constant_precosheaf(algebra_with(1), FinBanSpace::l1(1)));
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.counterexample.has_value());
  EXPECT_TRUE(v.counterexample->parent.is_bottom());
}

TEST(CosheafCondition, BinaryAndExhaustiveModesAgree) {
  Rng rng(82);
  for (int trial = 0; trial < 30; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 3));
    const PreCosheaf theta = random_precosheaf(rng, alg, 2, uniform(rng, 0, 1) == 1);
    EXPECT_EQ(is_cosheaf(theta).holds, is_cosheaf(theta, true).holds);
  }
}

TEST(SheafCondition, StalkSheavesAndCharacteristicSheavesHold) {
  Rng rng(83);
  for (std::size_t n = 1; n <= 4; ++n) {
    const BoolAlg alg = algebra_with(n);
    EXPECT_TRUE(is_sheaf(sheaf_from_stalks(alg, random_stalks(rng, n, 2, Flavor::Sup)), true).holds);
    alg.for_each_element([&](Element e) { EXPECT_TRUE(is_sheaf(characteristic_sheaf(alg, e)).holds); });
  }
}

TEST(Diagram, FunctorialityViolationRejected) {
  const BoolAlg alg = algebra_with(2);
  std::vector<FinBanSpace> spaces(4, FinBanSpace::l1(1));
  // The two routes from bottom to top disagree.
  EXPECT_EQ(code_of([&] {
              PreCosheaf(alg, spaces, [&](Element small, Element large) {
                const Rational k = (small.is_bottom() && large == Element::atom(0)) ? Rational(1, 2) : Rational(1);
                return LinMap(spaces[small.bits()], spaces[large.bits()], Matrix::diagonal({k}));
              });
            }),
            ErrorCode::NotAFunctor);
}

TEST(Spectral, L1CosheafGivesDiagonalProjections) {
  Rng rng(84);
  const MeasureAlgebra mu = positive_measure(rng, 3);
  const SpectralData s = spectral_measure(Cosheaf(l1_cosheaf(mu)));
  mu.algebra().for_each_element([&](Element e) {
    Vec diag(3);
    for (auto a : mu.algebra().atoms_below(e)) diag[a] = 1;
    EXPECT_EQ(s.at(e).matrix(), Matrix::diagonal(diag));
  });
  EXPECT_EQ(s.at(mu.algebra().top()).matrix(), Matrix::identity(3));
  EXPECT_TRUE(verify_spectral(s).all());
}

TEST(Spectral, ActionIsIsometricOnL1Model) {
  Rng rng(85);
  const MeasureAlgebra mu = positive_measure(rng, 4);
  const SpectralData s = spectral_measure(Cosheaf(l1_cosheaf(mu)));
  for (int trial = 0; trial < 50; ++trial) {
    const SimpleElement f = random_simple(rng, mu.algebra());
    EXPECT_EQ(operator_norm(s.action(f)), linf_norm(f));
    const SimpleElement g = random_simple(rng, mu.algebra());
    EXPECT_EQ(s.action(f * g).matrix(), s.action(f).after(s.action(g)).matrix());
  }
}

TEST(Spectral, NoncanonicalCosheavesSatisfyLaws) {
  Rng rng(86);
  for (int trial = 0; trial < 20; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 3));
    const SpectralData s = spectral_measure(Cosheaf(random_noncanonical_cosheaf(rng, alg, 2)));
    EXPECT_TRUE(verify_spectral(s).all());
    const SimpleElement f = random_simple(rng, alg);
    EXPECT_EQ(operator_norm(s.action(f)), essential_sup(f, s));
  }
}

TEST(Spectral, NonCosheafRejected) {
  const BoolAlg alg = algebra_with(2);
  EXPECT_EQ(code_of([&] { Cosheaf(constant_precosheaf(alg, FinBanSpace::l1(1))); }), ErrorCode::NotACosheaf);
}

TEST(SimpleMorphism, OneBlockScalarAndSupport) {
  Rng rng(87);
  const MeasureAlgebra mu = positive_measure(rng, 3);
  const BoolAlg& alg = mu.algebra();
  const Cosheaf c(l1_cosheaf(mu));
  const Element e(0b011), f(0b110), ef = e & f;
  EXPECT_EQ(integrate_simple_morphism(SimpleElement::characteristic(alg, ef), c, e, f).matrix(),
            c.extension(ef, f).after(c.projection(e, ef)).matrix());
  const LinMap twice = integrate_simple_morphism(SimpleElement::characteristic(alg, e, 2), c, e, e);
  EXPECT_EQ(twice.matrix(), Matrix::identity(2).scaled(2));
  EXPECT_EQ(operator_norm(twice), 2);
  EXPECT_EQ(code_of([&] { integrate_simple_morphism(SimpleElement::characteristic(alg, e), c, e, f); }),
            ErrorCode::SupportError);
}

TEST(SimpleMorphism, FunctorialOnThreeAtoms) {
  Rng rng(88);
  const MeasureAlgebra mu = positive_measure(rng, 3);
  const BoolAlg& alg = mu.algebra();
  const Cosheaf c(l1_cosheaf(mu));
  for (int trial = 0; trial < 50; ++trial) {
    const Element e = random_element(rng, alg), f = random_element(rng, alg), g = random_element(rng, alg);
    const SimpleElement sf = random_simple(rng, alg) * SimpleElement::characteristic(alg, e & f);
    const SimpleElement sg = random_simple(rng, alg) * SimpleElement::characteristic(alg, f & g);
    const LinMap lf = integrate_simple_morphism(sf, c, e, f);
    const LinMap lg = integrate_simple_morphism(sg, c, f, g);
    EXPECT_EQ(integrate_simple_morphism(sg * sf, c, e, g).matrix(), lg.after(lf).matrix());
    EXPECT_EQ(operator_norm(lf), linf_norm(sf));
    EXPECT_EQ(integrate_simple_morphism(SimpleElement::characteristic(alg, e), c, e, e).matrix(),
              Matrix::identity(c.space(e).dim()));
  }
}

TEST(CharacteristicSheaf, HomDimensionIsMeetAtomCount) {
  const BoolAlg alg = algebra_with(3);
  alg.for_each_element([&](Element e) {
    alg.for_each_element([&](Element f) {
      EXPECT_EQ(sheaf_hom(characteristic_sheaf(alg, e), characteristic_sheaf(alg, f)).dim(), (e & f).atom_count());
    });
  });
  Rng rng(89);
  EXPECT_EQ(sheaf_hom(characteristic_sheaf(alg, alg.bottom()), sheaf_from_stalks(alg, random_stalks(rng, 3, 2, Flavor::Sup))).dim(),
            0U);
}

TEST(CharacteristicSheaf, EndomorphismsOfTopFormLinf) {
  const BoolAlg alg = algebra_with(3);
  const PreSheaf chi = characteristic_sheaf(alg, alg.top());
  const NaturalTransformations h = sheaf_hom(chi, chi);
  ASSERT_EQ(h.dim(), 3U);
  std::vector<Matrix> tops;
  for (std::size_t k = 0; k < 3; ++k) {
    Vec coords(3);
    coords[k] = 1;
    const Matrix m = h.component(coords, alg.top());
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j) {
          EXPECT_EQ(m(i, j), 0);
        }
    tops.push_back(m);
  }
  // Componentwise products of natural maps are natural, and the top
  // components multiply like functions on atoms.
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      Vec ca(3), cb(3);
      ca[a] = 1;
      cb[b] = 1;
      std::vector<Matrix> comps;
      alg.for_each_element([&](Element e) { comps.push_back(h.component(ca, e) * h.component(cb, e)); });
      EXPECT_TRUE(h.is_natural(comps));
      for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ((tops[a] * tops[b])(i, i), tops[a](i, i) * tops[b](i, i));
    }
}

TEST(Cosheafify, CosheafInputGivesIsometricCounit) {
  Rng rng(90);
  for (int trial = 0; trial < 20; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 3));
    const PreCosheaf theta = random_noncanonical_cosheaf(rng, alg, 2);
    const Cosheafification c = cosheafify(theta);
    EXPECT_TRUE(is_cosheaf(c.cosheaf).holds);
    alg.for_each_element([&](Element e) { EXPECT_TRUE(isometric_iso(c.counit[e.bits()])); });
  }
}

TEST(Cosheafify, ConstantCollapsesToFinestPartition) {
  Rng rng(91);
  const BoolAlg alg = algebra_with(3);
  const FinBanSpace b = random_space(rng, 2, Flavor::Sum);
  const Cosheafification c = cosheafify(constant_precosheaf(alg, b));
  EXPECT_TRUE(is_cosheaf(c.cosheaf).holds);
  alg.for_each_element([&](Element e) {
    const FinBanSpace& s = c.cosheaf.space(e);
    EXPECT_EQ(s.dim(), e.atom_count() * 2);
    for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_EQ(s.weight(i), b.weight(i % 2));
  });
  EXPECT_FALSE(isometric_iso(c.counit[alg.top().bits()]));
  const Cosheafification z = cosheafify(zero_precosheaf(alg));
  alg.for_each_element([&](Element e) { EXPECT_EQ(z.cosheaf.space(e).dim(), 0U); });
}

TEST(Cosheafify, IdempotentAndUniversal) {
  Rng rng(92);
  for (int trial = 0; trial < 20; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 3));
    const PreCosheaf theta = random_precosheaf(rng, alg, 2, true);
    const Cosheafification c = cosheafify(theta);
    const Cosheafification cc = cosheafify(c.cosheaf);
    alg.for_each_element([&](Element e) { EXPECT_TRUE(isometric_iso(cc.counit[e.bits()])); });
    const Cosheaf nu(random_noncanonical_cosheaf(rng, alg, 2));
    const auto tau = random_cosheaf_map(rng, nu, theta);
    const Factorization fz = factor_through_cosheafification(nu, tau, c);
    EXPECT_TRUE(fz.natural);
    EXPECT_TRUE(fz.commutes);
    EXPECT_TRUE(fz.unique);
  }
}

TEST(Bva, ScalarsGiveL1AndPartitionIsometries) {
  Rng rng(93);
  for (std::size_t n = 1; n <= 4; ++n) {
    const BoolAlg alg = algebra_with(n);
    const PreCosheaf scalars = bva_cosheaf(alg, FinBanSpace::scalars());
    EXPECT_EQ(scalars.space(alg.top()).dim(), n);
    for (const auto& w : scalars.space(alg.top()).weights()) EXPECT_EQ(w, 1);
    const FinBanSpace b = random_space(rng, uniform(rng, 1, 3), Flavor::Sum);
    const PreCosheaf bva = bva_cosheaf(alg, b);
    EXPECT_TRUE(is_cosheaf(bva, true).holds);
    // Norm equals the total variation of the represented measure.
    const Vec coords = random_vec(rng, bva.space(alg.top()).dim());
    EXPECT_EQ(bva.space(alg.top()).norm(coords), variation(bva_measure(alg, b, alg.top(), coords), alg.top()));
  }
}

TEST(Bva, IndefiniteIntegralEmbedding) {
  Rng rng(94);
  const MeasureAlgebra mu = positive_measure(rng, 3);
  const BoolAlg& alg = mu.algebra();
  const Cosheaf theta(l1_cosheaf(mu));
  const FinBanSpace k = FinBanSpace::scalars();
  std::vector<LinMap> tau;
  alg.for_each_element([&](Element e) {
    Matrix m(1, e.atom_count());
    std::size_t col = 0;
    for (auto a : alg.atoms_below(e)) m(0, col++) = mu.atom_values()[a];
    tau.emplace_back(theta.space(e), k, m);
  });
  const auto induced = constant_universal_map(theta, tau, k);
  alg.for_each_element([&](Element e) {
    Vec diag;
    for (auto a : alg.atoms_below(e)) diag.push_back(mu.atom_values()[a]);
    EXPECT_EQ(induced[e.bits()].matrix(), Matrix::diagonal(diag));
    EXPECT_EQ(bva_evaluation(alg, k, e).after(induced[e.bits()]).matrix(), tau[e.bits()].matrix());
  });
}

TEST(Isbell, YonedaAndZero) {
  const BoolAlg alg = algebra_with(3);
  alg.for_each_element([&](Element e) {
    const PreCosheaf l = isbell(yoneda_presheaf(alg, e));
    const PreCosheaf y = yoneda_precosheaf(alg, e);
    alg.for_each_element([&](Element a) { EXPECT_EQ(l.space(a).dim(), y.space(a).dim()); });
  });
  const PreCosheaf z = isbell(zero_presheaf(alg));
  alg.for_each_element([&](Element a) { EXPECT_EQ(z.space(a).dim(), 0U); });
}

TEST(Isbell, AdjunctionBijectionOnRandomInstances) {
  Rng rng(95);
  for (int trial = 0; trial < 10; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 2));
    const PreSheaf xi = sheaf_from_stalks(alg, random_stalks(rng, alg.atom_count(), 2, Flavor::Sup));
    const PreCosheaf mu = random_precosheaf(rng, alg, 1, uniform(rng, 0, 1) == 1);
    const IsbellAdjunction adj = verify_isbell_adjunction(xi, mu);
    EXPECT_EQ(adj.left_dim, adj.right_dim);
    EXPECT_TRUE(adj.transposes_natural);
    EXPECT_TRUE(adj.bijective);
  }
}

TEST(StoneSheaf, RoundTripIsIsometric) {
  Rng rng(96);
  for (int trial = 0; trial < 10; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 3));
    const PreSheaf xi = sheaf_from_stalks(alg, random_stalks(rng, alg.atom_count(), 2, Flavor::Sup));
    const StoneSheafTransfer t = stone_transfer_sheaf(xi, stone_space(alg));
    EXPECT_TRUE(is_sheaf(t.rebuilt).holds);
    for (const auto& w : t.comparison) EXPECT_TRUE(w.is_isometric());
  }
}
