#include "catmeas/errors.hpp"
#include "catmeas/measures.hpp"
#include "catmeas/simple.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace catmeas;
using namespace catmeas::testing;

namespace {

std::vector<Rational> rs(std::initializer_list<int> xs) {
  std::vector<Rational> v;
  for (int x : xs) v.push_back(Rational(x));
  return v;
}

FinBanSpace random_target(Rng& rng) {
  return random_space(rng, uniform(rng, 1, 3), uniform(rng, 0, 1) ? Flavor::Sum : Flavor::Sup);
}

}  // namespace

TEST(Variation, SignedScalarOnTwoAtoms) {
  const BoolAlg alg = algebra_with(2);
  const auto nu = VectorMeasure::scalar(alg, rs({1, -1}));
  EXPECT_EQ(variation(nu, alg.top()), 2);
  EXPECT_EQ(brute_force_variation(nu, alg.top()), 2);
}

TEST(Variation, PositiveMeasureAndZero) {
  const BoolAlg alg = algebra_with(3);
  const auto mu = VectorMeasure::scalar(alg, rs({1, 2, 3}));
  alg.for_each_element([&](Element e) { EXPECT_EQ(variation(mu, e), mu.scalar_value(e)); });
  EXPECT_EQ(variation(VectorMeasure::scalar(alg, rs({0, 0, 0})), alg.top()), 0);
}

TEST(Variation, MatchesPartitionOracleAndIsAdditive) {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 4));
    const auto nu = random_measure(rng, alg, random_target(rng));
    const Element e = random_element(rng, alg), f = random_element(rng, alg) - e;
    EXPECT_EQ(variation(nu, e), brute_force_variation(nu, e));
    EXPECT_EQ(variation(nu, e | f), variation(nu, e) + variation(nu, f));
  }
}

TEST(Semivariation, CharacteristicMeasureHasSemivariationOne) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const BoolAlg alg = algebra_with(n);
    EXPECT_EQ(semivariation(characteristic_measure(alg), alg.top()), 1);
  }
}

TEST(Semivariation, ScalarEqualsVariationAndZero) {
  Rng rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 4));
    std::vector<Rational> vals;
    for (std::size_t a = 0; a < alg.atom_count(); ++a) vals.push_back(random_rational(rng));
    const auto nu = VectorMeasure::scalar(alg, vals);
    alg.for_each_element([&](Element e) { EXPECT_EQ(semivariation(nu, e), variation(nu, e)); });
  }
  const BoolAlg alg = algebra_with(2);
  EXPECT_EQ(semivariation(VectorMeasure(alg, FinBanSpace::l1(2), {Vec(2), Vec(2)}), alg.top()), 0);
}

TEST(Semivariation, AgreesWithSignedSumsAndDominatesSamples) {
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 4));
    const auto nu = random_measure(rng, alg, random_target(rng));
    const Element e = random_element(rng, alg);
    const Rational sv = semivariation(nu, e);
    EXPECT_EQ(sv, signed_sum_semivariation(nu, e));
    EXPECT_LE(sampled_semivariation(rng, nu, e, 4), sv);
    EXPECT_LE(sv, variation(nu, e));
  }
}

TEST(Semivariation, PositiveMonotoneSubadditive) {
  Rng rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 4));
    const auto nu = random_measure(rng, alg, random_target(rng));
    const Element e = random_element(rng, alg), f = random_element(rng, alg);
    EXPECT_GE(semivariation(nu, e), 0);
    EXPECT_LE(semivariation(nu, e & f), semivariation(nu, e));
    EXPECT_LE(semivariation(nu, e | f), semivariation(nu, e) + semivariation(nu, f));
  }
}

TEST(Lipschitz, ScalingNullAndExhaustiveExample) {
  const BoolAlg alg = algebra_with(2);
  const MeasureAlgebra mu(alg, rs({1, 3}));
  const auto two_mu = VectorMeasure::scalar(alg, rs({2, 6}));
  EXPECT_EQ(lipschitz_norm(two_mu, mu).value, 2);
  const MeasureAlgebra with_null(alg, rs({0, 1}));
  EXPECT_FALSE(lipschitz_norm(VectorMeasure::scalar(alg, rs({1, 0})), with_null).bounded);
  const auto nu = VectorMeasure::scalar(alg, rs({1, 3}));
  const LipschitzNorm l = lipschitz_norm(nu, MeasureAlgebra(alg, rs({1, 1})));
  ASSERT_TRUE(l.bounded);
  EXPECT_EQ(l.value, 3);
}

TEST(Lipschitz, MatchesOracleAndSupportCriterion) {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 4));
    const MeasureAlgebra mu = random_measure_algebra(rng, alg, true);
    const auto nu = random_measure(rng, alg, random_target(rng));
    bool supported = true;
    for (std::size_t a = 0; a < alg.atom_count(); ++a)
      if (mu.atom_values()[a] == 0 && !is_zero(nu.atom_value(a))) supported = false;
    const LipschitzNorm l = lipschitz_norm(nu, mu);
    EXPECT_EQ(l.bounded, supported);
    if (l.bounded) {
      EXPECT_EQ(l.value, brute_force_lipschitz(nu, mu));
    }
  }
}

TEST(MeasureAlgebra, MonotoneAndRejectsNegative) {
  Rng rng(56);
  const BoolAlg alg = algebra_with(4);
  const MeasureAlgebra mu = random_measure_algebra(rng, alg, true);
  alg.for_each_element([&](Element e) {
    alg.for_each_element([&](Element f) {
      if (e <= f) {
        EXPECT_LE(mu(e), mu(f));
      }
    });
  });
  EXPECT_THROW(MeasureAlgebra(alg, rs({1, -1, 0, 0})), Error);
}

TEST(Pullback, IdentityAndCollapse) {
  const BoolAlg alg = algebra_with(3);
  const auto nu = VectorMeasure::scalar(alg, rs({1, 2, 3}));
  const auto same = pullback(BoolMorphism::identity(alg), nu);
  EXPECT_EQ(same.atom_values(), nu.atom_values());

  // phi: {c0, c1} -> alg, c0 -> a0 + a1, c1 -> a2.
  const BoolAlg coarse = algebra_with(2, "c");
  const BoolMorphism phi(coarse, alg, {Element(0b011), Element(0b100)});
  const auto back = pullback(phi, nu);
  EXPECT_EQ(back.scalar_value(Element::atom(0)), 3);
  EXPECT_EQ(back.scalar_value(Element::atom(1)), 3);
  coarse.for_each_element([&](Element e) { EXPECT_EQ(back(e), nu(phi(e))); });
}

TEST(Pullback, ChangeOfVariables) {
  Rng rng(57);
  const BoolAlg small = algebra_with(2, "s");
  const BoolAlg big = algebra_with(4, "b");
  const auto morphisms = unital_morphisms(small, big);
  for (int trial = 0; trial < 20; ++trial) {
    const BoolMorphism& phi = morphisms[uniform(rng, 0, morphisms.size() - 1)];
    const auto nu = random_measure(rng, big, random_space(rng, 2, Flavor::Sum));
    const SimpleElement f = random_simple(rng, small);
    // phi-star f: the function on big taking f's value on the source atom above each target atom.
    std::vector<Rational> pushed(big.atom_count());
    for (std::size_t a = 0; a < small.atom_count(); ++a)
      for (auto b : big.atoms_below(phi.atom_images()[a])) pushed[b] = f.at(a);
    EXPECT_EQ(integrate(SimpleElement(big, pushed), nu), integrate(f, pullback(phi, nu)));
  }
}

TEST(ProductMeasure, TopMarginalsAndUniform) {
  const BoolAlg a = algebra_with(2, "a"), b = algebra_with(3, "b");
  const Coproduct cp = coproduct(a, b);
  const auto mu = VectorMeasure::scalar(a, {Rational(1, 2), Rational(1, 2)});
  const auto nu = VectorMeasure::scalar(b, {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  const auto prod = product_measure(mu, nu, cp);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(prod.scalar_value(Element::atom(i)), Rational(1, 6));
  Rng rng(58);
  const auto m2 = VectorMeasure::scalar(a, {random_rational(rng), random_rational(rng)});
  const auto n2 = VectorMeasure::scalar(b, {random_rational(rng), random_rational(rng), random_rational(rng)});
  const auto p2 = product_measure(m2, n2, cp);
  EXPECT_EQ(p2.scalar_value(cp.algebra.top()), m2.scalar_value(a.top()) * n2.scalar_value(b.top()));
  a.for_each_element([&](Element e) {
    EXPECT_EQ(p2.scalar_value(cp.left(e)), m2.scalar_value(e) * n2.scalar_value(b.top()));
  });
}

TEST(Spectral, CharacteristicAndDiagonalAreSpectral) {
  const BoolAlg alg = algebra_with(3);
  EXPECT_TRUE(is_spectral(characteristic_measure(alg), pointwise_algebra(3)));
  // E -> diag(indicator of E) as 3x3 matrices flattened row-major.
  std::vector<Vec> vals;
  for (std::size_t a = 0; a < 3; ++a) {
    Vec m(9);
    m[a * 3 + a] = 1;
    vals.push_back(m);
  }
  EXPECT_TRUE(is_spectral(VectorMeasure(alg, FinBanSpace::linf(9), vals), matrix_algebra(3)));
}

TEST(Spectral, TwiceCharacteristicFails) {
  const BoolAlg alg = algebra_with(3);
  const auto chi = characteristic_measure(alg);
  std::vector<Vec> doubled;
  for (const auto& v : chi.atom_values()) doubled.push_back(scaled(v, 2));
  EXPECT_FALSE(is_spectral(VectorMeasure(alg, chi.target(), doubled), pointwise_algebra(3)));
}
