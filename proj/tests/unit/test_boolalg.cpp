#include "catmeas/boolalg.hpp"
#include "catmeas/errors.hpp"
#include "catmeas/measures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

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

// Closure of the generators under meet, join and complement, as sets of
// ground indices; the atoms are the minimal nonempty members.
std::vector<std::uint64_t> brute_force_atoms(std::size_t ground, const std::vector<std::uint64_t>& gens) {
  const std::uint64_t full = (std::uint64_t{1} << ground) - 1;
  std::set<std::uint64_t> closed{0, full};
  for (auto g : gens) closed.insert(g);
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<std::uint64_t> now(closed.begin(), closed.end());
    for (auto a : now) {
      for (auto b : now) {
        for (auto c : {a & b, a | b, full & ~a}) grew |= closed.insert(c).second;
      }
    }
  }
  std::vector<std::uint64_t> atoms;
  for (auto s : closed) {
    if (s == 0) continue;
    bool minimal = true;
    for (auto t : closed)
      if (t != 0 && t != s && (t & ~s) == 0) minimal = false;
    if (minimal) atoms.push_back(s);
  }
  return atoms;
}

}  // namespace

TEST(BuildAlgebra, OverlappingGeneratorsGiveSingletonAtoms) {
  const BoolAlg alg = build_algebra({"1", "2", "3"}, {{"1", "2"}, {"2", "3"}});
  EXPECT_EQ(alg.atoms(), (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(brute_force_atoms(3, {0b011, 0b110}).size(), 3U);
}

TEST(BuildAlgebra, NoGeneratorsGiveTrivialAlgebra) {
  const BoolAlg alg = build_algebra({"1", "2"}, {});
  ASSERT_EQ(alg.atom_count(), 1U);
  EXPECT_EQ(alg.cells()[0], (std::vector<std::string>{"1", "2"}));
}

TEST(BuildAlgebra, OneSplit) {
  const BoolAlg alg = build_algebra({"1", "2"}, {{"1"}});
  EXPECT_EQ(alg.atom_count(), 2U);
}

TEST(BuildAlgebra, EmptyGroundIsInvalid) {
  EXPECT_EQ(code_of([] { build_algebra({}, {}); }), ErrorCode::InvalidModel);
}

TEST(BuildAlgebra, MatchesClosureOracleOnRandomGenerators) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t ground = uniform(rng, 1, 6);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < ground; ++i) names.push_back("g" + std::to_string(i));
    std::vector<std::vector<std::string>> gens;
    std::vector<std::uint64_t> gen_bits;
    for (std::size_t g = uniform(rng, 0, 3); g > 0; --g) {
      const std::uint64_t bits = std::uniform_int_distribution<std::uint64_t>(0, (1U << ground) - 1)(rng);
      gen_bits.push_back(bits);
      gens.emplace_back();
      for (std::size_t i = 0; i < ground; ++i)
        if ((bits >> i) & 1U) gens.back().push_back(names[i]);
    }
    const BoolAlg alg = build_algebra(names, gens);
    EXPECT_EQ(alg.atom_count(), brute_force_atoms(ground, gen_bits).size());
  }
}

TEST(BoolAlg, RejectsDuplicateOrEmptyAtoms) {
  EXPECT_EQ(code_of([] { BoolAlg({"a", "a"}); }), ErrorCode::InvalidModel);
  EXPECT_EQ(code_of([] { BoolAlg(std::vector<std::string>{}); }), ErrorCode::InvalidModel);
}

TEST(BoolAlg, AtomsAreSortedAndElementsJoinTheirAtoms) {
  const BoolAlg alg({"c", "a", "b"});
  EXPECT_EQ(alg.atoms(), (std::vector<std::string>{"a", "b", "c"}));
  alg.for_each_element([&](Element e) {
    Element join;
    for (auto a : alg.atoms_below(e)) join = join | Element::atom(a);
    EXPECT_EQ(join, e);
  });
  EXPECT_EQ(alg.format(alg.element({"c", "a"})), "{a,c}");
}

TEST(Partitions, BellNumbersUpToFiveAtoms) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const BoolAlg alg = algebra_with(n);
    EXPECT_EQ(partitions_of(alg, alg.top(), n).size(), bell_number(n));
    EXPECT_EQ(brute_force_partitions(alg, alg.top()).size(), bell_number(n));
  }
}

TEST(Partitions, ThreeAtomsGiveFive) {
  const BoolAlg alg = algebra_with(3);
  EXPECT_EQ(partitions_of(alg, alg.top(), 3).size(), 5U);
}

TEST(Partitions, SingleAtomHasOnePartition) {
  const BoolAlg alg = algebra_with(3);
  EXPECT_EQ(partitions_of(alg, Element::atom(1), 3).size(), 1U);
}

TEST(Partitions, BottomIsRejected) {
  const BoolAlg alg = algebra_with(2);
  EXPECT_EQ(code_of([&] { partitions_of(alg, alg.bottom(), 2); }), ErrorCode::EmptyElement);
}

TEST(Partitions, EnumerationMatchesOracleAsSets) {
  const BoolAlg alg = algebra_with(4);
  alg.for_each_element([&](Element e) {
    if (e.is_bottom()) return;
    std::set<std::vector<std::uint64_t>> ours;
    for (const auto& p : partitions_of(alg, e, 4)) {
      std::vector<std::uint64_t> blocks;
      for (auto b : p.blocks) blocks.push_back(b.bits());
      std::sort(blocks.begin(), blocks.end());
      EXPECT_TRUE(ours.insert(blocks).second);
    }
    std::set<std::vector<std::uint64_t>> theirs;
    for (const auto& p : brute_force_partitions(alg, e)) {
      std::vector<std::uint64_t> blocks;
      for (auto b : p) blocks.push_back(b.bits());
      std::sort(blocks.begin(), blocks.end());
      theirs.insert(blocks);
    }
    EXPECT_EQ(ours, theirs);
  });
}

TEST(Partitions, MaxBlocksLimitsCount) {
  const BoolAlg alg = algebra_with(4);
  for (const auto& p : partitions_of(alg, alg.top(), 2)) EXPECT_LE(p.blocks.size(), 2U);
  // Stirling numbers S(4,1) + S(4,2) = 1 + 7.
  EXPECT_EQ(partitions_of(alg, alg.top(), 2).size(), 8U);
}

TEST(Partitions, RefinementIsPartialOrderWithAtomicMaximum) {
  const BoolAlg alg = algebra_with(4);
  const auto all = partitions_of(alg, alg.top(), 4);
  const Partition atomic = atomic_partition(alg, alg.top());
  for (const auto& p : all) {
    EXPECT_TRUE(refines(atomic, p));
    EXPECT_TRUE(refines(p, p));
    for (const auto& q : all) {
      if (refines(p, q) && refines(q, p)) {
        EXPECT_EQ(p, q);
      }
      for (const auto& r : all) {
        if (refines(p, q) && refines(q, r)) {
          EXPECT_TRUE(refines(p, r));
        }
      }
    }
  }
}

TEST(Partitions, BlocksSortedByLowestAtom) {
  const BoolAlg alg = algebra_with(4);
  for (const auto& p : partitions_of(alg, alg.top(), 4)) {
    for (std::size_t i = 1; i < p.blocks.size(); ++i)
      EXPECT_LT(p.blocks[i - 1].lowest_atom(), p.blocks[i].lowest_atom());
  }
  EXPECT_EQ(code_of([] { make_partition(Element(0b11), {Element(0b01), Element(0b11)}); }), ErrorCode::InvalidModel);
}

TEST(Stone, UltrafiltersArePrincipalAtAtoms) {
  const BoolAlg alg = algebra_with(3);
  const StoneSpace s = stone_space(alg);
  ASSERT_EQ(s.points.size(), 3U);
  const auto oracle = brute_force_ultrafilters(alg);
  ASSERT_EQ(oracle.size(), 3U);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s.points[i].generator, oracle[i]);
}

TEST(Stone, OneAtomAndUnitLaws) {
  const BoolAlg one = algebra_with(1);
  EXPECT_EQ(stone_space(one).points.size(), 1U);
  const BoolAlg alg = algebra_with(4);
  const StoneSpace s = stone_space(alg);
  EXPECT_EQ(s.eta(alg.top()), 0b1111U);
  EXPECT_EQ(s.eta(alg.bottom()), 0U);
}

TEST(Stone, RoundTripUpToSixAtoms) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const BoolAlg alg = algebra_with(n);
    const StoneSpace s = stone_space(alg);
    EXPECT_TRUE(verify_stone_roundtrip(s));
    alg.for_each_element([&](Element e) {
      EXPECT_EQ(s.eta_inverse(s.eta(e)), e);
      EXPECT_EQ(s.eta(alg.complement(e)), ~s.eta(e) & alg.top().bits());
    });
  }
}

TEST(Coproduct, TwoByThreeHasSixAtomsAndUniversalProperty) {
  const BoolAlg a = algebra_with(2, "a");
  const BoolAlg b = algebra_with(3, "b");
  const Coproduct cp = coproduct(a, b);
  EXPECT_EQ(cp.algebra.atom_count(), 6U);
  const BoolAlg target = algebra_with(2, "t");
  for (const auto& phi : unital_morphisms(a, target))
    for (const auto& psi : unital_morphisms(b, target)) EXPECT_TRUE(verify_coproduct(cp, phi, psi));
}

TEST(Coproduct, TrivialFactorIsUnitAndInjectionsUnital) {
  const BoolAlg a = algebra_with(3, "a");
  const Coproduct cp = coproduct(a, algebra_with(1, "t"));
  EXPECT_EQ(cp.algebra.atom_count(), 3U);
  EXPECT_EQ(cp.left(a.top()), cp.algebra.top());
  EXPECT_TRUE(cp.left.is_unital());
  EXPECT_TRUE(cp.left.preserves_operations());
  EXPECT_TRUE(cp.right.preserves_operations());
}

TEST(NullQuotient, DropsNullAtoms) {
  const BoolAlg alg = algebra_with(3);
  const auto mu = VectorMeasure::scalar(alg, {Rational(0), Rational(1), Rational(2)});
  const NullQuotient q = quotient_by_null(mu);
  EXPECT_EQ(q.algebra.atom_count(), 2U);
  EXPECT_EQ(q.projection(Element::atom(0)), Element());
  EXPECT_TRUE(q.projection.is_unital());
}

TEST(NullQuotient, PositiveMeasureGivesIsomorphism) {
  const BoolAlg alg = algebra_with(3);
  const NullQuotient q = quotient_by_null(VectorMeasure::scalar(alg, {Rational(1), Rational(1), Rational(2)}));
  EXPECT_EQ(q.algebra.atom_count(), 3U);
  alg.for_each_element([&](Element e) { EXPECT_EQ(q.projection(e).atom_count(), e.atom_count()); });
}

TEST(NullQuotient, AllNullIsDegenerate) {
  const BoolAlg alg = algebra_with(2);
  EXPECT_EQ(code_of([&] { quotient_by_null(VectorMeasure::scalar(alg, {Rational(0), Rational(0)})); }),
            ErrorCode::DegenerateQuotient);
}

TEST(NullQuotient, FactorizationIffSupportInclusion) {
  const BoolAlg alg = algebra_with(3);
  const NullQuotient q = quotient_by_null(VectorMeasure::scalar(alg, {Rational(0), Rational(1), Rational(2)}));
  const auto nu = VectorMeasure::scalar(alg, {Rational(0), Rational(5), Rational(7)});
  const auto factored = factor_through(q, nu);
  ASSERT_TRUE(factored.has_value());
  alg.for_each_element([&](Element e) { EXPECT_EQ((*factored)(q.projection(e)), nu(e)); });
  EXPECT_FALSE(factor_through(q, VectorMeasure::scalar(alg, {Rational(1), Rational(0), Rational(0)})).has_value());
}

TEST(NullQuotient, RandomFactorizationProperty) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const BoolAlg alg = algebra_with(uniform(rng, 1, 4));
    const MeasureAlgebra mu = random_measure_algebra(rng, alg, true);
    const NullQuotient q = quotient_by_null(alg, mu.null_atoms());
    std::vector<Rational> vals;
    for (std::size_t a = 0; a < alg.atom_count(); ++a) vals.push_back(uniform(rng, 0, 2) ? random_rational(rng) : 0);
    const auto nu = VectorMeasure::scalar(alg, vals);
    bool supported = true;
    for (std::size_t a = 0; a < alg.atom_count(); ++a)
      if (mu.atom_values()[a] == 0 && vals[a] != 0) supported = false;
    const auto f = factor_through(q, nu);
    EXPECT_EQ(f.has_value(), supported);
    if (f) {
      alg.for_each_element([&](Element e) { EXPECT_EQ((*f)(q.projection(e)), nu(e)); });
    }
  }
}

TEST(PrincipalIdeal, TopIsIdentity) {
  const BoolAlg alg = algebra_with(3);
  const PrincipalIdeal p = principal_ideal(alg, alg.top());
  EXPECT_EQ(p.ideal.atom_count(), 3U);
  alg.for_each_element([&](Element g) { EXPECT_EQ(p.inclusion(p.projection(g)), g); });
}

TEST(PrincipalIdeal, AtomGivesTwoElementAlgebra) {
  const BoolAlg alg = algebra_with(3);
  EXPECT_EQ(principal_ideal(alg, Element::atom(2)).ideal.element_count(), 2U);
  EXPECT_EQ(code_of([&] { principal_ideal(alg, alg.bottom()); }), ErrorCode::EmptyElement);
}

TEST(PrincipalIdeal, ProjectionIsMeetExhaustively) {
  const BoolAlg alg = algebra_with(4);
  alg.for_each_element([&](Element e) {
    if (e.is_bottom()) return;
    const PrincipalIdeal p = principal_ideal(alg, e);
    alg.for_each_element([&](Element g) { EXPECT_EQ(p.inclusion(p.projection(g)), g & e); });
  });
}

TEST(BoolMorphism, CompositionAndPreservation) {
  const BoolAlg a = algebra_with(2, "a");
  const BoolAlg b = algebra_with(3, "b");
  const BoolAlg c = algebra_with(4, "c");
  for (const auto& f : unital_morphisms(a, b)) {
    EXPECT_TRUE(f.preserves_operations());
    for (const auto& g : unital_morphisms(b, c)) {
      const BoolMorphism h = g.after(f);
      a.for_each_element([&](Element e) { EXPECT_EQ(h(e), g(f(e))); });
    }
  }
  EXPECT_EQ(code_of([&] { BoolMorphism(a, b, {Element(0b011), Element(0b010)}); }), ErrorCode::InvalidModel);
}
