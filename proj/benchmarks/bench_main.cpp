#include "catmeas/boolalg.hpp"
#include "catmeas/finban.hpp"
#include "catmeas/measures.hpp"
#include "catmeas/shcosh.hpp"
#include "catmeas/simple.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

using namespace catmeas;

namespace {

BoolAlg atoms(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("a" + std::to_string(i));
  return BoolAlg(ids);
}

Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  return Rational(num(rng), den(rng));
}

std::vector<Rational> positive_weights(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(1, 5), den(1, 4);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(num(rng), den(rng));
  return out;
}

void BM_Partitions(benchmark::State& state) {
  const BoolAlg alg = atoms(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    std::size_t count = 0;
    for_each_partition(alg, alg.top(), alg.atom_count(), [&](const Partition&) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_Partitions)->DenseRange(4, 8);

void BM_QuotientNorm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  std::vector<std::string> basis;
  for (std::size_t i = 0; i < n; ++i) basis.push_back("e" + std::to_string(i));
  const FinBanSpace ambient(basis, positive_weights(rng, n), Flavor::Sum);
  std::vector<Vec> relations(n / 2, Vec(n));
  for (auto& r : relations)
    for (auto& x : r) x = small_rational(rng);
  const Quotient q = quotient(ambient, relations);
  Vec v(n);
  for (auto& x : v) x = small_rational(rng);
  for (auto _ : state) benchmark::DoNotOptimize(q.norm(v));
}
BENCHMARK(BM_QuotientNorm)->DenseRange(2, 8, 2);

void BM_SpectralMeasure(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const BoolAlg alg = atoms(static_cast<std::size_t>(state.range(0)));
  const Cosheaf mu(l1_cosheaf(MeasureAlgebra(alg, positive_weights(rng, alg.atom_count()))));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_measure(mu));
}
BENCHMARK(BM_SpectralMeasure)->DenseRange(2, 5);

void BM_Cosheafify(benchmark::State& state) {
  const BoolAlg alg = atoms(static_cast<std::size_t>(state.range(0)));
  const PreCosheaf theta = constant_precosheaf(alg, FinBanSpace::l1(2));
  for (auto _ : state) benchmark::DoNotOptimize(cosheafify(theta));
}
BENCHMARK(BM_Cosheafify)->DenseRange(2, 5);

void BM_DiscreteCoend(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::string> objects;
  for (std::size_t i = 0; i < n; ++i) objects.push_back("o" + std::to_string(i));
  BifunctorData f{FiniteCategory::discrete(objects), {}, {}, {}};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) f.spaces.push_back(a == b ? FinBanSpace::l1(a + 1) : FinBanSpace());
  for (std::size_t arr = 0; arr < n; ++arr)
    for (std::size_t c = 0; c < n; ++c) {
      f.left.push_back(LinMap::identity(f.at(arr, c)));
      f.right.push_back(LinMap::identity(f.at(c, arr)));
    }
  for (auto _ : state) benchmark::DoNotOptimize(coend(f));
}
BENCHMARK(BM_DiscreteCoend)->DenseRange(1, 4);

}  // namespace

BENCHMARK_MAIN();
