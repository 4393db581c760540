#ifndef HPL_TESTS_SUPPORT_HPP
#define HPL_TESTS_SUPPORT_HPP

// Test-only helpers: brute-force oracles and seeded random generators.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "hpl/multimap.hpp"
#include "hpl/sign.hpp"

namespace hpl::testing {

/// ε(σ) as a product over inversion pairs.
inline int koszul_by_inversions(const Permutation& sigma, const std::vector<int>& degrees) {
  int s = 1;
  const auto& im = sigma.images;
  for (size_t p = 0; p < im.size(); ++p)
    for (size_t q = p + 1; q < im.size(); ++q)
      if (im[p] > im[q] && (degrees[im[p]] & 1) && (degrees[im[q]] & 1)) s = -s;
  return s;
}

inline int parity_by_inversions(const Permutation& sigma) {
  int s = 1;
  const auto& im = sigma.images;
  for (size_t p = 0; p < im.size(); ++p)
    for (size_t q = p + 1; q < im.size(); ++q)
      if (im[p] > im[q]) s = -s;
  return s;
}

/// Shuffles by filtering all permutations, sorted lexicographically.
inline std::vector<Permutation> shuffles_by_filter(const std::vector<size_t>& parts) {
  size_t n = std::accumulate(parts.begin(), parts.end(), size_t{0});
  std::vector<size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    bool ok = true;
    size_t start = 0;
    for (size_t len : parts) {
      for (size_t k = start + 1; k < start + len; ++k)
        if (p[k - 1] > p[k]) ok = false;
      start += len;
    }
    if (ok) out.push_back(Permutation{p});
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<Permutation> all_permutations(size_t n) {
  return shuffles_by_filter(std::vector<size_t>(n, 1));
}

inline Rational factorial(size_t n) {
  Rational r = 1;
  for (size_t k = 2; k <= n; ++k) r *= k;
  return r;
}

/// f∘g evaluated on a word by summing over the full symmetric group and
/// dividing by the block stabiliser order.
inline Vector circle_by_full_sum(const SymMultiMap& f, const SymMultiMap& g, const Word& w) {
  const auto& space = *f.source();
  size_t p = w.size();
  auto degs = word_degrees(space, w);
  Vector out;
  for (size_t j = 0; j <= p; ++j) {
    size_t i = p + 1 - j;
    if (i < 1) continue;
    Vector part;
    for (const auto& sigma : all_permutations(p)) {
      std::vector<Vector> inner, outer;
      for (size_t k = 0; k < j; ++k) inner.push_back(Vector::basis(w[sigma.images[k]]));
      Vector gv = g.evaluate(inner);
      outer.push_back(gv);
      for (size_t k = j; k < p; ++k) outer.push_back(Vector::basis(w[sigma.images[k]]));
      Vector fv = f.evaluate(outer);
      part += Rational(koszul_by_inversions(sigma, degs)) * fv;
    }
    part *= 1 / (factorial(j) * factorial(i - 1));
    out += part;
  }
  return out;
}

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen); }
  Rational small_rational() {
    int num = uniform(-3, 3);
    int den = uniform(1, 2);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
};

inline SpacePtr random_space(Rng& rng, size_t dim, int dmin = -1, int dmax = 1) {
  std::vector<BasisElement> b;
  for (size_t i = 0; i < dim; ++i) b.push_back({"b" + std::to_string(i), rng.uniform(dmin, dmax)});
  return make_space(std::move(b));
}

/// Random symmetric map with every arity in [0, max_arity] populated sparsely.
template <Symmetry Sym = Symmetry::symmetric>
GradedMultiMap<Sym> random_map(Rng& rng, SpacePtr source, SpacePtr target, int degree, int max_arity,
                               double density = 0.6) {
  GradedMultiMap<Sym> f(source, target, degree, max_arity);
  for (int a = 0; a <= max_arity; ++a)
    for (const auto& w : canonical_words(*source, a, Sym)) {
      int d = word_degree(*source, w) + degree;
      Vector v;
      for (size_t t : target->indices_of_degree(d))
        if (rng.coin(density)) v.add_term(t, rng.small_rational());
      if (!v.is_zero()) f.set(w, v);
    }
  return f;
}

}  // namespace hpl::testing

#endif  // HPL_TESTS_SUPPORT_HPP
