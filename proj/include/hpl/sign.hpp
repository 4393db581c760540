#ifndef HPL_SIGN_HPP
#define HPL_SIGN_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hpl/errors.hpp"
#include "hpl/graded_space.hpp"

namespace hpl {

/// Permutation of {0..n-1} stored by images: images[i] = σ(i).
struct Permutation {
  std::vector<size_t> images;

  static Permutation identity(size_t n) {
    Permutation p;
    p.images.resize(n);
    for (size_t i = 0; i < n; ++i) p.images[i] = i;
    return p;
  }

  /// From 1-based images, as permutations are usually written.
  static Permutation from_one_based(std::vector<size_t> one_based) {
    Permutation p;
    for (size_t v : one_based) {
      if (v == 0) throw InputError("permutation images are 1-based");
      p.images.push_back(v - 1);
    }
    p.validate();
    return p;
  }

  size_t size() const { return images.size(); }

  void validate() const {
    std::vector<bool> seen(images.size(), false);
    for (size_t v : images) {
      if (v >= images.size() || seen[v]) throw InputError("not a permutation");
      seen[v] = true;
    }
  }

  /// Sign of the underlying ungraded permutation.
  int parity_sign() const {
    std::vector<size_t> seq = images;
    int s = 1;
    for (size_t i = 0; i < seq.size(); ++i)
      for (size_t j = 0; j + 1 < seq.size() - i; ++j)
        if (seq[j] > seq[j + 1]) {
          std::swap(seq[j], seq[j + 1]);
          s = -s;
        }
    return s;
  }

  bool operator==(const Permutation&) const = default;
};

/// Koszul sign ε(σ) for v_1⊙…⊙v_n = ε(σ) v_σ(1)⊙…⊙v_σ(n) in the free
/// graded-commutative algebra. Computed by sorting the image sequence with
/// adjacent transpositions, each swap of a,b contributing (-1)^{|a||b|}.
inline int koszul_sign(const Permutation& sigma, std::span<const int> degrees) {
  if (sigma.size() != degrees.size()) throw InputError("koszul_sign: length mismatch");
  std::vector<size_t> seq = sigma.images;
  int s = 1;
  for (size_t i = 0; i < seq.size(); ++i)
    for (size_t j = 0; j + 1 < seq.size() - i; ++j)
      if (seq[j] > seq[j + 1]) {
        if ((degrees[seq[j]] & 1) && (degrees[seq[j + 1]] & 1)) s = -s;
        std::swap(seq[j], seq[j + 1]);
      }
  return s;
}

/// χ(σ) = sign(σ)·ε(σ), the sign for graded-antisymmetric reordering.
inline int antisymmetric_sign(const Permutation& sigma, std::span<const int> degrees) {
  return sigma.parity_sign() * koszul_sign(sigma, degrees);
}

namespace detail {

inline void combinations_rec(const std::vector<size_t>& pool, size_t k, size_t start,
                             std::vector<size_t>& cur, std::vector<std::vector<size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (size_t i = start; i < pool.size(); ++i) {
    if (pool.size() - i < k - cur.size()) break;
    cur.push_back(pool[i]);
    combinations_rec(pool, k, i + 1, cur, out);
    cur.pop_back();
  }
}

inline void shuffles_rec(const std::vector<size_t>& parts, size_t part, std::vector<size_t> pool,
                         std::vector<size_t>& prefix, std::vector<Permutation>& out) {
  if (part == parts.size()) {
    out.push_back(Permutation{prefix});
    return;
  }
  std::vector<std::vector<size_t>> combos;
  std::vector<size_t> cur;
  combinations_rec(pool, parts[part], 0, cur, combos);
  for (const auto& c : combos) {
    std::vector<size_t> rest;
    std::set_difference(pool.begin(), pool.end(), c.begin(), c.end(), std::back_inserter(rest));
    size_t before = prefix.size();
    prefix.insert(prefix.end(), c.begin(), c.end());
    shuffles_rec(parts, part + 1, rest, prefix, out);
    prefix.resize(before);
  }
}

}  // namespace detail

/// (i_1,…,i_k)-shuffles: permutations increasing on each consecutive block.
/// Listed in lexicographic order of the image sequence. Empty parts are allowed.
inline std::vector<Permutation> shuffles(std::span<const size_t> parts) {
  size_t n = 0;
  for (size_t p : parts) n += p;
  std::vector<size_t> pool(n);
  for (size_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<size_t> ps(parts.begin(), parts.end());
  std::vector<Permutation> out;
  std::vector<size_t> prefix;
  detail::shuffles_rec(ps, 0, pool, prefix, out);
  return out;
}

inline const std::vector<Permutation>& cached_shuffles(const std::vector<size_t>& parts) {
  thread_local std::map<std::vector<size_t>, std::vector<Permutation>> cache;
  auto it = cache.find(parts);
  if (it != cache.end()) return it->second;
  return cache.emplace(parts, shuffles(parts)).first->second;
}

enum class Symmetry { symmetric, antisymmetric };

using Word = std::vector<size_t>;

/// A basis word of S^n(V) (or Λ^n(V)) in canonical sorted form, with the sign
/// picked up while sorting.
struct SymWord {
  Word entries;
  int sign = 1;
  int degree = 0;
};

/// Sorts a word of basis indices. Returns nullopt when the word vanishes:
/// a repeated odd index in the symmetric case, a repeated even index in the
/// antisymmetric case.
inline std::optional<SymWord> canonicalize_word(std::span<const size_t> entries,
                                                const GradedSpace& space,
                                                Symmetry symmetry = Symmetry::symmetric) {
  SymWord w;
  w.entries.assign(entries.begin(), entries.end());
  int s = 1;
  int deg = 0;
  for (size_t e : w.entries) {
    if (e >= space.dim()) throw InputError("basis index out of range");
    deg += space.degree(e);
  }
  const bool anti = symmetry == Symmetry::antisymmetric;
  auto& seq = w.entries;
  for (size_t i = 0; i < seq.size(); ++i)
    for (size_t j = 0; j + 1 < seq.size() - i; ++j)
      if (seq[j] > seq[j + 1]) {
        bool odd = (space.degree(seq[j]) & 1) && (space.degree(seq[j + 1]) & 1);
        if (odd) s = -s;
        if (anti) s = -s;
        std::swap(seq[j], seq[j + 1]);
      }
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    if (seq[i] == seq[i + 1]) {
      bool odd = space.degree(seq[i]) & 1;
      if (odd != anti) return std::nullopt;
    }
  w.sign = s;
  w.degree = deg;
  return w;
}

/// All nonvanishing canonical words of length n, in lexicographic order.
inline std::vector<Word> canonical_words(const GradedSpace& space, size_t n,
                                         Symmetry symmetry = Symmetry::symmetric) {
  std::vector<Word> out;
  Word cur;
  const bool anti = symmetry == Symmetry::antisymmetric;
  auto rec = [&](auto&& self, size_t start) -> void {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (size_t i = start; i < space.dim(); ++i) {
      if (!cur.empty() && cur.back() == i) {
        bool odd = space.degree(i) & 1;
        if (odd != anti) continue;
      }
      cur.push_back(i);
      self(self, i);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// All ordered tuples of length n (used where no symmetry is imposed).
inline std::vector<Word> all_tuples(size_t dim, size_t n) {
  std::vector<Word> out;
  Word cur(n, 0);
  if (n == 0) return {Word{}};
  if (dim == 0) return out;
  while (true) {
    out.push_back(cur);
    size_t k = n;
    while (k > 0) {
      --k;
      if (++cur[k] < dim) break;
      cur[k] = 0;
      if (k == 0) return out;
    }
  }
}

inline int word_degree(const GradedSpace& space, std::span<const size_t> w) {
  int d = 0;
  for (size_t e : w) d += space.degree(e);
  return d;
}

inline std::vector<int> word_degrees(const GradedSpace& space, std::span<const size_t> w) {
  std::vector<int> d;
  d.reserve(w.size());
  for (size_t e : w) d.push_back(space.degree(e));
  return d;
}

}  // namespace hpl

#endif  // HPL_SIGN_HPP
