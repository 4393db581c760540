#ifndef HPL_MULTIMAP_HPP
#define HPL_MULTIMAP_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpl/errors.hpp"
#include "hpl/graded_space.hpp"
#include "hpl/linalg.hpp"
#include "hpl/parallel.hpp"
#include "hpl/report.hpp"
#include "hpl/sign.hpp"

namespace hpl {

/// f = Σ_i f_i with f_i : S^i(V) → W (or Λ^i(V) → W) of degree n.
/// Components above arity_cap are absent and mean zero. f_0 is a vector of
/// degree n in W.
template <Symmetry Sym>
class GradedMultiMap {
 public:
  static constexpr Symmetry symmetry = Sym;

  GradedMultiMap() = default;
  GradedMultiMap(SpacePtr source, SpacePtr target, int degree, int arity_cap)
      : source_(std::move(source)), target_(std::move(target)), degree_(degree), cap_(arity_cap) {
    if (!source_ || !target_) throw InputError("multimap needs source and target spaces");
    if (arity_cap < 0) throw InputError("negative arity cap");
  }

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  int degree() const { return degree_; }
  int arity_cap() const { return cap_; }
  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }

  /// Sets f on the word (any order); the value is stored against the sorted word.
  void set(std::span<const size_t> word, const Vector& value) { assign(word, value, false); }
  void add(std::span<const size_t> word, const Vector& value) { assign(word, value, true); }
  void set(std::initializer_list<size_t> word, const Vector& value) {
    std::vector<size_t> w(word);
    assign(w, value, false);
  }

  const Vector& zero_component() const {
    auto it = components_.find(0);
    if (it == components_.end()) return zero_vector();
    return it->second.begin()->second;
  }
  void set_zero_component(const Vector& v) { set(std::span<const size_t>{}, v); }

  /// Value stored at a canonical word (no sign).
  const Vector& at_canonical(const Word& w) const {
    auto it = components_.find(static_cast<int>(w.size()));
    if (it == components_.end()) return zero_vector();
    auto jt = it->second.find(w);
    return jt == it->second.end() ? zero_vector() : jt->second;
  }

  /// f(e_{w_1},…,e_{w_k}) for basis indices in any order.
  Vector evaluate_basis(std::span<const size_t> word) const {
    if (static_cast<int>(word.size()) > cap_) return {};
    auto c = canonicalize_word(word, *source_, Sym);
    if (!c) return {};
    Vector v = at_canonical(c->entries);
    if (c->sign < 0) v *= Rational(-1);
    return v;
  }

  /// Multilinear evaluation on arbitrary vectors.
  Vector evaluate(std::span<const Vector> args) const {
    Vector out;
    if (static_cast<int>(args.size()) > cap_) return out;
    if (components_.find(static_cast<int>(args.size())) == components_.end()) return out;
    std::vector<size_t> idx(args.size());
    auto rec = [&](auto&& self, size_t pos, const Rational& coeff) -> void {
      if (pos == args.size()) {
        Vector v = evaluate_basis(idx);
        if (!v.is_zero()) out += coeff * v;
        return;
      }
      for (const auto& [i, c] : args[pos]) {
        idx[pos] = i;
        self(self, pos + 1, coeff * c);
      }
    };
    rec(rec, 0, Rational(1));
    return out;
  }
  Vector evaluate(std::initializer_list<Vector> args) const {
    std::vector<Vector> a(args);
    return evaluate(std::span<const Vector>(a));
  }

  const std::map<int, std::map<Word, Vector>>& components() const { return components_; }

  /// Largest arity with a nonzero component, -1 for the zero map.
  int max_arity() const { return components_.empty() ? -1 : components_.rbegin()->first; }
  bool is_zero() const { return components_.empty(); }

  /// Copy with only arities <= k kept.
  GradedMultiMap restricted(int k) const {
    GradedMultiMap r(source_, target_, degree_, std::min(cap_, k));
    for (const auto& [a, comp] : components_)
      if (a <= k) r.components_[a] = comp;
    r.truncated_ = truncated_;
    return r;
  }

  GradedMultiMap& operator+=(const GradedMultiMap& o) { return accumulate(o, Rational(1)); }
  GradedMultiMap& operator-=(const GradedMultiMap& o) { return accumulate(o, Rational(-1)); }
  GradedMultiMap& operator*=(const Rational& s) {
    if (s == 0) {
      components_.clear();
      return *this;
    }
    for (auto& [a, comp] : components_)
      for (auto& [w, v] : comp) v *= s;
    return *this;
  }
  friend GradedMultiMap operator+(GradedMultiMap a, const GradedMultiMap& b) { return a += b; }
  friend GradedMultiMap operator-(GradedMultiMap a, const GradedMultiMap& b) { return a -= b; }
  friend GradedMultiMap operator*(const Rational& s, GradedMultiMap a) { return a *= s; }

  /// Equality of values; caps and truncation flags are ignored.
  bool operator==(const GradedMultiMap& o) const {
    return same_space(source_, o.source_) && same_space(target_, o.target_) &&
           degree_ == o.degree_ && components_ == o.components_;
  }

  std::string describe_word(const Word& w) const {
    std::string s = "(";
    for (size_t i = 0; i < w.size(); ++i) {
      if (i) s += ",";
      s += source_->name(w[i]);
    }
    return s + ")";
  }

 private:
  static const Vector& zero_vector() {
    static const Vector z;
    return z;
  }

  GradedMultiMap& accumulate(const GradedMultiMap& o, const Rational& s) {
    if (!same_space(source_, o.source_) || !same_space(target_, o.target_) || degree_ != o.degree_)
      throw InputError("adding multimaps of different type");
    cap_ = std::max(cap_, o.cap_);
    truncated_ = truncated_ || o.truncated_;
    for (const auto& [a, comp] : o.components_)
      for (const auto& [w, v] : comp) {
        Vector sv = v;
        sv *= s;
        add_canonical(w, sv);
      }
    return *this;
  }

  void add_canonical(const Word& w, const Vector& v) {
    auto& comp = components_[static_cast<int>(w.size())];
    auto& slot = comp[w];
    slot += v;
    if (slot.is_zero()) {
      comp.erase(w);
      if (comp.empty()) components_.erase(static_cast<int>(w.size()));
    }
  }

  void assign(std::span<const size_t> word, const Vector& value, bool accumulate_value) {
    if (static_cast<int>(word.size()) > cap_)
      throw InputError("component of arity " + std::to_string(word.size()) + " exceeds arity cap " +
                       std::to_string(cap_));
    for (size_t e : word)
      if (e >= source_->dim()) throw InputError("word index out of range");
    for (const auto& [i, c] : value)
      if (i >= target_->dim()) throw InputError("value index out of range");
    auto c = canonicalize_word(word, *source_, Sym);
    if (!c) {
      if (!value.is_zero()) throw InputError("value assigned to a vanishing word");
      return;
    }
    value.require_degree(*target_, c->degree + degree_, "multimap value");
    Vector v = value;
    if (c->sign < 0) v *= Rational(-1);
    if (accumulate_value) {
      add_canonical(c->entries, v);
    } else {
      auto it = components_.find(static_cast<int>(c->entries.size()));
      if (it != components_.end()) {
        it->second.erase(c->entries);
        if (it->second.empty()) components_.erase(it);
      }
      if (!v.is_zero()) add_canonical(c->entries, v);
    }
  }

  SpacePtr source_;
  SpacePtr target_;
  int degree_ = 0;
  int cap_ = 0;
  bool truncated_ = false;
  std::map<int, std::map<Word, Vector>> components_;
};

using SymMultiMap = GradedMultiMap<Symmetry::symmetric>;
using AntiMultiMap = GradedMultiMap<Symmetry::antisymmetric>;

/// Builds a map from a formula evaluated on every canonical word of arity
/// 0..cap whose value degree occurs in the target. With jobs > 1 the words
/// are evaluated on worker threads.
template <Symmetry Sym = Symmetry::symmetric>
GradedMultiMap<Sym> build_map(SpacePtr source, SpacePtr target, int degree, int cap,
                              const std::function<Vector(const Word&)>& value_at, int jobs = 1) {
  GradedMultiMap<Sym> out(source, target, degree, cap);
  std::vector<Word> words;
  for (int a = 0; a <= cap; ++a)
    for (auto& w : canonical_words(*source, static_cast<size_t>(a), Sym))
      if (target->has_degree(word_degree(*source, w) + degree)) words.push_back(std::move(w));
  auto values = parallel_map<Vector>(words.size(), jobs, [&](size_t i) { return value_at(words[i]); });
  for (size_t i = 0; i < words.size(); ++i)
    if (!values[i].is_zero()) out.set(words[i], values[i]);
  return out;
}

namespace detail {

inline std::vector<Vector> basis_vectors(std::span<const size_t> w) {
  std::vector<Vector> out;
  out.reserve(w.size());
  for (size_t e : w) out.push_back(Vector::basis(e));
  return out;
}

/// Picks entries of `word` at the positions σ(from..to-1).
inline void pick(const Word& word, const Permutation& sigma, size_t from, size_t to,
                 std::vector<Vector>& out) {
  for (size_t k = from; k < to; ++k) out.push_back(Vector::basis(word[sigma.images[k]]));
}

}  // namespace detail

/// f∘g: (f_i∘g_j)(v_1..v_{i+j-1}) = Σ_{σ∈S(j,i-1)} ε(σ) f_i(g_j(v_σ(1..j)), v_σ(j+1..)).
/// f_0∘g = 0; f_i∘g_0 inserts g_0 in the first slot. The result keeps every
/// arity up to cap(f)+cap(g)-1 unless max_arity is smaller, in which case
/// it is marked truncated.
inline SymMultiMap circle(const SymMultiMap& f, const SymMultiMap& g,
                          std::optional<int> max_arity = std::nullopt) {
  if (!same_space(f.source(), f.target()) || !same_space(g.source(), g.target()) ||
      !same_space(f.source(), g.source()))
    throw InputError("circle product needs endomorphism maps on one space");
  int natural = std::max(0, f.arity_cap() + g.arity_cap() - 1);
  int cap = max_arity ? std::min(natural, *max_arity) : natural;
  const auto& space = *f.source();
  auto value = [&](const Word& w) {
    Vector out;
    int p = static_cast<int>(w.size());
    auto degs = word_degrees(space, w);
    for (int j = 0; j <= std::min(p, g.arity_cap()); ++j) {
      int i = p + 1 - j;
      if (i < 1 || i > f.arity_cap()) continue;
      if (g.components().find(j) == g.components().end()) continue;
      if (f.components().find(i) == f.components().end()) continue;
      for (const auto& sigma : cached_shuffles({static_cast<size_t>(j), static_cast<size_t>(i - 1)})) {
        std::vector<Vector> inner;
        detail::pick(w, sigma, 0, j, inner);
        Vector gv = g.evaluate(inner);
        if (gv.is_zero()) continue;
        std::vector<Vector> outer{gv};
        detail::pick(w, sigma, j, p, outer);
        Vector fv = f.evaluate(outer);
        if (fv.is_zero()) continue;
        out += Rational(koszul_sign(sigma, degs)) * fv;
      }
    }
    return out;
  };
  auto r = build_map(f.source(), f.target(), f.degree() + g.degree(), cap, value);
  if (cap < natural || f.truncated() || g.truncated()) r.mark_truncated();
  return r;
}

/// [f,g]_NR = f∘g - (-1)^{mn} g∘f.
inline SymMultiMap nr_bracket(const SymMultiMap& f, const SymMultiMap& g,
                              std::optional<int> max_arity = std::nullopt) {
  SymMultiMap a = circle(f, g, max_arity);
  SymMultiMap b = circle(g, f, max_arity);
  if (((f.degree() * g.degree()) & 1) == 0)
    a -= b;
  else
    a += b;
  return a;
}

/// Lists nonzero components of a map as defects.
template <Symmetry Sym>
void collect_defects(const GradedMultiMap<Sym>& m, const std::string& identity, Verdict& verdict) {
  for (const auto& [a, comp] : m.components())
    for (const auto& [w, v] : comp) {
      verdict.defects.push_back({identity, m.describe_word(w), v.to_string(*m.target())});
    }
  verdict.holds = verdict.defects.empty();
}

/// [l,l]_NR = 0 for a degree-1 symmetric map (curved L∞ structure).
inline IdentityReport check_curved_linfty(const SymMultiMap& l) {
  IdentityReport report;
  if (l.degree() != 1) throw InputError("curved L-infinity structure must have degree 1");
  Verdict v{"[l,l]_NR = 0", true, {}};
  collect_defects(nr_bracket(l, l), "[l,l]", v);
  report.verdicts.push_back(std::move(v));
  return report;
}

/// (-1)^{Σ_j (i-j) x_j} for degrees x_1..x_i in the unshifted space: the
/// combined sign of (-1)^{i(i-1)/2} and the Koszul sign of s^{⊗i}.
inline int decalage_sign(std::span<const int> unshifted_degrees) {
  long e = 0;
  size_t i = unshifted_degrees.size();
  for (size_t j = 0; j < i; ++j) e += static_cast<long>(i - 1 - j) * unshifted_degrees[j];
  return sign_power(e);
}

enum class ShiftDirection { down, up };

/// down: antisymmetric f on g ↦ (-1)^{i(i-1)/2} s^{-1}∘f_i∘s^{⊗i}, symmetric on s^{-1}g.
/// up:   the inverse, symmetric f on V ↦ antisymmetric map on sV.
/// Basis names are kept; only degrees move.
inline SymMultiMap shift_map_down(const AntiMultiMap& f) {
  if (!same_space(f.source(), f.target())) throw InputError("shift_map needs an endomorphism map");
  const GradedSpace& g = *f.source();
  auto h = std::make_shared<const GradedSpace>(g.desuspended());
  int cap = f.arity_cap();
  // s^{-1} f_i s^{⊗i} has degree n + i - 1, so only one arity class can survive
  std::optional<int> degree;
  for (const auto& [a, comp] : f.components()) {
    int d = f.degree() + a - 1;
    if (degree && *degree != d) throw InputError("shift_map: components shift to different degrees");
    degree = d;
  }
  SymMultiMap out(h, h, degree.value_or(f.degree() + 1), cap);
  for (const auto& [a, comp] : f.components())
    for (const auto& [w, v] : comp) {
      auto degs = word_degrees(g, w);
      Vector sv = v;
      sv *= Rational(decalage_sign(degs));
      out.set(w, sv);
    }
  return out;
}

inline AntiMultiMap shift_map_up(const SymMultiMap& f) {
  if (!same_space(f.source(), f.target())) throw InputError("shift_map needs an endomorphism map");
  const GradedSpace& h = *f.source();
  auto g = std::make_shared<const GradedSpace>(h.suspended());
  std::optional<int> degree;
  for (const auto& [a, comp] : f.components()) {
    int d = f.degree() - a + 1;
    if (degree && *degree != d) throw InputError("shift_map: components shift to different degrees");
    degree = d;
  }
  AntiMultiMap out(g, g, degree.value_or(f.degree() - 1), f.arity_cap());
  for (const auto& [a, comp] : f.components())
    for (const auto& [w, v] : comp) {
      auto degs = word_degrees(*g, w);
      Vector sv = v;
      sv *= Rational(decalage_sign(degs));
      out.set(w, sv);
    }
  return out;
}

}  // namespace hpl

#endif  // HPL_MULTIMAP_HPP
