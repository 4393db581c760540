#ifndef HPL_POSTLIE_HPP
#define HPL_POSTLIE_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hpl/errors.hpp"
#include "hpl/homotopy_ops.hpp"
#include "hpl/linalg.hpp"
#include "hpl/multimap.hpp"
#include "hpl/parallel.hpp"
#include "hpl/report.hpp"
#include "hpl/sgla.hpp"

namespace hpl {

// ---------------------------------------------------------------------------
// Ungraded post-Lie algebras.

struct PostLie {
  LieAlgebra alg;
  Bilinear triangle;
  bool operator==(const PostLie&) const = default;
};

/// a(x,y,z) = x▷(y▷z) - (x▷y)▷z
inline Vector associator(const Bilinear& t, const Vector& x, const Vector& y, const Vector& z) {
  return t(x, t(y, z)) - t(t(x, y), z);
}

inline IdentityReport check_post_lie(const PostLie& P) {
  IdentityReport report = check_lie(P.alg);
  const auto& L = P.alg;
  const auto& t = P.triangle;
  if (t.dim() != L.dim()) throw InputError("product and bracket live on different spaces");
  Verdict der{"x>[y,z] = [x>y,z] + [y,x>z]", true, {}};
  Verdict ass{"[x,y]>z = a(x,y,z) - a(y,x,z)", true, {}};
  size_t n = L.dim();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (size_t c = 0; c < n; ++c) {
        Vector x = Vector::basis(a), y = Vector::basis(b), z = Vector::basis(c);
        Vector r1 = t(x, L.bracket(y, z)) - L.bracket(t(x, y), z) - L.bracket(y, t(x, z));
        if (!r1.is_zero()) der.defects.push_back({"derivation rule", tuple_name(L.names, {a, b, c}), vector_string(r1, L.names)});
        Vector r2 = t(L.bracket(x, y), z) - associator(t, x, y, z) + associator(t, y, x, z);
        if (!r2.is_zero()) ass.defects.push_back({"associator rule", tuple_name(L.names, {a, b, c}), vector_string(r2, L.names)});
      }
  der.holds = der.defects.empty();
  ass.holds = ass.defects.empty();
  report.verdicts.push_back(der);
  report.verdicts.push_back(ass);
  return report;
}

/// [x,y]_C = x▷y - y▷x + [x,y]
inline LieAlgebra sub_adjacent(const PostLie& P) {
  auto rep = check_post_lie(P);
  if (!rep.holds()) throw ConstructionError("sub_adjacent: not a post-Lie algebra\n" + rep.render());
  LieAlgebra C{P.alg.names, P.triangle.antisymmetrised() + P.alg.bracket};
  return C;
}

// ---------------------------------------------------------------------------

/// Products P_k(x_1..x_{k-1}, x_k), stored as the operator P_k(x_1..x_{k-1})
/// acting on the last slot and keyed by the canonical word of the first k-1
/// slots. P_k has degree base + slope*(k-1).
template <Symmetry Sym>
class ProductFamily {
 public:
  ProductFamily() = default;
  ProductFamily(SpacePtr space, int base_degree, int slope, int cap)
      : space_(std::move(space)), base_(base_degree), slope_(slope), cap_(cap) {
    if (!space_) throw InputError("product family needs a space");
    if (cap_ < 1) throw InputError("product family needs arity cap >= 1");
  }

  const SpacePtr& space() const { return space_; }
  int degree(int k) const { return base_ + slope_ * (k - 1); }
  int base_degree() const { return base_; }
  int slope() const { return slope_; }
  int cap() const { return cap_; }
  const std::map<int, std::map<Word, Matrix>>& components() const { return ops_; }
  bool is_zero() const { return ops_.empty(); }

  void set(std::span<const size_t> first, const Matrix& m) { assign(first, m, false); }
  void add(std::span<const size_t> first, const Matrix& m) { assign(first, m, true); }
  void set(std::initializer_list<size_t> first, const Matrix& m) {
    Word w(first);
    assign(w, m, false);
  }

  /// Sets the single entry P_k(first)(e_in) ∋ c e_out.
  void add_entry(std::span<const size_t> first, size_t in, size_t out, const Rational& c) {
    Matrix m = zero_matrix();
    m(out, in) = c;
    add(first, m);
  }

  Matrix op_basis(std::span<const size_t> first) const {
    int k = static_cast<int>(first.size()) + 1;
    auto it = ops_.find(k);
    if (it == ops_.end()) return zero_matrix();
    auto c = canonicalize_word(first, *space_, Sym);
    if (!c) return zero_matrix();
    auto jt = it->second.find(c->entries);
    if (jt == it->second.end()) return zero_matrix();
    Matrix m = jt->second;
    if (c->sign < 0) m *= Rational(-1);
    return m;
  }

  Matrix op(std::span<const Vector> first) const {
    Matrix out = zero_matrix();
    if (ops_.find(static_cast<int>(first.size()) + 1) == ops_.end()) return out;
    std::vector<size_t> idx(first.size());
    auto rec = [&](auto&& self, size_t pos, const Rational& coeff) -> void {
      if (pos == first.size()) {
        out += coeff * op_basis(idx);
        return;
      }
      for (const auto& [i, c] : first[pos]) {
        idx[pos] = i;
        self(self, pos + 1, coeff * c);
      }
    };
    rec(rec, 0, Rational(1));
    return out;
  }

  Vector apply(std::span<const Vector> first, const Vector& last) const { return apply_matrix(op(first), last); }
  Vector apply(std::initializer_list<Vector> all) const {
    std::vector<Vector> a(all);
    Vector last = a.back();
    a.pop_back();
    return apply(a, last);
  }
  /// All k arguments as basis indices; the last one is the acted-on slot.
  Vector apply_basis(std::span<const size_t> all) const {
    return apply_matrix(op_basis(all.first(all.size() - 1)), Vector::basis(all.back()));
  }

  ProductFamily& operator+=(const ProductFamily& o) {
    for (const auto& [k, comp] : o.ops_)
      for (const auto& [w, m] : comp) add(w, m);
    return *this;
  }

  bool operator==(const ProductFamily& o) const {
    return same_space(space_, o.space_) && base_ == o.base_ && slope_ == o.slope_ && ops_ == o.ops_;
  }

  std::string describe(const Word& first, size_t last) const {
    std::string s = "(";
    for (size_t e : first) s += space_->name(e) + ",";
    return s + space_->name(last) + ")";
  }

 private:
  Matrix zero_matrix() const { return Matrix(space_->dim(), space_->dim()); }

  void assign(std::span<const size_t> first, const Matrix& m, bool accumulate) {
    int k = static_cast<int>(first.size()) + 1;
    if (k > cap_) throw InputError("product arity " + std::to_string(k) + " above the arity cap");
    if (m.rows() != space_->dim() || m.cols() != space_->dim()) throw InputError("product operator has wrong shape");
    auto c = canonicalize_word(first, *space_, Sym);
    if (!c) {
      if (!m.is_zero()) throw InputError("nonzero value on a vanishing word");
      return;
    }
    int d = degree(k) + c->degree;
    if (!has_degree(m, *space_, *space_, d)) throw InputError("product of arity " + std::to_string(k) + " has the wrong degree");
    Matrix v = m;
    if (c->sign < 0) v *= Rational(-1);
    auto& comp = ops_[k];
    if (accumulate) {
      auto it = comp.find(c->entries);
      if (it != comp.end()) v += it->second;
    }
    if (v.is_zero())
      comp.erase(c->entries);
    else
      comp[c->entries] = std::move(v);
    if (comp.empty()) ops_.erase(k);
  }

  SpacePtr space_;
  int base_ = 1;
  int slope_ = 0;
  int cap_ = 1;
  std::map<int, std::map<Word, Matrix>> ops_;
};

using SymProducts = ProductFamily<Symmetry::symmetric>;
using AntiProducts = ProductFamily<Symmetry::antisymmetric>;

/// sgLa with degree-1 products ▷_k, graded symmetric in the first k-1 slots.
struct OpHomotopyPostLie {
  SgLa alg;
  SymProducts products;

  OpHomotopyPostLie(SgLa a, SymProducts p) : alg(std::move(a)), products(std::move(p)) {
    if (!same_space(alg.space(), products.space())) throw InputError("products and bracket live on different spaces");
    if (products.base_degree() != 1 || products.slope() != 0) throw InputError("products must all have degree 1");
  }
};

/// Graded Lie algebra (degree-0 antisymmetric bracket) with products of
/// degree 2-k, graded antisymmetric in the first k-1 slots.
struct ShiftedOpHomotopyPostLie {
  SpacePtr space;
  AntiMultiMap bracket;
  AntiProducts products;

  ShiftedOpHomotopyPostLie(SpacePtr s, AntiMultiMap b, AntiProducts p)
      : space(std::move(s)), bracket(std::move(b)), products(std::move(p)) {
    if (!same_space(space, bracket.source()) || !same_space(space, bracket.target()) || !same_space(space, products.space()))
      throw InputError("shifted structure: spaces do not match");
    if (bracket.degree() != 0) throw InputError("graded Lie bracket must have degree 0");
    for (const auto& [a, comp] : bracket.components())
      if (a != 2) throw InputError("graded Lie bracket must be purely binary");
    if (products.base_degree() != 1 || products.slope() != -1) throw InputError("shifted products must have degree 2-k");
  }

  Vector br(const Vector& x, const Vector& y) const { return bracket.evaluate({x, y}); }
};

namespace detail {

/// Runs fn on every location and turns nonzero results into defects.
inline Verdict verdict_over(const std::string& name, const std::vector<std::pair<Word, size_t>>& locations,
                            const std::function<Vector(const Word&, size_t)>& fn,
                            const std::function<std::string(const Word&, size_t)>& describe, const GradedSpace& out,
                            int jobs) {
  auto values = parallel_map<Vector>(locations.size(), jobs,
                                     [&](size_t i) { return fn(locations[i].first, locations[i].second); });
  Verdict v{name, true, {}};
  for (size_t i = 0; i < values.size(); ++i)
    if (!values[i].is_zero())
      v.defects.push_back({name, describe(locations[i].first, locations[i].second), values[i].to_string(out)});
  v.holds = v.defects.empty();
  return v;
}

/// (canonical word of length k, last slot) for every last slot.
template <Symmetry Sym>
std::vector<std::pair<Word, size_t>> product_locations(const GradedSpace& s, size_t k) {
  std::vector<std::pair<Word, size_t>> out;
  for (auto& w : canonical_words(s, k, Sym))
    for (size_t last = 0; last < s.dim(); ++last) out.emplace_back(w, last);
  return out;
}

inline std::vector<Vector> basis_args(const Word& w, const Permutation& s, size_t from, size_t to) {
  std::vector<Vector> out;
  for (size_t k = from; k < to; ++k) out.push_back(Vector::basis(w[s.images[k]]));
  return out;
}

inline std::vector<size_t> sizes(std::initializer_list<int> p) {
  std::vector<size_t> out;
  for (int x : p) out.push_back(static_cast<size_t>(x));
  return out;
}

}  // namespace detail

/// Σ ε ▷_j(▷_i(..),..,v_n) + Σ (-1)^α ε ▷_j(..,▷_i(..,v_n)) - Σ (-1)^β ▷_{n-1}([v_i,v_j],..,v_n)
/// on the arguments (first..., last). With bracket == nullptr the bracket
/// terms are dropped.
inline Vector homotopy_identity_defect(const SgLa* alg, const SymProducts& P, const Word& first, size_t last) {
  const auto& V = *P.space();
  const int n = static_cast<int>(first.size()) + 1;
  const auto d = word_degrees(V, first);
  const Vector vn = Vector::basis(last);
  Vector out;
  for (int i = 1; i <= n - 1; ++i) {
    int j = n + 1 - i;
    if (j > P.cap() || i > P.cap()) continue;
    for (const auto& s : cached_shuffles(detail::sizes({i - 1, 1, j - 2}))) {
      auto inner_first = detail::basis_args(first, s, 0, i - 1);
      Vector inner = P.apply(inner_first, Vector::basis(first[s.images[i - 1]]));
      if (inner.is_zero()) continue;
      std::vector<Vector> outer{inner};
      auto rest = detail::basis_args(first, s, i, n - 1);
      outer.insert(outer.end(), rest.begin(), rest.end());
      out += Rational(koszul_sign(s, d)) * P.apply(outer, vn);
    }
  }
  for (int i = 1; i <= n; ++i) {
    int j = n + 1 - i;
    if (j > P.cap() || i > P.cap()) continue;
    for (const auto& s : cached_shuffles(detail::sizes({j - 1, i - 1}))) {
      auto inner_first = detail::basis_args(first, s, j - 1, n - 1);
      Vector inner = P.apply(inner_first, vn);
      if (inner.is_zero()) continue;
      auto outer = detail::basis_args(first, s, 0, j - 1);
      long alpha = 0;
      for (int k = 0; k < j - 1; ++k) alpha += d[s.images[k]];
      out += Rational(sign_power(alpha) * koszul_sign(s, d)) * P.apply(outer, inner);
    }
  }
  if (alg && !alg->is_abelian() && n - 1 <= P.cap()) {
    std::vector<long> prefix(n, 0);
    for (int k = 0; k < n - 1; ++k) prefix[k + 1] = prefix[k] + d[k];
    for (int a = 0; a < n - 1; ++a)
      for (int b = a + 1; b < n - 1; ++b) {
        Vector br = alg->bracket(first[a], first[b]);
        if (br.is_zero()) continue;
        long beta = d[a] * prefix[a] + d[b] * prefix[b] + static_cast<long>(d[a]) * d[b] + 1;
        std::vector<Vector> args{br};
        for (int k = 0; k < n - 1; ++k)
          if (k != a && k != b) args.push_back(Vector::basis(first[k]));
        out -= Rational(sign_power(beta)) * P.apply(args, vn);
      }
  }
  return out;
}

/// Derivation rule for ▷_n(x_1..x_{n-1}, ·) on every basis pair.
inline Vector derivation_rule_defect(const SgLa& alg, const SymProducts& P, const Word& first, size_t y, size_t z) {
  int k = static_cast<int>(first.size()) + 1;
  int deg = P.degree(k) + word_degree(*P.space(), first);
  return derivation_residual(P.op_basis(first), deg, alg, y, z);
}

/// Graded derivation and homotopy identities for n = 1..n_max.
inline IdentityReport check_op_homotopy_post_lie(const OpHomotopyPostLie& S, int n_max, int jobs = 1) {
  if (n_max < 1) throw InputError("n_max must be at least 1");
  IdentityReport report;
  const auto& V = *S.alg.space();
  for (int n = 1; n <= n_max; ++n) {
    std::vector<std::pair<Word, size_t>> locs;
    for (auto& w : canonical_words(V, n - 1))
      for (size_t y = 0; y < V.dim(); ++y)
        for (size_t z = 0; z < V.dim(); ++z) {
          Word wz = w;
          wz.push_back(z);
          locs.emplace_back(std::move(wz), y);
        }
    report.verdicts.push_back(detail::verdict_over(
        "graded derivation n=" + std::to_string(n), locs,
        [&](const Word& wz, size_t y) {
          Word w(wz.begin(), wz.end() - 1);
          return derivation_rule_defect(S.alg, S.products, w, y, wz.back());
        },
        [&](const Word& wz, size_t y) {
          Word w(wz.begin(), wz.end() - 1);
          return S.products.describe(w, y) + " on [" + V.name(y) + "," + V.name(wz.back()) + "]";
        },
        V, jobs));
  }
  for (int n = 1; n <= n_max; ++n)
    report.verdicts.push_back(detail::verdict_over(
        "homotopy identity n=" + std::to_string(n), detail::product_locations<Symmetry::symmetric>(V, n - 1),
        [&](const Word& w, size_t last) { return homotopy_identity_defect(&S.alg, S.products, w, last); },
        [&](const Word& w, size_t last) { return S.products.describe(w, last); }, V, jobs));
  return report;
}

/// Pre-Lie∞ identities: the homotopy identities with no bracket terms.
inline IdentityReport check_pre_lie_infty(const SymProducts& P, int n_max, int jobs = 1) {
  if (P.base_degree() != 1 || P.slope() != 0) throw InputError("pre-Lie-infinity products must have degree 1");
  IdentityReport report;
  const auto& V = *P.space();
  for (int n = 1; n <= n_max; ++n)
    report.verdicts.push_back(detail::verdict_over(
        "homotopy identity n=" + std::to_string(n), detail::product_locations<Symmetry::symmetric>(V, n - 1),
        [&](const Word& w, size_t last) { return homotopy_identity_defect(nullptr, P, w, last); },
        [&](const Word& w, size_t last) { return P.describe(w, last); }, V, jobs));
  return report;
}

// ---------------------------------------------------------------------------
// Maurer-Cartan description over s^{-1}Der(h).

/// s^{-1}Der(h) acting on h by ρ = s, at weight 1.
struct DerivationContext {
  DesuspendedMaps der;
  ContextPtr context;
};

inline DerivationContext derivation_context(const SgLa& h) {
  DerivationContext dc;
  dc.der = desuspended_derivations(h);
  dc.context = make_context(dc.der.alg, h, dc.der.action);
  return dc;
}

/// ▷_k(v_1..v_k) = (s L_{k-1}(v_1..v_{k-1})) v_k, no MC check.
inline SymProducts plug_in(const ActionMap& rho, const SymMultiMap& f) {
  SymProducts P(f.source(), 1, 0, f.arity_cap() + 1);
  for (const auto& [a, comp] : f.components())
    for (const auto& [w, x] : comp) {
      Matrix m = rho.op(x);
      if (!m.is_zero()) P.set(w, m);
    }
  return P;
}

/// Op-homotopy post-Lie structure from a Maurer-Cartan element L. The MC
/// equation is checked up to p_max (default: every arity L can reach).
inline OpHomotopyPostLie mc_to_op_homotopy(const DerivationContext& dc, const SymMultiMap& L,
                                           std::optional<int> p_max = std::nullopt, int jobs = 1) {
  detail::require_mixed(*dc.context, L);
  if (L.degree() != 0) throw InputError("MC element must have degree 0");
  int pm = p_max.value_or(2 * L.arity_cap() + 1);
  auto rep = check_mc(*dc.context, L, 1, pm, jobs);
  if (!rep.holds()) throw ConstructionError("not a Maurer-Cartan element\n" + rep.render());
  return OpHomotopyPostLie(dc.context->h, plug_in(dc.der.action, L));
}

/// Inverse of the plug-in: reads each ▷_k(w) back as a desuspended derivation.
inline SymMultiMap op_homotopy_to_mc(const DerivationContext& dc, const OpHomotopyPostLie& S) {
  if (!same_space(S.alg.space(), dc.context->h.space())) throw InputError("structure lives on a different sgLa");
  SymMultiMap L(S.alg.space(), dc.der.alg.space(), 0, S.products.cap() - 1);
  for (const auto& [k, comp] : S.products.components())
    for (const auto& [w, m] : comp) {
      auto c = dc.der.coordinates(m);
      if (!c) throw InputError("product operator on " + L.describe_word(w) + " is not a derivation");
      L.set(w, Vector::from_dense(*c));
    }
  return L;
}

/// Ψ(f) = s^{-1}∘ρ∘f.
inline SymMultiMap psi(const OperatorContext& c, const DesuspendedMaps& der, const SymMultiMap& f) {
  detail::require_mixed(c, f);
  SymMultiMap out(f.source(), der.alg.space(), f.degree(), f.arity_cap());
  for (const auto& [a, comp] : f.components())
    for (const auto& [w, x] : comp) {
      Matrix m = c.rho.op(x);
      if (m.is_zero()) continue;
      out.set(w, der.as_element(m));
    }
  return out;
}

/// ▷_k(v_1..v_k) = ρ(T_{k-1}(v_1..v_{k-1}))v_k on h with its bracket scaled by
/// the weight (weight 1 is the plain sgLa h).
inline OpHomotopyPostLie derive_op_homotopy_post_lie(const HomotopyOOperator& op, int p_max = 4, int jobs = 1) {
  auto rep = check_o_operator(op, p_max, jobs);
  if (!rep.holds()) throw ConstructionError("not a homotopy O-operator\n" + rep.render());
  return OpHomotopyPostLie(op.context->h.scaled(op.weight), plug_in(op.context->rho, op.T));
}

/// Weight-0 operator onto an abelian h: the plug-in products form a pre-Lie∞ algebra.
inline SymProducts derive_pre_lie_infty(const HomotopyOOperator& op, int p_max = 4, int jobs = 1) {
  if (op.weight != 0) throw InputError("pre-Lie-infinity structure needs a weight-0 operator");
  if (!op.context->h.is_abelian()) throw InputError("pre-Lie-infinity structure needs an abelian module");
  auto rep = check_o_operator(op, p_max, jobs);
  if (!rep.holds()) throw ConstructionError("not a homotopy O-operator\n" + rep.render());
  return plug_in(op.context->rho, op.T);
}

/// Ungraded post-Lie algebra as an op-homotopy post-Lie algebra on the
/// degree -1 copy of its Lie algebra, with ▷_2 only.
inline OpHomotopyPostLie as_op_homotopy(const PostLie& P) {
  SgLa h = lie_as_sgla(P.alg);
  SymProducts prod(h.space(), 1, 0, 2);
  for (size_t a = 0; a < P.alg.dim(); ++a)
    if (!P.triangle.left(a).is_zero()) prod.set({a}, P.triangle.left(a));
  return OpHomotopyPostLie(h, std::move(prod));
}

/// MC equation for L_▷(x) = s^{-1}(x▷·) in the derivation dgLa of h.
inline IdentityReport check_post_lie_mc(const PostLie& P) {
  SgLa h = lie_as_sgla(P.alg);
  auto dc = derivation_context(h);
  SymMultiMap L(h.space(), dc.der.alg.space(), 0, 1);
  for (size_t a = 0; a < P.alg.dim(); ++a) {
    const Matrix& m = P.triangle.left(a);
    if (!check_derivation(m, 0, h)) throw InputError("left multiplication by '" + P.alg.names[a] + "' is not a derivation");
    if (!m.is_zero()) L.set({a}, dc.der.as_element(m));
  }
  return check_mc(*dc.context, L, 1, 3);
}

// ---------------------------------------------------------------------------

/// l_1 = ▷_1, l_2 = ▷_2(x,y) + (-1)^{xy}▷_2(y,x) + [x,y], and for k >= 3
/// l_k = Σ_i (-1)^{x_i(x_{i+1}+..+x_k)} ▷_k(..x̂_i.., x_i).
inline SymMultiMap induced_linfty(const OpHomotopyPostLie& S, int jobs = 1) {
  const auto& V = *S.alg.space();
  int cap = std::max(2, S.products.cap());
  auto value = [&](const Word& w) {
    Vector out;
    int k = static_cast<int>(w.size());
    if (k == 0) return out;
    auto d = word_degrees(V, w);
    for (int i = 0; i < k; ++i) {
      long e = 0;
      for (int m = i + 1; m < k; ++m) e += d[m];
      e *= d[i];
      Word rest;
      for (int m = 0; m < k; ++m)
        if (m != i) rest.push_back(w[m]);
      out += Rational(sign_power(e)) * apply_matrix(S.products.op_basis(rest), Vector::basis(w[i]));
      if (k == 1) break;
    }
    if (k == 2) out += S.alg.bracket(w[0], w[1]);
    return out;
  };
  return build_map(S.alg.space(), S.alg.space(), 1, cap, value, jobs);
}

/// Σ_{i>=1} Σ ε f_{n-i+1}(l_i(..),..) - ½ Σ_i Σ ε [f_i(..), f_{n-i}(..)] for arities 0..n_max.
inline SymMultiMap curved_morphism_defect(const SymMultiMap& f, const SymMultiMap& l, const SgLa& target, int n_max,
                                          int jobs = 1) {
  if (!same_space(f.source(), l.source()) || !same_space(l.source(), l.target()) ||
      !same_space(f.target(), target.space()))
    throw InputError("morphism, source structure and target bracket do not match");
  if (f.degree() != 0) throw InputError("morphism components must have degree 0");
  const auto& V = *f.source();
  auto value = [&](const Word& w) {
    Vector out;
    int n = static_cast<int>(w.size());
    auto d = word_degrees(V, w);
    for (int i = 1; i <= n; ++i) {
      if (!detail::has_arity(l, i) || !detail::has_arity(f, n - i + 1)) continue;
      for (const auto& s : cached_shuffles(detail::sizes({i, n - i}))) {
        Vector li = l.evaluate(detail::basis_args(w, s, 0, i));
        if (li.is_zero()) continue;
        std::vector<Vector> args{li};
        auto rest = detail::basis_args(w, s, i, n);
        args.insert(args.end(), rest.begin(), rest.end());
        out += Rational(koszul_sign(s, d)) * f.evaluate(args);
      }
    }
    Vector rhs;
    for (int i = 0; i <= n; ++i) {
      if (!detail::has_arity(f, i) || !detail::has_arity(f, n - i)) continue;
      for (const auto& s : cached_shuffles(detail::sizes({i, n - i}))) {
        Vector x = f.evaluate(detail::basis_args(w, s, 0, i));
        if (x.is_zero()) continue;
        Vector y = f.evaluate(detail::basis_args(w, s, i, n));
        if (y.is_zero()) continue;
        rhs += Rational(koszul_sign(s, d)) * target.bracket(x, y);
      }
    }
    out -= Rational(1, 2) * rhs;
    return out;
  };
  return build_map(f.source(), f.target(), 1, n_max, value, jobs);
}

inline IdentityReport check_curved_morphism(const SymMultiMap& f, const SymMultiMap& l, const SgLa& target, int n_max,
                                            int jobs = 1) {
  return defects_by_arity(curved_morphism_defect(f, l, target, n_max, jobs), n_max, "curved morphism");
}

// ---------------------------------------------------------------------------
// Shifted form.

/// Oprn_n(x..,[x_n,x_{n+1}]) - [Oprn_n(x..,x_n),x_{n+1}] - (-1)^{x_n(X+n)}[x_n,Oprn_n(x..,x_{n+1})]
inline Vector shifted_derivation_defect(const ShiftedOpHomotopyPostLie& S, const Word& first, size_t y, size_t z) {
  const auto& V = *S.space;
  long n = static_cast<long>(first.size()) + 1;
  long X = word_degree(V, first);
  Matrix M = S.products.op_basis(first);
  Vector ey = Vector::basis(y), ez = Vector::basis(z);
  Vector out = apply_matrix(M, S.br(ey, ez));
  out -= S.br(apply_matrix(M, ey), ez);
  out -= Rational(sign_power(V.degree(y) * (X + n))) * S.br(ey, apply_matrix(M, ez));
  return out;
}

/// LHS - RHS of the shifted homotopy identity on (first..., last).
inline Vector shifted_identity_defect(const ShiftedOpHomotopyPostLie& S, const Word& first, size_t last) {
  const auto& P = S.products;
  const auto& V = *S.space;
  const int n = static_cast<int>(first.size()) + 1;
  const auto d = word_degrees(V, first);
  const Vector xn = Vector::basis(last);
  Vector lhs;
  if (n - 1 <= P.cap()) {
    std::vector<long> prefix(n, 0);
    for (int k = 0; k < n - 1; ++k) prefix[k + 1] = prefix[k] + d[k];
    for (int a = 0; a < n - 1; ++a)
      for (int b = a + 1; b < n - 1; ++b) {
        Vector br = S.br(Vector::basis(first[a]), Vector::basis(first[b]));
        if (br.is_zero()) continue;
        // 1-based positions a+1, b+1
        long beta = d[a] * prefix[a] + d[b] * prefix[b] + static_cast<long>(d[a]) * d[b] + (a + 1) + (b + 1);
        std::vector<Vector> args{br};
        for (int k = 0; k < n - 1; ++k)
          if (k != a && k != b) args.push_back(Vector::basis(first[k]));
        lhs += Rational(sign_power(beta)) * P.apply(args, xn);
      }
  }
  Vector rhs;
  for (int i = 1; i <= n - 1; ++i) {
    int j = n + 1 - i;
    if (j > P.cap() || i > P.cap()) continue;
    for (const auto& s : cached_shuffles(detail::sizes({i - 1, 1, j - 2}))) {
      Vector inner = P.apply(detail::basis_args(first, s, 0, i - 1), Vector::basis(first[s.images[i - 1]]));
      if (inner.is_zero()) continue;
      std::vector<Vector> outer{inner};
      auto rest = detail::basis_args(first, s, i, n - 1);
      outer.insert(outer.end(), rest.begin(), rest.end());
      long e = static_cast<long>(i) * (j - 1);
      rhs += Rational(sign_power(e) * antisymmetric_sign(s, d)) * P.apply(outer, xn);
    }
  }
  for (int i = 1; i <= n; ++i) {
    int j = n + 1 - i;
    if (j > P.cap() || i > P.cap()) continue;
    for (const auto& s : cached_shuffles(detail::sizes({j - 1, i - 1}))) {
      Vector inner = P.apply(detail::basis_args(first, s, j - 1, n - 1), xn);
      if (inner.is_zero()) continue;
      long alpha = 0;
      for (int k = 0; k < j - 1; ++k) alpha += d[s.images[k]];
      alpha *= i;
      rhs += Rational(sign_power(j - 1 + alpha) * antisymmetric_sign(s, d)) *
             P.apply(detail::basis_args(first, s, 0, j - 1), inner);
    }
  }
  return lhs - rhs;
}

/// Jacobi identity [x,[y,z]] = [[x,y],z] + (-1)^{xy}[y,[x,z]] for a degree-0 antisymmetric bracket.
inline Verdict graded_jacobi(const AntiMultiMap& bracket) {
  const auto& V = *bracket.source();
  Verdict v{"graded Jacobi identity", true, {}};
  for (size_t a = 0; a < V.dim(); ++a)
    for (size_t b = 0; b < V.dim(); ++b)
      for (size_t c = 0; c < V.dim(); ++c) {
        Vector x = Vector::basis(a), y = Vector::basis(b), z = Vector::basis(c);
        Vector r = bracket.evaluate({x, bracket.evaluate({y, z})}) - bracket.evaluate({bracket.evaluate({x, y}), z}) -
                   Rational(sign_power(V.degree(a) * V.degree(b))) * bracket.evaluate({y, bracket.evaluate({x, z})});
        if (!r.is_zero()) v.defects.push_back({"Jacobi", "(" + V.name(a) + "," + V.name(b) + "," + V.name(c) + ")", r.to_string(V)});
      }
  v.holds = v.defects.empty();
  return v;
}

inline IdentityReport check_shifted(const ShiftedOpHomotopyPostLie& S, int n_max, int jobs = 1) {
  if (n_max < 1) throw InputError("n_max must be at least 1");
  IdentityReport report;
  const auto& V = *S.space;
  report.verdicts.push_back(graded_jacobi(S.bracket));
  for (int n = 1; n <= n_max; ++n) {
    std::vector<std::pair<Word, size_t>> locs;
    for (auto& w : canonical_words(V, n - 1, Symmetry::antisymmetric))
      for (size_t y = 0; y < V.dim(); ++y)
        for (size_t z = 0; z < V.dim(); ++z) {
          Word wz = w;
          wz.push_back(z);
          locs.emplace_back(std::move(wz), y);
        }
    report.verdicts.push_back(detail::verdict_over(
        "graded derivation n=" + std::to_string(n), locs,
        [&](const Word& wz, size_t y) {
          return shifted_derivation_defect(S, Word(wz.begin(), wz.end() - 1), y, wz.back());
        },
        [&](const Word& wz, size_t y) {
          return S.products.describe(Word(wz.begin(), wz.end() - 1), y) + " on [" + V.name(y) + "," + V.name(wz.back()) + "]";
        },
        V, jobs));
  }
  for (int n = 1; n <= n_max; ++n)
    report.verdicts.push_back(detail::verdict_over(
        "homotopy identity n=" + std::to_string(n), detail::product_locations<Symmetry::antisymmetric>(V, n - 1),
        [&](const Word& w, size_t last) { return shifted_identity_defect(S, w, last); },
        [&](const Word& w, size_t last) { return S.products.describe(w, last); }, V, jobs));
  return report;
}

namespace detail {

/// Sign relating a product on g to the one on s^{-1}g: only the first k-1
/// degrees matter, the last slot has weight zero.
inline int shift_sign(const GradedSpace& g, const Word& first) {
  auto d = word_degrees(g, first);
  d.push_back(0);
  return decalage_sign(d);
}

}  // namespace detail

/// Shifted form → degree-1 form on s^{-1}g.
inline OpHomotopyPostLie shift_correspondence(const ShiftedOpHomotopyPostLie& S) {
  const auto& g = *S.space;
  SgLa h(shift_map_down(S.bracket));
  if (!h.bracket_map().is_zero() && h.bracket_map().degree() != 1) throw InputError("bracket does not shift to degree 1");
  SymProducts P(h.space(), 1, 0, S.products.cap());
  for (const auto& [k, comp] : S.products.components())
    for (const auto& [w, m] : comp) {
      Matrix v = m;
      v *= Rational(detail::shift_sign(g, w));
      P.set(w, v);
    }
  return OpHomotopyPostLie(std::move(h), std::move(P));
}

/// Degree-1 form on h → shifted form on sh.
inline ShiftedOpHomotopyPostLie unshift_correspondence(const OpHomotopyPostLie& S) {
  AntiMultiMap br = shift_map_up(S.alg.bracket_map());
  if (br.is_zero()) br = AntiMultiMap(br.source(), br.target(), 0, 2);
  const auto& g = *br.source();
  AntiProducts P(br.source(), 1, -1, S.products.cap());
  for (const auto& [k, comp] : S.products.components())
    for (const auto& [w, m] : comp) {
      Matrix v = m;
      v *= Rational(detail::shift_sign(g, w));
      P.set(w, v);
    }
  auto space = br.source();
  return ShiftedOpHomotopyPostLie(space, std::move(br), std::move(P));
}

// ---------------------------------------------------------------------------
// Cohomology of (g, Oprn_1) with its induced graded post-Lie structure.

/// Graded Lie bracket of degree 0 with a degree-0 product ▷.
struct GradedPostLie {
  SpacePtr space;
  AntiMultiMap bracket;
  AntiProducts triangle;  // binary only

  Vector br(const Vector& x, const Vector& y) const { return bracket.evaluate({x, y}); }
  Vector tri(const Vector& x, const Vector& y) const { return triangle.apply({x, y}); }
};

inline IdentityReport check_graded_post_lie(const GradedPostLie& P) {
  IdentityReport report;
  const auto& V = *P.space;
  report.verdicts.push_back(graded_jacobi(P.bracket));
  Verdict der{"x>[y,z] = [x>y,z] + (-1)^{xy}[y,x>z]", true, {}};
  Verdict ass{"[x,y]>z = a(x,y,z) - (-1)^{xy}a(y,x,z)", true, {}};
  auto a = [&](const Vector& x, const Vector& y, const Vector& z) { return P.tri(x, P.tri(y, z)) - P.tri(P.tri(x, y), z); };
  for (size_t i = 0; i < V.dim(); ++i)
    for (size_t j = 0; j < V.dim(); ++j)
      for (size_t k = 0; k < V.dim(); ++k) {
        Vector x = Vector::basis(i), y = Vector::basis(j), z = Vector::basis(k);
        Rational s = sign_power(V.degree(i) * V.degree(j));
        std::string loc = "(" + V.name(i) + "," + V.name(j) + "," + V.name(k) + ")";
        Vector r1 = P.tri(x, P.br(y, z)) - P.br(P.tri(x, y), z) - s * P.br(y, P.tri(x, z));
        if (!r1.is_zero()) der.defects.push_back({"derivation rule", loc, r1.to_string(V)});
        Vector r2 = P.tri(P.br(x, y), z) - a(x, y, z) + s * a(y, x, z);
        if (!r2.is_zero()) ass.defects.push_back({"associator rule", loc, r2.to_string(V)});
      }
  der.holds = der.defects.empty();
  ass.holds = ass.defects.empty();
  report.verdicts.push_back(der);
  report.verdicts.push_back(ass);
  return report;
}

struct PostLieCohomology {
  GradedPostLie algebra;
  std::vector<Vector> representatives;  ///< cocycle in g for each basis class
  std::map<int, size_t> dims;           ///< dim H^d for every degree of g
  IdentityReport report;                ///< well-definedness and the post-Lie axioms
};

namespace detail {

inline DenseVector dense_of(const Vector& v, size_t n) { return v.dense(n); }

}  // namespace detail

/// H*(g, Oprn_1) with [x̄,ȳ] = class of [x,y] and x̄▷ȳ = class of Oprn_2(x,y).
/// Representatives: a basis of the coboundaries is extended by the kernel
/// basis vectors in their reduced-echelon order.
inline PostLieCohomology cohomology_post_lie(const ShiftedOpHomotopyPostLie& S, int n_check = 3) {
  auto pre = check_shifted(S, n_check);
  if (!pre.holds()) throw ConstructionError("cohomology_post_lie: structure fails its identities\n" + pre.render());
  const auto& g = *S.space;
  const size_t N = g.dim();
  Matrix d = S.products.op_basis(std::span<const size_t>{});

  std::vector<DenseVector> boundary_all;
  std::vector<Vector> reps;
  std::vector<BasisElement> hbasis;
  PostLieCohomology out;
  for (int deg : g.degrees()) {
    auto cols = g.indices_of_degree(deg);
    Matrix restricted(N, cols.size());
    for (size_t c = 0; c < cols.size(); ++c)
      for (size_t r = 0; r < N; ++r) restricted(r, c) = d(r, cols[c]);
    std::vector<DenseVector> kernel;
    for (const auto& k : nullspace(restricted)) {
      DenseVector full(N);
      for (size_t c = 0; c < cols.size(); ++c) full[cols[c]] = k[c];
      kernel.push_back(std::move(full));
    }
    std::vector<DenseVector> images;
    for (size_t src : g.indices_of_degree(deg - 1)) {
      DenseVector im = d.column(src);
      if (!is_zero(im)) images.push_back(im);
    }
    auto boundary = independent_subset(images, N);
    std::vector<DenseVector> chosen = boundary;
    size_t count = 0;
    for (const auto& k : kernel) {
      auto trial = chosen;
      trial.push_back(k);
      if (independent_subset(trial, N).size() == trial.size()) {
        chosen = std::move(trial);
        Vector rep = Vector::from_dense(k);
        std::string name;
        if (rep.support_size() == 1 && rep.begin()->second == 1)
          name = g.name(rep.begin()->first);
        else
          name = "H" + std::to_string(deg) + "_" + std::to_string(count + 1);
        hbasis.push_back({name, deg});
        reps.push_back(rep);
        ++count;
      }
    }
    out.dims[deg] = count;
    boundary_all.insert(boundary_all.end(), boundary.begin(), boundary.end());
  }

  // coordinates against [coboundaries | representatives]
  std::vector<DenseVector> frame = boundary_all;
  for (const auto& r : reps) frame.push_back(r.dense(N));
  SubspaceBasis cocycles(frame, N);
  const size_t nb = boundary_all.size();
  auto space = make_space(hbasis, g.window());
  auto cls = [&](const Vector& z) -> std::optional<Vector> {
    auto c = cocycles.coordinates(z.dense(N));
    if (!c) return std::nullopt;
    Vector v;
    for (size_t i = nb; i < c->size(); ++i) v.add_term(i - nb, (*c)[i]);
    return v;
  };

  Verdict closed{"induced operations land in cocycles", true, {}};
  Verdict welldef{"independent of representatives", true, {}};
  AntiMultiMap br(space, space, 0, 2);
  AntiProducts tri(space, 1, -1, 2);
  auto op2 = [&](const Vector& x, const Vector& y) { return S.products.apply({x, y}); };
  for (size_t i = 0; i < reps.size(); ++i)
    for (size_t j = 0; j < reps.size(); ++j) {
      std::string loc = "(" + space->name(i) + "," + space->name(j) + ")";
      auto b = cls(S.br(reps[i], reps[j]));
      auto t = cls(op2(reps[i], reps[j]));
      if (!b) closed.defects.push_back({"bracket", loc, "not a cocycle"});
      if (!t) closed.defects.push_back({"product", loc, "not a cocycle"});
      if (b && !b->is_zero() && i <= j) br.set({i, j}, *b);
      if (t && !t->is_zero()) {
        Matrix m(space->dim(), space->dim());
        for (const auto& [r, c] : *t) m(r, j) = c;
        tri.add(Word{i}, m);
      }
    }
  // shifting a representative by a coboundary must not change any class
  for (const auto& bvec : boundary_all) {
    Vector bnd = Vector::from_dense(bvec);
    for (size_t j = 0; j < reps.size(); ++j) {
      for (const auto& [what, val] :
           {std::pair{"[b,y]", S.br(bnd, reps[j])}, std::pair{"[y,b]", S.br(reps[j], bnd)},
            std::pair{"b>y", op2(bnd, reps[j])}, std::pair{"y>b", op2(reps[j], bnd)}}) {
        auto c = cls(val);
        if (!c || !c->is_zero())
          welldef.defects.push_back({what, "(" + bnd.to_string(g) + "," + space->name(j) + ")", c ? c->to_string(*space) : "not a cocycle"});
      }
    }
  }
  closed.holds = closed.defects.empty();
  welldef.holds = welldef.defects.empty();
  if (!closed.holds || !welldef.holds) {
    IdentityReport bad;
    bad.verdicts = {closed, welldef};
    throw ConsistencyError("induced operations on cohomology are ill-defined\n" + bad.render());
  }
  out.algebra = GradedPostLie{space, std::move(br), std::move(tri)};
  out.representatives = std::move(reps);
  out.report.verdicts = {closed, welldef};
  out.report.append(check_graded_post_lie(out.algebra));
  return out;
}

}  // namespace hpl

#endif  // HPL_POSTLIE_HPP
