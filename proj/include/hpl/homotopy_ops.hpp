#ifndef HPL_HOMOTOPY_OPS_HPP
#define HPL_HOMOTOPY_OPS_HPP

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hpl/errors.hpp"
#include "hpl/multimap.hpp"
#include "hpl/report.hpp"
#include "hpl/sgla.hpp"

namespace hpl {

/// An sgLa g acting on an sgLa h (h may be abelian).
struct OperatorContext {
  SgLa g;
  SgLa h;
  ActionMap rho;
};

using ContextPtr = std::shared_ptr<const OperatorContext>;

/// Validates the action and freezes the context.
inline ContextPtr make_context(SgLa g, SgLa h, ActionMap rho) {
  auto rep = check_action(g, h, rho);
  if (!rep.holds()) throw ConstructionError("context: not an action\n" + rep.render());
  return std::make_shared<const OperatorContext>(OperatorContext{std::move(g), std::move(h), std::move(rho)});
}

/// g acting on itself by the adjoint action.
inline ContextPtr adjoint_context(const SgLa& g) { return make_context(g, g, adjoint_action(g)); }

/// T = Σ T_k : S(h) → g of degree 0, with the weight it is meant to have.
struct HomotopyOOperator {
  ContextPtr context;
  SymMultiMap T;
  Rational weight;

  HomotopyOOperator(ContextPtr ctx, SymMultiMap t, Rational w) : context(std::move(ctx)), T(std::move(t)), weight(std::move(w)) {
    if (!same_space(T.source(), context->h.space()) || !same_space(T.target(), context->g.space()))
      throw InputError("operator must map S(h) to g");
    if (T.degree() != 0) throw InputError("operator must have degree 0");
  }
};

namespace detail {

inline void pick_into(const Word& w, const Permutation& s, size_t from, size_t to, std::vector<Vector>& out) {
  for (size_t k = from; k < to; ++k) out.push_back(Vector::basis(w[s.images[k]]));
}

inline void require_mixed(const OperatorContext& c, const SymMultiMap& f) {
  if (!same_space(f.source(), c.h.space()) || !same_space(f.target(), c.g.space()))
    throw InputError("expected a map S(h) -> g");
}

inline std::vector<size_t> parts(std::initializer_list<int> p) {
  std::vector<size_t> out;
  for (int x : p) out.push_back(static_cast<size_t>(x));
  return out;
}

inline bool has_arity(const SymMultiMap& f, int a) { return f.components().count(a) > 0; }

}  // namespace detail

/// Differential of the controlling dgLa:
/// (dg)_p = Σ_{σ∈S(2,p-2)} (-1)^{n+1} ε(σ) g_{p-1}(λ[v_σ1,v_σ2]_h, v_σ3, …).
inline SymMultiMap dgla_differential(const OperatorContext& c, const Rational& lambda, const SymMultiMap& f,
                                     std::optional<int> max_arity = std::nullopt, int jobs = 1) {
  detail::require_mixed(c, f);
  int natural = f.arity_cap() + 1;
  int cap = max_arity ? std::min(natural, *max_arity) : natural;
  const auto& hs = *c.h.space();
  int sgn = sign_power(f.degree() + 1);
  auto value = [&](const Word& w) {
    Vector out;
    int p = static_cast<int>(w.size());
    if (p < 2 || lambda == 0 || !detail::has_arity(f, p - 1)) return out;
    auto degs = word_degrees(hs, w);
    for (const auto& s : cached_shuffles(detail::parts({2, p - 2}))) {
      Vector br = c.h.bracket(w[s.images[0]], w[s.images[1]]);
      if (br.is_zero()) continue;
      std::vector<Vector> args{lambda * br};
      detail::pick_into(w, s, 2, p, args);
      out += Rational(sgn * koszul_sign(s, degs)) * f.evaluate(args);
    }
    return out;
  };
  auto r = build_map(f.source(), f.target(), f.degree() + 1, cap, value, jobs);
  if (cap < natural) r.mark_truncated();
  return r;
}

/// Bracket of the controlling dgLa on C*(h,g), for f of degree m and g of degree n.
inline SymMultiMap controlling_bracket(const OperatorContext& c, const SymMultiMap& f, const SymMultiMap& g,
                                       std::optional<int> max_arity = std::nullopt, int jobs = 1) {
  detail::require_mixed(c, f);
  detail::require_mixed(c, g);
  const int m = f.degree(), n = g.degree();
  int natural = f.arity_cap() + g.arity_cap();
  int cap = max_arity ? std::min(natural, *max_arity) : natural;
  const auto& hs = *c.h.space();
  const int swap_sign = sign_power((m + 1) * (n + 1));
  auto value = [&](const Word& w) {
    Vector out;
    const int p = static_cast<int>(w.size());
    auto degs = word_degrees(hs, w);
    // -Σ ε f_{k-1}(ρ(g_l(v…)) v, v…)
    for (int l = 0; l <= p - 1; ++l) {
      if (!detail::has_arity(g, l) || !detail::has_arity(f, p - l)) continue;
      for (const auto& s : cached_shuffles(detail::parts({l, 1, p - l - 1}))) {
        std::vector<Vector> inner;
        detail::pick_into(w, s, 0, l, inner);
        Vector x = g.evaluate(inner);
        if (x.is_zero()) continue;
        std::vector<Vector> args{c.rho.apply(x, Vector::basis(w[s.images[l]]))};
        if (args[0].is_zero()) continue;
        detail::pick_into(w, s, l + 1, p, args);
        out -= Rational(koszul_sign(s, degs)) * f.evaluate(args);
      }
    }
    // +(-1)^{(m+1)(n+1)} Σ ε g_l(ρ(f_{k-1}(v…)) v, v…)
    for (int a = 0; a <= p - 1; ++a) {
      if (!detail::has_arity(f, a) || !detail::has_arity(g, p - a)) continue;
      for (const auto& s : cached_shuffles(detail::parts({a, 1, p - a - 1}))) {
        std::vector<Vector> inner;
        detail::pick_into(w, s, 0, a, inner);
        Vector x = f.evaluate(inner);
        if (x.is_zero()) continue;
        std::vector<Vector> args{c.rho.apply(x, Vector::basis(w[s.images[a]]))};
        if (args[0].is_zero()) continue;
        detail::pick_into(w, s, a + 1, p, args);
        out += Rational(swap_sign * koszul_sign(s, degs)) * g.evaluate(args);
      }
    }
    // -Σ (-1)^{n(v_σ1+…+v_σ(k-1)) + m + 1} ε [f_{k-1}(v…), g_l(v…)]_g
    for (int a = 0; a <= p; ++a) {
      if (!detail::has_arity(f, a) || !detail::has_arity(g, p - a)) continue;
      for (const auto& s : cached_shuffles(detail::parts({a, p - a}))) {
        std::vector<Vector> fa, ga;
        detail::pick_into(w, s, 0, a, fa);
        detail::pick_into(w, s, a, p, ga);
        Vector x = f.evaluate(fa);
        if (x.is_zero()) continue;
        Vector y = g.evaluate(ga);
        if (y.is_zero()) continue;
        int first = 0;
        for (int k = 0; k < a; ++k) first += degs[s.images[k]];
        int sg = -sign_power(n * first + m + 1) * koszul_sign(s, degs);
        out += Rational(sg) * c.g.bracket(x, y);
      }
    }
    return out;
  };
  auto r = build_map(f.source(), f.target(), m + n + 1, cap, value, jobs);
  if (cap < natural) r.mark_truncated();
  return r;
}

/// dT + ½⟦T,T⟧ up to the given arity.
inline SymMultiMap mc_defect(const OperatorContext& c, const SymMultiMap& T, const Rational& lambda, int max_arity,
                             int jobs = 1) {
  SymMultiMap d = dgla_differential(c, lambda, T, max_arity, jobs);
  SymMultiMap b = controlling_bracket(c, T, T, max_arity, jobs);
  b *= Rational(1, 2);
  d += b;
  return d;
}

inline SymMultiMap mc_defect(const HomotopyOOperator& op, int max_arity, int jobs = 1) {
  return mc_defect(*op.context, op.T, op.weight, max_arity, jobs);
}

/// LHS - RHS of the homotopy O-operator identity at every arity p <= p_max,
/// evaluated term by term without going through the dgLa.
inline SymMultiMap o_operator_defect(const OperatorContext& c, const SymMultiMap& T, const Rational& lambda, int p_max,
                                     int jobs = 1) {
  detail::require_mixed(c, T);
  const auto& hs = *c.h.space();
  auto value = [&](const Word& w) {
    Vector out;
    const int p = static_cast<int>(w.size());
    std::vector<int> d = word_degrees(hs, w);
    // λ-terms: pairs i<j with the displayed exponent
    if (lambda != 0 && detail::has_arity(T, p - 1)) {
      std::vector<int> prefix(p + 1, 0);
      for (int k = 0; k < p; ++k) prefix[k + 1] = prefix[k] + d[k];
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
          Vector br = c.h.bracket(w[i], w[j]);
          if (br.is_zero()) continue;
          long e = static_cast<long>(d[i]) * prefix[i] + static_cast<long>(d[j]) * prefix[j] + static_cast<long>(d[i]) * d[j];
          std::vector<Vector> args{lambda * br};
          for (int k = 0; k < p; ++k)
            if (k != i && k != j) args.push_back(Vector::basis(w[k]));
          out += Rational(sign_power(e)) * T.evaluate(args);
        }
    }
    // ρ-terms
    for (int l = 0; l <= p - 1; ++l) {
      if (!detail::has_arity(T, l) || !detail::has_arity(T, p - l)) continue;
      for (const auto& s : cached_shuffles(detail::parts({l, 1, p - l - 1}))) {
        std::vector<Vector> inner;
        detail::pick_into(w, s, 0, l, inner);
        Vector x = T.evaluate(inner);
        if (x.is_zero()) continue;
        std::vector<Vector> args{c.rho.apply(x, Vector::basis(w[s.images[l]]))};
        detail::pick_into(w, s, l + 1, p, args);
        out += Rational(koszul_sign(s, d)) * T.evaluate(args);
      }
    }
    // ½ Σ ε [T_{k-1}(…), T_l(…)]
    Vector rhs;
    for (int a = 0; a <= p; ++a) {
      if (!detail::has_arity(T, a) || !detail::has_arity(T, p - a)) continue;
      for (const auto& s : cached_shuffles(detail::parts({a, p - a}))) {
        std::vector<Vector> fa, ga;
        detail::pick_into(w, s, 0, a, fa);
        detail::pick_into(w, s, a, p, ga);
        Vector x = T.evaluate(fa), y = T.evaluate(ga);
        if (x.is_zero() || y.is_zero()) continue;
        rhs += Rational(koszul_sign(s, d)) * c.g.bracket(x, y);
      }
    }
    out -= Rational(1, 2) * rhs;
    return out;
  };
  return build_map(T.source(), T.target(), 1, p_max, value, jobs);
}

inline IdentityReport defects_by_arity(const SymMultiMap& defect, int p_max, const std::string& label) {
  IdentityReport report;
  for (int p = 0; p <= p_max; ++p) {
    Verdict v{label + " p=" + std::to_string(p), true, {}};
    auto it = defect.components().find(p);
    if (it != defect.components().end())
      for (const auto& [w, val] : it->second) v.defects.push_back({label, defect.describe_word(w), val.to_string(*defect.target())});
    v.holds = v.defects.empty();
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

/// Homotopy O-operator identity of the given weight for arities 0..p_max.
inline IdentityReport check_o_operator(const OperatorContext& c, const SymMultiMap& T, const Rational& lambda, int p_max,
                                       int jobs = 1) {
  return defects_by_arity(o_operator_defect(c, T, lambda, p_max, jobs), p_max, "O-operator identity");
}

inline IdentityReport check_o_operator(const HomotopyOOperator& op, int p_max, int jobs = 1) {
  return check_o_operator(*op.context, op.T, op.weight, p_max, jobs);
}

/// Homotopy Rota-Baxter operator: O-operator for the adjoint action.
inline IdentityReport check_homotopy_rb(const SgLa& g, const SymMultiMap& R, const Rational& lambda, int p_max,
                                        int jobs = 1) {
  auto c = adjoint_context(g);
  return check_o_operator(*c, R, lambda, p_max, jobs);
}

/// MC characterisation: dT + ½⟦T,T⟧ = 0 up to p_max.
inline IdentityReport check_mc(const OperatorContext& c, const SymMultiMap& T, const Rational& lambda, int p_max,
                               int jobs = 1) {
  return defects_by_arity(mc_defect(c, T, lambda, p_max, jobs), p_max, "Maurer-Cartan equation");
}

// ---------------------------------------------------------------------------
// Second route: the same operations as derived brackets inside the
// Nijenhuis-Richardson algebra of g ⊕ h.

class MixedEmbedding {
 public:
  explicit MixedEmbedding(const OperatorContext& c)
      : c_(c), layout_(sum_layout(*c.g.space(), *c.h.space())) {
    structure_ = semidirect(c.g, SgLa::abelian(c.h.space()), c.rho).bracket_map();
    // semidirect builds its own layout; rebuild on ours so the spaces are shared
    structure_ = rebase(structure_);
    module_bracket_ = SymMultiMap(layout_.sum, layout_.sum, 1, 2);
    for (const auto& w : canonical_words(*c.h.space(), 2)) {
      Vector v;
      for (const auto& [i, x] : c.h.bracket(w[0], w[1])) v.add_term(layout_.h_index(i), x);
      module_bracket_.set({layout_.h_index(w[0]), layout_.h_index(w[1])}, v);
    }
  }

  const SumLayout& layout() const { return layout_; }
  /// μ_g + ρ on g ⊕ h
  const SymMultiMap& structure() const { return structure_; }
  /// μ_h on g ⊕ h
  const SymMultiMap& module_bracket() const { return module_bracket_; }

  SymMultiMap embed(const SymMultiMap& f) const {
    detail::require_mixed(c_, f);
    SymMultiMap F(layout_.sum, layout_.sum, f.degree(), f.arity_cap());
    for (const auto& [a, comp] : f.components())
      for (const auto& [w, v] : comp) {
        Word sw;
        for (size_t e : w) sw.push_back(layout_.h_index(e));
        Vector sv;
        for (const auto& [i, x] : v) sv.add_term(layout_.g_index(i), x);
        F.set(sw, sv);
      }
    return F;
  }

  /// Inverse of embed; throws if F has components outside Hom(S(h), g).
  SymMultiMap project(const SymMultiMap& F) const {
    SymMultiMap f(c_.h.space(), c_.g.space(), F.degree(), F.arity_cap());
    for (const auto& [a, comp] : F.components())
      for (const auto& [w, v] : comp) {
        Word hw;
        bool h_only = true;
        for (size_t e : w) {
          if (e < layout_.g_dim) h_only = false;
          hw.push_back(e - layout_.g_dim);
        }
        Vector gv;
        bool g_valued = true;
        for (const auto& [i, x] : v) {
          if (i >= layout_.g_dim) g_valued = false;
          gv.add_term(i, x);
        }
        if (!h_only || !g_valued) throw ConsistencyError("derived bracket left Hom(S(h), g)");
        f.set(hw, gv);
      }
    return f;
  }

 private:
  SymMultiMap rebase(const SymMultiMap& m) const {
    SymMultiMap out(layout_.sum, layout_.sum, m.degree(), m.arity_cap());
    for (const auto& [a, comp] : m.components())
      for (const auto& [w, v] : comp) out.set(w, v);
    return out;
  }

  const OperatorContext& c_;
  SumLayout layout_;
  SymMultiMap structure_;
  SymMultiMap module_bracket_;
};

/// ⟦f,g⟧ = (-1)^m [[μ_g+ρ, f]_NR, g]_NR, restricted back to Hom(S(h), g).
inline SymMultiMap derived_bracket(const OperatorContext& c, const SymMultiMap& f, const SymMultiMap& g) {
  MixedEmbedding E(c);
  SymMultiMap r = nr_bracket(nr_bracket(E.structure(), E.embed(f)), E.embed(g));
  r *= Rational(sign_power(f.degree()));
  return E.project(r);
}

/// d = [λμ_h, ·]_NR, restricted back to Hom(S(h), g).
inline SymMultiMap derived_differential(const OperatorContext& c, const Rational& lambda, const SymMultiMap& f) {
  MixedEmbedding E(c);
  SymMultiMap mu = E.module_bracket();
  mu *= lambda;
  return E.project(nr_bracket(mu, E.embed(f)));
}

/// Graded antisymmetry, graded Jacobi, the Leibniz rule for d and d² = 0 on
/// each sample triple (degrees are shifted by one in sC*(h,g)).
inline IdentityReport check_dgla_axioms(const OperatorContext& c, const Rational& lambda,
                                        const std::vector<std::array<SymMultiMap, 3>>& samples) {
  Verdict anti{"graded antisymmetry", true, {}};
  Verdict jac{"graded Jacobi", true, {}};
  Verdict leib{"d is a derivation", true, {}};
  Verdict dsq{"d^2 = 0", true, {}};
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& [f, g, h] = samples[i];
    int sf = f.degree() + 1, sg = g.degree() + 1;
    std::string at = "sample " + std::to_string(i);
    auto fg = controlling_bracket(c, f, g);
    auto gf = controlling_bracket(c, g, f);
    if (!(fg == Rational(-sign_power(sf * sg)) * gf)) anti.defects.push_back({"[f,g] + (-1)^{|f||g|}[g,f]", at, "nonzero"});
    auto lhs = controlling_bracket(c, f, controlling_bracket(c, g, h));
    auto rhs = controlling_bracket(c, fg, h) + Rational(sign_power(sf * sg)) * controlling_bracket(c, g, controlling_bracket(c, f, h));
    if (!(lhs == rhs)) jac.defects.push_back({"Jacobi", at, "nonzero"});
    auto dfg = dgla_differential(c, lambda, fg);
    auto r = controlling_bracket(c, dgla_differential(c, lambda, f), g) +
             Rational(sign_power(sf)) * controlling_bracket(c, f, dgla_differential(c, lambda, g));
    if (!(dfg == r)) leib.defects.push_back({"d[f,g] - [df,g] - (-1)^|f|[f,dg]", at, "nonzero"});
    if (!dgla_differential(c, lambda, dgla_differential(c, lambda, f)).is_zero()) dsq.defects.push_back({"d d f", at, "nonzero"});
  }
  IdentityReport report;
  for (auto* v : {&anti, &jac, &leib, &dsq}) {
    v->holds = v->defects.empty();
    report.verdicts.push_back(*v);
  }
  return report;
}

}  // namespace hpl

#endif  // HPL_HOMOTOPY_OPS_HPP
