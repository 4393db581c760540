#ifndef HPL_TWO_TERM_HPP
#define HPL_TWO_TERM_HPP

#include <functional>
#include <string>
#include <vector>

#include "hpl/cohomology.hpp"
#include "hpl/errors.hpp"
#include "hpl/parallel.hpp"
#include "hpl/postlie.hpp"
#include "hpl/report.hpp"

namespace hpl {

/// g = g0 ⊕ g−1 with bracket components on g0⊗g0 and g0⊗g−1 and the maps
/// O1: g−1 → g0, O2 on g0⊗g0, g0⊗g−1, g−1⊗g0, O3: ∧²g0 ⊗ g0 → g−1.
struct TwoTermData {
  LieAlgebra g0;                      // bracket on g0
  std::vector<std::string> gm1;       // basis of g−1
  LinearFamily rho;                   // [x,a] = rho(x)a
  Matrix o1;                          // dim g0 × dim g−1
  Bilinear o2;                        // O2(x,y)
  LinearFamily mu;                    // O2(x,a) = mu(x)a
  LinearFamily nu;                    // O2(a,x) = nu(x)a
  Cochain o3;                         // O3(x,y,z)

  size_t dim0() const { return g0.dim(); }
  size_t dim1() const { return gm1.size(); }
  bool skeletal() const { return o1.is_zero(); }

  static TwoTermData zero(std::vector<std::string> names0, std::vector<std::string> names1) {
    size_t n = names0.size(), m = names1.size();
    return {LieAlgebra::abelian(std::move(names0)),
            std::move(names1),
            zero_family(n, m),
            Matrix(n, m),
            Bilinear(n),
            zero_family(n, m),
            zero_family(n, m),
            Cochain(3, n, m)};
  }

  void validate() const {
    const size_t n = dim0(), m = dim1();
    if (g0.bracket.dim() != n || o2.dim() != n) throw InputError("two-term data: g0 operations have the wrong size");
    if (o1.rows() != n || o1.cols() != m) throw InputError("two-term data: O1 has the wrong shape");
    for (const auto* f : {&rho, &mu, &nu}) {
      if (f->mats.size() != n) throw InputError("two-term data: need one operator on g-1 per basis element of g0");
      for (const auto& a : f->mats)
        if (a.rows() != m || a.cols() != m) throw InputError("two-term data: operator on g-1 has the wrong shape");
    }
    if (o3.n != 3 || o3.data.dim_g != n || o3.data.dim_v != m) throw InputError("two-term data: O3 has the wrong shape");
  }

  bool operator==(const TwoTermData&) const = default;
};

namespace two_term {

/// x + a with x ∈ g0, a ∈ g−1.
struct Elt {
  Vector x, a;
  Elt& operator+=(const Elt& o) {
    x += o.x;
    a += o.a;
    return *this;
  }
  Elt& operator-=(const Elt& o) {
    x -= o.x;
    a -= o.a;
    return *this;
  }
  friend Elt operator+(Elt p, const Elt& q) { return p += q; }
  friend Elt operator-(Elt p, const Elt& q) { return p -= q; }
  bool is_zero() const { return x.is_zero() && a.is_zero(); }
};

inline Elt even(size_t i) { return {Vector::basis(i), {}}; }
inline Elt odd(size_t i) { return {{}, Vector::basis(i)}; }

/// The operations of a TwoTermData extended to g0 ⊕ g−1; products landing in degree −2 or 1 vanish.
struct Ops {
  const TwoTermData& d;

  Elt br(const Elt& p, const Elt& q) const {
    return {d.g0.bracket(p.x, q.x), apply_matrix(d.rho.of(p.x, d.dim1()), q.a) - apply_matrix(d.rho.of(q.x, d.dim1()), p.a)};
  }
  Elt o1(const Elt& p) const { return {apply_matrix(d.o1, p.a), {}}; }
  Elt o2(const Elt& p, const Elt& q) const {
    return {d.o2(p.x, q.x), apply_matrix(d.mu.of(p.x, d.dim1()), q.a) + apply_matrix(d.nu.of(q.x, d.dim1()), p.a)};
  }
  Elt o3(const Elt& p, const Elt& q, const Elt& r) const { return {{}, d.o3({p.x, q.x}, r.x)}; }
};

}  // namespace two_term

namespace detail {

/// One condition of the two-term definition: argument kinds ('x' for g0, 'a' for g−1) and its defect.
struct TwoTermCondition {
  std::string name;
  std::string kinds;
  std::function<two_term::Elt(const two_term::Ops&, const std::vector<two_term::Elt>&)> defect;
};

inline const std::vector<TwoTermCondition>& two_term_conditions() {
  using two_term::Elt;
  using two_term::Ops;
  using A = std::vector<Elt>;
  static const std::vector<TwoTermCondition> conds = {
      {"bracket antisymmetry", "xx", [](const Ops& o, const A& v) { return o.br(v[0], v[1]) + o.br(v[1], v[0]); }},
      {"Jacobi (x,y,z)", "xxx",
       [](const Ops& o, const A& v) {
         return o.br(v[0], o.br(v[1], v[2])) - o.br(o.br(v[0], v[1]), v[2]) - o.br(v[1], o.br(v[0], v[2]));
       }},
      {"Jacobi (x,y,a)", "xxa",
       [](const Ops& o, const A& v) {
         return o.br(v[0], o.br(v[1], v[2])) - o.br(o.br(v[0], v[1]), v[2]) - o.br(v[1], o.br(v[0], v[2]));
       }},
      {"O1[x,a] = [x,O1 a]", "xa", [](const Ops& o, const A& v) { return o.o1(o.br(v[0], v[1])) - o.br(v[0], o.o1(v[1])); }},
      {"[O1 a,b] = [a,O1 b]", "aa", [](const Ops& o, const A& v) { return o.br(o.o1(v[0]), v[1]) - o.br(v[0], o.o1(v[1])); }},
      {"O2 derivation (x,y,z)", "xxx",
       [](const Ops& o, const A& v) {
         return o.o2(v[0], o.br(v[1], v[2])) - o.br(o.o2(v[0], v[1]), v[2]) - o.br(v[1], o.o2(v[0], v[2]));
       }},
      {"O2 derivation (x,y,a)", "xxa",
       [](const Ops& o, const A& v) {
         return o.o2(v[0], o.br(v[1], v[2])) - o.br(o.o2(v[0], v[1]), v[2]) - o.br(v[1], o.o2(v[0], v[2]));
       }},
      {"O2 derivation (a,x,y)", "axx",
       [](const Ops& o, const A& v) {
         return o.o2(v[0], o.br(v[1], v[2])) - o.br(o.o2(v[0], v[1]), v[2]) - o.br(v[1], o.o2(v[0], v[2]));
       }},
      {"O3 derivation", "xxxx",
       [](const Ops& o, const A& v) {
         return o.o3(v[0], v[1], o.br(v[2], v[3])) - o.br(o.o3(v[0], v[1], v[2]), v[3]) -
                o.br(v[2], o.o3(v[0], v[1], v[3]));
       }},
      {"O1 O2(x,a) = O2(x,O1 a)", "xa", [](const Ops& o, const A& v) { return o.o1(o.o2(v[0], v[1])) - o.o2(v[0], o.o1(v[1])); }},
      {"O1 O2(a,x) = O2(O1 a,x)", "ax", [](const Ops& o, const A& v) { return o.o1(o.o2(v[0], v[1])) - o.o2(o.o1(v[0]), v[1]); }},
      {"O2(O1 a,b) = O2(a,O1 b)", "aa", [](const Ops& o, const A& v) { return o.o2(o.o1(v[0]), v[1]) - o.o2(v[0], o.o1(v[1])); }},
      {"O2 associator (x,y,z) = O1 O3", "xxx",
       [](const Ops& o, const A& v) {
         const auto &x = v[0], &y = v[1], &z = v[2];
         return o.o2(x, o.o2(y, z)) - o.o2(o.o2(x, y), z) - o.o2(y, o.o2(x, z)) + o.o2(o.o2(y, x), z) - o.o2(o.br(x, y), z) -
                o.o1(o.o3(x, y, z));
       }},
      {"O2 associator (x,y,a) = O3(x,y,O1 a)", "xxa",
       [](const Ops& o, const A& v) {
         const auto &x = v[0], &y = v[1], &a = v[2];
         return o.o2(x, o.o2(y, a)) - o.o2(o.o2(x, y), a) - o.o2(y, o.o2(x, a)) + o.o2(o.o2(y, x), a) - o.o2(o.br(x, y), a) -
                o.o3(x, y, o.o1(a));
       }},
      {"O2 associator (a,y,z) = O3(O1 a,y,z)", "axx",
       [](const Ops& o, const A& v) {
         const auto &a = v[0], &y = v[1], &z = v[2];
         return o.o2(a, o.o2(y, z)) - o.o2(o.o2(a, y), z) - o.o2(y, o.o2(a, z)) + o.o2(o.o2(y, a), z) - o.o2(o.br(a, y), z) -
                o.o3(o.o1(a), y, z);
       }},
      {"O3 closure", "xxxx",
       [](const Ops& o, const A& v) {
         const auto &x = v[0], &y = v[1], &z = v[2], &w = v[3];
         auto c = [&](const Elt& p, const Elt& q) { return o.o2(p, q) - o.o2(q, p) + o.br(p, q); };
         return o.o2(x, o.o3(y, z, w)) - o.o2(y, o.o3(x, z, w)) + o.o2(z, o.o3(x, y, w)) + o.o2(o.o3(y, z, x), w) -
                o.o2(o.o3(x, z, y), w) + o.o2(o.o3(x, y, z), w) - o.o3(c(x, y), z, w) - o.o3(c(y, z), x, w) +
                o.o3(c(x, z), y, w) - o.o3(y, z, o.o2(x, w)) + o.o3(x, z, o.o2(y, w)) - o.o3(x, y, o.o2(z, w));
       }},
  };
  return conds;
}

inline std::string elt_string(const TwoTermData& d, const two_term::Elt& e) {
  std::string s;
  auto part = [&](const Vector& v, const std::vector<std::string>& names) {
    for (const auto& [i, c] : v) {
      if (!s.empty()) s += " + ";
      s += (c == 1 ? std::string() : c.get_str() + "*") + names.at(i);
    }
  };
  part(e.x, d.g0.names);
  part(e.a, d.gm1);
  return s.empty() ? "0" : s;
}

}  // namespace detail

/// Every condition of the two-term definition plus the 2-term graded Lie algebra axioms, on all basis tuples.
inline IdentityReport check_two_term(const TwoTermData& d, int jobs = 1) {
  d.validate();
  two_term::Ops ops{d};
  IdentityReport report;
  for (const auto& cond : detail::two_term_conditions()) {
    std::vector<size_t> sizes;
    for (char k : cond.kinds) sizes.push_back(k == 'x' ? d.dim0() : d.dim1());
    size_t total = 1;
    for (size_t s : sizes) total *= s;
    auto indices = [&](size_t flat) {
      std::vector<size_t> idx(sizes.size());
      for (size_t p = sizes.size(); p-- > 0;) {
        idx[p] = flat % sizes[p];
        flat /= sizes[p];
      }
      return idx;
    };
    auto values = parallel_map<two_term::Elt>(total, jobs, [&](size_t flat) {
      auto idx = indices(flat);
      std::vector<two_term::Elt> args;
      for (size_t p = 0; p < idx.size(); ++p) args.push_back(cond.kinds[p] == 'x' ? two_term::even(idx[p]) : two_term::odd(idx[p]));
      return cond.defect(ops, args);
    });
    Verdict v{cond.name, true, {}};
    for (size_t flat = 0; flat < total; ++flat) {
      if (values[flat].is_zero()) continue;
      auto idx = indices(flat);
      std::string loc = "(";
      for (size_t p = 0; p < idx.size(); ++p)
        loc += (p ? "," : "") + (cond.kinds[p] == 'x' ? d.g0.names[idx[p]] : d.gm1[idx[p]]);
      v.defects.push_back({cond.name, loc + ")", detail::elt_string(d, values[flat])});
    }
    v.holds = v.defects.empty();
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

/// The same data as a shifted op-homotopy post-Lie algebra on g0 ⊕ g−1.
inline ShiftedOpHomotopyPostLie to_shifted(const TwoTermData& d) {
  d.validate();
  for (size_t i = 0; i < d.dim0(); ++i)
    for (size_t j = 0; j < d.dim0(); ++j)
      if (d.g0.bracket(i, j) != -d.g0.bracket(j, i)) throw InputError("to_shifted: the bracket on g0 is not antisymmetric");
  const size_t n = d.dim0(), m = d.dim1();
  std::vector<BasisElement> basis;
  auto names = detail::disjoint_names(d.g0.names, d.gm1, "g0:", "g-1:");
  for (size_t i = 0; i < names.size(); ++i) basis.push_back({names[i], i < n ? 0 : -1});
  auto space = make_space(std::move(basis));
  auto lift = [&](const two_term::Elt& e) {
    Vector v = e.x;
    for (const auto& [i, c] : e.a) v.add_term(n + i, c);
    return v;
  };
  auto elt = [&](size_t i) { return i < n ? two_term::even(i) : two_term::odd(i - n); };
  two_term::Ops ops{d};
  AntiMultiMap br(space, space, 0, 2);
  AntiProducts P(space, 1, -1, 3);
  Matrix m1(n + m, n + m);
  for (size_t i = 0; i < n + m; ++i) {
    for (const auto& [r, c] : lift(ops.o1(elt(i)))) m1(r, i) = c;
    for (size_t j = i < n ? i + 1 : i; j < n + m; ++j) br.set({i, j}, lift(ops.br(elt(i), elt(j))));
  }
  P.set(std::span<const size_t>{}, m1);
  for (size_t i = 0; i < n + m; ++i) {
    Matrix m2(n + m, n + m);
    for (size_t j = 0; j < n + m; ++j)
      for (const auto& [r, c] : lift(ops.o2(elt(i), elt(j)))) m2(r, j) = c;
    P.set({i}, m2);
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      Matrix m3(n + m, n + m);
      for (size_t k = 0; k < n; ++k)
        for (const auto& [r, c] : lift(ops.o3(elt(i), elt(j), elt(k)))) m3(r, k) = c;
      P.set({i, j}, m3);
    }
  return ShiftedOpHomotopyPostLie(space, std::move(br), std::move(P));
}

/// (post-Lie algebra, representation, 3-cocycle).
struct SkeletalTriple {
  PostLieRep rep;  // rep.base is the post-Lie algebra
  Cochain cocycle;

  const PostLie& post_lie() const { return rep.base; }
  bool operator==(const SkeletalTriple&) const = default;
};

/// Post-Lie axioms, representation axioms, ω ∈ C^3_Der and δω = 0.
inline IdentityReport check_triple(const SkeletalTriple& t) {
  IdentityReport report = check_post_lie(t.rep.base);
  report.append(check_representation(t.rep));
  const auto& w = t.cocycle;
  if (w.n != 3 || w.data.dim_g != t.rep.dim_g() || w.data.dim_v != t.rep.dim_v())
    throw InputError("cocycle must be a 3-cochain on g with values in V");
  if (!report.holds()) return report;
  auto D = der_module(t.rep);
  Verdict der{"cocycle is Der-valued", cochain_space(t.rep, D, 3).coordinates(w).has_value(), {}};
  if (!der.holds) der.defects.push_back({der.name, "cocycle", "value outside Der(g,V)"});
  report.verdicts.push_back(der);
  Cochain dw = coboundary(t.rep, w);
  Verdict closed{"delta omega = 0", dw.data.value.empty(), {}};
  for (const auto& [I, mat] : dw.data.value) {
    std::string loc = "(";
    for (size_t i : I) loc += t.rep.base.alg.names[i] + ",";
    closed.defects.push_back({closed.name, loc + "-)", detail::nonzero_entries(mat)});
  }
  report.verdicts.push_back(closed);
  return report;
}

inline TwoTermData skeletal_from_triple(const SkeletalTriple& t) {
  auto rep = check_triple(t);
  for (const auto& v : rep.verdicts)
    if (!v.holds) throw ConstructionError("skeletal_from_triple: " + v.name + " fails\n" + rep.render());
  const auto& P = t.rep.base;
  return {P.alg, t.rep.module_names, t.rep.rho, Matrix(P.alg.dim(), t.rep.dim_v()), P.triangle, t.rep.mu, t.rep.nu, t.cocycle};
}

/// Extracts the triple; ρ(x)a = [x,a], μ(x)a = O2(x,a), ν(x)a = O2(a,x), ω = O3.
inline SkeletalTriple triple_from_skeletal(const TwoTermData& d) {
  d.validate();
  if (!d.skeletal()) throw InputError("triple_from_skeletal: O1 is nonzero");
  SkeletalTriple t{PostLieRep{PostLie{d.g0, d.o2}, d.gm1, d.rho, d.mu, d.nu}, d.o3};
  auto rep = check_triple(t);
  for (const auto& v : rep.verdicts)
    if (!v.holds) throw ConstructionError("triple_from_skeletal: " + v.name + " fails\n" + rep.render());
  return t;
}

}  // namespace hpl

#endif  // HPL_TWO_TERM_HPP
