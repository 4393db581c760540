#ifndef HPL_COHOMOLOGY_HPP
#define HPL_COHOMOLOGY_HPP

#include <map>
#include <string>
#include <vector>

#include "hpl/errors.hpp"
#include "hpl/linalg.hpp"
#include "hpl/parallel.hpp"
#include "hpl/postlie.hpp"
#include "hpl/report.hpp"
#include "hpl/sgla.hpp"

namespace hpl {

/// Linear map g → gl(V), one matrix per basis element of g.
struct LinearFamily {
  std::vector<Matrix> mats;

  Matrix of(const Vector& x, size_t dim_v) const {
    Matrix m(dim_v, dim_v);
    for (const auto& [a, c] : x) m += c * mats.at(a);
    return m;
  }
  bool operator==(const LinearFamily&) const = default;
};

inline LinearFamily zero_family(size_t dim_g, size_t dim_v) { return {std::vector<Matrix>(dim_g, Matrix(dim_v, dim_v))}; }

inline LinearFamily operator+(const LinearFamily& a, const LinearFamily& b) {
  LinearFamily out = a;
  for (size_t i = 0; i < out.mats.size(); ++i) out.mats[i] += b.mats.at(i);
  return out;
}
inline LinearFamily operator-(const LinearFamily& a, const LinearFamily& b) {
  LinearFamily out = a;
  for (size_t i = 0; i < out.mats.size(); ++i) out.mats[i] -= b.mats.at(i);
  return out;
}

/// Representation (ρ, μ, ν) of a post-Lie algebra on V.
struct PostLieRep {
  PostLie base;
  std::vector<std::string> module_names;
  LinearFamily rho, mu, nu;

  size_t dim_g() const { return base.alg.dim(); }
  size_t dim_v() const { return module_names.size(); }
  Matrix rho_of(const Vector& x) const { return rho.of(x, dim_v()); }
  Matrix mu_of(const Vector& x) const { return mu.of(x, dim_v()); }
  Matrix nu_of(const Vector& x) const { return nu.of(x, dim_v()); }

  void validate_shapes() const {
    for (const auto* f : {&rho, &mu, &nu}) {
      if (f->mats.size() != dim_g()) throw InputError("representation needs one operator per basis element of g");
      for (const auto& m : f->mats)
        if (m.rows() != dim_v() || m.cols() != dim_v()) throw InputError("representation operator has wrong shape");
    }
  }
  bool operator==(const PostLieRep&) const = default;
};

/// (ad, L_▷, R_▷) on g itself.
inline PostLieRep regular_rep(const PostLie& P) {
  size_t n = P.alg.dim();
  PostLieRep R{P, P.alg.names, zero_family(n, n), zero_family(n, n), zero_family(n, n)};
  for (size_t a = 0; a < n; ++a) {
    R.rho.mats[a] = P.alg.bracket.left(a);
    R.mu.mats[a] = P.triangle.left(a);
    for (size_t b = 0; b < n; ++b)
      for (const auto& [r, c] : P.triangle(b, a)) R.nu.mats[a](r, b) = c;
  }
  return R;
}

inline PostLieRep zero_rep(const PostLie& P, std::vector<std::string> module_names) {
  size_t n = P.alg.dim(), m = module_names.size();
  return {P, std::move(module_names), zero_family(n, m), zero_family(n, m), zero_family(n, m)};
}

namespace detail {

inline std::string pair_name(const std::vector<std::string>& names, size_t a, size_t b) {
  return "(" + names.at(a) + "," + names.at(b) + ")";
}

/// a followed by b; both get prefixes if a name occurs in both.
inline std::vector<std::string> disjoint_names(const std::vector<std::string>& a, const std::vector<std::string>& b,
                                               const std::string& prefix_a, const std::string& prefix_b) {
  bool collide = false;
  for (const auto& x : a)
    for (const auto& y : b) collide = collide || x == y;
  std::vector<std::string> out;
  for (const auto& x : a) out.push_back(collide ? prefix_a + x : x);
  for (const auto& y : b) out.push_back(collide ? prefix_b + y : y);
  return out;
}

inline std::string nonzero_entries(const Matrix& m) {
  std::string s;
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0) s += (s.empty() ? "" : " ") + ("[" + std::to_string(r) + "," + std::to_string(c) + "]=" + m(r, c).get_str());
  return s;
}

}  // namespace detail

/// ρ([x,y]) = [ρ(x), ρ(y)] on basis pairs.
inline Verdict check_lie_rep(const LieAlgebra& L, const LinearFamily& ops, size_t dim_v, const std::string& name) {
  Verdict v{name, true, {}};
  for (size_t a = 0; a < L.dim(); ++a)
    for (size_t b = 0; b < L.dim(); ++b) {
      Matrix d = ops.of(L.bracket(a, b), dim_v) - (ops.mats[a] * ops.mats[b] - ops.mats[b] * ops.mats[a]);
      if (!d.is_zero()) v.defects.push_back({name, detail::pair_name(L.names, a, b), detail::nonzero_entries(d)});
    }
  v.holds = v.defects.empty();
  return v;
}

inline IdentityReport check_representation(const PostLieRep& R) {
  R.validate_shapes();
  IdentityReport report;
  const auto& L = R.base.alg;
  const auto& t = R.base.triangle;
  const size_t n = R.dim_g();
  report.verdicts.push_back(check_lie_rep(L, R.rho, R.dim_v(), "rho is a Lie representation"));
  Verdict r1{"rho(x>y) = mu(x)rho(y) - rho(y)mu(x)", true, {}};
  Verdict r2{"nu([x,y]) = rho(x)nu(y) - rho(y)nu(x)", true, {}};
  Verdict r3{"mu([x,y]) = mu(x)mu(y) - mu(x>y) - mu(y)mu(x) + mu(y>x)", true, {}};
  Verdict r4{"nu(y)rho(x) = mu(x)nu(y) - nu(y)mu(x) - nu(x>y) + nu(y)nu(x)", true, {}};
  const auto &rho = R.rho.mats, &mu = R.mu.mats, &nu = R.nu.mats;
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y) {
      auto loc = detail::pair_name(L.names, x, y);
      auto push = [&](Verdict& v, const Matrix& d) {
        if (!d.is_zero()) v.defects.push_back({v.name, loc, detail::nonzero_entries(d)});
      };
      push(r1, R.rho_of(t(x, y)) - (mu[x] * rho[y] - rho[y] * mu[x]));
      push(r2, R.nu_of(L.bracket(x, y)) - (rho[x] * nu[y] - rho[y] * nu[x]));
      push(r3, R.mu_of(L.bracket(x, y)) - (mu[x] * mu[y] - R.mu_of(t(x, y)) - mu[y] * mu[x] + R.mu_of(t(y, x))));
      push(r4, nu[y] * rho[x] - (mu[x] * nu[y] - nu[y] * mu[x] - R.nu_of(t(x, y)) + nu[y] * nu[x]));
    }
  for (auto* v : {&r1, &r2, &r3, &r4}) {
    v->holds = v->defects.empty();
    report.verdicts.push_back(*v);
  }
  return report;
}

/// g ⊕ V with [x1+v1,x2+v2] = [x1,x2] + ρ(x1)v2 - ρ(x2)v1 and
/// (x1+v1)▷(x2+v2) = x1▷x2 + μ(x1)v2 + ν(x2)v1.
inline PostLie semidirect_post_lie(const PostLieRep& R) {
  auto rep = check_representation(R);
  if (!rep.holds()) throw ConstructionError("semidirect product: not a representation\n" + rep.render());
  const size_t n = R.dim_g(), m = R.dim_v();
  auto names = detail::disjoint_names(R.base.alg.names, R.module_names, "g:", "V:");
  Bilinear br(n + m), tri(n + m);
  auto lift_g = [&](const Vector& v) { return v; };
  auto lift_v = [&](const Vector& v) {
    Vector o;
    for (const auto& [i, c] : v) o.add_term(n + i, c);
    return o;
  };
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      br.set(a, b, lift_g(R.base.alg.bracket(a, b)));
      tri.set(a, b, lift_g(R.base.triangle(a, b)));
    }
    for (size_t v = 0; v < m; ++v) {
      Vector ev = Vector::basis(v);
      br.set(a, n + v, lift_v(apply_matrix(R.rho.mats[a], ev)));
      br.set(n + v, a, -lift_v(apply_matrix(R.rho.mats[a], ev)));
      tri.set(a, n + v, lift_v(apply_matrix(R.mu.mats[a], ev)));
      tri.set(n + v, a, lift_v(apply_matrix(R.nu.mats[a], ev)));
    }
  }
  return {LieAlgebra{names, br}, tri};
}

/// Lie algebra together with a representation by matrices.
struct LieRep {
  LieAlgebra alg;
  LinearFamily ops;
  size_t dim_v = 0;
};

/// (V; ρ+μ-ν) over the sub-adjacent algebra.
inline LieRep sub_adjacent_rep(const PostLieRep& R) {
  auto rep = check_representation(R);
  if (!rep.holds()) throw ConstructionError("sub_adjacent_rep: not a representation\n" + rep.render());
  LieRep out{sub_adjacent(R.base), R.rho + R.mu - R.nu, R.dim_v()};
  auto v = check_lie_rep(out.alg, out.ops, out.dim_v, "rho+mu-nu is a representation of the sub-adjacent algebra");
  if (!v.holds) throw ConsistencyError("rho+mu-nu is not a representation of the sub-adjacent algebra");
  return out;
}

/// g^C ⋉ V for a Lie representation, as a Lie algebra on g ⊕ V.
inline LieAlgebra semidirect_lie(const LieRep& R, const std::vector<std::string>& names) {
  const size_t n = R.alg.dim(), m = R.dim_v;
  Bilinear br(n + m);
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) br.set(a, b, R.alg.bracket(a, b));
    for (size_t v = 0; v < m; ++v) {
      Vector img;
      for (const auto& [i, c] : apply_matrix(R.ops.mats[a], Vector::basis(v))) img.add_term(n + i, c);
      br.set(a, n + v, img);
      br.set(n + v, a, -img);
    }
  }
  return {names, br};
}

// ---------------------------------------------------------------------------
// Der(g,V) and ρ̂.

/// f ∈ Hom(g,V) as a dim V × dim g matrix: column j is f(e_j).
inline Vector apply_hom(const Matrix& f, const Vector& x) { return apply_matrix(f, x); }

/// Basis of {f : f([x,y]) = ρ(x)f(y) - ρ(y)f(x)}.
inline std::vector<Matrix> derivation_module(const PostLieRep& R) {
  R.validate_shapes();
  const size_t n = R.dim_g(), m = R.dim_v();
  const size_t params = m * n;
  Matrix constraints(n * n * m, params);
  for (size_t p = 0; p < params; ++p) {
    Matrix E(m, n);
    E(p / n, p % n) = 1;
    size_t row = 0;
    for (size_t x = 0; x < n; ++x)
      for (size_t y = 0; y < n; ++y) {
        Vector res = apply_hom(E, R.base.alg.bracket(x, y)) - apply_matrix(R.rho.mats[x], apply_hom(E, Vector::basis(y))) +
                     apply_matrix(R.rho.mats[y], apply_hom(E, Vector::basis(x)));
        for (size_t o = 0; o < m; ++o) constraints(row + o, p) = res.coeff(o);
        row += m;
      }
  }
  std::vector<Matrix> out;
  for (const auto& sol : nullspace(constraints)) out.push_back(unflatten(sol, m, n));
  return out;
}

/// Der(g,V) with coordinates.
struct DerModule {
  std::vector<Matrix> basis;
  SubspaceBasis coords;
  size_t rows = 0, cols = 0;

  size_t dim() const { return basis.size(); }
  std::optional<DenseVector> coordinates(const Matrix& f) const { return coords.coordinates(flatten(f)); }
  Matrix combine(const DenseVector& c) const { return unflatten(coords.combine(c), rows, cols); }
};

inline DerModule der_module(const PostLieRep& R) {
  DerModule D;
  D.basis = derivation_module(R);
  D.rows = R.dim_v();
  D.cols = R.dim_g();
  std::vector<DenseVector> flat;
  for (const auto& b : D.basis) flat.push_back(flatten(b));
  D.coords = SubspaceBasis(flat, D.rows * D.cols);
  return D;
}

/// (ρ̂(x)f)(y) = μ(x)f(y) + ν(y)f(x) - f(x▷y), on an arbitrary f ∈ Hom(g,V).
inline Matrix hat_rho_apply(const PostLieRep& R, const Vector& x, const Matrix& f) {
  const size_t n = R.dim_g();
  Matrix out(R.dim_v(), n);
  Matrix mux = R.mu_of(x);
  Vector fx = apply_hom(f, x);
  for (size_t y = 0; y < n; ++y) {
    Vector ey = Vector::basis(y);
    Vector col = apply_matrix(mux, apply_hom(f, ey)) + apply_matrix(R.nu.mats[y], fx) - apply_hom(f, R.base.triangle(x, ey));
    for (const auto& [r, c] : col) out(r, y) = c;
  }
  return out;
}

/// ρ̂(e_x) in the Der(g,V) basis.
inline Matrix hat_rho(const PostLieRep& R, const DerModule& D, size_t x) {
  Matrix out(D.dim(), D.dim());
  for (size_t k = 0; k < D.dim(); ++k) {
    auto c = D.coordinates(hat_rho_apply(R, Vector::basis(x), D.basis[k]));
    if (!c) throw ConsistencyError("rho-hat leaves Der(g,V)");
    for (size_t r = 0; r < D.dim(); ++r) out(r, k) = (*c)[r];
  }
  return out;
}

inline LinearFamily hat_rho_family(const PostLieRep& R, const DerModule& D) {
  LinearFamily f;
  for (size_t x = 0; x < R.dim_g(); ++x) f.mats.push_back(hat_rho(R, D, x));
  return f;
}

// ---------------------------------------------------------------------------
// Cochains.

namespace detail {

/// Increasing subsets of {0..n-1} of size k, lexicographic.
inline std::vector<Word> subsets(size_t n, size_t k) {
  std::vector<Word> out;
  Word cur;
  auto rec = [&](auto&& self, size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Sorts an ungraded antisymmetric word: sign, or 0 when an index repeats.
inline int sort_antisymmetric(Word& w) {
  int s = 1;
  for (size_t i = 0; i < w.size(); ++i)
    for (size_t j = 0; j + 1 < w.size() - i; ++j)
      if (w[j] > w[j + 1]) {
        std::swap(w[j], w[j + 1]);
        s = -s;
      }
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == w[i + 1]) return 0;
  return s;
}

}  // namespace detail

/// Alternating (k)-form on g with values in Hom(g,V): value[I] for increasing I.
/// An n-cochain in Hom(∧^{n-1}g ⊗ g, V) is stored the same way with k = n-1,
/// the last slot being the argument of the Hom(g,V) value.
struct HomForm {
  size_t k = 0;
  size_t dim_g = 0, dim_v = 0;
  std::map<Word, Matrix> value;

  HomForm() = default;
  HomForm(size_t k_, size_t dg, size_t dv) : k(k_), dim_g(dg), dim_v(dv) {}

  Matrix at_basis(Word w) const {
    int s = detail::sort_antisymmetric(w);
    Matrix out(dim_v, dim_g);
    if (s == 0) return out;
    auto it = value.find(w);
    if (it == value.end()) return out;
    out = it->second;
    if (s < 0) out *= Rational(-1);
    return out;
  }

  Matrix at(const std::vector<Vector>& args) const {
    Matrix out(dim_v, dim_g);
    Word idx(args.size());
    auto rec = [&](auto&& self, size_t pos, const Rational& coeff) -> void {
      if (pos == args.size()) {
        out += coeff * at_basis(idx);
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

  void set(const Word& increasing, const Matrix& m) {
    if (m.is_zero())
      value.erase(increasing);
    else
      value[increasing] = m;
  }

  bool operator==(const HomForm& o) const { return k == o.k && value == o.value; }
};

/// An n-cochain ω ∈ Hom(∧^{n-1}g ⊗ g, V), evaluated slotwise.
struct Cochain {
  size_t n = 1;
  HomForm data;  // data.value[I](·, j) = ω(x_I, e_j)

  Cochain() = default;
  Cochain(size_t n_, size_t dg, size_t dv) : n(n_), data(n_ - 1, dg, dv) {}

  Vector operator()(const std::vector<Vector>& first, const Vector& last) const {
    return apply_hom(data.at(first), last);
  }
  void set_value(const Word& increasing, size_t j, const Vector& v) {
    Matrix m = data.at_basis(increasing);
    for (size_t r = 0; r < data.dim_v; ++r) m(r, j) = v.coeff(r);
    data.set(increasing, m);
  }
  bool operator==(const Cochain& o) const { return n == o.n && data == o.data; }
};

/// (Φ(ω)(x_1..x_{n-1}))x_n = ω(x_1..x_n), built by evaluating ω slot by slot.
inline HomForm phi(const Cochain& omega) {
  const auto& d = omega.data;
  HomForm out(omega.n - 1, d.dim_g, d.dim_v);
  for (const auto& I : detail::subsets(d.dim_g, omega.n - 1)) {
    std::vector<Vector> args;
    for (size_t i : I) args.push_back(Vector::basis(i));
    Matrix m(d.dim_v, d.dim_g);
    for (size_t j = 0; j < d.dim_g; ++j)
      for (const auto& [r, c] : omega(args, Vector::basis(j))) m(r, j) = c;
    out.set(I, m);
  }
  return out;
}

inline Cochain phi_inverse(const HomForm& form) {
  Cochain out(form.k + 1, form.dim_g, form.dim_v);
  for (const auto& [I, m] : form.value)
    for (size_t j = 0; j < form.dim_g; ++j) out.set_value(I, j, Vector::from_dense(m.column(j)));
  return out;
}

/// Basis of C^n_Der and coordinates in it. The basis is indexed by
/// (increasing I of size n-1, Der basis element k) in lexicographic order.
struct CochainSpace {
  size_t n = 1;
  std::vector<Word> subsets;
  const DerModule* der = nullptr;
  size_t dim_g = 0, dim_v = 0;

  size_t dim() const { return subsets.size() * der->dim(); }

  Cochain basis(size_t idx) const {
    Cochain c(n, dim_g, dim_v);
    c.data.set(subsets[idx / der->dim()], der->basis[idx % der->dim()]);
    return c;
  }

  /// Coordinates, or nullopt if some Φ(ω)(x_I) is not in Der(g,V).
  std::optional<DenseVector> coordinates(const Cochain& c) const {
    DenseVector out;
    out.reserve(dim());
    for (const auto& I : subsets) {
      auto co = der->coordinates(c.data.at_basis(I));
      if (!co) return std::nullopt;
      out.insert(out.end(), co->begin(), co->end());
    }
    return out;
  }
};

inline CochainSpace cochain_space(const PostLieRep& R, const DerModule& D, size_t n) {
  if (n < 1) throw InputError("cochains start at n = 1");
  return {n, detail::subsets(R.dim_g(), n - 1), &D, R.dim_g(), R.dim_v()};
}

/// Basis cochains of C^n_Der(g,V).
inline std::vector<Cochain> cochain_basis(const PostLieRep& R, const DerModule& D, size_t n) {
  auto cs = cochain_space(R, D, n);
  std::vector<Cochain> out;
  for (size_t i = 0; i < cs.dim(); ++i) out.push_back(cs.basis(i));
  return out;
}

/// The four-sum coboundary δ: C^n_Der → Hom(∧^n g ⊗ g, V).
inline Cochain coboundary(const PostLieRep& R, const Cochain& f) {
  const size_t n = f.n, dg = R.dim_g(), dv = R.dim_v();
  const auto& t = R.base.triangle;
  const auto& br = R.base.alg.bracket;
  Cochain out(n + 1, dg, dv);
  for (const auto& X : detail::subsets(dg, n))
    for (size_t last = 0; last < dg; ++last) {
      Vector xl = Vector::basis(last);
      auto drop = [&](std::initializer_list<size_t> skip) {
        std::vector<Vector> args;
        for (size_t p = 0; p < n; ++p) {
          bool s = false;
          for (size_t q : skip) s = s || q == p;
          if (!s) args.push_back(Vector::basis(X[p]));
        }
        return args;
      };
      Vector val;
      for (size_t i = 0; i < n; ++i) {
        Rational s = sign_power(static_cast<long>(i));  // (-1)^{i+1} with 1-based i
        Vector xi = Vector::basis(X[i]);
        auto rest = drop({i});
        val += s * apply_matrix(R.mu.mats[X[i]], f(rest, xl));
        val += s * apply_matrix(R.nu.mats[last], f(rest, xi));
        val -= s * f(rest, t(xi, xl));
      }
      for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
          Vector xi = Vector::basis(X[i]), xj = Vector::basis(X[j]);
          Vector c = t(xi, xj) - t(xj, xi) + br(xi, xj);
          auto args = drop({i, j});
          args.insert(args.begin(), c);
          val += Rational(sign_power(static_cast<long>(i + j))) * f(args, xl);
        }
      out.set_value(X, last, val);
    }
  return out;
}

/// Matrix of δ_n: C^n_Der → C^{n+1}_Der in the cochain bases.
inline Matrix coboundary_matrix(const PostLieRep& R, const DerModule& D, size_t n, int jobs = 1) {
  auto src = cochain_space(R, D, n), dst = cochain_space(R, D, n + 1);
  auto cols = parallel_map<DenseVector>(src.dim(), jobs, [&](size_t k) {
    auto c = dst.coordinates(coboundary(R, src.basis(k)));
    if (!c) throw ConsistencyError("coboundary leaves the Der-valued cochains");
    return *c;
  });
  Matrix m(dst.dim(), src.dim());
  for (size_t k = 0; k < cols.size(); ++k)
    for (size_t r = 0; r < dst.dim(); ++r) m(r, k) = cols[k][r];
  return m;
}

inline size_t cohomology_dim(const PostLieRep& R, size_t n, int jobs = 1) {
  if (n < 1) throw InputError("cohomology starts at n = 1");
  auto D = der_module(R);
  size_t dimC = cochain_space(R, D, n).dim();
  size_t out_rank = bareiss_rank(coboundary_matrix(R, D, n, jobs));
  size_t in_rank = n >= 2 ? bareiss_rank(coboundary_matrix(R, D, n - 1, jobs)) : 0;
  return dimC - out_rank - in_rank;
}

// ---------------------------------------------------------------------------
// Chevalley-Eilenberg side: g^C acting on Der(g,V) by ρ̂.

/// dφ(x_1..x_{m+1}) = Σ (-1)^{i+1} ρ̂(x_i)φ(..x̂_i..) + Σ_{i<j} (-1)^{i+j} φ([x_i,x_j]_C, ..x̂_i..x̂_j..)
/// for Hom(g,V)-valued forms whose values lie in Der(g,V).
inline HomForm ce_differential(const PostLieRep& R, const DerModule& D, const LinearFamily& hat, const HomForm& phi_form) {
  const size_t dg = R.dim_g(), dv = R.dim_v(), m = phi_form.k;
  LieAlgebra C{R.base.alg.names, R.base.triangle.antisymmetrised() + R.base.alg.bracket};
  HomForm out(m + 1, dg, dv);
  for (const auto& X : detail::subsets(dg, m + 1)) {
    auto drop = [&](std::initializer_list<size_t> skip) {
      std::vector<Vector> args;
      for (size_t p = 0; p <= m; ++p) {
        bool s = false;
        for (size_t q : skip) s = s || q == p;
        if (!s) args.push_back(Vector::basis(X[p]));
      }
      return args;
    };
    Matrix val(dv, dg);
    for (size_t i = 0; i <= m; ++i) {
      Matrix inner = phi_form.at(drop({i}));
      auto c = D.coordinates(inner);
      if (!c) throw InputError("form value is not in Der(g,V)");
      Matrix acted = D.combine(hat.mats[X[i]].apply(*c));
      acted *= Rational(sign_power(static_cast<long>(i)));
      val += acted;
    }
    for (size_t i = 0; i <= m; ++i)
      for (size_t j = i + 1; j <= m; ++j) {
        auto args = drop({i, j});
        args.insert(args.begin(), C.bracket(X[i], X[j]));
        Matrix term = phi_form.at(args);
        term *= Rational(sign_power(static_cast<long>(i + j)));
        val += term;
      }
    out.set(X, val);
  }
  return out;
}

/// Coordinates of a Der-valued m-form: (increasing I, Der coordinate).
inline std::optional<DenseVector> form_coordinates(const DerModule& D, const HomForm& f) {
  DenseVector out;
  for (const auto& I : detail::subsets(f.dim_g, f.k)) {
    auto c = D.coordinates(f.at_basis(I));
    if (!c) return std::nullopt;
    out.insert(out.end(), c->begin(), c->end());
  }
  return out;
}

inline Matrix ce_matrix(const PostLieRep& R, const DerModule& D, const LinearFamily& hat, size_t m) {
  auto src = detail::subsets(R.dim_g(), m);
  auto dst_dim = detail::subsets(R.dim_g(), m + 1).size() * D.dim();
  Matrix out(dst_dim, src.size() * D.dim());
  for (size_t s = 0; s < src.size(); ++s)
    for (size_t k = 0; k < D.dim(); ++k) {
      HomForm f(m, R.dim_g(), R.dim_v());
      f.set(src[s], D.basis[k]);
      auto c = form_coordinates(D, ce_differential(R, D, hat, f));
      if (!c) throw ConsistencyError("Chevalley-Eilenberg differential leaves Der(g,V)");
      for (size_t r = 0; r < dst_dim; ++r) out(r, s * D.dim() + k) = (*c)[r];
    }
  return out;
}

/// H^m(g^C, Der(g,V)).
inline size_t ce_cohomology_dim(const PostLieRep& R, const DerModule& D, const LinearFamily& hat, size_t m) {
  size_t dimC = detail::subsets(R.dim_g(), m).size() * D.dim();
  size_t out_rank = bareiss_rank(ce_matrix(R, D, hat, m));
  size_t in_rank = m >= 1 ? bareiss_rank(ce_matrix(R, D, hat, m - 1)) : 0;
  return dimC - out_rank - in_rank;
}

/// Φ∘δ = d_ρ̂∘Φ on every basis cochain of C^k_Der for k <= n, d_ρ̂² = 0, δ² = 0,
/// ρ̂ is a representation of g^C, and dim H^n(g,V) = dim H^{n-1}(g^C, Der(g,V)).
inline IdentityReport check_iso_with_subadjacent(const PostLieRep& R, size_t n, int jobs = 1) {
  if (n < 1) throw InputError("n must be at least 1");
  auto rep = check_representation(R);
  if (!rep.holds()) throw ConstructionError("not a representation\n" + rep.render());
  IdentityReport report;
  auto D = der_module(R);
  auto hat = hat_rho_family(R, D);
  LieAlgebra C{R.base.alg.names, R.base.triangle.antisymmetrised() + R.base.alg.bracket};
  report.verdicts.push_back(check_lie_rep(C, hat, D.dim(), "rho-hat is a representation of the sub-adjacent algebra"));
  for (size_t k = 1; k <= n; ++k) {
    Verdict chain{"Phi(delta f) = d(Phi f) n=" + std::to_string(k), true, {}};
    auto basis = cochain_basis(R, D, k);
    auto results = parallel_map<std::string>(basis.size(), jobs, [&](size_t i) -> std::string {
      HomForm lhs = phi(coboundary(R, basis[i]));
      HomForm rhs = ce_differential(R, D, hat, phi(basis[i]));
      return lhs == rhs ? std::string() : std::string("mismatch");
    });
    for (size_t i = 0; i < results.size(); ++i)
      if (!results[i].empty()) chain.defects.push_back({chain.name, "basis cochain " + std::to_string(i), results[i]});
    chain.holds = chain.defects.empty();
    report.verdicts.push_back(chain);

    Matrix dk = coboundary_matrix(R, D, k, jobs), dk1 = coboundary_matrix(R, D, k + 1, jobs);
    Verdict sq{"delta o delta = 0 n=" + std::to_string(k), (dk1 * dk).is_zero(), {}};
    if (!sq.holds) sq.defects.push_back({sq.name, "matrix", detail::nonzero_entries(dk1 * dk)});
    report.verdicts.push_back(sq);
    Matrix ek = ce_matrix(R, D, hat, k - 1), ek1 = ce_matrix(R, D, hat, k);
    Verdict ce{"d o d = 0 m=" + std::to_string(k - 1), (ek1 * ek).is_zero(), {}};
    if (!ce.holds) ce.defects.push_back({ce.name, "matrix", detail::nonzero_entries(ek1 * ek)});
    report.verdicts.push_back(ce);
  }
  size_t lhs = cohomology_dim(R, n, jobs), rhs = ce_cohomology_dim(R, D, hat, n - 1);
  Verdict dims{"dim H^" + std::to_string(n) + " = dim H^" + std::to_string(n - 1) + "(sub-adjacent, Der)", lhs == rhs, {}};
  if (!dims.holds) dims.defects.push_back({dims.name, "dimensions", std::to_string(lhs) + " vs " + std::to_string(rhs)});
  report.verdicts.push_back(dims);
  return report;
}

}  // namespace hpl

#endif  // HPL_COHOMOLOGY_HPP
