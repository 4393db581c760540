#ifndef HPL_SGLA_HPP
#define HPL_SGLA_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hpl/errors.hpp"
#include "hpl/graded_space.hpp"
#include "hpl/linalg.hpp"
#include "hpl/multimap.hpp"
#include "hpl/report.hpp"

namespace hpl {

// ---------------------------------------------------------------------------
// Endomorphism matrices of a graded space. M(r, c) is the coefficient of e_r
// in M e_c.

inline Vector apply_matrix(const Matrix& m, const Vector& v) {
  Vector out;
  for (const auto& [c, x] : v)
    for (size_t r = 0; r < m.rows(); ++r)
      if (m(r, c) != 0) out.add_term(r, m(r, c) * x);
  return out;
}

/// Degree of a nonzero homogeneous map between graded spaces; nullopt for the
/// zero map. Throws for inhomogeneous maps.
inline std::optional<int> matrix_degree(const Matrix& m, const GradedSpace& from, const GradedSpace& to) {
  std::optional<int> d;
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0) {
        int dd = to.degree(r) - from.degree(c);
        if (d && *d != dd) throw InputError("inhomogeneous linear map");
        d = dd;
      }
  return d;
}

inline bool has_degree(const Matrix& m, const GradedSpace& from, const GradedSpace& to, int n) {
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0 && to.degree(r) - from.degree(c) != n) return false;
  return true;
}

inline DenseVector flatten(const Matrix& m) {
  DenseVector v;
  v.reserve(m.rows() * m.cols());
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
  return v;
}

inline Matrix unflatten(const DenseVector& v, size_t rows, size_t cols) {
  Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) m(r, c) = v[r * cols + c];
  return m;
}

/// Graded commutator fg - (-1)^{|f||g|} gf.
inline Matrix graded_commutator(const Matrix& f, int df, const Matrix& g, int dg) {
  Matrix out = f * g;
  if ((df * dg) & 1)
    out += g * f;
  else
    out -= g * f;
  return out;
}

// ---------------------------------------------------------------------------

/// Symmetric graded Lie algebra: a graded space with a degree-1 graded
/// symmetric bracket satisfying the graded Leibniz rule.
class SgLa {
 public:
  SgLa() = default;
  explicit SgLa(SymMultiMap bracket) : bracket_(std::move(bracket)) {
    if (!same_space(bracket_.source(), bracket_.target())) throw InputError("sgLa bracket must be an endomorphism map");
    if (bracket_.degree() != 1) throw InputError("sgLa bracket must have degree 1");
    for (const auto& [a, comp] : bracket_.components())
      if (a != 2) throw InputError("sgLa bracket must be purely binary");
  }

  static SgLa abelian(SpacePtr space) { return SgLa(SymMultiMap(space, space, 1, 2)); }

  const SpacePtr& space() const { return bracket_.source(); }
  const SymMultiMap& bracket_map() const { return bracket_; }
  bool is_abelian() const { return bracket_.is_zero(); }

  Vector bracket(const Vector& x, const Vector& y) const { return bracket_.evaluate({x, y}); }
  Vector bracket(size_t i, size_t j) const { return bracket_.evaluate_basis(std::vector<size_t>{i, j}); }

  /// [e_b, ·] as a matrix.
  Matrix ad(size_t b) const {
    size_t n = space()->dim();
    Matrix m(n, n);
    for (size_t c = 0; c < n; ++c)
      for (const auto& [r, x] : bracket(b, c)) m(r, c) = x;
    return m;
  }

  /// Same space, bracket scaled by s.
  SgLa scaled(const Rational& s) const {
    SymMultiMap b = bracket_;
    b *= s;
    return SgLa(std::move(b));
  }

 private:
  SymMultiMap bracket_;
};

/// Graded Leibniz rule on every ordered basis triple:
/// [x,[y,z]] = (-1)^{x+1}[[x,y],z] + (-1)^{(x+1)(y+1)}[y,[x,z]].
inline IdentityReport check_sgla(const SymMultiMap& bracket) {
  IdentityReport report;
  Verdict shape{"bracket is binary of degree 1", true, {}};
  if (bracket.degree() != 1 || !same_space(bracket.source(), bracket.target())) shape.holds = false;
  for (const auto& [a, comp] : bracket.components())
    if (a != 2) {
      shape.holds = false;
      shape.defects.push_back({"arity", std::to_string(a), "nonzero component"});
    }
  report.verdicts.push_back(shape);
  if (!shape.holds) return report;
  const auto& v = *bracket.source();
  auto br = [&](const Vector& x, const Vector& y) { return bracket.evaluate({x, y}); };
  Verdict leib{"graded Leibniz rule", true, {}};
  for (size_t x = 0; x < v.dim(); ++x)
    for (size_t y = 0; y < v.dim(); ++y)
      for (size_t z = 0; z < v.dim(); ++z) {
        int dx = v.degree(x), dy = v.degree(y);
        Vector ex = Vector::basis(x), ey = Vector::basis(y), ez = Vector::basis(z);
        Vector res = br(ex, br(ey, ez));
        res -= Rational(sign_power(dx + 1)) * br(br(ex, ey), ez);
        res -= Rational(sign_power((dx + 1) * (dy + 1))) * br(ey, br(ex, ez));
        if (!res.is_zero())
          leib.defects.push_back({"Leibniz", "(" + v.name(x) + "," + v.name(y) + "," + v.name(z) + ")", res.to_string(v)});
      }
  leib.holds = leib.defects.empty();
  report.verdicts.push_back(std::move(leib));
  return report;
}

inline IdentityReport check_sgla(const SgLa& g) { return check_sgla(g.bracket_map()); }

// ---------------------------------------------------------------------------
// Ungraded Lie algebras, stored by left multiplication operators.

/// Bilinear product on one space: left[a](c, b) = coefficient of e_c in e_a·e_b.
class Bilinear {
 public:
  Bilinear() = default;
  explicit Bilinear(size_t dim) : left_(dim, Matrix(dim, dim)) {}

  size_t dim() const { return left_.size(); }
  Matrix& left(size_t a) { return left_.at(a); }
  const Matrix& left(size_t a) const { return left_.at(a); }

  Vector operator()(const Vector& x, const Vector& y) const {
    Vector out;
    for (const auto& [a, xa] : x) {
      Vector part = apply_matrix(left_.at(a), y);
      out += xa * part;
    }
    return out;
  }
  Vector operator()(size_t a, size_t b) const { return apply_matrix(left_.at(a), Vector::basis(b)); }

  void set(size_t a, size_t b, const Vector& value) {
    for (size_t c = 0; c < dim(); ++c) left_.at(a)(c, b) = value.coeff(c);
  }

  /// Left multiplication by an arbitrary vector.
  Matrix left_of(const Vector& x) const {
    Matrix m(dim(), dim());
    for (const auto& [a, xa] : x) m += xa * left_.at(a);
    return m;
  }

  /// x·y - y·x
  Bilinear antisymmetrised() const {
    Bilinear out(dim());
    for (size_t a = 0; a < dim(); ++a)
      for (size_t b = 0; b < dim(); ++b) out.set(a, b, (*this)(a, b) - (*this)(b, a));
    return out;
  }

  bool is_zero() const {
    for (const auto& m : left_)
      if (!m.is_zero()) return false;
    return true;
  }

  Bilinear& operator+=(const Bilinear& o) {
    for (size_t a = 0; a < dim(); ++a) left_[a] += o.left_.at(a);
    return *this;
  }
  friend Bilinear operator+(Bilinear a, const Bilinear& b) { return a += b; }
  bool operator==(const Bilinear&) const = default;

 private:
  std::vector<Matrix> left_;
};

struct LieAlgebra {
  std::vector<std::string> names;
  Bilinear bracket;

  size_t dim() const { return names.size(); }
  static LieAlgebra abelian(std::vector<std::string> names) {
    size_t n = names.size();
    return {std::move(names), Bilinear(n)};
  }
  bool operator==(const LieAlgebra&) const = default;
};

inline std::string tuple_name(const std::vector<std::string>& names, std::initializer_list<size_t> idx) {
  std::string s = "(";
  bool first = true;
  for (size_t i : idx) {
    if (!first) s += ",";
    first = false;
    s += names.at(i);
  }
  return s + ")";
}

inline std::string vector_string(const Vector& v, const std::vector<std::string>& names) {
  if (v.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [i, c] : v) {
    if (!first) out += " + ";
    first = false;
    out += "(" + c.get_str() + ")*" + names.at(i);
  }
  return out;
}

inline IdentityReport check_lie(const LieAlgebra& L) {
  IdentityReport report;
  Verdict anti{"antisymmetry", true, {}};
  Verdict jac{"Jacobi identity", true, {}};
  size_t n = L.dim();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      Vector r = L.bracket(a, b) + L.bracket(b, a);
      if (!r.is_zero()) anti.defects.push_back({"[x,y]+[y,x]", tuple_name(L.names, {a, b}), vector_string(r, L.names)});
      for (size_t c = 0; c < n; ++c) {
        Vector ea = Vector::basis(a), eb = Vector::basis(b), ec = Vector::basis(c);
        Vector j = L.bracket(ea, L.bracket(eb, ec)) + L.bracket(eb, L.bracket(ec, ea)) + L.bracket(ec, L.bracket(ea, eb));
        if (!j.is_zero()) jac.defects.push_back({"Jacobi", tuple_name(L.names, {a, b, c}), vector_string(j, L.names)});
      }
    }
  anti.holds = anti.defects.empty();
  jac.holds = jac.defects.empty();
  report.verdicts = {anti, jac};
  return report;
}

/// A Lie algebra as an sgLa concentrated in degree -1, same structure constants.
inline SgLa lie_as_sgla(const LieAlgebra& L, DegreeWindow window = {}) {
  if (!check_lie(L).holds()) throw ConstructionError("not a Lie algebra:\n" + check_lie(L).render());
  std::vector<BasisElement> b;
  for (const auto& n : L.names) b.push_back({n, -1});
  auto v = make_space(std::move(b), window);
  SymMultiMap br(v, v, 1, 2);
  for (size_t a = 0; a < L.dim(); ++a)
    for (size_t c = a + 1; c < L.dim(); ++c) {
      Vector x = L.bracket(a, c);
      if (!x.is_zero()) br.set({a, c}, x);
    }
  return SgLa(std::move(br));
}

/// Structure constants of an sgLa concentrated in degree -1.
inline LieAlgebra structure_constants(const SgLa& g) {
  const auto& v = *g.space();
  LieAlgebra L;
  for (size_t i = 0; i < v.dim(); ++i) {
    if (v.degree(i) != -1) throw InputError("structure_constants: sgLa not concentrated in degree -1");
    L.names.push_back(v.name(i));
  }
  L.bracket = Bilinear(v.dim());
  for (size_t a = 0; a < v.dim(); ++a)
    for (size_t b = 0; b < v.dim(); ++b) L.bracket.set(a, b, g.bracket(a, b));
  return L;
}

// ---------------------------------------------------------------------------

/// ρ : g ⊗ h → h of degree 1, stored as ρ(e_b) for each basis element of g.
class ActionMap {
 public:
  ActionMap() = default;
  ActionMap(SpacePtr g, SpacePtr h, std::vector<Matrix> ops) : g_(std::move(g)), h_(std::move(h)), ops_(std::move(ops)) {
    if (ops_.size() != g_->dim()) throw InputError("action needs one operator per basis element of the source");
    for (size_t b = 0; b < ops_.size(); ++b) {
      if (ops_[b].rows() != h_->dim() || ops_[b].cols() != h_->dim()) throw InputError("action operator has wrong shape");
      if (!has_degree(ops_[b], *h_, *h_, g_->degree(b) + 1))
        throw InputError("action operator of '" + g_->name(b) + "' does not have degree |x|+1");
    }
  }

  static ActionMap zero(SpacePtr g, SpacePtr h) {
    std::vector<Matrix> ops(g->dim(), Matrix(h->dim(), h->dim()));
    return ActionMap(g, h, std::move(ops));
  }

  const SpacePtr& source() const { return g_; }
  const SpacePtr& target() const { return h_; }
  const Matrix& op(size_t b) const { return ops_.at(b); }
  const std::vector<Matrix>& ops() const { return ops_; }

  Matrix op(const Vector& x) const {
    Matrix m(h_->dim(), h_->dim());
    for (const auto& [b, c] : x) m += c * ops_.at(b);
    return m;
  }
  Vector apply(const Vector& x, const Vector& v) const {
    Vector out;
    for (const auto& [b, c] : x) {
      Vector part = apply_matrix(ops_.at(b), v);
      out += c * part;
    }
    return out;
  }

 private:
  SpacePtr g_, h_;
  std::vector<Matrix> ops_;
};

inline ActionMap adjoint_action(const SgLa& g) {
  std::vector<Matrix> ops;
  for (size_t b = 0; b < g.space()->dim(); ++b) ops.push_back(g.ad(b));
  return ActionMap(g.space(), g.space(), std::move(ops));
}

/// D[y,z] = (-1)^n [Dy,z] + (-1)^{n(y+1)} [y,Dz] on all basis pairs.
inline Vector derivation_residual(const Matrix& D, int n, const SgLa& h, size_t y, size_t z) {
  const auto& v = *h.space();
  Vector ey = Vector::basis(y), ez = Vector::basis(z);
  Vector res = apply_matrix(D, h.bracket(y, z));
  res -= Rational(sign_power(n)) * h.bracket(apply_matrix(D, ey), ez);
  res -= Rational(sign_power(n * (v.degree(y) + 1))) * h.bracket(ey, apply_matrix(D, ez));
  return res;
}

inline bool check_derivation(const Matrix& D, int n, const SgLa& h) {
  const auto& v = *h.space();
  if (!has_degree(D, v, v, n)) return false;
  for (size_t y = 0; y < v.dim(); ++y)
    for (size_t z = 0; z < v.dim(); ++z)
      if (!derivation_residual(D, n, h, y, z).is_zero()) return false;
  return true;
}

inline bool check_derivation(const SymMultiMap& D, const SgLa& h) {
  size_t n = h.space()->dim();
  Matrix m(n, n);
  for (const auto& [a, comp] : D.components()) {
    if (a != 1) throw InputError("derivation must be a unary map");
    for (const auto& [w, val] : comp)
      for (const auto& [r, c] : val) m(r, w[0]) = c;
  }
  return check_derivation(m, D.degree(), h);
}

/// s^{-1}ρ is a morphism of sgLas and every ρ(x) is a derivation of degree |x|+1.
inline IdentityReport check_action(const SgLa& g, const SgLa& h, const ActionMap& rho) {
  IdentityReport report;
  if (!same_space(rho.source(), g.space()) || !same_space(rho.target(), h.space()))
    throw InputError("action spaces do not match the algebras");
  const auto& gs = *g.space();
  const auto& hs = *h.space();
  Verdict der{"action by derivations", true, {}};
  for (size_t b = 0; b < gs.dim(); ++b) {
    int n = gs.degree(b) + 1;
    for (size_t y = 0; y < hs.dim(); ++y)
      for (size_t z = 0; z < hs.dim(); ++z) {
        Vector r = derivation_residual(rho.op(b), n, h, y, z);
        if (!r.is_zero())
          der.defects.push_back({"rho(x) derivation", "(" + gs.name(b) + ";" + hs.name(y) + "," + hs.name(z) + ")", r.to_string(hs)});
      }
  }
  der.holds = der.defects.empty();
  Verdict hom{"s^{-1}rho is a morphism", true, {}};
  for (size_t x = 0; x < gs.dim(); ++x)
    for (size_t y = 0; y < gs.dim(); ++y) {
      int dx = gs.degree(x), dy = gs.degree(y);
      Matrix lhs = rho.op(g.bracket(x, y));
      Matrix rhs = graded_commutator(rho.op(x), dx + 1, rho.op(y), dy + 1);
      rhs *= Rational(sign_power(dx + 1));
      Matrix diff = lhs - rhs;
      if (!diff.is_zero()) hom.defects.push_back({"rho([x,y]) vs [rho x, rho y]", "(" + gs.name(x) + "," + gs.name(y) + ")", "nonzero operator"});
    }
  hom.holds = hom.defects.empty();
  report.verdicts = {der, hom};
  return report;
}

/// Layout of g ⊕ h with g first. Names are prefixed only on collision.
struct SumLayout {
  SpacePtr sum;
  size_t g_dim = 0;
  size_t h_dim = 0;
  size_t g_index(size_t i) const { return i; }
  size_t h_index(size_t i) const { return g_dim + i; }
};

inline SumLayout sum_layout(const GradedSpace& g, const GradedSpace& h) {
  bool collide = false;
  for (const auto& e : h.basis())
    if (g.find(e.name)) collide = true;
  SumLayout L;
  L.sum = collide ? direct_sum(g, h, "g:", "h:") : direct_sum(g, h, "", "");
  L.g_dim = g.dim();
  L.h_dim = h.dim();
  return L;
}

/// g ⋉ h: [x1+v1, x2+v2] = [x1,x2] + ρ(x1)v2 ± ρ(x2)v1 + [v1,v2]_h. The
/// symmetric storage supplies the Koszul sign for the ρ(x2)v1 term. Pass an
/// abelian h for the semidirect product with a module.
inline SgLa semidirect(const SgLa& g, const SgLa& h, const ActionMap& rho) {
  auto rep = check_action(g, h, rho);
  if (!rep.holds()) throw ConstructionError("semidirect: not an action\n" + rep.render());
  auto L = sum_layout(*g.space(), *h.space());
  SymMultiMap br(L.sum, L.sum, 1, 2);
  auto embed_g = [&](const Vector& v) {
    Vector o;
    for (const auto& [i, c] : v) o.add_term(L.g_index(i), c);
    return o;
  };
  auto embed_h = [&](const Vector& v) {
    Vector o;
    for (const auto& [i, c] : v) o.add_term(L.h_index(i), c);
    return o;
  };
  for (const auto& w : canonical_words(*g.space(), 2)) br.set({L.g_index(w[0]), L.g_index(w[1])}, embed_g(g.bracket(w[0], w[1])));
  for (const auto& w : canonical_words(*h.space(), 2)) br.set({L.h_index(w[0]), L.h_index(w[1])}, embed_h(h.bracket(w[0], w[1])));
  for (size_t x = 0; x < L.g_dim; ++x)
    for (size_t v = 0; v < L.h_dim; ++v)
      br.set({L.g_index(x), L.h_index(v)}, embed_h(apply_matrix(rho.op(x), Vector::basis(v))));
  return SgLa(std::move(br));
}

/// Basis of degree-n derivations of h (as matrices), from the nullspace of
/// the linear constraints.
inline std::vector<Matrix> derivation_basis(const SgLa& h, int n) {
  const auto& v = *h.space();
  size_t d = v.dim();
  std::vector<std::pair<size_t, size_t>> params;
  for (size_t r = 0; r < d; ++r)
    for (size_t c = 0; c < d; ++c)
      if (v.degree(r) - v.degree(c) == n) params.emplace_back(r, c);
  if (params.empty()) return {};
  Matrix constraints(d * d * d, params.size());
  for (size_t k = 0; k < params.size(); ++k) {
    Matrix E(d, d);
    E(params[k].first, params[k].second) = 1;
    size_t row = 0;
    for (size_t y = 0; y < d; ++y)
      for (size_t z = 0; z < d; ++z) {
        Vector res = derivation_residual(E, n, h, y, z);
        for (size_t o = 0; o < d; ++o) constraints(row + o, k) = res.coeff(o);
        row += d;
      }
  }
  std::vector<Matrix> out;
  for (const auto& sol : nullspace(constraints)) {
    Matrix D(d, d);
    for (size_t k = 0; k < params.size(); ++k) D(params[k].first, params[k].second) = sol[k];
    out.push_back(std::move(D));
  }
  return out;
}

/// An sgLa whose basis is a family of homogeneous endomorphisms of V closed
/// under the graded commutator, placed one degree lower:
/// [s^{-1}f, s^{-1}g] = (-1)^{|f|} s^{-1}[f,g]. The action on V is ρ = s.
struct DesuspendedMaps {
  SgLa alg;
  std::vector<Matrix> maps;
  std::vector<int> map_degrees;
  SubspaceBasis coords;
  ActionMap action;

  /// Coordinates of an endomorphism in the basis, nullopt if outside the span.
  std::optional<DenseVector> coordinates(const Matrix& m) const { return coords.coordinates(flatten(m)); }

  Vector as_element(const Matrix& m) const {
    auto c = coordinates(m);
    if (!c) throw InputError("operator is not in the span of the basis maps");
    return Vector::from_dense(*c);
  }
};

inline DesuspendedMaps desuspended_maps(const GradedSpace& V, std::vector<Matrix> maps, const std::string& prefix,
                                        DegreeWindow window = {-16, 16}) {
  DesuspendedMaps out;
  std::vector<BasisElement> basis;
  std::vector<DenseVector> flat;
  for (size_t k = 0; k < maps.size(); ++k) {
    auto d = matrix_degree(maps[k], V, V);
    if (!d) throw InputError("zero map in basis");
    out.map_degrees.push_back(*d);
    basis.push_back({prefix + std::to_string(k + 1), *d - 1});
    flat.push_back(flatten(maps[k]));
  }
  size_t amb = V.dim() * V.dim();
  out.coords = SubspaceBasis(flat, amb);
  auto space = make_space(std::move(basis), window);
  SymMultiMap br(space, space, 1, 2);
  for (const auto& w : canonical_words(*space, 2)) {
    int df = out.map_degrees[w[0]], dg = out.map_degrees[w[1]];
    Matrix c = graded_commutator(maps[w[0]], df, maps[w[1]], dg);
    c *= Rational(sign_power(df));
    auto co = out.coords.coordinates(flatten(c));
    if (!co) throw ConstructionError("maps are not closed under the graded commutator");
    Vector val = Vector::from_dense(*co);
    if (!val.is_zero()) br.set(w, val);
  }
  out.maps = maps;
  out.alg = SgLa(std::move(br));
  auto vs = std::make_shared<const GradedSpace>(V);
  out.action = ActionMap(space, vs, maps);
  return out;
}

/// s^{-1}Der(h), with every derivation degree that can occur.
inline DesuspendedMaps desuspended_derivations(const SgLa& h) {
  auto degs = h.space()->degrees();
  std::vector<Matrix> all;
  if (!degs.empty())
    for (int n = degs.front() - degs.back(); n <= degs.back() - degs.front(); ++n)
      for (auto& D : derivation_basis(h, n)) all.push_back(std::move(D));
  return desuspended_maps(*h.space(), std::move(all), "D");
}

/// s^{-1}gl(V) on elementary matrices.
inline DesuspendedMaps desuspended_endomorphisms(const GradedSpace& V) {
  std::vector<Matrix> all;
  for (size_t r = 0; r < V.dim(); ++r)
    for (size_t c = 0; c < V.dim(); ++c) {
      Matrix E(V.dim(), V.dim());
      E(r, c) = 1;
      all.push_back(std::move(E));
    }
  return desuspended_maps(V, std::move(all), "E");
}

}  // namespace hpl

#endif  // HPL_SGLA_HPP
