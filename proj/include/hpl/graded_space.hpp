#ifndef HPL_GRADED_SPACE_HPP
#define HPL_GRADED_SPACE_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hpl/errors.hpp"
#include "hpl/rational.hpp"

namespace hpl {

struct BasisElement {
  std::string name;
  int degree = 0;
  bool operator==(const BasisElement&) const = default;
};

/// Degrees a space is allowed to occupy. Suspension moves the window along.
struct DegreeWindow {
  int min = -8;
  int max = 8;
  bool operator==(const DegreeWindow&) const = default;
};

/// Finite-dimensional Z-graded vector space with a named homogeneous basis.
class GradedSpace {
 public:
  GradedSpace() = default;

  explicit GradedSpace(std::vector<BasisElement> basis, DegreeWindow window = {})
      : basis_(std::move(basis)), window_(window) {
    if (window_.min > window_.max) throw InputError("empty degree window");
    for (size_t i = 0; i < basis_.size(); ++i) {
      const auto& b = basis_[i];
      if (b.name.empty()) throw InputError("empty basis name");
      if (b.degree < window_.min || b.degree > window_.max)
        throw InputError("degree of '" + b.name + "' outside the degree window");
      if (!index_.emplace(b.name, i).second)
        throw InputError("duplicate basis name '" + b.name + "'");
    }
  }

  size_t dim() const { return basis_.size(); }
  int degree(size_t i) const { return basis_.at(i).degree; }
  const std::string& name(size_t i) const { return basis_.at(i).name; }
  const std::vector<BasisElement>& basis() const { return basis_; }
  const DegreeWindow& window() const { return window_; }

  std::optional<size_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  size_t index_of(const std::string& name) const {
    auto i = find(name);
    if (!i) throw InputError("unknown basis element '" + name + "'");
    return *i;
  }

  bool has_degree(int d) const {
    for (const auto& b : basis_)
      if (b.degree == d) return true;
    return false;
  }

  std::vector<size_t> indices_of_degree(int d) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i].degree == d) out.push_back(i);
    return out;
  }

  /// Distinct degrees present, ascending.
  std::vector<int> degrees() const {
    std::map<int, int> seen;
    for (const auto& b : basis_) seen[b.degree] = 1;
    std::vector<int> out;
    for (auto& [d, _] : seen) out.push_back(d);
    return out;
  }

  /// Degree shift by k: (shifted)^i = V^{i+k}, so every basis degree drops by k.
  /// Names are kept.
  GradedSpace shifted_down(int k) const {
    std::vector<BasisElement> b = basis_;
    for (auto& e : b) e.degree -= k;
    return GradedSpace(std::move(b), DegreeWindow{window_.min - k, window_.max - k});
  }
  /// sV: degrees go up by one.
  GradedSpace suspended() const { return shifted_down(-1); }
  /// s^{-1}V: degrees go down by one.
  GradedSpace desuspended() const { return shifted_down(1); }

  bool operator==(const GradedSpace& o) const { return basis_ == o.basis_; }

 private:
  std::vector<BasisElement> basis_;
  DegreeWindow window_;
  std::unordered_map<std::string, size_t> index_;
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

inline SpacePtr make_space(std::vector<BasisElement> basis, DegreeWindow window = {}) {
  return std::make_shared<const GradedSpace>(std::move(basis), window);
}

inline bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

/// a ⊕ b, with a's basis first. Names get the given prefixes.
inline SpacePtr direct_sum(const GradedSpace& a, const GradedSpace& b,
                           const std::string& prefix_a, const std::string& prefix_b) {
  std::vector<BasisElement> basis;
  for (const auto& e : a.basis()) basis.push_back({prefix_a + e.name, e.degree});
  for (const auto& e : b.basis()) basis.push_back({prefix_b + e.name, e.degree});
  DegreeWindow w{std::min(a.window().min, b.window().min),
                 std::max(a.window().max, b.window().max)};
  return make_space(std::move(basis), w);
}

/// Sparse vector in a graded space, indexed by basis position.
class Vector {
 public:
  Vector() = default;

  static Vector basis(size_t i, Rational c = 1) {
    Vector v;
    v.add_term(i, c);
    return v;
  }

  Rational coeff(size_t i) const {
    auto it = terms_.find(i);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(size_t i, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(i, c);
    if (inserted) it->second.canonicalize();
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  bool is_zero() const { return terms_.empty(); }
  size_t support_size() const { return terms_.size(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  Vector& operator+=(const Vector& o) {
    for (const auto& [i, c] : o.terms_) add_term(i, c);
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    for (const auto& [i, c] : o.terms_) add_term(i, -c);
    return *this;
  }
  Vector& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [i, c] : terms_) c *= s;
    return *this;
  }
  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator-(Vector a) { return a *= Rational(-1); }
  friend Vector operator*(const Rational& s, Vector a) { return a *= s; }
  bool operator==(const Vector& o) const { return terms_ == o.terms_; }

  /// Degree of a nonzero homogeneous vector; nullopt for zero or mixed vectors.
  std::optional<int> homogeneous_degree(const GradedSpace& space) const {
    std::optional<int> d;
    for (const auto& [i, c] : terms_) {
      int di = space.degree(i);
      if (d && *d != di) return std::nullopt;
      d = di;
    }
    return d;
  }

  /// Throws unless every term has degree d.
  void require_degree(const GradedSpace& space, int d, const std::string& what) const {
    for (const auto& [i, c] : terms_)
      if (space.degree(i) != d)
        throw InputError(what + ": term '" + space.name(i) + "' has degree " +
                         std::to_string(space.degree(i)) + ", expected " + std::to_string(d));
  }

  std::vector<Rational> dense(size_t dim) const {
    std::vector<Rational> out(dim);
    for (const auto& [i, c] : terms_) out.at(i) = c;
    return out;
  }

  static Vector from_dense(const std::vector<Rational>& d) {
    Vector v;
    for (size_t i = 0; i < d.size(); ++i) v.add_term(i, d[i]);
    return v;
  }

  std::string to_string(const GradedSpace& space) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [i, c] : terms_) {
      if (!first) out += " + ";
      first = false;
      out += "(" + c.get_str() + ")*" + space.name(i);
    }
    return out;
  }

 private:
  std::map<size_t, Rational> terms_;
};

}  // namespace hpl

#endif  // HPL_GRADED_SPACE_HPP
