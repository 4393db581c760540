#ifndef HPL_DOCUMENT_HPP
#define HPL_DOCUMENT_HPP

// JSON documents: named spaces, algebras, operators, representations and
// structures, plus per-job payloads. Every emitter writes the same format the
// parser reads.

#include <map>
#include <string>
#include <vector>

#include "hpl/cohomology.hpp"
#include "hpl/errors.hpp"
#include "hpl/homotopy_ops.hpp"
#include "hpl/postlie.hpp"
#include "hpl/two_term.hpp"
#include "json.hpp"

namespace hpl {

using Json = nlohmann::json;

namespace doc {

inline InputError at(const std::string& path, const std::string& msg) { return InputError("at " + path + ": " + msg); }

inline const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw at(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw at(path, "missing field '" + key + "'");
  return *it;
}

inline const Json* optional_field(const Json& obj, const std::string& key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline std::string string_of(const Json& j, const std::string& path) {
  if (!j.is_string()) throw at(path, "expected a string");
  return j.get<std::string>();
}

inline int int_of(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw at(path, "expected an integer");
  return j.get<int>();
}

inline Rational rational_of(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw at(path, "rational must be a string \"p/q\" or an integer");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const InputError& e) {
    throw at(path, e.what());
  }
}

inline Json rational_json(const Rational& q) { return q.get_str(); }

/// Name → index over a list of basis names.
class Names {
 public:
  Names() = default;
  explicit Names(std::vector<std::string> names) : names_(std::move(names)) {
    for (size_t i = 0; i < names_.size(); ++i)
      if (!index_.emplace(names_[i], i).second) throw InputError("duplicate basis name '" + names_[i] + "'");
  }
  size_t at(const std::string& name, const std::string& path) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw doc::at(path, "unknown basis element '" + name + "'");
    return it->second;
  }
  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  const std::vector<std::string>& list() const { return names_; }
  size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, size_t> index_;
};

inline Names names_of(const GradedSpace& s) {
  std::vector<std::string> n;
  for (size_t i = 0; i < s.dim(); ++i) n.push_back(s.name(i));
  return Names(n);
}

/// One structure-constant entry: inputs as basis names, output as a linear combination.
struct Entry {
  std::vector<std::string> inputs;
  std::vector<std::pair<std::string, Rational>> output;
  std::string path;
};

inline std::vector<Entry> entries_of(const Json& j, const std::string& path) {
  if (!j.is_array()) throw at(path, "expected an array of entries");
  std::vector<Entry> out;
  for (size_t i = 0; i < j.size(); ++i) {
    std::string p = path + "/" + std::to_string(i);
    Entry e;
    e.path = p;
    const Json& inputs = field(j[i], "inputs", p);
    if (!inputs.is_array()) throw at(p + "/inputs", "expected an array of basis names");
    for (size_t k = 0; k < inputs.size(); ++k) e.inputs.push_back(string_of(inputs[k], p + "/inputs/" + std::to_string(k)));
    const Json& output = field(j[i], "output", p);
    if (!output.is_object()) throw at(p + "/output", "expected an object {basis name: rational}");
    for (auto it = output.begin(); it != output.end(); ++it) e.output.push_back({it.key(), rational_of(it.value(), p + "/output/" + it.key())});
    out.push_back(std::move(e));
  }
  return out;
}

inline Vector output_vector(const Entry& e, const Names& target) {
  Vector v;
  for (const auto& [n, c] : e.output) v.add_term(target.at(n, e.path + "/output"), c);
  return v;
}

inline Word input_word(const Entry& e, const Names& source) {
  Word w;
  for (size_t k = 0; k < e.inputs.size(); ++k) w.push_back(source.at(e.inputs[k], e.path + "/inputs"));
  return w;
}

inline Json entry_json(const std::vector<std::string>& inputs, const Vector& v, const std::vector<std::string>& target) {
  Json out = Json::object();
  for (const auto& [i, c] : v) out[target.at(i)] = rational_json(c);
  return Json{{"inputs", inputs}, {"output", out}};
}

template <Symmetry Sym>
GradedMultiMap<Sym> multimap_of(const Json& j, SpacePtr source, SpacePtr target, int degree, int cap, const std::string& path) {
  GradedMultiMap<Sym> f(source, target, degree, cap);
  Names src = names_of(*source), tgt = names_of(*target);
  for (const auto& e : entries_of(j, path)) {
    try {
      f.add(input_word(e, src), output_vector(e, tgt));
    } catch (const InputError& err) {
      std::string msg = err.what();
      if (msg.rfind("at ", 0) == 0) throw;
      throw at(e.path, msg);
    }
  }
  return f;
}

template <Symmetry Sym>
Json multimap_json(const GradedMultiMap<Sym>& f) {
  Json out = Json::array();
  std::vector<std::string> src, tgt;
  for (size_t i = 0; i < f.source()->dim(); ++i) src.push_back(f.source()->name(i));
  for (size_t i = 0; i < f.target()->dim(); ++i) tgt.push_back(f.target()->name(i));
  for (const auto& [a, comp] : f.components())
    for (const auto& [w, v] : comp) {
      std::vector<std::string> in;
      for (size_t i : w) in.push_back(src[i]);
      out.push_back(entry_json(in, v, tgt));
    }
  return out;
}

/// Products: inputs (x_1..x_k) with x_k the acted-on slot.
template <Symmetry Sym>
ProductFamily<Sym> products_of(const Json& j, SpacePtr space, int base, int slope, int cap, const std::string& path) {
  ProductFamily<Sym> P(space, base, slope, cap);
  Names names = names_of(*space);
  // accumulate full matrices per word first so degree checks see whole operators
  std::map<Word, Matrix> acc;
  for (const auto& e : entries_of(j, path)) {
    if (e.inputs.empty()) throw at(e.path, "a product entry needs at least one input");
    Word w = input_word(e, names);
    size_t last = w.back();
    w.pop_back();
    auto it = acc.find(w);
    if (it == acc.end()) it = acc.emplace(w, Matrix(space->dim(), space->dim())).first;
    for (const auto& [i, c] : output_vector(e, names)) it->second(i, last) += c;
  }
  for (const auto& [w, m] : acc) {
    try {
      P.add(w, m);
    } catch (const InputError& err) {
      std::string loc;
      for (size_t i : w) loc += (loc.empty() ? "" : ",") + space->name(i);
      throw at(path, std::string(err.what()) + " (first inputs " + loc + ")");
    }
  }
  return P;
}

template <Symmetry Sym>
Json products_json(const ProductFamily<Sym>& P) {
  Json out = Json::array();
  const auto& V = *P.space();
  std::vector<std::string> names;
  for (size_t i = 0; i < V.dim(); ++i) names.push_back(V.name(i));
  for (const auto& [k, comp] : P.components())
    for (const auto& [w, m] : comp)
      for (size_t c = 0; c < m.cols(); ++c) {
        Vector col = Vector::from_dense(m.column(c));
        if (col.is_zero()) continue;
        std::vector<std::string> in;
        for (size_t i : w) in.push_back(names[i]);
        in.push_back(names[c]);
        out.push_back(entry_json(in, col, names));
      }
  return out;
}

/// Bilinear map on named basis entries; `antisymmetric` fills in the swapped pair.
inline Bilinear bilinear_of(const Json& j, const Names& names, bool antisymmetric, const std::string& path) {
  Bilinear b(names.size());
  std::map<std::pair<size_t, size_t>, bool> given;
  for (const auto& e : entries_of(j, path)) {
    if (e.inputs.size() != 2) throw at(e.path, "expected two inputs");
    size_t x = names.at(e.inputs[0], e.path), y = names.at(e.inputs[1], e.path);
    Vector v = output_vector(e, names);
    if (given.count({x, y})) throw at(e.path, "entry given twice");
    given[{x, y}] = true;
    b.set(x, y, b(x, y) + v);
    if (antisymmetric) {
      if (x == y && !v.is_zero()) throw at(e.path, "bracket of an element with itself must vanish");
      if (x == y) continue;
      if (given.count({y, x})) {
        if (b(y, x) != -b(x, y)) throw at(e.path, "entries for both orders are not antisymmetric");
      } else {
        b.set(y, x, -b(x, y));
      }
    }
  }
  return b;
}

inline Json bilinear_json(const Bilinear& b, const std::vector<std::string>& names, bool antisymmetric) {
  Json out = Json::array();
  for (size_t x = 0; x < b.dim(); ++x)
    for (size_t y = antisymmetric ? x + 1 : 0; y < b.dim(); ++y) {
      Vector v = b(x, y);
      if (!v.is_zero()) out.push_back(entry_json({names[x], names[y]}, v, names));
    }
  return out;
}

/// Operators g → gl(V): entries (x, v) ↦ op(x)v.
inline LinearFamily family_of(const Json& j, const Names& g, const Names& v, const std::string& path) {
  LinearFamily f = zero_family(g.size(), v.size());
  for (const auto& e : entries_of(j, path)) {
    if (e.inputs.size() != 2) throw at(e.path, "expected inputs [g element, module element]");
    size_t x = g.at(e.inputs[0], e.path), a = v.at(e.inputs[1], e.path);
    for (const auto& [r, c] : output_vector(e, v)) f.mats[x](r, a) += c;
  }
  return f;
}

inline Json family_json(const LinearFamily& f, const std::vector<std::string>& g, const std::vector<std::string>& v) {
  Json out = Json::array();
  for (size_t x = 0; x < f.mats.size(); ++x)
    for (size_t a = 0; a < v.size(); ++a) {
      Vector col = Vector::from_dense(f.mats[x].column(a));
      if (!col.is_zero()) out.push_back(entry_json({g[x], v[a]}, col, v));
    }
  return out;
}

/// 3-cochain entries (x, y, z) ↦ ω(x, y, z) ∈ V, antisymmetric in x, y.
inline Cochain cochain_of(const Json& j, size_t n, const Names& g, const Names& v, const std::string& path) {
  Cochain c(n, g.size(), v.size());
  std::map<Word, bool> given;
  for (const auto& e : entries_of(j, path)) {
    if (e.inputs.size() != n) throw at(e.path, "expected " + std::to_string(n) + " inputs");
    Word first;
    for (size_t k = 0; k + 1 < n; ++k) first.push_back(g.at(e.inputs[k], e.path));
    size_t last = g.at(e.inputs.back(), e.path);
    Word sorted = first;
    int s = detail::sort_antisymmetric(sorted);
    if (s == 0) throw at(e.path, "repeated antisymmetric input");
    Word key = sorted;
    key.push_back(last);
    if (given.count(key)) throw at(e.path, "entry given twice up to antisymmetry");
    given[key] = true;
    Vector val = output_vector(e, v);
    if (s < 0) val *= Rational(-1);
    std::vector<Vector> args;
    for (size_t i : sorted) args.push_back(Vector::basis(i));
    c.set_value(sorted, last, c(args, Vector::basis(last)) + val);
  }
  return c;
}

inline Json cochain_json(const Cochain& c, const std::vector<std::string>& g, const std::vector<std::string>& v) {
  Json out = Json::array();
  for (const auto& [I, m] : c.data.value)
    for (size_t j = 0; j < m.cols(); ++j) {
      Vector col = Vector::from_dense(m.column(j));
      if (col.is_zero()) continue;
      std::vector<std::string> in;
      for (size_t i : I) in.push_back(g[i]);
      in.push_back(g[j]);
      out.push_back(entry_json(in, col, v));
    }
  return out;
}

inline std::vector<std::string> name_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw at(path, "expected an array of basis names");
  std::vector<std::string> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(string_of(j[i], path + "/" + std::to_string(i)));
  return out;
}

inline Json space_json(const GradedSpace& s) {
  Json out = Json::array();
  for (const auto& b : s.basis()) out.push_back({{"name", b.name}, {"degree", b.degree}});
  return out;
}

}  // namespace doc

/// Parsed document. Sections are validated for shape, names, rationals and
/// degrees on load; algebraic axioms are left to the jobs.
class Document {
 public:
  static Document parse(const std::string& text) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("malformed JSON: ") + e.what());
    }
    return Document(std::move(j));
  }

  explicit Document(Json j) : root_(std::move(j)) {
    if (!root_.is_object()) throw doc::at("/", "document must be a JSON object");
    static const std::vector<std::string> known = {"window", "spaces", "lie_algebras", "sglas", "actions", "operators",
                                                   "post_lie", "representations", "op_homotopy", "shifted", "two_term",
                                                   "jobs", "description"};
    for (auto it = root_.begin(); it != root_.end(); ++it)
      if (std::find(known.begin(), known.end(), it.key()) == known.end()) throw doc::at("/" + it.key(), "unknown section");
    if (const Json* w = doc::optional_field(root_, "window")) {
      window_.min = doc::int_of(doc::field(*w, "min", "/window"), "/window/min");
      window_.max = doc::int_of(doc::field(*w, "max", "/window"), "/window/max");
      if (window_.min > window_.max) throw doc::at("/window", "empty degree window");
    }
    for (const auto& key : known) {
      if (key == "window" || key == "jobs" || key == "description") continue;
      if (const Json* s = doc::optional_field(root_, key))
        if (!s->is_object()) throw doc::at("/" + key, "expected an object of named entries");
    }
    for (const auto& n : section_names("spaces")) space(n);
    for (const auto& n : section_names("lie_algebras")) lie(n);
    for (const auto& n : section_names("sglas")) sgla_shape(n);
    for (const auto& n : section_names("actions")) action(n);
    for (const auto& n : section_names("operators")) operator_parts(n);
    for (const auto& n : section_names("post_lie")) post_lie(n);
    for (const auto& n : section_names("representations")) representation(n);
    for (const auto& n : section_names("op_homotopy")) op_homotopy(n);
    for (const auto& n : section_names("shifted")) shifted(n);
    for (const auto& n : section_names("two_term")) two_term(n);
    if (const Json* jobs = doc::optional_field(root_, "jobs"))
      if (!jobs->is_object()) throw doc::at("/jobs", "expected an object keyed by job name");
  }

  const Json& json() const { return root_; }
  DegreeWindow window() const { return window_; }

  std::vector<std::string> section_names(const std::string& section) const {
    std::vector<std::string> out;
    if (const Json* s = doc::optional_field(root_, section))
      for (auto it = s->begin(); it != s->end(); ++it) out.push_back(it.key());
    return out;
  }

  bool has(const std::string& section, const std::string& name) const {
    const Json* s = doc::optional_field(root_, section);
    return s && s->contains(name);
  }

  const Json& job(const std::string& name) const {
    const Json* jobs = doc::optional_field(root_, "jobs");
    if (!jobs || !jobs->contains(name)) throw InputError("document has no payload for job '" + name + "'");
    const Json& p = (*jobs)[name];
    if (!p.is_object()) throw doc::at("/jobs/" + name, "expected an object");
    return p;
  }

  std::string ref(const Json& payload, const std::string& key, const std::string& job) const {
    return doc::string_of(doc::field(payload, key, "/jobs/" + job), "/jobs/" + job + "/" + key);
  }

  // --- sections -----------------------------------------------------------

  SpacePtr space(const std::string& name) const {
    std::string p = "/spaces/" + name;
    const Json& j = entry("spaces", name);
    if (!j.is_array()) throw doc::at(p, "expected an array of {name, degree}");
    std::vector<BasisElement> basis;
    for (size_t i = 0; i < j.size(); ++i) {
      std::string q = p + "/" + std::to_string(i);
      basis.push_back({doc::string_of(doc::field(j[i], "name", q), q + "/name"), doc::int_of(doc::field(j[i], "degree", q), q + "/degree")});
    }
    try {
      return make_space(std::move(basis), window_);
    } catch (const InputError& e) {
      throw doc::at(p, e.what());
    }
  }

  /// Ungraded Lie algebra; the bracket is completed by antisymmetry.
  LieAlgebra lie(const std::string& name) const {
    std::string p = "/lie_algebras/" + name;
    const Json& j = entry("lie_algebras", name);
    doc::Names names = names_at(doc::name_list(doc::field(j, "basis", p), p + "/basis"), p + "/basis");
    Bilinear b = Bilinear(names.size());
    if (const Json* br = doc::optional_field(j, "bracket")) b = doc::bilinear_of(*br, names, true, p + "/bracket");
    return {names.list(), b};
  }

  /// An sgLa by name: an entry of "sglas", or a Lie algebra placed in degree -1.
  SgLa sgla(const std::string& name) const {
    if (has("sglas", name)) return sgla_shape(name);
    if (has("lie_algebras", name)) return lie_as_sgla(lie(name), window_);
    throw InputError("unknown sgLa or Lie algebra '" + name + "'");
  }

  /// The space of an sgLa reference, without checking the Lie axioms.
  SpacePtr sgla_space(const std::string& name) const {
    if (has("sglas", name)) return sgla_shape(name).space();
    if (has("lie_algebras", name)) {
      std::vector<BasisElement> b;
      for (const auto& n : lie(name).names) b.push_back({n, -1});
      try {
        return make_space(std::move(b), window_);
      } catch (const InputError& e) {
        throw doc::at("/lie_algebras/" + name, e.what());
      }
    }
    throw InputError("unknown sgLa or Lie algebra '" + name + "'");
  }

  /// "adjoint" or explicit entries (x, v) ↦ ρ(x)v.
  struct ActionParts {
    std::string g, h;
    bool adjoint = false;
    const Json* entries = nullptr;
    std::string path;
  };

  ActionParts action_parts(const std::string& name) const {
    std::string p = "/actions/" + name;
    const Json& j = entry("actions", name);
    ActionParts a;
    a.path = p;
    if (const Json* adj = doc::optional_field(j, "adjoint")) {
      a.g = a.h = doc::string_of(*adj, p + "/adjoint");
      a.adjoint = true;
      return a;
    }
    a.g = doc::string_of(doc::field(j, "source", p), p + "/source");
    a.h = doc::string_of(doc::field(j, "target", p), p + "/target");
    a.entries = &doc::field(j, "entries", p);
    return a;
  }

  ActionMap action(const std::string& name) const {
    auto a = action_parts(name);
    SpacePtr g = sgla_space(a.g), h = sgla_space(a.h);
    if (a.adjoint) return adjoint_action(sgla(a.g));
    doc::Names gn = doc::names_of(*g), hn = doc::names_of(*h);
    std::vector<Matrix> ops(g->dim(), Matrix(h->dim(), h->dim()));
    for (const auto& e : doc::entries_of(*a.entries, a.path + "/entries")) {
      if (e.inputs.size() != 2) throw doc::at(e.path, "expected inputs [source element, target element]");
      size_t x = gn.at(e.inputs[0], e.path), v = hn.at(e.inputs[1], e.path);
      for (const auto& [r, c] : doc::output_vector(e, hn)) ops[x](r, v) += c;
    }
    try {
      return ActionMap(g, h, std::move(ops));
    } catch (const InputError& err) {
      throw doc::at(a.path, err.what());
    }
  }

  struct OperatorParts {
    std::string action;
    SymMultiMap T;
    Rational weight;
  };

  OperatorParts operator_parts(const std::string& name) const {
    std::string p = "/operators/" + name;
    const Json& j = entry("operators", name);
    std::string act = doc::string_of(doc::field(j, "action", p), p + "/action");
    if (!has("actions", act)) throw doc::at(p + "/action", "unknown action '" + act + "'");
    auto a = action_parts(act);
    int cap = 1;
    if (const Json* c = doc::optional_field(j, "arity_cap")) cap = doc::int_of(*c, p + "/arity_cap");
    Rational w = doc::rational_of(doc::field(j, "weight", p), p + "/weight");
    auto T = doc::multimap_of<Symmetry::symmetric>(doc::field(j, "entries", p), sgla_space(a.h), sgla_space(a.g), 0, cap,
                                                   p + "/entries");
    return {act, std::move(T), w};
  }

  /// Builds the context (checking the action) and the operator.
  HomotopyOOperator homotopy_operator(const std::string& name) const {
    auto parts = operator_parts(name);
    auto a = action_parts(parts.action);
    auto ctx = make_context(sgla(a.g), sgla(a.h), action(parts.action));
    return HomotopyOOperator(ctx, parts.T, parts.weight);
  }

  bool operator_is_adjoint(const std::string& name) const { return action_parts(operator_parts(name).action).adjoint; }

  PostLie post_lie(const std::string& name) const {
    std::string p = "/post_lie/" + name;
    const Json& j = entry("post_lie", name);
    std::string l = doc::string_of(doc::field(j, "lie", p), p + "/lie");
    if (!has("lie_algebras", l)) throw doc::at(p + "/lie", "unknown Lie algebra '" + l + "'");
    LieAlgebra L = lie(l);
    doc::Names names(L.names);
    Bilinear t(L.dim());
    if (const Json* prod = doc::optional_field(j, "product")) t = doc::bilinear_of(*prod, names, false, p + "/product");
    return {L, t};
  }

  PostLieRep representation(const std::string& name) const {
    std::string p = "/representations/" + name;
    const Json& j = entry("representations", name);
    std::string pl = doc::string_of(doc::field(j, "post_lie", p), p + "/post_lie");
    if (!has("post_lie", pl)) throw doc::at(p + "/post_lie", "unknown post-Lie algebra '" + pl + "'");
    PostLie P = post_lie(pl);
    if (const Json* reg = doc::optional_field(j, "regular")) {
      if (!reg->is_boolean() || !reg->get<bool>()) throw doc::at(p + "/regular", "expected true");
      return regular_rep(P);
    }
    doc::Names g(P.alg.names);
    doc::Names v = names_at(doc::name_list(doc::field(j, "module", p), p + "/module"), p + "/module");
    PostLieRep R = zero_rep(P, v.list());
    if (const Json* e = doc::optional_field(j, "rho")) R.rho = doc::family_of(*e, g, v, p + "/rho");
    if (const Json* e = doc::optional_field(j, "mu")) R.mu = doc::family_of(*e, g, v, p + "/mu");
    if (const Json* e = doc::optional_field(j, "nu")) R.nu = doc::family_of(*e, g, v, p + "/nu");
    return R;
  }

  OpHomotopyPostLie op_homotopy(const std::string& name) const {
    std::string p = "/op_homotopy/" + name;
    const Json& j = entry("op_homotopy", name);
    std::string s = doc::string_of(doc::field(j, "sgla", p), p + "/sgla");
    int cap = doc::int_of(doc::field(j, "arity_cap", p), p + "/arity_cap");
    SpacePtr v = sgla_space(s);
    auto P = doc::products_of<Symmetry::symmetric>(doc::field(j, "products", p), v, 1, 0, cap, p + "/products");
    SgLa h = has("sglas", s) ? sgla_shape(s) : lie_as_sgla(lie(s), window_);
    return OpHomotopyPostLie(h, std::move(P));
  }

  ShiftedOpHomotopyPostLie shifted(const std::string& name) const {
    std::string p = "/shifted/" + name;
    const Json& j = entry("shifted", name);
    std::string sp = doc::string_of(doc::field(j, "space", p), p + "/space");
    if (!has("spaces", sp)) throw doc::at(p + "/space", "unknown space '" + sp + "'");
    SpacePtr g = space(sp);
    int cap = doc::int_of(doc::field(j, "arity_cap", p), p + "/arity_cap");
    AntiMultiMap br(g, g, 0, 2);
    if (const Json* b = doc::optional_field(j, "bracket"))
      br = doc::multimap_of<Symmetry::antisymmetric>(*b, g, g, 0, 2, p + "/bracket");
    auto P = doc::products_of<Symmetry::antisymmetric>(doc::field(j, "products", p), g, 1, -1, cap, p + "/products");
    try {
      return ShiftedOpHomotopyPostLie(g, std::move(br), std::move(P));
    } catch (const InputError& e) {
      throw doc::at(p, e.what());
    }
  }

  TwoTermData two_term(const std::string& name) const {
    std::string p = "/two_term/" + name;
    const Json& j = entry("two_term", name);
    auto n0 = doc::name_list(doc::field(j, "g0", p), p + "/g0");
    auto n1 = doc::name_list(doc::field(j, "g-1", p), p + "/g-1");
    std::vector<std::string> all = n0;
    all.insert(all.end(), n1.begin(), n1.end());
    names_at(all, p);  // distinct names across both degrees
    doc::Names g0 = names_at(n0, p + "/g0"), g1 = names_at(n1, p + "/g-1");
    TwoTermData d = TwoTermData::zero(n0, n1);
    auto kind = [&](const std::string& s) { return g0.contains(s) ? 'x' : g1.contains(s) ? 'a' : '?'; };
    auto unknown = [&](const doc::Entry& e) {
      for (const auto& s : e.inputs)
        if (kind(s) == '?') throw doc::at(e.path, "unknown basis element '" + s + "'");
    };
    if (const Json* b = doc::optional_field(j, "bracket"))
      for (const auto& e : doc::entries_of(*b, p + "/bracket")) {
        unknown(e);
        if (e.inputs.size() != 2) throw doc::at(e.path, "expected two inputs");
        std::string k{kind(e.inputs[0]), kind(e.inputs[1])};
        if (k == "xx") {
          size_t x = g0.at(e.inputs[0], e.path), y = g0.at(e.inputs[1], e.path);
          Vector v = doc::output_vector(e, g0);
          if (x == y && !v.is_zero()) throw doc::at(e.path, "bracket of an element with itself must vanish");
          d.g0.bracket.set(x, y, d.g0.bracket(x, y) + v);
          if (x != y) d.g0.bracket.set(y, x, d.g0.bracket(y, x) - v);
        } else if (k == "xa" || k == "ax") {
          size_t x = g0.at(e.inputs[k == "xa" ? 0 : 1], e.path), a = g1.at(e.inputs[k == "xa" ? 1 : 0], e.path);
          Rational s = k == "xa" ? 1 : -1;
          for (const auto& [r, c] : doc::output_vector(e, g1)) d.rho.mats[x](r, a) += s * c;
        } else {
          throw doc::at(e.path, "bracket of two degree -1 elements is zero");
        }
      }
    if (const Json* o = doc::optional_field(j, "o1"))
      for (const auto& e : doc::entries_of(*o, p + "/o1")) {
        if (e.inputs.size() != 1) throw doc::at(e.path, "expected one input");
        size_t a = g1.at(e.inputs[0], e.path);
        for (const auto& [r, c] : doc::output_vector(e, g0)) d.o1(r, a) += c;
      }
    if (const Json* o = doc::optional_field(j, "o2"))
      for (const auto& e : doc::entries_of(*o, p + "/o2")) {
        unknown(e);
        if (e.inputs.size() != 2) throw doc::at(e.path, "expected two inputs");
        std::string k{kind(e.inputs[0]), kind(e.inputs[1])};
        if (k == "xx") {
          size_t x = g0.at(e.inputs[0], e.path), y = g0.at(e.inputs[1], e.path);
          d.o2.set(x, y, d.o2(x, y) + doc::output_vector(e, g0));
        } else if (k == "xa") {
          size_t x = g0.at(e.inputs[0], e.path), a = g1.at(e.inputs[1], e.path);
          for (const auto& [r, c] : doc::output_vector(e, g1)) d.mu.mats[x](r, a) += c;
        } else if (k == "ax") {
          size_t a = g1.at(e.inputs[0], e.path), x = g0.at(e.inputs[1], e.path);
          for (const auto& [r, c] : doc::output_vector(e, g1)) d.nu.mats[x](r, a) += c;
        } else {
          throw doc::at(e.path, "O2 of two degree -1 elements is zero");
        }
      }
    if (const Json* o = doc::optional_field(j, "o3")) d.o3 = doc::cochain_of(*o, 3, g0, g1, p + "/o3");
    return d;
  }

  /// Triple given in a job payload: representation name plus cocycle entries.
  SkeletalTriple triple(const Json& payload, const std::string& job) const {
    std::string p = "/jobs/" + job;
    std::string r = ref(payload, "representation", job);
    if (!has("representations", r)) throw doc::at(p + "/representation", "unknown representation '" + r + "'");
    PostLieRep R = representation(r);
    Cochain w(3, R.dim_g(), R.dim_v());
    if (const Json* c = doc::optional_field(payload, "cocycle"))
      w = doc::cochain_of(*c, 3, doc::Names(R.base.alg.names), doc::Names(R.module_names), p + "/cocycle");
    return {R, w};
  }

 private:
  const Json& entry(const std::string& section, const std::string& name) const {
    const Json* s = doc::optional_field(root_, section);
    if (!s || !s->contains(name)) throw InputError("unknown " + section + " entry '" + name + "'");
    return (*s)[name];
  }

  static doc::Names names_at(const std::vector<std::string>& names, const std::string& path) {
    try {
      return doc::Names(names);
    } catch (const InputError& e) {
      throw doc::at(path, e.what());
    }
  }

  SgLa sgla_shape(const std::string& name) const {
    std::string p = "/sglas/" + name;
    const Json& j = entry("sglas", name);
    std::string sp = doc::string_of(doc::field(j, "space", p), p + "/space");
    if (!has("spaces", sp)) throw doc::at(p + "/space", "unknown space '" + sp + "'");
    SpacePtr v = space(sp);
    SymMultiMap br(v, v, 1, 2);
    if (const Json* b = doc::optional_field(j, "bracket")) br = doc::multimap_of<Symmetry::symmetric>(*b, v, v, 1, 2, p + "/bracket");
    for (const auto& [a, comp] : br.components())
      if (a != 2) throw doc::at(p + "/bracket", "bracket entries need exactly two inputs");
    return SgLa(std::move(br));
  }

  Json root_;
  DegreeWindow window_;
};

// --- emitters ---------------------------------------------------------------

/// Document fragment for an op-homotopy post-Lie algebra on h named `name`.
inline Json op_homotopy_document(const OpHomotopyPostLie& S, const std::string& name) {
  Json d;
  const auto& V = *S.alg.space();
  d["spaces"][name] = doc::space_json(V);
  d["sglas"][name] = {{"space", name}, {"bracket", doc::multimap_json(S.alg.bracket_map())}};
  d["op_homotopy"][name] = {{"sgla", name}, {"arity_cap", S.products.cap()}, {"products", doc::products_json(S.products)}};
  d["jobs"]["check-op-homotopy"] = {{"structure", name}};
  return d;
}

inline Json post_lie_document(const PostLie& P, const std::string& name) {
  Json d;
  d["lie_algebras"][name] = {{"basis", P.alg.names}, {"bracket", doc::bilinear_json(P.alg.bracket, P.alg.names, true)}};
  d["post_lie"][name] = {{"lie", name}, {"product", doc::bilinear_json(P.triangle, P.alg.names, false)}};
  d["jobs"]["check-post-lie"] = {{"post_lie", name}};
  return d;
}

/// Post-Lie algebra, representation and cocycle; re-ingests as a classify-skeletal job.
inline Json triple_document(const SkeletalTriple& t, const std::string& name) {
  Json d = post_lie_document(t.post_lie(), name);
  const auto& g = t.rep.base.alg.names;
  const auto& v = t.rep.module_names;
  d["representations"][name] = {{"post_lie", name},
                                {"module", v},
                                {"rho", doc::family_json(t.rep.rho, g, v)},
                                {"mu", doc::family_json(t.rep.mu, g, v)},
                                {"nu", doc::family_json(t.rep.nu, g, v)}};
  d["jobs"]["check-representation"] = {{"representation", name}};
  d["jobs"]["classify-skeletal"] = {{"representation", name}, {"cocycle", doc::cochain_json(t.cocycle, g, v)}};
  return d;
}

inline Json two_term_document(const TwoTermData& t, const std::string& name) {
  const auto& g = t.g0.names;
  const auto& v = t.gm1;
  Json bracket = doc::bilinear_json(t.g0.bracket, g, true);
  for (const auto& e : doc::family_json(t.rho, g, v)) bracket.push_back(e);
  Json o1 = Json::array();
  for (size_t a = 0; a < t.dim1(); ++a) {
    Vector col = Vector::from_dense(t.o1.column(a));
    if (!col.is_zero()) o1.push_back(doc::entry_json({v[a]}, col, g));
  }
  Json o2 = doc::bilinear_json(t.o2, g, false);
  for (const auto& e : doc::family_json(t.mu, g, v)) o2.push_back(e);
  for (size_t x = 0; x < t.dim0(); ++x)
    for (size_t a = 0; a < t.dim1(); ++a) {
      Vector col = Vector::from_dense(t.nu.mats[x].column(a));
      if (!col.is_zero()) o2.push_back(doc::entry_json({v[a], g[x]}, col, v));
    }
  Json d;
  d["two_term"][name] = {{"g0", g}, {"g-1", v}, {"bracket", bracket}, {"o1", o1}, {"o2", o2}, {"o3", doc::cochain_json(t.o3, g, v)}};
  d["jobs"]["check-two-term"] = {{"two_term", name}};
  d["jobs"]["classify-skeletal"] = {{"two_term", name}};
  return d;
}

}  // namespace hpl

#endif  // HPL_DOCUMENT_HPP
