// kernel <job> <input.json> [flags]
// Exit status: 0 every verdict holds, 1 a check failed, 2 input or usage error.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hpl/document.hpp"

using namespace hpl;

namespace {

struct Envelope {
  int p_max = 4;
  int n_max = 3;
  int arity_cap = 4;
  int jobs = 1;
};

struct Report {
  std::string job;
  Envelope env;
  IdentityReport checks;
  Json results = Json::object();

  Json to_json() const {
    Json verdicts = Json::array();
    for (const auto& v : checks.verdicts) {
      Json defects = Json::array();
      for (const auto& d : v.defects) defects.push_back({{"identity", d.identity}, {"location", d.location}, {"value", d.value}});
      verdicts.push_back({{"name", v.name}, {"holds", v.holds}, {"defects", defects}});
    }
    return {{"job", job},
            {"envelope", {{"p_max", env.p_max}, {"n_max", env.n_max}, {"arity_cap", env.arity_cap}}},
            {"holds", checks.holds()},
            {"verdicts", verdicts},
            {"results", results}};
  }

  std::string to_text() const {
    std::ostringstream out;
    out << "job: " << job << "\n";
    out << "envelope: p_max=" << env.p_max << " n_max=" << env.n_max << " arity_cap=" << env.arity_cap << "\n";
    out << checks.render();
    for (auto it = results.begin(); it != results.end(); ++it) {
      if (it.value().is_primitive())
        out << it.key() << ": " << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump()) << "\n";
      else
        out << it.key() << ":\n" << it.value().dump(2) << "\n";
    }
    out << "status: " << (checks.holds() ? "pass" : "fail") << "\n";
    return out.str();
  }
};

// thrown for a job that does not fit the document
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void merge(Json& into, const Json& from) {
  for (auto it = from.begin(); it != from.end(); ++it) {
    if (it.value().is_object() && into.contains(it.key()) && into[it.key()].is_object())
      merge(into[it.key()], it.value());
    else
      into[it.key()] = it.value();
  }
}

Json window_json(const DegreeWindow& w) { return {{"min", w.min}, {"max", w.max}}; }

template <Symmetry Sym>
Json table(const GradedMultiMap<Sym>& f) {
  return doc::multimap_json(f);
}

class Runner {
 public:
  Runner(const Document& d, Envelope env) : doc_(d), env_(env) {}

  Report run(const std::string& job) {
    static const std::map<std::string, void (Runner::*)(const Json&, Report&)> jobs = {
        {"check-sgla", &Runner::check_sgla_job},
        {"check-action", &Runner::check_action_job},
        {"check-o-operator", &Runner::check_o_operator_job},
        {"check-rb", &Runner::check_rb_job},
        {"check-mc", &Runner::check_mc_job},
        {"check-post-lie", &Runner::check_post_lie_job},
        {"check-op-homotopy", &Runner::check_op_homotopy_job},
        {"derive-post-lie", &Runner::derive_job},
        {"induced-linfty", &Runner::induced_linfty_job},
        {"check-curved-morphism", &Runner::curved_morphism_job},
        {"check-representation", &Runner::check_representation_job},
        {"cohomology", &Runner::cohomology_job},
        {"check-iso", &Runner::check_iso_job},
        {"check-two-term", &Runner::check_two_term_job},
        {"classify-skeletal", &Runner::classify_job},
        {"search-operators", &Runner::search_job},
    };
    auto it = jobs.find(job);
    if (it == jobs.end()) throw UsageError("unknown job '" + job + "'");
    const Json* payload = nullptr;
    try {
      payload = &doc_.job(job);
    } catch (const InputError& e) {
      throw UsageError(e.what());
    }
    Report r{job, env_, {}, Json::object()};
    (this->*(it->second))(*payload, r);
    return r;
  }

 private:
  std::string name(const Json& p, const std::string& key, const std::string& job, const std::string& section) const {
    std::string n = doc_.ref(p, key, job);
    bool found = doc_.has(section, n) || (section == "sglas" && doc_.has("lie_algebras", n));
    if (!found) throw UsageError("job " + job + " refers to unknown " + section + " entry '" + n + "'");
    return n;
  }

  void check_sgla_job(const Json& p, Report& r) {
    std::string n = name(p, "sgla", "check-sgla", "sglas");
    if (doc_.has("sglas", n))
      r.checks = check_sgla(doc_.sgla(n));
    else
      r.checks = check_lie(doc_.lie(n));
  }

  void check_action_job(const Json& p, Report& r) {
    std::string n = name(p, "action", "check-action", "actions");
    auto a = doc_.action_parts(n);
    SgLa g = doc_.sgla(a.g), h = doc_.sgla(a.h);
    r.checks = check_sgla(g);
    r.checks.append(check_sgla(h));
    r.checks.append(check_action(g, h, doc_.action(n)));
  }

  HomotopyOOperator op(const Json& p, const std::string& job) const {
    return doc_.homotopy_operator(name(p, "operator", job, "operators"));
  }

  void check_o_operator_job(const Json& p, Report& r) {
    auto T = op(p, "check-o-operator");
    r.checks = check_o_operator(T, env_.p_max, env_.jobs);
    r.results["weight"] = T.weight.get_str();
  }

  void check_rb_job(const Json& p, Report& r) {
    std::string n = name(p, "operator", "check-rb", "operators");
    if (!doc_.operator_is_adjoint(n)) throw UsageError("check-rb needs an operator on the adjoint action");
    auto T = doc_.homotopy_operator(n);
    r.checks = check_homotopy_rb(T.context->g, T.T, T.weight, env_.p_max, env_.jobs);
    r.results["weight"] = T.weight.get_str();
  }

  void check_mc_job(const Json& p, Report& r) {
    auto T = op(p, "check-mc");
    r.checks = check_mc(*T.context, T.T, T.weight, env_.p_max, env_.jobs);
    r.results["weight"] = T.weight.get_str();
  }

  void check_post_lie_job(const Json& p, Report& r) {
    PostLie P = doc_.post_lie(name(p, "post_lie", "check-post-lie", "post_lie"));
    r.checks = check_post_lie(P);
    if (r.checks.holds()) r.checks.append(check_post_lie_mc(P));
  }

  void check_op_homotopy_job(const Json& p, Report& r) {
    if (p.contains("shifted")) {
      auto S = doc_.shifted(name(p, "shifted", "check-op-homotopy", "shifted"));
      r.checks = check_shifted(S, env_.n_max, env_.jobs);
      return;
    }
    auto S = doc_.op_homotopy(name(p, "structure", "check-op-homotopy", "op_homotopy"));
    r.checks = check_op_homotopy_post_lie(S, env_.n_max, env_.jobs);
  }

  void derive_job(const Json& p, Report& r) {
    std::string n = name(p, "operator", "derive-post-lie", "operators");
    auto T = doc_.homotopy_operator(n);
    r.checks = check_o_operator(T, env_.p_max, env_.jobs);
    if (!r.checks.holds()) return;
    OpHomotopyPostLie S = derive_op_homotopy_post_lie(T, env_.p_max, env_.jobs);
    r.checks.append(check_op_homotopy_post_lie(S, env_.n_max, env_.jobs));
    std::string out = n + "-derived";
    Json d = op_homotopy_document(S, out);
    d["window"] = window_json(doc_.window());
    // a Lie algebra in degree -1 gives an ordinary post-Lie algebra
    const auto& V = *S.alg.space();
    bool ungraded = V.dim() > 0 && V.degrees() == std::vector<int>{-1};
    if (ungraded) {
      PostLie P{structure_constants(S.alg), Bilinear(V.dim())};
      for (size_t a = 0; a < V.dim(); ++a) P.triangle.left(a) = S.products.op_basis(std::vector<size_t>{a});
      merge(d, post_lie_document(P, out));
      r.results["post_lie_product"] = doc::bilinear_json(P.triangle, P.alg.names, false);
    }
    r.results["products"] = doc::products_json(S.products);
    r.results["document"] = d;
  }

  void induced_linfty_job(const Json& p, Report& r) {
    OpHomotopyPostLie S = [&] {
      if (p.contains("structure")) return doc_.op_homotopy(name(p, "structure", "induced-linfty", "op_homotopy"));
      auto T = op(p, "induced-linfty");
      auto pre = check_o_operator(T, env_.p_max, env_.jobs);
      if (!pre.holds()) throw ConstructionError("not a homotopy O-operator\n" + pre.render());
      return derive_op_homotopy_post_lie(T, env_.p_max, env_.jobs);
    }();
    auto l = induced_linfty(S, env_.jobs);
    r.checks = check_curved_linfty(l);
    r.results["brackets"] = table(l);
  }

  void curved_morphism_job(const Json& p, Report& r) {
    auto T = op(p, "check-curved-morphism");
    r.checks = check_o_operator(T, env_.p_max, env_.jobs);
    if (!r.checks.holds()) return;
    auto S = derive_op_homotopy_post_lie(T, env_.p_max, env_.jobs);
    auto l = induced_linfty(S, env_.jobs);
    r.checks.append(check_curved_morphism(T.T, l, T.context->g, env_.n_max, env_.jobs));
  }

  PostLieRep rep(const Json& p, const std::string& job) const {
    return doc_.representation(name(p, "representation", job, "representations"));
  }

  void check_representation_job(const Json& p, Report& r) {
    auto R = rep(p, "check-representation");
    r.checks = check_post_lie(R.base);
    r.checks.append(check_representation(R));
  }

  void cohomology_job(const Json& p, Report& r) {
    if (p.contains("shifted")) {
      auto S = doc_.shifted(name(p, "shifted", "cohomology", "shifted"));
      auto H = cohomology_post_lie(S, env_.n_max);
      r.checks = H.report;
      Json dims = Json::object();
      for (const auto& [d, k] : H.dims) dims[std::to_string(d)] = k;
      r.results["dims"] = dims;
      Json reps = Json::array();
      for (const auto& v : H.representatives) reps.push_back(v.to_string(*S.space));
      r.results["representatives"] = reps;
      return;
    }
    auto R = rep(p, "cohomology");
    r.checks = check_post_lie(R.base);
    r.checks.append(check_representation(R));
    if (!r.checks.holds()) throw ConstructionError("cohomology needs a post-Lie representation\n" + r.checks.render());
    auto D = der_module(R);
    r.results["dim Der"] = D.dim();
    Json dims = Json::object();
    for (int n = 1; n <= env_.n_max; ++n) dims["H^" + std::to_string(n)] = cohomology_dim(R, n, env_.jobs);
    r.results["dims"] = dims;
  }

  void check_iso_job(const Json& p, Report& r) {
    auto R = rep(p, "check-iso");
    r.checks = check_post_lie(R.base);
    r.checks.append(check_representation(R));
    if (!r.checks.holds()) return;
    r.checks.append(check_iso_with_subadjacent(R, static_cast<size_t>(env_.n_max), env_.jobs));
  }

  void check_two_term_job(const Json& p, Report& r) {
    auto d = doc_.two_term(name(p, "two_term", "check-two-term", "two_term"));
    r.checks = check_two_term(d, env_.jobs);
    r.results["skeletal"] = d.skeletal();
  }

  void classify_job(const Json& p, Report& r) {
    if (p.contains("two_term")) {
      std::string n = name(p, "two_term", "classify-skeletal", "two_term");
      auto d = doc_.two_term(n);
      r.checks = check_two_term(d, env_.jobs);
      if (!r.checks.holds()) return;
      auto t = triple_from_skeletal(d);
      r.checks.append(check_triple(t));
      r.results["cocycle class is zero"] = is_coboundary(t);
      r.results["document"] = triple_document(t, n + "-triple");
      return;
    }
    auto t = doc_.triple(p, "classify-skeletal");
    r.checks = check_triple(t);
    if (!r.checks.holds()) return;
    auto d = skeletal_from_triple(t);
    r.checks.append(check_two_term(d, env_.jobs));
    r.results["cocycle class is zero"] = is_coboundary(t);
    r.results["document"] = two_term_document(d, doc_.ref(p, "representation", "classify-skeletal") + "-skeletal");
  }

  bool is_coboundary(const SkeletalTriple& t) const {
    auto D = der_module(t.rep);
    auto c = cochain_space(t.rep, D, 3).coordinates(t.cocycle);
    if (!c) throw ConsistencyError("cocycle is not Der-valued");
    Matrix M = coboundary_matrix(t.rep, D, 2, env_.jobs);
    Matrix aug(M.rows(), M.cols() + 1);
    for (size_t i = 0; i < M.rows(); ++i) {
      for (size_t j = 0; j < M.cols(); ++j) aug(i, j) = M(i, j);
      aug(i, M.cols()) = (*c)[i];
    }
    return rank(aug) == rank(M);
  }

  // Brute force over linear T with entries p/q, |p| <= height, 1 <= q <= height.
  void search_job(const Json& p, Report& r) {
    std::string n = name(p, "action", "search-operators", "actions");
    std::string path = "/jobs/search-operators";
    Rational w = doc::rational_of(doc::field(p, "weight", path), path + "/weight");
    int height = doc::int_of(doc::field(p, "height", path), path + "/height");
    if (height < 1 || height > 6) throw doc::at(path + "/height", "height must lie in 1..6");
    auto a = doc_.action_parts(n);
    auto ctx = make_context(doc_.sgla(a.g), doc_.sgla(a.h), doc_.action(n));
    const auto& G = *ctx->g.space();
    const auto& H = *ctx->h.space();
    if (G.dim() > 2 || H.dim() > 2) throw InputError("search-operators is limited to dims <= 2");

    std::vector<Rational> grid;
    for (int q = 1; q <= height; ++q)
      for (int num = -height; num <= height; ++num) {
        Rational v(num, q);
        v.canonicalize();
        if (std::find(grid.begin(), grid.end(), v) == grid.end()) grid.push_back(v);
      }
    std::sort(grid.begin(), grid.end());
    std::vector<std::pair<size_t, size_t>> slots;  // (row in g, column in h)
    for (size_t j = 0; j < H.dim(); ++j)
      for (size_t i = 0; i < G.dim(); ++i)
        if (G.degree(i) == H.degree(j)) slots.push_back({i, j});

    size_t total = 1;
    for (size_t k = 0; k < slots.size(); ++k) total *= grid.size();
    Json solutions = Json::array();
    Verdict mc{"solutions satisfy the Maurer-Cartan equation", true, {}};
    std::vector<size_t> digits(slots.size(), 0);
    for (size_t count = 0; count < total; ++count) {
      SymMultiMap T(ctx->h.space(), ctx->g.space(), 0, 1);
      for (size_t k = 0; k < slots.size(); ++k)
        if (grid[digits[k]] != 0) T.add(std::vector<size_t>{slots[k].second}, Vector::basis(slots[k].first, grid[digits[k]]));
      if (check_o_operator(*ctx, T, w, env_.p_max).holds()) {
        solutions.push_back(table(T));
        auto m = check_mc(*ctx, T, w, env_.p_max);
        if (!m.holds()) {
          mc.holds = false;
          mc.defects.push_back({"Maurer-Cartan equation", "solution " + std::to_string(solutions.size() - 1), m.render()});
        }
      }
      for (size_t k = 0; k < digits.size(); ++k) {
        if (++digits[k] < grid.size()) break;
        digits[k] = 0;
      }
    }
    r.checks.verdicts.push_back(mc);
    Json g = Json::array();
    for (const auto& v : grid) g.push_back(v.get_str());
    r.results["weight"] = w.get_str();
    r.results["grid"] = g;
    r.results["candidates"] = total;
    r.results["solutions"] = solutions;
  }

  const Document& doc_;
  Envelope env_;
};

Report failure_report(const std::string& job, const Envelope& env, const std::string& what, const std::string& msg) {
  Report r{job, env, {}, Json::object()};
  r.checks.verdicts.push_back({what, false, {{what, "-", msg}}});
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks and constructions for homotopy O-operators and post-Lie structures"};
  std::string job, input, format = "text";
  Envelope env;
  app.add_option("job", job, "job to run")->required();
  app.add_option("input", input, "input document (JSON)")->required();
  app.add_option("--p-max", env.p_max, "highest identity index checked")->check(CLI::Range(0, 12));
  app.add_option("--n-max", env.n_max, "highest arity or cochain degree checked")->check(CLI::Range(1, 8));
  app.add_option("--arity-cap", env.arity_cap, "arity cap for operators that do not state one")->check(CLI::Range(1, 12));
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs", env.jobs, "worker threads")->check(CLI::Range(1, 256));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::ifstream in(input);
  if (!in) {
    std::cerr << "input error: cannot read " << input << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  Report report;
  try {
    Document d = [&] {
      Json pre = Json::parse(buf.str(), nullptr, false);
      if (!pre.is_discarded() && pre.is_object() && !pre.contains("operators")) return Document(std::move(pre));
      if (pre.is_discarded()) return Document::parse(buf.str());
      // operators without an explicit arity cap take the flag value
      for (auto& [k, v] : pre["operators"].items())
        if (v.is_object() && !v.contains("arity_cap")) v["arity_cap"] = env.arity_cap;
      return Document(std::move(pre));
    }();
    Runner runner(d, env);
    report = runner.run(job);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ConstructionError& e) {
    report = failure_report(job, env, "construction", e.what());
  } catch (const ConsistencyError& e) {
    report = failure_report(job, env, "internal consistency", e.what());
  }
  std::cout << (format == "json" ? report.to_json().dump(2) + "\n" : report.to_text());
  return report.checks.holds() ? 0 : 1;
}
