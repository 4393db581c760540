// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <functional>
#include <iostream>
#include <thread>

#include "cochain_examples.hpp"
#include "corpus.hpp"
#include "hpl/postlie.hpp"
#include "kernel_runner.hpp"

using namespace hpl;
using namespace hpl::testing;

namespace {

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (problems.size() < 5) problems.push_back(what);
    }
  }
};

// 1. graded antisymmetry and Jacobi for the NR bracket
Outcome nr_axioms() {
  Outcome o;
  Rng rng(1001);
  const int trials = 60;
  for (int t = 0; t < trials; ++t) {
    auto v = random_space(rng, rng.uniform(1, 3), -1, 1);
    int m = rng.uniform(-1, 2), n = rng.uniform(-1, 2), k = rng.uniform(-1, 2);
    auto f = random_map(rng, v, v, m, rng.uniform(0, 3));
    auto g = random_map(rng, v, v, n, rng.uniform(0, 3));
    auto h = random_map(rng, v, v, k, rng.uniform(0, 3));
    auto fg = nr_bracket(f, g);
    o.require(fg == Rational(-sign_power(m * n)) * nr_bracket(g, f), "antisymmetry, triple " + std::to_string(t));
    auto lhs = nr_bracket(f, nr_bracket(g, h));
    auto rhs = nr_bracket(nr_bracket(f, g), h) + Rational(sign_power(m * n)) * nr_bracket(g, nr_bracket(f, h));
    o.require(lhs == rhs, "Jacobi, triple " + std::to_string(t));
    o.require(!lhs.truncated() && !rhs.truncated(), "truncated bracket, triple " + std::to_string(t));
  }
  o.detail = std::to_string(trials) + " random triples, degrees -1..2, arities <= 3, dims <= 3";
  return o;
}

std::vector<ContextPtr> two_dim_contexts() {
  return {adjoint_context(graded_pair()), adjoint_context(graded_pair_up()), adjoint_context(lie_as_sgla(two_dim_lie())),
          adjoint_context(curved_pair())};
}

using Sample = std::array<SymMultiMap, 3>;

std::vector<std::pair<Rational, Sample>> dgla_samples(const ContextPtr& c, Rng& rng) {
  std::vector<std::pair<Rational, Sample>> out;
  for (Rational lambda : {Rational(0), Rational(1), Rational(-1)})
    for (int t = 0; t < 2; ++t) {
      auto mk = [&] { return random_map(rng, c->h.space(), c->g.space(), rng.uniform(-1, 1), rng.uniform(0, 2)); };
      out.push_back({lambda, {mk(), mk(), mk()}});
    }
  return out;
}

// 2. d^2 = 0, Leibniz and Jacobi for the controlling dgLa
Outcome dgla_axioms() {
  Outcome o;
  Rng rng(1002);
  size_t count = 0;
  for (const auto& c : two_dim_contexts())
    for (const auto& [lambda, s] : dgla_samples(c, rng)) {
      auto rep = check_dgla_axioms(*c, lambda, {s});
      o.require(rep.holds(), rep.render());
      ++count;
    }
  o.detail = std::to_string(count) + " samples over 4 two-dimensional contexts, weights 0, 1, -1";
  o.require(count >= 20, "too few samples");
  return o;
}

// 3. closed-form bracket against the derived bracket in C*(g+h, g+h)
Outcome derived_bracket_oracle() {
  Outcome o;
  Rng rng(1002);  // same samples as criterion 2
  size_t count = 0;
  for (const auto& c : two_dim_contexts())
    for (const auto& [lambda, s] : dgla_samples(c, rng))
      for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}, std::pair{1, 1}}) {
        o.require(controlling_bracket(*c, s[i], s[j]) == derived_bracket(*c, s[i], s[j]), "bracket mismatch");
        o.require(dgla_differential(*c, lambda, s[i]) == derived_differential(*c, lambda, s[i]), "differential mismatch");
        ++count;
      }
  o.detail = std::to_string(count) + " bracket pairs compared componentwise";
  return o;
}

// 4. operator identity holds iff the MC defect vanishes
Outcome operator_mc_equivalence() {
  Outcome o;
  std::vector<NamedOperator> ops = weight_one_operators();
  for (auto& w : weight_zero_operators()) ops.push_back(w);
  size_t operators = ops.size();
  // perturb one linear constant of each operator
  size_t perturbed_failing = 0;
  for (size_t i = 0; i < operators; ++i) {
    const auto& no = ops[i];
    const auto& H = *no.op.context->h.space();
    const auto& G = *no.op.context->g.space();
    std::vector<std::pair<size_t, size_t>> slots;
    for (size_t j = 0; j < H.dim(); ++j)
      for (size_t r = 0; r < G.dim(); ++r)
        if (G.degree(r) == H.degree(j)) slots.push_back({r, j});
    for (const auto& [r, j] : slots) {
      SymMultiMap T = no.op.T;
      T.add(std::vector<size_t>{j}, Vector::basis(r, 1));
      HomotopyOOperator p(no.op.context, T, no.op.weight);
      if (!check_o_operator(p, 4).holds()) {
        ops.push_back({no.name + " perturbed", p});
        ++perturbed_failing;
        break;
      }
    }
  }
  for (const auto& no : ops) {
    auto direct = o_operator_defect(*no.op.context, no.op.T, no.op.weight, 4);
    auto mc = mc_defect(no.op, 4);
    bool op_holds = check_o_operator(no.op, 4).holds();
    o.require(op_holds == mc.is_zero(), no.name + ": verdict disagrees with MC defect");
    o.require(direct == Rational(-1) * mc, no.name + ": defects differ beyond sign");
    bool is_perturbed = no.name.find("perturbed") != std::string::npos;
    if (is_perturbed) o.require(!op_holds && !check_mc(*no.op.context, no.op.T, no.op.weight, 4).holds(), no.name + " passes");
    if (!is_perturbed) o.require(op_holds, no.name + " is not an operator");
  }
  o.require(ops.size() >= 10, "corpus too small");
  o.require(perturbed_failing >= 5, "too few perturbed non-operators");
  o.detail = std::to_string(operators) + " operators and " + std::to_string(perturbed_failing) + " perturbed non-operators, p <= 4";
  return o;
}

// 5. derived op-homotopy post-Lie structures and the homomorphism Psi
Outcome derive_pipeline() {
  Outcome o;
  size_t derived = 0;
  for (const auto& no : weight_one_operators()) {
    auto S = derive_op_homotopy_post_lie(no.op);
    auto rep = check_op_homotopy_post_lie(S, 4);
    o.require(rep.holds(), no.name + ": derived structure fails\n" + rep.render());
    auto dc = derivation_context(no.op.context->h);
    o.require(mc_to_op_homotopy(dc, psi(*no.op.context, dc.der, no.op.T)).products == S.products, no.name + ": MC route differs");
    ++derived;
  }
  Rng rng(1005);
  size_t samples = 0;
  std::vector<ContextPtr> contexts = {adjoint_context(graded_pair()), adjoint_context(graded_pair_up()),
                                      adjoint_context(lie_as_sgla(two_dim_lie())), adjoint_context(lie_with_central_tail())};
  for (const auto& c : contexts) {
    auto dc = derivation_context(c->h);
    for (Rational lambda : {Rational(1), Rational(0), Rational(-1)})
      for (int t = 0; t < 2; ++t) {
        auto f = random_map(rng, c->h.space(), c->g.space(), rng.uniform(0, 1), rng.uniform(0, 2));
        auto g = random_map(rng, c->h.space(), c->g.space(), rng.uniform(0, 1), rng.uniform(0, 2));
        auto pf = psi(*c, dc.der, f), pg = psi(*c, dc.der, g);
        o.require(psi(*c, dc.der, controlling_bracket(*c, f, g)) == controlling_bracket(*dc.context, pf, pg), "Psi bracket");
        o.require(psi(*c, dc.der, dgla_differential(*c, lambda, f)) == dgla_differential(*dc.context, lambda, pf), "Psi differential");
        ++samples;
      }
  }
  o.require(samples >= 20, "too few samples");
  o.detail = std::to_string(derived) + " weight-1 operators derived and checked to n = 4; Psi on " + std::to_string(samples) +
             " random samples";
  return o;
}

// 6. T is a curved morphism from the induced L-infinity algebra
Outcome curved_morphisms() {
  Outcome o;
  size_t count = 0;
  std::vector<NamedOperator> ops = weight_one_operators();
  for (auto& w : weight_zero_operators()) ops.push_back(w);
  for (const auto& no : ops) {
    auto S = derive_op_homotopy_post_lie(no.op);
    auto l = induced_linfty(S);
    o.require(check_curved_linfty(l).holds(), no.name + ": induced brackets fail");
    auto rep = check_curved_morphism(no.op.T, l, no.op.context->g, 4);
    o.require(rep.holds(), no.name + ": not a curved morphism\n" + rep.render());
    ++count;
  }
  o.detail = std::to_string(count) + " operators at weights 1 and 0, n <= 4";
  return o;
}

// 7. post-Lie cohomology against the sub-adjacent Lie algebra cohomology
Outcome cohomology_iso() {
  Outcome o;
  size_t count = 0;
  for (const auto& [name, R] : rep_corpus()) {
    auto rep = check_iso_with_subadjacent(R, 3);
    o.require(rep.holds(), name + "\n" + rep.render());
    auto D = der_module(R);
    for (size_t n = 1; n <= 2; ++n) {
      Matrix sq = coboundary_matrix(R, D, n + 1) * coboundary_matrix(R, D, n);
      o.require(sq.is_zero(), name + ": delta squared is nonzero");
    }
    ++count;
  }
  auto ab = trivial_rep(plain(LieAlgebra::abelian({"x", "y"})), 1);
  size_t h1 = cohomology_dim(ab, 1), h2 = cohomology_dim(ab, 2);
  o.require(h1 == 2 && h2 == 4, "abelian/zero example gives H^1 = " + std::to_string(h1) + ", H^2 = " + std::to_string(h2));
  o.detail = std::to_string(count) + " representations, n = 1..3; abelian/zero example H^1 = " + std::to_string(h1) +
             ", H^2 = " + std::to_string(h2);
  return o;
}

bool same_outcomes(const IdentityReport& a, const IdentityReport& b) {
  if (a.holds() != b.holds()) return false;
  for (const auto& v : b.verdicts) {
    const Verdict* u = a.find(v.name);
    if (u && u->holds != v.holds) return false;
  }
  return true;
}

// every stored constant of a 2-term datum, bumped by one
std::vector<TwoTermData> single_constant_perturbations(const TwoTermData& d) {
  std::vector<TwoTermData> out;
  const size_t n = d.dim0(), m = d.dim1();
  for (size_t x = 0; x < n; ++x)
    for (size_t y = x + 1; y < n; ++y)
      for (size_t r = 0; r < n; ++r) {
        TwoTermData p = d;
        Vector b = p.g0.bracket(x, y) + Vector::basis(r);
        p.g0.bracket.set(x, y, b);
        p.g0.bracket.set(y, x, -b);
        out.push_back(p);
      }
  for (size_t x = 0; x < n; ++x)
    for (size_t r = 0; r < m; ++r)
      for (size_t c = 0; c < m; ++c)
        for (auto field : {&TwoTermData::rho, &TwoTermData::mu, &TwoTermData::nu}) {
          TwoTermData p = d;
          (p.*field).mats[x](r, c) += 1;
          out.push_back(p);
        }
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < m; ++c) {
      TwoTermData p = d;
      p.o1(r, c) += 1;
      out.push_back(p);
    }
  for (size_t x = 0; x < n; ++x)
    for (size_t r = 0; r < n; ++r)
      for (size_t c = 0; c < n; ++c) {
        TwoTermData p = d;
        p.o2.left(x)(r, c) += 1;
        out.push_back(p);
      }
  for (const auto& I : detail::subsets(n, 2))
    for (size_t z = 0; z < n; ++z)
      for (size_t a = 0; a < m; ++a) {
        TwoTermData p = d;
        Matrix cur = p.o3.data.at_basis(I);
        cur(a, z) += 1;
        p.o3.data.set(I, cur);
        out.push_back(p);
      }
  return out;
}

// 8. skeletal classification and the 2-term checker
Outcome two_term_classification() {
  Outcome o;
  auto list = triples();
  auto heis = trivial_rep(plain(heisenberg()), 1);
  auto w = non_coboundary_cocycle(heis);
  o.require(w.has_value(), "no non-coboundary cocycle found");
  if (w) list.push_back({"heisenberg, non-coboundary cocycle", {heis, *w}});
  size_t nonzero = 0;
  size_t total = 0, still_valid = 0;
  for (const auto& [name, t] : list) {
    if (!t.cocycle.data.value.empty()) ++nonzero;
    TwoTermData d = skeletal_from_triple(t);
    o.require(check_two_term(d).holds(), name + ": constructed data fails");
    SkeletalTriple back = triple_from_skeletal(d);
    o.require(back == t, name + ": triple does not round trip");
    o.require(skeletal_from_triple(back) == d, name + ": data does not round trip");
    size_t failing = 0;
    for (const auto& p : single_constant_perturbations(d)) {
      bool verdict = check_two_term(p, workers()).holds();
      bool oracle = check_shifted(to_shifted(p), 4, workers()).holds();
      o.require(verdict == oracle, name + ": perturbation verdict disagrees with the shifted checker");
      if (!verdict) ++failing;
      if (verdict) ++still_valid;
      ++total;
    }
    o.require(failing > 0, name + ": no perturbation fails");
  }
  o.detail = std::to_string(list.size()) + " triples (" + std::to_string(nonzero) + " with nonzero cocycle, one outside the coboundaries); " +
             std::to_string(total - still_valid) + " of " + std::to_string(total) +
             " single-constant perturbations fail, all agreeing with the shifted checker";
  return o;
}

// 9. shifted form against the degree-1 form
Outcome shift_equivalence() {
  Outcome o;
  std::vector<std::pair<std::string, ShiftedOpHomotopyPostLie>> cases;
  for (auto& [name, t] : triples()) cases.push_back({name, to_shifted(skeletal_from_triple(t))});
  cases.push_back({"identity crossed module", to_shifted(identity_crossed_module(minus_bracket(two_dim_lie())))});

  // three-term complex z -> y -> x with y acting by degree
  auto g = make_space({{"x", 1}, {"y", 0}, {"z", -1}});
  AntiMultiMap br(g, g, 0, 2);
  br.set({1, 0}, Vector::basis(0, -1));
  br.set({1, 2}, Vector::basis(2));
  AntiProducts chain(g, 1, -1, 3);
  Matrix d(3, 3);
  d(1, 2) = 1;
  chain.set(std::span<const size_t>{}, d);
  cases.push_back({"three-term complex", ShiftedOpHomotopyPostLie(g, br, chain)});
  AntiProducts with_product = chain;
  Matrix y_acts(3, 3);
  y_acts(0, 0) = -1;
  y_acts(2, 2) = 1;
  with_product.set({1}, y_acts);
  cases.push_back({"three-term complex with y > .", ShiftedOpHomotopyPostLie(g, br, with_product)});
  AntiProducts square(g, 1, -1, 3);
  Matrix d2 = d;
  d2(0, 1) = 1;  // z -> y -> x, d^2 != 0
  square.set(std::span<const size_t>{}, d2);
  cases.push_back({"three-term, nonzero square", ShiftedOpHomotopyPostLie(g, br, square)});

  size_t valid = 0, invalid = 0;
  bool square_rejected = false;
  for (const auto& [name, S] : cases) {
    auto a = check_shifted(S, 3);
    auto b = check_op_homotopy_post_lie(shift_correspondence(S), 3);
    o.require(same_outcomes(a, b), name + ": shifted and degree-1 checks disagree\n" + a.render() + b.render());
    if (a.holds()) {
      ++valid;
      auto H = cohomology_post_lie(S);
      o.require(H.report.holds(), name + ": induced structure on cohomology fails\n" + H.report.render());
    } else {
      ++invalid;
    }
    if (name == "three-term, nonzero square") square_rejected = !a.holds() && !b.holds();
  }
  o.require(square_rejected, "a unary product with nonzero square was accepted");
  o.require(cases.size() >= 5, "too few examples");
  o.detail = std::to_string(cases.size()) + " two- and three-term structures (" + std::to_string(valid) + " valid, " +
             std::to_string(invalid) + " invalid), n <= 3";
  return o;
}

// 10. byte-identical reports and exit codes over the document corpus
Outcome cli_determinism() {
  Outcome o;
  size_t runs = 0;
  for (const auto& c : corpus_jobs())
    for (const char* fmt : {"text", "json"}) {
      auto a = run_kernel({c.job, c.file, "--format", fmt});
      auto b = run_kernel({c.job, c.file, "--format", fmt});
      o.require(a.out == b.out && a.err == b.err, c.file + " " + c.job + ": reports differ");
      o.require(a.code == c.expected_exit && b.code == c.expected_exit,
                c.file + " " + c.job + ": exit " + std::to_string(a.code) + ", expected " + std::to_string(c.expected_exit));
      runs += 2;
    }
  o.require(run_kernel({"no-such-job", std::string(HPL_DOCS_DIR) + "/minimal.json"}).code == 2, "unknown job is not a usage error");
  o.detail = std::to_string(runs) + " kernel runs over the example corpus";
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"NR bracket is graded Lie", nr_axioms},
      {"controlling dgLa axioms", dgla_axioms},
      {"closed-form bracket equals derived bracket", derived_bracket_oracle},
      {"operator identity iff Maurer-Cartan", operator_mc_equivalence},
      {"derived op-homotopy post-Lie structures and Psi", derive_pipeline},
      {"operators are curved morphisms", curved_morphisms},
      {"post-Lie cohomology", cohomology_iso},
      {"2-term skeletal classification", two_term_classification},
      {"shift correspondence", shift_equivalence},
      {"CLI determinism and exit codes", cli_determinism},
  };
  bool all = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    std::printf("criterion %zu %s: %s. %s (%.1fs)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str(), secs);
    for (const auto& p : o.problems) std::printf("  %s\n", p.c_str());
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
