#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pdfa/abstraction.hpp"
#include "pdfa/parser.hpp"
#include "pdfa/semantics.hpp"
#include "support.hpp"

using namespace pdfa;

namespace {

Program three_vars() { return pdfa::testing::load_program("running.pw"); }

bool row_stochastic(const DenseMatrix& m, double tol = 1e-9) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.at(r, c) < -tol) return false;
      sum += m.at(r, c);
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("state enumeration uses the first variable as most significant") {
  StateSpace ss(VarDecls({{"x", 4}, {"y", 4}}));
  CHECK(ss.size() == 16);
  for (long long x = 0; x < 4; ++x)
    for (long long y = 0; y < 4; ++y) {
      CHECK(ss.index({x, y}) == static_cast<std::size_t>(4 * x + y));
      CHECK(ss.state(static_cast<std::size_t>(4 * x + y)) == StateTuple{x, y});
    }
}

TEST_CASE("expression evaluation") {
  Program p = three_vars();
  StateSpace ss(p.decls);
  // x + y mod 4 at (x=3, y=2): the assignment reduction wraps to 1.
  const Stmt* assign = p.body->first->second.get();
  REQUIRE(assign->kind == Stmt::Kind::Assign);
  long long raw = eval_expr(*assign->expr, {3, 2, 0}, ss);
  CHECK(reduce_to_range(raw, 4) == 1);

  const Stmt* iff = p.body->second.get();
  CHECK(eval_bexpr(*iff->cond, {3, 0, 0}, ss));
  CHECK(!eval_bexpr(*iff->cond, {2, 0, 0}, ss));

  CHECK(!is_prime(9));
  CHECK(is_prime(2));
  CHECK(!is_prime(0));
  CHECK(!is_prime(1));
  Program pr = parse_program("var i:0..9; if prime(i) then skip else skip fi");
  StateSpace ssi(pr.decls);
  CHECK(!eval_bexpr(*pr.body->cond, {9}, ssi));
  CHECK(eval_bexpr(*pr.body->cond, {7}, ssi));
}

TEST_CASE("modulo by zero is an execution fault") {
  Program p = parse_program("var x:0..3; x := x mod (x - x)");
  StateSpace ss(p.decls);
  CHECK_THROWS_AS(eval_expr(*p.body->expr, {1}, ss), InputError);
}

TEST_CASE("negative intermediate values wrap upward on assignment") {
  CHECK(reduce_to_range(-1, 3) == 2);
  CHECK(reduce_to_range(-3, 3) == 0);
  CHECK(reduce_to_range(5, 3) == 2);
}

TEST_CASE("skip block is the identity") {
  StateSpace ss(VarDecls({{"x", 3}}));
  BlockInfo skip{BlockKind::Skip, {}, {}, {}, {}};
  CHECK(block_matrix(skip, ss).max_abs_diff(DenseMatrix::identity(3)) == 0.0);
}

TEST_CASE("block matrices are row stochastic across generated programs") {
  for (unsigned seed = 300; seed < 330; ++seed) {
    pdfa::testing::ProgramGenerator gen(seed);
    Program p = gen.generate();
    StateSpace ss(p.decls);
    FlowGraph g = flow(p);
    for (auto& [l, b] : g.blocks) {
      if (b.kind == BlockKind::Test) continue;
      CHECK(row_stochastic(block_matrix(b, ss)));
    }
  }
}

TEST_CASE("appendix operators: dense block semantics + lift") {
  Program p = three_vars();
  StateSpace ss(p.decls);
  FlowGraph g = flow(p);
  Abstraction abs = parse_abstraction_spec("forgetful:z", ss);
  REQUIRE(abs.classes() == 16);

  DenseMatrix f1 = lift_operator(block_matrix(g.block(1), ss), abs.a);
  DenseMatrix f2 = lift_operator(block_matrix(g.block(2), ss), abs.a);
  DenseMatrix f3 = lift_operator(block_matrix(g.block(3), ss), abs.a);
  CHECK(f1.max_abs_diff(pdfa::testing::fixture_f1()) < 1e-12);
  CHECK(f2.max_abs_diff(pdfa::testing::fixture_f2()) < 1e-12);
  CHECK(f3.max_abs_diff(pdfa::testing::fixture_f3()) < 1e-12);

  // The blocks after the branch touch only z, so they abstract to the
  // identity.
  DenseMatrix f5 = lift_operator(block_matrix(g.block(5), ss), abs.a);
  DenseMatrix f6 = lift_operator(block_matrix(g.block(6), ss), abs.a);
  CHECK(f5.max_abs_diff(DenseMatrix::identity(16)) < 1e-12);
  CHECK(f6.max_abs_diff(DenseMatrix::identity(16)) < 1e-12);

  // The abstract branch test selects x > 2: ones on the last four
  // diagonal entries; the reference matrix is exactly its complement.
  DenseMatrix p4 = lift_operator(test_matrix(*g.block(4).test, ss), abs.a);
  DenseMatrix expected(16, 16);
  for (std::size_t i = 12; i < 16; ++i) expected.at(i, i) = 1.0;
  CHECK(p4.max_abs_diff(expected) < 1e-12);
  CHECK((DenseMatrix::identity(16) - p4)
            .max_abs_diff(pdfa::testing::fixture_p4_printed()) < 1e-12);
}

TEST_CASE("branch probability is the selected mass") {
  StateSpace ss(VarDecls({{"x", 3}}));
  Program p = pdfa::testing::load_program("decrement.pw");
  DenseMatrix proj = test_matrix(*p.body->cond, ss);
  ProbVector rho(std::vector<double>{0.2, 0.3, 0.5});
  CHECK(branch_probability(rho, proj) == doctest::Approx(0.8).epsilon(1e-12));
  ProbVector point = ProbVector::point_mass(3, 2);
  CHECK(branch_probability(point, proj) == doctest::Approx(1.0));

  // Lifted pair space: uniform x in 0..3 against x > 2 leaves a quarter.
  StateSpace xy(VarDecls({{"x", 4}, {"y", 4}}));
  Program rp = three_vars();
  DenseMatrix proj2 = test_matrix(*rp.body->second->cond, xy);
  CHECK(branch_probability(ProbVector::uniform(16), proj2) ==
        doctest::Approx(0.25));
}

TEST_CASE("test probabilities are complementary for any distribution") {
  StateSpace ss(VarDecls({{"x", 4}, {"y", 4}}));
  Program p = three_vars();
  const BExpr& cond = *p.body->second->cond;
  DenseMatrix proj = test_matrix(cond, ss);
  DenseMatrix comp = DenseMatrix::identity(16) - proj;
  std::mt19937 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    ProbVector rho(16);
    double sum = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
      rho[i] = std::uniform_real_distribution<double>(0, 1)(rng);
      sum += rho[i];
    }
    rho = rho.scaled(1.0 / sum);
    CHECK(branch_probability(rho, proj) + branch_probability(rho, comp) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("sos steps: sequencing, branching, sampling") {
  Program p = pdfa::testing::load_program("example1.pw");
  StateSpace ss(p.decls);
  Rng rng(1);

  // skip; S advances into S with the state unchanged.
  Program sp = parse_program("var x:0..1; [skip]^1; [x := 1]^2");
  Config c{sp.body, {0}};
  Config c2 = sos_step(c, StateSpace(sp.decls), rng);
  REQUIRE(!c2.stopped());
  CHECK(init_label(*c2.rest) == 2);
  CHECK(c2.state == StateTuple{0});

  // The branch goes to the skip arm exactly when x = 1.
  const StmtPtr iff = p.body->second;
  Config t1 = sos_step({iff, {1}}, ss, rng);
  REQUIRE(!t1.stopped());
  CHECK(init_label(*t1.rest) == 3);
  Config t0 = sos_step({iff, {0}}, ss, rng);
  REQUIRE(!t0.stopped());
  CHECK(init_label(*t0.rest) == 4);

  // Random assignment hits both values for a fair coin.
  int seen[2] = {0, 0};
  for (int i = 0; i < 200; ++i) {
    Rng r(trial_seed(42, static_cast<std::uint64_t>(i)));
    Config after = sos_step({p.body, {0}}, ss, r);
    REQUIRE(!after.stopped());
    ++seen[after.state[0]];
  }
  CHECK(seen[0] > 50);
  CHECK(seen[1] > 50);
}

TEST_CASE("while unrolls by one body copy") {
  Program p = parse_program(
      "var x:0..3; while x > 0 do [x := x - 1]^2 od^1");
  StateSpace ss(p.decls);
  Rng rng(3);
  Config c{p.body, {2}};
  Config c1 = sos_step(c, ss, rng);
  REQUIRE(!c1.stopped());
  CHECK(init_label(*c1.rest) == 2);
  Config done = sos_step({p.body, {0}}, ss, rng);
  CHECK(done.stopped());
}

TEST_CASE("monte carlo: deterministic program has unit frequencies") {
  Program p = parse_program("var x:0..3; [x := 1]^1; [x := x + 1]^2; [skip]^3");
  auto report = run_monte_carlo(p, ProbVector::uniform(4), 500, 7);
  CHECK(report.nonterminated == 0);
  REQUIRE(report.edges.size() == 2);
  for (const EdgeCount& e : report.edges) {
    CHECK(e.frequency == 1.0);
    CHECK(e.count == 500);
  }
}

TEST_CASE("monte carlo matches the fair coin on the branch program") {
  Program p = pdfa::testing::load_program("example1.pw");
  auto report = run_monte_carlo(p, ProbVector::uniform(2), 100000, 42);
  double bound = 3.0 * std::sqrt(0.5 * 0.5 / 100000.0);
  for (const EdgeCount& e : report.edges) {
    if (e.from != 2) continue;
    CHECK(std::abs(e.frequency - 0.5) <= bound);
  }
  CHECK(report.nonterminated == 0);

  // Determinism: the identical invocation reproduces the counts.
  auto again = run_monte_carlo(p, ProbVector::uniform(2), 100000, 42);
  REQUIRE(again.edges.size() == report.edges.size());
  for (std::size_t i = 0; i < report.edges.size(); ++i)
    CHECK(again.edges[i].count == report.edges[i].count);
}

TEST_CASE("monte carlo branch agreement on the running example") {
  Program p = three_vars();
  auto report = run_monte_carlo(p, ProbVector::uniform(64), 100000, 42);
  double bound = 3.0 * std::sqrt(0.25 * 0.75 / 100000.0);
  bool saw45 = false;
  for (const EdgeCount& e : report.edges) {
    if (e.from == 4 && e.to == 5) {
      saw45 = true;
      CHECK(std::abs(e.frequency - 0.25) <= bound);
    }
    if (e.from == 4 && e.to == 6)
      CHECK(std::abs(e.frequency - 0.75) <= bound);
  }
  CHECK(saw45);
}

TEST_CASE("monte carlo reports nontermination instead of hanging") {
  Program p = parse_program("var x:0..1; while x < 1 do [skip]^2 od^1");
  auto report = run_monte_carlo(p, ProbVector::point_mass(2, 0), 3, 1, 500);
  CHECK(report.nonterminated == 3);
}
