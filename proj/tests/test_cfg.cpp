#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdfa/cfg.hpp"
#include "pdfa/parser.hpp"
#include "support.hpp"

using namespace pdfa;

namespace {

std::set<std::tuple<Label, Label, BranchKind>> edge_set(const FlowGraph& g) {
  std::set<std::tuple<Label, Label, BranchKind>> out;
  for (const Edge& e : g.edges) out.insert({e.from, e.to, e.branch});
  return out;
}

}  // namespace

TEST_CASE("init of the bundled programs") {
  CHECK(init_label(*pdfa::testing::load_program("running.pw").body) == 1);
  CHECK(init_label(*pdfa::testing::load_program("countprimes.pw").body) == 1);
  Program single = parse_program("var x:0..1; [skip]^7");
  CHECK(init_label(*single.body) == 7);
}

TEST_CASE("final of the bundled programs") {
  CHECK(final_labels(*pdfa::testing::load_program("running.pw").body) ==
        std::set<Label>{5, 6});
  CHECK(final_labels(*pdfa::testing::load_program("countprimes.pw").body) ==
        std::set<Label>{2});
  Program two = parse_program("var x:0..1; [skip]^1; [skip]^2");
  CHECK(final_labels(*two.body) == std::set<Label>{2});
}

TEST_CASE("flow of the running example") {
  FlowGraph g = flow(pdfa::testing::load_program("running.pw"));
  CHECK(g.init == 1);
  CHECK(g.finals == std::set<Label>{5, 6});
  CHECK(edge_set(g) ==
        std::set<std::tuple<Label, Label, BranchKind>>{
            {1, 2, BranchKind::Unconditional},
            {2, 3, BranchKind::Unconditional},
            {3, 4, BranchKind::Unconditional},
            {4, 5, BranchKind::True},
            {4, 6, BranchKind::False}});
  CHECK(g.block(1).kind == BlockKind::Random);
  CHECK(g.block(3).kind == BlockKind::Assign);
  CHECK(g.block(4).kind == BlockKind::Test);
  CHECK(g.true_successor(4) == 5);
  CHECK(g.false_successors(4) == std::vector<Label>{6});
}

TEST_CASE("flow of the prime counting program") {
  FlowGraph g = flow(pdfa::testing::load_program("countprimes.pw"));
  CHECK(edge_set(g) ==
        std::set<std::tuple<Label, Label, BranchKind>>{
            {1, 2, BranchKind::Unconditional},
            {2, 3, BranchKind::True},
            {3, 4, BranchKind::True},
            {3, 5, BranchKind::False},
            {4, 6, BranchKind::Unconditional},
            {5, 6, BranchKind::Unconditional},
            {6, 2, BranchKind::Unconditional}});
  // The while test has no explicit false edge; the exit is the program's
  // final environment.
  CHECK(g.finals == std::set<Label>{2});
  CHECK(g.false_successors(2).empty());
}

TEST_CASE("elementary blocks have empty flow") {
  FlowGraph g = flow(parse_program("var x:0..1; x := 1"));
  CHECK(g.edges.empty());
  CHECK(g.init == 1);
  CHECK(g.finals == std::set<Label>{1});
}

TEST_CASE("while followed by code gets the loop-exit edge from sequencing") {
  Program p = parse_program(
      "var x:0..3; while x > 0 do [x := x - 1]^2 od^1; [skip]^3");
  FlowGraph g = flow(p);
  CHECK(edge_set(g) ==
        std::set<std::tuple<Label, Label, BranchKind>>{
            {1, 2, BranchKind::True},
            {1, 3, BranchKind::Unconditional},
            {2, 1, BranchKind::Unconditional}});
  CHECK(g.false_successors(1) == std::vector<Label>{3});
}

TEST_CASE("every non-init label of a generated program has an in-edge") {
  for (unsigned seed = 100; seed < 140; ++seed) {
    pdfa::testing::ProgramGenerator gen(seed);
    Program p = gen.generate();
    FlowGraph g = flow(p);
    for (auto& [l, b] : g.blocks) {
      if (l != g.init) CHECK(!g.in_edges(l).empty());
      // Only tests branch; everything else has at most one way out.
      if (b.kind != BlockKind::Test) CHECK(g.out_edges(l).size() <= 1);
    }
  }
}

TEST_CASE("reverse flow swaps entries and finals") {
  FlowGraph g = flow(pdfa::testing::load_program("running.pw"));
  FlowGraph r = g.reversed();
  CHECK(r.finals == std::set<Label>{1});
  for (const Edge& e : g.edges) {
    bool found = false;
    for (const Edge& re : r.edges)
      found = found || (re.from == e.to && re.to == e.from);
    CHECK(found);
  }
}

TEST_CASE("edges are sorted deterministically") {
  FlowGraph g = flow(pdfa::testing::load_program("countprimes.pw"));
  for (std::size_t i = 1; i < g.edges.size(); ++i) {
    bool ordered = g.edges[i - 1].from < g.edges[i].from ||
                   (g.edges[i - 1].from == g.edges[i].from &&
                    g.edges[i - 1].to < g.edges[i].to);
    CHECK(ordered);
  }
}

TEST_CASE("dot output marks branch kinds") {
  std::string dot = to_dot(flow(pdfa::testing::load_program("running.pw")));
  CHECK(dot.find("n4 -> n5 [label=\"T\"]") != std::string::npos);
  CHECK(dot.find("n4 -> n6 [label=\"F\"]") != std::string::npos);
  CHECK(dot.find("shape=diamond") != std::string::npos);
}
