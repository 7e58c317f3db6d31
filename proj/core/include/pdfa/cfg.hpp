#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pdfa/ast.hpp"

namespace pdfa {

enum class BlockKind { Skip, Assign, Random, Test };

/// Self-contained view of one labelled block; the expression trees are
/// shared with the originating program.
struct BlockInfo {
  BlockKind kind;
  std::string var;   // Assign/Random target
  ExprPtr expr;      // Assign rhs
  DistLiteral dist;  // Random rhs
  BExprPtr test;     // Test condition
};

enum class BranchKind { Unconditional, True, False };

struct Edge {
  Label from;
  Label to;
  BranchKind branch;

  friend bool operator<(const Edge& a, const Edge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  }
};

/// Flow graph of a labelled program. Edges are kept sorted by
/// (from, to). A while test never has an explicit false edge: the loop
/// exit is whatever edge the enclosing sequencing provides (or, at a
/// final label, the exit of the program).
struct FlowGraph {
  std::map<Label, BlockInfo> blocks;
  Label init = kNoLabel;
  std::set<Label> finals;
  std::vector<Edge> edges;

  const BlockInfo& block(Label l) const;
  std::vector<Edge> out_edges(Label l) const;
  std::vector<Edge> in_edges(Label l) const;
  /// The true successor of a test label.
  std::optional<Label> true_successor(Label l) const;
  /// Successors of a test label not marked true: the explicit false
  /// branch of an if, or the loop-exit edge of a while.
  std::vector<Label> false_successors(Label l) const;
  /// Same graph with every edge reversed; entry points become the finals.
  FlowGraph reversed() const;
};

Label init_label(const Stmt& s);
std::set<Label> final_labels(const Stmt& s);
FlowGraph flow(const Program& p);

/// Graphviz rendering; true branches are labelled "T", false ones "F".
std::string to_dot(const FlowGraph& g);

}  // namespace pdfa
