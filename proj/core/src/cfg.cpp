#include "pdfa/cfg.hpp"

#include <algorithm>
#include <sstream>

namespace pdfa {

Label init_label(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Seq:
      return init_label(*s.first);
    default:
      return s.label;
  }
}

std::set<Label> final_labels(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Seq:
      return final_labels(*s.second);
    case Stmt::Kind::If: {
      std::set<Label> out = final_labels(*s.first);
      std::set<Label> e = final_labels(*s.second);
      out.insert(e.begin(), e.end());
      return out;
    }
    case Stmt::Kind::While:
      return {s.label};
    default:
      return {s.label};
  }
}

namespace {

void require_labelled(const Stmt& s) {
  for (Label l : collect_labels(s))
    if (l == kNoLabel)
      throw InputError("flow requires a fully labelled program");
}

void collect_blocks(const Stmt& s, std::map<Label, BlockInfo>& out) {
  switch (s.kind) {
    case Stmt::Kind::Skip:
      out[s.label] = BlockInfo{BlockKind::Skip, {}, {}, {}, {}};
      return;
    case Stmt::Kind::Assign:
      out[s.label] = BlockInfo{BlockKind::Assign, s.var, s.expr, {}, {}};
      return;
    case Stmt::Kind::Random:
      out[s.label] = BlockInfo{BlockKind::Random, s.var, {}, s.dist, {}};
      return;
    case Stmt::Kind::Seq:
      collect_blocks(*s.first, out);
      collect_blocks(*s.second, out);
      return;
    case Stmt::Kind::If:
      out[s.label] = BlockInfo{BlockKind::Test, {}, {}, {}, s.cond};
      collect_blocks(*s.first, out);
      collect_blocks(*s.second, out);
      return;
    case Stmt::Kind::While:
      out[s.label] = BlockInfo{BlockKind::Test, {}, {}, {}, s.cond};
      collect_blocks(*s.first, out);
      return;
  }
}

void collect_edges(const Stmt& s, std::vector<Edge>& out) {
  switch (s.kind) {
    case Stmt::Kind::Skip:
    case Stmt::Kind::Assign:
    case Stmt::Kind::Random:
      return;  // elementary blocks contribute no edges
    case Stmt::Kind::Seq: {
      collect_edges(*s.first, out);
      collect_edges(*s.second, out);
      Label target = init_label(*s.second);
      for (Label l : final_labels(*s.first))
        out.push_back({l, target, BranchKind::Unconditional});
      return;
    }
    case Stmt::Kind::If:
      collect_edges(*s.first, out);
      collect_edges(*s.second, out);
      out.push_back({s.label, init_label(*s.first), BranchKind::True});
      out.push_back({s.label, init_label(*s.second), BranchKind::False});
      return;
    case Stmt::Kind::While:
      collect_edges(*s.first, out);
      out.push_back({s.label, init_label(*s.first), BranchKind::True});
      for (Label l : final_labels(*s.first))
        out.push_back({l, s.label, BranchKind::Unconditional});
      return;
  }
}

}  // namespace

FlowGraph flow(const Program& p) {
  require_labelled(*p.body);
  FlowGraph g;
  collect_blocks(*p.body, g.blocks);
  g.init = init_label(*p.body);
  g.finals = final_labels(*p.body);
  collect_edges(*p.body, g.edges);
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

const BlockInfo& FlowGraph::block(Label l) const {
  auto it = blocks.find(l);
  if (it == blocks.end())
    throw InputError("unknown label " + std::to_string(l));
  return it->second;
}

std::vector<Edge> FlowGraph::out_edges(Label l) const {
  std::vector<Edge> out;
  for (const Edge& e : edges)
    if (e.from == l) out.push_back(e);
  return out;
}

std::vector<Edge> FlowGraph::in_edges(Label l) const {
  std::vector<Edge> out;
  for (const Edge& e : edges)
    if (e.to == l) out.push_back(e);
  return out;
}

std::optional<Label> FlowGraph::true_successor(Label l) const {
  for (const Edge& e : edges)
    if (e.from == l && e.branch == BranchKind::True) return e.to;
  return std::nullopt;
}

std::vector<Label> FlowGraph::false_successors(Label l) const {
  std::vector<Label> out;
  for (const Edge& e : edges)
    if (e.from == l && e.branch != BranchKind::True) out.push_back(e.to);
  return out;
}

FlowGraph FlowGraph::reversed() const {
  FlowGraph r;
  r.blocks = blocks;
  r.finals = {init};
  // Entry points of the reverse graph are this graph's finals; keep one
  // canonical init for convenience.
  r.init = finals.empty() ? kNoLabel : *finals.begin();
  for (const Edge& e : edges) r.edges.push_back({e.to, e.from, e.branch});
  std::sort(r.edges.begin(), r.edges.end());
  return r;
}

std::string to_dot(const FlowGraph& g) {
  std::ostringstream os;
  os << "digraph cfg {\n";
  for (const auto& [l, b] : g.blocks) {
    std::string label;
    switch (b.kind) {
      case BlockKind::Skip:
        label = "skip";
        break;
      case BlockKind::Assign:
        label = b.var + " := " + pretty_print(*b.expr);
        break;
      case BlockKind::Random:
        label = b.var + " ?= " + pretty_print(b.dist);
        break;
      case BlockKind::Test:
        label = pretty_print(*b.test);
        break;
    }
    os << "  n" << l << " [shape="
       << (b.kind == BlockKind::Test ? "diamond" : "box") << ",label=\"" << l
       << ": " << label << "\"];\n";
  }
  for (const Edge& e : g.edges) {
    os << "  n" << e.from << " -> n" << e.to;
    if (e.branch == BranchKind::True) os << " [label=\"T\"]";
    if (e.branch == BranchKind::False) os << " [label=\"F\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace pdfa
