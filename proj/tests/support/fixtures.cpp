#include "support/fixtures.hpp"

#include <functional>
#include <utility>

#include <mutgen/rng.hpp>

namespace fixtures {
namespace {

const char* kVars[] = {"value", "count", "total", "item", "limit", "offset", "size2", "acc"};
const char* kNames[] = {"name", "key", "label", "tag", "field", "prefix"};
const char* kInts[] = {"2", "3", "7", "10", "42", "100"};
const char* kStrs[] = {"\"ok\"", "\"done\"", "\"x:\"", "\"err\"", "\"id=\""};

struct Builder {
  std::string id;
  const char* v0;
  const char* v1;
  const char* n0;
  const char* i0;
  const char* i1;
  const char* s0;
};

MethodPair clamp(const Builder& b) {
  MethodPair p;
  p.fixed = "public int clamp" + b.id + "(int " + b.v0 + ") { if (" + b.v0 + " < " + b.i0 +
            ") { return " + b.v0 + " + 1; } return " + b.v0 + " - " + b.i1 + "; }";
  p.buggy = "public int clamp" + b.id + "(int " + b.v0 + ") { if (" + b.v0 + " <= " + b.i0 +
            ") { return " + b.v0 + " + 1; } return " + b.v0 + " - " + b.i1 + "; }";
  return p;
}

MethodPair sumLoop(const Builder& b) {
  MethodPair p;
  std::string head = "public int sum" + b.id + "(int[] " + b.v0 + ") { int " + b.v1 + " = 0; ";
  std::string tail = std::string("for (int i = ") + "%START%" + "; i < " + b.v0 +
                     ".length; i++) { " + b.v1 + " += " + b.v0 + "[i]; } return " + b.v1 + "; }";
  p.fixed = head + tail;
  p.buggy = head + tail;
  p.fixed.replace(p.fixed.find("%START%"), 7, "0");
  p.buggy.replace(p.buggy.find("%START%"), 7, "1");
  return p;
}

MethodPair guard(const Builder& b) {
  MethodPair p;
  std::string core = std::string("this.") + b.n0 + " = " + b.n0 + "; return " + b.n0 +
                     ".length(); }";
  p.fixed = "public int bind" + b.id + "(String " + b.n0 + ") { if (" + b.n0 +
            " == null) { return 0; } " + core;
  p.buggy = "public int bind" + b.id + "(String " + b.n0 + ") { " + core;
  return p;
}

MethodPair format(const Builder& b) {
  MethodPair p;
  std::string head = "public String fmt" + b.id + "(String " + b.n0 +
                     ") { StringBuilder sb = new StringBuilder(); sb.append(";
  std::string tail = std::string("); sb.append(") + b.n0 + "); return sb.toString(); }";
  p.fixed = head + b.s0 + tail;
  p.buggy = head + "\"no\"" + tail;
  return p;
}

MethodPair compare(const Builder& b) {
  MethodPair p;
  std::string head = "public boolean above" + b.id + "(int " + b.v0 + ", int " + b.v1 + ") { return " +
                     b.v0 + " ";
  std::string tail = std::string(" ") + b.v1 + "; }";
  p.fixed = head + ">" + tail;
  p.buggy = head + "<" + tail;
  return p;
}

MethodPair shift(const Builder& b) {
  MethodPair p;
  std::string head = "public int pick" + b.id + "(java.util.List<Integer> " + b.v0 +
                     ", int i) { return " + b.v0 + ".get(i ";
  p.fixed = head + "+ 1); }";
  p.buggy = head + "- 1); }";
  return p;
}

MethodPair boolFlip(const Builder& b) {
  MethodPair p;
  std::string head = "public boolean okay" + b.id + "(boolean a, boolean b) { return a ";
  p.fixed = head + "&& b; }";
  p.buggy = head + "|| b; }";
  return p;
}

MethodPair assignOp(const Builder& b) {
  MethodPair p;
  std::string head = "public void grow" + b.id + "(int " + b.v0 + ") { this." + b.v1 + " ";
  std::string tail = std::string(" ") + b.v0 + "; }";
  p.fixed = head + "+=" + tail;
  p.buggy = head + "=" + tail;
  return p;
}

MethodPair swapArgs(const Builder& b) {
  MethodPair p;
  std::string head = "public int span" + b.id + "(int " + b.v0 + ", int " + b.v1 +
                     ") { return Math.max(";
  p.fixed = head + b.v0 + ", " + b.v1 + ") - Math.min(" + b.v0 + ", " + b.v1 + "); }";
  p.buggy = head + b.v1 + ", " + b.v0 + ") - Math.max(" + b.v0 + ", " + b.v1 + "); }";
  return p;
}

MethodPair callSwap(const Builder& b) {
  MethodPair p;
  std::string head = "public String show" + b.id + "(Object " + b.v0 + ") { if (" + b.v0 +
                     " == null) { return " + b.s0 + "; } return " + b.v0 + ".";
  p.fixed = head + "toString(); }";
  p.buggy = head + "getClass().toString(); }";
  return p;
}

using Family = MethodPair (*)(const Builder&);
const Family kFamilies[] = {clamp, sumLoop, guard, format, compare,
                            shift, boolFlip, assignOp, swapArgs, callSwap};

}  // namespace

std::vector<MethodPair> method_pairs(std::size_t count, std::uint64_t seed) {
  mutgen::Rng rng(seed);
  std::vector<MethodPair> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Builder b;
    b.id = std::to_string(k);
    b.v0 = kVars[rng.next_below(8)];
    do {
      b.v1 = kVars[rng.next_below(8)];
    } while (b.v1 == b.v0);
    b.n0 = kNames[rng.next_below(6)];
    b.i0 = kInts[rng.next_below(6)];
    b.i1 = kInts[rng.next_below(6)];
    b.s0 = kStrs[rng.next_below(5)];
    out.push_back(kFamilies[k % 10](b));
  }
  return out;
}

namespace {

using mutgen::Rng;
using mutgen::java::AstNode;
using mutgen::java::NodeLabel;

constexpr NodeLabel kTreeLabels[] = {
    NodeLabel::Block,  NodeLabel::Call,    NodeLabel::If,          NodeLabel::Return,
    NodeLabel::Assign, NodeLabel::BinaryOp, NodeLabel::Name,       NodeLabel::Literal,
    NodeLabel::Args,   NodeLabel::ArrayAccess, NodeLabel::Other};

const char* const kTreeTexts[] = {"a", "b", "x", "y", "0", "1", "+", "f", ";", "done"};

using TreePath = std::vector<int>;

void tree_paths(const AstNode& n, TreePath& cur, std::vector<TreePath>& out) {
  out.push_back(cur);
  for (int i = 0; i < static_cast<int>(n.children.size()); ++i) {
    cur.push_back(i);
    tree_paths(n.children[static_cast<std::size_t>(i)], cur, out);
    cur.pop_back();
  }
}

std::vector<TreePath> tree_paths(const AstNode& root) {
  std::vector<TreePath> out;
  TreePath cur;
  tree_paths(root, cur, out);
  return out;
}

AstNode* tree_at(AstNode& root, const TreePath& p) {
  AstNode* n = &root;
  for (int i : p) n = &n->children[static_cast<std::size_t>(i)];
  return n;
}

void retext_leaf(AstNode& tree, Rng& rng) {
  std::vector<TreePath> leaves;
  for (TreePath& p : tree_paths(tree))
    if (tree_at(tree, p)->children.empty()) leaves.push_back(std::move(p));
  AstNode* leaf = tree_at(tree, leaves[rng.next_below(leaves.size())]);
  std::string text;
  do {
    text = kTreeTexts[rng.next_below(std::size(kTreeTexts))];
  } while (text == leaf->text);
  leaf->text = text;
}

}  // namespace

AstNode random_tree(Rng& rng, int max_nodes) {
  const int n = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_nodes)));
  std::vector<std::vector<int>> kids(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i)
    kids[rng.next_below(static_cast<std::uint64_t>(i))].push_back(i);
  std::vector<NodeLabel> labels(static_cast<std::size_t>(n));
  for (NodeLabel& l : labels) l = kTreeLabels[rng.next_below(std::size(kTreeLabels))];
  std::function<AstNode(int)> make = [&](int i) {
    AstNode node;
    node.label = labels[static_cast<std::size_t>(i)];
    if (kids[static_cast<std::size_t>(i)].empty())
      node.text = kTreeTexts[rng.next_below(std::size(kTreeTexts))];
    for (int k : kids[static_cast<std::size_t>(i)]) node.children.push_back(make(k));
    return node;
  };
  return make(0);
}

void mutate_tree(AstNode& tree, Rng& rng, int count) {
  bool relabeled = false;
  for (int m = 0; m < count; ++m) {
    std::vector<TreePath> paths = tree_paths(tree);
    const int total = static_cast<int>(paths.size());
    int op = static_cast<int>(rng.next_below(6));
    if (op == 5 && relabeled) op = 0;
    switch (op) {
      case 0:
        retext_leaf(tree, rng);
        break;
      case 1: {  // insert a leaf
        if (total >= 12) {
          retext_leaf(tree, rng);
          break;
        }
        AstNode* parent = tree_at(tree, paths[rng.next_below(paths.size())]);
        AstNode leaf;
        leaf.label = kTreeLabels[rng.next_below(std::size(kTreeLabels))];
        leaf.text = kTreeTexts[rng.next_below(std::size(kTreeTexts))];
        const std::size_t at = rng.next_below(parent->children.size() + 1);
        parent->children.insert(parent->children.begin() + static_cast<long>(at), std::move(leaf));
        break;
      }
      case 2: {  // delete a leaf, root excluded
        std::vector<TreePath> leaves;
        for (TreePath& p : paths)
          if (!p.empty() && tree_at(tree, p)->children.empty()) leaves.push_back(std::move(p));
        if (leaves.empty()) {
          retext_leaf(tree, rng);
          break;
        }
        TreePath p = leaves[rng.next_below(leaves.size())];
        const int at = p.back();
        p.pop_back();
        AstNode* parent = tree_at(tree, p);
        parent->children.erase(parent->children.begin() + at);
        break;
      }
      case 3: {  // swap adjacent siblings
        std::vector<TreePath> wide;
        for (TreePath& p : paths)
          if (tree_at(tree, p)->children.size() >= 2) wide.push_back(std::move(p));
        if (wide.empty()) {
          retext_leaf(tree, rng);
          break;
        }
        AstNode* parent = tree_at(tree, wide[rng.next_below(wide.size())]);
        const std::size_t i = rng.next_below(parent->children.size() - 1);
        std::swap(parent->children[i], parent->children[i + 1]);
        break;
      }
      case 4: {  // move a subtree elsewhere
        if (total < 2) {
          retext_leaf(tree, rng);
          break;
        }
        TreePath p;
        do {
          p = paths[rng.next_below(paths.size())];
        } while (p.empty());
        const int at = p.back();
        p.pop_back();
        AstNode* old_parent = tree_at(tree, p);
        AstNode sub = std::move(old_parent->children[static_cast<std::size_t>(at)]);
        old_parent->children.erase(old_parent->children.begin() + at);
        std::vector<TreePath> rest = tree_paths(tree);
        AstNode* dest = tree_at(tree, rest[rng.next_below(rest.size())]);
        const std::size_t slot = rng.next_below(dest->children.size() + 1);
        dest->children.insert(dest->children.begin() + static_cast<long>(slot), std::move(sub));
        break;
      }
      case 5: {  // relabel a leaf
        std::vector<TreePath> leaves;
        for (TreePath& p : paths)
          if (tree_at(tree, p)->children.empty()) leaves.push_back(std::move(p));
        AstNode* leaf = tree_at(tree, leaves[rng.next_below(leaves.size())]);
        NodeLabel label;
        do {
          label = kTreeLabels[rng.next_below(std::size(kTreeLabels))];
        } while (label == leaf->label);
        leaf->label = label;
        relabeled = true;
        break;
      }
      default:
        break;
    }
  }
}

}  // namespace fixtures
