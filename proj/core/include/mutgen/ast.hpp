#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mutgen::java {

// Coarse statement/expression labels. Constructs outside the modeled subset
// (switch, do-while, lambdas, anonymous class bodies, ...) fold into Other
// nodes that still carry every token as a leaf.
enum class NodeLabel {
  MethodDecl,
  Param,
  Block,
  If,
  Else,
  While,
  For,
  Return,
  Throw,
  Try,
  Catch,
  LocalVarDecl,
  Assign,
  Call,
  Args,
  BinaryOp,
  UnaryOp,
  Name,
  Literal,
  Cast,
  New,
  FieldAccess,
  ArrayAccess,
  Other,
};

std::string_view label_name(NodeLabel label);

struct AstNode {
  NodeLabel label = NodeLabel::Other;
  std::string text;  // nonempty only for leaves
  std::vector<AstNode> children;

  bool is_leaf() const { return children.empty(); }
};

// Leaf texts in depth-first order; equals the token stream the tree was
// parsed from.
void collect_leaves(const AstNode& node, std::vector<std::string>& out);
std::size_t node_count(const AstNode& node);

}  // namespace mutgen::java
