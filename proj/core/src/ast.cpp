#include "mutgen/ast.hpp"

namespace mutgen::java {

std::string_view label_name(NodeLabel label) {
  switch (label) {
    case NodeLabel::MethodDecl: return "MethodDecl";
    case NodeLabel::Param: return "Param";
    case NodeLabel::Block: return "Block";
    case NodeLabel::If: return "If";
    case NodeLabel::Else: return "Else";
    case NodeLabel::While: return "While";
    case NodeLabel::For: return "For";
    case NodeLabel::Return: return "Return";
    case NodeLabel::Throw: return "Throw";
    case NodeLabel::Try: return "Try";
    case NodeLabel::Catch: return "Catch";
    case NodeLabel::LocalVarDecl: return "LocalVarDecl";
    case NodeLabel::Assign: return "Assign";
    case NodeLabel::Call: return "Call";
    case NodeLabel::Args: return "Args";
    case NodeLabel::BinaryOp: return "BinaryOp";
    case NodeLabel::UnaryOp: return "UnaryOp";
    case NodeLabel::Name: return "Name";
    case NodeLabel::Literal: return "Literal";
    case NodeLabel::Cast: return "Cast";
    case NodeLabel::New: return "New";
    case NodeLabel::FieldAccess: return "FieldAccess";
    case NodeLabel::ArrayAccess: return "ArrayAccess";
    case NodeLabel::Other: return "Other";
  }
  return "Other";
}

void collect_leaves(const AstNode& node, std::vector<std::string>& out) {
  if (node.is_leaf()) {
    out.push_back(node.text);
    return;
  }
  for (const AstNode& child : node.children) collect_leaves(child, out);
}

std::size_t node_count(const AstNode& node) {
  std::size_t n = 1;
  for (const AstNode& child : node.children) n += node_count(child);
  return n;
}

}  // namespace mutgen::java
