#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mutgen/ast.hpp"
#include "mutgen/parser.hpp"

namespace mutgen {

enum class EditOp { Ins, Del, Upd, Mov };

std::string_view edit_op_name(EditOp op);

// Coarse action used for profiles and dataset records, e.g. "INS:Call".
struct EditAction {
  EditOp op = EditOp::Ins;
  java::NodeLabel label = java::NodeLabel::Other;
  std::string detail;  // inserted leaf text / new text for UPD; may be empty

  std::string tag() const;
};

// Mechanical form of one action. Nodes are addressed by arena id: the source
// tree is numbered in depth-first preorder starting at 1 (0 is a virtual
// container above the root); inserted nodes take the next free ids in
// emission order. `index` is the position among the parent's children at the
// moment the action applies, after the moved node has been detached; an index
// past the end appends.
struct ConcreteAction {
  EditOp op = EditOp::Ins;
  int node = -1;
  int parent = -1;
  int index = -1;
  java::NodeLabel label = java::NodeLabel::Other;
  std::string text;
};

struct EditScript {
  std::vector<EditAction> actions;
  std::vector<ConcreteAction> concrete;  // aligned with `actions`

  std::size_t size() const { return actions.size(); }
  std::vector<std::string> tags() const;
};

// Edit script transforming `source` into `target`: subtree matching (hash
// identical subtrees top-down, then container similarity bottom-up, then
// recovery alignment of leftover same-label children), followed by
// breadth-first derivation of INS/UPD/MOV with trailing DELs.
EditScript edit_script(const java::AstNode& source, const java::AstNode& target);

// The script as a word list for clustering, one `OP:LABEL` per action.
std::vector<std::string> action_document(const EditScript& script);

struct ActionComparison {
  bool same_multiset = false;  // same words with the same frequencies
  bool same_set = false;       // same words, frequencies ignored
};

ActionComparison compare_action_lists(const EditScript& a, const EditScript& b);

// Dice coefficient over the two token-text multisets, in [0, 1].
double token_bag_similarity(const std::vector<java::Token>& a,
                            const std::vector<java::Token>& b);

// Pairs methods of the buggy and fixed versions of one file, returned as
// (buggy index, fixed index) in buggy order. Greedy best match: equal
// (name, arity) signatures first, then equal names, then token-bag
// similarity >= 0.6; ties prefer the more similar pair, then the earlier
// one. Methods left over on either side are simply unmatched.
std::vector<std::pair<std::size_t, std::size_t>> map_methods(
    const std::vector<java::MethodInfo>& buggy, const std::vector<java::MethodInfo>& fixed);

}  // namespace mutgen
