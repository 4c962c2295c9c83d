#pragma once

// Deterministic corpora for tests: synthetic Java method pairs and commit
// streams with known, hand-labeled expected outcomes.

#include <cstdint>
#include <string>
#include <vector>

#include "mutgen/ast.hpp"
#include "mutgen/rng.hpp"

namespace fixtures {

struct MethodPair {
  std::string fixed;
  std::string buggy;
};

// Generates `count` distinct (fixed, buggy) Java method pairs from a template
// grid. Deterministic in `seed`.
std::vector<MethodPair> method_pairs(std::size_t count, std::uint64_t seed);

// Random small tree for differencer stress tests: arbitrary labels, random
// shape, pool texts on leaves. Node count is uniform in [1, max_nodes].
mutgen::java::AstNode random_tree(mutgen::Rng& rng, int max_nodes);

// Applies `count` random structural mutations in place: leaf retext, leaf
// insert, leaf delete, adjacent sibling swap, subtree move, leaf relabel.
// Keeps the node count at or below 12 and applies at most one relabel.
void mutate_tree(mutgen::java::AstNode& tree, mutgen::Rng& rng, int count);

}  // namespace fixtures
