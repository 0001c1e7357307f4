#pragma once

#include <string>
#include <vector>

#include "sentfact/amr.hpp"
#include "sentfact/tree_path.hpp"

namespace sentfact {

// A semantic unit: an ordered list of surface tokens.
using Unit = std::vector<std::string>;

// Node of the purified AMR tree. Concepts have been replaced by aligned
// surface tokens and relation labels dropped; path holds the node's
// position (the longest common prefix of the token's alignment paths).
struct PurifiedNode {
    std::string token;
    std::vector<PurifiedNode> children;
    TreePath path;

    bool operator==(const PurifiedNode&) const = default;
};

// Node of the factorization tree. After traverse_units, the unit of an
// internal node is the concatenation of its children's units and the
// root unit is the full reordered sentence.
struct FactorNode {
    Unit unit;
    std::vector<FactorNode> children;
    TreePath path;

    bool operator==(const FactorNode&) const = default;
};

struct FactorizationParams {
    int max_depth = 2; // D
    int branching = 4; // k

    void validate() const;
};

// Units of the nodes at each depth 0..D, padded so every node has
// exactly `branching` children; padding slots are empty units.
using MultiscaleLevels = std::vector<std::vector<Unit>>;

// Builds the purified tree: each aligned token is placed at the longest
// common prefix of its alignment paths, unaligned tokens are dropped,
// and a token whose position collides with an earlier token's becomes a
// child appended after that node's existing children.
PurifiedNode purify(const AnnotatedSentence& sent);

// Position remapping between the purified tree and the factorization
// tree: the root maps to 0.0 and every other segment is shifted up by
// one, freeing index 0 for self-copies.
TreePath map_index(const TreePath& p);

// Re-addresses every purified node by map_index under a new empty root,
// fills each missing first child with a self-copy of its parent, and
// extends every leaf chain by self-duplication so all leaves share one
// depth of at least max_depth + 1.
FactorNode build_factor_tree(const PurifiedNode& p, const FactorizationParams& params);

// Bottom-up unit completion: every internal node's unit becomes the
// concatenation of the units of its subtree's leaves in DFS order.
FactorNode traverse_units(FactorNode t);

// Per-depth padded unit lists for depths 0..max_depth; level d has
// exactly branching^d entries. Throws CapacityError when some node has
// more than `branching` children.
MultiscaleLevels multiscale_units(const FactorNode& t, const FactorizationParams& params);

// purify -> build_factor_tree -> traverse_units.
FactorNode factorize_sentence(const AnnotatedSentence& sent, const FactorizationParams& params);

// One node per line, DFS pre-order: `<path>\t<unit tokens space-separated>`.
std::vector<std::string> tree_export_lines(const FactorNode& t);

// One line per depth: `d<depth>\t<unit>|<unit>|...`, empty units as `-`.
std::vector<std::string> multiscale_export_lines(const MultiscaleLevels& levels);

} // namespace sentfact
