#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sentfact/tree_path.hpp"

namespace sentfact {

// One node of a Penman-style AMR annotation. Constants (numbers, quoted
// strings, wiki values) are ordinary nodes without a variable. A bare
// atom that names a variable defined elsewhere in the same annotation is
// kept as a leaf with reference=true until graph_to_tree expands it.
struct AmrNode {
    std::string concept_text;
    std::optional<std::string> variable;
    std::optional<std::string> relation_from_parent;
    bool reference = false;
    bool quoted = false;
    std::vector<AmrNode> children;
    TreePath path;

    std::size_t node_count() const;
    bool operator==(const AmrNode&) const = default;
};

// Token index (0-based position in the sentence) -> aligned node paths.
using AlignmentTable = std::map<int, std::set<TreePath>>;

struct AnnotatedSentence {
    std::vector<std::string> tokens;
    AmrNode amr; // strict tree; reentrancies already expanded
    AlignmentTable alignments;
};

// Parses a Penman expression `(var / concept :rel child ...)` into a tree
// with paths assigned by child position. Reentrant edges (a bare variable
// in child position) are kept as reference leaves; call graph_to_tree to
// expand them. Throws ParseError naming the byte offset.
AmrNode parse_amr(const std::string& text);

// Replaces every variable re-reference by a deep copy of the subtree
// rooted at the defining node and reassigns all paths. Idempotent on
// trees without references. Throws ResolutionError for references that
// do not resolve inside the given tree, and for reference cycles.
AmrNode graph_to_tree(const AmrNode& root);

// Parses whitespace-separated `tokenIndex-path` records, e.g. "4-0.1.0".
// Records with tokenIndex >= n_tokens are rejected.
AlignmentTable parse_alignments(const std::string& text, std::size_t n_tokens);

// Serializes back to canonical Penman text. Re-parsing the output yields
// a structurally equal tree.
std::string to_penman(const AmrNode& root);

// Resolves a path against a tree; nullptr when it does not exist.
const AmrNode* resolve_path(const AmrNode& root, const TreePath& path);

// Annotated-sentence block:
//   # ::tok <space-separated tokens>
//   <Penman AMR, may span lines>
//   # ::align <records>
AnnotatedSentence parse_annotated_block(const std::vector<std::string>& lines);

// Reads one annotated sentence per blank-line-separated block.
std::vector<AnnotatedSentence> read_annotated_file(const std::string& path);
std::vector<AnnotatedSentence> parse_annotated_stream(std::istream& in);

} // namespace sentfact
