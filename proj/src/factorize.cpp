#include "sentfact/factorize.hpp"

#include <algorithm>
#include <map>

#include "sentfact/errors.hpp"
#include "sentfact/text.hpp"

namespace sentfact {

void FactorizationParams::validate() const {
    if (max_depth < 1) throw FormatError("max depth must be >= 1");
    if (branching < 1) throw FormatError("branching factor must be >= 1");
}

namespace {

TreePath fold_lcp(const std::set<TreePath>& paths) {
    auto it = paths.begin();
    TreePath lcp = *it;
    for (++it; it != paths.end(); ++it) lcp = TreePath::longest_common_prefix(lcp, *it);
    return lcp;
}

PurifiedNode assemble(const TreePath& path,
                      const std::map<TreePath, std::vector<int>>& groups,
                      const std::map<TreePath, std::vector<TreePath>>& edges,
                      const std::vector<std::string>& tokens) {
    const auto& group = groups.at(path);
    PurifiedNode node;
    node.token = tokens[static_cast<std::size_t>(group.front())];
    node.path = path;

    int next_free = 0;
    auto level = path.segments().size();
    if (auto it = edges.find(path); it != edges.end()) {
        for (const auto& child_path : it->second) {
            node.children.push_back(assemble(child_path, groups, edges, tokens));
            next_free = std::max(next_free, child_path.segments()[level] + 1);
        }
    }
    // Later tokens that collided on this position become appended children.
    for (std::size_t i = 1; i < group.size(); ++i) {
        PurifiedNode extra;
        extra.token = tokens[static_cast<std::size_t>(group[i])];
        extra.path = path.child(next_free++);
        node.children.push_back(std::move(extra));
    }
    return node;
}

// Path-trie used while assembling the factorization tree.
struct TrieNode {
    Unit unit;
    std::map<int, TrieNode> children;
};

void trie_insert(TrieNode& root, const TreePath& path, Unit unit) {
    TrieNode* node = &root;
    const auto& segs = path.segments();
    for (std::size_t i = 1; i < segs.size(); ++i) node = &node->children[segs[i]];
    node->unit = std::move(unit);
}

// Children of mapped non-root nodes are indexed from 1; a self-copy of
// the parent fills the missing first child.
void fill_first_children(TrieNode& node, bool is_root) {
    if (!node.children.empty() && !is_root && node.children.begin()->first >= 1)
        node.children.emplace(0, TrieNode{node.unit, {}});
    for (auto& [seg, child] : node.children) {
        (void)seg;
        fill_first_children(child, false);
    }
}

std::size_t max_leaf_depth(const TrieNode& node, std::size_t depth) {
    if (node.children.empty()) return depth;
    std::size_t best = depth;
    for (const auto& [seg, child] : node.children) {
        (void)seg;
        best = std::max(best, max_leaf_depth(child, depth + 1));
    }
    return best;
}

void extend_leaves(TrieNode& node, std::size_t depth, std::size_t target) {
    if (node.children.empty()) {
        TrieNode* tail = &node;
        for (std::size_t d = depth; d < target; ++d)
            tail = &tail->children.emplace(0, TrieNode{tail->unit, {}}).first->second;
        return;
    }
    for (auto& [seg, child] : node.children) {
        (void)seg;
        extend_leaves(child, depth + 1, target);
    }
}

FactorNode trie_to_factor(const TrieNode& node, const TreePath& path) {
    FactorNode out;
    out.unit = node.unit;
    out.path = path;
    for (const auto& [seg, child] : node.children)
        out.children.push_back(trie_to_factor(child, path.child(seg)));
    return out;
}

void traverse_in_place(FactorNode& node) {
    if (node.children.empty()) return;
    Unit unit;
    for (auto& child : node.children) {
        traverse_in_place(child);
        unit.insert(unit.end(), child.unit.begin(), child.unit.end());
    }
    node.unit = std::move(unit);
}

void check_branching(const FactorNode& node, int k) {
    if (node.children.size() > static_cast<std::size_t>(k))
        throw CapacityError("node " + node.path.str() + " has " +
                            std::to_string(node.children.size()) +
                            " children, exceeding branching factor " + std::to_string(k));
    for (const auto& child : node.children) check_branching(child, k);
}

void append_tree_lines(const FactorNode& node, std::vector<std::string>& out) {
    out.push_back(node.path.str() + '\t' + join(node.unit, " "));
    for (const auto& child : node.children) append_tree_lines(child, out);
}

} // namespace

PurifiedNode purify(const AnnotatedSentence& sent) {
    if (sent.alignments.empty())
        throw EmptyInputError("alignment table is empty; nothing to build");

    // Position of each aligned token: the longest common prefix of its paths.
    std::map<TreePath, std::vector<int>> groups; // position -> token indices, ascending
    for (const auto& [index, paths] : sent.alignments)
        groups[fold_lcp(paths)].push_back(index);

    // Attach every position to its deepest present proper prefix.
    std::map<TreePath, std::vector<TreePath>> edges;
    std::vector<TreePath> roots;
    for (const auto& [position, tokens] : groups) {
        (void)tokens;
        TreePath q = position;
        bool attached = false;
        while (!q.is_root()) {
            q = q.parent();
            if (groups.count(q)) {
                edges[q].push_back(position);
                attached = true;
                break;
            }
        }
        if (!attached) roots.push_back(position);
    }

    PurifiedNode root = assemble(roots.front(), groups, edges, sent.tokens);
    for (std::size_t i = 1; i < roots.size(); ++i)
        root.children.push_back(assemble(roots[i], groups, edges, sent.tokens));
    return root;
}

TreePath map_index(const TreePath& p) {
    const auto& segs = p.segments();
    if (segs.size() == 1) return TreePath({0, 0});
    std::vector<int> out;
    out.reserve(segs.size());
    out.push_back(0);
    for (std::size_t i = 1; i < segs.size(); ++i) out.push_back(segs[i] + 1);
    return TreePath(std::move(out));
}

FactorNode build_factor_tree(const PurifiedNode& p, const FactorizationParams& params) {
    params.validate();

    TrieNode trie; // the new empty root, path 0
    std::vector<const PurifiedNode*> stack{&p};
    while (!stack.empty()) {
        const PurifiedNode* node = stack.back();
        stack.pop_back();
        trie_insert(trie, map_index(node->path), Unit{node->token});
        for (const auto& child : node->children) stack.push_back(&child);
    }

    fill_first_children(trie, true);
    std::size_t target =
        std::max(static_cast<std::size_t>(params.max_depth) + 1, max_leaf_depth(trie, 0));
    extend_leaves(trie, 0, target);
    return trie_to_factor(trie, TreePath::root());
}

FactorNode traverse_units(FactorNode t) {
    traverse_in_place(t);
    return t;
}

MultiscaleLevels multiscale_units(const FactorNode& t, const FactorizationParams& params) {
    params.validate();
    check_branching(t, params.branching);

    auto k = static_cast<std::size_t>(params.branching);
    MultiscaleLevels levels;
    std::vector<const FactorNode*> current{&t};
    for (int depth = 0; depth <= params.max_depth; ++depth) {
        std::vector<Unit> units;
        units.reserve(current.size());
        for (const FactorNode* node : current)
            units.push_back(node ? node->unit : Unit{});
        levels.push_back(std::move(units));
        if (depth == params.max_depth) break;
        std::vector<const FactorNode*> next;
        next.reserve(current.size() * k);
        for (const FactorNode* node : current) {
            std::size_t filled = 0;
            if (node)
                for (const auto& child : node->children) {
                    next.push_back(&child);
                    ++filled;
                }
            for (; filled < k; ++filled) next.push_back(nullptr);
        }
        current = std::move(next);
    }
    return levels;
}

FactorNode factorize_sentence(const AnnotatedSentence& sent,
                              const FactorizationParams& params) {
    return traverse_units(build_factor_tree(purify(sent), params));
}

std::vector<std::string> tree_export_lines(const FactorNode& t) {
    std::vector<std::string> out;
    append_tree_lines(t, out);
    return out;
}

std::vector<std::string> multiscale_export_lines(const MultiscaleLevels& levels) {
    std::vector<std::string> out;
    out.reserve(levels.size());
    for (std::size_t d = 0; d < levels.size(); ++d) {
        std::string line = "d" + std::to_string(d) + '\t';
        for (std::size_t i = 0; i < levels[d].size(); ++i) {
            if (i) line += '|';
            line += levels[d][i].empty() ? "-" : join(levels[d][i], " ");
        }
        out.push_back(std::move(line));
    }
    return out;
}

} // namespace sentfact
