#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace sentfact {

// Dotted node address in an AMR or factorization tree, e.g. "0.1.0".
// The root is the single segment 0; child i of a node at path p has
// path p.i. Order is lexicographic over segments, so a parent precedes
// its children and siblings sort by their last segment.
class TreePath {
public:
    TreePath() = default;
    explicit TreePath(std::vector<int> segments);

    static TreePath root() { return TreePath{}; }
    static TreePath parse(const std::string& text);

    const std::vector<int>& segments() const { return segments_; }
    // Root depth is 0.
    std::size_t depth() const { return segments_.size() - 1; }
    bool is_root() const { return segments_.size() == 1; }
    int last() const { return segments_.back(); }

    TreePath child(int index) const;
    TreePath parent() const; // precondition: !is_root()

    bool is_prefix_of(const TreePath& other) const;
    bool is_strict_prefix_of(const TreePath& other) const;
    static TreePath longest_common_prefix(const TreePath& a, const TreePath& b);

    std::string str() const;

    friend bool operator==(const TreePath&, const TreePath&) = default;
    friend std::strong_ordering operator<=>(const TreePath& a, const TreePath& b) {
        return a.segments_ <=> b.segments_;
    }

private:
    std::vector<int> segments_{0};
};

} // namespace sentfact
