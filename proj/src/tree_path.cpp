#include "sentfact/tree_path.hpp"

#include <algorithm>

#include "sentfact/errors.hpp"

namespace sentfact {

TreePath::TreePath(std::vector<int> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw FormatError("tree path must be nonempty");
    if (segments_.front() != 0)
        throw FormatError("tree path must start with segment 0, got '" + str() + "'");
    for (int s : segments_)
        if (s < 0) throw FormatError("tree path segment must be nonnegative in '" + str() + "'");
}

TreePath TreePath::parse(const std::string& text) {
    if (text.empty()) throw FormatError("empty tree path");
    std::vector<int> segs;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '.') {
            if (i == start) throw FormatError("malformed tree path '" + text + "'");
            int value = 0;
            for (std::size_t k = start; k < i; ++k) {
                char c = text[k];
                if (c < '0' || c > '9')
                    throw FormatError("malformed tree path '" + text + "'");
                value = value * 10 + (c - '0');
            }
            segs.push_back(value);
            start = i + 1;
        }
    }
    return TreePath(std::move(segs));
}

TreePath TreePath::child(int index) const {
    TreePath p = *this;
    p.segments_.push_back(index);
    return p;
}

TreePath TreePath::parent() const {
    TreePath p = *this;
    p.segments_.pop_back();
    return p;
}

bool TreePath::is_prefix_of(const TreePath& other) const {
    if (segments_.size() > other.segments_.size()) return false;
    return std::equal(segments_.begin(), segments_.end(), other.segments_.begin());
}

bool TreePath::is_strict_prefix_of(const TreePath& other) const {
    return segments_.size() < other.segments_.size() && is_prefix_of(other);
}

TreePath TreePath::longest_common_prefix(const TreePath& a, const TreePath& b) {
    std::vector<int> segs;
    std::size_t n = std::min(a.segments_.size(), b.segments_.size());
    for (std::size_t i = 0; i < n && a.segments_[i] == b.segments_[i]; ++i)
        segs.push_back(a.segments_[i]);
    return TreePath(std::move(segs));
}

std::string TreePath::str() const {
    std::string out;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(segments_[i]);
    }
    return out;
}

} // namespace sentfact
