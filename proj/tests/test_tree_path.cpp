#include "doctest.h"

#include "sentfact/errors.hpp"
#include "sentfact/tree_path.hpp"

using namespace sentfact;

TEST_CASE("tree path parse and format round-trip") {
    CHECK(TreePath::parse("0").str() == "0");
    CHECK(TreePath::parse("0.1.0").str() == "0.1.0");
    CHECK(TreePath::parse("0.12.3").segments() == std::vector<int>{0, 12, 3});
    CHECK(TreePath::root().is_root());
    CHECK(TreePath::parse("0").depth() == 0);
    CHECK(TreePath::parse("0.1.0").depth() == 2);
}

TEST_CASE("tree path rejects malformed text") {
    CHECK_THROWS_AS(TreePath::parse(""), FormatError);
    CHECK_THROWS_AS(TreePath::parse("1.0"), FormatError);
    CHECK_THROWS_AS(TreePath::parse("0..1"), FormatError);
    CHECK_THROWS_AS(TreePath::parse("0.a"), FormatError);
    CHECK_THROWS_AS(TreePath::parse("0.-1"), FormatError);
    CHECK_THROWS_AS(TreePath::parse(".0"), FormatError);
}

TEST_CASE("tree path ordering is lexicographic over segments") {
    auto p = [](const char* s) { return TreePath::parse(s); };
    CHECK(p("0") < p("0.0"));          // parent precedes child
    CHECK(p("0.0") < p("0.1"));        // siblings by last segment
    CHECK(p("0.1") < p("0.1.0"));
    CHECK(p("0.1.5") < p("0.2"));
    CHECK(p("0.2") == p("0.2"));
}

TEST_CASE("prefix relations and longest common prefix") {
    auto p = [](const char* s) { return TreePath::parse(s); };
    CHECK(p("0.1").is_prefix_of(p("0.1.0")));
    CHECK(p("0.1").is_prefix_of(p("0.1")));
    CHECK_FALSE(p("0.1").is_strict_prefix_of(p("0.1")));
    CHECK_FALSE(p("0.1").is_prefix_of(p("0.2.1")));

    CHECK(TreePath::longest_common_prefix(p("0.0.0"), p("0.0.1")) == p("0.0"));
    CHECK(TreePath::longest_common_prefix(p("0.0.0"), p("0.0.0.1")) == p("0.0.0"));
    CHECK(TreePath::longest_common_prefix(p("0.1"), p("0.2")) == p("0"));
}

TEST_CASE("child and parent navigation") {
    auto p = TreePath::parse("0.1");
    CHECK(p.child(3) == TreePath::parse("0.1.3"));
    CHECK(p.parent() == TreePath::parse("0"));
    CHECK(p.last() == 1);
}
