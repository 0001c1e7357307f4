#include "sentfact/amr.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sentfact/errors.hpp"
#include "sentfact/text.hpp"

namespace sentfact {

std::size_t AmrNode::node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
}

namespace {

struct Token {
    enum Kind { LParen, RParen, Slash, Atom, String, End };
    Kind kind = End;
    std::string text;
    std::size_t offset = 0;
};

bool is_atom_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' &&
           c != '"' && c != '/';
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        current_.offset = pos_;
        if (pos_ >= text_.size()) {
            current_ = {Token::End, "", pos_};
            return;
        }
        char c = text_[pos_];
        if (c == '(') {
            current_ = {Token::LParen, "(", pos_++};
        } else if (c == ')') {
            current_ = {Token::RParen, ")", pos_++};
        } else if (c == '/') {
            current_ = {Token::Slash, "/", pos_++};
        } else if (c == '"') {
            std::size_t start = pos_++;
            std::string value;
            while (pos_ < text_.size() && text_[pos_] != '"') value += text_[pos_++];
            if (pos_ >= text_.size())
                throw ParseError("unterminated string at byte " + std::to_string(start));
            ++pos_; // closing quote
            current_ = {Token::String, value, start};
        } else {
            std::size_t start = pos_;
            std::string value;
            while (pos_ < text_.size() && is_atom_char(text_[pos_])) value += text_[pos_++];
            current_ = {Token::Atom, value, start};
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    Token current_;
};

class PenmanParser {
public:
    explicit PenmanParser(const std::string& text) : lex_(text) {}

    AmrNode parse() {
        if (lex_.peek().kind != Token::LParen)
            throw ParseError("expected '(' at byte " + std::to_string(lex_.peek().offset));
        AmrNode root = parse_node();
        if (lex_.peek().kind != Token::End)
            throw ParseError("trailing content at byte " + std::to_string(lex_.peek().offset));
        mark_references(root);
        assign_paths(root, TreePath::root());
        return root;
    }

private:
    AmrNode parse_node() {
        lex_.take(); // '('
        Token var = lex_.take();
        if (var.kind != Token::Atom || var.text.empty())
            throw ParseError("expected variable name at byte " + std::to_string(var.offset));
        if (!defined_.insert(var.text).second)
            throw ParseError("duplicate variable definition '" + var.text + "' at byte " +
                             std::to_string(var.offset));
        Token slash = lex_.take();
        if (slash.kind != Token::Slash)
            throw ParseError("expected '/' after variable at byte " +
                             std::to_string(slash.offset));
        Token concept_tok = lex_.take();
        if (concept_tok.kind != Token::Atom || concept_tok.text.empty())
            throw ParseError("empty concept at byte " + std::to_string(concept_tok.offset));

        AmrNode node;
        node.variable = var.text;
        node.concept_text = concept_tok.text;

        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == Token::RParen) {
                lex_.take();
                return node;
            }
            if (t.kind == Token::End)
                throw ParseError("unbalanced parentheses: missing ')' at byte " +
                                 std::to_string(t.offset));
            if (t.kind != Token::Atom || t.text.empty() || t.text[0] != ':')
                throw ParseError("expected relation label at byte " + std::to_string(t.offset));
            Token rel = lex_.take();
            node.children.push_back(parse_value(rel.text));
        }
    }

    AmrNode parse_value(const std::string& relation) {
        const Token& t = lex_.peek();
        if (t.kind == Token::LParen) {
            AmrNode child = parse_node();
            child.relation_from_parent = relation;
            return child;
        }
        if (t.kind == Token::String) {
            Token s = lex_.take();
            AmrNode leaf;
            leaf.concept_text = s.text;
            leaf.quoted = true;
            leaf.relation_from_parent = relation;
            return leaf;
        }
        if (t.kind == Token::Atom && !t.text.empty() && t.text[0] != ':') {
            Token a = lex_.take();
            AmrNode leaf;
            leaf.concept_text = a.text;
            leaf.relation_from_parent = relation;
            return leaf;
        }
        throw ParseError("expected child value after relation at byte " +
                         std::to_string(t.offset));
    }

    // Bare unquoted leaves that name a defined variable are reentrant edges.
    void mark_references(AmrNode& node) {
        if (node.children.empty() && !node.variable && !node.quoted &&
            defined_.count(node.concept_text))
            node.reference = true;
        for (auto& c : node.children) mark_references(c);
    }

    static void assign_paths(AmrNode& node, const TreePath& path) {
        node.path = path;
        for (std::size_t i = 0; i < node.children.size(); ++i)
            assign_paths(node.children[i], path.child(static_cast<int>(i)));
    }

    Lexer lex_;
    std::unordered_set<std::string> defined_;
};

void collect_definitions(const AmrNode& node,
                         std::unordered_map<std::string, const AmrNode*>& defs) {
    // First definition wins; expanded trees legitimately repeat variables.
    if (node.variable) defs.emplace(*node.variable, &node);
    for (const auto& c : node.children) collect_definitions(c, defs);
}

AmrNode expand_references(const AmrNode& node,
                          const std::unordered_map<std::string, const AmrNode*>& defs,
                          std::set<std::string>& active) {
    if (node.reference) {
        auto it = defs.find(node.concept_text);
        if (it == defs.end())
            throw ResolutionError("re-reference to undefined variable '" + node.concept_text + "'");
        if (active.count(node.concept_text))
            throw ResolutionError("cyclic re-reference through variable '" + node.concept_text + "'");
        AmrNode copy = *it->second;
        copy.relation_from_parent = node.relation_from_parent;
        active.insert(node.concept_text);
        AmrNode expanded = copy;
        expanded.children.clear();
        for (const auto& c : copy.children)
            expanded.children.push_back(expand_references(c, defs, active));
        active.erase(node.concept_text);
        return expanded;
    }
    AmrNode out = node;
    out.children.clear();
    bool added = node.variable && active.insert(*node.variable).second;
    for (const auto& c : node.children)
        out.children.push_back(expand_references(c, defs, active));
    if (added) active.erase(*node.variable);
    return out;
}

void assign_paths_rec(AmrNode& node, const TreePath& path) {
    node.path = path;
    for (std::size_t i = 0; i < node.children.size(); ++i)
        assign_paths_rec(node.children[i], path.child(static_cast<int>(i)));
}

bool needs_quoting(const std::string& s, const std::unordered_set<std::string>& variables) {
    if (s.empty()) return true;
    if (s[0] == ':') return true;
    for (char c : s)
        if (!is_atom_char(c)) return true;
    return variables.count(s) > 0;
}

void collect_variable_names(const AmrNode& node, std::unordered_set<std::string>& out) {
    if (node.variable) out.insert(*node.variable);
    for (const auto& c : node.children) collect_variable_names(c, out);
}

void write_penman(const AmrNode& node, const std::unordered_set<std::string>& variables,
                  std::string& out) {
    if (node.reference) {
        out += node.concept_text;
        return;
    }
    if (!node.variable) {
        if (node.quoted || needs_quoting(node.concept_text, variables))
            out += '"' + node.concept_text + '"';
        else
            out += node.concept_text;
        return;
    }
    out += '(' + *node.variable + " / " + node.concept_text;
    for (const auto& c : node.children) {
        out += ' ';
        out += c.relation_from_parent.value_or(":rel");
        out += ' ';
        write_penman(c, variables, out);
    }
    out += ')';
}

} // namespace

AmrNode parse_amr(const std::string& text) {
    return PenmanParser(text).parse();
}

AmrNode graph_to_tree(const AmrNode& root) {
    std::unordered_map<std::string, const AmrNode*> defs;
    collect_definitions(root, defs);
    std::set<std::string> active;
    AmrNode out = expand_references(root, defs, active);
    assign_paths_rec(out, TreePath::root());
    return out;
}

AlignmentTable parse_alignments(const std::string& text, std::size_t n_tokens) {
    AlignmentTable table;
    for (const auto& record : split_whitespace(text)) {
        auto dash = record.find('-');
        if (dash == std::string::npos || dash == 0 || dash + 1 >= record.size())
            throw FormatError("malformed alignment record '" + record + "'");
        std::size_t index = 0;
        for (std::size_t i = 0; i < dash; ++i) {
            char c = record[i];
            if (c < '0' || c > '9')
                throw FormatError("malformed alignment record '" + record + "'");
            index = index * 10 + static_cast<std::size_t>(c - '0');
        }
        TreePath path;
        try {
            path = TreePath::parse(record.substr(dash + 1));
        } catch (const FormatError&) {
            throw FormatError("malformed alignment record '" + record + "'");
        }
        if (index >= n_tokens)
            throw FormatError("alignment record '" + record + "': token index " +
                              std::to_string(index) + " out of range for " +
                              std::to_string(n_tokens) + " tokens");
        table[static_cast<int>(index)].insert(path);
    }
    return table;
}

std::string to_penman(const AmrNode& root) {
    std::unordered_set<std::string> variables;
    collect_variable_names(root, variables);
    std::string out;
    write_penman(root, variables, out);
    return out;
}

const AmrNode* resolve_path(const AmrNode& root, const TreePath& path) {
    const AmrNode* node = &root;
    const auto& segs = path.segments();
    for (std::size_t i = 1; i < segs.size(); ++i) {
        auto idx = static_cast<std::size_t>(segs[i]);
        if (idx >= node->children.size()) return nullptr;
        node = &node->children[idx];
    }
    return node;
}

AnnotatedSentence parse_annotated_block(const std::vector<std::string>& lines) {
    if (lines.size() < 3)
        throw FormatError("annotated block needs a ::tok line, an AMR, and a ::align line");
    const std::string tok_tag = "# ::tok";
    const std::string align_tag = "# ::align";
    if (lines.front().rfind(tok_tag, 0) != 0)
        throw FormatError("annotated block must start with '# ::tok'");
    if (lines.back().rfind(align_tag, 0) != 0)
        throw FormatError("annotated block must end with '# ::align'");

    AnnotatedSentence sent;
    sent.tokens = split_whitespace(lines.front().substr(tok_tag.size()));
    std::string penman;
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
        penman += lines[i];
        penman += '\n';
    }
    sent.amr = graph_to_tree(parse_amr(penman));
    sent.alignments =
        parse_alignments(lines.back().substr(align_tag.size()), sent.tokens.size());
    for (const auto& [index, paths] : sent.alignments) {
        (void)index;
        for (const auto& p : paths)
            if (!resolve_path(sent.amr, p))
                throw FormatError("alignment path '" + p.str() +
                                  "' does not resolve to an AMR node");
    }
    return sent;
}

std::vector<AnnotatedSentence> parse_annotated_stream(std::istream& in) {
    std::vector<AnnotatedSentence> out;
    std::vector<std::string> block;
    std::string line;
    auto flush = [&] {
        if (!block.empty()) {
            out.push_back(parse_annotated_block(block));
            block.clear();
        }
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (split_whitespace(line).empty())
            flush();
        else
            block.push_back(line);
    }
    flush();
    return out;
}

std::vector<AnnotatedSentence> read_annotated_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open annotated file '" + path + "'");
    return parse_annotated_stream(in);
}

} // namespace sentfact
