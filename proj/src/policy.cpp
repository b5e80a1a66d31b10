/*
   Copyright 2026 The pcpabe Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include "pcpabe/policy.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>

namespace pcpabe {

// --- construction ----------------------------------------------------------

AccessTree AccessTree::leaf(std::string attribute) {
    if (attribute.empty()) throw std::invalid_argument("access tree: empty attribute");
    if (attribute.size() > 0xffff) throw std::invalid_argument("access tree: attribute too long");
    AccessTree t;
    Node n;
    n.attribute = std::move(attribute);
    t.nodes_.push_back(std::move(n));
    return t;
}

AccessTree AccessTree::gate(std::uint16_t threshold, std::vector<AccessTree> children) {
    if (children.empty()) throw std::invalid_argument("access tree: gate without children");
    if (children.size() > 0xffff) throw std::invalid_argument("access tree: too many children");
    if (threshold < 1 || threshold > children.size())
        throw std::invalid_argument("access tree: threshold " + std::to_string(threshold) +
                                    " outside 1.." + std::to_string(children.size()));
    AccessTree t;
    Node root;
    root.threshold = threshold;
    t.nodes_.push_back(std::move(root));
    std::uint16_t index = 1;
    for (const auto& c : children) {
        t.nodes_[0].children.push_back(static_cast<NodeId>(t.nodes_.size()));
        t.append(c, 0, index++);
    }
    return t;
}

AccessTree AccessTree::all_of(std::vector<AccessTree> children) {
    const auto k = static_cast<std::uint16_t>(children.size());
    return gate(k, std::move(children));
}

AccessTree AccessTree::any_of(std::vector<AccessTree> children) { return gate(1, std::move(children)); }

void AccessTree::append(const AccessTree& sub, std::optional<NodeId> parent, std::uint16_t index) {
    const auto offset = static_cast<NodeId>(nodes_.size());
    for (const auto& n : sub.nodes_) {
        Node copy = n;
        copy.id = n.id + offset;
        for (auto& c : copy.children) c += offset;
        if (n.parent) copy.parent = *n.parent + offset;
        nodes_.push_back(std::move(copy));
    }
    nodes_[offset].parent = parent;
    nodes_[offset].index = index;
}

std::size_t AccessTree::gate_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return !n.is_leaf(); }));
}

std::size_t AccessTree::leaf_count() const { return nodes_.size() - gate_count(); }

std::vector<std::string> AccessTree::attributes() const {
    std::set<std::string> s;
    for (const auto& n : nodes_)
        if (n.is_leaf()) s.insert(n.attribute);
    return {s.begin(), s.end()};
}

std::string AccessTree::to_string() const {
    std::function<std::string(NodeId, bool)> render = [&](NodeId id, bool top) -> std::string {
        const Node& n = nodes_[id];
        if (n.is_leaf()) return n.attribute;
        std::vector<std::string> parts;
        for (auto c : n.children) parts.push_back(render(c, false));
        const std::size_t c = n.children.size();
        std::string out;
        if (c > 1 && (n.threshold == c || n.threshold == 1)) {
            const char* op = n.threshold == 1 ? " or " : " and ";
            for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? op : "") + parts[i];
            return top ? out : "(" + out + ")";
        }
        out = std::to_string(n.threshold) + " of (";
        for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
        return out + ")";
    };
    return render(0, true);
}

// --- parsing ---------------------------------------------------------------

namespace {

bool is_attr_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '.' ||
           c == '-';
}

struct Token {
    enum Kind { kWord, kLParen, kRParen, kComma, kEnd } kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(') {
            out.push_back({Token::kLParen, "(", i++});
        } else if (c == ')') {
            out.push_back({Token::kRParen, ")", i++});
        } else if (c == ',') {
            out.push_back({Token::kComma, ",", i++});
        } else if (is_attr_char(c)) {
            const std::size_t start = i;
            while (i < s.size() && is_attr_char(s[i])) ++i;
            out.push_back({Token::kWord, std::string(s.substr(start, i - start)), start});
        } else {
            throw PolicyError(PolicyError::Kind::kSyntax, i,
                              "unexpected character '" + std::string(1, c) + "' at position " +
                                  std::to_string(i));
        }
    }
    out.push_back({Token::kEnd, "", s.size()});
    return out;
}

bool keyword(const Token& t, std::string_view kw) {
    if (t.kind != Token::kWord || t.text.size() != kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
    return true;
}

bool reserved(const Token& t) { return keyword(t, "and") || keyword(t, "or") || keyword(t, "of"); }

class Parser {
  public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    AccessTree parse() {
        if (peek().kind == Token::kEnd)
            throw PolicyError(PolicyError::Kind::kEmptyAttribute, 0, "empty policy");
        AccessTree t = expr();
        if (peek().kind != Token::kEnd) fail("unexpected '" + peek().text + "'");
        return t;
    }

  private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(const std::string& msg) const {
        const auto p = peek().pos;
        throw PolicyError(PolicyError::Kind::kSyntax, p,
                          msg + " at position " + std::to_string(p));
    }

    void expect(Token::Kind k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        ++pos_;
    }

    AccessTree expr() {
        std::vector<AccessTree> parts{term()};
        while (keyword(peek(), "or")) {
            ++pos_;
            parts.push_back(term());
        }
        return parts.size() == 1 ? std::move(parts.front()) : AccessTree::any_of(std::move(parts));
    }

    AccessTree term() {
        std::vector<AccessTree> parts{factor()};
        while (keyword(peek(), "and")) {
            ++pos_;
            parts.push_back(factor());
        }
        if (parts.size() > 0xffff) fail("too many operands");
        return parts.size() == 1 ? std::move(parts.front()) : AccessTree::all_of(std::move(parts));
    }

    AccessTree factor() {
        const Token& t = peek();
        if (t.kind == Token::kLParen) {
            ++pos_;
            AccessTree inner = expr();
            expect(Token::kRParen, "')'");
            return inner;
        }
        if (t.kind == Token::kWord && keyword(peek(1), "of")) return threshold_gate();
        if (t.kind == Token::kWord && !reserved(t)) {
            ++pos_;
            return AccessTree::leaf(t.text);
        }
        if (t.kind == Token::kEnd || t.kind == Token::kRParen || t.kind == Token::kComma)
            throw PolicyError(PolicyError::Kind::kEmptyAttribute, t.pos,
                              "missing attribute at position " + std::to_string(t.pos));
        fail("expected attribute, '(' or 'k of'");
    }

    AccessTree threshold_gate() {
        const Token& num = next();
        if (num.text.empty() || !std::all_of(num.text.begin(), num.text.end(),
                                             [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw PolicyError(PolicyError::Kind::kSyntax, num.pos,
                              "threshold must be an integer at position " + std::to_string(num.pos));
        ++pos_;  // "of"
        expect(Token::kLParen, "'(' after 'of'");
        std::vector<AccessTree> children{expr()};
        while (peek().kind == Token::kComma) {
            ++pos_;
            children.push_back(expr());
        }
        expect(Token::kRParen, "')'");
        const unsigned long k = num.text.size() > 6 ? 1000000UL : std::stoul(num.text);
        if (k < 1 || k > children.size())
            throw PolicyError(PolicyError::Kind::kThreshold, num.pos,
                              "threshold " + num.text + " outside 1.." +
                                  std::to_string(children.size()) + " at position " +
                                  std::to_string(num.pos));
        return AccessTree::gate(static_cast<std::uint16_t>(k), std::move(children));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

AccessTree parse_policy(std::string_view text) { return Parser(text).parse(); }

// --- partition -------------------------------------------------------------

std::vector<SubTreePolicy> enumerate_blocks(const AccessTree& tree) {
    if (tree.root().is_leaf())
        throw std::invalid_argument("access tree has no gate; wrap a single attribute as \"1 of (A)\"");
    std::vector<SubTreePolicy> blocks;
    std::map<NodeId, std::size_t> block_of;
    std::deque<NodeId> queue{tree.root_id()};
    block_of[tree.root_id()] = 1;
    // First pass assigns block numbers in BFS order over gates.
    std::vector<NodeId> order;
    while (!queue.empty()) {
        const NodeId id = queue.front();
        queue.pop_front();
        order.push_back(id);
        for (auto c : tree.node(id).children)
            if (!tree.node(c).is_leaf()) {
                const std::size_t b = block_of.size() + 1;
                block_of[c] = b;
                queue.push_back(c);
            }
    }
    for (const NodeId id : order) {
        const Node& n = tree.node(id);
        SubTreePolicy sub;
        sub.block = block_of.at(id);
        sub.interior_node = id;
        sub.threshold = n.threshold;
        sub.child_count = static_cast<std::uint16_t>(n.children.size());
        if (n.parent) sub.parent_block = block_of.at(*n.parent);
        for (auto c : n.children) {
            const Node& child = tree.node(c);
            if (child.is_leaf()) sub.leaves.push_back({c, child.attribute, child.index});
            else sub.interiors.push_back({c, child.index, block_of.at(c)});
        }
        blocks.push_back(std::move(sub));
    }
    return blocks;
}

// --- serialization ---------------------------------------------------------

Bytes SerializedTree::bytes() const {
    Bytes out = body;
    out.insert(out.end(), digest.begin(), digest.end());
    return out;
}

SerializedTree canonical_serialize(const AccessTree& tree) {
    ByteWriter w;
    w.u8(kTreeFormatVersion);
    w.u32(static_cast<std::uint32_t>(tree.nodes().size()));
    // Node ids are already preorder positions.
    for (const auto& n : tree.nodes()) {
        w.u8(n.is_leaf() ? 0 : 1);
        w.u16(n.threshold);
        w.u16(static_cast<std::uint16_t>(n.children.size()));
        w.str16(as_view(n.attribute));
    }
    SerializedTree out;
    out.body = std::move(w).take();
    out.digest = sha256(out.body);
    return out;
}

class TreeDecoder {
  public:
    static AccessTree decode(ByteView body) {
        ByteReader r(body);
        if (r.u8() != kTreeFormatVersion) throw DecodeError("tree: unknown version");
        const std::uint32_t count = r.u32();
        if (count == 0) throw DecodeError("tree: no nodes");
        // Each record is at least 7 bytes; bounds the allocation below.
        if (count > r.remaining() / 7) throw DecodeError("tree: node count exceeds body");
        struct Rec {
            std::uint8_t kind;
            std::uint16_t threshold, children;
            std::string attr;
        };
        std::vector<Rec> recs(count);
        for (auto& rec : recs) {
            rec.kind = r.u8();
            rec.threshold = r.u16();
            rec.children = r.u16();
            auto a = r.str16();
            rec.attr.assign(a.begin(), a.end());
        }
        r.expect_done("tree");
        std::size_t next = 0;
        std::function<AccessTree(int)> build = [&](int depth) -> AccessTree {
            if (next >= recs.size()) throw DecodeError("tree: preorder records end early");
            if (depth > 4096) throw DecodeError("tree: too deep");
            const Rec& rec = recs[next++];
            if (rec.kind == 0) {
                if (rec.threshold != 0 || rec.children != 0 || rec.attr.empty())
                    throw DecodeError("tree: malformed leaf record");
                return AccessTree::leaf(rec.attr);
            }
            if (rec.kind != 1 || !rec.attr.empty() || rec.children == 0 || rec.threshold == 0 ||
                rec.threshold > rec.children)
                throw DecodeError("tree: malformed gate record");
            std::vector<AccessTree> kids;
            for (int i = 0; i < rec.children; ++i) kids.push_back(build(depth + 1));
            return AccessTree::gate(rec.threshold, std::move(kids));
        };
        AccessTree t = build(0);
        if (next != recs.size()) throw DecodeError("tree: records left after the root subtree");
        return t;
    }
};

AccessTree parse_serialized(ByteView bytes) {
    if (bytes.size() < 32) throw DecodeError("tree: shorter than its digest");
    const auto body = bytes.first(bytes.size() - 32);
    const auto digest = bytes.last(32);
    const Digest expect = sha256(body);
    if (!std::equal(expect.begin(), expect.end(), digest.begin()))
        throw DecodeError("tree: digest mismatch");
    return TreeDecoder::decode(body);
}

// --- branch sets and satisfaction ------------------------------------------

std::vector<std::vector<std::string>> root_branch_partition(const AccessTree& tree) {
    const Node& root = tree.root();
    if (root.is_leaf()) throw std::invalid_argument("root_branch_partition: root is a leaf");
    std::vector<std::vector<std::string>> sets;
    for (auto c : root.children) {
        std::set<std::string> here;
        std::vector<NodeId> stack{c};
        while (!stack.empty()) {
            const Node& n = tree.node(stack.back());
            stack.pop_back();
            if (n.is_leaf()) {
                here.insert(n.attribute);
            } else {
                stack.insert(stack.end(), n.children.begin(), n.children.end());
            }
        }
        sets.emplace_back(here.begin(), here.end());
    }
    return sets;
}

bool satisfies(const AccessTree& tree, const AttributeSet& attrs) {
    std::function<bool(NodeId)> eval = [&](NodeId id) {
        const Node& n = tree.node(id);
        if (n.is_leaf()) return attrs.count(n.attribute) > 0;
        std::size_t ok = 0;
        for (auto c : n.children)
            if (eval(c) && ++ok >= n.threshold) return true;
        return false;
    };
    return eval(tree.root_id());
}

}  // namespace pcpabe
