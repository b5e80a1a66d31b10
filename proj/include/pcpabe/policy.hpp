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

#pragma once

// Threshold access trees: parsing, partition into two-level sub-trees,
// canonical serialization and the reference satisfaction check.
//
// Policy grammar:
//   expr   := term ("or" term)*
//   term   := factor ("and" factor)*
//   factor := attribute | "(" expr ")" | int "of" "(" expr ("," expr)* ")"
//   attribute := [A-Za-z0-9_:.-]+
// "and" chains become c-of-c gates, "or" chains 1-of-c gates.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pcpabe/bytes.hpp"
#include "pcpabe/crypto.hpp"

namespace pcpabe {

using AttributeSet = std::set<std::string>;
using NodeId = std::uint32_t;

class PolicyError : public std::runtime_error {
  public:
    enum class Kind { kSyntax, kThreshold, kEmptyAttribute };
    PolicyError(Kind kind, std::size_t position, const std::string& what)
        : std::runtime_error(what), kind_(kind), position_(position) {}
    Kind kind() const { return kind_; }
    /// Byte offset into the policy text.
    std::size_t position() const { return position_; }

  private:
    Kind kind_;
    std::size_t position_;
};

struct Node {
    NodeId id = 0;
    std::string attribute;         // leaves only
    std::uint16_t threshold = 0;   // gates only, 1..children.size()
    std::vector<NodeId> children;  // gates only
    std::uint16_t index = 0;       // 1-based position under the parent; 0 for the root
    std::optional<NodeId> parent;

    bool is_leaf() const { return threshold == 0; }
    bool operator==(const Node&) const = default;
};

/// Immutable threshold tree. Node ids are preorder positions, the root is 0.
class AccessTree {
  public:
    static AccessTree leaf(std::string attribute);
    static AccessTree gate(std::uint16_t threshold, std::vector<AccessTree> children);
    static AccessTree all_of(std::vector<AccessTree> children);
    static AccessTree any_of(std::vector<AccessTree> children);

    const Node& root() const { return nodes_.front(); }
    NodeId root_id() const { return 0; }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t gate_count() const;
    std::size_t leaf_count() const;
    /// Distinct attribute strings, sorted.
    std::vector<std::string> attributes() const;

    /// Round-trippable policy text.
    std::string to_string() const;

    bool operator==(const AccessTree&) const = default;

  private:
    friend class TreeDecoder;
    AccessTree() = default;
    void append(const AccessTree& sub, std::optional<NodeId> parent, std::uint16_t index);
    std::vector<Node> nodes_;
};

AccessTree parse_policy(std::string_view text);

struct LeafChild {
    NodeId node;
    std::string attribute;
    std::uint16_t index;
    bool operator==(const LeafChild&) const = default;
};

struct InteriorChild {
    NodeId node;
    std::uint16_t index;
    std::size_t block;  // block index of the child's own sub-tree
    bool operator==(const InteriorChild&) const = default;
};

/// One interior node and its immediate children; one per ciphertext block.
struct SubTreePolicy {
    std::size_t block = 0;  // 1-based
    NodeId interior_node = 0;
    std::uint16_t threshold = 0;
    std::uint16_t child_count = 0;
    std::vector<LeafChild> leaves;
    std::vector<InteriorChild> interiors;
    std::optional<std::size_t> parent_block;
    bool operator==(const SubTreePolicy&) const = default;
};

/// Breadth-first over gate nodes, so block 1 holds the root and every
/// parent block precedes its children. Throws std::invalid_argument for a
/// tree with no gate (a bare leaf; wrap it as "1 of (leaf)").
std::vector<SubTreePolicy> enumerate_blocks(const AccessTree& tree);

struct SerializedTree {
    Bytes body;
    Digest digest;

    /// body || digest; this is the string the id shares XOR to.
    Bytes bytes() const;
    std::size_t size() const { return body.size() + digest.size(); }
};

inline constexpr std::uint8_t kTreeFormatVersion = 0x01;

SerializedTree canonical_serialize(const AccessTree& tree);
/// Inverse of canonical_serialize over body || digest. Throws DecodeError on
/// digest mismatch or any structural problem.
AccessTree parse_serialized(ByteView bytes);

/// Attribute set of each root branch. An attribute repeated under several
/// branches appears in each of their sets.
std::vector<std::vector<std::string>> root_branch_partition(const AccessTree& tree);

/// Reference recursive threshold evaluation.
bool satisfies(const AccessTree& tree, const AttributeSet& attrs);

}  // namespace pcpabe
