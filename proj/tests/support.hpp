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

// Generators and independent oracles shared by the unit and acceptance tests.

#include <functional>
#include <string>
#include <vector>

#include "pcpabe/abe.hpp"

namespace pcpabe::testing {

/// Random threshold tree with at most `max_leaves` leaves and `max_gates`
/// gates (at least one gate). Attributes come from the first `alphabet`
/// capital letters, so repeats are common.
inline AccessTree random_tree(Rng& rng, std::size_t max_leaves, std::size_t max_gates,
                              std::size_t alphabet = 8) {
    for (;;) {
        std::size_t leaves = 0, gates = 0;
        std::function<AccessTree(int)> gate = [&](int depth) {
            ++gates;
            std::vector<AccessTree> kids;
            const std::size_t c = 1 + rng.uniform(depth == 0 ? 4 : 3);
            for (std::size_t i = 0; i < c; ++i) {
                if (depth < 3 && rng.uniform(100) < 35) {
                    kids.push_back(gate(depth + 1));
                } else {
                    ++leaves;
                    kids.push_back(AccessTree::leaf(std::string(1, static_cast<char>('A' + rng.uniform(alphabet)))));
                }
            }
            const auto k = static_cast<std::uint16_t>(1 + rng.uniform(kids.size()));
            return AccessTree::gate(k, std::move(kids));
        };
        AccessTree t = gate(0);
        if (leaves <= max_leaves && gates <= max_gates) return t;
    }
}

/// Threshold evaluation written against the flat node list, bottom-up,
/// without touching the library's recursive evaluator.
inline bool oracle_satisfies(const AccessTree& tree, const AttributeSet& attrs) {
    const auto& nodes = tree.nodes();
    std::vector<char> ok(nodes.size(), 0);
    for (std::size_t i = nodes.size(); i-- > 0;) {
        const Node& n = nodes[i];
        if (n.is_leaf()) {
            ok[i] = attrs.count(n.attribute) ? 1 : 0;
            continue;
        }
        std::size_t count = 0;
        for (auto c : n.children) count += ok[c];
        ok[i] = count >= n.threshold ? 1 : 0;
    }
    return ok[0] != 0;
}

/// Every subset of `universe`, by bit mask.
inline std::vector<AttributeSet> all_subsets(const std::vector<std::string>& universe) {
    std::vector<AttributeSet> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << universe.size()); ++mask) {
        AttributeSet s;
        for (std::size_t b = 0; b < universe.size(); ++b)
            if (mask >> b & 1) s.insert(universe[b]);
        out.push_back(std::move(s));
    }
    return out;
}

/// F_i = e(g,g)^{r q_i(0)} for every block the key can satisfy, computed
/// bottom-up with the public decryption subroutines.
inline std::vector<std::optional<TargetElement>> block_values(const Ciphertext& ct, const AccessTree& tree,
                                                              const AttributeKey& sk) {
    const auto subs = enumerate_blocks(tree);
    std::vector<std::optional<TargetElement>> f(subs.size());
    for (std::size_t i = subs.size(); i-- > 0;) {
        std::map<std::uint16_t, TargetElement> values;
        for (const auto& z : subs[i].leaves)
            if (sk.holds(z.attribute))
                if (auto v = decrypt_leaf(ct.blocks[i], sk, z)) values.emplace(z.index, v.value());
        for (const auto& c : subs[i].interiors)
            if (f[c.block - 1]) values.emplace(c.index, *f[c.block - 1]);
        if (auto v = decrypt_interior(values, subs[i].threshold)) f[i] = v.value();
    }
    return f;
}

inline Bytes serialize_plain(const BlockPlain& p) {
    Bytes out = p.db;
    const auto e = p.e.serialize();
    out.insert(out.end(), e.begin(), e.end());
    return out;
}

}  // namespace pcpabe::testing
