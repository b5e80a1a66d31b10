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

// Block-partitioned CP-ABE.
//
// The access tree is cut into one two-level sub-tree per gate and the message
// into the same number of XOR-chained blocks. Block i is encrypted under its
// sub-tree: the target-group mask e(g,g)^{alpha q_i(0)} keys an AEAD over
// DB_i || E_i, where E_i = g^{s_i/q} lets the children of block i be opened
// through Delta C_child = g^{(s_i - q_child(0))/q} without satisfying their
// own sub-tree. The tree itself travels only as XOR shares in the block ids,
// the last share being Shamir-shared across the root's branches through a
// masked attribute table.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcpabe/bytes.hpp"
#include "pcpabe/chunker.hpp"
#include "pcpabe/crypto.hpp"
#include "pcpabe/pairing.hpp"
#include "pcpabe/policy.hpp"
#include "pcpabe/sharing.hpp"

namespace pcpabe {

// --- key material ----------------------------------------------------------

struct PublicParams {
    std::string hash_dst{kHashToGroupDst};
    SourceElement g;
    SourceElement h;    // g^beta
    TargetElement a_t;  // e(g, g)^alpha

    /// Binds key files and ciphertexts to one parameter set.
    Digest digest() const;
    SourceElement hash_attribute(std::string_view attribute) const;
};

struct MasterKey {
    Scalar beta;
    SourceElement g_alpha;
    Scalar q;
    Digest pk_digest{};
};

struct AttributeComponent {
    SourceElement d;        // g^r * H(j)^{r_j}
    SourceElement d_prime;  // g^{r_j}
};

struct AttributeKey {
    SourceElement d;      // g^{(alpha + r) / beta}
    SourceElement d_hat;  // g^{r q}
    std::map<std::string, AttributeComponent> components;
    Digest pk_digest{};

    AttributeSet attributes() const;
    bool holds(std::string_view attribute) const;
    /// The same key with only the listed attributes' components. Still a
    /// well-formed key for the smaller set (same r, independent r_j).
    AttributeKey restricted_to(const AttributeSet& attrs) const;
};

/// Only 128-bit security (BLS12-381) is supported; anything else throws.
std::pair<PublicParams, MasterKey> setup(Rng& rng, unsigned security_bits = 128);

/// Throws std::invalid_argument for an empty set or a key from other parameters.
AttributeKey keygen(const PublicParams& pk, const MasterKey& mk, const AttributeSet& attrs, Rng& rng);
/// keygen with a caller-chosen r, for tests that track exponents.
AttributeKey keygen_with(const PublicParams& pk, const MasterKey& mk, const AttributeSet& attrs,
                         const Scalar& r, Rng& rng);

/// e(D_j, g) / e(D'_j, H(j)) must equal e(g, g)^r for every attribute.
bool key_well_formed(const PublicParams& pk, const AttributeKey& sk);

// --- ciphertext ------------------------------------------------------------

struct LeafComponent {
    std::uint16_t index = 0;      // index of the leaf under its gate
    SourceElement c_hat;          // g^{q_y(0)}
    SourceElement c_hat_prime;    // H(att(y))^{q_y(0)}
};

struct CiphertextBlock {
    Bytes id;                  // R_i, |T| bytes
    std::uint32_t index = 0;   // 1-based
    SourceElement c_prime;     // h^{q_i(0)}
    std::optional<SourceElement> delta;  // g^{(s_parent - q_i(0)) / q}, absent for block 1
    std::vector<LeafComponent> leaves;
    Bytes payload;             // AEAD(DB_i || E_i)
    std::optional<MaskedPointTable> table;  // block n only

    /// id || index(4) || C' || delta flag(1) [|| delta] || leaf count(2)
    /// || { index(2) || C^ || C^' } || payload length(4) || payload [|| table]
    Bytes serialize() const;
    static CiphertextBlock deserialize(ByteView bytes, std::size_t id_length);
};

inline constexpr std::uint8_t kManifestVersion = 0x01;

/// Sent ahead of the blocks: everything the pre-check and the integrity
/// check need, plus the layout of what follows.
struct Manifest {
    std::uint32_t n = 0;
    std::uint32_t tree_length = 0;      // |T| = length of every id
    std::uint64_t block_length = 0;     // |DB_i|
    Digest pk_digest{};
    std::vector<Bytes> ids;             // R_1 .. R_n
    std::vector<std::uint64_t> block_sizes;
    MaskedPointTable table;

    std::vector<std::uint64_t> block_offsets() const;
    Bytes serialize() const;
    static Manifest deserialize(ByteView bytes);
};

struct Ciphertext {
    Manifest manifest;
    std::vector<CiphertextBlock> blocks;
};

/// Bytes of the AEAD plaintext that hold E_i.
inline constexpr std::size_t kEmbeddedElementBytes = SourceElement::kBytes;

/// Symmetric key and nonce for one block, derived from its target-group mask.
struct PayloadKey {
    Bytes key;
    Bytes nonce;
};
PayloadKey derive_payload_key(const TargetElement& mask, std::uint32_t index, ByteView id);
Bytes payload_aad(std::uint32_t index, ByteView id);

struct SealedBlock {
    CiphertextBlock block;
    Scalar s;  // s_i, needed by this block's children for their delta
};

/// Encrypts one chained data block under its sub-tree. `s_parent` must be
/// given for every block but the first.
SealedBlock encrypt_block(const PublicParams& pk, const MasterKey& mk, const SubTreePolicy& sub,
                          ByteView db, const ShareAssignment<Scalar>& shares, Bytes id,
                          const std::optional<Scalar>& s_parent, Rng& rng);

/// Producer side of the encrypt -> transmit pipeline. The constructor does
/// all per-message preparation and builds the manifest; seal_next() then
/// yields block 1, 2, ..., n, each complete before it is returned.
class Encryptor {
  public:
    Encryptor(const PublicParams& pk, const MasterKey& mk, ByteView message, const AccessTree& tree,
              Rng& rng);

    const Manifest& manifest() const { return manifest_; }
    std::size_t block_count() const { return subs_.size(); }
    bool done() const { return next_ == subs_.size(); }
    CiphertextBlock seal_next();

    // Exposed for exponent-tracking tests.
    const std::vector<SubTreePolicy>& sub_trees() const { return subs_; }
    const ShareAssignment<Scalar>& shares() const { return shares_; }
    const Scalar& block_secret(std::size_t block) const { return block_s_.at(block - 1); }
    const std::vector<std::vector<std::string>>& branch_sets() const { return sets_; }

  private:
    const PublicParams& pk_;
    const MasterKey& mk_;
    Rng& rng_;
    std::vector<SubTreePolicy> subs_;
    ShareAssignment<Scalar> shares_;
    std::vector<ChainedBlock> data_;
    IdShareSet ids_;
    std::vector<std::vector<std::string>> sets_;
    Manifest manifest_;
    std::vector<Scalar> block_s_;
    std::size_t next_ = 0;
};

Ciphertext encrypt(const PublicParams& pk, const MasterKey& mk, ByteView message,
                   const AccessTree& tree, Rng& rng);

/// Wire size of a block, computable before it is sealed.
std::uint64_t block_wire_size(std::size_t tree_length, const SubTreePolicy& sub,
                              std::uint64_t block_length, const MaskedPointTable* table);

// --- decryption ------------------------------------------------------------

enum class Stage { kAttCheck, kIntegrity, kBlock };

struct Refusal {
    Stage stage;
    std::size_t block = 0;  // for Stage::kBlock
    std::string reason;

    /// "att_check", "integrity" or "block <i>".
    std::string label() const;
};

/// Either a value or a typed refusal.
template <class T>
class Outcome {
  public:
    Outcome(T value) : v_(std::move(value)) {}
    Outcome(Refusal r) : v_(std::move(r)) {}

    bool ok() const { return v_.index() == 0; }
    explicit operator bool() const { return ok(); }
    T& value() { return std::get<0>(v_); }
    const T& value() const { return std::get<0>(v_); }
    const Refusal& refusal() const { return std::get<1>(v_); }

  private:
    std::variant<T, Refusal> v_;
};

/// Attribute pre-check: unmask the table entries the attributes reach and
/// interpolate R_{n+1} when at least k distinct branch points come out.
Outcome<Bytes> att_check(const MaskedPointTable& table, const AttributeSet& attrs,
                         std::size_t tree_length);

/// XOR of the ids with R_{n+1}; succeeds only if the result is a
/// digest-valid serialized tree.
Outcome<AccessTree> ctb_integrity(std::span<const Bytes> ids, ByteView last);

/// F_z = e(D_j, C^_z) / e(D'_j, C^'_z) = e(g, g)^{r q_z(0)} for j = att(z).
Outcome<TargetElement> decrypt_leaf(const CiphertextBlock& block, const AttributeKey& sk,
                                    const LeafChild& z);

/// Lagrange recombination at 0 over the lowest `threshold` child indices.
Outcome<TargetElement> decrypt_interior(const std::map<std::uint16_t, TargetElement>& child_values,
                                        std::uint16_t threshold);

struct BlockPlain {
    Bytes db;
    SourceElement e;  // E_i = g^{s_i / q}
    bool operator==(const BlockPlain&) const = default;
};

/// Opens a block with F_i = e(g, g)^{r q_i(0)}.
Outcome<BlockPlain> ctb_abe_dec(const CiphertextBlock& block, const AttributeKey& sk,
                                const TargetElement& f_i);
/// Opens a block with its parent's E.
Outcome<BlockPlain> ctb_sym_dec(const CiphertextBlock& block, const SourceElement& e_parent,
                                const AttributeKey& sk);

enum class DecryptPath { kAbe, kSym };

struct UnlockEvent {
    std::size_t block;
    DecryptPath path;
};

/// What one consume() call did; the pipeline cost model reads it.
struct ConsumeReport {
    std::size_t leaf_pairings = 0;   // decrypt_leaf calls
    std::size_t lagrange_terms = 0;  // target-group exponentiations in recombination
    std::vector<UnlockEvent> unlocked;
};

/// Consumer side of the transmit -> decrypt pipeline. begin() runs the
/// pre-check and the integrity check on the manifest; blocks are then fed
/// one by one and opened as soon as either path allows.
class DecryptSession {
  public:
    DecryptSession(const PublicParams& pk, const AttributeKey& sk, Manifest manifest);

    std::optional<Refusal> begin();
    Outcome<ConsumeReport> consume(CiphertextBlock block);
    Outcome<Bytes> finish();

    const AccessTree& tree() const { return *tree_; }
    const std::vector<SubTreePolicy>& sub_trees() const { return subs_; }
    std::optional<DecryptPath> path_of(std::size_t block) const;

  private:
    struct Slot {
        std::optional<CiphertextBlock> block;
        std::map<std::uint16_t, TargetElement> child_values;
        std::optional<TargetElement> f;
        std::optional<SourceElement> e;
        std::optional<DecryptPath> path;
    };
    std::optional<Refusal> settle(std::size_t block, ConsumeReport& report);
    Refusal fail(Refusal r);

    const PublicParams& pk_;
    const AttributeKey& sk_;
    Manifest manifest_;
    std::optional<AccessTree> tree_;
    std::vector<SubTreePolicy> subs_;
    std::vector<Slot> slots_;
    std::vector<ChainedBlock> plain_;
    bool begun_ = false;
    std::optional<Refusal> failed_;
};

Outcome<Bytes> decrypt(const PublicParams& pk, const AttributeKey& sk, const Ciphertext& ct);

// --- monolithic baseline ---------------------------------------------------

/// Single-ciphertext CP-ABE over the whole tree with no partition or
/// chaining: the comparison point for the pipeline benchmarks.
struct MonolithicCiphertext {
    AccessTree tree;
    SourceElement c_prime;                    // h^s
    std::map<NodeId, LeafComponent> leaves;   // every leaf of the tree
    Bytes payload;                            // AEAD(M)

    std::uint64_t wire_size() const;
};

MonolithicCiphertext encrypt_monolithic(const PublicParams& pk, ByteView message,
                                        const AccessTree& tree, Rng& rng);
Outcome<Bytes> decrypt_monolithic(const PublicParams& pk, const AttributeKey& sk,
                                  const MonolithicCiphertext& ct);

}  // namespace pcpabe
