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

// Secret-sharing machinery:
//  * top-down polynomial shares over an access tree and Lagrange recombination,
//  * (k, t) Shamir sharing of a limb vector (the policy-hiding share),
//  * the masked attribute point table consumed by the attribute pre-check,
//  * (n+1, n+1) XOR sharing of the serialized tree across block ids.
//
// The polynomial code is generic over the field so that the same code runs
// over the pairing group order and over the small test prime 2^31 - 1.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcpabe/bytes.hpp"
#include "pcpabe/crypto.hpp"
#include "pcpabe/pairing.hpp"
#include "pcpabe/policy.hpp"

namespace pcpabe {

template <class F>
concept PrimeField = std::regular<F> && requires(F a, F b, std::uint64_t u, Rng& rng) {
    { a + b } -> std::same_as<F>;
    { a - b } -> std::same_as<F>;
    { a * b } -> std::same_as<F>;
    { -a } -> std::same_as<F>;
    { a.inverse() } -> std::same_as<F>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { F::from_u64(u) } -> std::same_as<F>;
    { F::random(rng) } -> std::same_as<F>;
};

/// Z_p for p = 2^31 - 1. Small enough for exhaustive test oracles.
class TinyScalar {
  public:
    static constexpr std::uint64_t kModulus = 2147483647ULL;

    TinyScalar() = default;
    static TinyScalar from_u64(std::uint64_t v) { return TinyScalar(v % kModulus); }
    static TinyScalar random(Rng& rng) { return TinyScalar(rng.uniform(kModulus)); }

    std::uint64_t value() const { return v_; }
    TinyScalar operator+(const TinyScalar& o) const { return TinyScalar((v_ + o.v_) % kModulus); }
    TinyScalar operator-(const TinyScalar& o) const {
        return TinyScalar((v_ + kModulus - o.v_) % kModulus);
    }
    TinyScalar operator*(const TinyScalar& o) const { return TinyScalar((v_ * o.v_) % kModulus); }
    TinyScalar operator-() const { return TinyScalar((kModulus - v_) % kModulus); }
    TinyScalar inverse() const {
        if (v_ == 0) throw std::domain_error("tiny scalar: inverse of zero");
        // Fermat: v^(p-2).
        std::uint64_t result = 1, base = v_, e = kModulus - 2;
        while (e) {
            if (e & 1) result = result * base % kModulus;
            base = base * base % kModulus;
            e >>= 1;
        }
        return TinyScalar(result);
    }
    bool is_zero() const { return v_ == 0; }
    bool operator==(const TinyScalar&) const = default;

  private:
    explicit TinyScalar(std::uint64_t v) : v_(v) {}
    std::uint64_t v_ = 0;
};

static_assert(PrimeField<TinyScalar>);
static_assert(PrimeField<Scalar>);

/// Raised when fewer than k distinct points are available (the pre-check's refusal).
class InsufficientShares : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// --- polynomials and Lagrange ----------------------------------------------

/// Delta_{i,S}(x) = prod_{j in S, j != i} (x - j) / (i - j).
template <PrimeField F>
F lagrange_coeff(const F& i, std::span<const F> set, const F& x) {
    bool found = false;
    F num = F::from_u64(1), den = F::from_u64(1);
    for (std::size_t a = 0; a < set.size(); ++a) {
        for (std::size_t b = a + 1; b < set.size(); ++b)
            if (set[a] == set[b]) throw std::invalid_argument("lagrange_coeff: repeated point in S");
        if (set[a] == i) {
            found = true;
            continue;
        }
        num = num * (x - set[a]);
        den = den * (i - set[a]);
    }
    if (!found) throw std::invalid_argument("lagrange_coeff: i is not in S");
    return num * den.inverse();
}

template <PrimeField F>
class Polynomial {
  public:
    /// coeffs[0] is the constant term.
    explicit Polynomial(std::vector<F> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(F{});
    }
    /// Fresh polynomial of the given degree with a fixed constant term.
    static Polynomial random(const F& constant, std::size_t degree, Rng& rng) {
        std::vector<F> c{constant};
        for (std::size_t i = 0; i < degree; ++i) c.push_back(F::random(rng));
        return Polynomial(std::move(c));
    }

    F operator()(const F& x) const {
        F acc{};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    std::size_t degree() const { return coeffs_.size() - 1; }
    const std::vector<F>& coefficients() const { return coeffs_; }

  private:
    std::vector<F> coeffs_;
};

template <PrimeField F>
struct ShareAssignment {
    std::map<NodeId, F> share;                // q_x(0) for every node
    std::map<NodeId, Polynomial<F>> polynomial;  // q_x for every gate
};

/// Top-down: each gate x gets a random polynomial of degree k_x - 1 with
/// constant term q_x(0); child c inherits q_x(index(c)). q_root(0) = secret.
template <PrimeField F>
ShareAssignment<F> assign_shares(const AccessTree& tree, const F& secret, Rng& rng) {
    ShareAssignment<F> out;
    out.share.emplace(tree.root_id(), secret);
    // Preorder ids: a parent always precedes its children.
    for (const Node& n : tree.nodes()) {
        if (n.is_leaf()) continue;
        auto poly = Polynomial<F>::random(out.share.at(n.id), n.threshold - 1u, rng);
        for (auto c : n.children)
            out.share.emplace(c, poly(F::from_u64(tree.node(c).index)));
        out.polynomial.emplace(n.id, std::move(poly));
    }
    return out;
}

/// Sum over S of Delta_{i,S}(0) * value_i: the constant term of the
/// degree < |S| polynomial through the given (x, value) pairs.
template <PrimeField F>
F interpolate_at_zero(std::span<const std::pair<F, F>> points) {
    std::vector<F> xs;
    for (const auto& p : points) xs.push_back(p.first);
    F acc{};
    for (const auto& p : points) acc = acc + lagrange_coeff<F>(p.first, xs, F{}) * p.second;
    return acc;
}

// --- Shamir ----------------------------------------------------------------

/// A Shamir point shared across limbs: one x, one y per limb.
template <PrimeField F>
struct ShamirPoint {
    F x;
    std::vector<F> y;
    bool operator==(const ShamirPoint&) const = default;
};

/// (k, t) sharing of each limb on independent degree-(k-1) polynomials,
/// evaluated at the shared x-coordinates 1..t.
template <PrimeField F>
std::vector<ShamirPoint<F>> shamir_split(std::span<const F> secret, unsigned k, unsigned t, Rng& rng) {
    if (k < 1 || k > t) throw std::invalid_argument("shamir_split: need 1 <= k <= t");
    std::vector<ShamirPoint<F>> points(t);
    for (unsigned j = 0; j < t; ++j) points[j].x = F::from_u64(j + 1);
    for (const F& limb : secret) {
        const auto q = Polynomial<F>::random(limb, k - 1, rng);
        for (auto& p : points) p.y.push_back(q(p.x));
    }
    return points;
}

template <PrimeField F>
std::vector<ShamirPoint<F>> shamir_split(const F& secret, unsigned k, unsigned t, Rng& rng) {
    return shamir_split<F>(std::span<const F>(&secret, 1), k, t, rng);
}

/// Interpolates at 0 using exactly the k points with the lowest x
/// (ordered by their integer value for TinyScalar, by encoding for Scalar).
template <PrimeField F>
std::vector<F> shamir_recover(std::vector<ShamirPoint<F>> points, unsigned k) {
    if (k < 1) throw std::invalid_argument("shamir_recover: k must be positive");
    auto key = [](const F& x) {
        if constexpr (std::same_as<F, Scalar>) return x.to_bytes();
        else return x.value();
    };
    std::sort(points.begin(), points.end(),
              [&](const ShamirPoint<F>& a, const ShamirPoint<F>& b) { return key(a.x) < key(b.x); });
    points.erase(std::unique(points.begin(), points.end(),
                             [](const ShamirPoint<F>& a, const ShamirPoint<F>& b) { return a.x == b.x; }),
                 points.end());
    for (const auto& p : points)
        if (p.x.is_zero()) throw std::invalid_argument("shamir_recover: point at x = 0");
    if (points.size() < k)
        throw InsufficientShares("shamir_recover: " + std::to_string(points.size()) +
                                 " distinct points, need " + std::to_string(k));
    points.resize(k);
    const std::size_t limbs = points.front().y.size();
    for (const auto& p : points)
        if (p.y.size() != limbs) throw std::invalid_argument("shamir_recover: limb count mismatch");
    std::vector<F> xs;
    for (const auto& p : points) xs.push_back(p.x);
    std::vector<F> coeff;
    for (const auto& p : points) coeff.push_back(lagrange_coeff<F>(p.x, xs, F{}));
    std::vector<F> out(limbs);
    for (std::size_t l = 0; l < limbs; ++l)
        for (std::size_t j = 0; j < points.size(); ++j) out[l] = out[l] + coeff[j] * points[j].y[l];
    return out;
}

// --- limbs -----------------------------------------------------------------

inline constexpr std::size_t kLimbBytes = 31;

/// Splits a byte string into 31-byte big-endian limbs (the last may be short).
std::vector<Scalar> bytes_to_limbs(ByteView bytes);
/// Inverse of bytes_to_limbs for a known total length; nullopt when a limb
/// does not fit its width (a wrong reconstruction).
std::optional<Bytes> limbs_to_bytes(std::span<const Scalar> limbs, std::size_t length);

// --- masked point table ----------------------------------------------------

using TableKey = Digest;

struct MaskedPointTable {
    std::map<TableKey, Bytes> entries;
    std::uint16_t k = 0;
    std::uint16_t t = 0;

    /// count(4) || sorted records key(32) || len(2) || value || k(2) || t(2)
    Bytes serialize() const;
    static MaskedPointTable deserialize(ByteView bytes);
    bool operator==(const MaskedPointTable&) const = default;
};

TableKey table_key(std::string_view attribute);
Bytes table_mask(std::string_view attribute, std::size_t length);

/// Point j goes to every attribute of sets[j]; an attribute in several sets
/// gets all of their points in one entry, count(2) || points before masking.
/// Throws on a key collision.
MaskedPointTable build_point_table(const std::vector<std::vector<std::string>>& sets,
                                   const std::vector<ShamirPoint<Scalar>>& points, unsigned k);

/// Unmasked points for the attributes that have entries, deduplicated by x.
/// Entries that decode to x = 0, x > t or an out-of-range limb are dropped.
std::vector<ShamirPoint<Scalar>> lookup_points(const MaskedPointTable& table,
                                               const AttributeSet& attrs);

// --- XOR id shares ---------------------------------------------------------

struct IdShareSet {
    std::vector<Bytes> ids;  // R_1 .. R_n
    Bytes last;              // R_{n+1}
};

/// R_1..R_n uniform; R_{n+1} = T xor R_1 xor ... xor R_n.
IdShareSet xor_share_ids(const SerializedTree& tree, std::size_t n, Rng& rng);
/// XOR of every id and R_{n+1}. Throws std::invalid_argument on length mismatch.
Bytes xor_recover(std::span<const Bytes> ids, ByteView last);

}  // namespace pcpabe
