#ifndef GMMCSP_RELATIONS_HPP
#define GMMCSP_RELATIONS_HPP

#include "gmmcsp/algebra.hpp"
#include "gmmcsp/errors.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace gmmcsp {

struct TupleHash {
    std::size_t operator()(const Tuple & t) const {
        std::size_t h = 1469598103934665603ull;
        for (Value v : t) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/**
 * A finite set of equal-arity tuples over the domain, kept duplicate-free
 * in lexicographic order, with a hash set alongside for O(1) membership.
 */
class Relation {
public:
    /// The empty relation of the given arity.
    explicit Relation(int arity);

    /// Sorts, deduplicates, and checks that all tuples have the stated arity.
    Relation(int arity, std::vector<Tuple> tuples);

    /// The full relation A^arity over a domain of size q.
    static Relation full(int arity, int domain_size);

    int arity() const { return arity_; }
    std::size_t size() const { return tuples_.size(); }
    bool empty() const { return tuples_.empty(); }
    const std::vector<Tuple> & tuples() const { return tuples_; }

    bool contains(const Tuple & t) const { return members_.count(t) != 0; }

    bool operator==(const Relation & other) const {
        return arity_ == other.arity_ && tuples_ == other.tuples_;
    }

private:
    int arity_;
    std::vector<Tuple> tuples_;
    std::unordered_set<Tuple, TupleHash> members_;
};

/// pr_{i1,...,ij} t with 1-based indices; repeats and arbitrary order allowed.
Tuple project_tuple(const Tuple & t, std::span<const int> indices);

/// pr_{i1,...,ij} R, deduplicated.
Relation project_relation(const Relation & r, std::span<const int> indices);

/**
 * A minority-pair witness triple (i, a, b): some ordered pair of tuples
 * agrees on coordinates 1..i-1 and takes values a, b at coordinate i.
 */
struct SignatureEntry {
    int i; // 1-based coordinate
    Value a;
    Value b;

    auto operator<=>(const SignatureEntry &) const = default;
};

/// The signature Sig_R: all witnessed minority triples, sorted.
using Signature = std::vector<SignatureEntry>;

struct WitnessedEntry {
    SignatureEntry entry;
    Tuple first;  // pr_i = entry.a
    Tuple second; // pr_i = entry.b
};

/// Signature plus one witnessing pair per entry (the lexicographically
/// least ordered pair, for determinism). Entries sorted.
struct WitnessedSignature {
    std::vector<WitnessedEntry> entries;

    Signature signature() const;
    bool has(const SignatureEntry & e) const;
};

/// True iff (t, t2) witnesses the triple: equal prefixes before entry.i,
/// values entry.a / entry.b at coordinate entry.i.
bool witnesses(const Tuple & t, const Tuple & t2, const SignatureEntry & entry);

/// Computes Sig_R with lexicographically least witnesses.
WitnessedSignature signature_of(const Relation & r, const PairTable & pairs);

/// True iff applying op coordinatewise to any arity() tuples of r stays in r.
bool is_invariant(const Relation & r, const OperationTable & op);

/// Default tuple budget for closure saturation.
inline constexpr std::size_t default_closure_cap = 1000000;

/**
 * <R>_op: the least relation containing r invariant under op, computed by
 * frontier-based saturation. Throws SizeCapExceeded past max_tuples.
 */
Relation closure(const Relation & r, const OperationTable & op,
    std::size_t max_tuples = default_closure_cap);

/**
 * True iff rp is a j-representation of r: equal signatures and equal
 * projections on every index set of size at most j. Requires rp as a
 * subset of r (NotASubset otherwise).
 */
bool check_representation(const Relation & rp, const Relation & r, int order,
    const PairTable & pairs);

/**
 * Preimage index of a compact representation: for each sorted duplicate-free
 * index set I with 1 <= |I| <= order and each value tuple in the projection
 * pr_I, one representative tuple id.
 */
class ProjTable {
public:
    ProjTable(int arity, int domain_size, int order);

    /// Keeps the first id inserted for a key.
    void insert(std::span<const int> indices, std::span<const Value> values,
        std::uint32_t id);

    std::optional<std::uint32_t> find(std::span<const int> indices,
        std::span<const Value> values) const;

    std::size_t size() const;

private:
    bool packed_;
    std::unordered_map<std::uint64_t, std::uint32_t> packed_map_;
    std::unordered_map<std::string, std::uint32_t> generic_map_;

    std::uint64_t pack(std::span<const int> indices, std::span<const Value> values) const;
    static std::string generic_key(std::span<const int> indices, std::span<const Value> values);
};

/**
 * A compact j-representation: a small subset of a relation with the same
 * signature and the same projections on index sets of size at most j,
 * carrying its witnessed signature and a preimage table so that the
 * solver procedures never rescan it.
 *
 * Tuples are stored deduplicated in insertion order; use as_relation()
 * for the canonical sorted view.
 */
class CompactRep {
public:
    class Builder;

    int arity() const { return arity_; }
    int order() const { return order_; }
    std::size_t size() const { return tuples_.size(); }
    bool empty() const { return tuples_.empty(); }
    const std::vector<Tuple> & tuples() const { return tuples_; }
    const Tuple & tuple(std::uint32_t id) const { return tuples_[id]; }

    /// Witnessed signature, entries sorted; witnesses are tuple ids.
    struct SigWitness {
        SignatureEntry entry;
        std::uint32_t first;
        std::uint32_t second;
    };
    const std::vector<SigWitness> & sig() const { return sig_; }

    Signature signature() const;

    /// Preimage lookup for a sorted duplicate-free index set, |I| <= order.
    std::optional<std::uint32_t> find_preimage(std::span<const int> indices,
        std::span<const Value> values) const {
        return proj_.find(indices, values);
    }

    Relation as_relation() const;

    /// Lexicographically least stored tuple; rep must be nonempty.
    const Tuple & least_tuple() const;

private:
    CompactRep(int arity, int order, int domain_size);

    int arity_;
    int order_;
    std::vector<Tuple> tuples_;
    std::unordered_map<Tuple, std::uint32_t, TupleHash> ids_;
    std::vector<SigWitness> sig_;
    ProjTable proj_;
};

/// Incremental constructor used by compress, full_space_rep, and the
/// solver procedures.
class CompactRep::Builder {
public:
    Builder(int arity, int order, int domain_size);

    /// Deduplicating insert; returns the tuple's id.
    std::uint32_t add_tuple(const Tuple & t);
    std::uint32_t add_tuple(Tuple && t);

    /// Entries must be added in sorted order without duplicates.
    void add_sig(const SignatureEntry & entry, std::uint32_t first, std::uint32_t second);

    /// Keeps the first preimage registered per (indices, values) key.
    void set_preimage(std::span<const int> indices, std::span<const Value> values,
        std::uint32_t id);

    bool empty() const { return rep_.tuples_.empty(); }
    std::size_t size() const { return rep_.tuples_.size(); }
    const Tuple & tuple(std::uint32_t id) const { return rep_.tuples_[id]; }

    CompactRep finish();

private:
    CompactRep rep_;
};

/**
 * Compresses an explicit relation to a compact j-representation: per
 * signature entry the lexicographically least witnessing pair, per
 * projection value the lexicographically least preimage.
 */
CompactRep compress(const Relation & r, int order, const PairTable & pairs);

/**
 * The standard compact (k-1)-representation of the full space A^n with
 * fixed filler element 0: per minority triple (i,a,b) the two tuples
 * with a resp. b at coordinate i and 0 elsewhere; per index set of size
 * at most k-1 and per value assignment, the tuple with those values
 * there and 0 elsewhere.
 */
CompactRep full_space_rep(int arity, const OperationTable & op, const PairTable & pairs);

/// { s ++ c : s in S }; realizes the S x {c} targets of the solver.
Relation extend_product(const Relation & s, const Tuple & c);

} // namespace gmmcsp

#endif
