#ifndef GMMCSP_ALGEBRA_HPP
#define GMMCSP_ALGEBRA_HPP

#include "gmmcsp/errors.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gmmcsp {

/// A domain element; always in [0, q-1] for the domain size q in play.
using Value = std::uint8_t;

/// A point of A^n, stored as its coordinate sequence.
using Tuple = std::vector<Value>;

/**
 * A finite k-ary operation on A = {0..q-1}, stored as a dense value table.
 *
 * The table is indexed mixed-radix with the first argument most
 * significant: the entry for (a1,...,ak) sits at
 * ((a1*q + a2)*q + ...)*q + ak. This is also the order in which tables
 * are serialized, so the flat list is one canonical byte representation.
 */
class OperationTable {
public:
    int domain_size() const { return domain_size_; }
    int arity() const { return arity_; }
    const std::vector<Value> & values() const { return values_; }

    /// Table lookup; args must be exactly arity() in-range values.
    Value apply(std::span<const Value> args) const {
        std::size_t index = 0;
        for (Value a : args)
            index = index * static_cast<std::size_t>(domain_size_) + a;
        return values_[index];
    }

    friend OperationTable build_operation(int domain_size, int arity,
        const std::vector<int> & values, std::size_t max_table_size);

private:
    OperationTable(int domain_size, int arity, std::vector<Value> values)
        : domain_size_(domain_size), arity_(arity), values_(std::move(values)) {}

    int domain_size_;
    int arity_;
    std::vector<Value> values_;
};

/// Default cap on q^k; tables beyond it are rejected to avoid accidental
/// memory blowups (GMM arities are small in practice).
inline constexpr std::size_t default_max_table_size = std::size_t{1} << 24;

/**
 * Validates and builds an operation table.
 *
 * Throws ArityTooSmall (k < 3), WrongTableLength (size != q^k),
 * ValueOutOfRange, or TableTooLarge (q^k over the cap).
 */
OperationTable build_operation(int domain_size, int arity,
    const std::vector<int> & values,
    std::size_t max_table_size = default_max_table_size);

/// Applies the operation to an argument tuple. Throws WrongArgCount.
Value apply_op(const OperationTable & op, std::span<const Value> args);

enum class PairKind : std::uint8_t { Majority, Minority };

/**
 * Per-pair behaviour of a validated GMM operation: for every unordered
 * pair {a,b} of domain elements, whether the operation acts as a
 * near-unanimity (majority) or as a Mal'tsev minority on it. The
 * diagonal {a,a} is majority by convention.
 */
class PairTable {
public:
    PairTable(int domain_size, std::vector<PairKind> kinds);

    int domain_size() const { return domain_size_; }

    PairKind kind(Value a, Value b) const {
        return kinds_[static_cast<std::size_t>(a) * domain_size_ + b];
    }

    bool is_minority(Value a, Value b) const { return kind(a, b) == PairKind::Minority; }

    /// All ordered pairs (a, b) with a != b and {a,b} a minority pair,
    /// in lexicographic order. Signature entries range over these.
    const std::vector<std::pair<Value, Value>> & minority_pairs() const {
        return minority_pairs_;
    }

private:
    int domain_size_;
    std::vector<PairKind> kinds_; // q*q, symmetric
    std::vector<std::pair<Value, Value>> minority_pairs_;
};

/**
 * Classifies the unordered pair {a,b} under op.
 *
 * Checks the near-unanimity identities first, then the Mal'tsev ones;
 * for a != b the two are mutually exclusive, so the order only fixes
 * which one we report. {a,a} is majority by convention. Throws
 * NotGmmPair if neither identity set holds.
 */
PairKind classify_pair(const OperationTable & op, Value a, Value b);

/**
 * Classifies every unordered pair, i.e. decides whether op is a
 * generalized majority-minority operation. Throws NotGmm naming the
 * lexicographically first offending pair.
 */
PairTable validate_gmm(const OperationTable & op);

/// Coordinatewise application: coordinate i of the result is
/// op(t1[i], ..., tk[i]). Throws WrongTupleCount / ArityMismatch.
Tuple apply_to_tuples(const OperationTable & op, std::span<const Tuple> tuples);

} // namespace gmmcsp

#endif
