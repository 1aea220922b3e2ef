#include "gmmcsp/algebra.hpp"

#include <algorithm>
#include <limits>

namespace gmmcsp {

OperationTable build_operation(int domain_size, int arity,
    const std::vector<int> & values, std::size_t max_table_size)
{
    if (arity < 3)
        throw ArityTooSmall(arity);
    if (domain_size < 1)
        throw ValueOutOfRange("domain size must be at least 1");
    if (domain_size > std::numeric_limits<Value>::max() + 1)
        throw ValueOutOfRange("domain size " + std::to_string(domain_size) +
            " exceeds the supported maximum of 256");

    std::size_t want = 1;
    for (int i = 0; i < arity; ++i) {
        if (want > max_table_size / static_cast<std::size_t>(domain_size))
            throw TableTooLarge("table size " + std::to_string(domain_size) + "^" +
                std::to_string(arity) + " exceeds the cap of " +
                std::to_string(max_table_size));
        want *= static_cast<std::size_t>(domain_size);
    }
    if (values.size() != want)
        throw WrongTableLength(values.size(), want);

    std::vector<Value> table;
    table.reserve(values.size());
    for (int v : values) {
        if (v < 0 || v >= domain_size)
            throw ValueOutOfRange("table entry " + std::to_string(v) +
                " outside [0," + std::to_string(domain_size - 1) + "]");
        table.push_back(static_cast<Value>(v));
    }
    return OperationTable(domain_size, arity, std::move(table));
}

Value apply_op(const OperationTable & op, std::span<const Value> args)
{
    if (args.size() != static_cast<std::size_t>(op.arity()))
        throw WrongArgCount(args.size(), static_cast<std::size_t>(op.arity()));
    return op.apply(args);
}

namespace {

// One "near-unanimity style" evaluation: x at position pos, y elsewhere.
Value one_dissenter(const OperationTable & op, Value x, Value y, int pos)
{
    Tuple args(static_cast<std::size_t>(op.arity()), y);
    args[static_cast<std::size_t>(pos)] = x;
    return op.apply(args);
}

// The near-unanimity identities on {a,b}: op(x,y,..,y) = ... = op(y,y,..,x) = y
// for all x,y in {a,b}. With x = y this includes idempotence at a and b.
bool holds_majority(const OperationTable & op, Value a, Value b)
{
    const Value pair[2] = {a, b};
    for (Value x : pair)
        for (Value y : pair)
            for (int pos = 0; pos < op.arity(); ++pos)
                if (one_dissenter(op, x, y, pos) != y)
                    return false;
    return true;
}

// The Mal'tsev-style identities on {a,b}: op(x,y,..,y) = op(y,y,..,x) = x
// for all x,y in {a,b}.
bool holds_minority(const OperationTable & op, Value a, Value b)
{
    const Value pair[2] = {a, b};
    for (Value x : pair)
        for (Value y : pair) {
            if (one_dissenter(op, x, y, 0) != x)
                return false;
            if (one_dissenter(op, x, y, op.arity() - 1) != x)
                return false;
        }
    return true;
}

} // namespace

PairKind classify_pair(const OperationTable & op, Value a, Value b)
{
    if (a >= op.domain_size() || b >= op.domain_size())
        throw ValueOutOfRange("pair element outside the domain");
    if (a == b)
        return PairKind::Majority;
    if (holds_majority(op, a, b))
        return PairKind::Majority;
    if (holds_minority(op, a, b))
        return PairKind::Minority;
    throw NotGmmPair(a, b);
}

PairTable::PairTable(int domain_size, std::vector<PairKind> kinds)
    : domain_size_(domain_size), kinds_(std::move(kinds))
{
    for (int a = 0; a < domain_size_; ++a)
        for (int b = 0; b < domain_size_; ++b)
            if (a != b && kind(static_cast<Value>(a), static_cast<Value>(b)) == PairKind::Minority)
                minority_pairs_.emplace_back(static_cast<Value>(a), static_cast<Value>(b));
}

PairTable validate_gmm(const OperationTable & op)
{
    const int q = op.domain_size();
    std::vector<PairKind> kinds(static_cast<std::size_t>(q) * q, PairKind::Majority);
    for (int a = 0; a < q; ++a) {
        for (int b = a; b < q; ++b) {
            PairKind k;
            try {
                k = classify_pair(op, static_cast<Value>(a), static_cast<Value>(b));
            } catch (const NotGmmPair &) {
                throw NotGmm(a, b);
            }
            kinds[static_cast<std::size_t>(a) * q + b] = k;
            kinds[static_cast<std::size_t>(b) * q + a] = k;
        }
    }
    return PairTable(q, std::move(kinds));
}

Tuple apply_to_tuples(const OperationTable & op, std::span<const Tuple> tuples)
{
    const std::size_t k = static_cast<std::size_t>(op.arity());
    if (tuples.size() != k)
        throw WrongTupleCount(tuples.size(), k);
    const std::size_t n = tuples[0].size();
    for (const Tuple & t : tuples)
        if (t.size() != n)
            throw ArityMismatch("tuples of unequal arity");

    Tuple result(n);
    std::vector<Value> args(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            args[j] = tuples[j][i];
        result[i] = op.apply(args);
    }
    return result;
}

} // namespace gmmcsp
