#include "gmmcsp/relations.hpp"

#include "subset_iter.hpp"

#include <algorithm>
#include <cstring>

namespace gmmcsp {

// ---------------------------------------------------------------------------
// Relation
// ---------------------------------------------------------------------------

Relation::Relation(int arity) : arity_(arity) {}

Relation::Relation(int arity, std::vector<Tuple> tuples) : arity_(arity)
{
    for (const Tuple & t : tuples)
        if (t.size() != static_cast<std::size_t>(arity))
            throw ArityMismatch("tuple arity " + std::to_string(t.size()) +
                " does not match relation arity " + std::to_string(arity));
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    tuples_ = std::move(tuples);
    members_.reserve(tuples_.size());
    for (const Tuple & t : tuples_)
        members_.insert(t);
}

Relation Relation::full(int arity, int domain_size)
{
    std::vector<Tuple> all;
    Tuple current(static_cast<std::size_t>(arity), 0);
    while (true) {
        all.push_back(current);
        int pos = arity - 1;
        while (pos >= 0 && current[pos] == domain_size - 1) {
            current[pos] = 0;
            --pos;
        }
        if (pos < 0)
            break;
        ++current[pos];
    }
    return Relation(arity, std::move(all));
}

// ---------------------------------------------------------------------------
// Projections
// ---------------------------------------------------------------------------

Tuple project_tuple(const Tuple & t, std::span<const int> indices)
{
    Tuple result;
    result.reserve(indices.size());
    for (int i : indices) {
        if (i < 1 || static_cast<std::size_t>(i) > t.size())
            throw IndexOutOfRange(i, static_cast<int>(t.size()));
        result.push_back(t[static_cast<std::size_t>(i - 1)]);
    }
    return result;
}

Relation project_relation(const Relation & r, std::span<const int> indices)
{
    for (int i : indices)
        if (i < 1 || i > r.arity())
            throw IndexOutOfRange(i, r.arity());
    std::vector<Tuple> projected;
    projected.reserve(r.size());
    for (const Tuple & t : r.tuples())
        projected.push_back(project_tuple(t, indices));
    return Relation(static_cast<int>(indices.size()), std::move(projected));
}

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

Signature WitnessedSignature::signature() const
{
    Signature sig;
    sig.reserve(entries.size());
    for (const WitnessedEntry & e : entries)
        sig.push_back(e.entry);
    return sig;
}

bool WitnessedSignature::has(const SignatureEntry & e) const
{
    auto it = std::lower_bound(entries.begin(), entries.end(), e,
        [](const WitnessedEntry & lhs, const SignatureEntry & rhs) { return lhs.entry < rhs; });
    return it != entries.end() && it->entry == e;
}

bool witnesses(const Tuple & t, const Tuple & t2, const SignatureEntry & entry)
{
    if (t.size() != t2.size())
        throw ArityMismatch("witness tuples of unequal arity");
    if (entry.i < 1 || static_cast<std::size_t>(entry.i) > t.size())
        throw IndexOutOfRange(entry.i, static_cast<int>(t.size()));
    const std::size_t i = static_cast<std::size_t>(entry.i);
    for (std::size_t l = 0; l + 1 < i; ++l)
        if (t[l] != t2[l])
            return false;
    return t[i - 1] == entry.a && t2[i - 1] == entry.b;
}

WitnessedSignature signature_of(const Relation & r, const PairTable & pairs)
{
    WitnessedSignature sig;
    const auto & tuples = r.tuples();
    const int n = r.arity();
    const int q = pairs.domain_size();
    if (tuples.size() < 2)
        return sig;

    // Tuples are sorted, so for each coordinate i the pairs sharing a
    // prefix of length i-1 form consecutive blocks. Within a block the
    // first tuple carrying each value at coordinate i is the least one,
    // which yields the lexicographically least witnessing pair.
    std::vector<std::uint32_t> first_with(static_cast<std::size_t>(q));
    std::vector<char> found(static_cast<std::size_t>(q) * q);
    for (int i = 1; i <= n; ++i) {
        std::fill(found.begin(), found.end(), 0);
        std::size_t block_start = 0;
        while (block_start < tuples.size()) {
            std::size_t block_end = block_start + 1;
            while (block_end < tuples.size() &&
                std::equal(tuples[block_end].begin(), tuples[block_end].begin() + (i - 1),
                    tuples[block_start].begin()))
                ++block_end;

            std::fill(first_with.begin(), first_with.end(), UINT32_MAX);
            for (std::size_t idx = block_start; idx < block_end; ++idx) {
                Value v = tuples[idx][static_cast<std::size_t>(i - 1)];
                if (first_with[v] == UINT32_MAX)
                    first_with[v] = static_cast<std::uint32_t>(idx);
            }
            for (const auto & [a, b] : pairs.minority_pairs()) {
                if (first_with[a] == UINT32_MAX || first_with[b] == UINT32_MAX)
                    continue;
                char & mark = found[static_cast<std::size_t>(a) * q + b];
                if (!mark) {
                    mark = 1;
                    sig.entries.push_back(WitnessedEntry{SignatureEntry{i, a, b},
                        tuples[first_with[a]], tuples[first_with[b]]});
                }
            }
            block_start = block_end;
        }
    }
    std::sort(sig.entries.begin(), sig.entries.end(),
        [](const WitnessedEntry & l, const WitnessedEntry & r) { return l.entry < r.entry; });
    return sig;
}

// ---------------------------------------------------------------------------
// Invariance and closure
// ---------------------------------------------------------------------------

bool is_invariant(const Relation & r, const OperationTable & op)
{
    const int k = op.arity();
    if (r.empty())
        return true;
    std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
    std::vector<Tuple> args(static_cast<std::size_t>(k));
    while (true) {
        for (int j = 0; j < k; ++j)
            args[static_cast<std::size_t>(j)] = r.tuples()[pick[static_cast<std::size_t>(j)]];
        if (!r.contains(apply_to_tuples(op, args)))
            return false;
        int pos = k - 1;
        while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == r.size() - 1) {
            pick[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0)
            break;
        ++pick[static_cast<std::size_t>(pos)];
    }
    return true;
}

Relation closure(const Relation & r, const OperationTable & op, std::size_t max_tuples)
{
    const std::size_t k = static_cast<std::size_t>(op.arity());
    const std::size_t n = static_cast<std::size_t>(r.arity());
    if (r.empty())
        return r;
    if (r.size() > max_tuples)
        throw SizeCapExceeded(max_tuples);

    std::vector<Tuple> all = r.tuples();
    std::unordered_set<Tuple, TupleHash> seen(all.begin(), all.end());

    std::vector<std::size_t> pick(k);
    std::vector<Value> argv(k);
    Tuple image(n);

    auto emit = [&]() {
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t j = 0; j < k; ++j)
                argv[j] = all[pick[j]][c];
            image[c] = op.apply(argv);
        }
        if (seen.insert(image).second) {
            all.push_back(image);
            if (all.size() > max_tuples)
                throw SizeCapExceeded(max_tuples);
        }
    };

    // Semi-naive rounds: each round visits exactly the argument
    // combinations that touch at least one tuple added in the previous
    // round, partitioned by the first slot holding a new tuple.
    std::size_t prev = 0;
    while (prev < all.size()) {
        const std::size_t cur = all.size();
        for (std::size_t first_new = 0; first_new < k; ++first_new) {
            if (prev == 0 && first_new > 0)
                break; // initial round: slot 0 already ranges over everything
            // slots < first_new range over [0, prev), slot first_new over
            // [prev, cur), slots > first_new over [0, cur)
            for (std::size_t j = 0; j < first_new; ++j)
                pick[j] = 0;
            pick[first_new] = prev;
            for (std::size_t j = first_new + 1; j < k; ++j)
                pick[j] = 0;
            while (true) {
                emit();
                std::size_t pos = k;
                while (pos > 0) {
                    std::size_t j = pos - 1;
                    std::size_t lo = (j == first_new) ? prev : 0;
                    std::size_t hi = (j < first_new) ? prev : cur;
                    if (pick[j] + 1 < hi) {
                        ++pick[j];
                        break;
                    }
                    pick[j] = lo;
                    --pos;
                }
                if (pos == 0)
                    break;
            }
        }
        prev = cur;
    }
    return Relation(r.arity(), std::move(all));
}

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

using detail::for_each_index_set;

bool check_representation(const Relation & rp, const Relation & r, int order,
    const PairTable & pairs)
{
    if (rp.arity() != r.arity())
        throw ArityMismatch("representation arity mismatch");
    for (const Tuple & t : rp.tuples())
        if (!r.contains(t))
            throw NotASubset("candidate representation is not a subset of the relation");

    if (rp.empty() != r.empty())
        return false;
    if (signature_of(rp, pairs).signature() != signature_of(r, pairs).signature())
        return false;

    bool ok = true;
    for_each_index_set(r.arity(), order, [&](std::span<const int> indices) {
        if (!ok)
            return;
        if (!(project_relation(rp, indices) == project_relation(r, indices)))
            ok = false;
    });
    return ok;
}

// ---------------------------------------------------------------------------
// ProjTable
// ---------------------------------------------------------------------------

namespace {

// Packed keys: 10-bit 1-based index + 8-bit value per slot, 2 bits of
// size, fits order <= 3 in 64 bits. Larger parameters fall back to a
// byte-string key.
constexpr int packed_max_order = 3;
constexpr int packed_max_arity = 1023;

} // namespace

ProjTable::ProjTable(int arity, int domain_size, int order)
    : packed_(order <= packed_max_order && arity <= packed_max_arity && domain_size <= 256)
{
}

std::uint64_t ProjTable::pack(std::span<const int> indices,
    std::span<const Value> values) const
{
    std::uint64_t key = static_cast<std::uint64_t>(indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        key = (key << 10) | static_cast<std::uint64_t>(indices[j]);
        key = (key << 8) | values[j];
    }
    return key;
}

std::string ProjTable::generic_key(std::span<const int> indices,
    std::span<const Value> values)
{
    std::string key;
    key.reserve(indices.size() * 3);
    for (std::size_t j = 0; j < indices.size(); ++j) {
        key.push_back(static_cast<char>(indices[j] & 0xff));
        key.push_back(static_cast<char>((indices[j] >> 8) & 0xff));
        key.push_back(static_cast<char>(values[j]));
    }
    return key;
}

void ProjTable::insert(std::span<const int> indices, std::span<const Value> values,
    std::uint32_t id)
{
    if (packed_)
        packed_map_.emplace(pack(indices, values), id);
    else
        generic_map_.emplace(generic_key(indices, values), id);
}

std::optional<std::uint32_t> ProjTable::find(std::span<const int> indices,
    std::span<const Value> values) const
{
    if (packed_) {
        auto it = packed_map_.find(pack(indices, values));
        if (it == packed_map_.end())
            return std::nullopt;
        return it->second;
    }
    auto it = generic_map_.find(generic_key(indices, values));
    if (it == generic_map_.end())
        return std::nullopt;
    return it->second;
}

std::size_t ProjTable::size() const
{
    return packed_ ? packed_map_.size() : generic_map_.size();
}

// ---------------------------------------------------------------------------
// CompactRep
// ---------------------------------------------------------------------------

CompactRep::CompactRep(int arity, int order, int domain_size)
    : arity_(arity), order_(order), proj_(arity, domain_size, order)
{
}

Signature CompactRep::signature() const
{
    Signature sig;
    sig.reserve(sig_.size());
    for (const SigWitness & w : sig_)
        sig.push_back(w.entry);
    return sig;
}

Relation CompactRep::as_relation() const
{
    return Relation(arity_, tuples_);
}

const Tuple & CompactRep::least_tuple() const
{
    return *std::min_element(tuples_.begin(), tuples_.end());
}

CompactRep::Builder::Builder(int arity, int order, int domain_size)
    : rep_(arity, order, domain_size)
{
}

std::uint32_t CompactRep::Builder::add_tuple(const Tuple & t)
{
    auto it = rep_.ids_.find(t);
    if (it != rep_.ids_.end())
        return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(rep_.tuples_.size());
    rep_.tuples_.push_back(t);
    rep_.ids_.emplace(t, id);
    return id;
}

std::uint32_t CompactRep::Builder::add_tuple(Tuple && t)
{
    auto it = rep_.ids_.find(t);
    if (it != rep_.ids_.end())
        return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(rep_.tuples_.size());
    rep_.ids_.emplace(t, id);
    rep_.tuples_.push_back(std::move(t));
    return id;
}

void CompactRep::Builder::add_sig(const SignatureEntry & entry, std::uint32_t first,
    std::uint32_t second)
{
    rep_.sig_.push_back(SigWitness{entry, first, second});
}

void CompactRep::Builder::set_preimage(std::span<const int> indices,
    std::span<const Value> values, std::uint32_t id)
{
    rep_.proj_.insert(indices, values, id);
}

CompactRep CompactRep::Builder::finish()
{
    return std::move(rep_);
}

// ---------------------------------------------------------------------------
// compress / full_space_rep / extend_product
// ---------------------------------------------------------------------------

CompactRep compress(const Relation & r, int order, const PairTable & pairs)
{
    CompactRep::Builder builder(r.arity(), order, pairs.domain_size());

    WitnessedSignature sig = signature_of(r, pairs);
    for (const WitnessedEntry & e : sig.entries) {
        std::uint32_t first = builder.add_tuple(e.first);
        std::uint32_t second = builder.add_tuple(e.second);
        builder.add_sig(e.entry, first, second);
    }

    if (!r.empty())
        builder.add_tuple(r.tuples().front()); // least preimage of the empty index set

    for_each_index_set(r.arity(), order, [&](std::span<const int> indices) {
        // Tuples are sorted, so the first preimage seen per projection
        // value is the lexicographically least one.
        std::unordered_set<Tuple, TupleHash> done;
        for (const Tuple & t : r.tuples()) {
            Tuple proj = project_tuple(t, indices);
            if (done.insert(proj).second) {
                std::uint32_t id = builder.add_tuple(t);
                builder.set_preimage(indices, proj, id);
            }
        }
    });
    return builder.finish();
}

CompactRep full_space_rep(int arity, const OperationTable & op, const PairTable & pairs)
{
    const int order = op.arity() - 1;
    CompactRep::Builder builder(arity, order, op.domain_size());

    for (int i = 1; i <= arity; ++i) {
        for (const auto & [a, b] : pairs.minority_pairs()) {
            Tuple ta(static_cast<std::size_t>(arity), 0);
            ta[static_cast<std::size_t>(i - 1)] = a;
            Tuple tb(static_cast<std::size_t>(arity), 0);
            tb[static_cast<std::size_t>(i - 1)] = b;
            std::uint32_t ida = builder.add_tuple(std::move(ta));
            std::uint32_t idb = builder.add_tuple(std::move(tb));
            builder.add_sig(SignatureEntry{i, a, b}, ida, idb);
        }
    }

    builder.add_tuple(Tuple(static_cast<std::size_t>(arity), 0));

    const int q = op.domain_size();
    for_each_index_set(arity, order, [&](std::span<const int> indices) {
        Tuple values(indices.size(), 0);
        while (true) {
            Tuple t(static_cast<std::size_t>(arity), 0);
            for (std::size_t j = 0; j < indices.size(); ++j)
                t[static_cast<std::size_t>(indices[j] - 1)] = values[j];
            std::uint32_t id = builder.add_tuple(std::move(t));
            builder.set_preimage(indices, values, id);

            std::size_t pos = values.size();
            while (pos > 0 && values[pos - 1] == q - 1) {
                values[pos - 1] = 0;
                --pos;
            }
            if (pos == 0)
                break;
            ++values[pos - 1];
        }
    });
    return builder.finish();
}

Relation extend_product(const Relation & s, const Tuple & c)
{
    std::vector<Tuple> extended;
    extended.reserve(s.size());
    for (const Tuple & t : s.tuples()) {
        Tuple e = t;
        e.insert(e.end(), c.begin(), c.end());
        extended.push_back(std::move(e));
    }
    return Relation(s.arity() + static_cast<int>(c.size()), std::move(extended));
}

} // namespace gmmcsp
