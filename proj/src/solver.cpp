#include "gmmcsp/solver.hpp"

#include "gmmcsp/oracle.hpp"
#include "subset_iter.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <limits>

namespace gmmcsp {

namespace {

struct Ctx {
    const OperationTable & op;
    const PairTable & pairs;
    std::size_t cap;

    int k() const { return op.arity(); }
    int q() const { return op.domain_size(); }
    int order() const { return op.arity() - 1; }
};

// ---------------------------------------------------------------------------
// Index multiset compression: sorted unique indices plus the bookkeeping
// needed to translate query values and detect inconsistent repeats.
// ---------------------------------------------------------------------------

struct CompressedIdx {
    std::vector<int> unique;          // sorted, duplicate-free
    std::vector<std::size_t> source;  // one original position per unique index
    std::vector<std::pair<std::size_t, std::size_t>> agree; // positions that must carry equal values

    static CompressedIdx make(std::span<const int> indices)
    {
        std::vector<std::pair<int, std::size_t>> order;
        order.reserve(indices.size());
        for (std::size_t p = 0; p < indices.size(); ++p)
            order.emplace_back(indices[p], p);
        std::sort(order.begin(), order.end());

        CompressedIdx c;
        for (std::size_t j = 0; j < order.size(); ++j) {
            if (j > 0 && order[j].first == order[j - 1].first)
                c.agree.emplace_back(order[j - 1].second, order[j].second);
            else {
                c.unique.push_back(order[j].first);
                c.source.push_back(order[j].second);
            }
        }
        return c;
    }

    /// Fills out with the values on the unique indices; false if the
    /// query values disagree on a repeated index (no tuple can match).
    bool translate(std::span<const Value> values, Tuple & out) const
    {
        for (const auto & [p1, p2] : agree)
            if (values[p1] != values[p2])
                return false;
        out.resize(unique.size());
        for (std::size_t j = 0; j < unique.size(); ++j)
            out[j] = values[source[j]];
        return true;
    }
};

// ---------------------------------------------------------------------------
// Membership test for the target relation S, packed densely when small.
// ---------------------------------------------------------------------------

class SMember {
public:
    SMember(const Relation & s, int q) : arity_(static_cast<std::size_t>(s.arity())), q_(q)
    {
        std::size_t space = 1;
        dense_ = true;
        for (std::size_t j = 0; j < arity_; ++j) {
            if (space > (std::size_t{1} << 22) / static_cast<std::size_t>(q_)) {
                dense_ = false;
                break;
            }
            space *= static_cast<std::size_t>(q_);
        }
        if (dense_) {
            bits_.assign(space, 0);
            for (const Tuple & t : s.tuples())
                bits_[pack(t)] = 1;
        } else {
            for (const Tuple & t : s.tuples())
                set_.insert(t);
        }
    }

    bool contains(std::span<const Value> prefix) const
    {
        if (dense_)
            return bits_[pack(prefix)] != 0;
        scratch_.assign(prefix.begin(), prefix.end());
        return set_.count(scratch_) != 0;
    }

private:
    std::size_t pack(std::span<const Value> v) const
    {
        std::size_t key = 0;
        for (std::size_t j = 0; j < arity_; ++j)
            key = key * static_cast<std::size_t>(q_) + v[j];
        return key;
    }

    std::size_t arity_;
    int q_;
    bool dense_;
    std::vector<char> bits_;
    std::unordered_set<Tuple, TupleHash> set_;
    mutable Tuple scratch_;
};

// ---------------------------------------------------------------------------
// Projection-space saturation with witness lifting. The projection of the
// seeds onto `indices` is closed under the operation acting coordinatewise
// on |indices|-ary tuples; each projection value keeps one full-arity
// witness obtained by applying the operation to the stored witnesses, so
// every witness lies in the closure of the seeds.
// ---------------------------------------------------------------------------

constexpr std::size_t dense_space_limit = 1 << 14;

class Saturator {
public:
    Saturator(const Ctx & ctx, std::vector<int> indices)
        : ctx_(ctx), indices_(std::move(indices))
    {
        std::size_t space = 1;
        dense_ = true;
        for (std::size_t j = 0; j < indices_.size(); ++j) {
            if (space > dense_space_limit / static_cast<std::size_t>(ctx_.q())) {
                dense_ = false;
                break;
            }
            space *= static_cast<std::size_t>(ctx_.q());
        }
        if (dense_)
            slots_.assign(space, -1);
    }

    void add_seed(const Tuple & t)
    {
        proj_buf_.clear();
        for (int i : indices_)
            proj_buf_.push_back(t[static_cast<std::size_t>(i - 1)]);
        insert(proj_buf_, t);
    }

    /// Saturates to a fixpoint; resumable after adding more seeds.
    void run()
    {
        const std::size_t k = static_cast<std::size_t>(ctx_.k());
        const std::size_t w = indices_.size();
        std::vector<std::size_t> pick(k);
        std::vector<Value> argv(k);
        Tuple image(w);

        while (prev_ < values_.size()) {
            const std::size_t cur = values_.size();
            for (std::size_t first_new = 0; first_new < k; ++first_new) {
                if (prev_ == 0 && first_new > 0)
                    break;
                for (std::size_t j = 0; j < k; ++j)
                    pick[j] = (j == first_new) ? prev_ : 0;
                while (true) {
                    for (std::size_t c = 0; c < w; ++c) {
                        for (std::size_t j = 0; j < k; ++j)
                            argv[j] = values_[pick[j]][c];
                        image[c] = ctx_.op.apply(argv);
                    }
                    if (lookup(image) < 0)
                        insert(image, lift(pick));

                    std::size_t pos = k;
                    while (pos > 0) {
                        const std::size_t j = pos - 1;
                        const std::size_t lo = (j == first_new) ? prev_ : 0;
                        const std::size_t hi = (j < first_new) ? prev_ : cur;
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
            prev_ = cur;
        }
    }

    const Tuple * find(std::span<const Value> pv) const
    {
        const std::int64_t id = lookup(pv);
        return id < 0 ? nullptr : &witnesses_[static_cast<std::size_t>(id)];
    }

    const std::vector<Tuple> & values() const { return values_; }
    const Tuple & witness(std::size_t i) const { return witnesses_[i]; }

private:
    std::int64_t lookup(std::span<const Value> pv) const
    {
        if (dense_)
            return slots_[pack(pv)];
        scratch_.assign(pv.begin(), pv.end());
        auto it = ids_.find(scratch_);
        return it == ids_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }

    void insert(const Tuple & pv, Tuple witness)
    {
        if (dense_) {
            std::int64_t & slot = slots_[pack(pv)];
            if (slot >= 0)
                return;
            slot = static_cast<std::int64_t>(values_.size());
        } else {
            auto [it, fresh] = ids_.emplace(pv, static_cast<std::uint32_t>(values_.size()));
            if (!fresh)
                return;
        }
        values_.push_back(pv);
        witnesses_.push_back(std::move(witness));
        if (values_.size() > ctx_.cap)
            throw SizeCapExceeded(ctx_.cap);
    }

    Tuple lift(const std::vector<std::size_t> & pick) const
    {
        const std::size_t k = pick.size();
        const Tuple & w0 = witnesses_[pick[0]];
        Tuple wit(w0.size());
        std::vector<Value> argv(k);
        for (std::size_t c = 0; c < w0.size(); ++c) {
            for (std::size_t j = 0; j < k; ++j)
                argv[j] = witnesses_[pick[j]][c];
            wit[c] = ctx_.op.apply(argv);
        }
        return wit;
    }

    std::size_t pack(std::span<const Value> pv) const
    {
        std::size_t key = 0;
        for (std::size_t j = 0; j < pv.size(); ++j)
            key = key * static_cast<std::size_t>(ctx_.q()) + pv[j];
        return key;
    }

    const Ctx & ctx_;
    std::vector<int> indices_;
    bool dense_;
    std::vector<std::int64_t> slots_;
    std::unordered_map<Tuple, std::uint32_t, TupleHash> ids_;
    std::vector<Tuple> values_;
    std::vector<Tuple> witnesses_;
    std::size_t prev_ = 0;
    Tuple proj_buf_;
    mutable Tuple scratch_;
};

// ---------------------------------------------------------------------------
// Staged querying against <rep> on a fixed index list. Seeds are added in
// tiers: first the representation's own preimages on subsets of the index
// list plus its signature witnesses, then every stored tuple. A "yes" from
// any tier is sound (all witnesses lie in the generated relation); a "no"
// is only concluded after the full tier, where the saturation computes the
// exact projection of the represented relation.
// ---------------------------------------------------------------------------

class RepQuery {
public:
    RepQuery(const Ctx & ctx, const CompactRep & rep, std::vector<int> indices)
        : ctx_(ctx), rep_(rep), indices_(indices), sat_(ctx, std::move(indices))
    {
    }

    const Tuple * find_value(std::span<const Value> pv)
    {
        while (true) {
            if (const Tuple * t = sat_.find(pv))
                return t;
            if (!escalate())
                return nullptr;
        }
    }

    template <typename Pred>
    const Tuple * find_pred(Pred && pred)
    {
        while (true) {
            const auto & values = sat_.values();
            for (std::size_t i = 0; i < values.size(); ++i)
                if (pred(std::span<const Value>(values[i])))
                    return &sat_.witness(i);
            if (!escalate())
                return nullptr;
        }
    }

private:
    bool escalate()
    {
        if (tier_ >= 2)
            return false;
        if (tier_ == 0) {
            // preimages over subsets of the queried coordinates
            std::vector<int> base = indices_;
            std::sort(base.begin(), base.end());
            base.erase(std::unique(base.begin(), base.end()), base.end());
            detail::for_each_subset_of(base, rep_.order(), [&](std::span<const int> sub) {
                detail::for_each_value_tuple(static_cast<int>(sub.size()), ctx_.q(),
                    [&](std::span<const Value> vals) {
                        if (auto id = rep_.find_preimage(sub, vals))
                            sat_.add_seed(rep_.tuple(*id));
                    });
            });
            for (const auto & w : rep_.sig()) {
                sat_.add_seed(rep_.tuple(w.first));
                sat_.add_seed(rep_.tuple(w.second));
            }
        } else {
            for (const Tuple & t : rep_.tuples())
                sat_.add_seed(t);
        }
        ++tier_;
        sat_.run();
        return true;
    }

    const Ctx & ctx_;
    const CompactRep & rep_;
    std::vector<int> indices_;
    Saturator sat_;
    int tier_ = 0;
};

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

/// op(t1, wa, ..., wa, wb) folded once more with t1: keeps t1's value at
/// every coordinate where wa and wb agree and moves coordinate values
/// along minority pairs where they differ. This is the t4/t5 step of the
/// signature reconstruction.
Tuple transport(const Ctx & ctx, const Tuple & t1, const Tuple & wa, const Tuple & wb)
{
    const std::size_t k = static_cast<std::size_t>(ctx.k());
    std::vector<Value> argv(k);
    Tuple result(t1.size());
    for (std::size_t c = 0; c < t1.size(); ++c) {
        argv[0] = t1[c];
        for (std::size_t j = 1; j + 1 < k; ++j)
            argv[j] = wa[c];
        argv[k - 1] = wb[c];
        const Value u = ctx.op.apply(argv);
        for (std::size_t j = 0; j + 1 < k; ++j)
            argv[j] = t1[c];
        argv[k - 1] = u;
        result[c] = ctx.op.apply(argv);
    }
    return result;
}

CompactRep empty_rep(const Ctx & ctx, int arity)
{
    return CompactRep::Builder(arity, ctx.order(), ctx.q()).finish();
}

void check_indices(std::span<const int> indices, int arity)
{
    for (int i : indices)
        if (i < 1 || i > arity)
            throw IndexOutOfRange(i, arity);
}

// ---------------------------------------------------------------------------
// Nonempty
// ---------------------------------------------------------------------------

std::optional<Tuple> nonempty_impl(const Ctx & ctx, const CompactRep & rep,
    std::span<const int> indices, const Relation & s)
{
    if (s.arity() != static_cast<int>(indices.size()))
        throw ArityMismatch("target relation arity does not match the index count");
    check_indices(indices, rep.arity());
    if (rep.empty() || s.empty())
        return std::nullopt;

    CompressedIdx c = CompressedIdx::make(indices);
    if (static_cast<int>(c.unique.size()) <= rep.order()) {
        // the preimage table answers exactly
        Tuple vals;
        for (const Tuple & target : s.tuples()) {
            if (!c.translate(target, vals))
                continue;
            if (auto id = rep.find_preimage(c.unique, vals))
                return rep.tuple(*id);
        }
        return std::nullopt;
    }

    RepQuery query(ctx, rep, std::vector<int>(indices.begin(), indices.end()));
    SMember member(s, ctx.q());
    const Tuple * found = query.find_pred([&](std::span<const Value> pv) {
        return member.contains(pv);
    });
    if (!found)
        return std::nullopt;
    return *found;
}

// ---------------------------------------------------------------------------
// Fix-values
// ---------------------------------------------------------------------------

CompactRep fix_values_impl(const Ctx & ctx, const CompactRep & input,
    std::span<const Value> prefix)
{
    const int n = input.arity();
    if (static_cast<int>(prefix.size()) > n)
        throw ArityMismatch("prefix longer than the representation arity");
    for (Value v : prefix)
        if (v >= ctx.q())
            throw ValueOutOfRange("prefix value outside the domain");
    if (prefix.empty())
        return input;

    std::optional<CompactRep> storage;
    const CompactRep * current = &input;

    std::vector<int> idx_buf;
    Tuple val_buf;
    std::vector<Value> unresolved;

    for (int j = 0; j < static_cast<int>(prefix.size()); ++j) {
        const CompactRep & u = *current;
        if (u.empty())
            return empty_rep(ctx, n);
        const Value cj = prefix[static_cast<std::size_t>(j)];
        const int fixed = j + 1; // 1-based coordinate being fixed this round

        // Constant coordinate: the restriction changes nothing, skip the
        // rebuild. One probe per domain value; the unary projection table
        // is exact.
        {
            const int one[1] = {fixed};
            bool fixed_alive = false;
            bool others_alive = false;
            for (int v = 0; v < ctx.q(); ++v) {
                const Value vv[1] = {static_cast<Value>(v)};
                if (u.find_preimage(one, vv)) {
                    if (v == cj)
                        fixed_alive = true;
                    else
                        others_alive = true;
                }
            }
            if (!fixed_alive)
                return empty_rep(ctx, n);
            if (!others_alive)
                continue; // coordinate already pinned to cj
        }

        CompactRep::Builder builder(n, ctx.order(), ctx.q());

        // Signature step: for each surviving triple, the preimage table
        // answers the witness query on the pair (fixed, i), and the t4/t5
        // construction turns the stored witnesses into ones that agree
        // with the found tuple on the prefix.
        for (const auto & w : u.sig()) {
            assert(w.entry.i > j);
            if (w.entry.i <= fixed)
                continue;
            const int pair_idx[2] = {fixed, w.entry.i};
            const Value pair_val[2] = {cj, w.entry.a};
            auto id1 = u.find_preimage(pair_idx, pair_val);
            if (!id1)
                continue;
            const Tuple & t1 = u.tuple(*id1);
            Tuple t5 = transport(ctx, t1, u.tuple(w.first), u.tuple(w.second));
            const std::uint32_t ia = builder.add_tuple(t1);
            const std::uint32_t ib = builder.add_tuple(std::move(t5));
            builder.add_sig(w.entry, ia, ib);
        }

        // Projection step: restore every projection on index sets of size
        // at most k-1. Small sets are answered by table lookups on the set
        // extended with the fixed coordinate; only sets of size exactly
        // k-1 not containing it need a saturation, and those share one
        // query object per set.
        detail::for_each_index_set(n, ctx.order(), [&](std::span<const int> set) {
            const int size = static_cast<int>(set.size());
            int fixed_pos = -1;
            for (int p = 0; p < size; ++p)
                if (set[static_cast<std::size_t>(p)] == fixed)
                    fixed_pos = p;

            unresolved.clear();
            detail::for_each_value_tuple(size, ctx.q(), [&](std::span<const Value> vals) {
                auto id = u.find_preimage(set, vals);
                if (!id)
                    return; // value not in the projection of the current relation
                const Tuple & t = u.tuple(*id);
                if (t[static_cast<std::size_t>(fixed - 1)] == cj) {
                    builder.set_preimage(set, vals, builder.add_tuple(t));
                    return;
                }
                if (fixed_pos >= 0)
                    return; // the fixed coordinate carries the wrong value
                if (size + 1 <= ctx.order()) {
                    // exact lookup on set + fixed coordinate
                    idx_buf.assign(set.begin(), set.end());
                    val_buf.assign(vals.begin(), vals.end());
                    std::size_t at = 0;
                    while (at < idx_buf.size() && idx_buf[at] < fixed)
                        ++at;
                    idx_buf.insert(idx_buf.begin() + static_cast<std::ptrdiff_t>(at), fixed);
                    val_buf.insert(val_buf.begin() + static_cast<std::ptrdiff_t>(at), cj);
                    if (auto id6 = u.find_preimage(idx_buf, val_buf))
                        builder.set_preimage(set, vals, builder.add_tuple(u.tuple(*id6)));
                    return;
                }
                unresolved.insert(unresolved.end(), vals.begin(), vals.end());
            });

            if (!unresolved.empty()) {
                idx_buf.assign(set.begin(), set.end());
                idx_buf.push_back(fixed);
                RepQuery query(ctx, u, idx_buf);
                val_buf.resize(static_cast<std::size_t>(size) + 1);
                val_buf[static_cast<std::size_t>(size)] = cj;
                for (std::size_t off = 0; off < unresolved.size();
                     off += static_cast<std::size_t>(size)) {
                    std::copy_n(unresolved.begin() + static_cast<std::ptrdiff_t>(off),
                        size, val_buf.begin());
                    if (const Tuple * wit = query.find_value(val_buf))
                        builder.set_preimage(set,
                            std::span<const Value>(val_buf).first(static_cast<std::size_t>(size)),
                            builder.add_tuple(*wit));
                }
            }
        });

        storage.emplace(builder.finish());
        current = &*storage;
    }

    if (current == &input)
        return input;
    return std::move(*storage);
}

// ---------------------------------------------------------------------------
// Next-beta
// ---------------------------------------------------------------------------

/// Pool of known members of the restricted relation, bucketed by a rolling
/// prefix hash so that witness pairs for signature triples can be found
/// without a Fix-values pass. Only confirms membership; never refutes.
class PrefixPool {
public:
    void add(const Tuple & t)
    {
        if (!index_.emplace(t, tuples_.size()).second)
            return;
        tuples_.push_back(t);
        hashes_.push_back(14695981039346656037ull);
        depths_.push_back(0);
    }

    /// Finds a pair agreeing on the first i-1 coordinates with values a/b
    /// at coordinate i. Returns {nullptr, nullptr} if none is pooled.
    std::pair<const Tuple *, const Tuple *> find_pair(int i, Value a, Value b)
    {
        buckets_.clear();
        const std::size_t depth = static_cast<std::size_t>(i - 1);
        for (std::size_t t = 0; t < tuples_.size(); ++t) {
            while (depths_[t] < depth) {
                hashes_[t] = (hashes_[t] ^ tuples_[t][depths_[t]]) * 1099511628211ull;
                ++depths_[t];
            }
            // rolling hashes are only extended, so tuples processed at a
            // shallower depth earlier stay consistent
            auto & bucket = buckets_[hashes_[t]];
            if (bucket.size() < bucket_cap)
                bucket.push_back(t);
        }
        for (const auto & [hash, bucket] : buckets_) {
            (void)hash;
            for (std::size_t ua : bucket) {
                if (tuples_[ua][depth] != a)
                    continue;
                for (std::size_t ub : bucket) {
                    if (tuples_[ub][depth] != b)
                        continue;
                    if (std::equal(tuples_[ua].begin(),
                            tuples_[ua].begin() + static_cast<std::ptrdiff_t>(depth),
                            tuples_[ub].begin()))
                        return {&tuples_[ua], &tuples_[ub]};
                }
            }
        }
        return {nullptr, nullptr};
    }

private:
    static constexpr std::size_t bucket_cap = 16;

    std::vector<Tuple> tuples_;
    std::vector<std::uint64_t> hashes_;
    std::vector<std::size_t> depths_;
    std::unordered_map<Tuple, std::size_t, TupleHash> index_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

CompactRep next_beta_impl(const Ctx & ctx, const CompactRep & rep,
    std::span<const int> indices, const Relation & s)
{
    const int n = rep.arity();
    if (s.arity() != static_cast<int>(indices.size()))
        throw ArityMismatch("target relation arity does not match the index count");
    check_indices(indices, n);
    if (rep.empty() || s.empty())
        return empty_rep(ctx, n);

    const std::size_t w0 = indices.size();
    SMember member(s, ctx.q());
    CompactRep::Builder builder(n, ctx.order(), ctx.q());
    PrefixPool pool;
    int max_index = 0;
    for (int i : indices)
        max_index = std::max(max_index, i);

    std::vector<int> idx_buf;
    Tuple val_buf;
    std::vector<Value> unresolved;
    std::vector<std::pair<Tuple, Tuple>> sig_found; // aligned with surviving entries
    std::vector<SignatureEntry> sig_entries;

    // Projections first: their witnesses are members of the restricted
    // relation and feed the pool used by the signature step.
    detail::for_each_index_set(n, ctx.order(), [&](std::span<const int> set) {
        const int size = static_cast<int>(set.size());
        unresolved.clear();
        detail::for_each_value_tuple(size, ctx.q(), [&](std::span<const Value> vals) {
            auto id = rep.find_preimage(set, vals);
            if (!id)
                return;
            const Tuple & t = rep.tuple(*id);
            val_buf.resize(w0);
            for (std::size_t p = 0; p < w0; ++p)
                val_buf[p] = t[static_cast<std::size_t>(indices[p] - 1)];
            if (member.contains(val_buf)) {
                // the stored preimage itself lies in the restriction
                builder.set_preimage(set, vals, builder.add_tuple(t));
                pool.add(t);
                return;
            }
            unresolved.insert(unresolved.end(), vals.begin(), vals.end());
        });

        if (!unresolved.empty()) {
            idx_buf.assign(indices.begin(), indices.end());
            idx_buf.insert(idx_buf.end(), set.begin(), set.end());
            RepQuery query(ctx, rep, idx_buf);
            for (std::size_t off = 0; off < unresolved.size();
                 off += static_cast<std::size_t>(size)) {
                std::span<const Value> vals(unresolved.data() + off,
                    static_cast<std::size_t>(size));
                const Tuple * wit = query.find_pred([&](std::span<const Value> pv) {
                    return std::equal(vals.begin(), vals.end(), pv.begin() + static_cast<std::ptrdiff_t>(w0)) &&
                        member.contains(pv.first(w0));
                });
                if (wit) {
                    builder.set_preimage(set, vals, builder.add_tuple(*wit));
                    pool.add(*wit);
                }
            }
        }
    });

    // Signature step. Only triples already in the input signature can
    // survive; for each one, confirm or refute membership in the
    // restricted relation's signature and collect a witnessing pair.
    std::optional<RepQuery> column_query;
    int column_of_query = -1;
    auto column = [&](int i) -> RepQuery & {
        if (column_of_query != i) {
            idx_buf.assign(indices.begin(), indices.end());
            idx_buf.push_back(i);
            column_query.emplace(ctx, rep, idx_buf);
            column_of_query = i;
        }
        return *column_query;
    };

    for (const auto & w : rep.sig()) {
        const SignatureEntry entry = w.entry;

        // pooled witness pair: confirms without any search
        auto [pa, pb] = pool.find_pair(entry.i, entry.a, entry.b);
        if (pa) {
            sig_entries.push_back(entry);
            sig_found.emplace_back(*pa, *pb);
            continue;
        }

        // Pointers into the query dangle once it escalates, so copy out.
        auto find_column_value = [&](Value v) -> std::optional<Tuple> {
            const Tuple * t = column(entry.i).find_pred([&](std::span<const Value> pv) {
                return pv[w0] == v && member.contains(pv.first(w0));
            });
            if (!t)
                return std::nullopt;
            return *t;
        };

        std::optional<Tuple> t1 = find_column_value(entry.a);
        if (!t1)
            continue;
        std::optional<Tuple> tb = find_column_value(entry.b);
        if (!tb)
            continue;
        pool.add(*t1);
        pool.add(*tb);

        if (max_index < entry.i) {
            // All constrained coordinates lie in the shared prefix, so the
            // transported witness keeps its projection inside s.
            Tuple t5 = transport(ctx, *t1, rep.tuple(w.first), rep.tuple(w.second));
            pool.add(t5);
            sig_entries.push_back(entry);
            sig_found.emplace_back(std::move(*t1), std::move(t5));
            continue;
        }

        // General case: fix the prefix of t1 and search for the partner.
        CompactRep fixed = fix_values_impl(ctx, rep,
            std::span<const Value>(*t1).first(static_cast<std::size_t>(entry.i - 1)));
        idx_buf.assign(indices.begin(), indices.end());
        idx_buf.push_back(entry.i);
        Tuple ext(1, entry.b);
        std::optional<Tuple> t2 = nonempty_impl(ctx, fixed, idx_buf, extend_product(s, ext));
        if (!t2)
            continue;
        pool.add(*t2);
        sig_entries.push_back(entry);
        sig_found.emplace_back(std::move(*t1), std::move(*t2));
    }

    for (std::size_t e = 0; e < sig_entries.size(); ++e) {
        const std::uint32_t ia = builder.add_tuple(sig_found[e].first);
        const std::uint32_t ib = builder.add_tuple(sig_found[e].second);
        builder.add_sig(sig_entries[e], ia, ib);
    }

    return builder.finish();
}

} // namespace

// ---------------------------------------------------------------------------
// Public surface
// ---------------------------------------------------------------------------

std::optional<Tuple> nonempty(const CompactRep & rep, std::span<const int> indices,
    const Relation & s, const OperationTable & op, const PairTable & pairs,
    std::size_t max_tuples)
{
    Ctx ctx{op, pairs, max_tuples};
    return nonempty_impl(ctx, rep, indices, s);
}

CompactRep fix_values(const CompactRep & rep, std::span<const Value> prefix,
    const OperationTable & op, const PairTable & pairs, std::size_t max_tuples)
{
    Ctx ctx{op, pairs, max_tuples};
    return fix_values_impl(ctx, rep, prefix);
}

CompactRep next_beta(const CompactRep & rep, std::span<const int> indices,
    const Relation & s, const OperationTable & op, const PairTable & pairs,
    std::size_t max_tuples)
{
    Ctx ctx{op, pairs, max_tuples};
    return next_beta_impl(ctx, rep, indices, s);
}

CompactRep next(const CompactRep & rep, std::span<const int> indices,
    const Relation & s, const OperationTable & op, const PairTable & pairs,
    std::size_t max_tuples)
{
    Ctx ctx{op, pairs, max_tuples};
    if (s.arity() != static_cast<int>(indices.size()))
        throw ArityMismatch("target relation arity does not match the index count");
    check_indices(indices, rep.arity());

    CompactRep current = rep;
    std::vector<int> prefix_indices;
    std::vector<int> proj;
    for (std::size_t l = 0; l < indices.size(); ++l) {
        if (current.empty())
            break;
        prefix_indices.push_back(indices[l]);
        proj.push_back(static_cast<int>(l) + 1);
        current = next_beta_impl(ctx, current, prefix_indices, project_relation(s, proj));
    }
    return current;
}

std::uint64_t compactness_bound(int num_vars, int domain_size, int op_arity)
{
    const std::uint64_t inf = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t n = static_cast<std::uint64_t>(num_vars);
    const std::uint64_t q = static_cast<std::uint64_t>(domain_size);

    std::uint64_t bound = 2 * n * q * q;
    std::uint64_t binom = 1; // C(n, j)
    std::uint64_t power = 1; // q^j
    for (int j = 0; j <= op_arity - 1; ++j) {
        if (j > num_vars)
            break;
        if (j > 0) {
            if (binom > inf / (n - static_cast<std::uint64_t>(j) + 1))
                return inf;
            binom = binom * (n - static_cast<std::uint64_t>(j) + 1) / static_cast<std::uint64_t>(j);
            if (power > inf / q)
                return inf;
            power *= q;
        }
        if (binom > inf / power || bound > inf - binom * power)
            return inf;
        bound += binom * power;
    }
    return bound;
}

SolverState make_initial_state(const Instance & instance, const OperationTable & op,
    const PairTable & pairs)
{
    validate_instance(instance);
    if (instance.domain_size != op.domain_size())
        throw MalformedInstance("instance domain size does not match the operation");
    return SolverState{full_space_rep(instance.num_vars, op, pairs), 0};
}

void apply_next_constraint(SolverState & state, const Instance & instance,
    const OperationTable & op, const PairTable & pairs, std::size_t max_tuples)
{
    const Constraint & c = instance.constraints[static_cast<std::size_t>(state.applied)];
    state.rep = next(state.rep, c.scope, c.relation, op, pairs, max_tuples);
    ++state.applied;

    const std::uint64_t bound = compactness_bound(instance.num_vars, instance.domain_size,
        op.arity());
    if (state.rep.size() > bound)
        throw std::logic_error("compactness bound violated after constraint " +
            std::to_string(state.applied));
}

SolveResult solve(const Instance & instance, const OperationTable & op,
    const SolveOptions & options)
{
    PairTable pairs = validate_gmm(op);
    validate_instance(instance);
    if (instance.domain_size != op.domain_size())
        throw MalformedInstance("instance domain size does not match the operation");

    if (options.validate_constraints) {
        for (std::size_t l = 0; l < instance.constraints.size(); ++l) {
            const Relation & r = instance.constraints[l].relation;
            std::uint64_t work = static_cast<std::uint64_t>(r.arity());
            for (int j = 0; j < op.arity(); ++j) {
                if (r.size() != 0 && work > options.invariance_cap / r.size())
                    throw BudgetExceeded("invariance check for constraint " +
                        std::to_string(l + 1) +
                        " exceeds its budget; rerun with validation off for trusted input");
                work *= r.size();
            }
            if (!is_invariant(r, op))
                throw ConstraintNotInvariant(static_cast<int>(l + 1));
        }
    }

    SolverState state = make_initial_state(instance, op, pairs);
    SolveResult result;
    for (std::size_t l = 0; l < instance.constraints.size(); ++l) {
        if (state.rep.empty())
            break; // every further restriction stays empty
        const auto start = std::chrono::steady_clock::now();
        apply_next_constraint(state, instance, op, pairs, options.closure_cap);
        const auto stop = std::chrono::steady_clock::now();
        result.stats.push_back(ConstraintStat{state.rep.size(), state.rep.sig().size(),
            std::chrono::duration<double, std::milli>(stop - start).count()});
    }

    if (state.rep.empty()) {
        result.status = Status::Unsat;
        return result;
    }
    result.status = Status::Sat;
    Tuple witness = state.rep.least_tuple();
    if (!verify_assignment(instance, witness))
        throw std::logic_error("solver produced a witness violating a constraint");
    result.witness = std::move(witness);
    return result;
}

Relation explicit_solution_relation(const SolverState & state, const OperationTable & op,
    std::size_t max_tuples)
{
    return closure(state.rep.as_relation(), op, max_tuples);
}

} // namespace gmmcsp
