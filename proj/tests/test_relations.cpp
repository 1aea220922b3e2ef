#include "gmmcsp/relations.hpp"
#include "gmmcsp/generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace gmmcsp;

namespace {

Relation parity_relation(int arity, Value rhs)
{
    std::vector<Tuple> tuples;
    Tuple t(static_cast<std::size_t>(arity), 0);
    while (true) {
        Value parity = 0;
        for (Value v : t)
            parity = parity ^ v;
        if (parity == rhs)
            tuples.push_back(t);
        int pos = arity - 1;
        while (pos >= 0 && t[static_cast<std::size_t>(pos)] == 1) {
            t[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0)
            break;
        ++t[static_cast<std::size_t>(pos)];
    }
    return Relation(arity, std::move(tuples));
}

Relation random_relation(std::mt19937 & rng, int arity, int q, int max_tuples)
{
    std::vector<Tuple> tuples;
    const int count = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_tuples));
    for (int i = 0; i < count; ++i) {
        Tuple t;
        for (int c = 0; c < arity; ++c)
            t.push_back(static_cast<Value>(rng() % static_cast<unsigned>(q)));
        tuples.push_back(std::move(t));
    }
    return Relation(arity, std::move(tuples));
}

// The definition, spelled out as a double loop: used to cross-check the
// block-based signature computation.
Signature signature_by_definition(const Relation & r, const PairTable & pairs)
{
    Signature sig;
    for (const Tuple & t : r.tuples())
        for (const Tuple & t2 : r.tuples())
            for (int i = 1; i <= r.arity(); ++i) {
                SignatureEntry entry{i, t[static_cast<std::size_t>(i - 1)],
                    t2[static_cast<std::size_t>(i - 1)]};
                if (entry.a == entry.b || !pairs.is_minority(entry.a, entry.b))
                    continue;
                if (witnesses(t, t2, entry))
                    sig.push_back(entry);
            }
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
}

} // namespace

TEST_CASE("project_tuple follows the index list")
{
    CHECK(project_tuple(Tuple{0, 1, 2}, std::vector<int>{3, 1}) == Tuple{2, 0});
    CHECK(project_tuple(Tuple{0, 1}, std::vector<int>{1, 1}) == Tuple{0, 0});
    CHECK(project_tuple(Tuple{5}, std::vector<int>{1}) == Tuple{5});
    CHECK_THROWS_AS(project_tuple(Tuple{0, 1}, std::vector<int>{3}), IndexOutOfRange);
}

TEST_CASE("project_relation deduplicates")
{
    Relation r(2, {Tuple{0, 0}, Tuple{0, 1}});
    CHECK(project_relation(r, std::vector<int>{1}) == Relation(1, {Tuple{0}}));
    CHECK(project_relation(r, std::vector<int>{2}) == Relation(1, {Tuple{0}, Tuple{1}}));
    CHECK(project_relation(Relation(3), std::vector<int>{1, 2}) == Relation(2));
}

TEST_CASE("witnesses checks prefix agreement and the two coordinate values")
{
    CHECK(witnesses(Tuple{0, 0, 1}, Tuple{0, 0, 2}, SignatureEntry{3, 1, 2}));
    CHECK_FALSE(witnesses(Tuple{0, 1}, Tuple{1, 1}, SignatureEntry{2, 1, 1}));
    CHECK(witnesses(Tuple{1, 0}, Tuple{0, 1}, SignatureEntry{1, 1, 0}));
}

TEST_CASE("signature_of finds the xor witnesses of a two-tuple relation")
{
    PairTable xp = validate_gmm(xor3());
    PairTable mp = validate_gmm(maj3());

    Relation r(2, {Tuple{0, 0}, Tuple{0, 1}});
    WitnessedSignature sig = signature_of(r, xp);
    CHECK(sig.signature() == Signature{{2, 0, 1}, {2, 1, 0}});

    CHECK(signature_of(r, mp).entries.empty());
    CHECK(signature_of(Relation(2, {Tuple{0, 1}}), xp).entries.empty());
}

TEST_CASE("signature_of stores valid lexicographically least witnesses")
{
    std::mt19937 rng(11);
    PairTable pairs = validate_gmm(mixed3());
    for (int round = 0; round < 100; ++round) {
        const int arity = 1 + static_cast<int>(rng() % 4);
        Relation r = random_relation(rng, arity, 3, 8);
        WitnessedSignature sig = signature_of(r, pairs);

        CHECK(sig.signature() == signature_by_definition(r, pairs));
        for (const WitnessedEntry & e : sig.entries) {
            CHECK(witnesses(e.first, e.second, e.entry));
            CHECK(r.contains(e.first));
            CHECK(r.contains(e.second));
            // least pair: no witnessing pair sorts before the stored one
            for (const Tuple & t : r.tuples())
                for (const Tuple & t2 : r.tuples())
                    if (witnesses(t, t2, e.entry))
                        CHECK(std::make_pair(e.first, e.second) <= std::make_pair(t, t2));
        }
    }
}

TEST_CASE("is_invariant matches closure stability")
{
    OperationTable xo = xor3();
    CHECK(is_invariant(parity_relation(3, 0), xo));
    CHECK_FALSE(is_invariant(Relation(3, {Tuple{0, 0, 0}, Tuple{1, 1, 0}, Tuple{0, 1, 1}}), xo));
    CHECK(is_invariant(Relation(2), xo));
    CHECK(is_invariant(Relation::full(2, 2), xo));
}

TEST_CASE("closure saturates to the least invariant superset")
{
    OperationTable xo = xor3();
    Relation diag(2, {Tuple{0, 0}, Tuple{1, 1}});
    CHECK(closure(diag, xo) == diag);

    Relation seed(3, {Tuple{0, 0, 0}, Tuple{1, 1, 0}, Tuple{0, 1, 1}});
    CHECK(closure(seed, xo) ==
        Relation(3, {Tuple{0, 0, 0}, Tuple{1, 1, 0}, Tuple{0, 1, 1}, Tuple{1, 0, 1}}));

    CHECK(closure(Relation(3), xo) == Relation(3));
    CHECK_THROWS_AS(closure(Relation::full(3, 2), xo, 4), SizeCapExceeded);
}

TEST_CASE("closure laws hold on random small relations")
{
    std::mt19937 rng(23);
    for (const OperationTable & op : {maj3(), xor3(), mixed3()}) {
        const int q = op.domain_size();
        for (int round = 0; round < 30; ++round) {
            const int arity = 1 + static_cast<int>(rng() % 4);
            Relation r = random_relation(rng, arity, q, 8);
            Relation s = random_relation(rng, arity, q, 8);
            Relation cr = closure(r, op);

            // extensive
            for (const Tuple & t : r.tuples())
                CHECK(cr.contains(t));
            // idempotent
            CHECK(closure(cr, op) == cr);
            // monotone: r subset of r+s implies <r> subset of <r+s>
            std::vector<Tuple> both = r.tuples();
            both.insert(both.end(), s.tuples().begin(), s.tuples().end());
            Relation cu = closure(Relation(arity, std::move(both)), op);
            for (const Tuple & t : cr.tuples())
                CHECK(cu.contains(t));
        }
    }
}

TEST_CASE("projection and closure commute")
{
    std::mt19937 rng(37);
    for (const OperationTable & op : {maj3(), xor3(), mixed3()}) {
        const int q = op.domain_size();
        for (int round = 0; round < 30; ++round) {
            const int arity = 1 + static_cast<int>(rng() % 4);
            Relation u = random_relation(rng, arity, q, 8);
            std::vector<int> indices;
            const int len = 1 + static_cast<int>(rng() % 3);
            for (int c = 0; c < len; ++c)
                indices.push_back(1 + static_cast<int>(rng() % static_cast<unsigned>(arity)));

            CHECK(project_relation(closure(u, op), indices) ==
                closure(project_relation(u, indices), op));
        }
    }
}

TEST_CASE("check_representation accepts the documented parity example")
{
    PairTable xp = validate_gmm(xor3());
    Relation parity4 = parity_relation(4, 0);

    std::vector<Tuple> g;
    for (const Tuple & t : parity4.tuples())
        if (t != Tuple{1, 1, 1, 1})
            g.push_back(t);
    Relation rp(4, std::move(g));

    CHECK(check_representation(rp, parity4, 2, xp));
    // flipping only coordinate 4 flips parity, so no (4,a,b) entries exist
    for (const SignatureEntry & e : signature_of(parity4, xp).signature())
        CHECK(e.i <= 3);

    CHECK(check_representation(parity4, parity4, 4, xp));

    Relation bad(3, {Tuple{0, 0, 0}, Tuple{1, 1, 0}, Tuple{0, 1, 1}});
    CHECK_FALSE(check_representation(bad, parity_relation(3, 0), 2, xp));

    CHECK_THROWS_AS(
        check_representation(Relation(2, {Tuple{0, 1}}), Relation(2, {Tuple{1, 1}}), 1, xp),
        NotASubset);
}

TEST_CASE("compress returns a subset within the size bound")
{
    PairTable xp = validate_gmm(xor3());

    Relation single(3, {Tuple{1, 0, 1}});
    CompactRep rep = compress(single, 2, xp);
    CHECK(rep.as_relation() == single);

    Relation parity4 = parity_relation(4, 0);
    CompactRep rep4 = compress(parity4, 2, xp);
    CHECK(check_representation(rep4.as_relation(), parity4, 2, xp));

    const std::size_t sig_size = signature_of(parity4, xp).entries.size();
    CHECK(sig_size == 6);
    std::size_t proj_total = 1;
    std::vector<std::vector<int>> sets = {{1}, {2}, {3}, {4}, {1, 2}, {1, 3}, {1, 4},
        {2, 3}, {2, 4}, {3, 4}};
    for (const auto & s : sets)
        proj_total += project_relation(parity4, s).size();
    CHECK(rep4.size() <= 2 * sig_size + proj_total);
    CHECK(2 * sig_size + proj_total == 45);
}

TEST_CASE("compressed representations generate the relation back")
{
    std::mt19937 rng(41);
    for (const OperationTable & op : {maj3(), xor3(), mixed3()}) {
        PairTable pairs = validate_gmm(op);
        const int q = op.domain_size();
        for (int round = 0; round < 25; ++round) {
            const int arity = 1 + static_cast<int>(rng() % 5);
            Relation r = closure(random_relation(rng, arity, q, 6), op);
            CompactRep rep = compress(r, op.arity() - 1, pairs);
            CHECK(closure(rep.as_relation(), op) == r);
        }
    }
}

TEST_CASE("full_space_rep matches the documented shapes")
{
    PairTable mp = validate_gmm(maj3());
    CompactRep rep_maj = full_space_rep(3, maj3(), mp);
    CHECK(rep_maj.size() == 7);
    for (const Tuple & t : rep_maj.tuples()) {
        int ones = 0;
        for (Value v : t)
            ones += v;
        CHECK(ones <= 2);
    }

    PairTable xp = validate_gmm(xor3());
    CompactRep rep_xor = full_space_rep(2, xor3(), xp);
    CHECK(rep_xor.as_relation() == Relation::full(2, 2));
}

TEST_CASE("full_space_rep is a representation of the full space and generates it")
{
    for (const OperationTable & op : {maj3(), xor3(), mixed3()}) {
        PairTable pairs = validate_gmm(op);
        for (int n = 1; n <= 4; ++n) {
            CompactRep rep = full_space_rep(n, op, pairs);
            Relation full = Relation::full(n, op.domain_size());
            CHECK(check_representation(rep.as_relation(), full, op.arity() - 1, pairs));
            CHECK(closure(rep.as_relation(), op) == full);
        }
    }
}

TEST_CASE("extend_product concatenates a constant suffix")
{
    Relation s(1, {Tuple{0}, Tuple{1}});
    CHECK(extend_product(s, Tuple{1}) == Relation(2, {Tuple{0, 1}, Tuple{1, 1}}));
    CHECK(extend_product(Relation(1), Tuple{0}) == Relation(2));

    Relation zero_ary(0, {Tuple{}});
    CHECK(extend_product(zero_ary, Tuple{2, 1}) == Relation(2, {Tuple{2, 1}}));
}
