#include "gmmcsp/solver.hpp"
#include "gmmcsp/generators.hpp"
#include "gmmcsp/oracle.hpp"

#include <doctest.h>

#include <random>

using namespace gmmcsp;

namespace {

Relation parity3()
{
    return Relation(3, {Tuple{0, 0, 0}, Tuple{0, 1, 1}, Tuple{1, 0, 1}, Tuple{1, 1, 0}});
}

Instance xor_triangle()
{
    Relation equal(2, {Tuple{0, 0}, Tuple{1, 1}});
    Relation differ(2, {Tuple{0, 1}, Tuple{1, 0}});
    Instance instance{3, 2, {}};
    instance.constraints.push_back(Constraint{{1, 2}, equal});
    instance.constraints.push_back(Constraint{{2, 3}, differ});
    instance.constraints.push_back(Constraint{{1, 3}, equal});
    return instance;
}

Relation random_invariant(std::mt19937 & rng, int arity, const OperationTable & op,
    int max_seeds)
{
    std::vector<Tuple> tuples;
    const int count = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_seeds));
    for (int i = 0; i < count; ++i) {
        Tuple t;
        for (int c = 0; c < arity; ++c)
            t.push_back(static_cast<Value>(rng() % static_cast<unsigned>(op.domain_size())));
        tuples.push_back(std::move(t));
    }
    return closure(Relation(arity, std::move(tuples)), op);
}

} // namespace

TEST_CASE("nonempty finds tuples with the requested projection")
{
    OperationTable xo = xor3();
    PairTable xp = validate_gmm(xo);
    CompactRep rep = compress(parity3(), 2, xp);

    std::vector<int> all{1, 2, 3};
    auto hit = nonempty(rep, all, Relation(3, {Tuple{1, 0, 1}}), xo, xp);
    REQUIRE(hit.has_value());
    CHECK(*hit == Tuple{1, 0, 1});

    CHECK_FALSE(nonempty(rep, all, Relation(3, {Tuple{1, 0, 0}}), xo, xp).has_value());

    std::vector<int> one{1};
    auto any = nonempty(rep, one, Relation::full(1, 2), xo, xp);
    REQUIRE(any.has_value());
    CHECK(parity3().contains(*any));
}

TEST_CASE("nonempty agrees with brute-force search over the generated relation")
{
    std::mt19937 rng(101);
    for (const OperationTable & op : {maj3(), xor3(), mixed3()}) {
        PairTable pairs = validate_gmm(op);
        const int q = op.domain_size();
        for (int round = 0; round < 60; ++round) {
            const int arity = 2 + static_cast<int>(rng() % 3);
            Relation r = random_invariant(rng, arity, op, 5);
            CompactRep rep = compress(r, op.arity() - 1, pairs);

            const int len = 1 + static_cast<int>(rng() % 4);
            std::vector<int> indices;
            for (int c = 0; c < len; ++c)
                indices.push_back(1 + static_cast<int>(rng() % static_cast<unsigned>(arity)));
            Relation s = random_invariant(rng, len, op, 3);

            auto got = nonempty(rep, indices, s, op, pairs);
            bool expected = false;
            for (const Tuple & t : r.tuples())
                if (s.contains(project_tuple(t, indices)))
                    expected = true;

            CHECK(got.has_value() == expected);
            if (got) {
                CHECK(r.contains(*got));
                CHECK(s.contains(project_tuple(*got, indices)));
            }
            (void)q;
        }
    }
}

TEST_CASE("fix_values restricts prefixes")
{
    OperationTable xo = xor3();
    PairTable xp = validate_gmm(xo);
    CompactRep rep = compress(parity3(), 2, xp);

    std::vector<Value> one{1};
    CompactRep fixed = fix_values(rep, one, xo, xp);
    CHECK(closure(fixed.as_relation(), xo) ==
        Relation(3, {Tuple{1, 0, 1}, Tuple{1, 1, 0}}));

    CompactRep same = fix_values(rep, {}, xo, xp);
    CHECK(closure(same.as_relation(), xo) == parity3());

    CompactRep diag = compress(Relation(2, {Tuple{0, 0}, Tuple{1, 1}}), 2, xp);
    CompactRep diag1 = fix_values(diag, one, xo, xp);
    CHECK(closure(diag1.as_relation(), xo) == Relation(2, {Tuple{1, 1}}));

    CompactRep odd = compress(Relation(2, {Tuple{0, 0}}), 2, xp);
    CHECK(fix_values(odd, one, xo, xp).empty());
}

TEST_CASE("fix_values matches brute-force restriction on random relations")
{
    std::mt19937 rng(131);
    for (const OperationTable & op : {maj3(), xor3(), mixed3()}) {
        PairTable pairs = validate_gmm(op);
        const int q = op.domain_size();
        for (int round = 0; round < 40; ++round) {
            const int arity = 2 + static_cast<int>(rng() % 3);
            Relation r = random_invariant(rng, arity, op, 5);
            CompactRep rep = compress(r, op.arity() - 1, pairs);

            const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(arity));
            std::vector<Value> prefix;
            for (int c = 0; c < m; ++c)
                prefix.push_back(static_cast<Value>(rng() % static_cast<unsigned>(q)));

            CompactRep fixed = fix_values(rep, prefix, op, pairs);

            std::vector<Tuple> expected;
            for (const Tuple & t : r.tuples()) {
                bool keep = true;
                for (int c = 0; c < m; ++c)
                    if (t[static_cast<std::size_t>(c)] != prefix[static_cast<std::size_t>(c)])
                        keep = false;
                if (keep)
                    expected.push_back(t);
            }
            Relation want(arity, std::move(expected));
            CHECK(closure(fixed.as_relation(), op) == want);
            if (!want.empty())
                CHECK(check_representation(fixed.as_relation(), want, op.arity() - 1, pairs));
        }
    }
}

TEST_CASE("next_beta restricts a projection to a target relation")
{
    OperationTable xo = xor3();
    PairTable xp = validate_gmm(xo);
    CompactRep full = full_space_rep(3, xo, xp);

    std::vector<int> idx{1, 2};
    Relation diag(2, {Tuple{0, 0}, Tuple{1, 1}});
    CompactRep restricted = next_beta(full, idx, diag, xo, xp);
    CHECK(closure(restricted.as_relation(), xo) ==
        Relation(3, {Tuple{0, 0, 0}, Tuple{0, 0, 1}, Tuple{1, 1, 0}, Tuple{1, 1, 1}}));

    CompactRep vacuous = next_beta(full, idx, Relation::full(2, 2), xo, xp);
    CHECK(closure(vacuous.as_relation(), xo) == Relation::full(3, 2));

    CHECK(next_beta(full, idx, Relation(2), xo, xp).empty());
}

TEST_CASE("next agrees with next_beta up to closure")
{
    std::mt19937 rng(151);
    for (const OperationTable & op : {maj3(), xor3(), mixed3()}) {
        PairTable pairs = validate_gmm(op);
        for (int round = 0; round < 40; ++round) {
            const int arity = 2 + static_cast<int>(rng() % 3);
            Relation r = random_invariant(rng, arity, op, 5);
            CompactRep rep = compress(r, op.arity() - 1, pairs);

            const int len = 1 + static_cast<int>(rng() % 3);
            std::vector<int> indices;
            for (int c = 0; c < len; ++c)
                indices.push_back(1 + static_cast<int>(rng() % static_cast<unsigned>(arity)));
            Relation s = random_invariant(rng, len, op, 3);

            CompactRep via_next = next(rep, indices, s, op, pairs);
            CompactRep via_beta = next_beta(rep, indices, s, op, pairs);

            std::vector<Tuple> expected;
            for (const Tuple & t : r.tuples())
                if (s.contains(project_tuple(t, indices)))
                    expected.push_back(t);
            Relation want(arity, std::move(expected));

            CHECK(closure(via_next.as_relation(), op) == want);
            CHECK(closure(via_beta.as_relation(), op) == want);
            if (!want.empty())
                CHECK(check_representation(via_next.as_relation(), want, op.arity() - 1, pairs));
        }
    }
}

TEST_CASE("next handles the degenerate shapes")
{
    OperationTable xo = xor3();
    PairTable xp = validate_gmm(xo);
    CompactRep full = full_space_rep(3, xo, xp);

    std::vector<int> one{2};
    Relation pin(1, {Tuple{1}});
    CompactRep pinned = next(full, one, pin, xo, xp);
    CHECK(closure(pinned.as_relation(), xo) ==
        Relation(3, {Tuple{0, 1, 0}, Tuple{0, 1, 1}, Tuple{1, 1, 0}, Tuple{1, 1, 1}}));

    CompactRep none = next_beta(full, one, Relation(1), xo, xp);
    CHECK(next(none, one, pin, xo, xp).empty());
}

TEST_CASE("solve handles the documented instances")
{
    OperationTable xo = xor3();

    Instance free{3, 2, {}};
    SolveResult r0 = solve(free, xo);
    CHECK(r0.status == Status::Sat);
    CHECK(verify_assignment(free, *r0.witness));

    CHECK(solve(xor_triangle(), xo).status == Status::Unsat);

    // (x or y) and (not x or y)
    Instance twosat{2, 2, {}};
    twosat.constraints.push_back(
        Constraint{{1, 2}, Relation(2, {Tuple{0, 1}, Tuple{1, 0}, Tuple{1, 1}})});
    twosat.constraints.push_back(
        Constraint{{1, 2}, Relation(2, {Tuple{0, 0}, Tuple{0, 1}, Tuple{1, 1}})});
    SolveResult r2 = solve(twosat, maj3());
    CHECK(r2.status == Status::Sat);
    CHECK(verify_assignment(twosat, *r2.witness));
    CHECK((*r2.witness)[1] == 1);
}

TEST_CASE("solve validates its inputs")
{
    OperationTable and3 = build_operation(2, 3, {0, 0, 0, 0, 0, 0, 0, 1});
    Instance free{2, 2, {}};
    CHECK_THROWS_AS(solve(free, and3), NotGmm);

    // not invariant under xor3: closure adds (1,0,1)
    Instance bad{3, 2, {}};
    bad.constraints.push_back(
        Constraint{{1, 2, 3}, Relation(3, {Tuple{0, 0, 0}, Tuple{1, 1, 0}, Tuple{0, 1, 1}})});
    CHECK_THROWS_AS(solve(bad, xor3()), ConstraintNotInvariant);

    SolveOptions trusting;
    trusting.validate_constraints = false;
    CHECK_NOTHROW(solve(bad, xor3(), trusting));

    Instance malformed{2, 2, {}};
    malformed.constraints.push_back(Constraint{{5}, Relation(1, {Tuple{0}})});
    CHECK_THROWS_AS(solve(malformed, xor3()), MalformedInstance);

    Instance wrong_domain{2, 3, {}};
    CHECK_THROWS_AS(solve(wrong_domain, xor3()), MalformedInstance);
}

TEST_CASE("explicit_solution_relation materializes the state")
{
    OperationTable xo = xor3();
    PairTable xp = validate_gmm(xo);

    Instance eq{2, 2, {}};
    eq.constraints.push_back(Constraint{{1, 2}, Relation(2, {Tuple{0, 0}, Tuple{1, 1}})});

    SolverState state = make_initial_state(eq, xo, xp);
    CHECK(explicit_solution_relation(state, xo) == Relation::full(2, 2));

    apply_next_constraint(state, eq, xo, xp);
    CHECK(explicit_solution_relation(state, xo) == Relation(2, {Tuple{0, 0}, Tuple{1, 1}}));
    CHECK(state.applied == 1);

    SolverState empty_state{CompactRep::Builder(2, 2, 2).finish(), 0};
    CHECK(explicit_solution_relation(empty_state, xo) == Relation(2));
}

TEST_CASE("solver state tracks the oracle after every constraint")
{
    std::mt19937 rng(171);
    for (int round = 0; round < 15; ++round) {
        GeneratorSpec spec;
        spec.family = round % 3 == 0 ? Family::Affine2
            : round % 3 == 1         ? Family::TwoSat
                                     : Family::Mixed3;
        spec.num_vars = 3 + static_cast<int>(rng() % 4);
        spec.num_constraints = 1 + static_cast<int>(rng() % 5);
        spec.seed = rng();
        auto [op, instance] = gen_instance(spec);
        PairTable pairs = validate_gmm(op);

        SolverState state = make_initial_state(instance, op, pairs);
        Instance sofar{instance.num_vars, instance.domain_size, {}};
        for (const Constraint & c : instance.constraints) {
            apply_next_constraint(state, instance, op, pairs);
            sofar.constraints.push_back(c);
            Relation expected = enumerate_solutions(sofar);
            CHECK(explicit_solution_relation(state, op) == expected);
            if (expected.empty())
                break;
        }
    }
}

TEST_CASE("solve results are deterministic")
{
    GeneratorSpec spec;
    spec.family = Family::Mixed3;
    spec.num_vars = 6;
    spec.num_constraints = 4;
    spec.seed = 99;
    auto [op, instance] = gen_instance(spec);

    SolveResult first = solve(instance, op);
    SolveResult second = solve(instance, op);
    CHECK(first.status == second.status);
    CHECK(first.witness == second.witness);
}
