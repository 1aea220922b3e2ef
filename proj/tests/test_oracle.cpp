#include "gmmcsp/oracle.hpp"

#include <doctest.h>

using namespace gmmcsp;

namespace {

// x1 ^ x2 = 0, x2 ^ x3 = 1, x1 ^ x3 = 0: the sum of the left sides is 0
// but the right sides add to 1, so nothing satisfies it.
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

} // namespace

TEST_CASE("brute_force_solve enumerates lexicographically")
{
    Instance free{3, 2, {}};
    SolveResult r = brute_force_solve(free);
    CHECK(r.status == Status::Sat);
    CHECK(*r.witness == Tuple{0, 0, 0});

    CHECK(brute_force_solve(xor_triangle()).status == Status::Unsat);

    Instance blocked{2, 2, {}};
    blocked.constraints.push_back(Constraint{{1}, Relation(1)});
    CHECK(brute_force_solve(blocked).status == Status::Unsat);
}

TEST_CASE("verify_assignment projects each scope")
{
    Instance free{2, 2, {}};
    CHECK(verify_assignment(free, Tuple{1, 0}));

    Instance eq{2, 2, {}};
    eq.constraints.push_back(Constraint{{1, 2}, Relation(2, {Tuple{0, 0}, Tuple{1, 1}})});
    CHECK_FALSE(verify_assignment(eq, Tuple{0, 1}));
    CHECK(verify_assignment(eq, Tuple{1, 1}));
    CHECK_THROWS_AS(verify_assignment(eq, Tuple{1}), ArityMismatch);
}

TEST_CASE("enumerate_solutions returns the full solution relation")
{
    Instance free{2, 2, {}};
    CHECK(enumerate_solutions(free) == Relation::full(2, 2));

    Instance eq{2, 2, {}};
    eq.constraints.push_back(Constraint{{1, 2}, Relation(2, {Tuple{0, 0}, Tuple{1, 1}})});
    CHECK(enumerate_solutions(eq) == Relation(2, {Tuple{0, 0}, Tuple{1, 1}}));

    CHECK(enumerate_solutions(xor_triangle()) == Relation(3));
}

TEST_CASE("oracle budgets cap the assignment space")
{
    Instance big{40, 2, {}};
    OracleBudget tiny;
    tiny.max_assignments = 1 << 10;
    CHECK_THROWS_AS(brute_force_solve(big, tiny), BudgetExceeded);
    CHECK_THROWS_AS(enumerate_solutions(big, tiny), BudgetExceeded);
}

TEST_CASE("malformed instances are rejected")
{
    Instance bad{2, 2, {}};
    bad.constraints.push_back(Constraint{{1, 3}, Relation(2, {Tuple{0, 0}})});
    CHECK_THROWS_AS(validate_instance(bad), MalformedInstance);

    Instance mismatch{2, 2, {}};
    mismatch.constraints.push_back(Constraint{{1}, Relation(2, {Tuple{0, 0}})});
    CHECK_THROWS_AS(validate_instance(mismatch), MalformedInstance);

    Instance out_of_domain{1, 2, {}};
    out_of_domain.constraints.push_back(Constraint{{1}, Relation(1, {Tuple{2}})});
    CHECK_THROWS_AS(validate_instance(out_of_domain), MalformedInstance);
}
