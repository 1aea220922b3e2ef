#include "gmmcsp/oracle.hpp"

namespace gmmcsp {

void validate_instance(const Instance & instance)
{
    if (instance.num_vars < 1)
        throw MalformedInstance("instance must have at least one variable");
    if (instance.domain_size < 1)
        throw MalformedInstance("domain must have at least one value");
    for (std::size_t l = 0; l < instance.constraints.size(); ++l) {
        const Constraint & c = instance.constraints[l];
        if (c.scope.empty())
            throw MalformedInstance("constraint " + std::to_string(l + 1) + " has an empty scope");
        for (int v : c.scope)
            if (v < 1 || v > instance.num_vars)
                throw MalformedInstance("constraint " + std::to_string(l + 1) +
                    " references variable " + std::to_string(v) + " outside 1.." +
                    std::to_string(instance.num_vars));
        if (c.relation.arity() != static_cast<int>(c.scope.size()))
            throw MalformedInstance("constraint " + std::to_string(l + 1) +
                " relation arity does not match its scope length");
        for (const Tuple & t : c.relation.tuples())
            for (Value v : t)
                if (v >= instance.domain_size)
                    throw MalformedInstance("constraint " + std::to_string(l + 1) +
                        " contains a tuple value outside the domain");
    }
}

bool verify_assignment(const Instance & instance, const Tuple & t)
{
    if (t.size() != static_cast<std::size_t>(instance.num_vars))
        throw ArityMismatch("assignment arity does not match the variable count");
    for (const Constraint & c : instance.constraints)
        if (!c.relation.contains(project_tuple(t, c.scope)))
            return false;
    return true;
}

namespace {

std::size_t assignment_count(const Instance & instance, std::size_t cap)
{
    std::size_t count = 1;
    for (int i = 0; i < instance.num_vars; ++i) {
        if (count > cap / static_cast<std::size_t>(instance.domain_size))
            throw BudgetExceeded("assignment space " + std::to_string(instance.domain_size) +
                "^" + std::to_string(instance.num_vars) + " exceeds the oracle budget");
        count *= static_cast<std::size_t>(instance.domain_size);
    }
    return count;
}

template <typename Fn>
void for_each_assignment(const Instance & instance, Fn && fn)
{
    Tuple t(static_cast<std::size_t>(instance.num_vars), 0);
    while (true) {
        if (!fn(t))
            return;
        int pos = instance.num_vars - 1;
        while (pos >= 0 && t[static_cast<std::size_t>(pos)] == instance.domain_size - 1) {
            t[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0)
            return;
        ++t[static_cast<std::size_t>(pos)];
    }
}

} // namespace

SolveResult brute_force_solve(const Instance & instance, const OracleBudget & budget)
{
    validate_instance(instance);
    assignment_count(instance, budget.max_assignments);

    SolveResult result;
    for_each_assignment(instance, [&](const Tuple & t) {
        if (verify_assignment(instance, t)) {
            result.status = Status::Sat;
            result.witness = t;
            return false;
        }
        return true;
    });
    return result;
}

Relation enumerate_solutions(const Instance & instance, const OracleBudget & budget)
{
    validate_instance(instance);
    assignment_count(instance, budget.max_assignments);

    std::vector<Tuple> solutions;
    for_each_assignment(instance, [&](const Tuple & t) {
        if (verify_assignment(instance, t))
            solutions.push_back(t);
        return true;
    });
    return Relation(instance.num_vars, std::move(solutions));
}

} // namespace gmmcsp
