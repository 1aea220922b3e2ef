#include "gmmcsp/generators.hpp"

#include "gmmcsp/relations.hpp"

#include <algorithm>
#include <random>

namespace gmmcsp {

namespace {

template <typename Fn>
OperationTable build_ternary(int q, Fn && fn)
{
    std::vector<int> values;
    values.reserve(static_cast<std::size_t>(q) * q * q);
    for (int x = 0; x < q; ++x)
        for (int y = 0; y < q; ++y)
            for (int z = 0; z < q; ++z)
                values.push_back(fn(x, y, z));
    return build_operation(q, 3, values);
}

// Portable bounded draw; modulo bias is irrelevant here, reproducibility
// across standard libraries is not.
std::uint64_t bounded(std::mt19937_64 & rng, std::uint64_t bound)
{
    return rng() % bound;
}

std::vector<int> distinct_vars(std::mt19937_64 & rng, int count, int num_vars)
{
    std::vector<int> vars;
    while (static_cast<int>(vars.size()) < count) {
        const int v = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(num_vars))) + 1;
        if (std::find(vars.begin(), vars.end(), v) == vars.end())
            vars.push_back(v);
    }
    return vars;
}

} // namespace

OperationTable maj3()
{
    return build_ternary(2, [](int x, int y, int z) { return (x & y) | (x & z) | (y & z); });
}

OperationTable xor3()
{
    return build_ternary(2, [](int x, int y, int z) { return x ^ y ^ z; });
}

OperationTable mixed3()
{
    return build_ternary(3, [](int x, int y, int z) {
        if (x < 2 && y < 2 && z < 2)
            return x ^ y ^ z;
        if (x == y || x == z)
            return x;
        if (y == z)
            return y;
        return x;
    });
}

Family family_from_name(const std::string & name)
{
    if (name == "affine2")
        return Family::Affine2;
    if (name == "twosat")
        return Family::TwoSat;
    if (name == "mixed3")
        return Family::Mixed3;
    throw MalformedInstance("unknown generator family '" + name + "'");
}

namespace {

Constraint gen_affine(std::mt19937_64 & rng, int num_vars)
{
    const int arity = std::min(num_vars, 2 + static_cast<int>(bounded(rng, 2)));
    std::vector<int> scope = distinct_vars(rng, arity, num_vars);
    const Value rhs = static_cast<Value>(bounded(rng, 2));

    std::vector<Tuple> tuples;
    Tuple t(static_cast<std::size_t>(arity), 0);
    while (true) {
        Value parity = 0;
        for (Value v : t)
            parity ^= v;
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
    return Constraint{std::move(scope), Relation(arity, std::move(tuples))};
}

Constraint gen_clause(std::mt19937_64 & rng, int num_vars)
{
    std::vector<int> scope = distinct_vars(rng, 2, num_vars);
    const Value p1 = static_cast<Value>(bounded(rng, 2));
    const Value p2 = static_cast<Value>(bounded(rng, 2));

    // (x1 = p1) or (x2 = p2): everything except the falsifying pair
    std::vector<Tuple> tuples;
    for (Value v1 = 0; v1 < 2; ++v1)
        for (Value v2 = 0; v2 < 2; ++v2)
            if (v1 == p1 || v2 == p2)
                tuples.push_back(Tuple{v1, v2});
    return Constraint{std::move(scope), Relation(2, std::move(tuples))};
}

Constraint gen_mixed(std::mt19937_64 & rng, int num_vars, const OperationTable & op)
{
    const int arity = std::min(num_vars, 1 + static_cast<int>(bounded(rng, 3)));
    std::vector<int> scope = distinct_vars(rng, arity, num_vars);
    const int seeds = 1 + static_cast<int>(bounded(rng, 3));

    std::vector<Tuple> tuples;
    for (int s = 0; s < seeds; ++s) {
        Tuple t;
        for (int j = 0; j < arity; ++j)
            t.push_back(static_cast<Value>(bounded(rng, 3)));
        tuples.push_back(std::move(t));
    }
    Relation relation = closure(Relation(arity, std::move(tuples)), op);
    return Constraint{std::move(scope), std::move(relation)};
}

} // namespace

std::pair<OperationTable, Instance> gen_instance(const GeneratorSpec & spec)
{
    if (spec.num_vars < 1)
        throw MalformedInstance("generator needs at least one variable");
    if (spec.num_constraints < 0)
        throw MalformedInstance("generator constraint count cannot be negative");
    if (spec.family == Family::TwoSat && spec.num_vars < 2)
        throw MalformedInstance("twosat instances need at least two variables");

    std::mt19937_64 rng(spec.seed);
    OperationTable op = spec.family == Family::Affine2 ? xor3()
        : spec.family == Family::TwoSat               ? maj3()
                                                      : mixed3();

    Instance instance{spec.num_vars, op.domain_size(), {}};
    for (int l = 0; l < spec.num_constraints; ++l) {
        switch (spec.family) {
        case Family::Affine2:
            instance.constraints.push_back(gen_affine(rng, spec.num_vars));
            break;
        case Family::TwoSat:
            instance.constraints.push_back(gen_clause(rng, spec.num_vars));
            break;
        case Family::Mixed3:
            instance.constraints.push_back(gen_mixed(rng, spec.num_vars, op));
            break;
        }
    }
    return {std::move(op), std::move(instance)};
}

} // namespace gmmcsp
