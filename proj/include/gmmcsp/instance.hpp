#ifndef GMMCSP_INSTANCE_HPP
#define GMMCSP_INSTANCE_HPP

#include "gmmcsp/relations.hpp"

#include <optional>
#include <vector>

namespace gmmcsp {

struct Constraint {
    std::vector<int> scope; // 1-based variable indices; repeats allowed
    Relation relation;      // arity == scope.size()
};

/// A CSP instance: variables 1..num_vars over {0..domain_size-1} plus an
/// ordered constraint list.
struct Instance {
    int num_vars = 0;
    int domain_size = 0;
    std::vector<Constraint> constraints;
};

/// Scope indices in range, relation arities matching scope lengths,
/// relation entries inside the domain. Throws MalformedInstance.
void validate_instance(const Instance & instance);

enum class Status { Sat, Unsat };

struct ConstraintStat {
    std::size_t rep_size = 0; // representation size after the constraint
    std::size_t sig_size = 0;
    double millis = 0.0;
};

struct SolveResult {
    Status status = Status::Unsat;
    std::optional<Tuple> witness; // present iff Sat
    std::vector<ConstraintStat> stats;
};

} // namespace gmmcsp

#endif
