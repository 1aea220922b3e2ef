#ifndef GMMCSP_SOLVER_HPP
#define GMMCSP_SOLVER_HPP

#include "gmmcsp/instance.hpp"
#include "gmmcsp/relations.hpp"

#include <optional>

namespace gmmcsp {

/**
 * Searches <rep> for a tuple whose projection onto `indices` (1-based,
 * repeats allowed) lies in s, which must be invariant under op.
 *
 * Implemented as projection-space saturation with witness lifting: the
 * projection of the representation is closed under op acting on
 * |indices|-ary tuples while one full-arity preimage is maintained per
 * projection value, so the n-ary closure is never materialized. Index
 * sets no larger than the representation order are answered straight
 * from the preimage table.
 */
std::optional<Tuple> nonempty(const CompactRep & rep, std::span<const int> indices,
    const Relation & s, const OperationTable & op, const PairTable & pairs,
    std::size_t max_tuples = default_closure_cap);

/**
 * Compact (k-1)-representation of { t in <rep> : t starts with prefix }.
 * Processes the prefix one coordinate per iteration, rebuilding the
 * witnessed signature and all small projections at each step.
 */
CompactRep fix_values(const CompactRep & rep, std::span<const Value> prefix,
    const OperationTable & op, const PairTable & pairs,
    std::size_t max_tuples = default_closure_cap);

/**
 * Compact (k-1)-representation of R* = { t in <rep> : pr_indices t in s }.
 * May take time exponential in |indices|; the solver always goes through
 * next(), which bounds the intermediate projection sizes.
 */
CompactRep next_beta(const CompactRep & rep, std::span<const int> indices,
    const Relation & s, const OperationTable & op, const PairTable & pairs,
    std::size_t max_tuples = default_closure_cap);

/**
 * Same contract as next_beta, computed as a chain of next_beta calls on
 * the index prefixes against the matching projections of s.
 */
CompactRep next(const CompactRep & rep, std::span<const int> indices,
    const Relation & s, const OperationTable & op, const PairTable & pairs,
    std::size_t max_tuples = default_closure_cap);

/// Representation of the solutions of the first `applied` constraints.
struct SolverState {
    CompactRep rep;
    int applied = 0;
};

struct SolveOptions {
    /// Check each constraint relation for invariance up front.
    bool validate_constraints = true;
    /// Work cap for those invariance checks (|S|^k combinations).
    std::size_t invariance_cap = std::size_t{100000000};
    std::size_t closure_cap = default_closure_cap;
    bool collect_stats = false;
};

/// The size every representation must stay under: 2nq^2 plus the number
/// of projection slots on index sets of size < k. Saturates on overflow.
std::uint64_t compactness_bound(int num_vars, int domain_size, int op_arity);

SolverState make_initial_state(const Instance & instance, const OperationTable & op,
    const PairTable & pairs);

/// Folds the next constraint into the state via next(). Out of range or
/// already-empty states are the caller's concern only insofar as empty
/// representations stay empty.
void apply_next_constraint(SolverState & state, const Instance & instance,
    const OperationTable & op, const PairTable & pairs,
    std::size_t max_tuples = default_closure_cap);

/**
 * Decides the instance: validates the operation and (optionally) the
 * constraint relations, starts from the full-space representation, and
 * folds constraints one by one. Sat results carry the lexicographically
 * least tuple of the final representation, re-verified against every
 * constraint before returning.
 */
SolveResult solve(const Instance & instance, const OperationTable & op,
    const SolveOptions & options = {});

/// Materializes <state.rep>; test and diagnostic use only.
Relation explicit_solution_relation(const SolverState & state, const OperationTable & op,
    std::size_t max_tuples = default_closure_cap);

} // namespace gmmcsp

#endif
