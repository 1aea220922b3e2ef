#ifndef GMMCSP_ORACLE_HPP
#define GMMCSP_ORACLE_HPP

#include "gmmcsp/instance.hpp"

namespace gmmcsp {

/// Caps for the brute-force paths; deliberately generous defaults.
struct OracleBudget {
    std::size_t max_assignments = std::size_t{1} << 20;
    std::size_t max_closure_tuples = default_closure_cap;
};

/// True iff every constraint's scope projection of t lies in its relation.
bool verify_assignment(const Instance & instance, const Tuple & t);

/**
 * Enumerates all q^n assignments in lexicographic order and returns Sat
 * with the least satisfying one, or Unsat. Throws BudgetExceeded if q^n
 * is over budget. Independent of the solver by construction.
 */
SolveResult brute_force_solve(const Instance & instance,
    const OracleBudget & budget = {});

/// The full solution relation, canonically ordered.
Relation enumerate_solutions(const Instance & instance,
    const OracleBudget & budget = {});

} // namespace gmmcsp

#endif
