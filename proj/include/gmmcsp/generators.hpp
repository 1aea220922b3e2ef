#ifndef GMMCSP_GENERATORS_HPP
#define GMMCSP_GENERATORS_HPP

#include "gmmcsp/instance.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace gmmcsp {

// ---- built-in operations ----

/// Boolean majority, q = 2, k = 3. All pairs majority.
OperationTable maj3();

/// Boolean XOR (minority), q = 2, k = 3. {0,1} is a minority pair.
OperationTable xor3();

/**
 * The built-in mixed operation on {0,1,2}, k = 3: XOR when all three
 * arguments lie in {0,1}, otherwise the repeated value if any value
 * occurs at least twice, otherwise the first argument. {0,1} is a
 * minority pair; {0,2} and {1,2} are majority pairs.
 */
OperationTable mixed3();

// ---- instance generation ----

enum class Family { Affine2, TwoSat, Mixed3 };

Family family_from_name(const std::string & name); // throws MalformedInstance

struct GeneratorSpec {
    Family family = Family::Affine2;
    int num_vars = 0;
    int num_constraints = 0;
    std::uint64_t seed = 0;
};

/**
 * Deterministic under the seed. affine2 draws parity equations on 2-3
 * distinct variables over {0,1}; twosat draws binary clauses (three
 * tuples each); mixed3 draws constraints over {0,1,2} whose relations
 * are closures of 1-3 random seed tuples of arity up to 3, so they are
 * invariant under the mixed operation by construction.
 */
std::pair<OperationTable, Instance> gen_instance(const GeneratorSpec & spec);

} // namespace gmmcsp

#endif
