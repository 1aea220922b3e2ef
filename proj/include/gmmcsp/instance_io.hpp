#ifndef GMMCSP_INSTANCE_IO_HPP
#define GMMCSP_INSTANCE_IO_HPP

#include "gmmcsp/instance.hpp"

#include <string>
#include <vector>

namespace gmmcsp {

struct ParsedInstance {
    OperationTable op;
    Instance instance;
    std::vector<std::string> warnings; // e.g. duplicate tuples in a constraint
};

/**
 * Parses the line-oriented instance format:
 *
 *   gmmcsp 1
 *   domain <q>
 *   op <k>
 *   table <q^k integers in lexicographic argument order>
 *   vars <n>
 *   constraints <m>
 *   scope <j> <i1> ... <ij>
 *   tuples <c>
 *   <c lines of j integers each>
 *
 * '#' starts a comment; integers may be separated by any whitespace.
 * Throws ParseError (with a line number) on malformed text and
 * SemanticError on well-formed text with bad content (wrong table
 * length, out-of-range indices or values).
 */
ParsedInstance parse_instance(const std::string & text);

/// Accepts either a full instance file or one that stops after the
/// table block; returns just the operation.
OperationTable parse_operation(const std::string & text);

/// Canonical serialization: parse followed by serialize is the identity
/// on canonical files, and serialize after parse canonicalizes.
std::string serialize_instance(const OperationTable & op, const Instance & instance);

} // namespace gmmcsp

#endif
