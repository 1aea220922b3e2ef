#ifndef GMMCSP_ERRORS_HPP
#define GMMCSP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gmmcsp {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- operation table construction ----

class WrongTableLength : public Error {
public:
    WrongTableLength(std::size_t got, std::size_t want)
        : Error("operation table has " + std::to_string(got) +
                " entries, expected " + std::to_string(want)) {}
};

class ValueOutOfRange : public Error {
public:
    using Error::Error;
};

class ArityTooSmall : public Error {
public:
    explicit ArityTooSmall(int arity)
        : Error("operation arity " + std::to_string(arity) + " is below the minimum of 3") {}
};

class TableTooLarge : public Error {
public:
    using Error::Error;
};

// ---- operation application ----

class WrongArgCount : public Error {
public:
    WrongArgCount(std::size_t got, std::size_t want)
        : Error("operation applied to " + std::to_string(got) +
                " arguments, expected " + std::to_string(want)) {}
};

class WrongTupleCount : public Error {
public:
    WrongTupleCount(std::size_t got, std::size_t want)
        : Error("operation applied to " + std::to_string(got) +
                " tuples, expected " + std::to_string(want)) {}
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

// ---- pair classification ----

/// Neither the near-unanimity nor the Mal'tsev identities hold on {a, b}.
class NotGmmPair : public Error {
public:
    NotGmmPair(int a, int b)
        : Error("operation is neither majority nor minority on the pair {" +
                std::to_string(a) + "," + std::to_string(b) + "}"),
          a(a), b(b) {}
    int a;
    int b;
};

/// Raised by whole-table validation; names the first offending pair.
class NotGmm : public Error {
public:
    NotGmm(int a, int b)
        : Error("not a generalized majority-minority operation: offending pair {" +
                std::to_string(a) + "," + std::to_string(b) + "}"),
          a(a), b(b) {}
    int a;
    int b;
};

// ---- relations ----

class IndexOutOfRange : public Error {
public:
    IndexOutOfRange(int index, int arity)
        : Error("coordinate index " + std::to_string(index) +
                " out of range for arity " + std::to_string(arity)) {}
};

class NotASubset : public Error {
public:
    using Error::Error;
};

class SizeCapExceeded : public Error {
public:
    explicit SizeCapExceeded(std::size_t cap)
        : Error("closure exceeded the tuple budget of " + std::to_string(cap)) {}
};

// ---- instances / solving ----

class MalformedInstance : public Error {
public:
    using Error::Error;
};

class ConstraintNotInvariant : public Error {
public:
    explicit ConstraintNotInvariant(int index)
        : Error("constraint " + std::to_string(index) +
                " is not invariant under the given operation"),
          index(index) {}
    int index;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// ---- file format ----

class ParseError : public Error {
public:
    ParseError(int line, const std::string & what)
        : Error("parse error at line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

class SemanticError : public Error {
public:
    using Error::Error;
};

} // namespace gmmcsp

#endif
