#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace redop {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class EvalError : public Error {
public:
    enum class Reason { Unbound, DivisionByZero, Domain };
    EvalError(Reason r, const std::string& msg) : Error(msg), reason_(r) {}
    Reason reason() const { return reason_; }

private:
    Reason reason_;
};

class CyclicBinding : public Error {
public:
    using Error::Error;
};

/// Probing could not find enough admissible points.
class InconclusiveProbe : public Error {
public:
    using Error::Error;
};

class NonQuadrable : public Error {
public:
    using Error::Error;
};

class NonInvertible : public Error {
public:
    using Error::Error;
};

class ConstructionError : public Error {
public:
    using Error::Error;
};

class SignatureMismatch : public Error {
public:
    using Error::Error;
};

class EliminationFailure : public Error {
public:
    using Error::Error;
};

}  // namespace redop
