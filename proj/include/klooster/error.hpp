#pragma once

#include <stdexcept>
#include <string>

namespace klooster {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotInvertible : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class ModuliNotCoprime : public Error {
public:
    using Error::Error;
};

class NotDivisor : public Error {
public:
    using Error::Error;
};

class ModulusMismatch : public Error {
public:
    using Error::Error;
};

// Twisted sum requested with a character modulus that does not divide c.
class ModulusIncompatible : public Error {
public:
    using Error::Error;
};

class TraceCapExceeded : public Error {
public:
    using Error::Error;
};

// A verdict was requested from the exact backend but the field degree
// exceeded the configured cap.
class ExactUnavailable : public Error {
public:
    using Error::Error;
};

} // namespace klooster
