#pragma once

#include <stdexcept>
#include <string>

namespace capitula {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violated an operation's documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An AbHom whose matrix does not match its groups.
class MalformedHom : public Error {
public:
    using Error::Error;
};

/// A theorem was invoked without its hypotheses holding.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Input data failed consistency checks.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A profile lacks data needed by the requested computation.
class IncompleteProfile : public Error {
public:
    using Error::Error;
};

/// A configured computational cap was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// The requested computation is outside what is implemented.
class Unsupported : public Error {
public:
    using Error::Error;
};

/// An Artin-Schreier or Kummer equation that does not define a field of degree n.
class DegenerateExtension : public Error {
public:
    using Error::Error;
};

}  // namespace capitula
