#pragma once

#include <stdexcept>
#include <string>

namespace xlang {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed program/config JSON.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Type-parameter substitution hit a parameter with no binding.
class UnboundTypeParamError : public Error {
public:
    explicit UnboundTypeParamError(const std::string& name)
        : Error("unbound type parameter: " + name) {}
};

// A supertype target cannot be resolved to a declaration.
class UnresolvedSupertypeError : public Error {
public:
    explicit UnresolvedSupertypeError(const std::string& name)
        : Error("unresolved supertype: " + name) {}
};

// A mutator has no applicable site in the given program.
class NoMutationPossibleError : public Error {
public:
    explicit NoMutationPossibleError(const std::string& what) : Error(what) {}
};

// Replaying a mutation record against a program it does not match.
class ReplayMismatchError : public Error {
public:
    explicit ReplayMismatchError(const std::string& what) : Error(what) {}
};

// No toolchain plan can be built for a bundle's language mix.
class ToolchainUnavailableError : public Error {
public:
    explicit ToolchainUnavailableError(const std::string& what) : Error(what) {}
};

// Bundle mixes languages the harness has no compilation strategy for.
class UnsupportedLanguageMixError : public Error {
public:
    explicit UnsupportedLanguageMixError(const std::string& what) : Error(what) {}
};

// Minimization started from a program the oracle no longer flags.
class OracleDriftError : public Error {
public:
    explicit OracleDriftError(const std::string& what) : Error(what) {}
};

// Invalid generator/campaign configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace xlang
