#ifndef HOMFORGE_HEADER_ERRORS_HH
#define HOMFORGE_HEADER_ERRORS_HH 1

#include <cstddef>
#include <stdexcept>
#include <string>

namespace homforge
{
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Malformed input files or identifiers.
    class ParseError : public Error
    {
    public:
        using Error::Error;
    };

    /// A structural precondition of an operation does not hold.
    class InvalidInput : public Error
    {
    public:
        using Error::Error;
    };

    class SignatureMismatch : public InvalidInput
    {
    public:
        using InvalidInput::InvalidInput;
    };

    /// A map handed to an operation that requires a homomorphism does not validate.
    class InvalidHomomorphism : public InvalidInput
    {
    public:
        using InvalidInput::InvalidInput;
    };

    /// A canonical query would have a free variable that occurs in no atom.
    class UnsafeQuery : public InvalidInput
    {
    public:
        using InvalidInput::InvalidInput;
    };

    /// Resource limits: product size guard, enumeration cap, oracle size bound.
    class ResourceLimit : public Error
    {
    public:
        ResourceLimit(const std::string & what, std::size_t requested, std::size_t limit) :
            Error(what + " (requested " + std::to_string(requested) + ", limit " + std::to_string(limit) + ")"),
            _requested(requested),
            _limit(limit)
        {
        }

        auto requested() const -> std::size_t { return _requested; }
        auto limit() const -> std::size_t { return _limit; }

    private:
        std::size_t _requested;
        std::size_t _limit;
    };

    class GuardExceeded : public ResourceLimit
    {
    public:
        using ResourceLimit::ResourceLimit;
    };

    class CapExceeded : public ResourceLimit
    {
    public:
        using ResourceLimit::ResourceLimit;
    };
}

#endif
