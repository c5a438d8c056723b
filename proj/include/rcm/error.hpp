#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rcm {

enum class ErrorKind {
    InvalidArgument,   // malformed parameters or inputs
    Domain,            // argument outside the support of a formula (e.g. w < 1)
    DivergentIntegral, // min{alpha, tau*alpha} <= d: degree is a.s. infinite
    RegimeRefusal,     // experiment refuses a regime it cannot measure
    Capacity,          // particle or pair budget exceeded
    Convergence,       // numerical integration did not converge
    Io,
    Config,
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::DivergentIntegral: return "divergent_integral";
    case ErrorKind::RegimeRefusal: return "regime_refusal";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

} // namespace rcm
