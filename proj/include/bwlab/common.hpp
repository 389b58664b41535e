#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bwlab {

inline constexpr const char* version = "0.2.0";

// Bad arguments or malformed data supplied by a caller / the CLI user.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A structural check that is supposed to hold failed at runtime.
struct verification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation was refused because it exceeds the configured budget.
struct resource_guard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int popcount64(std::uint64_t x) { return __builtin_popcountll(x); }
inline int parity64(std::uint64_t x) { return __builtin_parityll(x); }

} // namespace bwlab
