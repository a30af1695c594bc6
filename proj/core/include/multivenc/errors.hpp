#ifndef MULTIVENC_ERRORS_HPP
#define MULTIVENC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mvenc {

// Base class for all library failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed config files, matrices, or numeric text.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Checked integer arithmetic left the representable range. Entries that
// trigger this are effectively incommensurable for exact lattice work.
class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& msg) : Error(msg) {}
};

// Rank-deficient systems: some velocity direction is invisible.
class RankError : public Error {
public:
    explicit RankError(const std::string& msg) : Error(msg) {}
};

// Incompatible matrix/vector shapes.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

} // namespace mvenc

#endif
