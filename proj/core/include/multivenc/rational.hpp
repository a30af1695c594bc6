// Exact rational scalars and matrices. All lattice construction runs on
// these so that congruence arithmetic never touches floating point.
//
// Numerator/denominator are 64-bit; intermediates widen to 128-bit and any
// result that does not fit back into 64 bits raises OverflowError rather
// than wrapping.

#ifndef MULTIVENC_RATIONAL_HPP
#define MULTIVENC_RATIONAL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "multivenc/errors.hpp"

namespace mvenc {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }

    Rational operator-() const;
    Rational abs() const;
    Rational reciprocal() const; // error on zero

    // Largest integer <= value.
    std::int64_t floor() const;

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // "p/q" when den != 1, else "p".
    std::string str() const;

    // Accepts "p", "p/q", and finite decimals like "-0.4".
    static Rational parse(const std::string& text);

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

private:
    static Rational make(__int128 num, __int128 den);

    std::int64_t num_;
    std::int64_t den_; // > 0, gcd(num_, den_) == 1
};

inline Rational& operator+=(Rational& a, const Rational& b) { a = a + b; return a; }
inline Rational& operator-=(Rational& a, const Rational& b) { a = a - b; return a; }
inline Rational& operator*=(Rational& a, const Rational& b) { a = a * b; return a; }

using RationalVector = std::vector<Rational>;
using Rat3 = std::array<Rational, 3>;

// lcm of two nonnegative rationals; a zero input is absorbed.
// For p/q, r/s in lowest terms the result is lcm(p,r)/gcd(q,s).
Rational rational_lcm(const Rational& a, const Rational& b);

// Zero-absorbing element-wise division a (/) b: component i is a/b_i when
// b_i != 0, else 0. Total by construction.
RationalVector modified_divide(const Rational& a, const RationalVector& b);

// lcm over the absolute values of all nonzero entries. Errors on an
// all-zero input ("degenerate column").
Rational generalized_lcm(const RationalVector& b);

class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols) {}
    RationalMatrix(int rows, int cols, std::vector<Rational> entries);

    static RationalMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int r, int c) { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Rational& at(int r, int c) const {
        return entries_[static_cast<std::size_t>(r) * cols_ + c];
    }

    RationalVector row(int r) const;
    RationalVector col(int c) const;

    RationalMatrix operator*(const RationalMatrix& other) const;
    RationalMatrix transposed() const;

    bool operator==(const RationalMatrix& other) const = default;

    // Exact rank via fraction-free Gaussian elimination on a copy.
    int rank() const;

private:
    int rows_;
    int cols_;
    std::vector<Rational> entries_;
};

// Exact determinant of a 3x3 matrix given as columns.
Rational det3(const Rat3& c0, const Rat3& c1, const Rat3& c2);

// Exact solve of the 3x3 system [c0 c1 c2] x = rhs by Cramer's rule.
// Throws RankError when the matrix is singular.
Rat3 solve3(const Rat3& c0, const Rat3& c1, const Rat3& c2, const Rat3& rhs);

// Parse whitespace-separated rational tokens; rows separated by ';'.
std::vector<RationalVector> parse_rational_rows(const std::string& text);

} // namespace mvenc

#endif
