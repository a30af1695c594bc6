#include "multivenc/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace mvenc {

namespace {

using i128 = __int128;

constexpr std::int64_t kMax64 = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kMin64 = std::numeric_limits<std::int64_t>::min();

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(i128 x) {
    if (x > static_cast<i128>(kMax64) || x < static_cast<i128>(kMin64)) {
        throw OverflowError("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(x);
}

} // namespace

Rational Rational::make(i128 num, i128 den) {
    if (den == 0) throw Error("rational with zero denominator");
    if (num == 0) return Rational();
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i128 g = gcd128(num, den);
    Rational r;
    r.num_ = narrow(num / g);
    r.den_ = narrow(den / g);
    return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
    *this = make(static_cast<i128>(num), static_cast<i128>(den));
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<i128>(num_));
    r.den_ = den_;
    return r;
}

Rational Rational::abs() const { return num_ < 0 ? -*this : *this; }

Rational Rational::reciprocal() const {
    if (num_ == 0) throw Error("reciprocal of zero");
    return make(static_cast<i128>(den_), static_cast<i128>(num_));
}

std::int64_t Rational::floor() const {
    if (num_ >= 0) return num_ / den_;
    return -((-num_ + den_ - 1) / den_);
}

std::string Rational::str() const {
    std::ostringstream os;
    os << num_;
    if (den_ != 1) os << '/' << den_;
    return os.str();
}

Rational operator+(const Rational& a, const Rational& b) {
    const i128 n = static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_;
    const i128 d = static_cast<i128>(a.den_) * b.den_;
    return Rational::make(n, d);
}

Rational operator-(const Rational& a, const Rational& b) {
    const i128 n = static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_;
    const i128 d = static_cast<i128>(a.den_) * b.den_;
    return Rational::make(n, d);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::make(static_cast<i128>(a.num_) * b.num_,
                          static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational division by zero");
    return Rational::make(static_cast<i128>(a.num_) * b.den_,
                          static_cast<i128>(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

Rational Rational::parse(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t");
    std::size_t end = text.find_last_not_of(" \t");
    if (begin == std::string::npos) throw ParseError("empty rational token");
    const std::string s = text.substr(begin, end - begin + 1);

    auto parse_int = [](const std::string& t) -> std::int64_t {
        if (t.empty()) throw ParseError("empty integer in rational");
        std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
        if (i == t.size()) throw ParseError("sign with no digits in rational");
        for (; i < t.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) {
                throw ParseError("invalid rational token '" + t + "'");
            }
        }
        errno = 0;
        char* endp = nullptr;
        const long long v = std::strtoll(t.c_str(), &endp, 10);
        if (errno == ERANGE) throw OverflowError("integer literal out of range: " + t);
        return v;
    };

    const std::size_t slash = s.find('/');
    if (slash != std::string::npos) {
        const std::int64_t p = parse_int(s.substr(0, slash));
        const std::int64_t q = parse_int(s.substr(slash + 1));
        if (q == 0) throw ParseError("zero denominator in '" + s + "'");
        return Rational(p, q);
    }

    const std::size_t dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ipart = s.substr(0, dot);
        const std::string fpart = s.substr(dot + 1);
        if (fpart.size() > 18) {
            throw OverflowError("decimal literal has too many digits: " + s);
        }
        bool neg = false;
        if (!ipart.empty() && (ipart[0] == '+' || ipart[0] == '-')) {
            neg = ipart[0] == '-';
            ipart = ipart.substr(1);
        }
        if (ipart.empty()) ipart = "0";
        i128 den = 1;
        for (std::size_t i = 0; i < fpart.size(); ++i) den *= 10;
        const i128 n = static_cast<i128>(parse_int(ipart)) * den +
                       (fpart.empty() ? 0 : parse_int(fpart));
        return make(neg ? -n : n, den);
    }

    return Rational(parse_int(s));
}

Rational rational_lcm(const Rational& a, const Rational& b) {
    if (a.is_negative() || b.is_negative()) throw Error("rational_lcm requires nonnegative inputs");
    if (a.is_zero() && b.is_zero()) throw Error("undefined lcm");
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // lcm(p/q, r/s) = lcm(p, r) / gcd(q, s)
    const i128 p = a.num(), q = a.den(), r = b.num(), s = b.den();
    const i128 lcm_num = p / gcd128(p, r) * r;
    const i128 gcd_den = gcd128(q, s);
    return Rational(narrow(lcm_num), narrow(gcd_den));
}

RationalVector modified_divide(const Rational& a, const RationalVector& b) {
    RationalVector out;
    out.reserve(b.size());
    for (const Rational& bi : b) {
        out.push_back(bi.is_zero() ? Rational() : a / bi);
    }
    return out;
}

Rational generalized_lcm(const RationalVector& b) {
    Rational acc;
    bool seen = false;
    for (const Rational& bi : b) {
        if (bi.is_zero()) continue;
        acc = seen ? rational_lcm(acc, bi.abs()) : bi.abs();
        seen = true;
    }
    if (!seen) throw RankError("degenerate column: all entries zero");
    return acc;
}

RationalMatrix::RationalMatrix(int rows, int cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != static_cast<std::size_t>(rows) * cols) {
        throw DimensionError("entry count does not match matrix shape");
    }
}

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

RationalVector RationalMatrix::row(int r) const {
    RationalVector out(cols_);
    for (int c = 0; c < cols_; ++c) out[c] = at(r, c);
    return out;
}

RationalVector RationalMatrix::col(int c) const {
    RationalVector out(rows_);
    for (int r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& other) const {
    if (cols_ != other.rows_) throw DimensionError("matrix product shape mismatch");
    RationalMatrix out(rows_, other.cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < other.cols_; ++c) {
            Rational acc;
            for (int k = 0; k < cols_; ++k) acc += at(r, k) * other.at(k, c);
            out.at(r, c) = acc;
        }
    }
    return out;
}

RationalMatrix RationalMatrix::transposed() const {
    RationalMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
    return out;
}

int RationalMatrix::rank() const {
    RationalMatrix m = *this;
    int rank = 0;
    for (int c = 0; c < cols_ && rank < rows_; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows_; ++r) {
            if (!m.at(r, c).is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        for (int k = 0; k < cols_; ++k) std::swap(m.at(rank, k), m.at(pivot, k));
        for (int r = rank + 1; r < rows_; ++r) {
            if (m.at(r, c).is_zero()) continue;
            const Rational f = m.at(r, c) / m.at(rank, c);
            for (int k = c; k < cols_; ++k) m.at(r, k) -= f * m.at(rank, k);
        }
        ++rank;
    }
    return rank;
}

Rational det3(const Rat3& c0, const Rat3& c1, const Rat3& c2) {
    return c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) -
           c1[0] * (c0[1] * c2[2] - c0[2] * c2[1]) +
           c2[0] * (c0[1] * c1[2] - c0[2] * c1[1]);
}

Rat3 solve3(const Rat3& c0, const Rat3& c1, const Rat3& c2, const Rat3& rhs) {
    const Rational d = det3(c0, c1, c2);
    if (d.is_zero()) throw RankError("singular 3x3 system");
    return Rat3{det3(rhs, c1, c2) / d, det3(c0, rhs, c2) / d, det3(c0, c1, rhs) / d};
}

std::vector<RationalVector> parse_rational_rows(const std::string& text) {
    std::vector<RationalVector> rows;
    std::string chunk;
    std::istringstream rowstream(text);
    while (std::getline(rowstream, chunk, ';')) {
        std::istringstream tok(chunk);
        RationalVector row;
        std::string t;
        while (tok >> t) row.push_back(Rational::parse(t));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace mvenc
