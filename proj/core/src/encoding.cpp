#include "multivenc/encoding.hpp"

#include <cmath>

namespace mvenc {

namespace {

RationalMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    RationalMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) m.at(r, c) = Rational(rows[r][c]);
    return m;
}

const double kDefaultGammaM = M_PI / 100.0;
const double kDefaultNoiseStd = 0.2; // SNR 5 at unit magnitude

} // namespace

void EncodingScheme::validate() const {
    if (L < 2) throw DimensionError("encoding needs at least 2 points");
    if (moments.rows() != L || moments.cols() != 3) {
        throw DimensionError("moments must be L x 3");
    }
    if (static_cast<int>(magnitudes.size()) != L) {
        throw DimensionError("magnitudes length must equal L");
    }
    for (double a : magnitudes) {
        if (!(a > 0.0)) throw Error("magnitudes must be positive");
    }
    if (!(gamma_m > 0.0)) throw Error("gamma_m must be positive");
    if (noise_std < 0.0) throw Error("noise_std must be nonnegative");
}

PairList pair_order(int L) {
    PairList pairs;
    pairs.reserve(static_cast<std::size_t>(L) * (L - 1) / 2);
    for (int j = 1; j <= L - 1; ++j)
        for (int i = j + 1; i <= L; ++i) pairs.emplace_back(i, j);
    return pairs;
}

RationalMatrix pair_incidence(int L) {
    const PairList pairs = pair_order(L);
    RationalMatrix b(static_cast<int>(pairs.size()), L);
    for (int r = 0; r < b.rows(); ++r) {
        b.at(r, pairs[r].first - 1) = Rational(1);
        b.at(r, pairs[r].second - 1) = Rational(-1);
    }
    return b;
}

Eigen::MatrixXd DifferenceSystem::matrix() const {
    Eigen::MatrixXd a(rational.rows(), rational.cols());
    for (int r = 0; r < rational.rows(); ++r)
        for (int c = 0; c < rational.cols(); ++c) a(r, c) = gamma_m * rational.at(r, c).to_double();
    return a;
}

double DifferenceSystem::velocity_scale() const { return 2.0 * M_PI / gamma_m; }

DifferenceSystem build_difference_system(const EncodingScheme& s) {
    s.validate();
    DifferenceSystem d;
    d.rational = pair_incidence(s.L) * s.moments;
    d.gamma_m = s.gamma_m;
    d.pairs = pair_order(s.L);
    if (d.rational.rank() < 3) {
        throw RankError("direction invisible to acquisition");
    }
    return d;
}

DifferenceSystem direct_system(RationalMatrix rational, double scale) {
    if (rational.cols() != 3) throw DimensionError("difference matrix must have 3 columns");
    if (!(scale > 0.0)) throw Error("scale must be positive");
    DifferenceSystem d;
    d.rational = std::move(rational);
    d.gamma_m = scale;
    if (d.rational.rank() < 3) {
        throw RankError("direction invisible to acquisition");
    }
    return d;
}

EncodingScheme builtin_scheme(const std::string& name) {
    EncodingScheme s;
    s.gamma_m = kDefaultGammaM;
    s.noise_std = kDefaultNoiseStd;

    if (name == "balanced4" || name == "perturbed4") {
        s.L = 4;
        s.moments = from_rows({{-1, -1, -1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1}});
        if (name == "perturbed4") {
            s.moments.at(0, 0) = Rational(-1);
            s.moments.at(0, 1) = Rational(-1, 2);
            s.moments.at(0, 2) = Rational(-1);
        }
    } else if (name == "balanced5" || name == "perturbed5") {
        s.L = 5;
        s.moments =
            from_rows({{0, 0, 0}, {-1, -1, -1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1}});
        if (name == "perturbed5") {
            s.moments.at(0, 0) = Rational(0);
            s.moments.at(0, 1) = Rational(0);
            s.moments.at(0, 2) = Rational(2, 5);
        }
    } else {
        throw ParseError("unknown builtin scheme '" + name + "'");
    }
    s.magnitudes.assign(s.L, 1.0);
    return s;
}

Preprocessor builtin_preprocessor(const std::string& name) {
    Preprocessor p;
    p.name = name;
    if (name == "p91") {
        p.P = from_rows({{1, 0, 0, 0, 0, -1}, {1, 0, 0, 0, 0, 1}, {0, 0, 1, 1, 0, 0}});
        p.range_kind = RangeKind::Lattice;
    } else if (name == "p10") {
        p.P = RationalMatrix(3, 6);
        for (int i = 0; i < 3; ++i) p.P.at(i, i) = Rational(1);
        p.range_kind = RangeKind::Slab;
    } else if (name == "p5") {
        p.P = RationalMatrix(4, 10);
        for (int i = 0; i < 4; ++i) p.P.at(i, i) = Rational(1);
        p.range_kind = RangeKind::Slab;
    } else {
        throw ParseError("unknown builtin preprocessor '" + name + "'");
    }
    return p;
}

ReducedSystem apply_preprocessor(const Preprocessor& p, const DifferenceSystem& d) {
    if (p.P.cols() != d.size()) {
        throw DimensionError("preprocessor has " + std::to_string(p.P.cols()) +
                             " columns but the system has " + std::to_string(d.size()) +
                             " phase differences");
    }
    if (p.P.rows() < 3) throw DimensionError("preprocessor needs at least 3 rows");
    ReducedSystem out;
    out.system.rational = p.P * d.rational;
    out.system.gamma_m = d.gamma_m;
    out.preproc = p;
    if (out.system.rational.rank() < 3) {
        throw RankError("pre-processed system has rank < 3");
    }
    return out;
}

} // namespace mvenc
