// Encoding schemes and their phase-difference systems.
//
// An L-point scheme stores its first moments as a rational L x 3 matrix in
// units of m, with the physical scale gamma_m = gamma * m (rad per velocity
// unit) factored out. Every pairwise difference row is then exact, and the
// full difference matrix is A = gamma_m * R with R rational.

#ifndef MULTIVENC_ENCODING_HPP
#define MULTIVENC_ENCODING_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "multivenc/rational.hpp"

namespace mvenc {

struct EncodingScheme {
    int L = 0;
    RationalMatrix moments;          // L x 3, rows m_l in units of m
    double gamma_m = 0.0;            // rad per velocity unit
    std::vector<double> magnitudes;  // a_l, length L
    double noise_std = 0.0;          // per-channel complex sigma

    void validate() const; // throws on inconsistent fields
};

// Pair (i, j), 1-based, i > j. Fixed ordering: for j = 1..L-1, for
// i = j+1..L. Every consumer of difference rows uses this listing.
using PairList = std::vector<std::pair<int, int>>;

PairList pair_order(int L);

// Signed pair-incidence matrix B (N x L): row for pair (i, j) carries +1 at
// i and -1 at j, so the difference rows are B * moments.
RationalMatrix pair_incidence(int L);

struct DifferenceSystem {
    RationalMatrix rational;  // N x 3, A = gamma_m * rational
    double gamma_m = 0.0;
    PairList pairs;           // empty for systems given directly as a matrix

    int size() const { return rational.rows(); }

    // A as floating point.
    Eigen::MatrixXd matrix() const;

    // Velocity units per normalized lattice unit: v = (2*pi/gamma_m) * w.
    double velocity_scale() const;
};

// Build the N = L(L-1)/2 row system in the fixed pair order. Throws
// RankError("direction invisible to acquisition") when rank(A) < 3.
DifferenceSystem build_difference_system(const EncodingScheme& s);

// Wrap an explicit matrix (rows x 3 rational part, scale) as a system.
DifferenceSystem direct_system(RationalMatrix rational, double scale);

// How a pre-processor defines its unambiguous range: as the lattice of
// P*A (decoupled systems) or by the +-pi slab inequalities.
enum class RangeKind { Lattice, Slab };

struct Preprocessor {
    RationalMatrix P;  // D x N, 3 <= D <= N
    std::string name;
    RangeKind range_kind = RangeKind::Slab;
};

struct ReducedSystem {
    DifferenceSystem system;  // (P*A) with the original scale
    Preprocessor preproc;
};

// Built-ins: balanced4, balanced5, perturbed4, perturbed5. gamma_m defaults
// to pi/100 and noise_std to 0.2 (SNR 5 at unit magnitude).
EncodingScheme builtin_scheme(const std::string& name);

// Built-ins: p91, p10 (3 x 6) and p5 (4 x 10).
Preprocessor builtin_preprocessor(const std::string& name);

// Apply P to the difference system; throws RankError if rank(P*A) < 3 and
// DimensionError if shapes are incompatible.
ReducedSystem apply_preprocessor(const Preprocessor& p, const DifferenceSystem& d);

} // namespace mvenc

#endif
