// Ambiguity lattice of A v = 0 mod 2*pi and its fundamental parallelepiped.
//
// All congruence work happens in normalized units w = v * gamma_m / (2*pi),
// where the lattice condition becomes R w integer for the rational part R.
// Results carry both the exact rational description and velocity-unit
// floating views.

#ifndef MULTIVENC_LATTICE_HPP
#define MULTIVENC_LATTICE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "multivenc/encoding.hpp"
#include "multivenc/rational.hpp"

namespace mvenc {

struct SearchBox {
    Rat3 half_extents_w;     // per-dimension half extent, normalized units
    double scale_v = 1.0;    // velocity units per normalized unit

    Eigen::Vector3d half_extents() const {
        return scale_v * Eigen::Vector3d(half_extents_w[0].to_double(),
                                         half_extents_w[1].to_double(),
                                         half_extents_w[2].to_double());
    }
};

// Per-dimension half extent lcm-bar(2*pi (/) A_col), computed exactly over
// the rational part. Throws RankError on a zero column.
SearchBox compute_search_box(const DifferenceSystem& d);

struct LatticePoints {
    std::vector<Rat3> points_w;  // sorted lexicographically, includes origin
    double scale_v = 1.0;

    std::size_t size() const { return points_w.size(); }
    Eigen::Vector3d point(std::size_t i) const {
        return scale_v * Eigen::Vector3d(points_w[i][0].to_double(),
                                         points_w[i][1].to_double(),
                                         points_w[i][2].to_double());
    }
};

// All lattice points inside the (closed) search box, found exactly: pick 3
// independent rows, enumerate their wrap integers within the floor bounds,
// solve each 3x3 rational system, and keep solutions that satisfy every
// remaining row's congruence.
LatticePoints enumerate_lattice_points(const DifferenceSystem& d, const SearchBox& box);

struct Parallelepiped {
    Eigen::Vector3d origin = Eigen::Vector3d::Zero();
    Eigen::Matrix3d edges = Eigen::Matrix3d::Identity(); // columns

    double volume() const { return std::abs(edges.determinant()); }
    std::array<Eigen::Vector3d, 8> vertices() const;
    // Coefficient test with slack tol on the [0, 1] range.
    bool contains(const Eigen::Vector3d& v, double tol = 1e-9) const;
};

struct AmbiguityLattice {
    RationalMatrix basis_w;      // 3 x 3, columns are basis vectors (normalized units)
    Rational det_w;              // |det basis_w|, exact
    double scale_v = 1.0;
    double condition_number = 1.0;

    Eigen::Matrix3d basis() const;           // velocity units
    double volume() const;                   // |det| in velocity units
    Rat3 basis_column_w(int c) const;

    Parallelepiped fundamental() const;      // anchored at the origin
    Parallelepiped centered() const;         // shifted to be origin-centered

    // v - V * floor(V^-1 v), the representative with coefficients in [0,1).
    Eigen::Vector3d reduce(const Eigen::Vector3d& v) const;
    // Exact counterpart in normalized units.
    Rat3 reduce_exact(const Rat3& w) const;
};

// Minimum-|det| triple of enumerated points, ties broken by smallest
// spectral condition number and then lexicographically. Verifies that the
// chosen triple generates every enumerated point.
AmbiguityLattice extract_basis(const LatticePoints& points);

// Convenience: box -> points -> basis.
AmbiguityLattice ambiguity_lattice(const DifferenceSystem& d);

struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

// Monte Carlo volume of {v : -pi <= (P A v)_i <= pi for all i} sampled
// uniformly over a bounding box. Throws RankError when the slab normals do
// not span (unbounded region).
VolumeEstimate slab_region_volume(const Preprocessor& p, const DifferenceSystem& d,
                                  std::uint64_t samples, std::uint64_t seed);

} // namespace mvenc

#endif
