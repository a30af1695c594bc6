// Joint velocity estimation from all phase differences: noise covariance of
// the conjugate-multiply differences, weighted least squares at fixed wrap
// integers, wrap-integer search over a fundamental parallelepiped, and the
// noise sensitivity with and without pre-processing.

#ifndef MULTIVENC_ESTIMATOR_HPP
#define MULTIVENC_ESTIMATOR_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "multivenc/encoding.hpp"
#include "multivenc/lattice.hpp"

namespace mvenc {

// Measurements per coil: outer index coil, inner index encoding point.
using Measurements = std::vector<std::vector<std::complex<double>>>;

struct PhaseDifferences {
    Eigen::VectorXd values;  // N entries in (-pi, pi]
    PairList pairs;
};

// Angle of the coil-summed conjugate product for each pair, wrapped to
// (-pi, pi]. Throws on an exactly zero product ("indeterminate phase").
PhaseDifferences phase_differences(const Measurements& y);

struct NoiseModel {
    Eigen::MatrixXd sigma;         // N x N
    Eigen::MatrixXd pseudo_inverse;
    int rank = 0;

    static NoiseModel identity(int n);
    static NoiseModel from_sigma(const Eigen::MatrixXd& sigma);
};

// First-order model: Sigma = B diag(zeta_l) B^T with per-point phase
// variance zeta_l = sigma^2 / (2 a_l^2 * coils) and B the signed
// pair-incidence matrix. Pseudo-inverse by eigendecomposition with relative
// threshold 1e-10.
NoiseModel noise_covariance(const EncodingScheme& s, int coils = 1);

struct WeightedSolution {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    double cost = 0.0;
};

// v = (A^T S+ A)^-1 A^T S+ (phi + 2 pi k); cost is the S+-weighted residual
// quadratic form.
WeightedSolution weighted_solve(const DifferenceSystem& d, const Eigen::VectorXd& phi,
                                const Eigen::VectorXi& k, const NoiseModel& nm);

struct VelocityEstimate {
    Eigen::Vector3d v_hat = Eigen::Vector3d::Zero();
    Eigen::VectorXi k_hat;
    double cost = 0.0;
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero(); // (A^T S+ A)^-1
};

// Candidate wrap integers come from rounding (A u - phi) / 2 pi over a grid
// of u covering the region; the grid spacing keeps every wrap branch that
// intersects the region reachable. Candidates whose estimate leaves the
// region are discarded. Ties in cost prefer the smaller-norm estimate, then
// lexicographic order.
VelocityEstimate wrap_search(const DifferenceSystem& d, const PhaseDifferences& phi,
                             const NoiseModel& nm, const Parallelepiped& region);

// eta = 1 / det(A^T S+ A): volume measure of the estimate's uncertainty
// ellipsoid.
double noise_sensitivity(const DifferenceSystem& d, const NoiseModel& nm);

// eta_P = 1 / det(A^T P^T (P S P^T)+ P A). Never better than eta.
double preprocessed_sensitivity(const Preprocessor& p, const DifferenceSystem& d,
                                const NoiseModel& nm);

// Wrap x into (-pi, pi].
double wrap_phase(double x);

} // namespace mvenc

#endif
