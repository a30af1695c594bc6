#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "multivenc/estimator.hpp"

using namespace mvenc;
using std::complex;

namespace {

Eigen::VectorXi round_wraps(const Eigen::VectorXd& phi_true, const Eigen::VectorXd& wrapped) {
    Eigen::VectorXi k(phi_true.size());
    for (int i = 0; i < k.size(); ++i) {
        k(i) = static_cast<int>(std::lround((phi_true(i) - wrapped(i)) / (2.0 * M_PI)));
    }
    return k;
}

bool same_ints(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) return false;
    }
    return true;
}

// Independent construction of the first-order covariance straight from the
// pair list: zeta_l = sigma^2 / (2 a_l^2 c); cov of two pair rows is the sum
// of zeta over shared points with a sign from the incidence orientation.
Eigen::MatrixXd covariance_oracle(const EncodingScheme& s, int coils) {
    const PairList pairs = pair_order(s.L);
    const int n = static_cast<int>(pairs.size());
    std::vector<double> zeta(s.L);
    for (int l = 0; l < s.L; ++l) {
        zeta[l] = s.noise_std * s.noise_std /
                  (2.0 * s.magnitudes[l] * s.magnitudes[l] * coils);
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            auto sgn = [](int pt, const std::pair<int, int>& p) {
                if (pt == p.first) return 1;
                if (pt == p.second) return -1;
                return 0;
            };
            double sum = 0.0;
            for (int l = 1; l <= s.L; ++l) {
                sum += sgn(l, pairs[r]) * sgn(l, pairs[c]) * zeta[l - 1];
            }
            cov(r, c) = sum;
        }
    }
    return cov;
}

} // namespace

TEST_CASE("wrap_phase lands in (-pi, pi]") {
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_phase(-M_PI) == doctest::Approx(M_PI));   // boundary maps up
    CHECK(wrap_phase(3.0 * M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_phase(1.5 * M_PI) == doctest::Approx(-0.5 * M_PI));
    CHECK(wrap_phase(-1.5 * M_PI) == doctest::Approx(0.5 * M_PI));
    for (double x : {0.1, 2.9, -2.9, 100.0, -100.0, 12345.678}) {
        const double w = wrap_phase(x);
        CHECK(w > -M_PI);
        CHECK(w <= M_PI);
        CHECK(std::remainder(x - w, 2.0 * M_PI) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("phase differences of the quarter-turn example") {
    // Single coil, y_l = i^(l-1): every adjacent pair differs by pi/2.
    Measurements y{{complex<double>(1, 0), complex<double>(0, 1), complex<double>(-1, 0),
                    complex<double>(0, -1)}};
    const PhaseDifferences pd = phase_differences(y);
    REQUIRE(pd.values.size() == 6);
    const double h = 0.5 * M_PI;
    const double expect[6] = {h, M_PI, -h, h, M_PI, h};  // pairs 21,31,41,32,42,43
    for (int i = 0; i < 6; ++i) CHECK(pd.values(i) == doctest::Approx(expect[i]).epsilon(1e-12));
    CHECK(pd.pairs == pair_order(4));
}

TEST_CASE("coil combination is magnitude-weighted and phase-consistent") {
    // Two coils with common phases but different gains and coil phases: the
    // conjugate products align, so the combined estimate matches coil one.
    const double ph[4] = {0.3, -1.2, 2.0, 0.7};
    Measurements y(2, std::vector<complex<double>>(4));
    for (int l = 0; l < 4; ++l) {
        y[0][l] = std::polar(1.0, ph[l]);
        y[1][l] = std::polar(2.5, ph[l] + 0.9);  // coil phase offsets cancel in pairs
    }
    const PhaseDifferences pd = phase_differences(y);
    const PhaseDifferences solo = phase_differences({y[0]});
    for (int i = 0; i < 6; ++i) CHECK(pd.values(i) == doctest::Approx(solo.values(i)));
}

TEST_CASE("zero conjugate product is rejected") {
    Measurements y{{complex<double>(1, 0), complex<double>(0, 0), complex<double>(1, 0)}};
    CHECK_THROWS_WITH_AS(phase_differences(y),
                         "indeterminate phase: zero conjugate product", Error);
}

TEST_CASE("noise covariance structure") {
    SUBCASE("three-point unit-magnitude scheme") {
        EncodingScheme s;
        s.L = 3;
        s.moments = RationalMatrix(3, 3);
        s.moments.at(0, 0) = Rational(1);
        s.moments.at(1, 1) = Rational(1);
        s.moments.at(2, 2) = Rational(1);
        s.gamma_m = M_PI / 100.0;
        s.magnitudes = {1.0, 1.0, 1.0};
        s.noise_std = 0.2;
        const NoiseModel nm = noise_covariance(s);
        const double z = 0.2 * 0.2 / 2.0;
        Eigen::Matrix3d want;
        want << 2, 1, -1, 1, 2, 1, -1, 1, 2;  // pairs (2,1),(3,1),(3,2)
        CHECK(nm.sigma.isApprox(z * want, 1e-12));
        CHECK(nm.rank == 2);  // L - 1
    }
    SUBCASE("matches the incidence oracle for the built-ins") {
        for (const char* name : {"balanced4", "perturbed4", "balanced5"}) {
            EncodingScheme s = builtin_scheme(name);
            s.magnitudes[1] = 0.6;  // exercise non-uniform gains
            for (int coils : {1, 4}) {
                const NoiseModel nm = noise_covariance(s, coils);
                CHECK(nm.sigma.isApprox(covariance_oracle(s, coils), 1e-12));
                CHECK(nm.rank == s.L - 1);
            }
        }
    }
    SUBCASE("pseudo-inverse identities") {
        const NoiseModel nm = noise_covariance(builtin_scheme("balanced4"));
        const Eigen::MatrixXd& s = nm.sigma;
        const Eigen::MatrixXd& p = nm.pseudo_inverse;
        CHECK((s * p * s).isApprox(s, 1e-9));
        CHECK((p * s * p).isApprox(p, 1e-9));
        CHECK(p.isApprox(p.transpose(), 1e-12));
        CHECK((s * p).isApprox((s * p).transpose(), 1e-9));
    }
    SUBCASE("quadrupling coils scales the covariance by 1/4") {
        const EncodingScheme s = builtin_scheme("balanced4");
        const NoiseModel one = noise_covariance(s, 1);
        const NoiseModel four = noise_covariance(s, 4);
        CHECK(four.sigma.isApprox(0.25 * one.sigma, 1e-12));
    }
}

TEST_CASE("weighted solve recovers the velocity at the true wraps") {
    const DifferenceSystem d = build_difference_system(builtin_scheme("balanced4"));
    const Eigen::MatrixXd a = d.matrix();
    const NoiseModel nm = noise_covariance(builtin_scheme("balanced4"));

    SUBCASE("interior velocity") {
        const Eigen::Vector3d v(30.0, -20.0, 10.0);
        const Eigen::VectorXd phi_true = a * v;
        Eigen::VectorXd wrapped(phi_true.size());
        for (int i = 0; i < wrapped.size(); ++i) wrapped(i) = wrap_phase(phi_true(i));
        const Eigen::VectorXi k = round_wraps(phi_true, wrapped);
        CHECK(k(5) == -1);  // row (4,3) sits exactly on the -pi edge
        const WeightedSolution sol = weighted_solve(d, wrapped, k, nm);
        CHECK(sol.v.isApprox(v, 1e-9));
        CHECK(sol.cost == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("identity weights give the plain least squares answer") {
        const Eigen::Vector3d v(-77.0, 12.5, 41.0);
        const Eigen::VectorXd phi_true = a * v;
        Eigen::VectorXd wrapped(phi_true.size());
        for (int i = 0; i < wrapped.size(); ++i) wrapped(i) = wrap_phase(phi_true(i));
        const WeightedSolution sol =
            weighted_solve(d, wrapped, round_wraps(phi_true, wrapped),
                           NoiseModel::identity(static_cast<int>(wrapped.size())));
        CHECK(sol.v.isApprox(v, 1e-9));
    }
}

TEST_CASE("noise sensitivity") {
    SUBCASE("diagonal closed form") {
        // A = 2 pi diag(1, 1/2, 1/3), identity covariance:
        // det(A^T A) = (2 pi)^6 / 36, so eta = 36 / (2 pi)^6.
        RationalMatrix r(3, 3);
        r.at(0, 0) = Rational(1);
        r.at(1, 1) = Rational(1, 2);
        r.at(2, 2) = Rational(1, 3);
        const DifferenceSystem d = direct_system(r, 2.0 * M_PI);
        const double eta = noise_sensitivity(d, NoiseModel::identity(3));
        CHECK(eta == doctest::Approx(36.0 / std::pow(2.0 * M_PI, 6)).epsilon(1e-12));
    }
    SUBCASE("covariance scale c lifts eta by c^3") {
        const DifferenceSystem d = build_difference_system(builtin_scheme("balanced4"));
        const NoiseModel nm = noise_covariance(builtin_scheme("balanced4"));
        const NoiseModel scaled = NoiseModel::from_sigma(2.5 * nm.sigma);
        const double base = noise_sensitivity(d, nm);
        CHECK(noise_sensitivity(d, scaled) ==
              doctest::Approx(2.5 * 2.5 * 2.5 * base).epsilon(1e-9));
    }
    SUBCASE("pre-processing never improves eta") {
        const DifferenceSystem d = build_difference_system(builtin_scheme("balanced4"));
        const NoiseModel nm = noise_covariance(builtin_scheme("balanced4"));
        const double eta = noise_sensitivity(d, nm);
        for (const char* name : {"p91", "p10"}) {
            const double eta_p = preprocessed_sensitivity(builtin_preprocessor(name), d, nm);
            CHECK(eta_p >= eta * (1.0 - 1e-9));
        }
        const DifferenceSystem d5 = build_difference_system(builtin_scheme("balanced5"));
        const NoiseModel nm5 = noise_covariance(builtin_scheme("balanced5"));
        CHECK(preprocessed_sensitivity(builtin_preprocessor("p5"), d5, nm5) >=
              noise_sensitivity(d5, nm5) * (1.0 - 1e-9));
    }
    SUBCASE("an invertible square P changes nothing") {
        const DifferenceSystem d = build_difference_system(builtin_scheme("balanced4"));
        const NoiseModel nm = noise_covariance(builtin_scheme("balanced4"));
        Preprocessor ident;
        ident.name = "identity";
        ident.P = RationalMatrix::identity(6);
        CHECK(preprocessed_sensitivity(ident, d, nm) ==
              doctest::Approx(noise_sensitivity(d, nm)).epsilon(1e-9));
    }
}

TEST_CASE("wrap search") {
    SUBCASE("unit lattice, interior velocity, exact recovery") {
        const DifferenceSystem d = direct_system(RationalMatrix::identity(3), 2.0 * M_PI);
        const AmbiguityLattice lat = ambiguity_lattice(d);
        const Eigen::Vector3d v(0.3, -0.4, 0.1);
        PhaseDifferences pd;
        pd.values = (d.matrix() * v).unaryExpr([](double x) { return wrap_phase(x); });
        const VelocityEstimate est =
            wrap_search(d, pd, NoiseModel::identity(3), lat.centered());
        CHECK(est.v_hat.isApprox(v, 1e-12));
        CHECK(same_ints(est.k_hat, Eigen::VectorXi::Zero(3)));
        CHECK(est.cost == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("velocity outside the region resolves to its reduced alias") {
        const DifferenceSystem d = direct_system(RationalMatrix::identity(3), 2.0 * M_PI);
        const AmbiguityLattice lat = ambiguity_lattice(d);
        const Eigen::Vector3d v(0.7, -0.4, 1.2);
        PhaseDifferences pd;
        pd.values = (d.matrix() * v).unaryExpr([](double x) { return wrap_phase(x); });
        const VelocityEstimate est =
            wrap_search(d, pd, NoiseModel::identity(3), lat.centered());
        CHECK(est.v_hat.isApprox(Eigen::Vector3d(-0.3, -0.4, 0.2), 1e-9));
    }
    SUBCASE("balanced4: noiseless recovery over random interior velocities") {
        const EncodingScheme s = builtin_scheme("balanced4");
        const DifferenceSystem d = build_difference_system(s);
        const AmbiguityLattice lat = ambiguity_lattice(d);
        const NoiseModel nm = noise_covariance(s);
        const Eigen::MatrixXd a = d.matrix();
        const Parallelepiped region = lat.centered();
        std::mt19937_64 gen(41);
        std::uniform_real_distribution<double> coef(0.02, 0.98);
        for (int trial = 0; trial < 25; ++trial) {
            const Eigen::Vector3d alpha(coef(gen), coef(gen), coef(gen));
            const Eigen::Vector3d v = region.origin + region.edges * alpha;
            const Eigen::VectorXd phi_true = a * v;
            PhaseDifferences pd;
            pd.values = phi_true.unaryExpr([](double x) { return wrap_phase(x); });
            const VelocityEstimate est = wrap_search(d, pd, nm, region);
            CHECK((est.v_hat - v).norm() < 1e-6);
            const Eigen::VectorXi k_true = round_wraps(phi_true, pd.values);
            CHECK(same_ints(est.k_hat, k_true));
        }
    }
    SUBCASE("small phase noise keeps the wrap decision") {
        const EncodingScheme s = builtin_scheme("balanced4");
        const DifferenceSystem d = build_difference_system(s);
        const AmbiguityLattice lat = ambiguity_lattice(d);
        const NoiseModel nm = noise_covariance(s);
        const Parallelepiped region = lat.centered();
        const Eigen::Vector3d v =
            region.origin + region.edges * Eigen::Vector3d(0.45, 0.55, 0.35);
        const Eigen::VectorXd phi_true = d.matrix() * v;
        Eigen::VectorXd wrapped = phi_true.unaryExpr([](double x) { return wrap_phase(x); });
        const Eigen::VectorXi k_true = round_wraps(phi_true, wrapped);
        std::mt19937_64 gen(43);
        std::uniform_real_distribution<double> eps(-0.1, 0.1);
        for (int trial = 0; trial < 10; ++trial) {
            PhaseDifferences pd;
            pd.values = wrapped;
            for (int i = 0; i < pd.values.size(); ++i) {
                pd.values(i) = wrap_phase(pd.values(i) + eps(gen));
            }
            const VelocityEstimate est = wrap_search(d, pd, nm, region);
            CHECK(same_ints(est.k_hat, k_true));
            CHECK((est.v_hat - v).norm() < 5.0);
        }
    }
    SUBCASE("estimate carries the parameter covariance") {
        const EncodingScheme s = builtin_scheme("balanced4");
        const DifferenceSystem d = build_difference_system(s);
        const NoiseModel nm = noise_covariance(s);
        PhaseDifferences pd;
        pd.values = Eigen::VectorXd::Zero(6);
        const VelocityEstimate est =
            wrap_search(d, pd, nm, ambiguity_lattice(d).centered());
        const Eigen::MatrixXd a = d.matrix();
        const Eigen::Matrix3d info = a.transpose() * nm.pseudo_inverse * a;
        CHECK(est.covariance.isApprox(info.inverse(), 1e-9));
    }
}
