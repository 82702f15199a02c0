#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "meanscope/posdef.hpp"

using namespace meanscope;

TEST_SUITE("posdef") {

TEST_CASE("symmetric grids") {
    const std::vector<double> g = make_symmetric_grid(2.0, 4);
    REQUIRE(g.size() == 5);  // 2*floor(4/2) + 1
    CHECK(g[0] == doctest::Approx(-2.0));
    CHECK(g[1] == doctest::Approx(-1.0));
    CHECK(g[2] == 0.0);
    CHECK(g[3] == doctest::Approx(1.0));
    CHECK(g[4] == doctest::Approx(2.0));

    const std::vector<double> odd = make_symmetric_grid(3.0, 5);
    CHECK(odd.size() == 5);
    CHECK(odd.back() == doctest::Approx(3.0));

    CHECK_THROWS_AS(make_symmetric_grid(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_symmetric_grid(1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_symmetric_grid(1.0, 1000), std::invalid_argument);
}

TEST_CASE("jittered grids are symmetric and deterministic") {
    const std::vector<double> a = make_jittered_grid(5.0, 8, 99);
    const std::vector<double> b = make_jittered_grid(5.0, 8, 99);
    const std::vector<double> c = make_jittered_grid(5.0, 8, 100);
    REQUIRE(a.size() == 9);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a[4] == 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == -a[a.size() - 1 - i]);
        if (i > 0) CHECK(a[i] > a[i - 1]);
    }
}

TEST_CASE("gram matrix structure and the all-ones example") {
    // Constant phi = 1 on 3 points: Gram is all ones, eigenvalues {3, 0, 0}.
    const std::vector<double> pts = {-1.0, 0.0, 1.0};
    const Eigen::MatrixXd g = gram_matrix([](double) { return 1.0; }, pts);
    REQUIRE(g.rows() == 3);
    CHECK(g == g.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    CHECK(es.eigenvalues()[2] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(std::abs(es.eigenvalues()[0]) < 1e-14);
    CHECK(std::abs(es.eigenvalues()[1]) < 1e-14);

    // Entries are phi of the gaps, computed once per distinct gap.
    const Eigen::MatrixXd h =
        gram_matrix([](double t) { return 1.0 / std::cosh(t / 2); }, pts);
    CHECK(h(0, 0) == 1.0);
    CHECK(h(0, 1) == doctest::Approx(1.0 / std::cosh(0.5)));
    CHECK(h(0, 2) == doctest::Approx(1.0 / std::cosh(1.0)));
    CHECK(h(0, 1) == h(1, 2));  // equal gaps share one evaluation, bitwise
}

TEST_CASE("certification of reference kernels") {
    for (auto phi : {phi_inv_cosh(1.0), phi_z_over_sinh(1.0), phi_tanh_over_z(1.0),
                     phi_sinh_ratio(0.5, 1.0)}) {
        const GramReport r = check_positive_definite("ref", phi);
        CHECK(r.verdict == PdVerdict::CertifiedOnGrids);
        CHECK(r.phi0 == doctest::Approx(1.0));
        CHECK(r.min_eigenvalue > -r.threshold);
        CHECK(r.grids.size() >= 4);
    }
}

TEST_CASE("cosh is refuted with a valid witness") {
    const GramReport r = check_positive_definite(
        "cosh", [](double t) { return std::cosh(t); }, GridSpec{});
    CHECK(r.verdict == PdVerdict::Refuted);
    CHECK(r.min_eigenvalue < -r.threshold);
    REQUIRE(!r.witness_points.empty());
    // The witness grid itself must carry a negative Gram eigenvalue.
    const Eigen::MatrixXd g =
        gram_matrix([](double t) { return std::cosh(t); }, r.witness_points);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    CHECK(es.eigenvalues()[0] < -r.threshold);
}

TEST_CASE("non-even and non-positive functions are rejected") {
    CHECK_THROWS_AS(
        check_positive_definite("shifted", [](double t) { return t + 10.0; }, GridSpec{}),
        std::domain_error);
    CHECK_THROWS_AS(
        check_positive_definite("negative", [](double t) { return -1.0 - t * t; }, GridSpec{}),
        std::domain_error);
    CHECK_THROWS_AS(check_positive_definite(
                        "zero-at-origin", [](double t) { return t * t; }, GridSpec{}),
                    std::domain_error);
}

TEST_CASE("grid spec validation") {
    GridSpec bad;
    bad.half_width = -1.0;
    CHECK_THROWS_AS(check_positive_definite("x", phi_inv_cosh(1.0), bad),
                    std::invalid_argument);
    bad = GridSpec{};
    bad.count = 1;
    CHECK_THROWS_AS(check_positive_definite("x", phi_inv_cosh(1.0), bad),
                    std::invalid_argument);
    bad = GridSpec{};
    bad.scales = {1.0, -2.0};
    CHECK_THROWS_AS(check_positive_definite("x", phi_inv_cosh(1.0), bad),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_positive_definite("x", phi_inv_cosh(1.0), GridSpec{}, 0.0),
                    std::invalid_argument);
}

TEST_CASE("kernel density values") {
    // Closed form at s = 0 for alpha/beta = 1/2: sin(pi/2) / (2 (1 + 0)) = 1/2.
    CHECK(sinh_ratio_kernel_density(0.5, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    for (double s : {0.01, 0.7, 3.0, 25.0, 200.0}) {
        const double v = sinh_ratio_kernel_density(0.25, 1.0, s);
        CHECK(v > 0.0);
        CHECK(v == sinh_ratio_kernel_density(0.25, 1.0, -s));
    }
    // The overflow-protected branch matches the direct formula at the switch.
    const double lo = sinh_ratio_kernel_density(0.5, 1.0, 29.9);
    const double hi = sinh_ratio_kernel_density(0.5, 1.0, 30.1);
    CHECK(hi < lo);
    CHECK(hi > lo * std::exp(-0.3 * M_PI));  // decay rate ~ exp(-pi s / beta)
    CHECK_THROWS_AS(sinh_ratio_kernel_density(1.0, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sinh_ratio_kernel_density(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("fourier reconstruction of the sinh ratio") {
    const double err = fourier_kernel_check(0.5, 1.0, {0.0, 0.5, 1.0, 2.0}, 60.0, 4001);
    CHECK(err <= 1e-6);
    const double err2 = fourier_kernel_check(0.25, 0.5, {0.0, 1.0}, 120.0, 4001);
    CHECK(err2 <= 1e-6);
    CHECK_THROWS_AS(fourier_kernel_check(0.5, 1.0, {0.0}, 60.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(fourier_kernel_check(1.0, 0.5, {0.0}, 60.0, 4001), std::invalid_argument);
    // Far too few points for a huge domain: the two Simpson passes disagree.
    CHECK_THROWS_AS(fourier_kernel_check(0.5, 1.0, {2.0}, 5000.0, 9), std::runtime_error);
}

TEST_CASE("catalog composition and dispatch") {
    const std::vector<PdCatalogEntry> cat = pd_catalog();
    CHECK(cat.size() == 26);
    int refuted = 0;
    for (const PdCatalogEntry& e : cat) {
        if (!e.expected_certified) ++refuted;
    }
    CHECK(refuted == 3);

    // The dispatcher builds callable functions for every family.
    CHECK(catalog_function("hg-ratio", 0.5, 0.0, 1)(0.0) == doctest::Approx(1.0));
    CHECK(catalog_function("sinh-ratio", 0.5, 1.0, 1)(0.0) == doctest::Approx(1.0));
    CHECK(catalog_function("cosh", 0.0, 0.0, 1)(1.0) == doctest::Approx(std::cosh(1.0)));
    CHECK_THROWS_AS(catalog_function("bogus", 0.5, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(catalog_function("hm-ratio", 0.0, 0.0, 0), std::invalid_argument);
}

TEST_CASE("the m=3 harmonic ratio is refuted, smaller m certified") {
    const GramReport r3 =
        check_positive_definite("hm-ratio(m=3)", catalog_function("hm-ratio", 0.0, 0.0, 3));
    CHECK(r3.verdict == PdVerdict::Refuted);
    CHECK(r3.min_eigenvalue < -r3.threshold);
    for (int m : {1, 2}) {
        const GramReport r = check_positive_definite(
            "hm-ratio", catalog_function("hm-ratio", 0.0, 0.0, m));
        CHECK(r.verdict == PdVerdict::CertifiedOnGrids);
    }
}

TEST_CASE("reversed sinh ratio is refuted") {
    const GramReport r =
        check_positive_definite("reversed", catalog_function("sinh-ratio", 1.0, 0.5, 1));
    CHECK(r.verdict == PdVerdict::Refuted);
    CHECK(r.min_eigenvalue < -r.threshold);
}

TEST_CASE("reports are deterministic") {
    const GramReport a = check_positive_definite("d", phi_inv_cosh(0.5));
    const GramReport b = check_positive_definite("d", phi_inv_cosh(0.5));
    REQUIRE(a.grids.size() == b.grids.size());
    CHECK(a.min_eigenvalue == b.min_eigenvalue);
    for (size_t i = 0; i < a.grids.size(); ++i) {
        CHECK(a.grids[i].min_eigenvalue == b.grids[i].min_eigenvalue);
        CHECK(a.grids[i].points == b.grids[i].points);
    }
    GridSpec seeded;
    seeded.jitter_seed = 1234;
    const GramReport c = check_positive_definite("d", phi_inv_cosh(0.5), seeded);
    const GramReport d = check_positive_definite("d", phi_inv_cosh(0.5), seeded);
    CHECK(c.min_eigenvalue == d.min_eigenvalue);
}

}  // TEST_SUITE
