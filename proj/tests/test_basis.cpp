#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include "zeitlin/basis.hpp"
#include "zeitlin/kernels.hpp"

#include <algorithm>
#include <map>

using namespace zeitlin;
using test::dense_laplacian_apply;
using test::dense_laplacian_operator;
using test::random_skew;

TEST_CASE("construction rejects n < 2") {
    CHECK_THROWS_AS(BasisCache(1), invalid_size);
    CHECK_THROWS_AS(BasisCache(0), invalid_size);
}

TEST_CASE("n = 2 blocks match the hand-computed operators") {
    const BasisCache basis(2);

    const DiagonalBlock& b0 = basis.diagonal(0);
    CHECK(b0.diag[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(b0.diag[1] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(b0.offdiag[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b0.eigval[0] == 0.0);
    CHECK(b0.eigval[1] == -2.0);

    const DiagonalBlock& b1 = basis.diagonal(1);
    CHECK(b1.size == 1);
    CHECK(b1.diag[0] == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(b1.eigval[0] == -2.0);
}

TEST_CASE("per-diagonal eigenstructure invariants") {
    for (const int n : {2, 3, 7, 16, 33}) {
        const BasisCache basis(n);
        for (int m = 0; m < n; ++m) {
            const DiagonalBlock& blk = basis.diagonal(m);
            const int s = blk.size;

            // eigenvalues are exactly the set {-l(l+1) : l = m..n-1}
            for (int l = m; l <= n - 1; ++l)
                CHECK(blk.eigval[l - m] == -static_cast<double>(l) * (l + 1));

            for (int l = m; l <= n - 1; ++l) {
                const double* v = blk.vec(l);

                // residual of the eigenpair under the tridiagonal operator
                double res = 0.0;
                for (int j = 0; j < s; ++j) {
                    double lv = blk.diag[j] * v[j];
                    if (j > 0) lv += blk.offdiag[j - 1] * v[j - 1];
                    if (j < s - 1) lv += blk.offdiag[j] * v[j + 1];
                    const double r = lv - blk.eigval[l - m] * v[j];
                    res += r * r;
                }
                CHECK(std::sqrt(res) <= 1e-10);

                // orthonormality
                for (int l2 = m; l2 <= l; ++l2) {
                    const double* v2 = blk.vec(l2);
                    double dot = 0.0;
                    for (int j = 0; j < s; ++j) dot += v[j] * v2[j];
                    CHECK(std::abs(dot - (l == l2 ? 1.0 : 0.0)) <= 1e-12);
                }

                // sign convention: first nonzero entry positive
                for (int j = 0; j < s; ++j) {
                    if (std::abs(v[j]) > 1e-10) {
                        CHECK(v[j] > 0.0);
                        break;
                    }
                }
            }
        }
    }
}

TEST_CASE("dense Casimir oracle: spectrum of the Laplacian for n = 2..12") {
    for (int n = 2; n <= 12; ++n) {
        const Eigen::MatrixXcd op = dense_laplacian_operator(n);
        CHECK((op - op.adjoint()).norm() <= 1e-10 * op.norm());

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op);
        REQUIRE(es.info() == Eigen::Success);

        std::vector<double> expected;
        for (int l = 0; l <= n - 1; ++l)
            for (int k = 0; k < 2 * l + 1; ++k)
                expected.push_back(-static_cast<double>(l) * (l + 1));
        std::sort(expected.begin(), expected.end());

        REQUIRE(static_cast<int>(expected.size()) == n * n);
        for (int i = 0; i < n * n; ++i)
            CHECK(std::abs(es.eigenvalues()(i) - expected[i]) <= 1e-8);
    }
}

TEST_CASE("laplacian_apply agrees with the dense oracle") {
    SUBCASE("eigenvector property for T_{1,0}") {
        const BasisCache basis(6);
        const CMatrix t10 = basis_element(basis, 1, 0);
        const CMatrix lt = laplacian_apply(basis, t10);
        CHECK((lt - (-2.0 * t10)).frob_norm() <= 1e-12);
    }

    SUBCASE("unit coefficient at (3,2), n = 8") {
        const BasisCache basis(8);
        const CMatrix t = basis_element(basis, 3, 2);
        const CMatrix lt = laplacian_apply(basis, t);
        CHECK((lt - (-12.0 * t)).frob_norm() <= 1e-12);
    }

    SUBCASE("random skew-Hermitian input, n = 6") {
        const BasisCache basis(6);
        const CMatrix w = random_skew(6, 42);
        const CMatrix fast = laplacian_apply(basis, w);
        const CMatrix oracle = dense_laplacian_apply(w);
        CHECK((fast - oracle).frob_norm() <= 1e-12 * w.frob_norm());
    }

    SUBCASE("eigenvalue property for every (l, m), n = 9") {
        const BasisCache basis(9);
        for (int l = 1; l <= 8; ++l)
            for (int m = -l; m <= l; ++m) {
                const CMatrix t = basis_element(basis, l, m);
                const CMatrix lt = laplacian_apply(basis, t);
                const double lam = -static_cast<double>(l) * (l + 1);
                CHECK((lt - (lam * t)).frob_norm() <= 1e-10 * std::abs(lam));
            }
    }

    SUBCASE("preserves skew-Hermitian trace-free matrices") {
        const BasisCache basis(12);
        const CMatrix w = random_skew(12, 43);
        const CMatrix lw = laplacian_apply(basis, w);
        CHECK(is_skew_hermitian(lw, 1e-12));
        CHECK(std::abs(lw.trace()) <= 1e-12 * lw.frob_norm());
    }

    SUBCASE("size mismatch throws") {
        const BasisCache basis(4);
        CHECK_THROWS_AS(laplacian_apply(basis, CMatrix(5)), size_mismatch);
    }
}

TEST_CASE("solve_poisson") {
    SUBCASE("unit basis coefficients: P = T_lm / (-l(l+1))") {
        const BasisCache basis(10);
        for (const auto& [l, m] : std::vector<std::pair<int, int>>{
                 {1, 0}, {2, -1}, {5, 3}, {9, -9}}) {
            const CMatrix t = basis_element(basis, l, m);
            const CMatrix p = solve_poisson(basis, t);
            const double lam = -static_cast<double>(l) * (l + 1);
            CHECK((p - (1.0 / lam) * t).frob_norm() <= 1e-13);
        }
    }

    SUBCASE("zero input gives zero") {
        const BasisCache basis(6);
        const CMatrix p = solve_poisson(basis, CMatrix(6));
        CHECK(p.frob_norm() == 0.0);
    }

    SUBCASE("round trip at n = 16") {
        const BasisCache basis(16);
        const CMatrix w = random_skew(16, 77);
        const CMatrix p = solve_poisson(basis, w);
        const CMatrix back = laplacian_apply(basis, p);
        CHECK((back - w).frob_norm() <= 1e-12 * w.frob_norm());
        CHECK(is_skew_hermitian(p, 1e-12));
    }

    SUBCASE("solve then apply on many sizes") {
        for (const int n : {2, 3, 5, 8, 32}) {
            const BasisCache basis(n);
            const CMatrix w = random_skew(n, 1000 + n);
            const CMatrix res = laplacian_apply(basis, solve_poisson(basis, w)) - w;
            CHECK(res.frob_norm() <= 1e-12 * w.frob_norm());
        }
    }

    SUBCASE("non-trace-free input is rejected") {
        const BasisCache basis(4);
        CMatrix w(4);
        for (int j = 0; j < 4; ++j) w(j, j) = cplx(0.0, 0.5);
        CHECK_THROWS_AS(solve_poisson(basis, w), degenerate_input);
    }
}

TEST_CASE("analyze") {
    const BasisCache basis(12);

    SUBCASE("picks out a scaled basis element") {
        CoeffField c(12, 11);
        c.at(5, 2) = 3.0;
        const CMatrix w = synthesize(basis, c);
        const CoeffField out = analyze(basis, w, 11);
        for (int l = 1; l <= 11; ++l)
            for (int m = -l; m <= l; ++m) {
                const double want = (l == 5 && m == 2) ? 3.0 : 0.0;
                CHECK(std::abs(out.at(l, m) - want) <= 1e-12);
            }
    }

    SUBCASE("Parseval against the Frobenius norm") {
        const CMatrix w = random_skew(12, 5);
        const CoeffField c = analyze(basis, w, 11);
        CHECK(c.sum_squares() ==
              doctest::Approx(w.frob_norm_sq()).epsilon(1e-10));
    }

    SUBCASE("trace component: strict flag rejects, lenient ignores") {
        CMatrix w(12);
        for (int j = 0; j < 12; ++j) w(j, j) = cplx(0.0, 1.0 / std::sqrt(12.0));
        CHECK_THROWS_AS(analyze(basis, w, 11, /*strict_trace=*/true),
                        degenerate_input);
        const CoeffField c = analyze(basis, w, 11);
        CHECK(std::sqrt(c.sum_squares()) <= 1e-12);
    }

    SUBCASE("l_max out of range throws") {
        const CMatrix w = random_skew(12, 6);
        CHECK_THROWS_AS(analyze(basis, w, 0), invalid_size);
        CHECK_THROWS_AS(analyze(basis, w, 12), invalid_size);
    }
}

TEST_CASE("synthesize") {
    SUBCASE("unit coefficient at (1,0), n = 2") {
        const BasisCache basis(2);
        CoeffField c(2, 1);
        c.at(1, 0) = 1.0;
        const CMatrix w = synthesize(basis, c);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(w(0, 0) - cplx(0.0, inv_sqrt2)) <= 1e-15);
        CHECK(std::abs(w(1, 1) - cplx(0.0, -inv_sqrt2)) <= 1e-15);
        CHECK(std::abs(w(0, 1)) == 0.0);
        CHECK(std::abs(w(1, 0)) == 0.0);
    }

    SUBCASE("zero coefficients give the zero matrix") {
        const BasisCache basis(5);
        CHECK(synthesize(basis, CoeffField(5, 4)).frob_norm() == 0.0);
    }

    SUBCASE("round trip analyze(synthesize(c)) = c") {
        const BasisCache basis(14);
        std::mt19937_64 gen(9);
        std::normal_distribution<double> dist;
        CoeffField c(14, 13);
        for (double& v : c.values()) v = dist(gen);
        const CoeffField back = analyze(basis, synthesize(basis, c), 13);
        double err = 0.0;
        for (size_t i = 0; i < c.values().size(); ++i)
            err = std::max(err, std::abs(c.values()[i] - back.values()[i]));
        CHECK(err <= 1e-12 * std::sqrt(c.sum_squares()));
    }

    SUBCASE("output is skew-Hermitian trace-free") {
        const BasisCache basis(9);
        std::mt19937_64 gen(10);
        std::normal_distribution<double> dist;
        CoeffField c(9, 8);
        for (double& v : c.values()) v = dist(gen);
        const CMatrix w = synthesize(basis, c);
        CHECK(skew_defect(w) == 0.0);
        CHECK(std::abs(w.trace()) <= 1e-14 * w.frob_norm());
    }
}

TEST_CASE("project_large") {
    const BasisCache basis(16);
    const CMatrix w = random_skew(16, 17);

    SUBCASE("l_bar = n-1 is the identity, bitwise") {
        CHECK(project_large(basis, w, 15) == w);
    }

    SUBCASE("idempotence") {
        const CMatrix pw = project_large(basis, w, 5);
        const CMatrix ppw = project_large(basis, pw, 5);
        CHECK((ppw - pw).frob_norm() <= 1e-12 * std::max(pw.frob_norm(), 1.0));
    }

    SUBCASE("band structure is exact") {
        const CMatrix pw = project_large(basis, w, 5);
        for (int r = 0; r < 16; ++r)
            for (int c = 0; c < 16; ++c)
                if (std::abs(r - c) > 5) CHECK(pw(r, c) == cplx(0.0, 0.0));
    }

    SUBCASE("kills modes above the threshold") {
        const CMatrix t = basis_element(basis, 6, 0);
        const CMatrix pt = project_large(basis, t, 5);
        CHECK(pt.frob_norm() <= 1e-13);
    }

    SUBCASE("self-adjointness and contractivity") {
        const CMatrix a = random_skew(16, 18);
        const CMatrix b = random_skew(16, 19);
        const CMatrix pa = project_large(basis, a, 4);
        const CMatrix pb = project_large(basis, b, 4);
        CHECK(frob_inner(pa, b) ==
              doctest::Approx(frob_inner(a, pb)).epsilon(1e-12));
        CHECK(pa.frob_norm() <= a.frob_norm());
    }

    SUBCASE("l_bar out of range throws") {
        CHECK_THROWS_AS(project_large(basis, w, 0), invalid_size);
        CHECK_THROWS_AS(project_large(basis, w, 16), invalid_size);
    }
}

TEST_CASE("serial reference transforms match the parallel ones bitwise") {
    const int n = 48;
    const BasisCache basis(n);
    const CMatrix w = random_skew(n, 33);

    CMatrix a, b;
    laplacian_apply_into(basis, w, a);
    ref::laplacian_apply_into(basis, w, b);
    CHECK(a == b);

    solve_poisson_into(basis, w, a);
    ref::solve_poisson_into(basis, w, b);
    CHECK(a == b);

    CoeffField ca, cb;
    analyze_into(basis, w, n - 1, ca);
    ref::analyze_into(basis, w, n - 1, cb);
    CHECK(ca == cb);

    synthesize_into(basis, ca, a);
    ref::synthesize_into(basis, cb, b);
    CHECK(a == b);
}
