#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loclab/errors.hpp"
#include "loclab/linalg.hpp"
#include "oracles.hpp"

#include <array>

using namespace loclab;

namespace {

ComplexMatrix random_matrix(int r, int c, Rng& rng) {
    ComplexMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng.complex_normal();
    return m;
}

}  // namespace

TEST_CASE("tensor agrees with the index-loop Kronecker product") {
    Rng rng(RngSeed{11});
    for (int t = 0; t < 10; ++t) {
        const ComplexMatrix a = random_matrix(1 + t % 3, 2 + t % 2, rng);
        const ComplexMatrix b = random_matrix(2 + t % 4, 1 + t % 3, rng);
        CHECK(oracle::max_abs(tensor(a, b) - oracle::kron(a, b)) < 1e-14);
    }
    const std::array<ComplexMatrix, 3> fs{random_matrix(2, 2, rng), random_matrix(3, 1, rng),
                                          random_matrix(2, 3, rng)};
    CHECK(oracle::max_abs(tensor(fs) - oracle::kron(oracle::kron(fs[0], fs[1]), fs[2])) < 1e-13);
}

TEST_CASE("partial trace matches brute force") {
    Rng rng(RngSeed{12});
    for (int da = 1; da <= 3; ++da) {
        for (int db = 1; db <= 4; ++db) {
            const ComplexMatrix m = random_matrix(da * db, da * db, rng);
            const std::array<int, 2> dims{da, db};
            const std::array<int, 1> keep_a{0}, keep_b{1};
            CHECK(oracle::max_abs(partial_trace(m, dims, keep_a) - oracle::trace_second(m, da, db)) < 1e-13);
            CHECK(oracle::max_abs(partial_trace(m, dims, keep_b) - oracle::trace_first(m, da, db)) < 1e-13);
        }
    }
}

TEST_CASE("partial trace over the middle of three factors") {
    Rng rng(RngSeed{13});
    const ComplexMatrix a = random_density(2, rng), b = random_density(3, rng), c = random_density(2, rng);
    const std::array<int, 3> dims{2, 3, 2};
    const std::array<int, 2> keep{0, 2};
    const ComplexMatrix m = oracle::kron(oracle::kron(a, b), c);
    CHECK(oracle::max_abs(partial_trace(m, dims, keep) - oracle::kron(a, c) * b.trace()) < 1e-13);
}

TEST_CASE("partial transpose of the first factor") {
    Rng rng(RngSeed{14});
    const ComplexMatrix m = random_matrix(6, 6, rng);
    const std::array<int, 2> dims{2, 3};
    CHECK(oracle::max_abs(partial_transpose(m, dims, 0) - oracle::transpose_first(m, 2, 3)) < 1e-14);
    // Transposing both factors is the full transpose.
    CHECK(oracle::max_abs(partial_transpose(partial_transpose(m, dims, 0), dims, 1) - m.transpose()) < 1e-14);
}

TEST_CASE("swap operator exchanges factors") {
    Rng rng(RngSeed{15});
    const ComplexMatrix a = random_pure(2, rng), b = random_pure(3, rng);
    const ComplexMatrix s = swap_operator(2, 3);
    CHECK(s.rows() == 6);
    CHECK(oracle::max_abs(s * oracle::kron(a, b) - oracle::kron(b, a)) < 1e-14);
    CHECK(oracle::max_abs(s.adjoint() * s - oracle::eye(6)) < 1e-14);
}

TEST_CASE("apply_left_factor equals (op ⊗ I) m") {
    Rng rng(RngSeed{16});
    const ComplexMatrix op = random_matrix(3, 2, rng);
    const ComplexMatrix ket = random_matrix(8, 1, rng);
    const ComplexMatrix rect = random_matrix(8, 5, rng);
    CHECK(oracle::max_abs(apply_left_factor(op, ket, 4) - oracle::kron(op, oracle::eye(4)) * ket) < 1e-13);
    CHECK(oracle::max_abs(apply_left_factor(op, rect, 4) - oracle::kron(op, oracle::eye(4)) * rect) < 1e-13);
    CHECK_THROWS_AS(apply_left_factor(op, random_matrix(7, 1, rng), 4), DimensionMismatch);
}

TEST_CASE("vec, unvec and the Bell state") {
    Rng rng(RngSeed{17});
    const ComplexMatrix m = random_matrix(3, 2, rng);
    const ComplexMatrix v = vec(m);
    CHECK(v(1 * 2 + 0, 0) == m(1, 0));
    CHECK(oracle::max_abs(unvec(v, 3, 2) - m) < 1e-15);
    CHECK(oracle::max_abs(bell_state(4) - oracle::bell(4)) < 1e-15);
    CHECK(oracle::max_abs(oracle::kron(m, oracle::eye(2)) * oracle::bell(2) - v / std::sqrt(2.0)) < 1e-14);
    CHECK(oracle::max_abs(bell_projector(3) - oracle::bell(3) * oracle::bell(3).adjoint()) < 1e-15);
}

TEST_CASE("Haar unitaries: unitarity, determinism and the first moment") {
    for (int d = 1; d <= 6; ++d) {
        const ComplexMatrix u = haar_unitary(d, RngSeed{static_cast<std::uint64_t>(d)});
        CHECK(oracle::max_abs(u.adjoint() * u - oracle::eye(d)) < kUnitarityTolerance);
    }
    CHECK(haar_unitary(4, RngSeed{99}) == haar_unitary(4, RngSeed{99}));
    CHECK(haar_unitary(4, RngSeed{99}) != haar_unitary(4, RngSeed{100}));

    // E|U_00|^2 = 1/d, E|U_00|^4 = 2/(d(d+1)) for Haar measure.
    const int d = 3, n = 20000;
    Rng rng(RngSeed{18});
    double m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double p = std::norm(haar_unitary(d, rng)(0, 0));
        m2 += p;
        m4 += p * p;
    }
    CHECK(m2 / n == doctest::Approx(1.0 / d).epsilon(0.03));
    CHECK(m4 / n == doctest::Approx(2.0 / (d * (d + 1))).epsilon(0.05));
}

TEST_CASE("random isometries, densities, projectors and channels") {
    Rng rng(RngSeed{19});
    const ComplexMatrix v = haar_isometry(5, 3, rng);
    CHECK(isometry_defect(v) < 1e-12);

    const ComplexMatrix rho = random_density(4, rng);
    CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-12);
    CHECK(eigvals_hermitian(rho).front() > -1e-12);

    const ComplexMatrix p = random_projector(5, 2, rng);
    CHECK(oracle::max_abs(p * p - p) < 1e-12);
    CHECK(std::abs(p.trace() - Complex(2.0)) < 1e-12);

    const auto kraus = random_kraus_channel(3, 2, 4, rng);
    CHECK(kraus.size() == 4);
    ComplexMatrix sum = ComplexMatrix::Zero(3, 3);
    for (const auto& k : kraus) sum += k.adjoint() * k;
    CHECK(oracle::max_abs(sum - oracle::eye(3)) < 1e-12);

    CHECK_THROWS_AS(random_kraus_channel(3, 2, 7, rng), InvalidArgument);
    CHECK_THROWS_AS(random_kraus_channel(3, 2, 0, rng), InvalidArgument);
    CHECK_THROWS_AS(random_kraus_channel(4, 1, 2, rng), InvalidArgument);
}

TEST_CASE("spectra and norms") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    const auto ev = eigvals_hermitian(d);
    CHECK(ev[0] == doctest::Approx(-2.0));
    CHECK(ev[1] == doctest::Approx(1.0));
    CHECK(trace_norm(d) == doctest::Approx(3.0));

    ComplexMatrix nh = d;
    nh(0, 1) = 1.0;
    CHECK_FALSE(is_hermitian(nh));
    CHECK_THROWS_AS(eigvals_hermitian(nh), NotHermitian);
    CHECK(trace_norm(nh) > 0.0);

    const ComplexMatrix p0 = projector(basis_ket(2, 0)), p1 = projector(basis_ket(2, 1));
    CHECK(trace_distance(p0, p1) == doctest::Approx(1.0));
    CHECK(trace_distance(p0, p0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(trace_distance(p0, identity(3)), DimensionMismatch);
}

TEST_CASE("derived seeds are distinct and stable") {
    const RngSeed a = derive_seed(RngSeed{1}, 1), b = derive_seed(RngSeed{1}, 2);
    CHECK(a.value != b.value);
    CHECK(derive_seed(RngSeed{1}, 1).value == a.value);
}

TEST_CASE("all_finite") {
    ComplexMatrix m = identity(2);
    CHECK(all_finite(m));
    m(1, 0) = Complex(std::nan(""), 0.0);
    CHECK_FALSE(all_finite(m));
}
