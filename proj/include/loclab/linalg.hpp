#pragma once

// Dense complex linear algebra for finite-dimensional quantum systems.
//
// Conventions used throughout the library:
//  * the computational basis is self-conjugate, so conjugation is entrywise;
//  * composite indices are row-major over tensor factors, the first factor
//    being the most significant (|a>|x> has index a * d_X + x);
//  * vec(M) stacks rows, so (M ⊗ I)|Φ+> = vec(M) / √d.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace loclab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = std::vector<double>;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kUnitarityTolerance = 1e-10;

struct RngSeed {
    std::uint64_t value = 0;
};

/// Deterministic random source. Identical seed and identical call sequence
/// yield bit-identical draws.
class Rng {
public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(engine_);
    }
    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Derives an independent stream seed from a base seed and a salt
/// (splitmix64 finalizer).
RngSeed derive_seed(RngSeed base, std::uint64_t salt);

ComplexMatrix identity(int d);
ComplexMatrix basis_ket(int d, int index);
ComplexMatrix projector(const ComplexMatrix& ket);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor(std::span<const ComplexMatrix> factors);
ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);

/// Σ_i |ii> / √d.
ComplexMatrix bell_state(int d);
/// |Φ+><Φ+| for bell_state(d).
ComplexMatrix bell_projector(int d);

/// Row-stacking vectorization: v[b * cols + i] = M(b, i).
ComplexMatrix vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexMatrix& v, int rows_out, int cols_out);

/// Partial trace over every factor not listed in `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            std::span<const int> keep);

/// Partial transpose of the factor `which`.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const int> dims, int which);

/// Permutation operator S|a>|b> = |b>|a>, mapping C^{d_first} ⊗ C^{d_second}
/// onto C^{d_second} ⊗ C^{d_first}.
ComplexMatrix swap_operator(int d_first, int d_second);

/// (op ⊗ I_env) applied to a ket or to the rows of a matrix whose row index
/// is (a, x).  `op` is d_out × d_in; `m` has d_in * env_dim rows.
ComplexMatrix apply_left_factor(const ComplexMatrix& op, const ComplexMatrix& m, int env_dim);

ComplexMatrix haar_unitary(int d, Rng& rng);
ComplexMatrix haar_unitary(int d, RngSeed seed);
/// First `cols` columns of a Haar unitary of size `rows`.
ComplexMatrix haar_isometry(int rows, int cols, Rng& rng);
ComplexMatrix random_pure(int d, Rng& rng);
ComplexMatrix random_pure(int d, RngSeed seed);
/// Normalized Wishart (Hilbert–Schmidt) density matrix.
ComplexMatrix random_density(int d, Rng& rng);
ComplexMatrix random_density(int d, RngSeed seed);
/// Projector onto a Haar-random subspace of dimension `rank`.
ComplexMatrix random_projector(int d, int rank, Rng& rng);
/// Kraus operators K_j (d_out × d_in) from the blocks of a Haar isometry
/// C^{d_in} → C^{rank} ⊗ C^{d_out}.
std::vector<ComplexMatrix> random_kraus_channel(int d_in, int d_out, int rank, Rng& rng);
std::vector<ComplexMatrix> random_kraus_channel(int d_in, int d_out, int rank, RngSeed seed);

bool is_hermitian(const ComplexMatrix& a, double tol = kDefaultTolerance);
/// Ascending real spectrum of a Hermitian matrix.
RealVector eigvals_hermitian(const ComplexMatrix& a, double tol = kDefaultTolerance);
/// Sum of singular values.
double trace_norm(const ComplexMatrix& a);
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b,
                      double tol = kDefaultTolerance);
/// ‖V†V − I‖_F.
double isometry_defect(const ComplexMatrix& v);

bool all_finite(const ComplexMatrix& a);

}  // namespace loclab
