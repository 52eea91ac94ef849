#include "loclab/linalg.hpp"

#include "loclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace loclab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int checked_product(std::span<const int> dims) {
    int n = 1;
    for (int d : dims) {
        if (d < 1) throw DimensionMismatch("tensor factor dimensions must be positive");
        n *= d;
    }
    return n;
}

void require_square(const ComplexMatrix& a, const char* what) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch(std::string(what) + ": matrix must be square, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

// Splits every composite index into (kept, traced) sub-indices.
struct IndexSplit {
    std::vector<int> kept;
    std::vector<int> traced;
    int kept_dim = 1;
};

IndexSplit split_indices(std::span<const int> dims, std::span<const int> keep) {
    const int n = checked_product(dims);
    std::vector<bool> is_kept(dims.size(), false);
    for (int k : keep) {
        if (k < 0 || k >= static_cast<int>(dims.size())) {
            throw DimensionMismatch("partial_trace: keep index " + std::to_string(k) +
                                    " out of range");
        }
        is_kept[k] = true;
    }
    IndexSplit split;
    split.kept.assign(n, 0);
    split.traced.assign(n, 0);
    for (std::size_t f = 0; f < dims.size(); ++f) {
        if (is_kept[f]) split.kept_dim *= dims[f];
    }
    for (int i = 0; i < n; ++i) {
        int rest = i;
        int kept = 0, kept_stride = 1;
        int traced = 0, traced_stride = 1;
        for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
            const int digit = rest % dims[f];
            rest /= dims[f];
            if (is_kept[f]) {
                kept += digit * kept_stride;
                kept_stride *= dims[f];
            } else {
                traced += digit * traced_stride;
                traced_stride *= dims[f];
            }
        }
        split.kept[i] = kept;
        split.traced[i] = traced;
    }
    return split;
}

}  // namespace

RngSeed derive_seed(RngSeed base, std::uint64_t salt) {
    return RngSeed{splitmix64(base.value ^ splitmix64(salt))};
}

ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix basis_ket(int d, int index) {
    if (index < 0 || index >= d) throw DimensionMismatch("basis_ket: index out of range");
    ComplexMatrix k = ComplexMatrix::Zero(d, 1);
    k(index, 0) = 1.0;
    return k;
}

ComplexMatrix projector(const ComplexMatrix& ket) { return ket * ket.adjoint(); }

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix tensor(std::span<const ComplexMatrix> factors) {
    ComplexMatrix out = ComplexMatrix::Ones(1, 1);
    for (const auto& f : factors) out = tensor(out, f);
    return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

ComplexMatrix conjugate(const ComplexMatrix& a) { return a.conjugate(); }

Complex trace(const ComplexMatrix& a) {
    require_square(a, "trace");
    return a.trace();
}

ComplexMatrix bell_state(int d) {
    if (d < 1) throw DimensionMismatch("bell_state: dimension must be positive");
    ComplexMatrix v = ComplexMatrix::Zero(static_cast<Eigen::Index>(d) * d, 1);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) v(i * d + i, 0) = amp;
    return v;
}

ComplexMatrix bell_projector(int d) { return projector(bell_state(d)); }

ComplexMatrix vec(const ComplexMatrix& m) {
    ComplexMatrix v(m.rows() * m.cols(), 1);
    for (Eigen::Index b = 0; b < m.rows(); ++b) {
        for (Eigen::Index i = 0; i < m.cols(); ++i) v(b * m.cols() + i, 0) = m(b, i);
    }
    return v;
}

ComplexMatrix unvec(const ComplexMatrix& v, int rows_out, int cols_out) {
    if (rows_out < 1 || cols_out < 1 || v.cols() != 1 ||
        v.rows() != static_cast<Eigen::Index>(rows_out) * cols_out) {
        throw DimensionMismatch("unvec: expected a " + std::to_string(rows_out * cols_out) +
                                "x1 vector, got " + std::to_string(v.rows()) + "x" +
                                std::to_string(v.cols()));
    }
    ComplexMatrix m(rows_out, cols_out);
    for (int b = 0; b < rows_out; ++b) {
        for (int i = 0; i < cols_out; ++i) m(b, i) = v(b * cols_out + i, 0);
    }
    return m;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            std::span<const int> keep) {
    require_square(m, "partial_trace");
    if (m.rows() != checked_product(dims)) {
        throw DimensionMismatch("partial_trace: matrix side " + std::to_string(m.rows()) +
                                " does not match the product of dims");
    }
    const IndexSplit split = split_indices(dims, keep);
    const auto n = m.rows();
    ComplexMatrix out = ComplexMatrix::Zero(split.kept_dim, split.kept_dim);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (split.traced[i] == split.traced[j]) out(split.kept[i], split.kept[j]) += m(i, j);
        }
    }
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const int> dims, int which) {
    require_square(m, "partial_transpose");
    const int n = checked_product(dims);
    if (m.rows() != n) throw DimensionMismatch("partial_transpose: dims do not match matrix");
    if (which < 0 || which >= static_cast<int>(dims.size())) {
        throw DimensionMismatch("partial_transpose: factor index out of range");
    }
    int stride = 1;
    for (std::size_t f = which + 1; f < dims.size(); ++f) stride *= dims[f];
    const int dw = dims[which];
    ComplexMatrix out(n, n);
    for (int j = 0; j < n; ++j) {
        const int dj = (j / stride) % dw;
        for (int i = 0; i < n; ++i) {
            const int di = (i / stride) % dw;
            const int i2 = i + (dj - di) * stride;
            const int j2 = j + (di - dj) * stride;
            out(i2, j2) = m(i, j);
        }
    }
    return out;
}

ComplexMatrix swap_operator(int d_first, int d_second) {
    const int n = d_first * d_second;
    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    for (int a = 0; a < d_first; ++a) {
        for (int b = 0; b < d_second; ++b) s(b * d_first + a, a * d_second + b) = 1.0;
    }
    return s;
}

ComplexMatrix apply_left_factor(const ComplexMatrix& op, const ComplexMatrix& m, int env_dim) {
    const auto d_out = op.rows();
    const auto d_in = op.cols();
    if (env_dim < 1 || m.rows() != d_in * env_dim) {
        throw DimensionMismatch("apply_left_factor: operand has " + std::to_string(m.rows()) +
                                " rows, expected " + std::to_string(d_in * env_dim));
    }
    ComplexMatrix out(d_out * env_dim, m.cols());
    const ComplexMatrix op_t = op.transpose();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        Eigen::Map<const ComplexMatrix> column(m.col(c).data(), env_dim, d_in);
        Eigen::Map<ComplexMatrix> target(out.col(c).data(), env_dim, d_out);
        target.noalias() = column * op_t;
    }
    return out;
}

ComplexMatrix haar_unitary(int d, Rng& rng) {
    if (d < 1) throw InvalidArgument("haar_unitary: dimension must be positive");
    ComplexMatrix z(d, d);
    // Row-major fill keeps the draw order independent of Eigen's storage order.
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) z(i, j) = rng.complex_normal();
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
    const ComplexMatrix& r = qr.matrixQR();
    for (int j = 0; j < d; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

ComplexMatrix haar_unitary(int d, RngSeed seed) {
    Rng rng(seed);
    return haar_unitary(d, rng);
}

ComplexMatrix haar_isometry(int rows, int cols, Rng& rng) {
    if (cols < 1 || rows < cols) {
        throw InvalidArgument("haar_isometry: need rows >= cols >= 1");
    }
    return haar_unitary(rows, rng).leftCols(cols);
}

ComplexMatrix random_pure(int d, Rng& rng) {
    if (d < 1) throw InvalidArgument("random_pure: dimension must be positive");
    ComplexMatrix v(d, 1);
    for (int i = 0; i < d; ++i) v(i, 0) = rng.complex_normal();
    return v / v.norm();
}

ComplexMatrix random_pure(int d, RngSeed seed) {
    Rng rng(seed);
    return random_pure(d, rng);
}

ComplexMatrix random_density(int d, Rng& rng) {
    if (d < 1) throw InvalidArgument("random_density: dimension must be positive");
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) g(i, j) = rng.complex_normal();
    }
    ComplexMatrix rho = g * g.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return rho / rho.trace().real();
}

ComplexMatrix random_density(int d, RngSeed seed) {
    Rng rng(seed);
    return random_density(d, rng);
}

ComplexMatrix random_projector(int d, int rank, Rng& rng) {
    if (rank < 0 || rank > d) throw InvalidArgument("random_projector: rank out of range");
    if (rank == 0) return ComplexMatrix::Zero(d, d);
    const ComplexMatrix w = haar_isometry(d, rank, rng);
    return w * w.adjoint();
}

std::vector<ComplexMatrix> random_kraus_channel(int d_in, int d_out, int rank, Rng& rng) {
    if (d_in < 1 || d_out < 1) throw InvalidArgument("random_kraus_channel: bad dimensions");
    if (rank < 1 || rank > d_in * d_out) {
        throw InvalidArgument("random_kraus_channel: rank must lie in [1, d_in * d_out]");
    }
    if (rank * d_out < d_in) {
        throw InvalidArgument("random_kraus_channel: rank * d_out < d_in admits no "
                              "trace-preserving Kraus family");
    }
    const ComplexMatrix v = haar_isometry(rank * d_out, d_in, rng);
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(rank);
    for (int j = 0; j < rank; ++j) kraus.emplace_back(v.middleRows(j * d_out, d_out));
    return kraus;
}

std::vector<ComplexMatrix> random_kraus_channel(int d_in, int d_out, int rank, RngSeed seed) {
    Rng rng(seed);
    return random_kraus_channel(d_in, d_out, rank, rng);
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    if (a.size() == 0) return true;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

RealVector eigvals_hermitian(const ComplexMatrix& a, double tol) {
    require_square(a, "eigvals_hermitian");
    if (!is_hermitian(a, tol)) throw NotHermitian("eigvals_hermitian: input is not Hermitian");
    const ComplexMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    return RealVector(ev.data(), ev.data() + ev.size());
}

double trace_norm(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    if (is_hermitian(a, 0.0)) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().cwiseAbs().sum();
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues().sum();
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    require_square(a, "trace_distance");
    require_square(b, "trace_distance");
    if (a.rows() != b.rows()) throw DimensionMismatch("trace_distance: dimension mismatch");
    if (!is_hermitian(a, tol) || !is_hermitian(b, tol)) {
        throw NotHermitian("trace_distance: inputs must be Hermitian");
    }
    const ComplexMatrix diff = a - b;
    const RealVector ev = eigvals_hermitian(diff, 2 * tol);
    double sum = 0.0;
    for (double e : ev) sum += std::abs(e);
    return 0.5 * sum;
}

double isometry_defect(const ComplexMatrix& v) {
    return (v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols())).norm();
}

bool all_finite(const ComplexMatrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
        }
    }
    return true;
}

}  // namespace loclab
