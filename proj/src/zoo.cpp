#include "loclab/errors.hpp"
#include "loclab/latrans.hpp"

#include <array>
#include <cmath>
#include <string>

namespace loclab {

namespace {

constexpr double kNullSlice = 1e-12;

TransFamily constant_pure(int d) {
    return TransFamily(
        TheoryTag::Pure, d, d, FamilyKind::BlackBox, "constant_pure",
        [d](int env_dim, const ComplexMatrix& psi) {
            // (<0|_A ⊗ I) ψ is the leading block of env_dim amplitudes.
            ComplexMatrix slice = psi.topRows(env_dim);
            const double norm = slice.norm();
            if (norm <= kNullSlice) {
                slice = basis_ket(env_dim, 0);
            } else {
                slice /= norm;
            }
            return tensor(basis_ket(d, 0), slice);
        });
}

TransFamily constant_mixed(int d) {
    return TransFamily(TheoryTag::Mixed, d, d, FamilyKind::BlackBox, "constant_mixed",
                       [d](int env_dim, const ComplexMatrix& rho) {
                           const std::array<int, 2> dims{d, env_dim};
                           const std::array<int, 1> keep{1};
                           return tensor(projector(basis_ket(d, 0)),
                                         partial_trace(rho, dims, keep));
                       });
}

TransFamily nonlinear_phase(int d, double theta) {
    return TransFamily(
        TheoryTag::Pure, d, d, FamilyKind::BlackBox, "nonlinear_phase",
        [d, theta](int env_dim, const ComplexMatrix& psi) {
            // Z_A = diag((-1)^a); the block a of ψ holds amplitudes |a>|x>.
            double expectation = 0.0;
            for (int a = 0; a < d; ++a) {
                const double z = (a % 2 == 0) ? 1.0 : -1.0;
                expectation += z * psi.middleRows(a * env_dim, env_dim).squaredNorm();
            }
            ComplexMatrix out = psi;
            for (int a = 0; a < d; ++a) {
                const double z = (a % 2 == 0) ? 1.0 : -1.0;
                out.middleRows(a * env_dim, env_dim) *= std::polar(1.0, theta * expectation * z);
            }
            return out;
        });
}

TransFamily transpose_mixed(int d) {
    return TransFamily(TheoryTag::Mixed, d, d, FamilyKind::BlackBox, "transpose_mixed",
                       [d](int env_dim, const ComplexMatrix& rho) {
                           const std::array<int, 2> dims{d, env_dim};
                           return partial_transpose(rho, dims, 0);
                       });
}

}  // namespace

const std::vector<std::string>& zoo_family_names() {
    static const std::vector<std::string> names{"constant_pure", "constant_mixed",
                                                "nonlinear_phase", "transpose_mixed"};
    return names;
}

TransFamily zoo(std::string_view name, const ZooParams& params) {
    if (params.dim < 1) throw InvalidArgument("zoo: dimension must be positive");
    if (name == "constant_pure") return constant_pure(params.dim);
    if (name == "constant_mixed") return constant_mixed(params.dim);
    if (name == "nonlinear_phase") return nonlinear_phase(params.dim, params.theta);
    if (name == "transpose_mixed") return transpose_mixed(params.dim);
    throw UnknownName("unknown zoo family '" + std::string(name) + "'");
}

}  // namespace loclab
