#include "loclab/gisin.hpp"

#include "loclab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace loclab {

namespace {

constexpr double kWeightTolerance = 1e-10;
constexpr double kRankThreshold = 1e-12;

void require_density(const ComplexMatrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 1) {
        throw InvalidArgument("density matrix must be square and non-empty");
    }
    if (!is_hermitian(rho, kDefaultTolerance)) throw InvalidArgument("density matrix not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > kDefaultTolerance) {
        throw InvalidArgument("density matrix trace differs from 1");
    }
}

ComplexMatrix normalized(const ComplexMatrix& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidState("cannot normalize a null vector");
    return v / n;
}

}  // namespace

Ensemble::Ensemble(int dim, std::vector<double> weights, std::vector<ComplexMatrix> kets)
    : dim_(dim), weights_(std::move(weights)), kets_(std::move(kets)) {
    if (dim_ < 1) throw InvalidArgument("ensemble dimension must be positive");
    if (weights_.empty() || weights_.size() != kets_.size()) {
        throw InvalidArgument("ensemble needs matching, non-empty weights and kets");
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw InvalidArgument("ensemble weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightTolerance) {
        throw InvalidArgument("ensemble weights sum to " + std::to_string(total));
    }
    for (const auto& k : kets_) {
        if (k.rows() != dim_ || k.cols() != 1) throw InvalidArgument("ensemble ket has wrong shape");
        if (std::abs(k.norm() - 1.0) > kDefaultTolerance) {
            throw InvalidArgument("ensemble ket is not normalized");
        }
    }
}

ComplexMatrix ensemble_density(const Ensemble& e) {
    ComplexMatrix rho = ComplexMatrix::Zero(e.dim(), e.dim());
    for (std::size_t x = 0; x < e.size(); ++x) rho += e.weights()[x] * projector(e.kets()[x]);
    return rho;
}

bool indistinguishable(const Ensemble& e1, const Ensemble& e2, double tol) {
    if (e1.dim() != e2.dim()) throw DimensionMismatch("ensembles live in different dimensions");
    return 0.5 * trace_norm(ensemble_density(e1) - ensemble_density(e2)) <= tol;
}

std::pair<Ensemble, Ensemble> random_indistinguishable_pair(const ComplexMatrix& rho,
                                                            std::pair<int, int> sizes,
                                                            RngSeed seed) {
    require_density(rho);
    const int d = static_cast<int>(rho.rows());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint()));
    if (solver.eigenvalues()(0) < -kDefaultTolerance) {
        throw InvalidArgument("density matrix has a negative eigenvalue");
    }
    // Weighted eigenvectors, largest eigenvalue first.
    std::vector<double> lambdas;
    std::vector<ComplexMatrix> vectors;
    for (int k = d - 1; k >= 0; --k) {
        const double lambda = solver.eigenvalues()(k);
        if (lambda <= kRankThreshold) continue;
        lambdas.push_back(lambda);
        vectors.emplace_back(solver.eigenvectors().col(k));
    }
    const int rank = static_cast<int>(lambdas.size());
    if (sizes.first < rank || sizes.second < rank) {
        throw InvalidArgument("ensemble size " + std::to_string(std::min(sizes.first, sizes.second)) +
                              " is below rank " + std::to_string(rank));
    }
    Rng rng(seed);
    auto mixed_ensemble = [&](int n) {
        const ComplexMatrix w = haar_isometry(n, rank, rng);
        std::vector<double> weights(n);
        std::vector<ComplexMatrix> kets(n);
        for (int x = 0; x < n; ++x) {
            ComplexMatrix v = ComplexMatrix::Zero(d, 1);
            for (int k = 0; k < rank; ++k) v += w(x, k) * std::sqrt(lambdas[k]) * vectors[k];
            const double p = v.squaredNorm();
            weights[x] = p;
            kets[x] = p > 1e-15 ? ComplexMatrix(v / std::sqrt(p)) : vectors.front();
        }
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        for (double& p : weights) p /= total;
        return Ensemble(d, std::move(weights), std::move(kets));
    };
    auto spectral_ensemble = [&]() {
        const double total = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
        std::vector<double> weights;
        for (double l : lambdas) weights.push_back(l / total);
        return Ensemble(d, std::move(weights), vectors);
    };
    Ensemble first = sizes.first == rank ? spectral_ensemble() : mixed_ensemble(sizes.first);
    Ensemble second = mixed_ensemble(sizes.second);
    return {std::move(first), std::move(second)};
}

// ---------------------------------------------------------------------------

const char* to_string(PureStateMap::Kind kind) {
    switch (kind) {
        case PureStateMap::Kind::Linear: return "linear";
        case PureStateMap::Kind::Constant: return "constant";
        case PureStateMap::Kind::Custom: return "custom";
    }
    return "?";
}

PureStateMap::PureStateMap(Kind kind, std::string name, int dim_in, int dim_out, Rule rule,
                           ComplexMatrix matrix)
    : kind_(kind),
      name_(std::move(name)),
      dim_in_(dim_in),
      dim_out_(dim_out),
      rule_(std::move(rule)),
      matrix_(std::move(matrix)) {
    if (dim_in_ < 1 || dim_out_ < 1) throw InvalidArgument("map dimensions must be positive");
}

PureStateMap PureStateMap::linear(const ComplexMatrix& v, double tol) {
    const double defect = isometry_defect(v);
    if (!(defect <= tol)) {
        throw NotIsometry("linear pure-state map must be an isometry (defect " +
                          std::to_string(defect) + ")");
    }
    ComplexMatrix op = v;
    return PureStateMap(Kind::Linear, "linear", static_cast<int>(v.cols()),
                        static_cast<int>(v.rows()),
                        [op](const ComplexMatrix& psi) -> ComplexMatrix { return op * psi; }, v);
}

PureStateMap PureStateMap::constant(const ComplexMatrix& target, int dim_in) {
    if (target.cols() != 1) throw InvalidArgument("constant map target must be a ket");
    ComplexMatrix t = normalized(target);
    return PureStateMap(Kind::Constant, "constant", dim_in, static_cast<int>(t.rows()),
                        [t](const ComplexMatrix&) { return t; }, {});
}

PureStateMap PureStateMap::custom(std::string name, int dim_in, int dim_out, Rule rule) {
    if (!rule) throw InvalidArgument("custom map needs a rule");
    return PureStateMap(Kind::Custom, std::move(name), dim_in, dim_out, std::move(rule), {});
}

ComplexMatrix PureStateMap::operator()(const ComplexMatrix& ket) const {
    if (ket.rows() != dim_in_ || ket.cols() != 1) {
        throw DimensionMismatch("map '" + name_ + "' expects a " + std::to_string(dim_in_) +
                                "x1 ket");
    }
    ComplexMatrix out = rule_(ket);
    if (out.rows() != dim_out_ || out.cols() != 1) {
        throw InvalidState("map '" + name_ + "' produced a ket of the wrong shape");
    }
    return normalized(out);
}

const std::vector<std::string>& zoo_map_names() {
    static const std::vector<std::string> names{"constant", "renormalize", "nonlinear_phase"};
    return names;
}

PureStateMap zoo_map(std::string_view name, int dim, double theta) {
    if (dim < 1) throw InvalidArgument("zoo map dimension must be positive");
    if (name == "constant") return PureStateMap::constant(basis_ket(dim, 0), dim);
    if (name == "renormalize") {
        return PureStateMap::custom("renormalize", dim, dim, [](const ComplexMatrix& psi) {
            return ComplexMatrix(psi.array().square().matrix());
        });
    }
    if (name == "nonlinear_phase") {
        return PureStateMap::custom("nonlinear_phase", dim, dim, [theta](const ComplexMatrix& psi) {
            double expectation = 0.0;
            for (Eigen::Index a = 0; a < psi.rows(); ++a) {
                expectation += (a % 2 == 0 ? 1.0 : -1.0) * std::norm(psi(a, 0));
            }
            ComplexMatrix out = psi;
            for (Eigen::Index a = 0; a < psi.rows(); ++a) {
                out(a, 0) *= std::polar(1.0, theta * expectation * (a % 2 == 0 ? 1.0 : -1.0));
            }
            return out;
        });
    }
    throw UnknownName("unknown zoo map '" + std::string(name) + "'");
}

ComplexMatrix pushforward(const PureStateMap& f, const Ensemble& e) {
    if (f.dim_in() != e.dim()) throw DimensionMismatch("map and ensemble dimensions differ");
    ComplexMatrix rho = ComplexMatrix::Zero(f.dim_out(), f.dim_out());
    for (std::size_t x = 0; x < e.size(); ++x) {
        if (e.weights()[x] == 0.0) continue;
        rho += e.weights()[x] * projector(f(e.kets()[x]));
    }
    return rho;
}

double convex_linearity_gap(const PureStateMap& f, int dim, int pairs, RngSeed seed) {
    if (pairs < 1) throw InvalidArgument("pairs must be at least 1");
    if (f.dim_in() != dim) throw DimensionMismatch("map dimension differs from requested dim");
    double gap = 0.0;
    for (int p = 0; p < pairs; ++p) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
        const ComplexMatrix rho = random_density(dim, rng);
        const int extra = rng.uniform_int(0, 2);
        const auto [e1, e2] = random_indistinguishable_pair(
            rho, {dim, dim + extra}, derive_seed(seed, 0x9a1 + static_cast<std::uint64_t>(p)));
        gap = std::max(gap, 0.5 * trace_norm(pushforward(f, e1) - pushforward(f, e2)));
    }
    return gap;
}

// ---------------------------------------------------------------------------

namespace {

// For a rank-one projector P = aa†, recovers a (up to phase).
ComplexMatrix rank_one_vector(const ComplexMatrix& p) {
    Eigen::Index best = 0;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
        const double n = p.col(j).norm();
        if (n > best_norm) {
            best_norm = n;
            best = j;
        }
    }
    if (best_norm <= 0.0) return ComplexMatrix::Zero(p.rows(), 1);
    return p.col(best) / best_norm;
}

// Alice ⊗ Bob amplitude matrix with rows √p_x ψ_xᵀ, zero-padded to n rows.
ComplexMatrix amplitude_matrix(const Ensemble& e, int n) {
    ComplexMatrix m = ComplexMatrix::Zero(n, e.dim());
    for (std::size_t x = 0; x < e.size(); ++x) {
        m.row(static_cast<Eigen::Index>(x)) = std::sqrt(e.weights()[x]) * e.kets()[x].transpose();
    }
    return m;
}

// Orthonormal basis of the complement of range(b), preferring to stay close
// to `hint` (which spans a complement of the same size).
ComplexMatrix complement_basis(const ComplexMatrix& b, const ComplexMatrix& hint) {
    const auto n = b.rows();
    const auto k = n - b.cols();
    if (k == 0) return ComplexMatrix(n, 0);
    const ComplexMatrix c = (ComplexMatrix::Identity(n, n) - b * b.adjoint()) * hint;
    const ComplexMatrix gram = c.adjoint() * c;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram);
    if (solver.eigenvalues()(0) > 1e-8) return c * solver.operatorInverseSqrt();
    Eigen::HouseholderQR<ComplexMatrix> qr(b);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    return q.rightCols(k);
}

}  // namespace

std::vector<std::pair<double, ComplexMatrix>> bob_conditionals(const SteeringScenario& s,
                                                                const ProjectiveMeasurement& m) {
    const ComplexMatrix amps = unvec(s.shared_state, s.alice_dim, s.bob_dim);
    std::vector<std::pair<double, ComplexMatrix>> out;
    for (const auto& p : m.projectors) {
        const ComplexMatrix a = rank_one_vector(p);
        ComplexMatrix bob = (a.adjoint() * amps).transpose();
        const double prob = bob.squaredNorm();
        if (prob > 0.0) bob /= std::sqrt(prob);
        out.emplace_back(prob, std::move(bob));
    }
    return out;
}

double scenario_invariant_defect(const SteeringScenario& s) {
    double defect = 0.0;
    const ComplexMatrix id = identity(s.alice_dim);
    auto check = [&](const ProjectiveMeasurement& m, const Ensemble& target) {
        ComplexMatrix sum = ComplexMatrix::Zero(s.alice_dim, s.alice_dim);
        for (const auto& p : m.projectors) {
            sum += p;
            defect = std::max(defect, (p * p - p).norm());
            defect = std::max(defect, (p - p.adjoint()).norm());
        }
        defect = std::max(defect, (sum - id).norm());
        const auto conditionals = bob_conditionals(s, m);
        for (std::size_t k = 0; k < conditionals.size(); ++k) {
            const auto& [prob, ket] = conditionals[k];
            const double weight = k < target.size() ? target.weights()[k] : 0.0;
            defect = std::max(defect, std::abs(prob - weight));
            if (prob > kRankThreshold && k < target.size()) {
                defect = std::max(defect, (projector(ket) - projector(target.kets()[k])).norm());
            }
        }
    };
    check(s.m1, s.target1);
    check(s.m2, s.target2);
    return defect;
}

SteeringScenario build_steering_scenario(const Ensemble& e1, const Ensemble& e2, double tol) {
    if (!indistinguishable(e1, e2, tol)) {
        throw NotIndistinguishable("ensembles have different densities");
    }
    const int n = static_cast<int>(std::max(e1.size(), e2.size()));
    const int d = e1.dim();
    const ComplexMatrix m1 = amplitude_matrix(e1, n);
    const ComplexMatrix m2 = amplitude_matrix(e2, n);

    // Both amplitude matrices purify the same density, so a unitary U on
    // Alice with U m1 = m2 exists. On range(m1) it is m2 V S⁻¹ A_r†.
    Eigen::JacobiSVD<ComplexMatrix> svd(m1, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    while (rank < sv.size() && sv(rank) > 1e-9) ++rank;
    const ComplexMatrix a_r = svd.matrixU().leftCols(rank);
    const ComplexMatrix a_c = svd.matrixU().rightCols(n - rank);
    const ComplexMatrix b = m2 * svd.matrixV().leftCols(rank) *
                            sv.head(rank).cwiseInverse().asDiagonal();
    const ComplexMatrix b_c = complement_basis(b, a_c);
    const ComplexMatrix u = b * a_r.adjoint() + b_c * a_c.adjoint();

    SteeringScenario s{n, d, vec(m1), {}, {}, e1, e2};
    for (int y = 0; y < n; ++y) {
        s.m1.projectors.push_back(projector(basis_ket(n, y)));
        const ComplexMatrix a = u.adjoint() * basis_ket(n, y);
        s.m2.projectors.push_back(projector(a));
    }
    return s;
}

double signaling_gap(const PureStateMap& f, const SteeringScenario& s) {
    auto bob_density = [&](const ProjectiveMeasurement& m) {
        ComplexMatrix rho = ComplexMatrix::Zero(f.dim_out(), f.dim_out());
        for (const auto& [prob, ket] : bob_conditionals(s, m)) {
            if (prob <= 1e-14) continue;
            rho += prob * projector(f(ket));
        }
        return rho;
    };
    return 0.5 * trace_norm(bob_density(s.m1) - bob_density(s.m2));
}

NonlinearityReport nonlinearity_witness(const PureStateMap& f, double tol, int random_probes,
                                        RngSeed seed) {
    const int d = f.dim_in();
    NonlinearityReport report;
    report.candidate = ComplexMatrix::Zero(f.dim_out(), d);
    std::vector<ComplexMatrix> columns;
    for (int i = 0; i < d; ++i) columns.push_back(f(basis_ket(d, i)));
    report.candidate.col(0) = columns[0];

    const double s = M_SQRT1_2;
    const Complex imag(0.0, 1.0);
    const ComplexMatrix& c0 = columns[0];
    for (int j = 1; j < d; ++j) {
        const ComplexMatrix plus = s * (basis_ket(d, 0) + basis_ket(d, j));
        const ComplexMatrix plus_i = s * (basis_ket(d, 0) + imag * basis_ket(d, j));
        const ComplexMatrix& cj = columns[j];
        const ComplexMatrix diag = projector(c0) + projector(cj);
        // A linear L with L|0> = c0, L|j> = e^{iφ} cj has cross term X = e^{iφ} cj c0†,
        // and the two probes determine X = (F+ − i F+i) / 2.
        const ComplexMatrix f_plus = 2.0 * projector(f(plus)) - diag;
        const ComplexMatrix f_plus_i = 2.0 * projector(f(plus_i)) - diag;
        const ComplexMatrix cross = 0.5 * (f_plus - imag * f_plus_i);
        const Complex z = (cj.adjoint() * cross * c0)(0, 0);
        const double deviation =
            std::max(std::abs(std::abs(z) - 1.0), (cross - z * cj * c0.adjoint()).norm());
        report.max_deviation = std::max(report.max_deviation, deviation);
        report.candidate.col(j) = std::abs(z) > 0.0 ? ComplexMatrix(z / std::abs(z) * cj) : cj;
        if (deviation > tol) {
            report.witness = LinearityWitness{"plus_pair", j, deviation, plus};
            return report;
        }
    }

    Rng rng(seed);
    for (int k = 0; k < random_probes; ++k) {
        const ComplexMatrix psi = random_pure(d, rng);
        const ComplexMatrix lpsi = report.candidate * psi;
        const double deviation = (projector(lpsi) - projector(f(psi))).norm();
        report.max_deviation = std::max(report.max_deviation, deviation);
        if (deviation > tol) {
            report.witness = LinearityWitness{"random", k, deviation, psi};
            return report;
        }
    }
    report.is_linearizable = true;
    return report;
}

}  // namespace loclab
