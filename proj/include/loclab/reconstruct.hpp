#pragma once

// Recovery of the linear representative of a transformation family.
//
// Pure theory: with χ = L_A(Φ+) on B ⊗ A, the operator is V = √d_A unvec(χ),
// i.e. L_[-](ψ) = d_A (I ⊗ <Φ+|)(χ ⊗ ψ).
// Mixed theory: J = d_A L_A(Φ+) is the Choi matrix on B ⊗ A and the channel
// acts as E(ρ) = Tr_A[J (I_B ⊗ ρᵀ)].
//
// Extraction never assumes the family satisfies the axioms; `certify` runs
// the checks before trusting a classification.

#include "loclab/latrans.hpp"
#include "loclab/linalg.hpp"

#include <string>
#include <vector>

namespace loclab {

enum class OperatorClass { Unitary, Isometry, NonIsometric };

const char* to_string(OperatorClass c);

struct ExtractedOperator {
    ComplexMatrix matrix;  // d_B × d_A
    double isometry_defect = 0.0;
    OperatorClass classification = OperatorClass::NonIsometric;
};

struct ChoiMatrix {
    ComplexMatrix matrix;  // (d_B d_A) × (d_B d_A), B first
    int dim_in = 1;
    int dim_out = 1;
    double cp_defect = 0.0;  // max(0, -λ_min)
    double tp_defect = 0.0;  // ‖Tr_B J − I_A‖_F

    /// λ_min ≥ −rel_tol · Tr J.
    bool completely_positive(double rel_tol = 1e-8) const;
    bool trace_preserving(double tol = 1e-8) const;
};

ExtractedOperator extract_pure_operator(const TransFamily& l, double tol = 1e-8);
ChoiMatrix extract_choi(const TransFamily& l);

/// Builds the Choi matrix record (with defects) from a raw matrix on B ⊗ A.
ChoiMatrix make_choi(ComplexMatrix j, int dim_in, int dim_out);

/// E(ρ) = Tr_A[J (I_B ⊗ ρᵀ)].
ComplexMatrix apply_choi(const ChoiMatrix& j, const ComplexMatrix& rho);
/// (E ⊗ id_X)(ρ) for ρ on A ⊗ X.
ComplexMatrix apply_choi_extended(const ChoiMatrix& j, const ComplexMatrix& rho, int env_dim);
/// E(ρ) = d (I_B ⊗ <Φ+|)(J ⊗ ρ)(I_B ⊗ |Φ+>), the teleportation form.
ComplexMatrix apply_choi_sandwich(const ChoiMatrix& j, const ComplexMatrix& rho);
/// Choi matrix of E_second ∘ E_first.
ChoiMatrix compose_choi(const ChoiMatrix& second, const ChoiMatrix& first);

struct EquivalenceReport {
    std::vector<int> env_dims;
    int trials = 0;
    double max_distance = 0.0;
    int worst_trial = -1;
    int worst_env_dim = 0;
    ComplexMatrix worst_state;
    double tolerance = 0.0;
    bool pass = false;
};

/// Compares L_X with (V ⊗ I_X) on random states (vector norm).
EquivalenceReport verify_equivalence(const TransFamily& l, const ExtractedOperator& extracted,
                                     const SamplingConfig& cfg);
/// Compares L_X with (E ⊗ id_X) on random states (trace distance).
EquivalenceReport verify_equivalence(const TransFamily& l, const ChoiMatrix& extracted,
                                     const SamplingConfig& cfg);

struct SwapReport {
    int trials = 0;
    double max_gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// ‖L_{XX'}((I⊗S)ρ(I⊗S)†) − (I⊗S) L_{X'X}(ρ) (I⊗S)†‖₁ for ρ on A ⊗ X' ⊗ X,
/// S the swap X' ⊗ X → X ⊗ X'. Mixed families only.
SwapReport check_swap_compatibility(const TransFamily& l, const SamplingConfig& cfg);

enum class Verdict { LocallyApplicable, Violating };

const char* to_string(Verdict v);

struct Certificate {
    Verdict verdict = Verdict::Violating;
    TheoryTag theory = TheoryTag::Pure;
    /// "unitary", "isometry", "channel", or the failed class
    /// ("non_isometric", "not_completely_positive", "not_trace_preserving").
    std::string classification;
    ComplexMatrix matrix;  // extracted operator or Choi matrix
    double isometry_defect = 0.0;
    double cp_defect = 0.0;
    double tp_defect = 0.0;
    double equivalence_max_gap = 0.0;
    AxiomReport axioms;
    std::vector<Witness> witnesses;
};

Certificate certify(const TransFamily& l, const SamplingConfig& cfg);

}  // namespace loclab
