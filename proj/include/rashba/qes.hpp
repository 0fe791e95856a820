// qes.hpp — the quasi-exactly-solvable block family.
//
// For each block index j >= 0 a 2(j+1)-dimensional constant matrix C is
// generated from the three-term recurrence; the candidate exact eigenvalues
// are the roots of det(C - E I). The same matrix is regenerated independently
// from a single-variable differential operator acting on polynomial spinors
// (p of degree <= j, q of degree <= j+1 with q(0) = 0), which is the check
// that catches transcription slips in published closed forms.

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "rashba/params.hpp"
#include "rashba/polynomial.hpp"

namespace rashba {

// Exact-coefficient spinor. p holds z^0..z^j of the upper polynomial; q holds
// z^0..z^(j+1) of the lower one. The lower basis starts at z^1: inputs must
// have q[0] == 0, while outputs may carry a nonzero q[0] (it lies outside the
// block basis and is reported, never dropped).
struct PolynomialSpinor {
    int j = 0;
    std::vector<Rational> p;
    std::vector<Rational> q;

    static PolynomialSpinor zero(int j);
    static PolynomialSpinor basis_p(int j, int n);  // (z^n, 0)
    static PolynomialSpinor basis_q(int j, int m);  // (0, z^m), m in [1, j+1]
};

// Constant matrix C with M(E) = C - E I, in the interleaved basis
// p0, q1, p1, q2, ..., pj, q(j+1)  (p_n at row 2n, q_(n+1) at row 2n+1).
// Band pattern per row:
//   p_n row:     kappa (n+1) on q_n | 2n + eps_j + eps_b | -kappa on q_(n+1)
//   q_(n+1) row: kappa (j-n) on p_n | 2n + eps_j - eps_b | +kappa on p_(n+1)
// The q_(j+1) row decouples (its p_j coefficient vanishes at n = j), closing
// the block.
struct QesBlock {
    int j = 0;
    Rational eps_j, eps_b, kappa;
    std::vector<std::vector<Rational>> C;

    int dimension() const { return 2 * (j + 1); }
    Eigen::MatrixXd C_double() const;
};

QesBlock build_block(int j, const BlockConstants& bc, const Rational& kappa);

// Result of applying the E-independent part of the block differential
// operator to a polynomial spinor, in exact arithmetic:
//   upper: 2 z p' + (eps_j + eps_b) p + kappa [ (z q)' - q/z ]
//   lower: 2 z q' - 2 q + (eps_j - eps_b) q + kappa [ (1 + j z) p - z^2 p' ]
// upper_overflow is the z^(j+1) coefficient of the upper channel — the first
// out-of-block recurrence row, i.e. the series-termination defect.
struct HtildeResult {
    PolynomialSpinor out;
    Rational upper_overflow;
};

HtildeResult htilde_apply(const PolynomialSpinor& phi, int j, const BlockConstants& bc,
                          const Rational& kappa);

// Matrix of htilde_apply on the monomial spinor basis, columns assembled by
// applying the operator to each basis element. Must equal build_block's C
// entry-for-entry; kept as a separate code path on purpose.
std::vector<std::vector<Rational>> htilde_matrix(int j, const BlockConstants& bc,
                                                 const Rational& kappa);

using EnergyPolynomial = Polynomial;  // exact coefficients of powers of E

// det(C - E I) by the tridiagonal continuant recurrence (the block is
// tridiagonal in the interleaved basis).
EnergyPolynomial det_energy_continuant(const QesBlock& block);
// det(C - E I) by fraction-free (Bareiss) scalar determinants at dim+1
// integer nodes followed by exact Lagrange interpolation.
EnergyPolynomial det_energy_interpolated(const QesBlock& block);
// Runs both methods, requires exact agreement and a +1 leading coefficient.
EnergyPolynomial det_polynomial(const QesBlock& block);

nlohmann::json polynomial_to_json(const Polynomial& poly);

struct QesRoot {
    std::complex<double> value;
    double residual = 0.0;   // |P(root)| over the evaluation magnitude scale
    int multiplicity = 1;    // cluster size at relative distance 1e-8
    bool is_real(double tol = 1e-10) const { return std::abs(value.imag()) <= tol; }
};

// All 2(j+1) roots, sorted by (Re, Im). Computed both as eigenvalues of C and
// as companion-matrix roots of the exact determinant; disagreement beyond
// 1e-10 throws.
std::vector<QesRoot> qes_roots(const QesBlock& block);

inline constexpr double kSeriesTerminationTol = 1e-10;

struct NullSolution {
    std::vector<std::complex<double>> p;  // z^0..z^j
    std::vector<std::complex<double>> q;  // z^0..z^(j+1), q[0] = 0
    // |kappa (j+2) q_(j+1)| / ||v||: the first out-of-block recurrence row
    // evaluated on the null vector with p_(j+1) = q_(j+2) = 0.
    double consistency_residual = 0.0;
    bool series_terminating() const { return consistency_residual < kSeriesTerminationTol; }
};

// Right null-directions of C - root I (one per vanishing singular value; more
// than one reported when the root is degenerate).
std::vector<NullSolution> null_spinor(const QesBlock& block, std::complex<double> root);

// ---------------------------------------------------------------------------
// Published closed forms and errata checks
// ---------------------------------------------------------------------------

enum class Verdict { match, typo_suspected, mismatch };
std::string to_string(Verdict v);

// Published determinant closed forms for j = 0, 1, 2 (unit effective
// quantum). repair_known_typo replaces the mistyped kappa^2 coefficient in
// the j = 2 form (printed 162, recomputed 16).
EnergyPolynomial printed_determinant(int j, const Rational& eps_j, const Rational& eps_b,
                                     const Rational& kappa, bool repair_known_typo);

struct DiscrepancyReport {
    int j = 0;
    EnergyPolynomial computed;
    EnergyPolynomial printed;                    // as printed, at the given parameters
    std::vector<Rational> coefficient_difference;  // computed - printed, per power of E
    Verdict verdict = Verdict::mismatch;
    std::string note;

    nlohmann::json to_json() const;
};

// Coefficient-exact comparison of the generated determinant against the
// published closed form. The verdict is decided generically: both sides are
// evaluated at the given parameters and at >= 6 deterministic random rational
// (eps_j, eps_b, kappa) triples; "typo_suspected" means the printed form
// fails but the single-coefficient repair matches everywhere.
DiscrepancyReport compare_with_printed(int j, const BlockConstants& bc, const Rational& kappa);

// The published 6x6 matrix transcription shows E+ + 3 on the fifth diagonal
// where the recurrence gives E+ + 4; the published determinant's own leading
// factors side with the recurrence. This check records both facts.
struct TranscriptionCheck {
    Rational recurrence_fifth_diagonal;          // expect eps_+ + 4
    Rational printed_fifth_diagonal;             // eps_+ + 3 as published
    bool recurrence_matches_printed_leading = false;
    bool printed_entry_matches_printed_leading = false;
    nlohmann::json to_json() const;
};
TranscriptionCheck transcription_check(const BlockConstants& bc_j2);

// C(kappa) and C(-kappa) are exactly similar under diag(+1, -1, +1, ...).
bool kappa_flip_similarity_exact(int j, const BlockConstants& bc, const Rational& kappa);

}  // namespace rashba
