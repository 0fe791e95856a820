// oracle.hpp — independent brute-force ground truth. Sector Hamiltonians are
// assembled directly from ladder matrix elements (a separate code path from
// the operator-algebra module), diagonalized densely per K-sector on a
// doubling truncation schedule, and QES roots are matched against the
// converged spectrum.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "rashba/params.hpp"

namespace rashba {

// Real symmetric sector matrix at truncation n1_max = n2_max = truncation for
// the sector with K-eigenvalue twice_k/2 (twice_k odd). Takes raw doubles so
// sign-flipped couplings can be probed directly.
Eigen::MatrixXd sector_matrix(double r, double b, double kappa, int twice_k, int truncation);

// Ascending eigenvalues of one sector block.
std::vector<double> sector_eigenvalues(double r, double b, double kappa, int twice_k,
                                       int truncation);

struct SectorLevels {
    int twice_k = 0;
    double k_value() const { return twice_k / 2.0; }
    int dimension = 0;                 // at the final truncation
    std::vector<double> energies;      // lowest `levels`, ascending
    std::vector<double> change_abs;    // |change| between the two largest truncations
    std::vector<bool> converged;       // relative change < rel_tol per level
};

struct MergedLevel {
    double energy;
    int twice_k;
    int level_index;
    double change_abs;
    bool converged;
};

struct ConvergedSpectrum {
    int levels = 0;
    double rel_tol = 0.0;
    std::vector<int> truncations;      // schedule actually run
    std::vector<SectorLevels> sectors; // ascending twice_k
    bool fully_converged = false;
    // The merged level list is complete below this energy: every retained
    // sector reports at least `levels` states (or its whole block), and the
    // outermost retained sectors' ground states lie above it, so sectors
    // beyond the retained range cannot contribute lower levels.
    double trusted_upper = 0.0;

    std::vector<MergedLevel> merged() const;  // ascending by energy
    nlohmann::json sectors_to_json() const;   // [{k_value, dimension, lowest_eigenvalues}]
};

struct OracleOptions {
    int max_abs_twice_k = 0;  // 0: derived from `levels`
    int truncation_start = 10;
    int truncation_cap = 160;
};

// Doubles the truncation (10, 20, 40, ...) until the lowest `levels`
// eigenvalues of every retained sector move by less than rel_tol relatively,
// or the cap is hit (affected levels are then marked non-converged, never
// silently accepted).
ConvergedSpectrum converged_spectrum(const DimensionlessParams& p, int levels, double rel_tol,
                                     const OracleOptions& opts = {});

struct RootValidation {
    int j = 0;
    std::complex<double> root;
    double consistency_residual = 0.0;
    bool series_terminating = false;
    bool in_range = false;
    double nearest_level = 0.0;  // meaningful only when in_range
    int nearest_twice_k = 0;
    double gap = 0.0;
    double convergence_estimate = 0.0;
    std::string verdict;  // "confirmed" | "unconfirmed" | "out-of-range"
};

struct ValidationReport {
    int j_max = 0;
    std::vector<RootValidation> rows;  // one per real root, ordered by (j, root)
    int complex_roots = 0;             // counted so nothing is silently dropped
    int confirmed = 0;
    int unconfirmed = 0;
    int out_of_range = 0;
    // verdict vs series-termination cross-tabulation
    int terminating_confirmed = 0;
    int terminating_unconfirmed = 0;
    int nonterminating_confirmed = 0;
    int nonterminating_unconfirmed = 0;

    nlohmann::json to_json() const;
    std::string to_csv() const;  // j,root_re,root_im,nearest_level,gap,consistency_residual,verdict
};

// Verdict: confirmed iff gap < max(1e-6, 10 x the matched level's convergence
// estimate); roots above the trusted range are marked out-of-range rather
// than matched.
ValidationReport validate(const DimensionlessParams& p, int j_max,
                          const ConvergedSpectrum& spectrum);

}  // namespace rashba
