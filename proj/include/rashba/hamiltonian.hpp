// hamiltonian.hpp — the spin-boson Hamiltonian built two independent ways,
// plus its decomposition into sectors of the conserved quantity K.
//
// In units of the effective quantum (h_bar omega = 1):
//   H = (a1+a1 + a2+a2 + 1) + (r/2)(a1+a1 - a2+a2)
//       - kappa [ (a2+ - a1) sigma+ + (a2 - a1+) sigma- ] + b sigma0
// and equivalently, through the generator set,
//   H = 2 J0 + (r/2) N - kappa [ V+ - V- + W- - W+ ] + 2 b (N - K).

#pragma once

#include <vector>

#include "rashba/fock.hpp"
#include "rashba/params.hpp"

namespace rashba {

struct HamiltonianPair {
    FockBasis basis;
    DimensionlessParams params;
    TruncatedOperator H_direct;     // ladder-operator form
    TruncatedOperator H_algebraic;  // generator form

    // max entrywise deviation of the two builds on the interior
    double interior_difference(int margin) const;
    double hermiticity_defect() const;
};

HamiltonianPair build_pair(const FockBasis& basis, const DimensionlessParams& p);

// One sector of the conserved quantity K = N - sigma0/2. K is diagonal in the
// product basis with eigenvalue n1 - n2 + 1/2 (spin up) or n1 - n2 - 1/2
// (spin down); sectors are assembled by exact integer arithmetic on labels.
struct KSector {
    int twice_k = 0;  // 2 * k, always odd
    double k_value() const { return twice_k / 2.0; }
    std::vector<int> member_indices;
    std::vector<bool> is_edge;  // truncation-edge states (within `margin` of a cap)
    Eigen::MatrixXcd H_block;
};

// Sectors partition the basis; ordering is by ascending k.
std::vector<KSector> k_sectors(const HamiltonianPair& pair, int margin);

// Closed-form eigenvalue at kappa = 0: n1 + n2 + 1 + (r/2)(n1 - n2) -+ b
// (minus for spin up).
double decoupled_energy(int n1, int n2, Spin s, double r, double b);

// max |[K, H] P_interior| entry
double k_commutator_residual(const HamiltonianPair& pair, int margin);

}  // namespace rashba
