#include "rashba/hamiltonian.hpp"

#include <algorithm>
#include <map>

namespace rashba {

double HamiltonianPair::interior_difference(int margin) const {
    const auto p = interior_projector(basis, margin);
    return ((H_direct - H_algebraic) * p).entries.cwiseAbs().maxCoeff();
}

double HamiltonianPair::hermiticity_defect() const {
    return (H_direct.entries - H_direct.entries.adjoint()).cwiseAbs().maxCoeff();
}

HamiltonianPair build_pair(const FockBasis& basis, const DimensionlessParams& p) {
    const auto bos = boson_operators(basis);
    const auto pauli = pauli_operators(basis);
    const auto id = TruncatedOperator::identity(basis);
    const std::complex<double> r{p.r_d()};
    const std::complex<double> b{p.b_d()};
    const std::complex<double> kap{p.kappa_d()};

    TruncatedOperator h_direct =
        (bos.a1_dag * bos.a1 + bos.a2_dag * bos.a2 + id) +
        (r / 2.0) * (bos.a1_dag * bos.a1 - bos.a2_dag * bos.a2) -
        kap * ((bos.a2_dag - bos.a1) * pauli.sigma_plus + (bos.a2 - bos.a1_dag) * pauli.sigma_minus) +
        b * pauli.sigma_zero;

    const auto g = osp22_generators(basis);
    TruncatedOperator h_algebraic =
        std::complex<double>(2.0) * g.J_zero + (r / 2.0) * g.N -
        kap * (g.V_plus - g.V_minus + g.W_minus - g.W_plus) +
        (std::complex<double>(2.0) * b) * (g.N - g.K);

    return HamiltonianPair{basis, p, std::move(h_direct), std::move(h_algebraic)};
}

std::vector<KSector> k_sectors(const HamiltonianPair& pair, int margin) {
    if (margin < 1) throw std::invalid_argument("k_sectors: margin must be >= 1");
    const auto& basis = pair.basis;

    std::map<int, std::vector<int>> members;  // twice_k -> basis indices
    for (int i = 0; i < basis.dimension(); ++i) {
        const auto st = basis.state(i);
        const int twice_k = 2 * (st.n1 - st.n2) + (st.s == Spin::up ? 1 : -1);
        members[twice_k].push_back(i);
    }

    std::vector<KSector> sectors;
    sectors.reserve(members.size());
    for (auto& [twice_k, idxs] : members) {
        KSector sec;
        sec.twice_k = twice_k;
        sec.member_indices = std::move(idxs);
        sec.is_edge.reserve(sec.member_indices.size());
        for (int i : sec.member_indices) {
            const auto st = basis.state(i);
            sec.is_edge.push_back(st.n1 > basis.n1_max - margin || st.n2 > basis.n2_max - margin);
        }
        const int d = static_cast<int>(sec.member_indices.size());
        sec.H_block.resize(d, d);
        for (int a = 0; a < d; ++a)
            for (int c = 0; c < d; ++c)
                sec.H_block(a, c) = pair.H_direct.entries(sec.member_indices[a], sec.member_indices[c]);
        sectors.push_back(std::move(sec));
    }
    return sectors;
}

double decoupled_energy(int n1, int n2, Spin s, double r, double b) {
    return n1 + n2 + 1 + 0.5 * r * (n1 - n2) + (s == Spin::up ? -b : b);
}

double k_commutator_residual(const HamiltonianPair& pair, int margin) {
    const auto& basis = pair.basis;
    auto k_op = TruncatedOperator::zero(basis);
    for (int i = 0; i < basis.dimension(); ++i) {
        const auto st = basis.state(i);
        k_op.entries(i, i) = (st.n1 - st.n2) + (st.s == Spin::up ? 0.5 : -0.5);
    }
    const auto p = interior_projector(basis, margin);
    return (commutator(k_op, pair.H_direct) * p).entries.cwiseAbs().maxCoeff();
}

}  // namespace rashba
