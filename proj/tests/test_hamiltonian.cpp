#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "rashba/hamiltonian.hpp"

using namespace rashba;

namespace {
DimensionlessParams params(const Rational& r, const Rational& b, const Rational& kappa) {
    return DimensionlessParams(r, b, kappa);
}
}  // namespace

TEST_CASE("decoupled isotropic limit is diagonal with n1 + n2 + 1") {
    const FockBasis basis{4, 4};
    const auto pair = build_pair(basis, params(Rational(0), Rational(0), Rational(0)));
    for (int i = 0; i < basis.dimension(); ++i) {
        const auto st = basis.state(i);
        CHECK(pair.H_direct.entries(i, i).real() == doctest::Approx(st.n1 + st.n2 + 1.0));
        for (int k = 0; k < basis.dimension(); ++k)
            if (k != i) CHECK(std::abs(pair.H_direct.entries(i, k)) == 0.0);
    }
}

TEST_CASE("single coupling matrix element carries -kappa") {
    const FockBasis basis{3, 3};
    const auto pair = build_pair(basis, params(Rational(1, 2), Rational(1, 4), Rational(3, 10)));
    const auto elem =
        pair.H_direct.entries(basis.index(0, 1, Spin::up), basis.index(0, 0, Spin::down));
    CHECK(elem.real() == doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(elem.imag() == 0.0);
}

TEST_CASE("ladder-form and generator-form builds agree entrywise") {
    const FockBasis basis{6, 6};
    const auto fixed = build_pair(basis, params(Rational(1, 2), Rational(1, 4), Rational(3, 10)));
    CHECK(fixed.interior_difference(2) < 1e-13);
    CHECK(fixed.hermiticity_defect() < 1e-13);

    std::mt19937 rng(2218);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = params(Rational(static_cast<int>(rng() % 15), 8),
                              Rational(static_cast<int>(rng() % 17) - 8, 8),
                              Rational(static_cast<int>(rng() % 13), 10));
        const auto pair = build_pair(basis, p);
        CHECK(pair.interior_difference(2) < 1e-13);
        CHECK(pair.hermiticity_defect() < 1e-13);
        CHECK(k_commutator_residual(pair, 1) < 1e-13);
    }
}

TEST_CASE("K-sector structure") {
    const FockBasis basis{5, 5};
    const auto p = params(Rational(1, 2), Rational(1, 4), Rational(3, 10));
    const auto pair = build_pair(basis, p);
    const auto sectors = k_sectors(pair, 1);

    SUBCASE("k labels follow n1 - n2 -+ 1/2") {
        const int i_up00 = basis.index(0, 0, Spin::up);
        const int i_down10 = basis.index(1, 0, Spin::down);
        for (const auto& sec : sectors) {
            const bool has_up00 =
                std::count(sec.member_indices.begin(), sec.member_indices.end(), i_up00) > 0;
            const bool has_down10 =
                std::count(sec.member_indices.begin(), sec.member_indices.end(), i_down10) > 0;
            if (has_up00 || has_down10) {
                CHECK(sec.twice_k == 1);  // k = +1/2 for both
                CHECK(has_up00);
                CHECK(has_down10);
                // the two states couple through the kappa a1+ sigma- term
                const auto pos = [&](int idx) {
                    return std::find(sec.member_indices.begin(), sec.member_indices.end(), idx) -
                           sec.member_indices.begin();
                };
                CHECK(std::abs(sec.H_block(pos(i_down10), pos(i_up00))) ==
                      doctest::Approx(0.3).epsilon(1e-15));
            }
        }
    }

    SUBCASE("sectors partition the basis") {
        std::set<int> all;
        for (const auto& sec : sectors)
            for (int i : sec.member_indices) CHECK(all.insert(i).second);
        CHECK(static_cast<int>(all.size()) == basis.dimension());
    }

    SUBCASE("sector count matches the distinct label count") {
        std::set<int> labels;
        for (int i = 0; i < basis.dimension(); ++i) {
            const auto st = basis.state(i);
            labels.insert(2 * (st.n1 - st.n2) + (st.s == Spin::up ? 1 : -1));
        }
        CHECK(sectors.size() == labels.size());
    }

    SUBCASE("off-sector entries vanish identically") {
        std::vector<int> sector_of(basis.dimension(), -1);
        for (std::size_t s = 0; s < sectors.size(); ++s)
            for (int i : sectors[s].member_indices) sector_of[i] = static_cast<int>(s);
        for (int a = 0; a < basis.dimension(); ++a)
            for (int c = 0; c < basis.dimension(); ++c)
                if (sector_of[a] != sector_of[c])
                    CHECK(std::abs(pair.H_direct.entries(a, c)) == 0.0);
    }

    SUBCASE("blocks are Hermitian with real spectrum") {
        for (const auto& sec : sectors) {
            CHECK((sec.H_block - sec.H_block.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        }
    }

    SUBCASE("edge tagging matches the margin") {
        for (const auto& sec : sectors)
            for (std::size_t i = 0; i < sec.member_indices.size(); ++i) {
                const auto st = basis.state(sec.member_indices[i]);
                CHECK(sec.is_edge[i] == (st.n1 > basis.n1_max - 1 || st.n2 > basis.n2_max - 1));
            }
    }

    CHECK_THROWS_AS(k_sectors(pair, 0), std::invalid_argument);
}

TEST_CASE("full spectrum equals the multiset union of sector spectra") {
    const FockBasis basis{5, 5};
    const auto pair = build_pair(basis, params(Rational(1, 2), Rational(1, 4), Rational(3, 10)));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> full(pair.H_direct.entries);
    std::vector<double> whole(full.eigenvalues().data(),
                              full.eigenvalues().data() + basis.dimension());

    std::vector<double> merged;
    for (const auto& sec : k_sectors(pair, 1)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> block(sec.H_block);
        for (int i = 0; i < block.eigenvalues().size(); ++i)
            merged.push_back(block.eigenvalues()(i));
    }
    std::sort(whole.begin(), whole.end());
    std::sort(merged.begin(), merged.end());
    REQUIRE(whole.size() == merged.size());
    for (std::size_t i = 0; i < whole.size(); ++i)
        CHECK(whole[i] == doctest::Approx(merged[i]).epsilon(1e-10));
}

TEST_CASE("decoupled closed form matches the diagonal at kappa = 0") {
    const FockBasis basis{6, 6};
    const double r = 0.75, b = -0.4;
    const auto pair = build_pair(
        basis, params(rational_from_double(r), rational_from_double(b), Rational(0)));
    for (int i = 0; i < basis.dimension(); ++i) {
        const auto st = basis.state(i);
        CHECK(pair.H_direct.entries(i, i).real() ==
              doctest::Approx(decoupled_energy(st.n1, st.n2, st.s, r, b)).epsilon(1e-14));
    }
}
