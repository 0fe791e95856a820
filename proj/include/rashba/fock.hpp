// fock.hpp — truncated two-mode boson + spin operator algebra.
//
// All operators are dense complex matrices on the product basis
// |n1, n2, s> with n1 slowest, spin fastest (up before down). Canonical
// relations necessarily break at the truncation boundary, so every
// verification here is restricted to an interior subspace via a margin.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace rashba {

enum class Spin : int { up = 0, down = 1 };

struct FockBasis {
    int n1_max = 0;
    int n2_max = 0;

    int dimension() const { return (n1_max + 1) * (n2_max + 1) * 2; }

    int index(int n1, int n2, Spin s) const {
        return (n1 * (n2_max + 1) + n2) * 2 + static_cast<int>(s);
    }

    struct State {
        int n1;
        int n2;
        Spin s;
    };
    State state(int index) const {
        const int s = index % 2;
        const int rest = index / 2;
        return State{rest / (n2_max + 1), rest % (n2_max + 1), static_cast<Spin>(s)};
    }

    bool operator==(const FockBasis&) const = default;
};

struct TruncatedOperator {
    FockBasis basis;
    Eigen::MatrixXcd entries;

    TruncatedOperator() = default;
    TruncatedOperator(const FockBasis& b, Eigen::MatrixXcd m) : basis(b), entries(std::move(m)) {}
    static TruncatedOperator zero(const FockBasis& b) {
        return {b, Eigen::MatrixXcd::Zero(b.dimension(), b.dimension())};
    }
    static TruncatedOperator identity(const FockBasis& b) {
        return {b, Eigen::MatrixXcd::Identity(b.dimension(), b.dimension())};
    }
};

TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator operator*(std::complex<double> s, const TruncatedOperator& a);
TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b);

// AB - BA / AB + BA; both throw on basis mismatch.
TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator anticommutator(const TruncatedOperator& a, const TruncatedOperator& b);

struct BosonOperators {
    TruncatedOperator a1, a1_dag, a2, a2_dag;
};
BosonOperators boson_operators(const FockBasis& basis);

struct PauliOperators {
    TruncatedOperator sigma_plus;   // |up><down|
    TruncatedOperator sigma_minus;  // |down><up|
    TruncatedOperator sigma_zero;   // diag(-1, +1) on (up, down)
};
PauliOperators pauli_operators(const FockBasis& basis);

// Orthogonal projector onto states with n1 <= n1_max - margin and
// n2 <= n2_max - margin. margin = 0 is the identity.
TruncatedOperator interior_projector(const FockBasis& basis, int margin);

struct Osp22Set {
    FockBasis basis;
    TruncatedOperator J_plus;   // a1+ a2+
    TruncatedOperator J_minus;  // a2 a1
    TruncatedOperator J_zero;   // (a1+a1 + a2+a2 + 1)/2
    TruncatedOperator N;        // a1+a1 - a2+a2
    TruncatedOperator V_plus;   // sigma+ a2+
    TruncatedOperator V_minus;  // sigma+ a1
    TruncatedOperator W_plus;   // sigma- a1+
    TruncatedOperator W_minus;  // sigma- a2
    TruncatedOperator J_total;  // (N - sigma0)/2
    TruncatedOperator K;        // N - sigma0/2
};
Osp22Set osp22_generators(const FockBasis& basis);

// One published relation line instance, checked as printed. When the printed
// form fails, the sign-flipped right-hand side is also tried; a pass there
// marks the line as a suspected sign typo in the published table.
struct RelationCheck {
    std::string name;  // e.g. "[J+,V-] = V+"
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::optional<std::string> corrected_name;  // set when the flipped form passes
    std::optional<double> corrected_residual;
};

struct RelationReport {
    int margin = 0;
    double tolerance = 0.0;
    std::vector<RelationCheck> relations;

    bool all_pass() const;
    // failures whose sign-flipped form passes
    std::vector<const RelationCheck*> typo_suspects() const;
    // failures with no passing correction
    std::vector<const RelationCheck*> hard_failures() const;
    nlohmann::json to_json() const;
};

// Checks every instance of the published commutation/anticommutation table
// plus [K, G] = 0 for each generator, with residuals taken on the interior.
RelationReport verify_relations(const Osp22Set& set, int margin, double tol);

}  // namespace rashba
