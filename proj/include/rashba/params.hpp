// params.hpp — reduction of raw physical inputs to the dimensionless set
// (frequency ratio r, Zeeman strength b, coupling kappa) used everywhere else.
// All downstream energies are expressed in units of the effective quantum
// h_bar * omega, with omega = sqrt(omega0^2 + (omega_c/2)^2).

#pragma once

#include <stdexcept>
#include <string>

#include "rashba/rational.hpp"

namespace rashba {

struct InvalidParameter : std::invalid_argument {
    explicit InvalidParameter(const std::string& field, const std::string& why)
        : std::invalid_argument("invalid parameter '" + field + "': " + why), field_name(field) {}
    std::string field_name;
};

struct PhysicalParams {
    double effective_mass = 1.0;         // m*
    double confinement_frequency = 1.0;  // omega_0 > 0
    double cyclotron_frequency = 0.0;    // omega_c >= 0
    double g_factor = 0.0;               // g (sign free)
    double bohr_magneton_times_B = 0.0;  // mu * B, an energy
    double rashba_strength = 0.0;        // lambda_R >= 0, energy * length
    double hbar = 1.0;

    void validate() const;
};

// Exact rationals are kept as the primary representation so downstream
// determinant work stays in exact arithmetic whenever inputs were exact.
class DimensionlessParams {
public:
    DimensionlessParams(Rational r, Rational b, Rational kappa);

    const Rational& r() const { return r_; }
    const Rational& b() const { return b_; }
    const Rational& kappa() const { return kappa_; }
    double r_d() const { return to_double(r_); }
    double b_d() const { return to_double(b_); }
    double kappa_d() const { return to_double(kappa_); }

private:
    Rational r_, b_, kappa_;
};

struct BlockConstants {
    int j = 0;
    Rational eps_j;  // 1/2 - j + (3 + 2j) r / 4
    Rational eps_b;  // r/4 - b + 1/2
};

// omega = sqrt(omega0^2 + (omega_c/2)^2); r = omega_c/omega;
// b = g * muB / (2 h_bar omega); kappa = lambda_R sqrt(m* omega/h_bar)/(h_bar omega).
// The irrational square root forces this path through doubles; each result is
// then stored as its exact dyadic rational.
DimensionlessParams reduce(const PhysicalParams& physical);

BlockConstants block_constants(int j, const DimensionlessParams& p);

}  // namespace rashba
