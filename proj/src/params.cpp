#include "rashba/params.hpp"

#include <cmath>

namespace rashba {

void PhysicalParams::validate() const {
    if (!(confinement_frequency > 0.0))
        throw InvalidParameter("confinement_frequency", "must be strictly positive");
    if (!(hbar > 0.0)) throw InvalidParameter("hbar", "must be strictly positive");
    if (!(effective_mass > 0.0)) throw InvalidParameter("effective_mass", "must be strictly positive");
    if (cyclotron_frequency < 0.0) throw InvalidParameter("cyclotron_frequency", "must be >= 0");
    if (rashba_strength < 0.0) throw InvalidParameter("rashba_strength", "must be >= 0");
}

DimensionlessParams::DimensionlessParams(Rational r, Rational b, Rational kappa)
    : r_(std::move(r)), b_(std::move(b)), kappa_(std::move(kappa)) {
    if (r_ < 0 || r_ >= 2)
        throw InvalidParameter("r", "frequency ratio must satisfy 0 <= r < 2, got " + to_string(r_));
    if (kappa_ < 0)
        throw InvalidParameter("kappa", "coupling must be >= 0, got " + to_string(kappa_));
}

DimensionlessParams reduce(const PhysicalParams& physical) {
    physical.validate();
    const double w0 = physical.confinement_frequency;
    const double wc = physical.cyclotron_frequency;
    const double omega = std::sqrt(w0 * w0 + 0.25 * wc * wc);
    const double hw = physical.hbar * omega;
    const double r = wc / omega;
    const double b = physical.g_factor * physical.bohr_magneton_times_B / (2.0 * hw);
    const double kappa =
        physical.rashba_strength * std::sqrt(physical.effective_mass * omega / physical.hbar) / hw;
    return DimensionlessParams(rational_from_double(r), rational_from_double(b),
                               rational_from_double(kappa));
}

BlockConstants block_constants(int j, const DimensionlessParams& p) {
    if (j < 0) throw InvalidParameter("j", "block index must be >= 0");
    BlockConstants bc;
    bc.j = j;
    bc.eps_j = Rational(1, 2) - j + Rational(3 + 2 * j) * p.r() / 4;
    bc.eps_b = p.r() / 4 - p.b() + Rational(1, 2);
    return bc;
}

}  // namespace rashba
