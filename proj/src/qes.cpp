#include "rashba/qes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rashba {

PolynomialSpinor PolynomialSpinor::zero(int j) {
    PolynomialSpinor s;
    s.j = j;
    s.p.assign(j + 1, Rational(0));
    s.q.assign(j + 2, Rational(0));
    return s;
}

PolynomialSpinor PolynomialSpinor::basis_p(int j, int n) {
    if (n < 0 || n > j) throw std::invalid_argument("basis_p: n out of range");
    auto s = zero(j);
    s.p[n] = 1;
    return s;
}

PolynomialSpinor PolynomialSpinor::basis_q(int j, int m) {
    if (m < 1 || m > j + 1) throw std::invalid_argument("basis_q: m out of range");
    auto s = zero(j);
    s.q[m] = 1;
    return s;
}

Eigen::MatrixXd QesBlock::C_double() const {
    const int d = dimension();
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) m(i, k) = to_double(C[i][k]);
    return m;
}

QesBlock build_block(int j, const BlockConstants& bc, const Rational& kappa) {
    if (j < 0) throw std::invalid_argument("build_block: j must be >= 0");
    if (bc.j != j) throw std::invalid_argument("build_block: block constants computed for different j");
    QesBlock block;
    block.j = j;
    block.eps_j = bc.eps_j;
    block.eps_b = bc.eps_b;
    block.kappa = kappa;
    const int d = block.dimension();
    block.C.assign(d, std::vector<Rational>(d, Rational(0)));
    for (int n = 0; n <= j; ++n) {
        const int pr = 2 * n;      // p_n row
        const int qr = 2 * n + 1;  // q_(n+1) row
        block.C[pr][pr] = Rational(2 * n) + bc.eps_j + bc.eps_b;
        if (n >= 1) block.C[pr][2 * (n - 1) + 1] = kappa * (n + 1);  // q_n column
        block.C[pr][2 * n + 1] = -kappa;                             // q_(n+1) column
        block.C[qr][qr] = Rational(2 * n) + bc.eps_j - bc.eps_b;
        block.C[qr][2 * n] = kappa * (j - n);                        // p_n column
        if (n + 1 <= j) block.C[qr][2 * (n + 1)] = kappa;            // p_(n+1) column
    }
    return block;
}

HtildeResult htilde_apply(const PolynomialSpinor& phi, int j, const BlockConstants& bc,
                          const Rational& kappa) {
    if (phi.j != j) throw std::invalid_argument("htilde_apply: spinor built for different j");
    if (static_cast<int>(phi.p.size()) > j + 1 || static_cast<int>(phi.q.size()) > j + 2)
        throw std::invalid_argument("htilde_apply: spinor degree bounds exceeded");
    if (!phi.q.empty() && phi.q[0] != 0)
        throw std::invalid_argument("htilde_apply: lower polynomial must vanish at z = 0");

    const Polynomial p{std::vector<Rational>(phi.p)};
    const Polynomial q{std::vector<Rational>(phi.q)};
    const Rational eps_plus = bc.eps_j + bc.eps_b;
    const Rational eps_minus = bc.eps_j - bc.eps_b;
    const Rational two(2);

    // upper: 2 z p' + eps_+ p + kappa [ (z q)' - q/z ]
    const Polynomial upper = two * p.derivative().shift_up() + eps_plus * p +
                             kappa * (q.shift_up().derivative() - q.shift_down());
    // lower: 2 z q' - 2 q + eps_- q + kappa [ p + j z p - z^2 p' ]
    const Polynomial lower = two * q.derivative().shift_up() - two * q + eps_minus * q +
                             kappa * (p + Rational(j) * p.shift_up() -
                                      p.derivative().shift_up(2));

    HtildeResult res;
    res.out = PolynomialSpinor::zero(j);
    for (int n = 0; n <= j; ++n) res.out.p[n] = upper.coeff(n);
    res.upper_overflow = upper.coeff(j + 1);
    if (upper.degree() > static_cast<std::size_t>(j + 1))
        throw std::logic_error("htilde_apply: unexpected upper-channel degree");
    for (int m = 0; m <= j + 1; ++m) res.out.q[m] = lower.coeff(m);
    if (lower.degree() > static_cast<std::size_t>(j + 1))
        throw std::logic_error("htilde_apply: unexpected lower-channel degree");
    return res;
}

std::vector<std::vector<Rational>> htilde_matrix(int j, const BlockConstants& bc,
                                                 const Rational& kappa) {
    const int d = 2 * (j + 1);
    std::vector<std::vector<Rational>> mat(d, std::vector<Rational>(d, Rational(0)));
    const auto fill_column = [&](const PolynomialSpinor& e, int col) {
        const auto res = htilde_apply(e, j, bc, kappa);
        for (int n = 0; n <= j; ++n) mat[2 * n][col] = res.out.p[n];
        for (int m = 1; m <= j + 1; ++m) mat[2 * (m - 1) + 1][col] = res.out.q[m];
    };
    for (int n = 0; n <= j; ++n) fill_column(PolynomialSpinor::basis_p(j, n), 2 * n);
    for (int m = 1; m <= j + 1; ++m) fill_column(PolynomialSpinor::basis_q(j, m), 2 * m - 1);
    return mat;
}

// ---------------------------------------------------------------------------
// determinants
// ---------------------------------------------------------------------------

EnergyPolynomial det_energy_continuant(const QesBlock& block) {
    const int d = block.dimension();
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            if (std::abs(i - k) > 1 && block.C[i][k] != 0)
                throw std::logic_error("det_energy_continuant: block is not tridiagonal");

    // D_0 = 1, D_1 = t_11, D_k = t_kk D_{k-1} - t_{k,k-1} t_{k-1,k} D_{k-2}
    Polynomial prev2 = Polynomial::constant(1);
    Polynomial prev1 = Polynomial({block.C[0][0], Rational(-1)});
    for (int k = 1; k < d; ++k) {
        const Polynomial diag({block.C[k][k], Rational(-1)});
        const Rational offprod = block.C[k][k - 1] * block.C[k - 1][k];
        Polynomial cur = diag * prev1 - offprod * prev2;
        prev2 = std::move(prev1);
        prev1 = std::move(cur);
    }
    return prev1;
}

namespace {

// Fraction-free (Bareiss) determinant of an integer matrix.
BigInt bareiss_det(std::vector<std::vector<BigInt>> m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            int pivot = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) {
                    pivot = i;
                    break;
                }
            if (pivot < 0) return 0;
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int jcol = k + 1; jcol < n; ++jcol) {
                m[i][jcol] = (m[i][jcol] * m[k][k] - m[i][k] * m[k][jcol]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : BigInt(-m[n - 1][n - 1]);
}

Rational rational_det_fraction_free(const std::vector<std::vector<Rational>>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
    Rational scale(1);
    for (int i = 0; i < n; ++i) {
        BigInt row_lcm = 1;
        for (int k = 0; k < n; ++k)
            row_lcm = boost::multiprecision::lcm(row_lcm, boost::multiprecision::denominator(a[i][k]));
        for (int k = 0; k < n; ++k) {
            const Rational scaled = a[i][k] * row_lcm;
            m[i][k] = boost::multiprecision::numerator(scaled);
        }
        scale *= Rational(row_lcm);
    }
    return Rational(bareiss_det(std::move(m))) / scale;
}

}  // namespace

EnergyPolynomial det_energy_interpolated(const QesBlock& block) {
    const int d = block.dimension();
    const int npts = d + 1;
    std::vector<Rational> nodes(npts), values(npts);
    for (int t = 0; t < npts; ++t) {
        nodes[t] = Rational(t);
        auto m = block.C;
        for (int i = 0; i < d; ++i) m[i][i] -= nodes[t];
        values[t] = rational_det_fraction_free(m);
    }
    // exact Lagrange interpolation
    Polynomial result;
    for (int t = 0; t < npts; ++t) {
        Polynomial basis = Polynomial::constant(1);
        Rational denom(1);
        for (int s = 0; s < npts; ++s) {
            if (s == t) continue;
            basis = basis * Polynomial({-nodes[s], Rational(1)});
            denom *= nodes[t] - nodes[s];
        }
        result = result + (values[t] / denom) * basis;
    }
    return result;
}

EnergyPolynomial det_polynomial(const QesBlock& block) {
    EnergyPolynomial cont = det_energy_continuant(block);
    EnergyPolynomial interp = det_energy_interpolated(block);
    if (!(cont == interp))
        throw std::logic_error("det_polynomial: continuant and fraction-free results disagree");
    if (cont.degree() != static_cast<std::size_t>(block.dimension()) || cont.leading() != 1)
        throw std::logic_error("det_polynomial: unexpected degree or leading coefficient");
    return cont;
}

nlohmann::json polynomial_to_json(const Polynomial& poly) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : poly.coeffs()) arr.push_back(to_string(c));
    return arr;
}

// ---------------------------------------------------------------------------
// roots
// ---------------------------------------------------------------------------

namespace {

std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("qes_roots: eigenvalue iteration failed");
    std::vector<std::complex<double>> out(m.rows());
    for (int i = 0; i < m.rows(); ++i) out[i] = solver.eigenvalues()(i);
    std::sort(out.begin(), out.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

// Parlett–Reinsch style balancing; companion matrices benefit before QR.
void balance_matrix(Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    const double gamma = 0.9;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            const double row_norm = m.row(i).lpNorm<1>();
            const double col_norm = m.col(i).lpNorm<1>();
            if (row_norm == 0.0 || col_norm == 0.0) continue;
            int exponent = 0;
            std::frexp(row_norm / col_norm, &exponent);
            exponent /= 2;
            if (exponent != 0) {
                const double scaled_col = std::ldexp(col_norm, exponent);
                const double scaled_row = std::ldexp(row_norm, -exponent);
                if (scaled_col + scaled_row < gamma * (col_norm + row_norm)) {
                    changed = true;
                    m.row(i) *= std::ldexp(1.0, -exponent);
                    m.col(i) *= std::ldexp(1.0, exponent);
                }
            }
        }
    }
}

// Horner evaluation over exact Gaussian rationals; the argument is the exact
// dyadic image of a double point, so the value is exact.
struct RationalComplex {
    Rational re, im;
};
RationalComplex eval_exact(const Polynomial& poly, const Rational& xr, const Rational& xi) {
    Rational ar(0), ai(0);
    const auto& coeffs = poly.coeffs();
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        const Rational nr = ar * xr - ai * xi + coeffs[i];
        const Rational ni = ar * xi + ai * xr;
        ar = nr;
        ai = ni;
    }
    return {ar, ai};
}

// Newton steps against the exact polynomial. Double-precision companion (and
// even direct) eigenvalues of the larger blocks carry ~1e-7 errors once the
// coefficients span many orders of magnitude; exact evaluation pulls each
// root back to near machine accuracy.
std::complex<double> polish_root(const Polynomial& poly, const Polynomial& deriv,
                                 std::complex<double> x) {
    for (int iter = 0; iter < 40; ++iter) {
        const auto p = eval_exact(poly, rational_from_double(x.real()),
                                  rational_from_double(x.imag()));
        if (p.re == 0 && p.im == 0) break;
        const auto d = eval_exact(deriv, rational_from_double(x.real()),
                                  rational_from_double(x.imag()));
        const std::complex<double> pv(to_double(p.re), to_double(p.im));
        const std::complex<double> dv(to_double(d.re), to_double(d.im));
        if (std::abs(dv) == 0.0) break;
        const std::complex<double> step = pv / dv;
        if (std::abs(step) > 0.5 * std::max(1.0, std::abs(x))) break;  // degenerate cluster
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

std::vector<std::complex<double>> companion_roots(const Polynomial& poly) {
    const int degree = static_cast<int>(poly.degree());
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(degree, degree);
    const double lead = to_double(poly.leading());
    for (int i = 1; i < degree; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i) comp(i, degree - 1) = -to_double(poly.coeff(i)) / lead;
    balance_matrix(comp);
    return sorted_eigenvalues(comp);
}

}  // namespace

std::vector<QesRoot> qes_roots(const QesBlock& block) {
    const EnergyPolynomial poly = det_polynomial(block);
    const Polynomial deriv = poly.derivative();

    auto from_matrix = sorted_eigenvalues(block.C_double());
    auto from_poly = companion_roots(poly);
    const auto polish_all = [&](std::vector<std::complex<double>>& roots) {
        for (auto& root : roots) root = polish_root(poly, deriv, root);
        std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
    };
    polish_all(from_matrix);
    polish_all(from_poly);

    double worst = 0.0;
    for (std::size_t i = 0; i < from_matrix.size(); ++i)
        worst = std::max(worst, std::abs(from_matrix[i] - from_poly[i]));
    if (worst > 1e-10) {
        char msg[64];
        std::snprintf(msg, sizeof(msg), "%.3e", worst);
        throw std::runtime_error(
            std::string("qes_roots: eigensolver and companion-matrix roots disagree by ") + msg);
    }

    std::vector<QesRoot> roots(from_matrix.size());
    for (std::size_t i = 0; i < from_matrix.size(); ++i) {
        roots[i].value = from_matrix[i];
        const double scale = poly.eval_scale(from_matrix[i]);
        roots[i].residual = std::abs(poly.eval(from_matrix[i])) / (scale > 0 ? scale : 1.0);
    }
    // multiplicity by clustering at relative distance 1e-8
    for (std::size_t i = 0; i < roots.size(); ++i) {
        int count = 0;
        for (std::size_t k = 0; k < roots.size(); ++k) {
            const double ref = std::max({1.0, std::abs(roots[i].value), std::abs(roots[k].value)});
            if (std::abs(roots[i].value - roots[k].value) <= 1e-8 * ref) ++count;
        }
        roots[i].multiplicity = count;
    }
    return roots;
}

std::vector<NullSolution> null_spinor(const QesBlock& block, std::complex<double> root) {
    const int d = block.dimension();
    Eigen::MatrixXcd m = block.C_double().cast<std::complex<double>>();
    for (int i = 0; i < d; ++i) m(i, i) -= root;

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double rank_tol = std::max(1e-8 * smax, 1e-300);

    std::vector<int> null_cols;
    for (int i = 0; i < d; ++i)
        if (sv(i) < rank_tol) null_cols.push_back(i);
    if (null_cols.empty()) null_cols.push_back(d - 1);  // best available direction

    const double kap = to_double(block.kappa);
    std::vector<NullSolution> out;
    for (int col : null_cols) {
        const Eigen::VectorXcd v = svd.matrixV().col(col);
        NullSolution sol;
        sol.p.resize(block.j + 1);
        sol.q.assign(block.j + 2, std::complex<double>(0.0));
        for (int n = 0; n <= block.j; ++n) sol.p[n] = v(2 * n);
        for (int mq = 1; mq <= block.j + 1; ++mq) sol.q[mq] = v(2 * mq - 1);
        sol.consistency_residual = std::abs(kap * (block.j + 2) * v(d - 1)) / v.norm();
        out.push_back(std::move(sol));
    }
    return out;
}

// ---------------------------------------------------------------------------
// published closed forms
// ---------------------------------------------------------------------------

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::match: return "match";
        case Verdict::typo_suspected: return "typo-suspected";
        case Verdict::mismatch: return "mismatch";
    }
    return "mismatch";
}

EnergyPolynomial printed_determinant(int j, const Rational& eps_j, const Rational& eps_b,
                                     const Rational& kappa, bool repair_known_typo) {
    const Polynomial Ep({eps_j + eps_b, Rational(-1)});
    const Polynomial Em({eps_j - eps_b, Rational(-1)});
    const Rational k2 = kappa * kappa;
    const auto plus_const = [](const Polynomial& poly, int c) {
        return poly + Polynomial::constant(Rational(c));
    };
    switch (j) {
        case 0:
            return Ep * Em;
        case 1:
            return plus_const(Em, 2) * (Ep * Em * plus_const(Ep, 2) - k2 * plus_const(Ep, -2));
        case 2: {
            // as printed the kappa^2 group carries coefficient 162; the
            // recomputed value is 16
            const Rational c = repair_known_typo ? Rational(16) : Rational(162);
            const Polynomial bracket =
                Ep * Em * plus_const(Ep, 2) * plus_const(Em, 2) * plus_const(Ep, 4) +
                k2 * (Rational(2) * (Ep * plus_const(Em, 4)) + c * plus_const(Em, 2) -
                      Rational(2) * (Ep * Ep * Em)) +
                (Rational(2) * k2 * k2) * plus_const(Ep, -2);
            return plus_const(Em, 4) * bracket;
        }
        default:
            throw std::invalid_argument("printed_determinant: closed forms exist only for j <= 2");
    }
}

nlohmann::json DiscrepancyReport::to_json() const {
    nlohmann::json diff = nlohmann::json::array();
    for (const auto& c : coefficient_difference) diff.push_back(to_string(c));
    return nlohmann::json{{"j", j},
                          {"computed", polynomial_to_json(computed)},
                          {"printed", polynomial_to_json(printed)},
                          {"coefficient_difference", diff},
                          {"verdict", to_string(verdict)},
                          {"note", note}};
}

DiscrepancyReport compare_with_printed(int j, const BlockConstants& bc, const Rational& kappa) {
    if (j < 0 || j > 2)
        throw std::invalid_argument("compare_with_printed: published forms cover j = 0, 1, 2 only");

    DiscrepancyReport report;
    report.j = j;
    report.computed = det_polynomial(build_block(j, bc, kappa));
    report.printed = printed_determinant(j, bc.eps_j, bc.eps_b, kappa, /*repair=*/false);

    const std::size_t ncoef = std::max(report.computed.degree(), report.printed.degree()) + 1;
    report.coefficient_difference.resize(ncoef);
    for (std::size_t k = 0; k < ncoef; ++k)
        report.coefficient_difference[k] = report.computed.coeff(k) - report.printed.coeff(k);

    // generic verdict over deterministic random rational parameter triples
    std::mt19937 rng(20240915u + static_cast<unsigned>(j));
    const auto rand_rational = [&rng](int lo, int hi, int den) {
        const int span = hi - lo + 1;
        return Rational(lo + static_cast<int>(rng() % static_cast<unsigned>(span)), den);
    };
    bool printed_matches = report.computed == report.printed;
    bool repaired_matches = true;
    {
        const EnergyPolynomial repaired =
            printed_determinant(j, bc.eps_j, bc.eps_b, kappa, /*repair=*/true);
        repaired_matches = report.computed == repaired;
    }
    for (int trial = 0; trial < 8; ++trial) {
        BlockConstants rbc;
        rbc.j = j;
        rbc.eps_j = rand_rational(-12, 12, 8);
        rbc.eps_b = rand_rational(-12, 12, 8);
        const Rational rk = rand_rational(1, 15, 10);
        const EnergyPolynomial computed = det_polynomial(build_block(j, rbc, rk));
        if (!(computed == printed_determinant(j, rbc.eps_j, rbc.eps_b, rk, false)))
            printed_matches = false;
        if (!(computed == printed_determinant(j, rbc.eps_j, rbc.eps_b, rk, true)))
            repaired_matches = false;
    }

    if (printed_matches) {
        report.verdict = Verdict::match;
    } else if (repaired_matches) {
        report.verdict = Verdict::typo_suspected;
        report.note =
            "printed kappa^2 group coefficient 162 reproduces as 16 under both exact "
            "determinant routes";
    } else {
        report.verdict = Verdict::mismatch;
        report.note = "no catalogued single-term repair reconciles the printed form";
    }
    return report;
}

nlohmann::json TranscriptionCheck::to_json() const {
    return nlohmann::json{
        {"recurrence_fifth_diagonal", "E+ + " + to_string(recurrence_fifth_diagonal)},
        {"printed_fifth_diagonal", "E+ + " + to_string(printed_fifth_diagonal)},
        {"recurrence_matches_printed_leading", recurrence_matches_printed_leading},
        {"printed_entry_matches_printed_leading", printed_entry_matches_printed_leading}};
}

TranscriptionCheck transcription_check(const BlockConstants& bc_j2) {
    if (bc_j2.j != 2) throw std::invalid_argument("transcription_check: needs j = 2 constants");
    TranscriptionCheck out;

    const auto block = build_block(2, bc_j2, Rational(0));  // kappa = 0 isolates the diagonal
    out.recurrence_fifth_diagonal = block.C[4][4] - bc_j2.eps_j - bc_j2.eps_b;  // expect 4
    out.printed_fifth_diagonal = Rational(3);

    // kappa = 0 determinant is the product of the diagonal factors; the
    // published leading term is E+ E- (E+ + 2)(E- + 2)(E+ + 4) with prefactor
    // (E- + 4)
    const EnergyPolynomial diag_det = det_polynomial(block);
    const Polynomial Ep({bc_j2.eps_j + bc_j2.eps_b, Rational(-1)});
    const Polynomial Em({bc_j2.eps_j - bc_j2.eps_b, Rational(-1)});
    const auto plus_const = [](const Polynomial& poly, int c) {
        return poly + Polynomial::constant(Rational(c));
    };
    const Polynomial printed_leading = plus_const(Em, 4) * Ep * Em * plus_const(Ep, 2) *
                                       plus_const(Em, 2) * plus_const(Ep, 4);
    out.recurrence_matches_printed_leading = diag_det == printed_leading;

    const Polynomial with_printed_entry = plus_const(Em, 4) * Ep * Em * plus_const(Ep, 2) *
                                          plus_const(Em, 2) * plus_const(Ep, 3);
    out.printed_entry_matches_printed_leading = with_printed_entry == printed_leading;
    return out;
}

bool kappa_flip_similarity_exact(int j, const BlockConstants& bc, const Rational& kappa) {
    const auto plus = build_block(j, bc, kappa);
    const auto minus = build_block(j, bc, Rational(-kappa));
    const int d = plus.dimension();
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            const int sign = ((i + k) % 2 == 0) ? 1 : -1;  // diag(+1,-1,...) conjugation
            if (sign * plus.C[i][k] != minus.C[i][k]) return false;
        }
    }
    return true;
}

}  // namespace rashba
