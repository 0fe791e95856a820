// acceptance.cpp — end-to-end acceptance criteria, one pass/fail line each.
//
// Criterion 1 carries a documented caveat: three instances of the published
// relation table are sign typos (they fail as printed by O(1) and pass with
// the flipped sign; see the errata in verify_report.json). The suite treats
// those as adjudicated findings, in line with the typo-as-finding contract
// used for the published determinant forms, and fails if the typo set ever
// differs from the three documented instances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rashba/hamiltonian.hpp"
#include "rashba/oracle.hpp"
#include "rashba/params.hpp"
#include "rashba/qes.hpp"
#include "rashba/run.hpp"

using namespace rashba;

namespace {

int failures = 0;

class Criterion {
public:
    Criterion(int number, std::string title, double time_limit_s)
        : number_(number), title_(std::move(title)), limit_(time_limit_s),
          start_(std::chrono::steady_clock::now()) {}

    void require(bool ok, const std::string& what) {
        if (!ok) problems_.push_back(what);
    }
    void note(const std::string& text) { notes_.push_back(text); }

    void finish() {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (elapsed >= limit_)
            problems_.push_back("runtime " + format(elapsed) + "s exceeds " + format(limit_) + "s");
        std::string line = problems_.empty() ? "[PASS]" : "[FAIL]";
        line += " criterion " + std::to_string(number_) + " (" + format(elapsed) + "s): " + title_;
        for (const auto& n : notes_) line += "; " + n;
        for (const auto& p : problems_) line += "; PROBLEM: " + p;
        std::printf("%s\n", line.c_str());
        if (!problems_.empty()) ++failures;
    }

private:
    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return buf;
    }
    int number_;
    std::string title_;
    double limit_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> problems_;
    std::vector<std::string> notes_;
};

DimensionlessParams params(const Rational& r, const Rational& b, const Rational& k) {
    return DimensionlessParams(r, b, k);
}

void criterion_1_relations() {
    Criterion c(1, "relation suite on the margin-2 interior at cutoff 8, tolerance 1e-12", 5.0);
    const auto report = verify_relations(osp22_generators(FockBasis{8, 8}), 2, 1e-12);

    const std::set<std::string> documented_typos{"[J+,V-] = V+", "[J+,W-] = W+",
                                                 "{V-,W+} = -J0 - J"};
    std::set<std::string> failing;
    int kg_total = 0, kg_pass = 0;
    for (const auto& r : report.relations) {
        if (!r.pass) failing.insert(r.name);
        if (r.name.rfind("[K,", 0) == 0) {
            ++kg_total;
            if (r.pass) ++kg_pass;
        }
    }
    c.require(kg_total == 7 && kg_pass == 7, "[K,G] = 0 must hold for all seven generators");
    c.require(failing == documented_typos,
              "as-printed failures must be exactly the three documented sign typos");
    for (const auto* r : report.typo_suspects()) {
        c.require(r->residual > 0.1, r->name + " fails by O(1), not numerical noise");
        c.require(*r->corrected_residual < 1e-12, "sign-corrected " + r->name + " < 1e-12");
    }
    c.require(report.hard_failures().empty(), "no unexplained relation failures");
    c.note("29/32 printed instances + 7/7 [K,G] < 1e-12; as printed, 3 sign-typo instances "
           "fail and their flipped forms pass < 1e-12 (adjudicated finding)");
    c.finish();
}

void criterion_2_double_build() {
    Criterion c(2, "ladder-form vs generator-form Hamiltonian, 20 random triples, 1e-13", 10.0);
    const FockBasis basis{8, 8};
    std::mt19937 rng(515253u);
    const auto rat = [&rng](int lo, int hi, int den) {
        return Rational(lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)), den);
    };
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const auto pair =
            build_pair(basis, params(rat(0, 14, 8), rat(-8, 8, 8), rat(0, 12, 10)));
        worst = std::max(worst, pair.interior_difference(2));
        worst = std::max(worst, pair.hermiticity_defect());
    }
    c.require(worst < 1e-13, "worst interior difference " + std::to_string(worst));
    c.finish();
}

void criterion_3_generator_equivalence() {
    Criterion c(3, "recurrence block equals the operator matrix, exact, j in {0..3} x 10 triples",
                5.0);
    std::mt19937 rng(626364u);
    const auto rat = [&rng](int lo, int hi, int den) {
        return Rational(lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)), den);
    };
    for (int j = 0; j <= 3; ++j) {
        for (int t = 0; t < 10; ++t) {
            BlockConstants bc;
            bc.j = j;
            bc.eps_j = rat(-12, 12, 8);
            bc.eps_b = rat(-12, 12, 8);
            const Rational kappa = rat(0, 15, 10);
            c.require(htilde_matrix(j, bc, kappa) == build_block(j, bc, kappa).C,
                      "exact equality at j = " + std::to_string(j));
        }
    }
    c.finish();
}

void criterion_4_determinants() {
    Criterion c(4, "determinant reproduction with verdicts {match, match, typo-suspected}", 5.0);
    const auto p = params(Rational(1, 2), Rational(1, 4), Rational(3, 10));
    const Verdict expected[] = {Verdict::match, Verdict::match, Verdict::typo_suspected};
    for (int j = 0; j <= 2; ++j) {
        const auto report = compare_with_printed(j, block_constants(j, p), p.kappa());
        c.require(report.verdict == expected[j],
                  "j = " + std::to_string(j) + " verdict is " + to_string(report.verdict));
        if (j == 2)
            c.require(report.note.find("16") != std::string::npos,
                      "the repair names the recomputed coefficient 16");
    }
    c.note("printed j = 2 coefficient 162 reproduces as 16 under both exact routes");
    c.finish();
}

void criterion_5_transcription() {
    Criterion c(5, "fifth diagonal of the j = 2 block is E+ + 4 and matches the published "
                   "determinant's leading factors", 1.0);
    const auto p = params(Rational(1, 2), Rational(1, 4), Rational(3, 10));
    const auto check = transcription_check(block_constants(2, p));
    c.require(check.recurrence_fifth_diagonal == Rational(4), "recurrence entry is E+ + 4");
    c.require(check.recurrence_matches_printed_leading,
              "kappa = 0 determinant equals (E-+4) E+ E- (E++2)(E-+2)(E++4)");
    c.require(!check.printed_entry_matches_printed_leading,
              "the published E+ + 3 entry contradicts the published determinant");
    c.finish();
}

void criterion_6_oracle_convergence() {
    Criterion c(6, "lowest 10 levels per retained sector stable to 1e-8 between cutoffs 40 and 80",
                60.0);
    const double r = 0.5, b = 0.25, kappa = 0.3;
    const int levels = 10;
    const int max_abs_twice_k = 2 * (levels + 4) - 1;
    double worst = 0.0;
    for (int tk = -max_abs_twice_k; tk <= max_abs_twice_k; tk += 2) {
        auto small = sector_eigenvalues(r, b, kappa, tk, 40);
        auto large = sector_eigenvalues(r, b, kappa, tk, 80);
        const std::size_t n = std::min({small.size(), large.size(), std::size_t{levels}});
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst,
                             std::abs(small[i] - large[i]) / std::max(1.0, std::abs(large[i])));
    }
    c.require(worst < 1e-8, "worst relative change " + std::to_string(worst));
    c.finish();
}

void criterion_7_decoupled_limit() {
    Criterion c(7, "kappa = 0: oracle equals the closed form to 1e-12 and QES roots are "
                   "2n + eps_j +- eps_b", 5.0);
    const double r = 0.5, b = 0.25;
    for (int tk : {-5, -3, -1, 1, 3, 5}) {
        const auto ev = sector_eigenvalues(r, b, 0.0, tk, 16);
        std::vector<double> closed;
        const int d_up = (tk - 1) / 2, d_down = (tk + 1) / 2;
        for (int n2 = 0; n2 <= 16; ++n2) {
            if (d_up + n2 >= 0 && d_up + n2 <= 16)
                closed.push_back(decoupled_energy(d_up + n2, n2, Spin::up, r, b));
            if (d_down + n2 >= 0 && d_down + n2 <= 16)
                closed.push_back(decoupled_energy(d_down + n2, n2, Spin::down, r, b));
        }
        std::sort(closed.begin(), closed.end());
        c.require(ev.size() == closed.size(), "sector state count");
        double worst = 0.0;
        for (std::size_t i = 0; i < ev.size(); ++i)
            worst = std::max(worst, std::abs(ev[i] - closed[i]));
        c.require(worst < 1e-12, "closed-form deviation " + std::to_string(worst));
    }

    const auto p = params(Rational(1, 2), Rational(1, 4), Rational(0));
    for (int j = 0; j <= 2; ++j) {
        const auto bc = block_constants(j, p);
        const auto block = build_block(j, bc, Rational(0));
        // exact statement: the block is diagonal with entries 2n + eps_j +- eps_b
        for (int n = 0; n <= j; ++n) {
            c.require(block.C[2 * n][2 * n] == Rational(2 * n) + bc.eps_j + bc.eps_b,
                      "diagonal p-entry exact");
            c.require(block.C[2 * n + 1][2 * n + 1] == Rational(2 * n) + bc.eps_j - bc.eps_b,
                      "diagonal q-entry exact");
        }
        for (int a = 0; a < block.dimension(); ++a)
            for (int bcol = 0; bcol < block.dimension(); ++bcol)
                if (a != bcol)
                    c.require(block.C[a][bcol] == Rational(0), "off-diagonal vanishes exactly");
        std::vector<double> expected;
        for (int n = 0; n <= j; ++n) {
            expected.push_back(2 * n + to_double(bc.eps_j + bc.eps_b));
            expected.push_back(2 * n + to_double(bc.eps_j - bc.eps_b));
        }
        std::sort(expected.begin(), expected.end());
        const auto roots = qes_roots(block);
        for (std::size_t i = 0; i < roots.size(); ++i)
            c.require(std::abs(roots[i].value.real() - expected[i]) < 1e-12 &&
                          std::abs(roots[i].value.imag()) < 1e-14,
                      "numeric root matches the exact diagonal");
    }
    c.finish();
}

void criterion_8_validation_grid() {
    Criterion c(8, "validation harness over a 3x3x3 grid, j <= 2: complete reports and both "
                   "verdict values", 600.0);
    const Rational rs[] = {Rational(0), Rational(1, 2), Rational(1)};
    const Rational bs[] = {Rational(0), Rational(1, 4), Rational(1, 2)};
    const Rational ks[] = {Rational(0), Rational(3, 10), Rational(3, 5)};

    int confirmed_total = 0, unconfirmed_total = 0;
    int terminating_confirmed = 0, terminating_unconfirmed = 0;
    int nonterminating_confirmed = 0, nonterminating_unconfirmed = 0;
    bool complete = true, consistent = true;

    for (const auto& r : rs) {
        for (const auto& b : bs) {
            for (const auto& k : ks) {
                const auto p = params(r, b, k);
                const auto spectrum = converged_spectrum(p, 12, 1e-9);
                const auto report = validate(p, 2, spectrum);
                // 2 + 4 + 6 roots per point, each real one with a verdict row
                if (static_cast<int>(report.rows.size()) + report.complex_roots != 12)
                    complete = false;
                for (const auto& row : report.rows) {
                    if (row.verdict == "confirmed" || row.verdict == "unconfirmed") {
                        if (!(row.gap >= 0.0)) complete = false;  // a real, finite gap
                    } else {
                        complete = false;  // grid chosen so every root is inside the range
                    }
                }
                confirmed_total += report.confirmed;
                unconfirmed_total += report.unconfirmed;
                terminating_confirmed += report.terminating_confirmed;
                terminating_unconfirmed += report.terminating_unconfirmed;
                nonterminating_confirmed += report.nonterminating_confirmed;
                nonterminating_unconfirmed += report.nonterminating_unconfirmed;
                if (report.confirmed + report.unconfirmed !=
                    report.terminating_confirmed + report.terminating_unconfirmed +
                        report.nonterminating_confirmed + report.nonterminating_unconfirmed)
                    consistent = false;
            }
        }
    }
    c.require(complete, "every real root has a gap and a confirmed/unconfirmed verdict");
    c.require(consistent, "cross-tabulation counts add up");
    c.require(confirmed_total > 0, "the grid demonstrates the confirmed verdict");
    c.require(unconfirmed_total > 0, "the grid demonstrates the unconfirmed verdict");
    {
        std::ostringstream note;
        note << "confirmed " << confirmed_total << ", unconfirmed " << unconfirmed_total
             << "; cross-tab [terminating: " << terminating_confirmed << "/"
             << terminating_unconfirmed << ", non-terminating: " << nonterminating_confirmed
             << "/" << nonterminating_unconfirmed << "]";
        c.note(note.str());
    }
    c.finish();
}

void criterion_9_symmetry() {
    Criterion c(9, "kappa -> -kappa: oracle spectrum to 1e-10 and exact block similarity, j <= 4",
                60.0);
    for (int tk : {-5, -3, -1, 1, 3, 5}) {
        const auto plus = sector_eigenvalues(0.5, 0.25, 0.3, tk, 30);
        const auto minus = sector_eigenvalues(0.5, 0.25, -0.3, tk, 30);
        c.require(plus.size() == minus.size(), "sector sizes agree");
        double worst = 0.0;
        for (std::size_t i = 0; i < plus.size(); ++i)
            worst = std::max(worst, std::abs(plus[i] - minus[i]));
        c.require(worst < 1e-10, "oracle spectrum shift " + std::to_string(worst));
    }
    const auto p = params(Rational(1, 2), Rational(1, 4), Rational(3, 10));
    for (int j = 0; j <= 4; ++j) {
        const auto bc = block_constants(j, p);
        c.require(kappa_flip_similarity_exact(j, bc, p.kappa()),
                  "diagonal similarity at j = " + std::to_string(j));
        const auto plus = qes_roots(build_block(j, bc, p.kappa()));
        const auto minus = qes_roots(build_block(j, bc, Rational(-p.kappa())));
        double worst = 0.0;
        for (std::size_t i = 0; i < plus.size(); ++i)
            worst = std::max(worst, std::abs(plus[i].value - minus[i].value));
        c.require(worst < 1e-10, "root multiset shift " + std::to_string(worst));
    }
    c.finish();
}

}  // namespace

int main() {
    criterion_1_relations();
    criterion_2_double_build();
    criterion_3_generator_equivalence();
    criterion_4_determinants();
    criterion_5_transcription();
    criterion_6_oracle_convergence();
    criterion_7_decoupled_limit();
    criterion_8_validation_grid();
    criterion_9_symmetry();
    if (failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", failures);
    return 1;
}
