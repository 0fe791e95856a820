#include "rashba/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rashba/qes.hpp"

namespace rashba {

namespace {

struct SectorState {
    int n1, n2;
    bool up;
};

std::vector<SectorState> sector_states(int twice_k, int truncation) {
    if (twice_k % 2 == 0) throw std::invalid_argument("sector twice_k must be odd");
    std::vector<SectorState> states;
    const int d_up = (twice_k - 1) / 2;    // n1 - n2 for spin-up members
    const int d_down = (twice_k + 1) / 2;  // n1 - n2 for spin-down members
    for (int n2 = std::max(0, -d_up); n2 + std::max(0, d_up) <= truncation &&
                                      n2 <= truncation; ++n2) {
        const int n1 = d_up + n2;
        if (n1 >= 0 && n1 <= truncation) states.push_back({n1, n2, true});
    }
    for (int n2 = std::max(0, -d_down); n2 <= truncation; ++n2) {
        const int n1 = d_down + n2;
        if (n1 >= 0 && n1 <= truncation) states.push_back({n1, n2, false});
    }
    return states;
}

}  // namespace

Eigen::MatrixXd sector_matrix(double r, double b, double kappa, int twice_k, int truncation) {
    const auto states = sector_states(twice_k, truncation);
    const int d = static_cast<int>(states.size());
    std::map<std::tuple<int, int, bool>, int> pos;
    for (int i = 0; i < d; ++i) pos[{states[i].n1, states[i].n2, states[i].up}] = i;

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const auto& st = states[i];
        h(i, i) = st.n1 + st.n2 + 1 + 0.5 * r * (st.n1 - st.n2) + (st.up ? -b : b);
        if (!st.up) {
            // -kappa a2+ sigma+ : |n1, n2, down> -> |n1, n2+1, up>
            if (auto it = pos.find({st.n1, st.n2 + 1, true}); it != pos.end())
                h(it->second, i) += -kappa * std::sqrt(st.n2 + 1.0);
            // +kappa a1 sigma+ : |n1, n2, down> -> |n1-1, n2, up>
            if (st.n1 > 0)
                if (auto it = pos.find({st.n1 - 1, st.n2, true}); it != pos.end())
                    h(it->second, i) += kappa * std::sqrt(static_cast<double>(st.n1));
        } else {
            // -kappa a2 sigma- : |n1, n2, up> -> |n1, n2-1, down>
            if (st.n2 > 0)
                if (auto it = pos.find({st.n1, st.n2 - 1, false}); it != pos.end())
                    h(it->second, i) += -kappa * std::sqrt(static_cast<double>(st.n2));
            // +kappa a1+ sigma- : |n1, n2, up> -> |n1+1, n2, down>
            if (auto it = pos.find({st.n1 + 1, st.n2, false}); it != pos.end())
                h(it->second, i) += kappa * std::sqrt(st.n1 + 1.0);
        }
    }
    return h;
}

std::vector<double> sector_eigenvalues(double r, double b, double kappa, int twice_k,
                                       int truncation) {
    const Eigen::MatrixXd h = sector_matrix(r, b, kappa, twice_k, truncation);
    if (h.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("sector_eigenvalues: eigensolver failed");
    std::vector<double> ev(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
    return ev;
}

ConvergedSpectrum converged_spectrum(const DimensionlessParams& p, int levels, double rel_tol,
                                     const OracleOptions& opts) {
    if (levels < 1) throw std::invalid_argument("converged_spectrum: levels must be >= 1");
    if (!(rel_tol > 0)) throw std::invalid_argument("converged_spectrum: rel_tol must be > 0");

    const int max_abs_twice_k =
        opts.max_abs_twice_k > 0 ? opts.max_abs_twice_k : 2 * (levels + 4) - 1;
    const double r = p.r_d(), b = p.b_d(), kappa = p.kappa_d();

    std::vector<int> retained;
    for (int tk = -max_abs_twice_k; tk <= max_abs_twice_k; tk += 2) retained.push_back(tk);

    ConvergedSpectrum spec;
    spec.levels = levels;
    spec.rel_tol = rel_tol;

    std::map<int, std::vector<double>> prev, cur;
    int truncation = opts.truncation_start;
    bool done = false;
    while (!done) {
        spec.truncations.push_back(truncation);
        prev = std::move(cur);
        cur.clear();
        for (int tk : retained) {
            auto ev = sector_eigenvalues(r, b, kappa, tk, truncation);
            if (static_cast<int>(ev.size()) > levels) ev.resize(levels);
            cur[tk] = std::move(ev);
        }
        if (!prev.empty()) {
            bool all_ok = true;
            for (int tk : retained) {
                const auto& a = prev[tk];
                const auto& c = cur[tk];
                if (a.size() != c.size()) {
                    // sector still gaining tracked levels; cannot certify yet
                    all_ok = false;
                    break;
                }
                for (std::size_t i = 0; i < c.size(); ++i) {
                    const double rel = std::abs(a[i] - c[i]) / std::max(1.0, std::abs(c[i]));
                    if (rel >= rel_tol) {
                        all_ok = false;
                        break;
                    }
                }
                if (!all_ok) break;
            }
            if (all_ok) {
                done = true;
                break;
            }
        }
        if (truncation >= opts.truncation_cap) break;  // non-converged at the cap
        truncation = std::min(2 * truncation, opts.truncation_cap);
    }

    spec.fully_converged = true;
    for (int tk : retained) {
        SectorLevels sl;
        sl.twice_k = tk;
        sl.dimension = static_cast<int>(sector_states(tk, spec.truncations.back()).size());
        sl.energies = cur[tk];
        sl.change_abs.assign(sl.energies.size(), 0.0);
        sl.converged.assign(sl.energies.size(), true);
        if (!prev.empty()) {
            const auto& a = prev[tk];
            for (std::size_t i = 0; i < sl.energies.size(); ++i) {
                if (i < a.size()) {
                    sl.change_abs[i] = std::abs(a[i] - sl.energies[i]);
                    const double rel = sl.change_abs[i] / std::max(1.0, std::abs(sl.energies[i]));
                    sl.converged[i] = rel < rel_tol;
                } else {
                    sl.converged[i] = false;  // level appeared only at the last truncation
                    sl.change_abs[i] = std::numeric_limits<double>::quiet_NaN();
                }
                if (!sl.converged[i]) spec.fully_converged = false;
            }
        }
        spec.sectors.push_back(std::move(sl));
    }

    // trusted range: complete below the smallest per-sector reporting ceiling
    // and below the outermost retained sectors' ground states
    double trusted = std::numeric_limits<double>::infinity();
    for (const auto& sl : spec.sectors) {
        if (sl.dimension > static_cast<int>(sl.energies.size()) && !sl.energies.empty())
            trusted = std::min(trusted, sl.energies.back());
    }
    for (const auto& sl : spec.sectors) {
        if (std::abs(sl.twice_k) == max_abs_twice_k && !sl.energies.empty())
            trusted = std::min(trusted, sl.energies.front());
    }
    spec.trusted_upper = trusted;
    return spec;
}

std::vector<MergedLevel> ConvergedSpectrum::merged() const {
    std::vector<MergedLevel> out;
    for (const auto& sl : sectors)
        for (std::size_t i = 0; i < sl.energies.size(); ++i)
            out.push_back({sl.energies[i], sl.twice_k, static_cast<int>(i),
                           sl.change_abs[i], sl.converged[i]});
    std::sort(out.begin(), out.end(),
              [](const MergedLevel& a, const MergedLevel& b) { return a.energy < b.energy; });
    return out;
}

nlohmann::json ConvergedSpectrum::sectors_to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& sl : sectors) {
        arr.push_back(nlohmann::json{{"k_value", sl.twice_k / 2.0},
                                     {"dimension", sl.dimension},
                                     {"lowest_eigenvalues", sl.energies}});
    }
    return arr;
}

namespace {
std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"j", r.j},
                           {"root_re", r.root.real()},
                           {"root_im", r.root.imag()},
                           {"consistency_residual", r.consistency_residual},
                           {"series_terminating", r.series_terminating},
                           {"verdict", r.verdict}};
        if (r.in_range) {
            row["nearest_level"] = r.nearest_level;
            row["nearest_k"] = r.nearest_twice_k / 2.0;
            row["gap"] = r.gap;
            row["convergence_estimate"] = r.convergence_estimate;
        }
        rows_json.push_back(std::move(row));
    }
    return nlohmann::json{
        {"j_max", j_max},
        {"rows", rows_json},
        {"summary",
         nlohmann::json{{"complex_roots", complex_roots},
                        {"confirmed", confirmed},
                        {"unconfirmed", unconfirmed},
                        {"out_of_range", out_of_range},
                        {"cross_tabulation",
                         nlohmann::json{{"terminating_confirmed", terminating_confirmed},
                                        {"terminating_unconfirmed", terminating_unconfirmed},
                                        {"nonterminating_confirmed", nonterminating_confirmed},
                                        {"nonterminating_unconfirmed", nonterminating_unconfirmed}}}}}};
}

std::string ValidationReport::to_csv() const {
    std::ostringstream os;
    os << "j,root_re,root_im,nearest_level,gap,consistency_residual,verdict\n";
    for (const auto& r : rows) {
        os << r.j << ',' << format_double(r.root.real()) << ',' << format_double(r.root.imag())
           << ',';
        if (r.in_range)
            os << format_double(r.nearest_level) << ',' << format_double(r.gap);
        else
            os << ',';
        os << ',' << format_double(r.consistency_residual) << ',' << r.verdict << '\n';
    }
    return os.str();
}

ValidationReport validate(const DimensionlessParams& p, int j_max,
                          const ConvergedSpectrum& spectrum) {
    ValidationReport report;
    report.j_max = j_max;
    const auto merged = spectrum.merged();
    if (merged.empty()) throw std::invalid_argument("validate: empty oracle spectrum");

    for (int j = 0; j <= j_max; ++j) {
        const auto bc = block_constants(j, p);
        const auto block = build_block(j, bc, p.kappa());
        const auto roots = qes_roots(block);
        for (const auto& root : roots) {
            if (!root.is_real()) {
                ++report.complex_roots;
                continue;
            }
            RootValidation row;
            row.j = j;
            row.root = root.value;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& sol : null_spinor(block, root.value))
                best = std::min(best, sol.consistency_residual);
            row.consistency_residual = best;
            row.series_terminating = best < kSeriesTerminationTol;

            row.in_range = root.value.real() <= spectrum.trusted_upper;
            if (!row.in_range) {
                row.verdict = "out-of-range";
                ++report.out_of_range;
            } else {
                const MergedLevel* nearest = nullptr;
                double gap = std::numeric_limits<double>::infinity();
                for (const auto& lvl : merged) {
                    const double d = std::abs(lvl.energy - root.value.real());
                    if (d < gap) {
                        gap = d;
                        nearest = &lvl;
                    }
                }
                row.nearest_level = nearest->energy;
                row.nearest_twice_k = nearest->twice_k;
                row.gap = gap;
                row.convergence_estimate =
                    std::isnan(nearest->change_abs) ? 0.0 : nearest->change_abs;
                const double threshold = std::max(1e-6, 10.0 * row.convergence_estimate);
                row.verdict = gap < threshold ? "confirmed" : "unconfirmed";
                if (row.verdict == "confirmed") {
                    ++report.confirmed;
                    ++(row.series_terminating ? report.terminating_confirmed
                                              : report.nonterminating_confirmed);
                } else {
                    ++report.unconfirmed;
                    ++(row.series_terminating ? report.terminating_unconfirmed
                                              : report.nonterminating_unconfirmed);
                }
            }
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

}  // namespace rashba
