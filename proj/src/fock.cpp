#include "rashba/fock.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rashba {

namespace {
void require_same_basis(const TruncatedOperator& a, const TruncatedOperator& b) {
    if (!(a.basis == b.basis)) {
        throw std::invalid_argument("operator basis mismatch: (" + std::to_string(a.basis.n1_max) +
                                    "," + std::to_string(a.basis.n2_max) + ") vs (" +
                                    std::to_string(b.basis.n1_max) + "," +
                                    std::to_string(b.basis.n2_max) + ")");
    }
}
}  // namespace

TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_basis(a, b);
    return {a.basis, a.entries * b.entries};
}
TruncatedOperator operator*(std::complex<double> s, const TruncatedOperator& a) {
    return {a.basis, s * a.entries};
}
TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_basis(a, b);
    return {a.basis, a.entries + b.entries};
}
TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_basis(a, b);
    return {a.basis, a.entries - b.entries};
}

TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_basis(a, b);
    return {a.basis, a.entries * b.entries - b.entries * a.entries};
}
TruncatedOperator anticommutator(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_basis(a, b);
    return {a.basis, a.entries * b.entries + b.entries * a.entries};
}

BosonOperators boson_operators(const FockBasis& basis) {
    BosonOperators out{TruncatedOperator::zero(basis), TruncatedOperator::zero(basis),
                       TruncatedOperator::zero(basis), TruncatedOperator::zero(basis)};
    for (int i = 0; i < basis.dimension(); ++i) {
        const auto st = basis.state(i);
        if (st.n1 > 0) out.a1.entries(basis.index(st.n1 - 1, st.n2, st.s), i) = std::sqrt(st.n1);
        if (st.n1 < basis.n1_max)
            out.a1_dag.entries(basis.index(st.n1 + 1, st.n2, st.s), i) = std::sqrt(st.n1 + 1.0);
        if (st.n2 > 0) out.a2.entries(basis.index(st.n1, st.n2 - 1, st.s), i) = std::sqrt(st.n2);
        if (st.n2 < basis.n2_max)
            out.a2_dag.entries(basis.index(st.n1, st.n2 + 1, st.s), i) = std::sqrt(st.n2 + 1.0);
    }
    return out;
}

PauliOperators pauli_operators(const FockBasis& basis) {
    PauliOperators out{TruncatedOperator::zero(basis), TruncatedOperator::zero(basis),
                       TruncatedOperator::zero(basis)};
    for (int i = 0; i < basis.dimension(); ++i) {
        const auto st = basis.state(i);
        if (st.s == Spin::down) out.sigma_plus.entries(basis.index(st.n1, st.n2, Spin::up), i) = 1.0;
        if (st.s == Spin::up) out.sigma_minus.entries(basis.index(st.n1, st.n2, Spin::down), i) = 1.0;
        out.sigma_zero.entries(i, i) = (st.s == Spin::up) ? -1.0 : 1.0;
    }
    return out;
}

TruncatedOperator interior_projector(const FockBasis& basis, int margin) {
    if (margin < 0 || margin > std::min(basis.n1_max, basis.n2_max)) {
        throw std::invalid_argument("interior_projector: margin " + std::to_string(margin) +
                                    " exceeds min(n1_max, n2_max)");
    }
    auto p = TruncatedOperator::zero(basis);
    for (int i = 0; i < basis.dimension(); ++i) {
        const auto st = basis.state(i);
        if (st.n1 <= basis.n1_max - margin && st.n2 <= basis.n2_max - margin)
            p.entries(i, i) = 1.0;
    }
    return p;
}

Osp22Set osp22_generators(const FockBasis& basis) {
    const auto bos = boson_operators(basis);
    const auto pauli = pauli_operators(basis);
    const auto id = TruncatedOperator::identity(basis);

    Osp22Set set;
    set.basis = basis;
    set.J_plus = bos.a1_dag * bos.a2_dag;
    set.J_minus = bos.a2 * bos.a1;
    set.J_zero = 0.5 * (bos.a1_dag * bos.a1 + bos.a2_dag * bos.a2 + id);
    set.N = bos.a1_dag * bos.a1 - bos.a2_dag * bos.a2;
    set.V_plus = pauli.sigma_plus * bos.a2_dag;
    set.V_minus = pauli.sigma_plus * bos.a1;
    set.W_plus = pauli.sigma_minus * bos.a1_dag;
    set.W_minus = pauli.sigma_minus * bos.a2;
    set.J_total = 0.5 * (set.N - pauli.sigma_zero);
    set.K = set.N - 0.5 * pauli.sigma_zero;
    return set;
}

bool RelationReport::all_pass() const {
    for (const auto& r : relations)
        if (!r.pass) return false;
    return true;
}

std::vector<const RelationCheck*> RelationReport::typo_suspects() const {
    std::vector<const RelationCheck*> out;
    for (const auto& r : relations)
        if (!r.pass && r.corrected_name) out.push_back(&r);
    return out;
}

std::vector<const RelationCheck*> RelationReport::hard_failures() const {
    std::vector<const RelationCheck*> out;
    for (const auto& r : relations)
        if (!r.pass && !r.corrected_name) out.push_back(&r);
    return out;
}

nlohmann::json RelationReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : relations) {
        nlohmann::json item{{"relation_name", r.name},
                            {"residual", r.residual},
                            {"tolerance", r.tolerance},
                            {"pass", r.pass}};
        if (r.corrected_name) {
            item["corrected_form"] = *r.corrected_name;
            item["corrected_residual"] = *r.corrected_residual;
        }
        arr.push_back(std::move(item));
    }
    return arr;
}

RelationReport verify_relations(const Osp22Set& set, int margin, double tol) {
    if (margin < 2) {
        throw std::invalid_argument(
            "verify_relations: margin must be >= 2 (relations are bilinear in ladder operators)");
    }
    const auto p_int = interior_projector(set.basis, margin);

    RelationReport report;
    report.margin = margin;
    report.tolerance = tol;

    const auto residual_of = [&](const TruncatedOperator& lhs, const TruncatedOperator& rhs) {
        return ((lhs - rhs) * p_int).entries.cwiseAbs().maxCoeff();
    };

    const auto zero = TruncatedOperator::zero(set.basis);
    const auto check = [&](const std::string& name, const TruncatedOperator& lhs,
                           const TruncatedOperator& rhs, const std::string& flipped_name) {
        RelationCheck c;
        c.name = name;
        c.tolerance = tol;
        c.residual = residual_of(lhs, rhs);
        c.pass = c.residual < tol;
        if (!c.pass) {
            // try the sign-flipped right-hand side before calling it a hard failure
            const double flipped = residual_of(lhs, std::complex<double>(-1.0) * rhs);
            if (flipped < tol) {
                c.corrected_name = flipped_name;
                c.corrected_residual = flipped;
            }
        }
        report.relations.push_back(std::move(c));
    };

    const auto& g = set;
    const auto half = std::complex<double>(0.5);

    // published table, both sign instances spelled out
    check("[J+,J-] = -2 J0", commutator(g.J_plus, g.J_minus),
          std::complex<double>(-2.0) * g.J_zero, "[J+,J-] = +2 J0");
    check("[J0,J+] = +J+", commutator(g.J_zero, g.J_plus), g.J_plus, "[J0,J+] = -J+");
    check("[J0,J-] = -J-", commutator(g.J_zero, g.J_minus),
          std::complex<double>(-1.0) * g.J_minus, "[J0,J-] = +J-");
    check("[J,J+] = 0", commutator(g.J_total, g.J_plus), zero, "");
    check("[J,J-] = 0", commutator(g.J_total, g.J_minus), zero, "");
    check("[J,J0] = 0", commutator(g.J_total, g.J_zero), zero, "");
    check("[J0,V+] = +V+/2", commutator(g.J_zero, g.V_plus), half * g.V_plus, "[J0,V+] = -V+/2");
    check("[J0,V-] = -V-/2", commutator(g.J_zero, g.V_minus), -half * g.V_minus,
          "[J0,V-] = +V-/2");
    check("[J0,W+] = +W+/2", commutator(g.J_zero, g.W_plus), half * g.W_plus, "[J0,W+] = -W+/2");
    check("[J0,W-] = -W-/2", commutator(g.J_zero, g.W_minus), -half * g.W_minus,
          "[J0,W-] = +W-/2");
    check("[J+,V-] = V+", commutator(g.J_plus, g.V_minus), g.V_plus, "[J+,V-] = -V+");
    check("[J-,V+] = V-", commutator(g.J_minus, g.V_plus), g.V_minus, "[J-,V+] = -V-");
    check("[J+,W-] = W+", commutator(g.J_plus, g.W_minus), g.W_plus, "[J+,W-] = -W+");
    check("[J-,W+] = W-", commutator(g.J_minus, g.W_plus), g.W_minus, "[J-,W+] = -W-");
    check("[J,W+] = -W+/2", commutator(g.J_total, g.W_plus), -half * g.W_plus, "[J,W+] = +W+/2");
    check("[J,W-] = -W-/2", commutator(g.J_total, g.W_minus), -half * g.W_minus,
          "[J,W-] = +W-/2");
    check("[J,V+] = +V+/2", commutator(g.J_total, g.V_plus), half * g.V_plus, "[J,V+] = -V+/2");
    check("[J,V-] = +V-/2", commutator(g.J_total, g.V_minus), half * g.V_minus,
          "[J,V-] = -V-/2");
    check("[J+,V+] = 0", commutator(g.J_plus, g.V_plus), zero, "");
    check("[J-,V-] = 0", commutator(g.J_minus, g.V_minus), zero, "");
    check("[J+,W+] = 0", commutator(g.J_plus, g.W_plus), zero, "");
    check("[J-,W-] = 0", commutator(g.J_minus, g.W_minus), zero, "");
    check("{V+,W+} = J+", anticommutator(g.V_plus, g.W_plus), g.J_plus, "{V+,W+} = -J+");
    check("{V-,W-} = J-", anticommutator(g.V_minus, g.W_minus), g.J_minus, "{V-,W-} = -J-");
    check("{V+,W-} = J0 - J", anticommutator(g.V_plus, g.W_minus), g.J_zero - g.J_total,
          "{V+,W-} = -(J0 - J)");
    check("{V-,W+} = -J0 - J", anticommutator(g.V_minus, g.W_plus),
          std::complex<double>(-1.0) * (g.J_zero + g.J_total), "{V-,W+} = J0 + J");
    check("{V+,V+} = 0", anticommutator(g.V_plus, g.V_plus), zero, "");
    check("{V-,V-} = 0", anticommutator(g.V_minus, g.V_minus), zero, "");
    check("{V+,V-} = 0", anticommutator(g.V_plus, g.V_minus), zero, "");
    check("{W+,W+} = 0", anticommutator(g.W_plus, g.W_plus), zero, "");
    check("{W-,W-} = 0", anticommutator(g.W_minus, g.W_minus), zero, "");
    check("{W+,W-} = 0", anticommutator(g.W_plus, g.W_minus), zero, "");

    // conserved quantity: [K, G] = 0 for every generator
    const std::pair<const char*, const TruncatedOperator*> gens[] = {
        {"J+", &g.J_plus}, {"J-", &g.J_minus}, {"J0", &g.J_zero},  {"V+", &g.V_plus},
        {"V-", &g.V_minus}, {"W+", &g.W_plus}, {"W-", &g.W_minus},
    };
    for (const auto& [gname, op] : gens) {
        check(std::string("[K,") + gname + "] = 0", commutator(g.K, *op), zero, "");
    }

    return report;
}

}  // namespace rashba
