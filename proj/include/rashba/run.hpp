// run.hpp — reproducible runs behind the command-line surface. Commands are
// plain functions over a validated RunConfig so tests can drive them without
// spawning processes. Exit-code contract: 0 ok, 1 verification mismatch,
// 2 config error, 3 oracle non-convergence.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rashba/fock.hpp"
#include "rashba/oracle.hpp"
#include "rashba/params.hpp"
#include "rashba/qes.hpp"

namespace rashba {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationMismatch = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNotConverged = 3;

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SweepSpec {
    std::string axis;  // "kappa" | "r" | "b"
    Rational start, end;
    int points = 0;

    Rational value_at(int i) const;
};

struct RunConfig {
    std::optional<DimensionlessParams> dimensionless;
    std::optional<PhysicalParams> physical;
    int j_max = 2;
    int levels = 12;
    int nmax_cap = 160;
    double tol = 1e-9;  // oracle relative tolerance (spectrum/sweep) or check tolerance (verify)
    int workers = 1;
    std::optional<SweepSpec> sweep;
    std::filesystem::path out_dir = "out";

    // rationalization records for the manifest (filled by param resolution)
    mutable std::vector<std::string> rationalizations;
};

// Throws ConfigError unless exactly one parameter group is present and all
// command-relevant fields are sane.
void validate_config(const RunConfig& config, bool needs_sweep);

// Resolves the effective dimensionless parameters, reducing the physical
// group when given and recording every double -> exact-dyadic snap.
DimensionlessParams effective_params(const RunConfig& config);

// Parses the {"physical": {...}} / {"dimensionless": {...}} parameter file
// schema into the config. String values like "8/5" stay exact.
void load_params_json(const nlohmann::json& doc, RunConfig& config);

// ---------------------------------------------------------------------------
// verification bundle (the `verify` command body)
// ---------------------------------------------------------------------------

struct VerificationOutcome {
    RelationReport relations;
    double hamiltonian_worst_difference = 0.0;  // over random parameter triples
    int hamiltonian_trials = 0;
    double hamiltonian_tolerance = 0.0;
    bool generator_equivalence_ok = false;  // j in {0..3} x rational triples, exact
    std::vector<DiscrepancyReport> determinant_comparisons;
    TranscriptionCheck transcription;

    bool hard_mismatch() const;
    int exit_code() const { return hard_mismatch() ? kExitVerificationMismatch : kExitOk; }
    nlohmann::json to_json() const;
};

// `set_override` lets the negative path be exercised: the supplied generator
// set replaces the freshly built one before relation checking.
VerificationOutcome run_verification(double relation_tol = 1e-12, int fock_cutoff = 8,
                                     const Osp22Set* set_override = nullptr);

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

// Writes spectrum.csv, qes_roots.csv, validation.csv, validation.json,
// sectors.json, manifest.json under out_dir.
int cmd_spectrum(const RunConfig& config);

// Writes verify_report.json; exit 0 also when only typo-suspected findings
// occur (findings are data, not failures).
int cmd_verify(const RunConfig& config);

// Writes sweep.csv and manifest.json; per-point failures are recorded in-row
// and the run continues.
int cmd_sweep(const RunConfig& config);

// deterministic numeric formatting shared by all writers
std::string format_double(double v);

}  // namespace rashba
