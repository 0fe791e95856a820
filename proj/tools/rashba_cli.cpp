// rashba — spectra, sweeps, algebra verification, and validation reports for
// the Rashba quantum-dot spin-boson model.
//
// Exit codes: 0 ok, 1 verification mismatch, 2 config error, 3 oracle
// non-convergence.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rashba/run.hpp"

namespace {

struct CliOptions {
    std::string r, b, kappa;
    std::string physical_file;
    rashba::RunConfig config;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--r", opt.r, "frequency ratio omega_c/omega (number or rational like 8/5)");
    cmd->add_option("--b", opt.b, "Zeeman strength g mu B / (2 hbar omega)");
    cmd->add_option("--kappa", opt.kappa, "dimensionless Rashba coupling");
    cmd->add_option("--physical", opt.physical_file,
                    "JSON file with a 'physical' or 'dimensionless' parameter group");
    cmd->add_option("--jmax", opt.config.j_max, "largest QES block index");
    cmd->add_option("--levels", opt.config.levels, "levels tracked per K-sector");
    cmd->add_option("--nmax-cap", opt.config.nmax_cap, "truncation ceiling for the oracle");
    cmd->add_option("--tol", opt.config.tol, "oracle relative convergence tolerance");
    cmd->add_option("--out", opt.config.out_dir, "output directory");
    cmd->add_option("--workers", opt.config.workers, "worker threads for sweeps");
}

void resolve_params(CliOptions& opt) {
    using rashba::ConfigError;
    const bool any_inline = !opt.r.empty() || !opt.b.empty() || !opt.kappa.empty();
    if (!opt.physical_file.empty()) {
        if (any_inline) throw ConfigError("give either --r/--b/--kappa or --physical, not both");
        std::ifstream is(opt.physical_file);
        if (!is) throw ConfigError("cannot read parameter file " + opt.physical_file);
        nlohmann::json doc;
        try {
            is >> doc;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("parameter file is not valid JSON: ") + e.what());
        }
        rashba::load_params_json(doc, opt.config);
        return;
    }
    if (!any_inline) return;  // validate_config reports the missing group
    if (opt.r.empty() || opt.b.empty() || opt.kappa.empty())
        throw ConfigError("all of --r, --b, --kappa are needed together");
    const auto pr = rashba::parse_rational(opt.r);
    const auto pb = rashba::parse_rational(opt.b);
    const auto pk = rashba::parse_rational(opt.kappa);
    if (!pr) throw ConfigError("cannot parse --r value '" + opt.r + "'");
    if (!pb) throw ConfigError("cannot parse --b value '" + opt.b + "'");
    if (!pk) throw ConfigError("cannot parse --kappa value '" + opt.kappa + "'");
    opt.config.dimensionless = rashba::DimensionlessParams(*pr, *pb, *pk);
}

rashba::SweepSpec parse_sweep(const std::string& text) {
    // axis:start:end:points
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4)
        throw rashba::ConfigError("--sweep expects axis:start:end:points, got '" + text + "'");
    rashba::SweepSpec spec;
    spec.axis = parts[0];
    const auto start = rashba::parse_rational(parts[1]);
    const auto end = rashba::parse_rational(parts[2]);
    if (!start || !end) throw rashba::ConfigError("cannot parse sweep range in '" + text + "'");
    spec.start = *start;
    spec.end = *end;
    try {
        spec.points = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw rashba::ConfigError("cannot parse sweep point count in '" + text + "'");
    }
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QES spectra and validation for the Rashba quantum-dot spin-boson model"};
    app.require_subcommand(1);

    CliOptions spectrum_opt, verify_opt, sweep_opt;
    std::string sweep_text;

    auto* spectrum = app.add_subcommand(
        "spectrum", "converged oracle spectrum, QES roots, and the validation report");
    add_common_flags(spectrum, spectrum_opt);

    auto* verify = app.add_subcommand(
        "verify", "relation table, double-build equality, generator equivalence, determinant "
                  "comparison; typos are findings, not failures");
    verify->add_option("--out", verify_opt.config.out_dir, "output directory");

    auto* sweep = app.add_subcommand("sweep", "QES roots and oracle gaps along one parameter axis");
    add_common_flags(sweep, sweep_opt);
    sweep->add_option("--sweep", sweep_text, "axis:start:end:points with axis in {kappa, r, b}")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) {
            resolve_params(spectrum_opt);
            rashba::validate_config(spectrum_opt.config, false);
            const int code = rashba::cmd_spectrum(spectrum_opt.config);
            if (code == rashba::kExitNotConverged)
                std::cerr << "oracle did not converge at the truncation cap; "
                             "partial outputs carry non-converged markers\n";
            return code;
        }
        if (verify->parsed()) {
            const int code = rashba::cmd_verify(verify_opt.config);
            std::cout << (code == 0 ? "verification passed (typo findings, if any, are in "
                                      "verify_report.json)"
                                    : "verification found hard mismatches")
                      << "\n";
            return code;
        }
        if (sweep->parsed()) {
            resolve_params(sweep_opt);
            sweep_opt.config.sweep = parse_sweep(sweep_text);
            rashba::validate_config(sweep_opt.config, true);
            return rashba::cmd_sweep(sweep_opt.config);
        }
    } catch (const rashba::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return rashba::kExitConfigError;
    } catch (const rashba::InvalidParameter& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return rashba::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rashba::kExitConfigError;
}
