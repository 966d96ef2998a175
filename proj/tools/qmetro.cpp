// qmetro: command-line surface of the quantum-correlation metrology toolkit.
//
// Subcommands:
//   measure   tangle / interferometric power / QFI report for one state
//   scan      tangle-vs-IP region scan over random rank-2 two-qubit states
//   curves    extremal boundary curves of the tangle/IP region
//   channels  channel-family audits: monotonicity fuzz and range queries
//   nmr       pulse-level preparation reports with calibration-error Monte Carlo
//   verify    full acceptance suite
//
// Every command is deterministic given (seed, flags).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qmetro/qmetro.hpp>
#include <qmetro/verify.hpp>

namespace {

using qmetro::ordered_json;

struct GlobalConfig {
    std::uint64_t seed = 1;
    long long samples = 0;  // 0 = per-command default
    std::string out;
    std::string format = "csv";
    std::map<std::string, double> tol = {
        {"hierarchy", 1e-9},     // hierarchy slack in measure/scan checks
        {"oracle_gap", 1e-4},    // closed-form vs oracle agreement
        {"grid", 1e-9},          // closed-form vs numeric on the angle grid
        {"curve", 1e-10},        // extremal-curve identities
        {"completeness", 1e-10}, // Kraus completeness defect
        {"choi", 1e-9},          // Choi spectrum agreement
        {"mono_unital", 1e-8},   // unital-qubit monotonicity slack
        {"mono_b", 1e-8},        // B-side monotonicity slack
        {"mono_oracle", 1e-3},   // qudit-oracle monotonicity slack
        {"classical_ip", 1e-9},  // IP bound on classical states
    };
};

void add_common_options(CLI::App* cmd, GlobalConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "Random seed (all randomness derives from it)");
    cmd->add_option("--samples", cfg.samples, "Sample count override (command-specific default)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", cfg.out, "Output file path");
    cmd->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    for (auto& entry : cfg.tol)
        cmd->add_option("--tol." + entry.first, entry.second,
                        "Tolerance override: " + entry.first)
            ->check(CLI::PositiveNumber);
}

void emit(const GlobalConfig& cfg, const std::string& content) {
    if (cfg.out.empty())
        std::cout << content;
    else
        qmetro::save_text(cfg.out, content);
}

// ---------------------------------------------------------------------------
// measure
// ---------------------------------------------------------------------------

struct MeasureArgs {
    std::string bell;
    std::vector<double> family;
    std::string state_path;
    double alpha = 1.0;
    double beta = 0.0;
};

int run_measure(const GlobalConfig& cfg, const MeasureArgs& args) {
    using namespace qmetro;
    int sources = int(!args.bell.empty()) + int(!args.family.empty()) +
                  int(!args.state_path.empty());
    if (sources != 1) {
        std::cerr << "measure: exactly one of --bell, --family, --state is required\n";
        return 2;
    }

    DensityMatrix rho(2, 2, [] {
        ComplexMatrix m(4, 4);
        m(0, 0) = 1.0;
        return m;
    }());
    if (!args.bell.empty()) {
        static const std::map<std::string, BellState> names = {
            {"phi+", BellState::PhiPlus},
            {"phi-", BellState::PhiMinus},
            {"psi+", BellState::PsiPlus},
            {"psi-", BellState::PsiMinus},
        };
        const auto it = names.find(args.bell);
        if (it == names.end()) {
            std::cerr << "measure: unknown Bell state '" << args.bell << "'\n";
            return 2;
        }
        rho = bell(it->second).to_density();
    } else if (!args.family.empty()) {
        rho = family_state(FamilyParams(args.family[0], args.family[1]));
    } else {
        rho = density_from_json(ordered_json::parse(load_text(args.state_path)));
    }

    const Spectrum s(args.alpha, args.beta);
    const bool qubit_a = rho.dim_a() == 2;
    const bool two_qubit = qubit_a && rho.dim_b() == 2;

    ordered_json j;
    j["dim_a"] = rho.dim_a();
    j["dim_b"] = rho.dim_b();

    double tangle = -1.0;
    if (two_qubit) {
        tangle = tangle_wootters(rho).value;
        j["tangle"] = tangle;
    }

    double ip = 0.0;
    std::array<double, 3> worst_dir = {0, 0, 1};
    const IpResult oracle = ip_oracle(rho, s);
    j["ip_oracle"] = oracle.value;
    if (qubit_a) {
        const IpResult closed = ip_closed(rho, s);
        ip = closed.value;
        worst_dir = *closed.worst_direction;
        j["ip_closed"] = closed.value;
        j["qfi_x"] = qfi(rho, PhaseHamiltonian::from_direction(s, {1, 0, 0}));
        j["qfi_y"] = qfi(rho, PhaseHamiltonian::from_direction(s, {0, 1, 0}));
        j["qfi_z"] = qfi(rho, PhaseHamiltonian::from_direction(s, {0, 0, 1}));
        const double qfi_worst = qfi(rho, PhaseHamiltonian::from_direction(s, worst_dir));
        j["qfi_worst"] = qfi_worst;
        j["worst_direction"] = worst_dir;
    } else {
        ip = oracle.value;
    }

    const double slack = cfg.tol.at("hierarchy");
    bool hierarchy_ok = true;
    if (qubit_a) hierarchy_ok = j["qfi_worst"].get<double>() / 4.0 >= ip - slack;
    if (two_qubit) hierarchy_ok = hierarchy_ok && ip >= tangle - slack;
    j["hierarchy_ok"] = hierarchy_ok;

    if (cfg.format == "json") {
        emit(cfg, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        for (const auto& item : j.items()) os << item.key() << " = " << item.value() << "\n";
        emit(cfg, os.str());
    }
    return hierarchy_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

int run_scan(const GlobalConfig& cfg) {
    using namespace qmetro;
    const std::size_t n = cfg.samples > 0 ? std::size_t(cfg.samples) : 10000;
    const std::vector<ScanRecord> records = run_region_scan(n, cfg.seed);

    const double slack = cfg.tol.at("hierarchy");
    std::size_t lower = 0, upper = 0;
    for (const ScanRecord& r : records) {
        if (r.tangle > r.ip + slack) ++lower;
        if (r.ip > (1.0 + r.tangle) / 2.0 + slack) ++upper;
    }

    const std::string csv = scan_to_csv(records);
    if (!cfg.out.empty()) save_text(cfg.out, csv);
    else std::cout << csv;
    std::cerr << "scan: " << n << " samples, " << lower << " lower-bound violations (hard), "
              << upper << " upper-bound violations (conjecture, report-only)\n";
    return lower == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// curves
// ---------------------------------------------------------------------------

int run_curves(const GlobalConfig& cfg) {
    using namespace qmetro;
    const std::size_t n = cfg.samples > 0 ? std::size_t(cfg.samples) : 101;
    if (n < 2) {
        std::cerr << "curves: need at least 2 points\n";
        return 2;
    }
    const double tol = cfg.tol.at("curve");
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double T = double(i) / double(n - 1);
        for (CurveKind kind : {CurveKind::Lower, CurveKind::Upper}) {
            const FamilyParams p = extremal_curve(kind, T);
            worst = std::max(worst, std::abs(family_tangle(p) - T));
            worst = std::max(worst,
                             std::abs(family_ip(p) - extremal_curve_ip(kind, T)));
        }
    }
    const std::string csv = curves_to_csv(n);
    if (!cfg.out.empty()) save_text(cfg.out, csv);
    else std::cout << csv;
    std::cerr << "curves: " << n << " points per curve, worst identity defect " << worst
              << "\n";
    return worst <= tol ? 0 : 1;
}

// ---------------------------------------------------------------------------
// channels
// ---------------------------------------------------------------------------

struct ChannelsArgs {
    std::string family = "all";  // all | unital | bside | isotropic | antiunitary
    std::size_t d = 0;
    double t = 0.0;
    bool t_given = false;
    bool anti = false;
};

int run_channels(const GlobalConfig& cfg, const ChannelsArgs& args) {
    using namespace qmetro;

    // Range-query mode: attempt one isotropic construction and report.
    if (args.t_given) {
        const std::size_t d = args.d == 0 ? 2 : args.d;
        const auto [lo, hi] = IsotropicParams::admissible_range(d, args.anti);
        try {
            const KrausChannel ch =
                build_isotropic(IsotropicParams{d, args.t, ComplexMatrix::identity(d), args.anti});
            const EigResult eig = hermitian_eig(choi_matrix(ch).matrix());
            std::cout << "accepted: d = " << d << ", t = " << args.t << ", "
                      << (args.anti ? "antiunitary" : "unitary")
                      << "; admissible interval [" << lo << ", " << hi << "]\n"
                      << "Choi minimum eigenvalue: " << eig.eigenvalues.front() << "\n"
                      << "Kraus operators: " << ch.kraus().size() << "\n";
        } catch (const IsotropicRangeError& err) {
            const ComplexMatrix tau =
                isotropic_choi_direct(d, err.requested_t(), ComplexMatrix::identity(d), args.anti);
            const EigResult eig = hermitian_eig(tau);
            std::cout << "rejected: " << err.what() << "\n"
                      << "direct-form Choi minimum eigenvalue: " << eig.eigenvalues.front()
                      << "\n";
        }
        return 0;  // a correct rejection is expected behavior
    }

    // Fuzz mode.
    const std::size_t n = cfg.samples > 0 ? std::size_t(cfg.samples) : 100;
    const std::size_t n_oracle = std::max<std::size_t>(2, n / 25);
    ordered_json j;
    bool hard_ok = true;
    std::ostringstream os;

    auto record = [&](const char* name, const qmetro::verify::FuzzOutcome& f, bool hard) {
        ordered_json fj;
        fj["checked"] = f.checked;
        fj["violations"] = f.violations;
        fj["worst_gap"] = f.worst_gap;
        fj["hard"] = hard;
        j[name] = std::move(fj);
        os << name << ": " << f.violations << "/" << f.checked << " violations, worst gap "
           << f.worst_gap << (hard ? "" : " (report-only)") << "\n";
        if (hard && f.violations > 0) hard_ok = false;
    };

    const bool all = args.family == "all";
    if (all || args.family == "unital")
        record("unital_qubit",
               qmetro::verify::fuzz_unital_qubit_monotonicity(n, cfg.seed ^ 0xF0221ULL,
                                                              cfg.tol.at("mono_unital")),
               true);
    if (all || args.family == "bside")
        record("b_side",
               qmetro::verify::fuzz_b_side_monotonicity(n, cfg.seed ^ 0xF0222ULL,
                                                        cfg.tol.at("mono_b")),
               true);
    if (all || args.family == "isotropic")
        record("isotropic_unitary",
               qmetro::verify::fuzz_isotropic_qudit_monotonicity(n_oracle, cfg.seed ^ 0xF0223ULL,
                                                                 cfg.tol.at("mono_oracle")),
               true);
    if (args.family == "antiunitary")
        record("isotropic_antiunitary",
               qmetro::verify::fuzz_antiunitary_isotropic(n_oracle, cfg.seed ^ 0xF0224ULL,
                                                          cfg.tol.at("mono_oracle")),
               false);

    if (!cfg.out.empty()) save_text(cfg.out, j.dump(2) + "\n");
    std::cout << os.str();
    return hard_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// nmr
// ---------------------------------------------------------------------------

struct NmrArgs {
    std::string table;  // 1a | 1b | a | b | all
    int index = -1;
    double theta1 = -1.0;
    double theta2 = -1.0;
    bool thetas_given = false;
    double err = 0.03;
    int runs = 100;
    std::string dist = "uniform";
    std::string fid_out;
};

int run_nmr(const GlobalConfig& cfg, const NmrArgs& args) {
    using namespace qmetro;

    std::vector<FamilyParams> points;
    const AngleTable table = table1_params();
    if (args.thetas_given) {
        points.emplace_back(args.theta1, args.theta2);
    } else if (!args.table.empty()) {
        std::string name = args.table;
        if (name.size() == 2 && name[0] == '1') name = name.substr(1);
        std::vector<FamilyParams> list;
        if (name == "a") list = table.list_a;
        else if (name == "b") list = table.list_b;
        else if (name == "all") {
            list = table.list_a;
            list.insert(list.end(), table.list_b.begin(), table.list_b.end());
        } else {
            std::cerr << "nmr: unknown table '" << args.table << "'\n";
            return 2;
        }
        if (args.index >= 0) {
            if (std::size_t(args.index) >= list.size()) {
                std::cerr << "nmr: index " << args.index << " out of range (list has "
                          << list.size() << " points)\n";
                return 2;
            }
            points.push_back(list[std::size_t(args.index)]);
        } else {
            points = list;
        }
    } else {
        std::cerr << "nmr: provide --theta1/--theta2 or --table (optionally --index)\n";
        return 2;
    }

    ErrorModel em;
    em.relative_bound = args.err;
    em.runs = args.runs;
    em.distribution =
        args.dist == "gaussian" ? ErrorDistribution::Gaussian : ErrorDistribution::Uniform;
    em.seed = cfg.seed;

    ordered_json reports = ordered_json::array();
    CsvWriter fid_csv({"point", "run", "fidelity"});
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<double> run_fid;
        const PrepReport report = monte_carlo(points[i], em, &run_fid);
        reports.push_back(prep_report_to_json(report));
        for (std::size_t r = 0; r < run_fid.size(); ++r)
            fid_csv.add_row({std::to_string(i), std::to_string(r), format_double(run_fid[r])});
        std::cerr << "nmr point (" << points[i].theta1 << ", " << points[i].theta2
                  << "): fidelity_mean = " << report.fidelity_mean
                  << ", fidelity_min = " << report.fidelity_min << "\n";
    }

    const std::string json_text =
        (points.size() == 1 ? reports[0].dump(2) : reports.dump(2)) + "\n";
    if (!cfg.out.empty()) save_text(cfg.out, json_text);
    else std::cout << json_text;
    if (!args.fid_out.empty()) fid_csv.save(args.fid_out);
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int run_verify(const GlobalConfig& cfg, const std::string& self_path) {
    qmetro::verify::VerifyConfig vcfg;
    vcfg.seed = cfg.seed;
    std::error_code ec;
    const std::filesystem::path canonical = std::filesystem::canonical(self_path, ec);
    vcfg.cli_path = ec ? self_path : canonical.string();
    const std::vector<qmetro::verify::CriterionResult> results =
        qmetro::verify::run_acceptance(vcfg);
    return qmetro::verify::report_acceptance(results, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-correlation metrology toolkit"};
    app.require_subcommand(1);

    GlobalConfig cfg;
    MeasureArgs measure_args;
    ChannelsArgs channels_args;
    NmrArgs nmr_args;

    CLI::App* measure = app.add_subcommand("measure", "Correlation report for one state");
    add_common_options(measure, cfg);
    measure->add_option("--bell", measure_args.bell, "Bell state: phi+ phi- psi+ psi-");
    measure->add_option("--family", measure_args.family, "Family angles theta1 theta2 (radians)")
        ->expected(2);
    measure->add_option("--state", measure_args.state_path, "Density-matrix JSON file");
    measure->add_option("--alpha", measure_args.alpha, "Spectrum scale (alpha > 0)");
    measure->add_option("--beta", measure_args.beta, "Spectrum offset");

    CLI::App* scan = app.add_subcommand("scan", "Tangle/IP region scan (rank-2 states)");
    add_common_options(scan, cfg);

    CLI::App* curves = app.add_subcommand("curves", "Extremal boundary curves");
    add_common_options(curves, cfg);

    CLI::App* channels = app.add_subcommand("channels", "Channel audits and range queries");
    add_common_options(channels, cfg);
    channels->add_option("--family", channels_args.family, "all|unital|bside|isotropic|antiunitary")
        ->check(CLI::IsMember({"all", "unital", "bside", "isotropic", "antiunitary"}));
    channels->add_option("--d", channels_args.d, "Isotropic dimension for range query");
    CLI::Option* t_opt = channels->add_option("--t", channels_args.t, "Isotropic t for range query");
    channels->add_flag("--anti", channels_args.anti, "Antiunitary family for range query");

    CLI::App* nmr = app.add_subcommand("nmr", "Pulse-level preparation reports");
    add_common_options(nmr, cfg);
    nmr->add_option("--table", nmr_args.table, "Published angle list: 1a|1b|all");
    nmr->add_option("--index", nmr_args.index, "Point index within the list (default: all)");
    CLI::Option* t1_opt = nmr->add_option("--theta1", nmr_args.theta1, "theta1 in radians");
    CLI::Option* t2_opt = nmr->add_option("--theta2", nmr_args.theta2, "theta2 in radians");
    nmr->add_option("--err", nmr_args.err, "Relative pulse-error bound (default 0.03)");
    nmr->add_option("--runs", nmr_args.runs, "Monte Carlo runs (default 100)");
    nmr->add_option("--dist", nmr_args.dist, "Error distribution")
        ->check(CLI::IsMember({"uniform", "gaussian"}));
    nmr->add_option("--fid-out", nmr_args.fid_out, "Per-run fidelity CSV path");

    CLI::App* verify = app.add_subcommand("verify", "Run the full acceptance suite");
    add_common_options(verify, cfg);

    CLI11_PARSE(app, argc, argv);

    channels_args.t_given = t_opt->count() > 0;
    nmr_args.thetas_given = t1_opt->count() > 0 && t2_opt->count() > 0;

    try {
        if (measure->parsed()) return run_measure(cfg, measure_args);
        if (scan->parsed()) return run_scan(cfg);
        if (curves->parsed()) return run_curves(cfg);
        if (channels->parsed()) return run_channels(cfg, channels_args);
        if (nmr->parsed()) return run_nmr(cfg, nmr_args);
        if (verify->parsed()) return run_verify(cfg, argv[0]);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
