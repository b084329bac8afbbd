// coollab — command-line front end: channel certification, state evolution,
// population-scatter generation, theorem sweeps, weight optimization, and
// the effective-temperature map.
//
// Exit codes: 0 success / bound holds, 1 mathematically meaningful negative
// (cooling possible or bound violated), 2 operational error (bad input,
// unwritable output, malformed JSON).

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coollab/channels.hpp"
#include "coollab/experiments.hpp"
#include "coollab/json_io.hpp"
#include "coollab/noise_models.hpp"
#include "coollab/spectral.hpp"

namespace {

using namespace coollab;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

RngSeed default_seed() {
    if (const char* env = std::getenv("COOLLAB_SEED"))
        return {std::strtoull(env, nullptr, 10), 0};
    return {0, 0};
}

KrausChannel load_kraus(const std::string& path) {
    const AnyChannel any = channel_from_json(load_json_file(path));
    if (std::holds_alternative<KrausChannel>(any))
        return std::get<KrausChannel>(any);
    return to_kraus(std::get<RandomUnitaryChannel>(any));
}

int cmd_certify(const std::string& channel_file, double tolerance) {
    const KrausChannel ch = load_kraus(channel_file);
    const ChannelCertificate cert = certify(ch);
    std::cout << certificate_to_json(cert).dump(2) << "\n";
    if (cert.cptp_defect > tolerance) {
        std::cerr << "certify: CPTP defect " << cert.cptp_defect
                  << " exceeds tolerance " << tolerance << "\n";
        return kExitError;
    }
    return cert.cooling_impossible ? kExitOk : kExitNegative;
}

int cmd_evolve(const std::string& channel_file, const std::string& state_file,
               const std::string& out_path, double tolerance) {
    const AnyChannel any = channel_from_json(load_json_file(channel_file));
    const DensityMatrix rho = density_from_json(load_json_file(state_file));
    const DensityMatrix out =
        std::holds_alternative<RandomUnitaryChannel>(any)
            ? apply_random_unitary(std::get<RandomUnitaryChannel>(any), rho)
            : apply_kraus(std::get<KrausChannel>(any), rho);
    if (!out_path.empty())
        write_text_file(out_path, density_to_json(out).dump(2) + "\n");
    const TheoremReport rep = theorem_check(rho, out, tolerance);
    std::cout << json{{"p1", rep.p1},
                      {"q1", rep.q1},
                      {"margin", rep.margin},
                      {"pass", rep.pass}}
                     .dump(2)
              << "\n";
    return rep.pass && rep.all_indices_pass ? kExitOk : kExitNegative;
}

int cmd_verify(const std::string& initial_file, const std::string& final_file,
               double tolerance) {
    const DensityMatrix rho_i = density_from_json(load_json_file(initial_file));
    const DensityMatrix rho_f = density_from_json(load_json_file(final_file));
    const TheoremReport rep = theorem_check(rho_i, rho_f, tolerance);
    std::cout << json{{"p1", rep.p1},
                      {"q1", rep.q1},
                      {"margin", rep.margin},
                      {"pass", rep.pass},
                      {"all_indices_pass", rep.all_indices_pass}}
                     .dump(2)
              << "\n";
    return rep.pass && rep.all_indices_pass ? kExitOk : kExitNegative;
}

int cmd_figure1(const ExperimentConfig& cfg) {
    const auto records = run_figure1(cfg);
    if (!cfg.output_path.empty())
        emit_report(records, cfg.output_path, ReportFormat::csv);
    else
        std::cout << records_to_csv(records);
    for (const auto& r : records)
        if (r.q1 > r.p1 + cfg.tolerance) return kExitNegative;
    return kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& kind) {
    const SweepReport report = kind == "quantum"
                                   ? run_quantum_channel_sweep(cfg)
                                   : run_theorem_sweep(cfg);
    std::cout << sweep_report_to_json(report).dump(2) << "\n";
    if (!cfg.output_path.empty()) emit_report(report, cfg.output_path);
    return report.violations == 0 ? kExitOk : kExitNegative;
}

int cmd_optimize(const std::string& thetas_csv, const std::string& method,
                 long budget) {
    std::vector<double> thetas;
    std::stringstream ss(thetas_csv);
    std::string item;
    while (std::getline(ss, item, ','))
        thetas.push_back(std::stod(item));
    const OptimizerResult result =
        maximize_Y(thetas, method == "grid" ? OptimizerMethod::grid
                                            : OptimizerMethod::projected_gradient,
                   budget);
    std::cout << json{{"best_weights", result.best_weights},
                      {"best_value", result.best_value},
                      {"iterations", result.iterations},
                      {"converged", result.converged}}
                     .dump(2)
              << "\n";
    return kExitOk;
}

int cmd_temperature(double omega, double k_b, double p1) {
    const double t = effective_temperature(p1, TemperatureSpec{omega, k_b});
    std::cout << json{{"temperature", t}}.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coollab: random-unitary / Kraus channel simulation and "
                 "cooling-bound certification"};
    app.require_subcommand(1);

    std::string channel_file, state_file, initial_file, final_file;
    std::string out_path, config_path, noisy = "theta", kind = "theorem";
    std::string thetas_csv, method = "grid";
    double tolerance = tol::theorem;
    double cptp_tolerance = tol::cptp;
    double omega = 1.0, k_b = 1.0, p1 = 0.5;
    long budget = 1000;
    std::uint64_t seed_flag = default_seed().seed;
    int points = -1, realizations = -1, workers = 1, trials = -1;

    auto* certify_cmd = app.add_subcommand("certify", "Certify a Kraus channel file");
    certify_cmd->add_option("channel", channel_file)->required();
    certify_cmd->add_option("--tol", cptp_tolerance, "CPTP tolerance");

    auto* evolve_cmd = app.add_subcommand("evolve", "Evolve a state through a channel");
    evolve_cmd->add_option("channel", channel_file)->required();
    evolve_cmd->add_option("state", state_file)->required();
    evolve_cmd->add_option("--out", out_path, "Final-state JSON path");
    evolve_cmd->add_option("--tol", tolerance, "Bound tolerance");

    auto* verify_cmd = app.add_subcommand("verify", "Check the population bound between two states");
    verify_cmd->add_option("initial", initial_file)->required();
    verify_cmd->add_option("final", final_file)->required();
    verify_cmd->add_option("--tol", tolerance, "Bound tolerance");

    auto* figure1_cmd = app.add_subcommand("figure1", "Noisy-STIRAP population scatter CSV");
    figure1_cmd->add_option("--seed", seed_flag);
    figure1_cmd->add_option("--points", points);
    figure1_cmd->add_option("--realizations", realizations);
    figure1_cmd->add_option("--noisy", noisy)->check(CLI::IsMember({"theta", "alpha"}));
    figure1_cmd->add_option("--out", out_path, "Scatter CSV path");
    figure1_cmd->add_option("--workers", workers);
    figure1_cmd->add_option("--config", config_path, "Experiment config JSON");

    auto* sweep_cmd = app.add_subcommand("sweep", "Random-channel theorem sweep");
    sweep_cmd->add_option("--config", config_path, "Experiment config JSON");
    sweep_cmd->add_option("--kind", kind)->check(CLI::IsMember({"theorem", "quantum"}));
    sweep_cmd->add_option("--seed", seed_flag);
    sweep_cmd->add_option("--trials", trials, "Number of trials");
    sweep_cmd->add_option("--out", out_path, "Report JSON path");
    sweep_cmd->add_option("--workers", workers);

    auto* optimize_cmd = app.add_subcommand("optimize", "Maximize Y over simplex weights");
    optimize_cmd->add_option("--thetas", thetas_csv, "Comma-separated angles")->required();
    optimize_cmd->add_option("--method", method)->check(CLI::IsMember({"grid", "projected_gradient"}));
    optimize_cmd->add_option("--budget", budget);

    auto* temperature_cmd = app.add_subcommand("temperature", "Effective temperature of a population");
    temperature_cmd->add_option("--omega", omega)->required();
    temperature_cmd->add_option("--p1", p1)->required();
    temperature_cmd->add_option("--kb", k_b);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (certify_cmd->parsed()) return cmd_certify(channel_file, cptp_tolerance);
        if (evolve_cmd->parsed())
            return cmd_evolve(channel_file, state_file, out_path, tolerance);
        if (verify_cmd->parsed())
            return cmd_verify(initial_file, final_file, tolerance);

        ExperimentConfig cfg;
        if (!config_path.empty())
            cfg = config_from_json(load_json_file(config_path));
        else
            cfg.seed = default_seed();
        // Flags override config-file values.
        if (figure1_cmd->count("--seed") || sweep_cmd->count("--seed"))
            cfg.seed = {seed_flag, 0};
        if (points > 0) cfg.points = points;
        if (trials > 0) cfg.points = trials;
        if (realizations > 0) cfg.realizations = realizations;
        cfg.workers = workers;
        if (!out_path.empty()) cfg.output_path = out_path;

        if (figure1_cmd->parsed()) {
            cfg.model.model = "stirap";
            if (figure1_cmd->count("--noisy") || config_path.empty())
                cfg.model.noisy = noisy == "theta" ? NoisyParameter::theta
                                                   : NoisyParameter::alpha;
            return cmd_figure1(cfg);
        }
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, kind);
        if (optimize_cmd->parsed())
            return cmd_optimize(thetas_csv, method, budget);
        if (temperature_cmd->parsed()) return cmd_temperature(omega, k_b, p1);
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
