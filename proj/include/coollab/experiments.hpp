#ifndef COOLLAB_EXPERIMENTS_HPP
#define COOLLAB_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "coollab/channels.hpp"
#include "coollab/json_io.hpp"
#include "coollab/noise_models.hpp"
#include "coollab/spectral.hpp"

namespace coollab {

/// Model selector for the experiment harness.
struct ModelConfig {
    std::string model = "stirap";  // "two_level" | "mr" | "stirap"
    NoisyParameter noisy = NoisyParameter::theta;
    /// Value of the non-fluctuating STIRAP angle; defaults per figure setup
    /// (cos alpha = sqrt(1/3) under noisy theta, cos theta = sqrt(7/10)
    /// under noisy alpha).
    std::optional<double> fixed_angle;
    MRParams mr;
};

struct ExperimentConfig {
    RngSeed seed;
    int points = 200;        // number of initial states / trials
    int realizations = 100;  // ensemble size N per channel
    std::vector<int> dims = {2, 3, 4, 5, 6};
    ModelConfig model;
    double tolerance = tol::theorem;
    std::string output_path;
    int workers = 1;

    void validate() const {
        if (points < 1) throw InvalidInput("ExperimentConfig: points < 1");
        if (realizations < 1)
            throw InvalidInput("ExperimentConfig: realizations < 1");
        if (!(tolerance > 0.0))
            throw InvalidInput("ExperimentConfig: tolerance must be > 0");
        if (workers < 1) throw InvalidInput("ExperimentConfig: workers < 1");
        for (int d : dims)
            if (d < 2) throw InvalidInput("ExperimentConfig: dims must be >= 2");
    }
};

/// One point of the population scatter: initial vs final max population.
struct ScatterRecord {
    int trial_index = 0;
    std::string model;
    double p1 = 0.0;
    double q1 = 0.0;
    RngSeed seed;

    double margin() const { return p1 - q1; }
    bool operator==(const ScatterRecord&) const = default;
};

struct DimSummary {
    long trials = 0;
    long violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
};

/// Aggregate of a theorem or quantum-channel sweep.
struct SweepReport {
    long trials = 0;
    long violations = 0;  // trials with q1 > p1 + tolerance
    double worst_margin = std::numeric_limits<double>::infinity();
    std::map<int, DimSummary> per_dim;
    /// Trials on non-row-sum-bounded channels where the bound actually broke
    /// (the negative control firing).
    long cooling_witnesses = 0;
    /// Dim-2 trials with equal gaps whose effective temperature decreased.
    long temperature_violations = 0;
};

namespace detail {

/// Deterministic parallel map: results land in a pre-sized buffer by trial
/// index, so the outcome is independent of worker count and scheduling.
template <typename Fn>
void run_trials(int count, int workers, Fn&& fn) {
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                fn(i);
        });
    for (auto& t : pool) t.join();
}

inline double default_fixed_angle(NoisyParameter noisy) {
    return noisy == NoisyParameter::theta
               ? std::acos(std::sqrt(1.0 / 3.0))   // alpha fixed
               : std::acos(std::sqrt(7.0 / 10.0)); // theta fixed
}

}  // namespace detail

/// Population scatter for noisy STIRAP: per trial draw a random 3-level
/// state, flat-Dirichlet weights over N realizations, and the fluctuating
/// angle uniform on [0, 2pi); evolve and record (P1, Q1).
inline std::vector<ScatterRecord> run_figure1(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.model.model != "stirap")
        throw InvalidInput("run_figure1: model must be stirap");
    const double fixed =
        cfg.model.fixed_angle.value_or(detail::default_fixed_angle(cfg.model.noisy));
    const std::string tag = cfg.model.noisy == NoisyParameter::theta
                                ? "stirap_noisy_theta"
                                : "stirap_noisy_alpha";

    std::vector<ScatterRecord> records(static_cast<std::size_t>(cfg.points));
    detail::run_trials(cfg.points, cfg.workers, [&](int t) {
        const RngSeed sub = cfg.seed.substream(static_cast<std::uint64_t>(t));
        Rng rng(sub);
        const DensityMatrix rho = detail::random_density_matrix(3, rng);
        const auto lambdas =
            rng.dirichlet_flat(static_cast<std::size_t>(cfg.realizations));
        std::vector<double> angles(static_cast<std::size_t>(cfg.realizations));
        for (auto& a : angles) a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        NoiseEnsemble ens(std::move(angles), lambdas);

        StirapParams params;
        params.noisy = cfg.model.noisy;
        if (cfg.model.noisy == NoisyParameter::theta)
            params.alpha = fixed;
        else
            params.theta = fixed;

        const DensityMatrix out =
            apply_random_unitary(stirap_channel(params, ens), rho);
        ScatterRecord rec;
        rec.trial_index = t;
        rec.model = tag;
        rec.p1 = sorted_spectrum(rho).max();
        rec.q1 = sorted_spectrum(out).max();
        rec.seed = sub;
        records[static_cast<std::size_t>(t)] = std::move(rec);
    });
    return records;
}

/// Falsification harness for the population bound: random Haar channels on
/// random states across dimensions, tallying any Q_m > P_1 + tolerance.
inline SweepReport run_theorem_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.dims.empty())
        throw InvalidInput("run_theorem_sweep: dims must be nonempty");

    struct TrialResult {
        int dim = 0;
        double margin = 0.0;
        bool violation = false;
        bool temperature_violation = false;
    };
    std::vector<TrialResult> results(static_cast<std::size_t>(cfg.points));

    detail::run_trials(cfg.points, cfg.workers, [&](int t) {
        const RngSeed sub = cfg.seed.substream(static_cast<std::uint64_t>(t));
        Rng rng(sub);
        const int dim = cfg.dims[static_cast<std::size_t>(
            rng.uniform_int(0, cfg.dims.size() - 1))];
        const auto count = static_cast<std::size_t>(rng.uniform_int(1, 8));
        const auto weights = rng.dirichlet_flat(count);
        std::vector<RandomUnitaryChannel::Realization> reals;
        reals.reserve(count);
        for (std::size_t k = 0; k < count; ++k)
            reals.push_back({weights[k], UnitaryRealization(
                                             detail::haar_unitary(dim, rng))});
        const RandomUnitaryChannel ch(dim, std::move(reals));
        const DensityMatrix rho = detail::random_density_matrix(dim, rng);
        const DensityMatrix out = apply_random_unitary(ch, rho);
        const TheoremReport rep = theorem_check(rho, out, cfg.tolerance);

        TrialResult res;
        res.dim = dim;
        res.margin = rep.margin;
        res.violation = !rep.pass || !rep.all_indices_pass;
        if (dim == 2) {
            const TemperatureSpec gap{1.0, 1.0};
            res.temperature_violation =
                !temperature_monotonicity_check(rep.p1, rep.q1, gap, gap)
                     .monotone;
        }
        results[static_cast<std::size_t>(t)] = res;
    });

    SweepReport report;
    report.trials = cfg.points;
    for (const auto& r : results) {
        auto& d = report.per_dim[r.dim];
        ++d.trials;
        d.worst_margin = std::min(d.worst_margin, r.margin);
        report.worst_margin = std::min(report.worst_margin, r.margin);
        if (r.violation) {
            ++report.violations;
            ++d.violations;
        }
        if (r.temperature_violation) ++report.temperature_violations;
    }
    return report;
}

/// Sweep over the four standard qubit channels (random p) and amplitude
/// damping (random gamma): the bound must hold whenever the certificate says
/// cooling is impossible, and the damping trials must produce at least one
/// genuine cooling event.
inline SweepReport run_quantum_channel_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    struct TrialResult {
        double margin = 0.0;
        bool violation = false;
        bool witness = false;
    };
    std::vector<TrialResult> results(static_cast<std::size_t>(cfg.points));

    detail::run_trials(cfg.points, cfg.workers, [&](int t) {
        const RngSeed sub = cfg.seed.substream(static_cast<std::uint64_t>(t));
        Rng rng(sub);
        const auto family = rng.uniform_int(0, 4);
        const double strength = rng.uniform();
        const KrausChannel ch =
            family < 4 ? standard_channel(static_cast<StandardChannelKind>(family),
                                          strength)
                       : amplitude_damping(strength);
        const DensityMatrix rho = detail::random_density_matrix(2, rng);
        const DensityMatrix out = apply_kraus(ch, rho);
        const TheoremReport rep = theorem_check(rho, out, cfg.tolerance);
        const ChannelCertificate cert = certify(ch);

        TrialResult res;
        res.margin = rep.margin;
        if (cert.cooling_impossible)
            res.violation = !rep.pass || !rep.all_indices_pass;
        else
            res.witness = rep.q1 > rep.p1 + cfg.tolerance;
        results[static_cast<std::size_t>(t)] = res;
    });

    SweepReport report;
    report.trials = cfg.points;
    for (const auto& r : results) {
        report.worst_margin = std::min(report.worst_margin, r.margin);
        if (r.violation) ++report.violations;
        if (r.witness) ++report.cooling_witnesses;
    }
    return report;
}

struct OptimizerResult {
    std::vector<double> best_weights;
    double best_value = 0.0;
    long iterations = 0;
    bool converged = false;
};

enum class OptimizerMethod { grid, projected_gradient };

namespace detail {

/// Euclidean projection onto the probability simplex (sort-based).
inline std::vector<double> project_simplex(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0, threshold = 0.0;
    int support = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cumulative += u[i];
        const double candidate =
            (cumulative - 1.0) / static_cast<double>(i + 1);
        if (u[i] - candidate > 0.0) {
            threshold = candidate;
            support = static_cast<int>(i + 1);
        }
    }
    (void)support;
    for (auto& x : v) x = std::max(0.0, x - threshold);
    return v;
}

template <typename Fn>
void for_each_lattice_point(std::size_t n, int resolution, Fn&& fn) {
    std::vector<int> counts(n, 0);
    std::vector<double> point(n, 0.0);
    // Depth-first enumeration of compositions of `resolution` into n parts.
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx,
                                                    int remaining) {
        if (idx + 1 == n) {
            counts[idx] = remaining;
            for (std::size_t i = 0; i < n; ++i)
                point[i] = static_cast<double>(counts[i]) / resolution;
            fn(point);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[idx] = c;
            rec(idx + 1, remaining - c);
        }
    };
    rec(0, resolution);
}

}  // namespace detail

/// Maximizes Y(lambda) over the simplex for fixed angles. The grid method is
/// the exhaustive lattice oracle (resolution 1/100 up to N = 3, 1/20 up to
/// N = 8); projected gradient is the scalable route checked against it.
inline OptimizerResult maximize_Y(const std::vector<double>& thetas,
                                  OptimizerMethod method, long budget = 1000) {
    if (thetas.empty()) throw InvalidInput("maximize_Y: empty theta list");
    if (budget < 1) throw InvalidInput("maximize_Y: budget must be >= 1");
    const std::size_t n = thetas.size();
    const auto value = [&](const std::vector<double>& lam) {
        double c = 0.0, s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            c += lam[k] * std::cos(2.0 * thetas[k]);
            s += lam[k] * std::sin(2.0 * thetas[k]);
        }
        return c * c + s * s;
    };

    OptimizerResult result;
    if (method == OptimizerMethod::grid) {
        if (n > 8)
            throw InvalidInput("maximize_Y: grid method limited to N <= 8");
        const int resolution = n <= 3 ? 100 : 20;
        result.best_value = -1.0;
        detail::for_each_lattice_point(n, resolution,
                                       [&](const std::vector<double>& lam) {
                                           ++result.iterations;
                                           const double y = value(lam);
                                           if (y > result.best_value) {
                                               result.best_value = y;
                                               result.best_weights = lam;
                                           }
                                       });
        result.converged = true;
        return result;
    }

    // Projected gradient ascent, multi-start. Y is convex quadratic with
    // curvature at most 2, so a fixed step of 1/4 is stable. Starts cover
    // the uniform point and every vertex: the uniform point alone can be a
    // stationary point of the projected ascent (equal gradient components
    // project to zero motion) while the maximum of a convex function sits
    // at a vertex.
    std::vector<std::vector<double>> starts;
    starts.emplace_back(n, 1.0 / static_cast<double>(n));
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<double> vertex(n, 0.0);
        vertex[v] = 1.0;
        starts.push_back(std::move(vertex));
    }

    constexpr double step = 0.25;
    double best = -1.0;
    for (auto& lam : starts) {
        double local_best = value(lam);
        std::vector<double> local_arg = lam;
        for (long it = 0; it < budget; ++it) {
            ++result.iterations;
            double c = 0.0, s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                c += lam[k] * std::cos(2.0 * thetas[k]);
                s += lam[k] * std::sin(2.0 * thetas[k]);
            }
            std::vector<double> next(n);
            for (std::size_t k = 0; k < n; ++k)
                next[k] = lam[k] + step * 2.0 *
                                       (c * std::cos(2.0 * thetas[k]) +
                                        s * std::sin(2.0 * thetas[k]));
            next = detail::project_simplex(std::move(next));
            double delta = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                delta = std::max(delta, std::abs(next[k] - lam[k]));
            lam = std::move(next);
            const double y = value(lam);
            if (y > local_best) {
                local_best = y;
                local_arg = lam;
            }
            if (delta < 1e-12) {
                result.converged = true;
                break;
            }
        }
        if (local_best > best) {
            best = local_best;
            result.best_weights = std::move(local_arg);
        }
    }
    result.best_value = best;
    return result;
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace detail

inline std::string records_to_csv(const std::vector<ScatterRecord>& records) {
    std::string out = "trial,model,p1,q1,margin,seed\n";
    for (const auto& r : records) {
        out += std::to_string(r.trial_index) + "," + r.model + "," +
               detail::format_double(r.p1) + "," +
               detail::format_double(r.q1) + "," +
               detail::format_double(r.margin()) + "," +
               std::to_string(r.seed.seed) + ":" +
               std::to_string(r.seed.stream_id) + "\n";
    }
    return out;
}

inline json records_to_json(const std::vector<ScatterRecord>& records) {
    json arr = json::array();
    for (const auto& r : records)
        arr.push_back(json{{"trial", r.trial_index},
                           {"model", r.model},
                           {"p1", r.p1},
                           {"q1", r.q1},
                           {"margin", r.margin()},
                           {"seed",
                            json{{"seed", r.seed.seed},
                                 {"stream_id", r.seed.stream_id}}}});
    return arr;
}

inline std::vector<ScatterRecord> records_from_json(const json& arr) {
    if (!arr.is_array())
        throw InvalidInput("records JSON: expected an array");
    std::vector<ScatterRecord> records;
    records.reserve(arr.size());
    for (const auto& j : arr) {
        ScatterRecord r;
        r.trial_index = j.at("trial").get<int>();
        r.model = j.at("model").get<std::string>();
        r.p1 = j.at("p1").get<double>();
        r.q1 = j.at("q1").get<double>();
        r.seed = {j.at("seed").at("seed").get<std::uint64_t>(),
                  j.at("seed").at("stream_id").get<std::uint64_t>()};
        records.push_back(std::move(r));
    }
    return records;
}

inline json sweep_report_to_json(const SweepReport& report) {
    json per_dim = json::object();
    for (const auto& [dim, summary] : report.per_dim)
        per_dim[std::to_string(dim)] =
            json{{"trials", summary.trials},
                 {"violations", summary.violations},
                 {"worst_margin", summary.worst_margin}};
    return json{{"trials", report.trials},
                {"violations", report.violations},
                {"worst_margin", report.worst_margin},
                {"per_dim", std::move(per_dim)},
                {"cooling_witnesses", report.cooling_witnesses},
                {"temperature_violations", report.temperature_violations}};
}

enum class ReportFormat { csv, json };

inline void emit_report(const std::vector<ScatterRecord>& records,
                        const std::string& path, ReportFormat format) {
    try {
        if (format == ReportFormat::csv)
            write_text_file(path, records_to_csv(records));
        else
            write_text_file(path, records_to_json(records).dump(2) + "\n");
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("emit_report: ") + e.what());
    }
}

inline void emit_report(const SweepReport& report, const std::string& path) {
    try {
        write_text_file(path, sweep_report_to_json(report).dump(2) + "\n");
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("emit_report: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Config (de)serialization
// ---------------------------------------------------------------------------

inline json config_to_json(const ExperimentConfig& cfg) {
    json model{{"model", cfg.model.model},
               {"noisy", cfg.model.noisy == NoisyParameter::theta ? "theta"
                                                                  : "alpha"}};
    if (cfg.model.fixed_angle) model["fixed_angle"] = *cfg.model.fixed_angle;
    if (cfg.model.model == "mr")
        model["params"] = json{{"omega_m", cfg.model.mr.omega_m},
                               {"delta", cfg.model.mr.delta},
                               {"g", cfg.model.mr.g},
                               {"n_max", cfg.model.mr.n_max}};
    return json{{"seed",
                 json{{"seed", cfg.seed.seed}, {"stream_id", cfg.seed.stream_id}}},
                {"points", cfg.points},
                {"realizations", cfg.realizations},
                {"dims", cfg.dims},
                {"model", std::move(model)},
                {"tolerance", cfg.tolerance},
                {"output_path", cfg.output_path},
                {"workers", cfg.workers}};
}

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    if (j.contains("seed")) {
        cfg.seed.seed = j.at("seed").value("seed", std::uint64_t{0});
        cfg.seed.stream_id = j.at("seed").value("stream_id", std::uint64_t{0});
    }
    cfg.points = j.value("points", cfg.points);
    cfg.realizations = j.value("realizations", cfg.realizations);
    cfg.dims = j.value("dims", cfg.dims);
    cfg.tolerance = j.value("tolerance", cfg.tolerance);
    cfg.output_path = j.value("output_path", cfg.output_path);
    cfg.workers = j.value("workers", cfg.workers);
    if (j.contains("model")) {
        const auto& m = j.at("model");
        cfg.model.model = m.value("model", cfg.model.model);
        const std::string noisy = m.value("noisy", "theta");
        if (noisy != "theta" && noisy != "alpha")
            throw InvalidInput("config: noisy must be theta or alpha");
        cfg.model.noisy = noisy == "theta" ? NoisyParameter::theta
                                           : NoisyParameter::alpha;
        if (m.contains("fixed_angle"))
            cfg.model.fixed_angle = m.at("fixed_angle").get<double>();
        if (m.contains("params")) {
            const auto& p = m.at("params");
            cfg.model.mr.omega_m = p.value("omega_m", cfg.model.mr.omega_m);
            cfg.model.mr.delta = p.value("delta", cfg.model.mr.delta);
            cfg.model.mr.g = p.value("g", cfg.model.mr.g);
            cfg.model.mr.n_max = p.value("n_max", cfg.model.mr.n_max);
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace coollab

#endif
