#include "qks/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qks/rng.hpp"

namespace qks {

using Eigen::MatrixXd;
using Eigen::VectorXd;

ReliabilityReport empirical_reliability(const MatrixXd& labels_by_trial,
                                        const VectorXd& ref_labels, double delta) {
    const Eigen::Index n_trials = labels_by_trial.rows();
    const Eigen::Index M = labels_by_trial.cols();
    if (ref_labels.size() != M)
        throw std::invalid_argument("empirical_reliability: shape mismatch");
    if (n_trials < 1)
        throw std::invalid_argument("empirical_reliability: need at least one trial");
    if (delta < 0.0 || delta >= 1.0)
        throw std::invalid_argument("empirical_reliability: delta must lie in [0, 1)");

    ReliabilityReport r;
    r.delta_threshold = delta;
    r.per_point_reliability.resize(M);
    Eigen::Index reliable = 0;
    for (Eigen::Index j = 0; j < M; ++j) {
        Eigen::Index agree = 0;
        for (Eigen::Index k = 0; k < n_trials; ++k)
            if (labels_by_trial(k, j) == ref_labels(j)) ++agree;
        const double frac = static_cast<double>(agree) / static_cast<double>(n_trials);
        r.per_point_reliability(j) = frac;
        if (frac >= 1.0 - delta) ++reliable;
    }
    r.dataset_reliability = static_cast<double>(reliable) / static_cast<double>(M);
    return r;
}

double relative_accuracy(double acc_h, double acc_f) {
    if (!(acc_f > 0.0))
        throw std::invalid_argument("relative_accuracy: reference accuracy must be > 0");
    return acc_h / acc_f;
}

namespace {

VectorXd sign_labels(const VectorXd& decision) {
    VectorXd out(decision.size());
    for (Eigen::Index i = 0; i < decision.size(); ++i)
        out(i) = decision(i) >= 0.0 ? 1.0 : -1.0;
    return out;
}

void fill_accuracy_stats(ReliabilityReport& r, const MatrixXd& labels_by_trial,
                         const VectorXd& y_true, double ref_accuracy) {
    const Eigen::Index n_trials = labels_by_trial.rows();
    double sum = 0.0, lo = 1.0, hi = 0.0;
    for (Eigen::Index k = 0; k < n_trials; ++k) {
        const double a = accuracy(labels_by_trial.row(k).transpose(), y_true);
        sum += a;
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    r.accuracy_mean = sum / static_cast<double>(n_trials);
    r.accuracy_min = lo;
    r.accuracy_max = hi;
    r.relative_accuracy = relative_accuracy(r.accuracy_mean, ref_accuracy);
}

} // namespace

std::int64_t n_practical(const MatrixXd& K_star_eval, const VectorXd& y_eval,
                         const SvmModel& model, double gamma, double delta_target,
                         const TrialPlan& plan, const NPracticalOptions& opts) {
    if (!(delta_target > 0.0) || delta_target >= 1.0)
        throw std::invalid_argument("n_practical: delta_target must lie in (0, 1)");
    if (plan.n_trials < 1)
        throw std::invalid_argument("n_practical: need at least one trial");
    if (opts.n_start < 1 || opts.n_max < opts.n_start)
        throw std::invalid_argument("n_practical: bad search range");

    const VectorXd f_star = decision_values(model, K_star_eval);
    const double eps_ref = gamma_margin_error(f_star, y_eval, gamma);

    double last_emp = 0.0;
    auto passes = [&](std::int64_t N) {
        const ShotPlan sp{plan.shot_plan.kind, N};
        Eigen::Index ok = 0;
        for (int k = 0; k < plan.n_trials; ++k) {
            const std::uint64_t seed =
                mix_seed(plan.master_seed, static_cast<std::uint64_t>(N),
                         static_cast<std::uint64_t>(k));
            const MatrixXd K_hat = draw_kernel_matrix(K_star_eval, sp, seed).entries;
            const VectorXd dec = decision_values(model, K_hat);
            if (gamma_margin_error(dec, y_eval, 0.0) <= eps_ref) ++ok;
        }
        last_emp = static_cast<double>(ok) / static_cast<double>(plan.n_trials);
        return last_emp >= 1.0 - delta_target;
    };

    std::int64_t N = opts.n_start;
    if (passes(N)) return N;
    std::int64_t lo = N; // known failing
    while (true) {
        N *= 2;
        if (N > opts.n_max) {
            std::ostringstream msg;
            msg << "n_practical: search exhausted at N=" << opts.n_max
                << " (last empirical success fraction " << last_emp << ")";
            throw std::runtime_error(msg.str());
        }
        if (passes(N)) break;
        lo = N;
    }
    std::int64_t hi = N; // known passing
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (passes(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

MatrixXd mitigate_m_mean(const MatrixXd& K_hat, Eigen::Index d) {
    if (K_hat.rows() != K_hat.cols())
        throw std::invalid_argument("mitigate_m_mean: matrix must be square");
    if (d < 2) throw std::invalid_argument("mitigate_m_mean: d must be >= 2");
    if (K_hat.minCoeff() < -1.0 - 1e-12 || K_hat.maxCoeff() > 1.0 + 1e-12)
        throw std::invalid_argument("mitigate_m_mean: entries must lie in [-1, 1]");

    const double diag_mean = K_hat.diagonal().mean();
    double lambda2 = (1.0 - diag_mean) / (1.0 - 1.0 / static_cast<double>(d));
    if (lambda2 >= 1.0)
        throw std::runtime_error("mitigate_m_mean: estimated channel weight >= 1");
    lambda2 = std::max(lambda2, 0.0);

    MatrixXd out =
        (K_hat.array() - lambda2 / static_cast<double>(d)) / (1.0 - lambda2);
    out = 0.5 * (out + out.transpose()).eval();
    out.diagonal().setOnes();
    return out;
}

namespace {

constexpr std::uint64_t kTrainDrawTag = 0xE57;

struct VariantModels {
    std::vector<std::string> names;
    // retrain(N) -> model per variant (the robust programs depend on N)
    std::vector<SvmModel> train_all(const SweepConfig& cfg, const MatrixXd& K_train,
                                    const MatrixXd& K_train_est, std::int64_t N) const;
};

bool is_est(const std::string& v) {
    return v == "shofar-est" || v == "l1-shofar-est";
}

std::vector<SvmModel> VariantModels::train_all(const SweepConfig& cfg,
                                               const MatrixXd& K_train,
                                               const MatrixXd& K_train_est,
                                               std::int64_t N) const {
    std::vector<SvmModel> models;
    models.reserve(names.size());
    for (const auto& v : names) {
        if (v == "nominal") {
            SvmModel m = solve_primal(spectral_shift(K_train), cfg.train.y, cfg.C);
            m.variant = "nominal";
            models.push_back(std::move(m));
            continue;
        }
        RobustParams p;
        p.shots_classify = N;
        p.delta1 = cfg.delta1;
        p.delta2 = cfg.delta2;
        p.kind = cfg.circuit;
        p.norm = (v == "l1-shofar" || v == "l1-shofar-est") ? PenaltyNorm::L1
                                                            : PenaltyNorm::L2;
        if (is_est(v)) {
            EstParams e = make_est_params(cfg.T, cfg.delta1p, cfg.delta2p,
                                          cfg.train.size(), cfg.circuit);
            e.ridge_conf = std::max(e.ridge_conf, ensure_convexity(K_train_est, p));
            models.push_back(train_robust_est(K_train_est, cfg.train.y, cfg.C, p, e).model);
        } else {
            models.push_back(train_robust(K_train, cfg.train.y, cfg.C, p).model);
        }
    }
    return models;
}

void check_sweep_config(const SweepConfig& cfg) {
    cfg.train.validate();
    cfg.eval.validate();
    if (cfg.train.dim() != cfg.eval.dim())
        throw std::invalid_argument("sweep: train/eval dimension mismatch");
    if (cfg.N_grid.empty()) throw std::invalid_argument("sweep: empty N grid");
    if (!std::is_sorted(cfg.N_grid.begin(), cfg.N_grid.end()))
        throw std::invalid_argument("sweep: N grid must be sorted");
    if (cfg.n_trials < 1) throw std::invalid_argument("sweep: n_trials must be >= 1");
    if (cfg.variants.empty()) throw std::invalid_argument("sweep: no variants");
    static const std::set<std::string> known = {"nominal", "shofar", "l1-shofar",
                                                "shofar-est", "l1-shofar-est"};
    for (const auto& v : cfg.variants)
        if (known.count(v) == 0)
            throw std::invalid_argument("sweep: unknown variant '" + v + "'");
}

// Shared evaluation loop: given per-variant models and their reference
// decision matrices (exact-kernel labels), draw the stochastic kernel blocks
// once per (N, trial) and score every variant on the identical draw.
std::vector<ReliabilityReport> evaluate_grid(
    const SweepConfig& cfg, const MatrixXd& K_eval_device,
    const std::vector<std::string>& names,
    const std::function<std::vector<SvmModel>(std::int64_t)>& models_at,
    double ref_accuracy_override = -1.0) {
    const Eigen::Index M = cfg.eval.size();
    std::vector<std::vector<ReliabilityReport>> per_variant(names.size());

    for (const std::int64_t N : cfg.N_grid) {
        const std::vector<SvmModel> models = models_at(N);
        std::vector<VectorXd> ref_labels(names.size());
        std::vector<double> ref_acc(names.size());
        for (size_t v = 0; v < names.size(); ++v) {
            ref_labels[v] = sign_labels(decision_values(models[v], K_eval_device));
            ref_acc[v] = accuracy(ref_labels[v], cfg.eval.y);
        }

        std::vector<MatrixXd> labels(names.size(), MatrixXd(cfg.n_trials, M));
        const ShotPlan sp{cfg.circuit, N};
        for (int k = 0; k < cfg.n_trials; ++k) {
            const std::uint64_t seed =
                mix_seed(cfg.master_seed, static_cast<std::uint64_t>(N),
                         static_cast<std::uint64_t>(k));
            const MatrixXd K_hat = draw_kernel_matrix(K_eval_device, sp, seed).entries;
            for (size_t v = 0; v < names.size(); ++v)
                labels[v].row(k) =
                    sign_labels(decision_values(models[v], K_hat)).transpose();
        }

        for (size_t v = 0; v < names.size(); ++v) {
            ReliabilityReport r = empirical_reliability(labels[v], ref_labels[v],
                                                        cfg.delta_threshold);
            const double ra_ref =
                ref_accuracy_override > 0.0 ? ref_accuracy_override : ref_acc[v];
            fill_accuracy_stats(r, labels[v], cfg.eval.y, ra_ref);
            r.N = N;
            r.variant = names[v];
            r.m_sv = models[v].n_support();
            r.total_shots = r.m_sv * N;
            per_variant[v].push_back(std::move(r));
        }
    }

    std::vector<ReliabilityReport> out;
    for (auto& rows : per_variant)
        for (auto& r : rows) out.push_back(std::move(r));
    return out;
}

} // namespace

std::vector<ReliabilityReport> run_reliability_sweep(const SweepConfig& cfg) {
    check_sweep_config(cfg);

    MatrixXd K_train = kernel_matrix_exact(cfg.embedding, cfg.train.X);
    MatrixXd K_eval = kernel_matrix_exact(cfg.embedding, cfg.train.X, cfg.eval.X);
    if (cfg.depol_lambda > 0.0) {
        const DepolarizingChannel ch{cfg.depol_lambda,
                                     static_cast<int>(cfg.embedding.dim())};
        K_train = ch.apply(K_train);
        K_eval = ch.apply(K_eval);
    }

    // Training-matrix estimate for the -est variants, shared across them and
    // across N so their programs see one fixed draw.
    MatrixXd K_train_est;
    bool any_est = false;
    for (const auto& v : cfg.variants) any_est |= is_est(v);
    if (any_est) {
        const ShotPlan sp{cfg.circuit, cfg.T};
        const std::uint64_t seed = mix_seed(cfg.master_seed, kTrainDrawTag,
                                            static_cast<std::uint64_t>(cfg.T));
        auto est = draw_kernel_matrix_sym(K_train, sp, seed, cfg.mitigate);
        K_train_est = cfg.mitigate
                          ? mitigate_m_mean(est.entries, cfg.embedding.dim())
                          : est.entries;
    }

    VariantModels vm{cfg.variants};
    SvmModel nominal_cache;
    bool have_nominal = false;
    auto models_at = [&](std::int64_t N) {
        std::vector<SvmModel> models =
            vm.train_all(cfg, K_train, K_train_est, N);
        // the nominal program does not depend on N; reuse the first solve
        for (size_t v = 0; v < cfg.variants.size(); ++v) {
            if (cfg.variants[v] != "nominal") continue;
            if (!have_nominal) {
                nominal_cache = models[v];
                have_nominal = true;
            } else {
                models[v] = nominal_cache;
            }
        }
        return models;
    };

    return evaluate_grid(cfg, K_eval, cfg.variants, models_at);
}

std::vector<ReliabilityReport> run_noise_study(const SweepConfig& cfg) {
    SweepConfig base = cfg;
    base.variants = {"nominal"}; // placate config validation; variants fixed below
    check_sweep_config(base);
    if (!(cfg.depol_lambda >= 0.0 && cfg.depol_lambda < 1.0))
        throw std::invalid_argument("noise study: depol_lambda must lie in [0, 1)");

    const Eigen::Index d = cfg.embedding.dim();
    const MatrixXd K_train = kernel_matrix_exact(cfg.embedding, cfg.train.X);
    const MatrixXd K_eval = kernel_matrix_exact(cfg.embedding, cfg.train.X, cfg.eval.X);
    const DepolarizingChannel ch{cfg.depol_lambda, static_cast<int>(d)};
    const MatrixXd K_train_dev = ch.apply(K_train);
    const MatrixXd K_eval_dev = ch.apply(K_eval);

    // One T-shot estimate of the noisy training matrix, diagonal sampled so
    // the mitigation path has the channel signal it needs.
    const ShotPlan sp_train{cfg.circuit, cfg.T};
    const std::uint64_t train_seed = mix_seed(cfg.master_seed, kTrainDrawTag,
                                              static_cast<std::uint64_t>(cfg.T));
    const MatrixXd K_hat =
        draw_kernel_matrix_sym(K_train_dev, sp_train, train_seed, true).entries;
    const MatrixXd K_hat_miti = mitigate_m_mean(K_hat, d);

    // Reference classifier on the clean exact kernel, for relative accuracy.
    const SvmModel ekc = solve_primal(K_train, cfg.train.y, cfg.C);
    const double ekc_acc =
        accuracy(sign_labels(decision_values(ekc, K_eval)), cfg.eval.y);

    const std::vector<std::string> names = {"u-nominal", "m-nominal", "u-robust-est",
                                            "m-robust-est"};
    const SvmModel u_nominal = [&] {
        SvmModel m = solve_primal(spectral_shift(K_hat), cfg.train.y, cfg.C);
        m.variant = "u-nominal";
        return m;
    }();
    const SvmModel m_nominal = [&] {
        SvmModel m = solve_primal(spectral_shift(K_hat_miti), cfg.train.y, cfg.C);
        m.variant = "m-nominal";
        return m;
    }();

    auto models_at = [&](std::int64_t N) {
        RobustParams p;
        p.shots_classify = N;
        p.delta1 = cfg.delta1;
        p.delta2 = cfg.delta2;
        p.kind = cfg.circuit;
        EstParams e = make_est_params(cfg.T, cfg.delta1p, cfg.delta2p,
                                      cfg.train.size(), cfg.circuit);
        EstParams eu = e, em = e;
        eu.ridge_conf = std::max(e.ridge_conf, ensure_convexity(K_hat, p));
        em.ridge_conf = std::max(e.ridge_conf, ensure_convexity(K_hat_miti, p));
        std::vector<SvmModel> models = {u_nominal, m_nominal};
        SvmModel ur = train_robust_est(K_hat, cfg.train.y, cfg.C, p, eu).model;
        ur.variant = "u-robust-est";
        SvmModel mr = train_robust_est(K_hat_miti, cfg.train.y, cfg.C, p, em).model;
        mr.variant = "m-robust-est";
        models.push_back(std::move(ur));
        models.push_back(std::move(mr));
        return models;
    };

    SweepConfig eval_cfg = cfg;
    eval_cfg.variants = names;
    return evaluate_grid(eval_cfg, K_eval_dev, names, models_at, ekc_acc);
}

std::vector<TrainingShotsRow> run_training_shots_study(
    const SweepConfig& cfg, const std::vector<std::int64_t>& T_grid) {
    SweepConfig base = cfg;
    base.variants = {"nominal"};
    check_sweep_config(base);
    if (T_grid.empty())
        throw std::invalid_argument("training-shots study: empty T grid");

    const MatrixXd K_train = kernel_matrix_exact(cfg.embedding, cfg.train.X);
    const MatrixXd K_eval = kernel_matrix_exact(cfg.embedding, cfg.train.X, cfg.eval.X);

    std::vector<TrainingShotsRow> rows;
    for (const std::int64_t T : T_grid) {
        if (T < 1)
            throw std::invalid_argument("training-shots study: T must be >= 1");
        const ShotPlan sp{cfg.circuit, T};
        const std::uint64_t seed = mix_seed(cfg.master_seed, kTrainDrawTag,
                                            static_cast<std::uint64_t>(T));
        const MatrixXd K_hat =
            draw_kernel_matrix_sym(K_train, sp, seed, false).entries;
        SvmModel model = solve_primal(spectral_shift(K_hat), cfg.train.y, cfg.C);
        model.variant = "nominal";

        TrainingShotsRow row;
        row.T = T;
        row.ekc_accuracy =
            accuracy(sign_labels(decision_values(model, K_eval)), cfg.eval.y);

        SweepConfig eval_cfg = cfg;
        const std::vector<std::string> names = {"nominal"};
        eval_cfg.variants = names;
        auto models_at = [&](std::int64_t) { return std::vector<SvmModel>{model}; };
        row.per_N = evaluate_grid(eval_cfg, K_eval, names, models_at);
        for (auto& r : row.per_N) r.variant = "T" + std::to_string(T);
        rows.push_back(std::move(row));
    }
    return rows;
}

void save_reports_csv(const std::vector<ReliabilityReport>& reports,
                      const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_reports_csv: cannot open " + path);
    f << "variant,N,reliability,acc_mean,acc_min,acc_max,RA,m_sv,total_shots\n";
    char buf[256];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf),
                      "%s,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%lld,%lld\n",
                      r.variant.c_str(), static_cast<long long>(r.N),
                      r.dataset_reliability, r.accuracy_mean, r.accuracy_min,
                      r.accuracy_max, r.relative_accuracy,
                      static_cast<long long>(r.m_sv),
                      static_cast<long long>(r.total_shots));
        f << buf;
    }
}

} // namespace qks
