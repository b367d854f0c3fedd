// Command-line front end: dataset/kernel/model persistence and the
// experiment drivers, configured by a key=value file.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qks/bounds.hpp"
#include "qks/config.hpp"
#include "qks/harness.hpp"
#include "qks/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Cli {
    std::string config_path;
    std::string out_dir;
    std::string model_path;
    std::uint64_t seed_override = 0;
    bool has_seed = false;
};

qks::RunConfig load_config(const Cli& cli) {
    qks::RunConfig cfg = cli.config_path.empty()
                             ? qks::RunConfig{}
                             : qks::parse_config(cli.config_path);
    if (cli.has_seed) cfg.master_seed = cli.seed_override;
    if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
    return cfg;
}

json config_echo(const qks::RunConfig& cfg) {
    json j;
    j["dataset"] = cfg.dataset;
    j["train_size"] = cfg.train_size;
    j["eval_size"] = cfg.eval_size;
    j["noise_sd"] = cfg.noise_sd;
    j["factor"] = cfg.factor;
    j["grid"] = cfg.grid;
    j["gap"] = cfg.gap;
    j["embedding"] = cfg.embedding;
    j["n_qubits"] = cfg.n_qubits;
    j["variants"] = cfg.variants;
    j["C"] = cfg.C;
    j["N_grid"] = cfg.N_grid;
    j["T_grid"] = cfg.T_grid;
    j["T"] = cfg.T;
    j["delta1"] = cfg.delta1;
    j["delta2"] = cfg.delta2;
    j["delta1p"] = cfg.delta1p;
    j["delta2p"] = cfg.delta2p;
    j["circuit"] = cfg.circuit;
    j["n_trials"] = cfg.n_trials;
    j["delta_threshold"] = cfg.delta_threshold;
    j["depol_lambda"] = cfg.depol_lambda;
    j["mitigate"] = cfg.mitigate;
    j["gamma"] = cfg.gamma;
    j["delta_target"] = cfg.delta_target;
    j["master_seed"] = cfg.master_seed;
    j["out_dir"] = cfg.out_dir;
    return j;
}

void write_manifest(const qks::RunConfig& cfg, const std::string& subcommand,
                    double wall_seconds) {
    json j;
    j["subcommand"] = subcommand;
    j["version"] = kVersion;
    j["master_seed"] = cfg.master_seed;
    j["wall_seconds"] = wall_seconds;
    j["config"] = config_echo(cfg);
    const fs::path p = fs::path(cfg.out_dir) / "manifest.json";
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << j.dump(2) << '\n';
}

// Nominal model plus its zero-error margin on the training set.
struct TrainedReference {
    qks::SvmModel model;
    Eigen::MatrixXd K_train;
    double gamma_star = 0.0;
};

TrainedReference train_reference(const qks::RunConfig& cfg,
                                 const qks::LabeledDataset& train) {
    TrainedReference tr;
    tr.K_train = qks::kernel_matrix_exact(cfg.embedding_spec(), train.X);
    tr.model = qks::solve_primal(tr.K_train, train.y, cfg.C);
    tr.model.embedding = cfg.embedding_spec().id();
    tr.model.X_train = train.X;
    const Eigen::VectorXd dec = qks::decision_values(tr.model, tr.K_train);
    tr.gamma_star = cfg.gamma > 0.0 ? cfg.gamma : qks::gamma_star(dec, train.y);
    return tr;
}

int cmd_dataset(const qks::RunConfig& cfg) {
    const qks::LabeledDataset train = qks::make_train_dataset(cfg);
    const fs::path out(cfg.out_dir);
    qks::save_csv(train, (out / (train.name + "_train.csv")).string());
    std::printf("wrote %s (%lld points)\n",
                (out / (train.name + "_train.csv")).c_str(),
                static_cast<long long>(train.size()));
    if (cfg.eval_size > 0) {
        const qks::LabeledDataset eval = qks::make_eval_dataset(cfg);
        qks::save_csv(eval, (out / (eval.name + "_eval.csv")).string());
        std::printf("wrote %s (%lld points)\n",
                    (out / (eval.name + "_eval.csv")).c_str(),
                    static_cast<long long>(eval.size()));
    }
    return 0;
}

int cmd_kernel(const qks::RunConfig& cfg) {
    const qks::LabeledDataset train = qks::make_train_dataset(cfg);
    const Eigen::MatrixXd K =
        qks::kernel_matrix_exact(cfg.embedding_spec(), train.X);
    const fs::path path = fs::path(cfg.out_dir) / "kernel_exact.csv";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "row,col,value\n";
    char buf[64];
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        for (Eigen::Index j = 0; j < K.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g\n",
                          static_cast<long long>(i), static_cast<long long>(j),
                          K(i, j));
            f << buf;
        }
    std::printf("wrote %s (%lldx%lld, min eig %.3e)\n", path.c_str(),
                static_cast<long long>(K.rows()), static_cast<long long>(K.cols()),
                qks::min_eig(K));
    return 0;
}

int cmd_train(const qks::RunConfig& cfg) {
    const qks::LabeledDataset train = qks::make_train_dataset(cfg);
    const Eigen::MatrixXd K =
        qks::kernel_matrix_exact(cfg.embedding_spec(), train.X);
    const std::string variant = cfg.variants.empty() ? "nominal" : cfg.variants.front();

    qks::SvmModel model;
    if (variant == "nominal") {
        model = qks::solve_primal(K, train.y, cfg.C);
    } else {
        qks::RobustParams p;
        p.shots_classify = cfg.N_grid.front();
        p.delta1 = cfg.delta1;
        p.delta2 = cfg.delta2;
        p.kind = cfg.circuit_kind();
        p.norm = (variant == "l1-shofar" || variant == "l1-shofar-est")
                     ? qks::PenaltyNorm::L1
                     : qks::PenaltyNorm::L2;
        if (variant == "shofar-est" || variant == "l1-shofar-est") {
            const qks::ShotPlan sp{cfg.circuit_kind(), cfg.T};
            const auto est = qks::draw_kernel_matrix_sym(
                K, sp, qks::mix_seed(cfg.master_seed, 0xE57ULL,
                                     static_cast<std::uint64_t>(cfg.T)));
            qks::EstParams e = qks::make_est_params(cfg.T, cfg.delta1p, cfg.delta2p,
                                                    train.size(), cfg.circuit_kind());
            e.ridge_conf = std::max(e.ridge_conf,
                                    qks::ensure_convexity(est.entries, p));
            model = qks::train_robust_est(est.entries, train.y, cfg.C, p, e).model;
        } else if (variant == "shofar" || variant == "l1-shofar") {
            model = qks::train_robust(K, train.y, cfg.C, p).model;
        } else {
            std::fprintf(stderr, "unknown variant '%s'\n", variant.c_str());
            return 1;
        }
    }
    model.embedding = cfg.embedding_spec().id();
    model.X_train = train.X;

    const fs::path path = fs::path(cfg.out_dir) / "model.txt";
    qks::save_model(model, path.string());
    std::printf("wrote %s: variant=%s m_sv=%lld |beta|_1=%.6g |beta|_2=%.6g b=%.6g\n",
                path.c_str(), model.variant.c_str(),
                static_cast<long long>(model.n_support()), model.beta_norm1(),
                model.beta_norm2(), model.bias);
    return 0;
}

int cmd_bounds(const qks::RunConfig& cfg, const std::string& model_path) {
    const qks::LabeledDataset train = qks::make_train_dataset(cfg);
    qks::SvmModel model;
    double gamma = cfg.gamma;
    if (!model_path.empty()) {
        model = qks::load_model(model_path);
        if (gamma <= 0.0) {
            const Eigen::MatrixXd K =
                qks::kernel_matrix_exact(cfg.embedding_spec(), model.X_train);
            // gamma* needs labels; use the training set if shapes agree
            if (model.X_train.rows() == train.size()) {
                const Eigen::MatrixXd Ke = qks::kernel_matrix_exact(
                    cfg.embedding_spec(), model.X_train, train.X);
                gamma = qks::gamma_star(qks::decision_values(model, Ke), train.y);
            } else {
                gamma = 1.0;
            }
        }
    } else {
        const TrainedReference tr = train_reference(cfg, train);
        model = tr.model;
        gamma = tr.gamma_star;
    }

    const auto circuit = cfg.circuit_kind();
    const auto M = cfg.eval_size > 0 ? cfg.eval_size : train.size();
    const auto m_sv = model.n_support();
    const double delta = cfg.delta_target;

    std::printf("bounds (variant=%s, gamma=%.4f, M=%lld, m_sv=%lld, delta=%g, %s)\n",
                model.variant.c_str(), gamma, static_cast<long long>(M),
                static_cast<long long>(m_sv), delta, cfg.circuit.c_str());
    std::printf("  n_sg            %lld\n",
                static_cast<long long>(
                    qks::n_sg(model.beta_norm2(), gamma, circuit, M, delta)));
    std::printf("  n_sg_worstcase  %lld\n",
                static_cast<long long>(qks::n_sg_worstcase(
                    std::max<std::int64_t>(m_sv, 1), cfg.C, gamma, circuit, M, delta)));
    std::printf("  n_margin_risk   %lld\n",
                static_cast<long long>(qks::n_margin_risk(
                    model.beta_norm2(), circuit, train.size(), delta)));
    std::printf("  n_precise       %lld\n",
                static_cast<long long>(qks::n_precise(
                    std::max<std::int64_t>(m_sv, 1), M, 0.1, circuit, delta)));
    std::printf("  shots_for_conf  %lld  (half-width 0.1)\n",
                static_cast<long long>(qks::shots_for_conf(
                    0.1, delta / static_cast<double>(train.size()), circuit)));
    return 0;
}

int cmd_npractical(const qks::RunConfig& cfg) {
    const qks::LabeledDataset train = qks::make_train_dataset(cfg);
    const TrainedReference tr = train_reference(cfg, train);

    qks::TrialPlan plan;
    plan.n_trials = cfg.n_trials;
    plan.master_seed = cfg.master_seed;
    plan.shot_plan = {cfg.circuit_kind(), 1};

    const std::int64_t np = qks::n_practical(tr.K_train, train.y, tr.model,
                                             tr.gamma_star, cfg.delta_target, plan);
    const std::int64_t nsg = qks::n_sg(tr.model.beta_norm2(), tr.gamma_star,
                                       cfg.circuit_kind(), train.size(),
                                       cfg.delta_target);
    std::printf("gamma_star=%.4f  N_practical=%lld  n_sg=%lld  ratio=%.2f\n",
                tr.gamma_star, static_cast<long long>(np),
                static_cast<long long>(nsg),
                static_cast<double>(nsg) / static_cast<double>(np));
    return 0;
}

int cmd_sweep(const qks::RunConfig& cfg) {
    const auto reports = qks::run_reliability_sweep(qks::make_sweep_config(cfg));
    const fs::path path = fs::path(cfg.out_dir) / "sweep.csv";
    qks::save_reports_csv(reports, path.string());
    std::printf("wrote %s (%zu rows)\n", path.c_str(), reports.size());
    return 0;
}

int cmd_noise_study(const qks::RunConfig& cfg) {
    const auto reports = qks::run_noise_study(qks::make_sweep_config(cfg));
    const fs::path path = fs::path(cfg.out_dir) / "noise_study.csv";
    qks::save_reports_csv(reports, path.string());
    std::printf("wrote %s (%zu rows)\n", path.c_str(), reports.size());
    return 0;
}

int cmd_training_shots(const qks::RunConfig& cfg) {
    std::vector<std::int64_t> T_grid = cfg.T_grid;
    if (T_grid.empty()) T_grid = {cfg.T};
    const auto rows =
        qks::run_training_shots_study(qks::make_sweep_config(cfg), T_grid);

    std::vector<qks::ReliabilityReport> all;
    const fs::path acc_path = fs::path(cfg.out_dir) / "training_shots_accuracy.csv";
    std::ofstream acc(acc_path);
    if (!acc) throw std::runtime_error("cannot write " + acc_path.string());
    acc << "T,ekc_accuracy\n";
    for (const auto& row : rows) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%lld,%.17g\n",
                      static_cast<long long>(row.T), row.ekc_accuracy);
        acc << buf;
        for (const auto& r : row.per_N) all.push_back(r);
    }
    const fs::path path = fs::path(cfg.out_dir) / "training_shots.csv";
    qks::save_reports_csv(all, path.string());
    std::printf("wrote %s and %s\n", path.c_str(), acc_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-embedding-kernel SVM experiments"};
    app.require_subcommand(1);

    Cli cli;
    app.add_option("--config", cli.config_path, "configuration file (key = value)");
    app.add_option("--out", cli.out_dir, "output directory override");
    auto* seed_opt = app.add_option("--seed", cli.seed_override, "master seed override");

    app.add_subcommand("dataset", "generate and save the configured dataset");
    app.add_subcommand("kernel", "exact kernel matrix of the training set");
    app.add_subcommand("train", "train the first configured variant");
    auto* bounds_cmd = app.add_subcommand("bounds", "shot-budget bound table");
    bounds_cmd->add_option("--model", cli.model_path, "saved model file");
    app.add_subcommand("npractical", "empirical shot-budget search");
    app.add_subcommand("sweep", "reliability/accuracy sweep over the N grid");
    app.add_subcommand("noise-study", "depolarizing-noise classifier comparison");
    app.add_subcommand("training-shots-study", "training-kernel shot study");

    CLI11_PARSE(app, argc, argv);
    cli.has_seed = seed_opt->count() > 0;

    try {
        const qks::RunConfig cfg = load_config(cli);
        fs::create_directories(cfg.out_dir);
        const std::string sub = app.get_subcommands().front()->get_name();
        const auto t0 = std::chrono::steady_clock::now();

        int rc = 1;
        if (sub == "dataset") rc = cmd_dataset(cfg);
        else if (sub == "kernel") rc = cmd_kernel(cfg);
        else if (sub == "train") rc = cmd_train(cfg);
        else if (sub == "bounds") rc = cmd_bounds(cfg, cli.model_path);
        else if (sub == "npractical") rc = cmd_npractical(cfg);
        else if (sub == "sweep") rc = cmd_sweep(cfg);
        else if (sub == "noise-study") rc = cmd_noise_study(cfg);
        else if (sub == "training-shots-study") rc = cmd_training_shots(cfg);

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (rc == 0) write_manifest(cfg, sub, wall);
        return rc;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
