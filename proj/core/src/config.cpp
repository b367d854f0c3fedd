#include "qks/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qks/rng.hpp"

namespace qks {

EmbeddingSpec RunConfig::embedding_spec() const {
    EmbeddingSpec spec;
    spec.kind = embedding_kind_from_string(embedding);
    spec.n_qubits = n_qubits;
    return spec;
}

CircuitKind RunConfig::circuit_kind() const {
    return circuit_kind_from_string(circuit);
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("parse_config: cannot open " + path);

    RunConfig cfg;
    std::vector<std::string> errors;
    std::map<std::string, std::string> kv;

    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (kv.count(key))
            errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = val;
    }

    auto take = [&](const std::string& key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto num = [&](const std::string& key, auto& field) {
        if (const std::string* v = take(key)) {
            try {
                field = static_cast<std::decay_t<decltype(field)>>(std::stod(*v));
            } catch (const std::exception&) {
                errors.push_back("key '" + key + "': bad number '" + *v + "'");
            }
        }
    };

    if (const auto* v = take("dataset")) cfg.dataset = *v;
    num("train_size", cfg.train_size);
    num("eval_size", cfg.eval_size);
    num("noise_sd", cfg.noise_sd);
    num("factor", cfg.factor);
    num("grid", cfg.grid);
    num("gap", cfg.gap);
    if (const auto* v = take("embedding")) cfg.embedding = *v;
    num("n_qubits", cfg.n_qubits);
    if (const auto* v = take("variants")) cfg.variants = split_list(*v);
    num("C", cfg.C);
    if (const auto* v = take("N_grid")) {
        cfg.N_grid.clear();
        for (const auto& s : split_list(*v)) {
            try {
                cfg.N_grid.push_back(std::stoll(s));
            } catch (const std::exception&) {
                errors.push_back("key 'N_grid': bad integer '" + s + "'");
            }
        }
    }
    if (const auto* v = take("T_grid")) {
        cfg.T_grid.clear();
        for (const auto& s : split_list(*v)) {
            try {
                cfg.T_grid.push_back(std::stoll(s));
            } catch (const std::exception&) {
                errors.push_back("key 'T_grid': bad integer '" + s + "'");
            }
        }
    }
    num("T", cfg.T);
    num("delta1", cfg.delta1);
    num("delta2", cfg.delta2);
    num("delta1p", cfg.delta1p);
    num("delta2p", cfg.delta2p);
    if (const auto* v = take("circuit")) cfg.circuit = *v;
    num("n_trials", cfg.n_trials);
    num("delta_threshold", cfg.delta_threshold);
    num("depol_lambda", cfg.depol_lambda);
    if (const auto* v = take("mitigate")) {
        if (*v == "true" || *v == "1") cfg.mitigate = true;
        else if (*v == "false" || *v == "0") cfg.mitigate = false;
        else errors.push_back("key 'mitigate': expected true/false");
    }
    num("gamma", cfg.gamma);
    num("delta_target", cfg.delta_target);
    num("master_seed", cfg.master_seed);
    if (const auto* v = take("out_dir")) cfg.out_dir = *v;

    static const std::vector<std::string> known = {
        "dataset",     "train_size",      "eval_size",   "noise_sd",
        "factor",      "grid",            "gap",         "embedding",
        "n_qubits",    "variants",        "C",           "N_grid",
        "T_grid",      "T",               "delta1",      "delta2",
        "delta1p",     "delta2p",         "circuit",     "n_trials",
        "delta_threshold", "depol_lambda", "mitigate",   "gamma",
        "delta_target", "master_seed",    "out_dir"};
    for (const auto& [key, val] : kv)
        if (std::find(known.begin(), known.end(), key) == known.end())
            errors.push_back("unknown key '" + key + "'");

    // semantic validation
    for (const auto* d : {&cfg.delta1, &cfg.delta2, &cfg.delta1p, &cfg.delta2p,
                          &cfg.delta_target})
        if (!(*d > 0.0 && *d < 1.0))
            errors.push_back("deltas must lie in (0, 1)");
    if (cfg.N_grid.empty()) errors.push_back("N_grid must be nonempty");
    if (!std::is_sorted(cfg.N_grid.begin(), cfg.N_grid.end()))
        errors.push_back("N_grid must be sorted ascending");
    if (cfg.n_trials < 1) errors.push_back("n_trials must be >= 1");
    if (cfg.T < 1) errors.push_back("T must be >= 1");
    if (!(cfg.C > 0.0)) errors.push_back("C must be positive");
    if (!(cfg.depol_lambda >= 0.0 && cfg.depol_lambda < 1.0))
        errors.push_back("depol_lambda must lie in [0, 1)");
    try {
        (void)cfg.embedding_spec();
    } catch (const std::exception& e) {
        errors.push_back(e.what());
    }
    try {
        (void)cfg.circuit_kind();
    } catch (const std::exception& e) {
        errors.push_back(e.what());
    }

    if (!errors.empty()) {
        std::string msg = "parse_config: " + path + ":";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw std::runtime_error(msg);
    }
    return cfg;
}

namespace {

LabeledDataset make_dataset(const RunConfig& cfg, Eigen::Index m, std::uint64_t seed) {
    if (cfg.dataset == "circles")
        return gen_circles(m, cfg.noise_sd, cfg.factor, seed);
    if (cfg.dataset == "moons") return gen_moons(m, cfg.noise_sd, seed);
    if (cfg.dataset == "checkerboard") return gen_checkerboard(m, cfg.grid, seed);
    if (cfg.dataset == "havlicek")
        return gen_havlicek(m, cfg.gap, seed, cfg.embedding_spec());
    throw std::invalid_argument("unknown dataset: " + cfg.dataset);
}

} // namespace

namespace {

// The labeling unitary must be shared between train and eval, so a single
// pooled draw is split.
LabeledDataset havlicek_part(const RunConfig& cfg, bool eval_part) {
    LabeledDataset all = gen_havlicek(cfg.train_size + cfg.eval_size, cfg.gap,
                                      cfg.master_seed, cfg.embedding_spec());
    LabeledDataset part;
    part.name = all.name;
    part.seed = all.seed;
    if (eval_part) {
        part.X = all.X.bottomRows(cfg.eval_size);
        part.y = all.y.tail(cfg.eval_size);
    } else {
        part.X = all.X.topRows(cfg.train_size);
        part.y = all.y.head(cfg.train_size);
    }
    return part;
}

} // namespace

LabeledDataset make_train_dataset(const RunConfig& cfg) {
    if (cfg.dataset == "havlicek" && cfg.eval_size > 0)
        return havlicek_part(cfg, false);
    return make_dataset(cfg, cfg.train_size, cfg.master_seed);
}

LabeledDataset make_eval_dataset(const RunConfig& cfg) {
    if (cfg.eval_size <= 0) return make_train_dataset(cfg);
    if (cfg.dataset == "havlicek") return havlicek_part(cfg, true);
    return make_dataset(cfg, cfg.eval_size, mix_seed(cfg.master_seed, 0xEA17));
}

SweepConfig make_sweep_config(const RunConfig& cfg) {
    SweepConfig sc;
    sc.train = make_train_dataset(cfg);
    sc.eval = make_eval_dataset(cfg);
    sc.embedding = cfg.embedding_spec();
    sc.variants = cfg.variants;
    sc.C = cfg.C;
    sc.N_grid = cfg.N_grid;
    sc.T = cfg.T;
    sc.delta1 = cfg.delta1;
    sc.delta2 = cfg.delta2;
    sc.delta1p = cfg.delta1p;
    sc.delta2p = cfg.delta2p;
    sc.circuit = cfg.circuit_kind();
    sc.n_trials = cfg.n_trials;
    sc.master_seed = cfg.master_seed;
    sc.delta_threshold = cfg.delta_threshold;
    sc.depol_lambda = cfg.depol_lambda;
    sc.mitigate = cfg.mitigate;
    return sc;
}

} // namespace qks
