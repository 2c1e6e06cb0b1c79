#include "qgan/serialize.hpp"

#include <ostream>
#include <set>
#include <stdexcept>

namespace qgan::serialize {

namespace {

nlohmann::json init_mode_to_json(const generator::InitMode& init) {
    return std::visit(
        [](const auto& mode) -> nlohmann::json {
            using T = std::decay_t<decltype(mode)>;
            if constexpr (std::is_same_v<T, generator::OurMethodInit>) {
                return {{"mode", "our_method"}, {"angles", mode.angles}};
            } else if constexpr (std::is_same_v<T, generator::UniformHInit>) {
                return {{"mode", "uniform_h"}};
            } else if constexpr (std::is_same_v<T, generator::UniformRyInit>) {
                return {{"mode", "uniform_ry"}};
            } else if constexpr (std::is_same_v<T, generator::NormalFixedInit>) {
                return {{"mode", "normal_fixed"},
                        {"column0", mode.column0},
                        {"column1", mode.column1}};
            } else {
                return {{"mode", "folded"}};
            }
        },
        init);
}

generator::InitMode init_mode_from_json(const nlohmann::json& doc) {
    const std::string mode = doc.at("mode").get<std::string>();
    if (mode == "our_method") {
        return generator::OurMethodInit{doc.at("angles").get<std::vector<double>>()};
    }
    if (mode == "uniform_h") {
        return generator::UniformHInit{};
    }
    if (mode == "uniform_ry") {
        return generator::UniformRyInit{};
    }
    if (mode == "normal_fixed") {
        return generator::NormalFixedInit{doc.at("column0").get<std::vector<double>>(),
                                          doc.at("column1").get<std::vector<double>>()};
    }
    if (mode == "folded") {
        return generator::FoldedInit{};
    }
    throw std::invalid_argument("unknown init mode tag: " + mode);
}

nlohmann::json target_to_json(const targets::TargetSpec& spec) {
    nlohmann::json doc = std::visit(
        [](const auto& k) -> nlohmann::json {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, targets::LogNormal>) {
                return {{"kind", "lognormal"}, {"mu", k.mu}, {"sigma", k.sigma}};
            } else if constexpr (std::is_same_v<T, targets::Triangular>) {
                return {{"kind", "triangular"},
                        {"lower", k.lower},
                        {"mode", k.mode},
                        {"upper", k.upper}};
            } else if constexpr (std::is_same_v<T, targets::Bimodal>) {
                return {{"kind", "bimodal"}, {"mu1", k.mu1},    {"sigma1", k.sigma1},
                        {"mu2", k.mu2},      {"sigma2", k.sigma2}, {"mix", k.mix}};
            } else {
                return {{"kind", "custom"}, {"probs", k.probs}};
            }
        },
        spec.kind);
    doc["grid_points"] = spec.grid_points;
    return doc;
}

targets::TargetSpec target_from_json(const nlohmann::json& doc) {
    targets::TargetSpec spec;
    spec.grid_points = doc.value("grid_points", 8);
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "lognormal") {
        spec.kind = targets::LogNormal{doc.value("mu", 1.0), doc.value("sigma", 1.0)};
    } else if (kind == "triangular") {
        spec.kind = targets::Triangular{doc.value("lower", 0.0), doc.value("mode", 2.0),
                                        doc.value("upper", 7.0)};
    } else if (kind == "bimodal") {
        spec.kind =
            targets::Bimodal{doc.value("mu1", 0.5), doc.value("sigma1", 1.0),
                             doc.value("mu2", 3.5), doc.value("sigma2", 0.5),
                             doc.value("mix", 0.5)};
    } else if (kind == "custom") {
        spec.kind = targets::CustomPmf{doc.at("probs").get<std::vector<double>>()};
    } else {
        throw std::invalid_argument("unknown target kind: " + kind);
    }
    return spec;
}

harness::InitKind init_kind_from_string(const std::string& name) {
    if (name == "our_method" || name == "our") {
        return harness::InitKind::OurMethod;
    }
    if (name == "uniform") {
        return harness::InitKind::Uniform;
    }
    if (name == "normal") {
        return harness::InitKind::Normal;
    }
    throw std::invalid_argument("unknown init kind: " + name);
}

} // namespace

nlohmann::json discriminator_to_json(const adversary::Discriminator& disc) {
    return {{"params", disc.params},
            {"leaky_slope", disc.leaky_slope},
            {"input_scale", disc.input_scale}};
}

adversary::Discriminator discriminator_from_json(const nlohmann::json& doc) {
    adversary::Discriminator disc;
    disc.params = doc.at("params").get<std::vector<double>>();
    if (disc.params.size() != adversary::Discriminator::kParamCount) {
        throw std::invalid_argument("discriminator checkpoint has wrong parameter count");
    }
    disc.leaky_slope = doc.value("leaky_slope", 0.2);
    disc.input_scale = doc.value("input_scale", 1.0);
    return disc;
}

nlohmann::json circuit_to_json(const generator::GeneratorCircuit& circuit) {
    return {{"n_qubits", circuit.n_qubits},
            {"k", circuit.reps},
            {"init", init_mode_to_json(circuit.init)},
            {"params", circuit.params},
            {"permutation", circuit.permutation.mapping}};
}

generator::GeneratorCircuit circuit_from_json(const nlohmann::json& doc) {
    generator::LabelPermutation perm;
    perm.mapping = doc.at("permutation").get<std::vector<int>>();
    return generator::build_circuit(doc.at("n_qubits").get<int>(), doc.at("k").get<int>(),
                                    init_mode_from_json(doc.at("init")),
                                    doc.at("params").get<std::vector<double>>(),
                                    std::move(perm));
}

nlohmann::json init_spec_to_json(const initfit::InitSpec& spec) {
    return {{"angles", spec.angles}, {"permutation", spec.permutation.mapping}};
}

initfit::InitSpec init_spec_from_json(const nlohmann::json& doc) {
    initfit::InitSpec spec;
    spec.angles = doc.at("angles").get<std::vector<double>>();
    spec.permutation.mapping = doc.at("permutation").get<std::vector<int>>();
    spec.permutation.validate();
    return spec;
}

nlohmann::json config_to_json(const harness::TrainConfig& config) {
    return {{"n_qubits", config.n_qubits},
            {"k", config.k},
            {"init", harness::init_kind_name(config.init_kind)},
            {"target", target_to_json(config.target)},
            {"epochs", config.epochs},
            {"data_count", config.data_count},
            {"batch_size", config.batch_size},
            {"gen_shots", config.gen_shots},
            {"shift_shots", config.shift_shots},
            {"grad_mode", harness::grad_mode_name(config.grad_mode)},
            {"gen_init_weight_range", {config.gen_init_weight_lo, config.gen_init_weight_hi}},
            {"lr", config.lr},
            {"beta1", config.beta1},
            {"beta2", config.beta2},
            {"runs", config.runs},
            {"base_seed", config.base_seed},
            {"tail_mode",
             config.tail_mode == targets::TailMode::Clip ? "clip" : "truncate_renormalize"},
            {"angle_formula",
             config.angle_formula == initfit::AngleFormula::Sqrt ? "sqrt" : "literal"},
            {"input_scale", config.input_scale},
            {"bias_correction", config.bias_correction}};
}

harness::TrainConfig config_from_json(const nlohmann::json& doc) {
    static const std::set<std::string> known = {
        "n_qubits",  "k",          "init",        "target",       "epochs",
        "data_count", "batch_size", "gen_shots",  "shift_shots",  "grad_mode",
        "gen_init_weight_range",    "lr",          "beta1",        "beta2",
        "runs",      "base_seed",  "tail_mode",   "angle_formula", "input_scale",
        "bias_correction",         "output_dir",  "plots",        "workers"};
    for (const auto& [key, value] : doc.items()) {
        if (known.find(key) == known.end()) {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }

    harness::TrainConfig config;
    config.n_qubits = doc.value("n_qubits", config.n_qubits);
    config.k = doc.value("k", config.k);
    if (doc.contains("init")) {
        config.init_kind = init_kind_from_string(doc.at("init").get<std::string>());
    }
    if (doc.contains("target")) {
        config.target = target_from_json(doc.at("target"));
    } else {
        config.target.grid_points = 1 << config.n_qubits;
    }
    config.epochs = doc.value("epochs", config.epochs);
    config.data_count = doc.value("data_count", config.data_count);
    config.batch_size = doc.value("batch_size", config.batch_size);
    config.gen_shots = doc.value("gen_shots", config.gen_shots);
    config.shift_shots = doc.value("shift_shots", config.shift_shots);
    if (doc.contains("grad_mode")) {
        const std::string mode = doc.at("grad_mode").get<std::string>();
        if (mode == "shots") {
            config.grad_mode = harness::GradMode::Shots;
        } else if (mode == "exact") {
            config.grad_mode = harness::GradMode::Exact;
        } else {
            throw std::invalid_argument("unknown grad mode: " + mode);
        }
    }
    if (doc.contains("gen_init_weight_range")) {
        const auto range = doc.at("gen_init_weight_range").get<std::vector<double>>();
        if (range.size() != 2) {
            throw std::invalid_argument("gen_init_weight_range must hold two numbers");
        }
        config.gen_init_weight_lo = range[0];
        config.gen_init_weight_hi = range[1];
    }
    config.lr = doc.value("lr", config.lr);
    config.beta1 = doc.value("beta1", config.beta1);
    config.beta2 = doc.value("beta2", config.beta2);
    config.runs = doc.value("runs", config.runs);
    config.base_seed = doc.value("base_seed", config.base_seed);
    if (doc.contains("tail_mode")) {
        const std::string mode = doc.at("tail_mode").get<std::string>();
        if (mode == "clip") {
            config.tail_mode = targets::TailMode::Clip;
        } else if (mode == "truncate_renormalize") {
            config.tail_mode = targets::TailMode::TruncateRenormalize;
        } else {
            throw std::invalid_argument("unknown tail mode: " + mode);
        }
    }
    if (doc.contains("angle_formula")) {
        const std::string formula = doc.at("angle_formula").get<std::string>();
        if (formula == "sqrt") {
            config.angle_formula = initfit::AngleFormula::Sqrt;
        } else if (formula == "literal") {
            config.angle_formula = initfit::AngleFormula::Literal;
        } else {
            throw std::invalid_argument("unknown angle formula: " + formula);
        }
    }
    config.input_scale = doc.value("input_scale", config.input_scale);
    config.bias_correction = doc.value("bias_correction", config.bias_correction);
    return config;
}

void write_run_csv(std::ostream& out, const harness::RunRecord& record) {
    out << "epoch,loss_g,loss_d,rel_entropy\n";
    out.precision(17);
    for (std::size_t epoch = 0; epoch < record.rel_entropy.size(); ++epoch) {
        out << epoch << ',' << record.loss_g[epoch] << ',' << record.loss_d[epoch] << ','
            << record.rel_entropy[epoch] << '\n';
    }
}

nlohmann::json run_sidecar_json(const harness::TrainConfig& config,
                                const harness::RunRecord& record) {
    return {{"config", config_to_json(config)},
            {"seed", record.seed},
            {"final_pmf", record.final_pmf.probs},
            {"final_params", record.final_params},
            {"final_rel_entropy", record.rel_entropy.back()},
            {"min_rel_entropy", record.min_rel_entropy},
            {"min_rel_entropy_epoch", record.min_rel_entropy_epoch},
            {"wall_seconds", record.wall_seconds},
            {"ok", record.ok},
            {"error", record.error}};
}

void write_sweep_csv(std::ostream& out, const harness::SweepSummary& summary) {
    out << "data,init,k,mean,std,min,mean_min_over_epochs,runs_ok,runs_total\n";
    out.precision(17);
    for (const auto& cell : summary.cells) {
        out << cell.target << ',' << harness::init_kind_name(cell.init_kind) << ',' << cell.k
            << ',' << cell.mean << ',' << cell.stddev << ',' << cell.min << ','
            << cell.mean_min_over_epochs << ',' << cell.runs_ok << ',' << cell.runs_total
            << '\n';
    }
}

} // namespace qgan::serialize
