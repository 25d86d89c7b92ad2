#include "spectral/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "spectral/rng.hpp"

namespace spectral::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

[[noreturn]] void fail_line(int line_no, const std::string& why) {
    throw std::runtime_error("config line " + std::to_string(line_no) + ": " + why);
}

nnlab::Activation parse_activation(const std::string& s) {
    if (s == "relu") return nnlab::Activation::Relu;
    if (s == "linear") return nnlab::Activation::Linear;
    throw std::runtime_error("unknown activation '" + s + "'");
}

std::vector<double> parse_color(const std::string& s) {
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(std::stod(part));
    return out;
}

std::vector<std::pair<int, double>> parse_decay(const std::string& s) {
    std::vector<std::pair<int, double>> out;
    for (const auto& part : split(s, ',')) {
        const auto bits = split(part, ':');
        if (bits.size() != 2) throw std::runtime_error("lr_decay expects epoch:factor pairs");
        out.emplace_back(std::stoi(bits[0]), std::stod(bits[1]));
    }
    return out;
}

// Applies one key=value inside the current section; throws on unknown keys.
void apply_key(ScenarioConfig& cfg, const std::string& section, const std::string& key,
               const std::string& val) {
    auto& ds = cfg.dataset;
    auto& bd = cfg.backdoor;
    auto& net = cfg.network;
    auto& tr = cfg.training;
    auto& df = cfg.defense;
    auto& sd = cfg.seeds;

    if (section == "dataset") {
        if (key == "kind") ds.kind = val;
        else if (key == "classes") ds.toy.num_classes = std::stoi(val);
        else if (key == "per_class") ds.toy.per_class = std::stoi(val);
        else if (key == "test_per_class") ds.test_per_class = std::stoi(val);
        else if (key == "height") ds.toy.height = std::stoi(val);
        else if (key == "width") ds.toy.width = std::stoi(val);
        else if (key == "channels") ds.toy.channels = std::stoi(val);
        else if (key == "class_signal") ds.toy.class_signal = std::stod(val);
        else if (key == "noise") ds.toy.noise = std::stod(val);
        else if (key == "path") ds.path = val;
        else throw std::runtime_error("unknown dataset key '" + key + "'");
    } else if (section == "backdoor") {
        if (key == "shape") bd.shape = poison::mark_shape_from_name(val);
        else if (key == "row") bd.row = std::stoi(val);
        else if (key == "col") bd.col = std::stoi(val);
        else if (key == "color") bd.color = parse_color(val);
        else if (key == "attack") bd.attack = std::stoi(val);
        else if (key == "target") bd.target = std::stoi(val);
        else if (key == "eps_pct") bd.eps_pct = std::stod(val);
        else if (key == "eps_count") bd.eps_count = std::stoi(val);
        else if (key == "replace") bd.replace = (val == "1" || val == "true");
        else throw std::runtime_error("unknown backdoor key '" + key + "'");
    } else if (section == "network") {
        if (key == "layers") net.layers = parse_layer_list(val);
        else if (key == "representation_layer") net.representation_layer = std::stoi(val);
        else throw std::runtime_error("unknown network key '" + key + "'");
    } else if (section == "training") {
        if (key == "epochs") tr.epochs = std::stoi(val);
        else if (key == "batch") tr.batch = std::stoi(val);
        else if (key == "lr") tr.lr = std::stod(val);
        else if (key == "momentum") tr.momentum = std::stod(val);
        else if (key == "lr_decay") tr.lr_decay = parse_decay(val);
        else throw std::runtime_error("unknown training key '" + key + "'");
    } else if (section == "defense") {
        if (key == "eps_bound") df.eps_bound = std::stod(val);
        else if (key == "representation_layer") df.representation_layer = std::stoi(val);
        else throw std::runtime_error("unknown defense key '" + key + "'");
    } else if (section == "seeds") {
        const auto v = std::stoull(val);
        if (key == "data") { sd.data = v; sd.data_set = true; }
        else if (key == "attack") { sd.attack = v; sd.attack_set = true; }
        else if (key == "train1") { sd.train1 = v; sd.train1_set = true; }
        else if (key == "train2") { sd.train2 = v; sd.train2_set = true; }
        else if (key == "power") { sd.power = v; sd.power_set = true; }
        else throw std::runtime_error("unknown seeds key '" + key + "'");
    } else {
        throw std::runtime_error("unknown section [" + section + "]");
    }
}

ScenarioConfig parse_ini(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail_line(line_no, "unterminated section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail_line(line_no, "expected key=value");
        try {
            apply_key(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::exception& ex) {
            fail_line(line_no, ex.what());
        }
    }
    return cfg;
}

ScenarioConfig parse_json(std::istream& in) {
    nlohmann::json j;
    in >> j;
    ScenarioConfig cfg;
    for (const auto& [section, body] : j.items()) {
        for (const auto& [key, value] : body.items()) {
            std::string text;
            if (value.is_string())
                text = value.get<std::string>();
            else
                text = value.dump();
            apply_key(cfg, section, key, text);
        }
    }
    return cfg;
}

void validate(ScenarioConfig& cfg) {
    const auto& s = cfg.seeds;
    if (!(s.data_set && s.attack_set && s.train1_set && s.train2_set && s.power_set))
        throw std::runtime_error(
            "config: all five seeds (data, attack, train1, train2, power) must be explicit");
    if (cfg.backdoor.attack == cfg.backdoor.target)
        throw std::runtime_error("config: backdoor attack and target labels must differ");
    if (cfg.dataset.kind != "toy" && cfg.dataset.kind != "external")
        throw std::runtime_error("config: dataset kind must be toy or external");
    if (cfg.dataset.kind == "external" && cfg.dataset.path.empty())
        throw std::runtime_error("config: external dataset requires path=");
    if (cfg.network.layers.empty()) throw std::runtime_error("config: network layers missing");
    if (!cfg.backdoor.eps_pct && !cfg.backdoor.eps_count)
        throw std::runtime_error("config: backdoor needs eps_pct or eps_count");
    cfg.dataset.toy.seed = cfg.seeds.data;
}

void apply_seed_override(ScenarioConfig& cfg) {
    const char* env = std::getenv("SPECTRAL_SEED_OVERRIDE");
    if (!env) return;
    const std::uint64_t v = std::strtoull(env, nullptr, 10);
    cfg.seeds.data = derive_seed(v, 1);
    cfg.seeds.attack = derive_seed(v, 2);
    cfg.seeds.train1 = derive_seed(v, 3);
    cfg.seeds.train2 = derive_seed(v, 4);
    cfg.seeds.power = derive_seed(v, 5);
    cfg.seeds.data_set = cfg.seeds.attack_set = cfg.seeds.train1_set = cfg.seeds.train2_set =
        cfg.seeds.power_set = true;
    cfg.dataset.toy.seed = cfg.seeds.data;
}

}  // namespace

std::vector<nnlab::LayerSpec> parse_layer_list(const std::string& text) {
    std::vector<nnlab::LayerSpec> out;
    for (const auto& item : split(text, ',')) {
        const auto bits = split(trim(item), ':');
        if (bits.empty()) throw std::runtime_error("empty layer spec");
        if (bits[0] == "conv") {
            if (bits.size() != 5)
                throw std::runtime_error("conv layer expects conv:filters:kernel:stride:act");
            out.push_back(nnlab::ConvSpec{std::stoi(bits[1]), std::stoi(bits[2]),
                                          std::stoi(bits[3]), parse_activation(bits[4])});
        } else if (bits[0] == "dense") {
            if (bits.size() != 3) throw std::runtime_error("dense layer expects dense:units:act");
            out.push_back(nnlab::DenseSpec{std::stoi(bits[1]), parse_activation(bits[2])});
        } else if (bits[0] == "flatten") {
            out.push_back(nnlab::FlattenSpec{});
        } else {
            throw std::runtime_error("unknown layer kind '" + bits[0] + "'");
        }
    }
    return out;
}

int ScenarioConfig::resolve_epsilon_count(const nnlab::LabeledDataset& base) const {
    if (backdoor.eps_count) return *backdoor.eps_count;
    const int target_count = base.count_of_label(backdoor.target);
    return static_cast<int>(std::floor(*backdoor.eps_pct * target_count));
}

nnlab::NetworkConfig ScenarioConfig::network_config(const nnlab::LabeledDataset& base) const {
    nnlab::NetworkConfig cfg;
    cfg.input = {base.height, base.width, base.channels};
    cfg.layers = network.layers;
    cfg.representation_layer =
        defense.representation_layer.value_or(network.representation_layer);
    cfg.num_classes = base.num_classes;
    cfg.seed = 0;  // callers set the role-specific seed
    return cfg;
}

nnlab::TrainConfig ScenarioConfig::train_config() const {
    nnlab::TrainConfig tc;
    tc.epochs = training.epochs;
    tc.batch_size = training.batch;
    tc.learning_rate = training.lr;
    tc.momentum = training.momentum;
    tc.lr_decay = training.lr_decay;
    tc.seed = 0;  // callers set the role-specific seed
    return tc;
}

poison::BackdoorSpec ScenarioConfig::backdoor_spec(const nnlab::LabeledDataset& base) const {
    poison::BackdoorSpec spec;
    spec.shape = backdoor.shape;
    spec.row = backdoor.row;
    spec.col = backdoor.col;
    spec.color = backdoor.color;
    if (spec.color.empty()) spec.color.assign(base.channels, 0.5);
    spec.attack_label = backdoor.attack;
    spec.target_label = backdoor.target;
    spec.epsilon_count = resolve_epsilon_count(base);
    spec.replace = backdoor.replace;
    return spec;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    ScenarioConfig cfg;
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        cfg = parse_json(in);
    else
        cfg = parse_ini(in);
    validate(cfg);
    apply_seed_override(cfg);
    return cfg;
}

}  // namespace spectral::cli
