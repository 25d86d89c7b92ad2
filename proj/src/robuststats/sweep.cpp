#include "spectral/robuststats/sweep.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spectral/rng.hpp"

namespace spectral::robuststats {

void SweepConfig::validate() const {
    if (dim < 1) throw std::invalid_argument("SweepConfig: dim must be >= 1");
    if (!(eps > 0.0 && eps < 0.25))
        throw std::invalid_argument("SweepConfig: eps must be in (0, 1/4)");
    if (sigma2 <= 0.0) throw std::invalid_argument("SweepConfig: sigma2 must be positive");
    // sep_factor 0 is the degenerate no-signal control; the corollary regime
    // itself needs >= 1
    if (sep_factor < 0.0) throw std::invalid_argument("SweepConfig: sep_factor must be >= 0");
    if (n_grid.empty()) throw std::invalid_argument("SweepConfig: empty n grid");
    for (int n : n_grid)
        if (n < 2) throw std::invalid_argument("SweepConfig: grid n must be >= 2");
    if (trials < 1) throw std::invalid_argument("SweepConfig: trials must be >= 1");
}

std::vector<SweepRow> finite_sample_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const double delta_sq = cfg.sep_factor * 10.0 * cfg.sigma2 / cfg.eps;

    std::vector<SweepRow> rows(cfg.n_grid.size());
    for (std::size_t g = 0; g < cfg.n_grid.size(); ++g) {
        const int n = cfg.n_grid[g];
        std::vector<char> success(cfg.trials, 0);
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < cfg.trials; ++t) {
            auto spec = make_axis_spec(cfg.dim, cfg.eps, n, delta_sq, cfg.sigma2,
                                       derive_seed(cfg.seed, g * 100003ULL + t));
            spec.population = cfg.population;
            const auto verdict = check_separability(sample_mixture(spec));
            success[t] = verdict.separable && !verdict.degenerate ? 1 : 0;
        }
        int count = 0;
        for (char s : success) count += s;
        rows[g] = {n, cfg.trials, count, static_cast<double>(count) / cfg.trials};
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "n,trials,successes,success_rate\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.6f\n", r.n, r.trials, r.successes,
                      r.success_rate);
        out << buf;
    }
}

std::string sweep_csv_string(const std::vector<SweepRow>& rows) {
    std::ostringstream ss;
    write_sweep_csv(rows, ss);
    return ss.str();
}

namespace {

std::vector<int> parse_int_list(const std::string& s, int line_no) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw std::runtime_error("sweep config line " + std::to_string(line_no) +
                                     ": bad integer '" + item + "'");
        }
    }
    return out;
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    cfg.n_grid.clear();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("sweep config line " + std::to_string(line_no) +
                                     ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        try {
            if (key == "dim")
                cfg.dim = std::stoi(val);
            else if (key == "eps")
                cfg.eps = std::stod(val);
            else if (key == "sigma2")
                cfg.sigma2 = std::stod(val);
            else if (key == "sep_factor")
                cfg.sep_factor = std::stod(val);
            else if (key == "n") {
                auto ns = parse_int_list(val, line_no);
                cfg.n_grid.insert(cfg.n_grid.end(), ns.begin(), ns.end());
            } else if (key == "trials")
                cfg.trials = std::stoi(val);
            else if (key == "seed")
                cfg.seed = std::stoull(val);
            else if (key == "population") {
                if (val == "sphere")
                    cfg.population = PopulationKind::Sphere;
                else if (val == "gaussian")
                    cfg.population = PopulationKind::Gaussian;
                else
                    throw std::runtime_error("sweep config line " + std::to_string(line_no) +
                                             ": unknown population '" + val + "'");
            } else
                throw std::runtime_error("sweep config line " + std::to_string(line_no) +
                                         ": unknown key '" + key + "'");
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception&) {
            throw std::runtime_error("sweep config line " + std::to_string(line_no) +
                                     ": bad value for '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_sweep_config: cannot open " + path);
    return parse_sweep_config(in);
}

}  // namespace spectral::robuststats
