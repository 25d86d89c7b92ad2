#include <omp.h>

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "spectral/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral outlier defense against backdoor data poisoning"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int threads = 0;

    app.add_option("--threads", threads, "OpenMP thread count (0 = auto)")->capture_default_str();

    auto* attack = app.add_subcommand("attack", "build the poisoned training and test sets");
    attack->add_option("--config", config_path, "scenario config (INI or JSON)")->required();
    attack->add_option("--out", out_dir, "output directory")->capture_default_str();

    auto* defend = app.add_subcommand("defend", "train, score, remove top outliers, retrain");
    defend->add_option("--config", config_path, "scenario config (INI or JSON)")->required();
    defend->add_option("--out", out_dir, "directory holding the attack artifacts")
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify-lemmas",
                                      "finite-sample sweep plus Monte-Carlo lemma checks");
    verify->add_option("--config", config_path, "sweep config (key=value)")->required();
    verify->add_option("--out", out_dir, "output directory")->capture_default_str();

    auto* report = app.add_subcommand("report", "pretty-print an existing report.json");
    report->add_option("--in", config_path, "path to report.json")->required();

    CLI11_PARSE(app, argc, argv);

    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (app.got_subcommand(attack)) {
            spectral::cli::cmd_attack(config_path, out_dir);
            std::printf("attack artifacts written to %s\n", out_dir.c_str());
        } else if (app.got_subcommand(defend)) {
            spectral::cli::cmd_defend(config_path, out_dir);
            std::printf("defense report written to %s/report.json\n", out_dir.c_str());
        } else if (app.got_subcommand(verify)) {
            const bool ok = spectral::cli::cmd_verify_lemmas(config_path, out_dir);
            std::printf("verification summary written to %s/summary.txt\n", out_dir.c_str());
            if (!ok) {
                std::fprintf(stderr, "one or more verification checks failed\n");
                return 1;
            }
        } else if (app.got_subcommand(report)) {
            spectral::cli::cmd_report(config_path);
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
