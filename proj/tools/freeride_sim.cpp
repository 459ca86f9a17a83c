// Monte Carlo simulator for free-ride transmission of extra bits over
// LDPC-coded payload links. Subcommands mirror the experiment kinds:
//
//   histogram  unsatisfied-check histograms for correct/wrong candidates
//   wer        word error rate of the extra bits
//   ber        payload bit error rate under successive cancellation
//   capacity   accessible capacity of short payload codes
//   prop1      payload-WER bound check lambda0 <= lambda0_genie + lambda1

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "freeride/simharness.hpp"

namespace {

using namespace freeride;
using namespace freeride::sim;

std::vector<double> parse_snr(const std::string& spec) {
    // START:STOP:STEP (inclusive) or a single value.
    std::vector<double> out;
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
        out.push_back(std::stod(spec));
        return out;
    }
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw CLI::ValidationError("--snr expects START:STOP:STEP");
    const double start = std::stod(spec.substr(0, c1));
    const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (step <= 0.0) throw CLI::ValidationError("--snr step must be positive");
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    return out;
}

void write_output(const SimConfig& cfg, const std::string& csv, const std::string& json_text) {
    if (cfg.out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream f(cfg.out_path);
        if (!f) throw std::runtime_error("cannot open output file: " + cfg.out_path);
        f << csv;
    }
    if (!cfg.json_path.empty()) {
        std::ofstream f(cfg.json_path);
        if (!f) throw std::runtime_error("cannot open json file: " + cfg.json_path);
        f << json_text << '\n';
    }
}

void add_code_options(CLI::App* cmd, SimConfig& cfg) {
    cmd->add_option("--n", cfg.n, "Payload code length");
    cmd->add_option("--gamma", cfg.gamma, "Column weight");
    cmd->add_option("--rho", cfg.rho, "Row weight");
    cmd->add_option("--code-seed", cfg.code_seed, "Construction seed");
    cmd->add_option("--alist", cfg.alist_path, "Load H from an alist file instead of constructing");
    cmd->add_option("--max-iters", cfg.max_iters, "Sum-product iteration cap");
}

void add_scheme_options(CLI::App* cmd, SimConfig& cfg, std::string& scheme, std::string& decoder) {
    cmd->add_option("--scheme", scheme, "Extra-bit scheme: random|rep|rm1")
        ->check(CLI::IsMember({"random", "rep", "rm1"}));
    cmd->add_option("--k1", cfg.k1, "Number of extra bits (0 = plain payload)");
    cmd->add_option("--decoder", decoder, "Extra-bit decoder: hdd|sdd")
        ->check(CLI::IsMember({"hdd", "sdd"}));
}

void add_run_options(CLI::App* cmd, SimConfig& cfg, std::string& snr) {
    cmd->add_option("--snr", snr, "SNR sweep START:STOP:STEP in dB (or one value)")->required();
    cmd->add_option("--max-trials", cfg.max_trials, "Trial cap per SNR point");
    cmd->add_option("--max-errors", cfg.max_errors, "Word-error cap per SNR point");
    cmd->add_option("--seed", cfg.seed, "Master RNG seed");
    cmd->add_option("--workers", cfg.workers, "Worker threads (0 = hardware)");
    cmd->add_option("--out", cfg.out_path, "CSV output path (default stdout)");
    cmd->add_option("--json", cfg.json_path, "Optional JSON mirror with config echo");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "rep") return Scheme::Repetition;
    if (s == "rm1") return Scheme::Rm1;
    return Scheme::Random;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"free-ride extra-bit transmission simulator"};
    app.require_subcommand(1);

    SimConfig cfg;
    std::string snr, scheme = "random", decoder = "hdd";

    auto* histogram = app.add_subcommand("histogram", "Syndrome-statistics histograms");
    add_code_options(histogram, cfg);
    add_scheme_options(histogram, cfg, scheme, decoder);
    add_run_options(histogram, cfg, snr);

    auto* wer = app.add_subcommand("wer", "Extra-bit word error rate sweep");
    add_code_options(wer, cfg);
    add_scheme_options(wer, cfg, scheme, decoder);
    add_run_options(wer, cfg, snr);

    auto* ber = app.add_subcommand("ber", "Payload BER under successive cancellation");
    add_code_options(ber, cfg);
    add_scheme_options(ber, cfg, scheme, decoder);
    add_run_options(ber, cfg, snr);

    auto* prop1 = app.add_subcommand("prop1", "Payload-WER bound measurement");
    add_code_options(prop1, cfg);
    add_scheme_options(prop1, cfg, scheme, decoder);
    add_run_options(prop1, cfg, snr);

    auto* capacity = app.add_subcommand("capacity", "Accessible capacity of short codes");
    capacity->add_option("--short-code", cfg.short_code, "rep2|ham84|both")
        ->check(CLI::IsMember({"rep2", "ham84", "both"}));
    capacity->add_option("--samples", cfg.samples, "Monte Carlo samples per point");
    add_run_options(capacity, cfg, snr);

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.snr_db = parse_snr(snr);
        cfg.scheme = parse_scheme(scheme);
        cfg.decoder = decoder == "sdd" ? ExtraDecoder::Sdd : ExtraDecoder::Hdd;

        if (histogram->parsed()) {
            cfg.kind = ExperimentKind::Histogram;
            // The trial cap doubles as the histogram sample count.
            if (cfg.max_trials > 1'000'000'000) cfg.max_trials = 10'000;
            const auto res = run_histogram(cfg);
            write_output(cfg, to_csv(res), to_json(res));
        } else if (wer->parsed()) {
            cfg.kind = ExperimentKind::WerExtra;
            const auto res = run(cfg);
            write_output(cfg, to_csv(res), to_json(res));
        } else if (ber->parsed()) {
            cfg.kind = ExperimentKind::BerPayload;
            const auto res = run(cfg);
            write_output(cfg, to_csv(res), to_json(res));
        } else if (prop1->parsed()) {
            cfg.kind = ExperimentKind::Prop1Check;
            const auto res = prop1_check(cfg);
            write_output(cfg, to_csv(res), to_json(res));
        } else if (capacity->parsed()) {
            cfg.kind = ExperimentKind::CapacityCurve;
            const auto res = run_capacity(cfg);
            write_output(cfg, to_csv(res), to_json(res));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
