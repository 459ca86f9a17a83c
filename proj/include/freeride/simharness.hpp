#pragma once

// Monte Carlo driver behind the CLI: experiment configuration, deterministic
// per-trial RNG streams (worker count never changes results), stop rules,
// metric aggregation and CSV/JSON output.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freeride/capacity.hpp"
#include "freeride/channel.hpp"
#include "freeride/ldpc.hpp"
#include "freeride/random_code.hpp"
#include "freeride/structured_code.hpp"

namespace freeride::sim {

enum class ExperimentKind { Histogram, WerExtra, BerPayload, CapacityCurve, Prop1Check };
enum class Scheme { Random, Repetition, Rm1 };

struct SimConfig {
    ExperimentKind kind = ExperimentKind::WerExtra;

    // Payload code: constructed (n, gamma, rho, code_seed) or loaded from alist.
    std::size_t n = 8064;
    std::size_t gamma = 3;
    std::size_t rho = 6;
    std::uint64_t code_seed = 1;
    std::string alist_path;

    Scheme scheme = Scheme::Random;
    std::size_t k1 = 5;
    ExtraDecoder decoder = ExtraDecoder::Hdd;
    std::size_t max_iters = 50;

    std::vector<double> snr_db;
    std::uint64_t max_trials = 10'000'000;
    std::uint64_t max_errors = 200;
    std::uint64_t seed = 1;
    std::size_t workers = 0; // 0 = hardware concurrency

    // CapacityCurve only.
    std::string short_code = "both"; // rep2 | ham84 | both
    std::uint64_t samples = 1'000'000;

    std::string out_path;  // empty = stdout
    std::string json_path; // optional JSON mirror

    void validate() const;
    std::uint64_t config_hash() const;
};

struct SweepRow {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t word_errors_extra = 0;
    std::uint64_t bit_errors_payload = 0;
    std::uint64_t payload_bits = 0;
    double wer = 0.0, ber = 0.0, std_err_wer = 0.0, std_err_ber = 0.0;
    bool has_extra = false;   // k1 > 0
    bool has_payload = false; // payload decoded in this experiment
};

struct SweepResult {
    SimConfig config;
    std::vector<SweepRow> rows;
};

struct Prop1Row {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    double lambda0 = 0.0, std_err_lambda0 = 0.0;
    double lambda0_genie = 0.0, std_err_genie = 0.0;
    double lambda1 = 0.0, std_err_lambda1 = 0.0;
    double margin = 0.0; // lambda0_genie + lambda1 - lambda0
};

struct Prop1Report {
    SimConfig config;
    std::vector<Prop1Row> rows;
};

struct HistogramRow {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::map<std::uint32_t, std::uint64_t> correct;
    std::map<std::uint32_t, std::uint64_t> wrong;
};

struct HistogramResult {
    SimConfig config;
    std::vector<HistogramRow> rows;
};

struct CapacityRow {
    double snr_db = 0.0;
    std::string short_code;
    std::uint64_t samples = 0;
    CapacityEstimate c_bios, mi_per_use, c_a, lower;
};

struct CapacityResult {
    SimConfig config;
    std::vector<CapacityRow> rows;
};

/// The decoding pipeline shared by every experiment: payload code plus the
/// configured extra-bit scheme, both derived deterministically from the config.
struct Pipeline {
    LdpcCode code;
    std::optional<RandomFreeRideCode> random_frc;
    std::optional<StructuredFreeRideCode> structured_frc;

    static Pipeline build(const SimConfig& cfg);
    BitVector encode_extra(const BitVector& v) const;
    std::pair<BitVector, BitVector> decode_extra(const BiosChannel& ch, const RealVector& y,
                                                 ExtraDecoder dec) const;
};

SweepResult run(const SimConfig& cfg);
Prop1Report prop1_check(const SimConfig& cfg);
HistogramResult run_histogram(const SimConfig& cfg);
CapacityResult run_capacity(const SimConfig& cfg);

std::string to_csv(const SweepResult& res);
std::string to_csv(const Prop1Report& res);
std::string to_csv(const HistogramResult& res);
std::string to_csv(const CapacityResult& res);

std::string to_json(const SweepResult& res);
std::string to_json(const Prop1Report& res);
std::string to_json(const HistogramResult& res);
std::string to_json(const CapacityResult& res);

/// SplitMix64 finalizer; the building block of all derived seeds.
std::uint64_t splitmix64(std::uint64_t x);
/// Stream seed for (master, stream, index), e.g. (seed, snr index, trial index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// Runs fn(trial_index) for indices [first, first+count) across a worker pool
/// and returns the outcomes in index order. fn must be a pure function of the
/// trial index so results do not depend on the worker count.
template <typename Outcome, typename Fn>
std::vector<Outcome> parallel_map(std::uint64_t first, std::size_t count, std::size_t workers,
                                  const Fn& fn);

BitVector random_bits(std::size_t len, std::mt19937_64& rng);

} // namespace freeride::sim

#include "freeride/simharness_impl.hpp"
