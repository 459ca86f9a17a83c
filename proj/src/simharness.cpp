#include "freeride/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace freeride::sim {

namespace {

using nlohmann::json;

const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Histogram: return "histogram";
        case ExperimentKind::WerExtra: return "wer";
        case ExperimentKind::BerPayload: return "ber";
        case ExperimentKind::CapacityCurve: return "capacity";
        case ExperimentKind::Prop1Check: return "prop1";
    }
    return "?";
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Random: return "random";
        case Scheme::Repetition: return "rep";
        case Scheme::Rm1: return "rm1";
    }
    return "?";
}

const char* decoder_name(ExtraDecoder d) { return d == ExtraDecoder::Hdd ? "hdd" : "sdd"; }

double binomial_se(double p_hat, std::uint64_t trials) {
    if (trials == 0) return 0.0;
    return std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / static_cast<double>(trials));
}

json config_json(const SimConfig& c) {
    json j;
    j["kind"] = kind_name(c.kind);
    j["n"] = c.n;
    j["gamma"] = c.gamma;
    j["rho"] = c.rho;
    j["code_seed"] = c.code_seed;
    j["alist"] = c.alist_path;
    j["scheme"] = scheme_name(c.scheme);
    j["k1"] = c.k1;
    j["decoder"] = decoder_name(c.decoder);
    j["max_iters"] = c.max_iters;
    j["snr_db"] = c.snr_db;
    j["max_trials"] = c.max_trials;
    j["max_errors"] = c.max_errors;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["short_code"] = c.short_code;
    j["samples"] = c.samples;
    return j;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(master ^ splitmix64(stream)) ^ index);
}

BitVector random_bits(std::size_t len, std::mt19937_64& rng) {
    BitVector v(len);
    auto words = v.words();
    std::uniform_int_distribution<std::uint64_t> word;
    for (auto& w : words) w = word(rng);
    if (len % 64) words[words.size() - 1] &= (std::uint64_t{1} << (len % 64)) - 1;
    return v;
}

void SimConfig::validate() const {
    if (kind != ExperimentKind::CapacityCurve) {
        if (alist_path.empty()) {
            if (gamma == 0 || rho == 0 || (n * gamma) % rho != 0)
                throw std::invalid_argument("config: n*gamma must be divisible by rho");
        }
        if (max_trials == 0 || max_errors == 0)
            throw std::invalid_argument("config: stop rule must be positive");
    }
    if (snr_db.empty()) throw std::invalid_argument("config: snr list must be nonempty");
    if (kind == ExperimentKind::CapacityCurve) {
        if (samples == 0) throw std::invalid_argument("config: samples must be positive");
        if (short_code != "rep2" && short_code != "ham84" && short_code != "both")
            throw std::invalid_argument("config: short_code must be rep2|ham84|both");
    }
    if (kind == ExperimentKind::Histogram && k1 == 0)
        throw std::invalid_argument("config: histogram requires k1 >= 1");
    if ((kind == ExperimentKind::WerExtra || kind == ExperimentKind::Prop1Check) && k1 == 0)
        throw std::invalid_argument("config: experiment needs extra bits (k1 >= 1)");
}

std::uint64_t SimConfig::config_hash() const {
    // FNV-1a over the canonical config dump (seed included). Worker count is
    // excluded: results are worker-invariant by contract.
    json j = config_json(*this);
    j.erase("workers");
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

Pipeline Pipeline::build(const SimConfig& cfg) {
    LdpcCode code = !cfg.alist_path.empty()
                        ? LdpcCode::from_alist_file(cfg.alist_path)
                        : LdpcCode::construct_regular(cfg.n, cfg.gamma, cfg.rho, cfg.code_seed);
    Pipeline p{std::move(code), std::nullopt, std::nullopt};
    if (cfg.k1 == 0) return p; // plain payload pipeline

    switch (cfg.scheme) {
        case Scheme::Random: {
            std::mt19937_64 rng(derive_seed(cfg.code_seed, 0x5eedc0de, cfg.k1));
            p.random_frc = RandomFreeRideCode::generate(cfg.k1, p.code, rng);
            break;
        }
        case Scheme::Repetition:
            p.structured_frc = lift(p.code, build_repetition(cfg.k1, p.code.m()));
            break;
        case Scheme::Rm1:
            p.structured_frc = lift(p.code, build_rm1(cfg.k1, p.code.m()));
            break;
    }
    return p;
}

BitVector Pipeline::encode_extra(const BitVector& v) const {
    if (random_frc) return random_frc->encode(v);
    if (structured_frc) return structured_frc->encode(v);
    return BitVector(code.n());
}

std::pair<BitVector, BitVector> Pipeline::decode_extra(const BiosChannel& ch, const RealVector& y,
                                                       ExtraDecoder dec) const {
    if (random_frc)
        return dec == ExtraDecoder::Hdd ? random_frc->hdd_decode(code, ch, y)
                                        : random_frc->sdd_decode(code, ch, y);
    if (structured_frc) {
        const SyndromeChannelModel model = syndrome_channel(code, ch, y, dec);
        BitVector v_hat = decode_structured_extra(*structured_frc, model);
        BitVector w_hat = structured_frc->encode(v_hat);
        return {std::move(v_hat), std::move(w_hat)};
    }
    return {BitVector(0), BitVector(code.n())};
}

namespace {

struct TrialRecord {
    bool extra_word_error = false;
    bool payload_word_error = false;
    std::uint32_t payload_bit_errors = 0;
};

constexpr std::size_t kWindow = 2048;

} // namespace

SweepResult run(const SimConfig& cfg) {
    cfg.validate();
    if (cfg.kind != ExperimentKind::WerExtra && cfg.kind != ExperimentKind::BerPayload)
        throw std::invalid_argument("run: expected a wer or ber experiment");
    const Pipeline pipe = Pipeline::build(cfg);
    const bool decode_payload = cfg.kind == ExperimentKind::BerPayload;
    const bool has_extra = cfg.k1 > 0;

    SweepResult result;
    result.config = cfg;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const BiosChannel ch = BiosChannel::awgn_from_snr_db(cfg.snr_db[si]);
        auto trial = [&](std::uint64_t idx) {
            std::mt19937_64 rng(derive_seed(cfg.seed, si, idx));
            TrialRecord rec;
            const BitVector u = random_bits(pipe.code.k(), rng);
            const BitVector v = random_bits(cfg.k1, rng);
            BitVector x = pipe.code.encode(u);
            if (has_extra) x ^= pipe.encode_extra(v);
            const RealVector y = ch.transmit(x, rng);

            BitVector w_hat(pipe.code.n());
            if (has_extra) {
                auto [v_hat, w] = pipe.decode_extra(ch, y, cfg.decoder);
                rec.extra_word_error = v_hat != v;
                w_hat = std::move(w);
            }
            if (decode_payload) {
                const RealVector y_clean = has_extra ? ch.flip(y, w_hat) : y;
                const DecodeResult dr = pipe.code.sum_product_decode(ch.llr(y_clean), cfg.max_iters);
                const BitVector u_hat = pipe.code.extract_message(dr.codeword_estimate);
                rec.payload_word_error = u_hat != u;
                rec.payload_bit_errors = static_cast<std::uint32_t>((u_hat ^ u).weight());
            }
            return rec;
        };

        SweepRow row;
        row.snr_db = cfg.snr_db[si];
        row.has_extra = has_extra;
        row.has_payload = decode_payload;
        std::uint64_t stop_errors = 0;
        bool stopped = false;
        while (!stopped && row.trials < cfg.max_trials) {
            const std::size_t count =
                static_cast<std::size_t>(std::min<std::uint64_t>(kWindow, cfg.max_trials - row.trials));
            const auto window =
                parallel_map<TrialRecord>(row.trials, count, cfg.workers, trial);
            for (const auto& rec : window) {
                ++row.trials;
                row.word_errors_extra += rec.extra_word_error;
                row.bit_errors_payload += rec.payload_bit_errors;
                // Stop on the word-error count of the experiment's metric.
                stop_errors += decode_payload ? rec.payload_word_error : rec.extra_word_error;
                if (stop_errors >= cfg.max_errors) {
                    stopped = true;
                    break;
                }
            }
        }
        row.payload_bits = decode_payload ? row.trials * pipe.code.k() : 0;
        if (has_extra) {
            row.wer = static_cast<double>(row.word_errors_extra) / static_cast<double>(row.trials);
            row.std_err_wer = binomial_se(row.wer, row.trials);
        }
        if (decode_payload) {
            row.ber = static_cast<double>(row.bit_errors_payload) / static_cast<double>(row.payload_bits);
            row.std_err_ber = binomial_se(row.ber, row.payload_bits);
        }
        result.rows.push_back(row);
    }
    return result;
}

Prop1Report prop1_check(const SimConfig& cfg) {
    cfg.validate();
    const Pipeline pipe = Pipeline::build(cfg);
    if (cfg.k1 == 0) throw std::invalid_argument("prop1_check: k1 must be >= 1");

    Prop1Report report;
    report.config = cfg;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const BiosChannel ch = BiosChannel::awgn_from_snr_db(cfg.snr_db[si]);
        struct Outcome {
            bool genie_err = false, full_err = false, extra_err = false;
        };
        // Three measurements per trial with common noise: genie-known w,
        // decoded extra bits, and the full successive-cancellation chain.
        auto trial = [&](std::uint64_t idx) {
            std::mt19937_64 rng(derive_seed(cfg.seed, si, idx));
            Outcome oc;
            const BitVector u = random_bits(pipe.code.k(), rng);
            const BitVector v = random_bits(cfg.k1, rng);
            const BitVector w = pipe.encode_extra(v);
            const BitVector x = pipe.code.encode(u) ^ w;
            const RealVector y = ch.transmit(x, rng);

            const RealVector y_genie = ch.flip(y, w);
            const DecodeResult genie = pipe.code.sum_product_decode(ch.llr(y_genie), cfg.max_iters);
            oc.genie_err = pipe.code.extract_message(genie.codeword_estimate) != u;

            auto [v_hat, w_hat] = pipe.decode_extra(ch, y, cfg.decoder);
            oc.extra_err = v_hat != v;
            if (!oc.extra_err) {
                oc.full_err = oc.genie_err; // identical decoder input
            } else {
                const DecodeResult full =
                    pipe.code.sum_product_decode(ch.llr(ch.flip(y, w_hat)), cfg.max_iters);
                oc.full_err = pipe.code.extract_message(full.codeword_estimate) != u;
            }
            return oc;
        };

        Prop1Row row;
        row.snr_db = cfg.snr_db[si];
        std::uint64_t genie_errs = 0, full_errs = 0, extra_errs = 0;
        bool stopped = false;
        while (!stopped && row.trials < cfg.max_trials) {
            const std::size_t count =
                static_cast<std::size_t>(std::min<std::uint64_t>(kWindow, cfg.max_trials - row.trials));
            const auto window = parallel_map<Outcome>(row.trials, count, cfg.workers, trial);
            for (const auto& oc : window) {
                ++row.trials;
                genie_errs += oc.genie_err;
                full_errs += oc.full_err;
                extra_errs += oc.extra_err;
                if (full_errs >= cfg.max_errors) {
                    stopped = true;
                    break;
                }
            }
        }
        const auto rate = [&](std::uint64_t e) {
            return static_cast<double>(e) / static_cast<double>(row.trials);
        };
        row.lambda0 = rate(full_errs);
        row.lambda0_genie = rate(genie_errs);
        row.lambda1 = rate(extra_errs);
        row.std_err_lambda0 = binomial_se(row.lambda0, row.trials);
        row.std_err_genie = binomial_se(row.lambda0_genie, row.trials);
        row.std_err_lambda1 = binomial_se(row.lambda1, row.trials);
        row.margin = row.lambda0_genie + row.lambda1 - row.lambda0;
        report.rows.push_back(row);
    }
    return report;
}

HistogramResult run_histogram(const SimConfig& cfg) {
    cfg.validate();
    const Pipeline pipe = Pipeline::build(cfg);
    if (!pipe.random_frc) throw std::invalid_argument("histogram: random scheme required");

    HistogramResult result;
    result.config = cfg;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const BiosChannel ch = BiosChannel::awgn_from_snr_db(cfg.snr_db[si]);
        std::mt19937_64 rng(derive_seed(cfg.seed, si, 0));
        const std::size_t trials = static_cast<std::size_t>(cfg.max_trials);
        const SyndromeHistogram hist =
            syndrome_histogram(pipe.code, *pipe.random_frc, ch, trials, rng);
        HistogramRow row;
        row.snr_db = cfg.snr_db[si];
        row.trials = trials;
        row.correct = hist.correct;
        row.wrong = hist.wrong;
        result.rows.push_back(std::move(row));
    }
    return result;
}

CapacityResult run_capacity(const SimConfig& cfg) {
    cfg.validate();
    CapacityResult result;
    result.config = cfg;
    std::vector<std::pair<std::string, ShortCode>> codes;
    if (cfg.short_code == "rep2" || cfg.short_code == "both")
        codes.emplace_back("rep2", ShortCode::repetition2());
    if (cfg.short_code == "ham84" || cfg.short_code == "both")
        codes.emplace_back("ham84", ShortCode::extended_hamming8());

    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const BiosChannel ch = BiosChannel::awgn_from_snr_db(cfg.snr_db[si]);
        std::mt19937_64 rng_cb(derive_seed(cfg.seed, si, 0xcb));
        const auto [cb, cb_se] = ch.bios_capacity(cfg.samples, rng_cb);
        for (const auto& [name, sc] : codes) {
            CapacityRow row;
            row.snr_db = cfg.snr_db[si];
            row.short_code = name;
            row.samples = cfg.samples;
            row.c_bios = {cb, cb_se, static_cast<std::size_t>(cfg.samples)};
            std::mt19937_64 rng_mi(derive_seed(cfg.seed, si, splitmix64(std::hash<std::string>{}(name))));
            row.mi_per_use = code_mutual_information(sc, ch, cfg.samples, rng_mi);
            std::mt19937_64 rng_ca(derive_seed(cfg.seed, si, splitmix64(std::hash<std::string>{}(name)) + 1));
            row.c_a = accessible_capacity(sc, ch, cfg.samples, rng_ca);
            const double r0 = static_cast<double>(sc.k()) / static_cast<double>(sc.n());
            row.lower = {cb - r0, cb_se, static_cast<std::size_t>(cfg.samples)};
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

// ---- serialization ----

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

} // namespace

std::string to_csv(const SweepResult& res) {
    std::ostringstream os;
    os << "snr_db,trials,word_errors_extra,bit_errors_payload,payload_bits,wer,ber,"
          "std_err_wer,std_err_ber,seed,config_hash\n";
    const std::string hash = hash_hex(res.config.config_hash());
    for (const auto& r : res.rows) {
        os << format_double(r.snr_db) << ',' << r.trials << ',';
        if (r.has_extra)
            os << r.word_errors_extra;
        os << ',';
        if (r.has_payload)
            os << r.bit_errors_payload;
        os << ',';
        if (r.has_payload)
            os << r.payload_bits;
        os << ',';
        if (r.has_extra)
            os << format_double(r.wer);
        os << ',';
        if (r.has_payload)
            os << format_double(r.ber);
        os << ',';
        if (r.has_extra)
            os << format_double(r.std_err_wer);
        os << ',';
        if (r.has_payload)
            os << format_double(r.std_err_ber);
        os << ',' << res.config.seed << ',' << hash << '\n';
    }
    return os.str();
}

std::string to_csv(const Prop1Report& res) {
    std::ostringstream os;
    os << "snr_db,trials,lambda0,std_err_lambda0,lambda0_genie,std_err_genie,lambda1,"
          "std_err_lambda1,margin,seed,config_hash\n";
    const std::string hash = hash_hex(res.config.config_hash());
    for (const auto& r : res.rows) {
        os << format_double(r.snr_db) << ',' << r.trials << ',' << format_double(r.lambda0) << ','
           << format_double(r.std_err_lambda0) << ',' << format_double(r.lambda0_genie) << ','
           << format_double(r.std_err_genie) << ',' << format_double(r.lambda1) << ','
           << format_double(r.std_err_lambda1) << ',' << format_double(r.margin) << ','
           << res.config.seed << ',' << hash << '\n';
    }
    return os.str();
}

std::string to_csv(const HistogramResult& res) {
    // Two (value, count) columns per hypothesis, one section per SNR.
    std::ostringstream os;
    os << "snr_db,n_correct,count_correct,n_wrong,count_wrong\n";
    for (const auto& row : res.rows) {
        auto ic = row.correct.begin();
        auto iw = row.wrong.begin();
        while (ic != row.correct.end() || iw != row.wrong.end()) {
            os << format_double(row.snr_db) << ',';
            if (ic != row.correct.end()) {
                os << ic->first << ',' << ic->second << ',';
                ++ic;
            } else {
                os << ",,";
            }
            if (iw != row.wrong.end()) {
                os << iw->first << ',' << iw->second;
                ++iw;
            } else {
                os << ',';
            }
            os << '\n';
        }
    }
    return os.str();
}

std::string to_csv(const CapacityResult& res) {
    std::ostringstream os;
    os << "snr_db,short_code,samples,c_bios,std_err_c_bios,mi_per_use,std_err_mi,"
          "c_a,std_err_c_a,lower_bound,std_err_lower_bound,seed,config_hash\n";
    const std::string hash = hash_hex(res.config.config_hash());
    for (const auto& r : res.rows) {
        os << format_double(r.snr_db) << ',' << r.short_code << ',' << r.samples << ','
           << format_double(r.c_bios.value) << ',' << format_double(r.c_bios.std_err) << ','
           << format_double(r.mi_per_use.value) << ',' << format_double(r.mi_per_use.std_err) << ','
           << format_double(r.c_a.value) << ',' << format_double(r.c_a.std_err) << ','
           << format_double(r.lower.value) << ',' << format_double(r.lower.std_err) << ','
           << res.config.seed << ',' << hash << '\n';
    }
    return os.str();
}

namespace {

json result_header(const SimConfig& cfg) {
    json j;
    j["config"] = config_json(cfg);
    j["config_hash"] = hash_hex(cfg.config_hash());
    return j;
}

} // namespace

std::string to_json(const SweepResult& res) {
    json j = result_header(res.config);
    for (const auto& r : res.rows) {
        json row;
        row["snr_db"] = r.snr_db;
        row["trials"] = r.trials;
        if (r.has_extra) {
            row["word_errors_extra"] = r.word_errors_extra;
            row["wer"] = r.wer;
            row["std_err_wer"] = r.std_err_wer;
        }
        if (r.has_payload) {
            row["bit_errors_payload"] = r.bit_errors_payload;
            row["payload_bits"] = r.payload_bits;
            row["ber"] = r.ber;
            row["std_err_ber"] = r.std_err_ber;
        }
        j["rows"].push_back(row);
    }
    return j.dump(2);
}

std::string to_json(const Prop1Report& res) {
    json j = result_header(res.config);
    for (const auto& r : res.rows) {
        j["rows"].push_back({{"snr_db", r.snr_db},
                             {"trials", r.trials},
                             {"lambda0", r.lambda0},
                             {"std_err_lambda0", r.std_err_lambda0},
                             {"lambda0_genie", r.lambda0_genie},
                             {"std_err_genie", r.std_err_genie},
                             {"lambda1", r.lambda1},
                             {"std_err_lambda1", r.std_err_lambda1},
                             {"margin", r.margin}});
    }
    return j.dump(2);
}

std::string to_json(const HistogramResult& res) {
    json j = result_header(res.config);
    for (const auto& r : res.rows) {
        json row;
        row["snr_db"] = r.snr_db;
        row["trials"] = r.trials;
        for (const auto& [v, c] : r.correct) row["correct"][std::to_string(v)] = c;
        for (const auto& [v, c] : r.wrong) row["wrong"][std::to_string(v)] = c;
        j["rows"].push_back(row);
    }
    return j.dump(2);
}

std::string to_json(const CapacityResult& res) {
    json j = result_header(res.config);
    for (const auto& r : res.rows) {
        j["rows"].push_back({{"snr_db", r.snr_db},
                             {"short_code", r.short_code},
                             {"samples", r.samples},
                             {"c_bios", r.c_bios.value},
                             {"std_err_c_bios", r.c_bios.std_err},
                             {"mi_per_use", r.mi_per_use.value},
                             {"std_err_mi", r.mi_per_use.std_err},
                             {"c_a", r.c_a.value},
                             {"std_err_c_a", r.c_a.std_err},
                             {"lower_bound", r.lower.value},
                             {"std_err_lower_bound", r.lower.std_err}});
    }
    return j.dump(2);
}

} // namespace freeride::sim
