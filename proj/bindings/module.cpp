#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "freeride/capacity.hpp"
#include "freeride/channel.hpp"
#include "freeride/gf2.hpp"
#include "freeride/ldpc.hpp"
#include "freeride/random_code.hpp"
#include "freeride/simharness.hpp"
#include "freeride/structured_code.hpp"

namespace py = pybind11;
using namespace freeride;

namespace {

BitVector to_bits(const std::vector<int>& bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) v.set(i, true);
    return v;
}

std::vector<int> from_bits(const BitVector& v) {
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v.get(i);
    return out;
}

} // namespace

PYBIND11_MODULE(freeride, m) {
    m.doc() = "Free-ride transmission of extra bits over LDPC-coded BIOS channels";

    py::class_<std::mt19937_64>(m, "Rng").def(py::init<std::uint64_t>(), py::arg("seed"));

    py::class_<BitVector>(m, "BitVector")
        .def(py::init([](const std::vector<int>& bits) { return to_bits(bits); }))
        .def_static("from_string", &BitVector::from_string)
        .def("__len__", &BitVector::size)
        .def("__getitem__", [](const BitVector& v, std::size_t i) { return v.get(i); })
        .def("weight", &BitVector::weight)
        .def("to_list", &from_bits)
        .def("__xor__", [](const BitVector& a, const BitVector& b) { return a ^ b; })
        .def("__eq__", [](const BitVector& a, const BitVector& b) { return a == b; })
        .def("__repr__", [](const BitVector& v) { return "BitVector('" + v.to_string() + "')"; });

    py::class_<DenseBitMatrix>(m, "DenseBitMatrix")
        .def_static("from_strings", &DenseBitMatrix::from_strings)
        .def_static("identity", &DenseBitMatrix::identity)
        .def_property_readonly("rows", &DenseBitMatrix::rows)
        .def_property_readonly("cols", &DenseBitMatrix::cols)
        .def("get", &DenseBitMatrix::get)
        .def("row", &DenseBitMatrix::row_vector);

    m.def("mat_vec_mul", py::overload_cast<const DenseBitMatrix&, const BitVector&>(&mat_vec_mul),
          "v * M^T over GF(2)");
    m.def("vec_mat_mul", &vec_mat_mul, "v * M over GF(2)");
    m.def("gf2_rank", &gf2_rank);
    m.def("invert", &invert);

    py::class_<DecodeResult>(m, "DecodeResult")
        .def_readonly("converged", &DecodeResult::converged)
        .def_readonly("iterations_used", &DecodeResult::iterations_used)
        .def_property_readonly("codeword_estimate",
                               [](const DecodeResult& r) { return r.codeword_estimate; });

    py::class_<LdpcCode>(m, "LdpcCode")
        .def_static("construct_regular", &LdpcCode::construct_regular, py::arg("n"),
                    py::arg("gamma"), py::arg("rho"), py::arg("seed"))
        .def_static("from_alist_file", &LdpcCode::from_alist_file)
        .def("to_alist_file", &LdpcCode::to_alist_file)
        .def_property_readonly("n", &LdpcCode::n)
        .def_property_readonly("k", &LdpcCode::k)
        .def_property_readonly("m", &LdpcCode::m)
        .def_property_readonly("gamma", &LdpcCode::gamma)
        .def_property_readonly("rho", &LdpcCode::rho)
        .def("encode", &LdpcCode::encode)
        .def("syndrome", &LdpcCode::syndrome)
        .def("extract_message", &LdpcCode::extract_message)
        .def("sum_product_decode", &LdpcCode::sum_product_decode, py::arg("llr"),
             py::arg("max_iters") = 50);

    py::enum_<BiosChannel::Kind>(m, "ChannelKind")
        .value("BpskAwgn", BiosChannel::Kind::BpskAwgn)
        .value("Bsc", BiosChannel::Kind::Bsc);

    py::class_<BiosChannel>(m, "BiosChannel")
        .def_static("bpsk_awgn", &BiosChannel::bpsk_awgn, py::arg("sigma"))
        .def_static("awgn_from_snr_db", &BiosChannel::awgn_from_snr_db, py::arg("snr_db"))
        .def_static("bsc", &BiosChannel::bsc, py::arg("p"))
        .def_property_readonly("kind", &BiosChannel::kind)
        .def("transmit", &BiosChannel::transmit)
        .def("llr", &BiosChannel::llr)
        .def("flip", &BiosChannel::flip)
        .def("hard_decision", &BiosChannel::hard_decision)
        .def("hard_crossover", &BiosChannel::hard_crossover)
        .def("posterior_flip_prob", &BiosChannel::posterior_flip_prob)
        .def("bios_capacity", &BiosChannel::bios_capacity, py::arg("samples"), py::arg("rng"));

    py::enum_<ExtraDecoder>(m, "ExtraDecoder")
        .value("Hdd", ExtraDecoder::Hdd)
        .value("Sdd", ExtraDecoder::Sdd);

    py::class_<RandomFreeRideCode>(m, "RandomFreeRideCode")
        .def_static("generate", &RandomFreeRideCode::generate, py::arg("k1"), py::arg("code"),
                    py::arg("rng"))
        .def_property_readonly("k1", &RandomFreeRideCode::k1)
        .def("encode", &RandomFreeRideCode::encode)
        .def("unsat_count", &RandomFreeRideCode::unsat_count)
        .def("hdd_decode", &RandomFreeRideCode::hdd_decode)
        .def("sdd_decode", &RandomFreeRideCode::sdd_decode);

    py::class_<ScResult>(m, "ScResult")
        .def_readonly("u_hat", &ScResult::u_hat)
        .def_readonly("v_hat", &ScResult::v_hat)
        .def_readonly("payload", &ScResult::payload);

    m.def("successive_cancellation",
          py::overload_cast<const LdpcCode&, const RandomFreeRideCode&, const BiosChannel&,
                            const RealVector&, std::size_t, ExtraDecoder>(&successive_cancellation),
          py::arg("code"), py::arg("frc"), py::arg("ch"), py::arg("y"), py::arg("max_iters") = 50,
          py::arg("decoder") = ExtraDecoder::Hdd);
    m.def("successive_cancellation",
          py::overload_cast<const LdpcCode&, const StructuredFreeRideCode&, const BiosChannel&,
                            const RealVector&, std::size_t, ExtraDecoder>(&successive_cancellation),
          py::arg("code"), py::arg("frc"), py::arg("ch"), py::arg("y"), py::arg("max_iters") = 50,
          py::arg("decoder") = ExtraDecoder::Hdd);

    py::class_<SyndromeStatModel>(m, "SyndromeStatModel")
        .def_readonly("m", &SyndromeStatModel::m)
        .def_readonly("rho", &SyndromeStatModel::rho)
        .def_readonly("p_b", &SyndromeStatModel::p_b)
        .def_readonly("p", &SyndromeStatModel::p)
        .def_readonly("mu0", &SyndromeStatModel::mu0)
        .def_readonly("sigma0_sq", &SyndromeStatModel::sigma0_sq)
        .def_readonly("mu1", &SyndromeStatModel::mu1)
        .def_readonly("sigma1_sq", &SyndromeStatModel::sigma1_sq);

    m.def("stat_model", &stat_model);
    m.def("wer_estimate", &wer_estimate, py::arg("model"), py::arg("k1"));

    py::class_<SyndromeCode>(m, "SyndromeCode")
        .def_readonly("k1", &SyndromeCode::k1)
        .def_readonly("m", &SyndromeCode::m)
        .def_readonly("block_len", &SyndromeCode::block_len)
        .def_readonly("eta", &SyndromeCode::eta)
        .def_property_readonly("gs", [](const SyndromeCode& sc) { return sc.gs; });

    m.def("build_repetition", &build_repetition, py::arg("k1"), py::arg("m"));
    m.def("build_rm1", &build_rm1, py::arg("k1"), py::arg("m"));

    py::class_<StructuredFreeRideCode>(m, "StructuredFreeRideCode")
        .def_property_readonly("k1", &StructuredFreeRideCode::k1)
        .def_readonly("pivot_cols", &StructuredFreeRideCode::pivot_cols)
        .def("encode", &StructuredFreeRideCode::encode);

    m.def("lift", &lift, py::arg("code"), py::arg("syndrome_code"));

    py::class_<SyndromeChannelModel>(m, "SyndromeChannelModel")
        .def_readonly("mode", &SyndromeChannelModel::mode)
        .def_readonly("cross_probs", &SyndromeChannelModel::cross_probs)
        .def_readonly("llrs", &SyndromeChannelModel::llrs);

    m.def("syndrome_channel", &syndrome_channel, py::arg("code"), py::arg("ch"), py::arg("y"),
          py::arg("mode"));
    m.def("mlg_decode_repetition", &mlg_decode_repetition);
    m.def("fht_ml_decode_rm", &fht_ml_decode_rm);
    m.def("hdd_min_distance_decode", &hdd_min_distance_decode);
    m.def("wer_estimate_repetition", &wer_estimate_repetition, py::arg("m1"), py::arg("p"),
          py::arg("k1"));

    py::class_<ShortCode>(m, "ShortCode")
        .def_static("from_generator", &ShortCode::from_generator)
        .def_static("repetition2", &ShortCode::repetition2)
        .def_static("extended_hamming8", &ShortCode::extended_hamming8)
        .def_property_readonly("n", &ShortCode::n)
        .def_property_readonly("k", &ShortCode::k);

    py::class_<CapacityEstimate>(m, "CapacityEstimate")
        .def_readonly("value", &CapacityEstimate::value)
        .def_readonly("std_err", &CapacityEstimate::std_err)
        .def_readonly("samples", &CapacityEstimate::samples);

    m.def("code_mutual_information", &code_mutual_information, py::arg("short_code"), py::arg("ch"),
          py::arg("samples"), py::arg("rng"));
    m.def("accessible_capacity", &accessible_capacity, py::arg("short_code"), py::arg("ch"),
          py::arg("samples"), py::arg("rng"));
    m.def("lower_bound", &lower_bound, py::arg("ch"), py::arg("r0"), py::arg("samples"),
          py::arg("rng"));

    // Simulation harness.
    using sim::SimConfig;
    auto s = m.def_submodule("sim", "Monte Carlo experiment driver");
    py::enum_<sim::ExperimentKind>(s, "ExperimentKind")
        .value("Histogram", sim::ExperimentKind::Histogram)
        .value("WerExtra", sim::ExperimentKind::WerExtra)
        .value("BerPayload", sim::ExperimentKind::BerPayload)
        .value("CapacityCurve", sim::ExperimentKind::CapacityCurve)
        .value("Prop1Check", sim::ExperimentKind::Prop1Check);
    py::enum_<sim::Scheme>(s, "Scheme")
        .value("Random", sim::Scheme::Random)
        .value("Repetition", sim::Scheme::Repetition)
        .value("Rm1", sim::Scheme::Rm1);

    py::class_<SimConfig>(s, "SimConfig")
        .def(py::init<>())
        .def_readwrite("kind", &SimConfig::kind)
        .def_readwrite("n", &SimConfig::n)
        .def_readwrite("gamma", &SimConfig::gamma)
        .def_readwrite("rho", &SimConfig::rho)
        .def_readwrite("code_seed", &SimConfig::code_seed)
        .def_readwrite("alist_path", &SimConfig::alist_path)
        .def_readwrite("scheme", &SimConfig::scheme)
        .def_readwrite("k1", &SimConfig::k1)
        .def_readwrite("decoder", &SimConfig::decoder)
        .def_readwrite("max_iters", &SimConfig::max_iters)
        .def_readwrite("snr_db", &SimConfig::snr_db)
        .def_readwrite("max_trials", &SimConfig::max_trials)
        .def_readwrite("max_errors", &SimConfig::max_errors)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("workers", &SimConfig::workers)
        .def_readwrite("short_code", &SimConfig::short_code)
        .def_readwrite("samples", &SimConfig::samples);

    py::class_<sim::SweepRow>(s, "SweepRow")
        .def_readonly("snr_db", &sim::SweepRow::snr_db)
        .def_readonly("trials", &sim::SweepRow::trials)
        .def_readonly("word_errors_extra", &sim::SweepRow::word_errors_extra)
        .def_readonly("bit_errors_payload", &sim::SweepRow::bit_errors_payload)
        .def_readonly("payload_bits", &sim::SweepRow::payload_bits)
        .def_readonly("wer", &sim::SweepRow::wer)
        .def_readonly("ber", &sim::SweepRow::ber)
        .def_readonly("std_err_wer", &sim::SweepRow::std_err_wer)
        .def_readonly("std_err_ber", &sim::SweepRow::std_err_ber);

    py::class_<sim::SweepResult>(s, "SweepResult")
        .def_readonly("rows", &sim::SweepResult::rows)
        .def("to_csv", [](const sim::SweepResult& r) { return sim::to_csv(r); });

    py::class_<sim::Prop1Row>(s, "Prop1Row")
        .def_readonly("snr_db", &sim::Prop1Row::snr_db)
        .def_readonly("trials", &sim::Prop1Row::trials)
        .def_readonly("lambda0", &sim::Prop1Row::lambda0)
        .def_readonly("lambda0_genie", &sim::Prop1Row::lambda0_genie)
        .def_readonly("lambda1", &sim::Prop1Row::lambda1)
        .def_readonly("margin", &sim::Prop1Row::margin);

    py::class_<sim::Prop1Report>(s, "Prop1Report")
        .def_readonly("rows", &sim::Prop1Report::rows)
        .def("to_csv", [](const sim::Prop1Report& r) { return sim::to_csv(r); });

    s.def("run", &sim::run);
    s.def("prop1_check", &sim::prop1_check);
}
