#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "fieldnoise/dataset.hpp"
#include "fieldnoise/error.hpp"
#include "fieldnoise/json_io.hpp"
#include "fieldnoise/manifest.hpp"
#include "fieldnoise/reference_table.hpp"
#include "fieldnoise/synthetic.hpp"

using namespace fieldnoise;
using doctest::Approx;

namespace {

std::string error_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("reference table")
{
    const auto rows = load_reference_table();
    CHECK(rows.size() == 8);
    const auto& ii = reference_row("II");
    CHECK(ii.s0 == 42);
    CHECK(ii.t0 == 46);
    CHECK(ii.beta == 4.1);
    const auto& e = reference_row("III e");
    CHECK(e.s0 == 18);
    CHECK(e.t0 == 17);
    CHECK(e.beta == 1.8);
    for (const auto& r : rows) {
        CHECK(e.s0 <= r.s0);
        CHECK(e.t0 <= r.t0);
        CHECK(e.beta <= r.beta);
    }
    CHECK(&reference_row("IIIa") == &reference_row("III a"));
    CHECK(reference_row("IV").s0 == 3300);
    CHECK(reference_row("III b").note == "Temperature cycle to 130K while in vacuum");
    CHECK_THROWS_AS(reference_row("V"), InputError);
}

TEST_CASE("noise CSV round trip is byte identical")
{
    const auto d = synthetic::temp_scaling_dataset(42e-15, 46, 4.1, synthetic::standard_temperatures(), 0.05, 2);
    std::ostringstream first;
    write_noise_csv(first, d);
    std::istringstream in(first.str());
    const auto back = read_noise_csv(in);
    std::ostringstream second;
    write_noise_csv(second, back);
    CHECK(first.str() == second.str());
    for (std::size_t i = 0; i < d.samples.size(); ++i)
        CHECK(back.samples[i].s_e == d.samples[i].s_e);
}

TEST_CASE("sideband CSV round trip")
{
    const std::vector<double> delays{0, 1e-3, 2e-3};
    const auto s = synthetic::sideband_series(4200, 0.05, delays, 500, 1e6, 1);
    std::ostringstream first;
    write_sideband_csv(first, s);
    std::istringstream in(first.str());
    const auto back = read_sideband_csv(in, 1e6);
    std::ostringstream second;
    write_sideband_csv(second, back);
    CHECK(first.str() == second.str());
    CHECK(back.points[1].trials == 500);
}

TEST_CASE("CSV reading tolerates comments and BOM, reports line numbers")
{
    std::istringstream ok("\xEF\xBB\xBF# generated\ntemperature_K,frequency_Hz,SE_V2m2Hz,SE_err_V2m2Hz\n10,1e6,1e-15,0\n\n# note\n20,1e6,2e-15,1e-16\n");
    const auto d = read_noise_csv(ok);
    CHECK(d.samples.size() == 2);
    CHECK(d.samples[1].s_e_err == 1e-16);

    std::istringstream bad("temperature_K,frequency_Hz,SE_V2m2Hz,SE_err_V2m2Hz\n10,1e6,1e-15,0\n20,1e6,oops,0\n");
    const auto msg = error_of([&] { (void)read_noise_csv(bad, "x.csv"); });
    CHECK(msg.find("x.csv") != std::string::npos);
    CHECK(msg.find(":3") != std::string::npos);

    std::istringstream wrong_header("T,f,S\n1,2,3\n");
    CHECK_THROWS_AS(read_noise_csv(wrong_header), InputError);
    std::istringstream short_row("temperature_K,frequency_Hz,SE_V2m2Hz,SE_err_V2m2Hz\n10,1e6\n");
    CHECK_THROWS_AS(read_noise_csv(short_row), InputError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_noise_csv(empty), InputError);
    std::istringstream negative_t("temperature_K,frequency_Hz,SE_V2m2Hz,SE_err_V2m2Hz\n-1,1e6,1e-15,0\n");
    CHECK_THROWS_AS(read_noise_csv(negative_t), InputError);
    std::istringstream fractional("delay_s,P_bsb,P_rsb,trials\n0,0.5,0.1,10.5\n");
    CHECK_THROWS_AS(read_sideband_csv(fractional, 1e6), InputError);
    CHECK_THROWS_AS(read_file("/nonexistent/file.csv"), InputError);
}

TEST_CASE("shortest round-trip number formatting")
{
    CHECK(format_double(1e6) == "1e+06");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(46) == "46");
    for (double v : {1.0 / 3, 6.330958589781285e-11, 2.2250738585072014e-308})
        CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("ensemble config JSON")
{
    const auto cfg = ensemble_config_from_json(parse_json_document(R"({"beta": 2.5, "n": 12, "seed": 9})", "c"), "c");
    CHECK(cfg.beta == 2.5);
    CHECK(cfg.n_fluctuators == 12);
    CHECK(cfg.seed == 9);
    CHECK(cfg.e_max == 3000);
    const auto round = ensemble_config_from_json(to_json(cfg), "r");
    CHECK(round.beta == cfg.beta);
    CHECK(round.tau0 == cfg.tau0);

    const auto syntax = error_of([] { (void)parse_json_document("{\n  \"beta\": ,\n}", "cfg.json"); });
    CHECK(syntax.find("cfg.json:2:") != std::string::npos);
    const auto field = error_of([] { (void)ensemble_config_from_json(parse_json_document(R"({"e_min_K": "cold"})", "c"), "c"); });
    CHECK(field.find("e_min_K") != std::string::npos);
    CHECK_THROWS_AS(ensemble_config_from_json(parse_json_document(R"({"n": 1.5})", "c"), "c"), InputError);
    CHECK_THROWS_AS(ensemble_config_from_json(parse_json_document(R"({"bogus": 1})", "c"), "c"), InputError);
    CHECK_THROWS_AS(ensemble_config_from_json(parse_json_document("[1, 2]", "c"), "c"), InputError);
}

TEST_CASE("simulation plan")
{
    const auto plan = simulation_plan_from_json(
        R"({"n": 10, "temperatures_K": [10, 20], "frequencies_Hz": [1e5, 1e6],
            "calibrate": {"temperature_K": 46, "frequency_Hz": 1e6, "SE_V2m2Hz": 3e-13},
            "trace": {"temperature_K": 30, "sample_rate_Hz": 1e6, "duration_s": 0.01}})",
        "p");
    CHECK(plan.temperatures.size() == 2);
    CHECK(plan.calibration->s_e == 3e-13);
    CHECK(plan.trace->duration == 0.01);
    CHECK_THROWS_AS(simulation_plan_from_json(R"({"temperatures_K": [10, -2]})", "p"), InputError);
    CHECK_THROWS_AS(simulation_plan_from_json(R"({"trace": {"temperature_K": 30}})", "p"), InputError);
}

TEST_CASE("manifest")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    const auto m = make_manifest("fieldnoise fit x.csv", "payload", 7);
    CHECK(m.timestamp == "2023-11-14T22:13:20Z");
    CHECK(m.seed == 7);
    CHECK(m.tool_version == tool_version());
    const auto back = manifest_from_json(to_json(m));
    CHECK(back.config_hash == m.config_hash);
    CHECK(back.command == m.command);

    const auto dir = std::filesystem::temp_directory_path() / "fieldnoise_io_test";
    std::filesystem::create_directories(dir);
    const auto path = write_manifest(dir / "out.csv", m);
    CHECK(path.filename() == "out.csv.manifest.json");
    const auto parsed = manifest_from_json(parse_json_document(read_file(path), path.string()));
    CHECK(parsed.timestamp == m.timestamp);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(manifest_from_json(nlohmann::json::object()), InputError);
}
