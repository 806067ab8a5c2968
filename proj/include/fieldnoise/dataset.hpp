#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fieldnoise/physics.hpp"

namespace fieldnoise {

struct NoiseSample {
    double temperature = 0.0; // K
    double frequency = 0.0;   // Hz
    double s_e = 0.0;         // V^2/m^2/Hz
    double s_e_err = 0.0;     // V^2/m^2/Hz

    friend bool operator==(const NoiseSample&, const NoiseSample&) = default;
};

struct NoiseDataset {
    std::string label;
    std::vector<NoiseSample> samples;

    void validate() const;
    std::vector<double> temperatures() const;
    std::vector<double> frequencies() const;
    std::vector<double> values() const;
    std::vector<double> errors() const;
    bool has_errors() const;
};

inline constexpr std::string_view noise_csv_header = "temperature_K,frequency_Hz,SE_V2m2Hz,SE_err_V2m2Hz";
inline constexpr std::string_view sideband_csv_header = "delay_s,P_bsb,P_rsb,trials";
inline constexpr std::string_view trace_csv_header = "time_s,value";
inline constexpr std::string_view psd_csv_header = "frequency_Hz,psd";
inline constexpr std::string_view resistivity_csv_header = "temperature_K,rho_ohm_m";

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Rows of numeric CSV after the header; errors carry the line number.
std::vector<std::vector<double>> read_numeric_csv(std::istream& in, std::string_view header, std::string_view source);

NoiseDataset read_noise_csv(std::istream& in, std::string label = {});
NoiseDataset read_noise_csv(const std::filesystem::path& path);
void write_noise_csv(std::ostream& out, const NoiseDataset& data);

SidebandSeries read_sideband_csv(std::istream& in, double trap_frequency);
SidebandSeries read_sideband_csv(const std::filesystem::path& path, double trap_frequency);
void write_sideband_csv(std::ostream& out, const SidebandSeries& series);

/// Reads the whole file; throws InputError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

} // namespace fieldnoise
