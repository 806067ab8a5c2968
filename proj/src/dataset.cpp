#include "fieldnoise/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fieldnoise/error.hpp"

namespace fieldnoise {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view field, std::string_view source, std::size_t line)
{
    field = trim(field);
    double value = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw InputError(std::string(source) + ":" + std::to_string(line) + ": cannot parse number '"
                         + std::string(field) + "'");
    }
    return value;
}

std::string line_error(std::string_view source, std::size_t line, const std::string& what)
{
    return std::string(source) + ":" + std::to_string(line) + ": " + what;
}

} // namespace

void NoiseDataset::validate() const
{
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const auto where = label.empty() ? "sample " + std::to_string(i) : label + " sample " + std::to_string(i);
        if (!(s.temperature > 0))
            throw InputError(where + ": temperature must be positive");
        if (!(s.frequency > 0))
            throw InputError(where + ": frequency must be positive");
        if (!(s.s_e >= 0))
            throw InputError(where + ": S_E must be non-negative");
        if (!(s.s_e_err >= 0))
            throw InputError(where + ": S_E error must be non-negative");
    }
}

std::vector<double> NoiseDataset::temperatures() const
{
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.temperature);
    return out;
}

std::vector<double> NoiseDataset::frequencies() const
{
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.frequency);
    return out;
}

std::vector<double> NoiseDataset::values() const
{
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.s_e);
    return out;
}

std::vector<double> NoiseDataset::errors() const
{
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.s_e_err);
    return out;
}

bool NoiseDataset::has_errors() const
{
    return !samples.empty()
           && std::all_of(samples.begin(), samples.end(), [](const NoiseSample& s) { return s.s_e_err > 0; });
}

std::string format_double(double value)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{})
        throw Error("format_double: conversion failed");
    return {buf.data(), ptr};
}

std::vector<std::vector<double>> read_numeric_csv(std::istream& in, std::string_view header, std::string_view source)
{
    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;
    const auto columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    std::vector<std::vector<double>> rows;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF"))
            view.remove_prefix(3);
        if (view.empty() || view.front() == '#')
            continue;
        if (!seen_header) {
            if (view != header)
                throw InputError(line_error(source, line_no, "expected header '" + std::string(header) + "'"));
            seen_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(columns);
        std::size_t start = 0;
        while (true) {
            const auto comma = view.find(',', start);
            row.push_back(parse_double(view.substr(start, comma - start), source, line_no));
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        if (row.size() != columns) {
            throw InputError(line_error(source, line_no,
                                        "expected " + std::to_string(columns) + " columns, got "
                                            + std::to_string(row.size())));
        }
        rows.push_back(std::move(row));
    }
    if (!seen_header)
        throw InputError(std::string(source) + ": empty file or missing header");
    return rows;
}

NoiseDataset read_noise_csv(std::istream& in, std::string label)
{
    NoiseDataset data;
    const std::string source = label.empty() ? "<noise csv>" : label;
    data.label = std::move(label);
    for (const auto& row : read_numeric_csv(in, noise_csv_header, source))
        data.samples.push_back({row[0], row[1], row[2], row[3]});
    data.validate();
    return data;
}

NoiseDataset read_noise_csv(const std::filesystem::path& path)
{
    std::istringstream in(read_file(path));
    auto data = read_noise_csv(in, path.string());
    data.label = path.stem().string();
    return data;
}

void write_noise_csv(std::ostream& out, const NoiseDataset& data)
{
    out << noise_csv_header << '\n';
    for (const auto& s : data.samples) {
        out << format_double(s.temperature) << ',' << format_double(s.frequency) << ',' << format_double(s.s_e) << ','
            << format_double(s.s_e_err) << '\n';
    }
}

SidebandSeries read_sideband_csv(std::istream& in, double trap_frequency)
{
    SidebandSeries series;
    series.trap_frequency = trap_frequency;
    std::size_t index = 0;
    for (const auto& row : read_numeric_csv(in, sideband_csv_header, "<sideband csv>")) {
        if (!(row[3] >= 1) || row[3] != std::floor(row[3]))
            throw InputError("sideband row " + std::to_string(index) + ": trials must be a positive integer");
        series.points.push_back({row[0], row[1], row[2], static_cast<std::size_t>(row[3])});
        ++index;
    }
    series.validate();
    return series;
}

SidebandSeries read_sideband_csv(const std::filesystem::path& path, double trap_frequency)
{
    std::istringstream in(read_file(path));
    return read_sideband_csv(in, trap_frequency);
}

void write_sideband_csv(std::ostream& out, const SidebandSeries& series)
{
    out << sideband_csv_header << '\n';
    for (const auto& p : series.points) {
        out << format_double(p.delay) << ',' << format_double(p.p_bsb) << ',' << format_double(p.p_rsb) << ','
            << p.trials << '\n';
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace fieldnoise
