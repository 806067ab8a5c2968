#pragma once

#include <span>
#include <string>
#include <string_view>

namespace fieldnoise {

/// One row of the published temperature-scaling fits, S0 in units of 1e-15 V^2/m^2/Hz.
struct ReferenceRow {
    std::string_view label;
    double s0 = 0.0;
    double s0_err = 0.0;
    double t0 = 0.0; // K
    double t0_err = 0.0;
    double beta = 0.0;
    double beta_err = 0.0;
    std::string_view note;

    double s0_si() const noexcept { return s0 * 1e-15; }
    double s0_err_si() const noexcept { return s0_err * 1e-15; }
};

inline constexpr double reference_s0_unit = 1e-15; // V^2/m^2/Hz

/// The eight measured datasets (traps I, II, III a-e, IV).
std::span<const ReferenceRow> load_reference_table();

/// Throws InputError for an unknown label. Labels are "I", "II", "III a" ... "IV";
/// spaces are optional ("IIIa" works).
const ReferenceRow& reference_row(std::string_view label);

} // namespace fieldnoise
