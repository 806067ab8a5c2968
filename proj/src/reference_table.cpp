#include "fieldnoise/reference_table.hpp"

#include <algorithm>
#include <array>

#include "fieldnoise/error.hpp"

namespace fieldnoise {

namespace {

constexpr std::array<ReferenceRow, 8> rows{{
    {"I", 65, 3, 73, 3, 3.0, 0.2, "6th cooldown"},
    {"II", 42, 2, 46, 1, 4.1, 0.1, "Initial cooldown"},
    {"III a", 167, 7, 46, 1, 3.6, 0.2, "Initial cooldown"},
    {"III b", 120, 10, 45, 3, 3.5, 0.2, "Temperature cycle to 130K while in vacuum"},
    {"III c", 54, 3, 44, 2, 3.2, 0.1, "Temperature cycle to 340K while in vacuum"},
    {"III d", 60, 4, 49, 4, 2.1, 0.1, "Recleaning in lab solvents in air"},
    {"III e", 18, 3, 17, 3, 1.8, 0.1, "Recleaning in lab solvents in air"},
    {"IV", 3300, 40, 73, 1, 3.2, 0.1, "Following the room temperature measurements"},
}};

std::string squash(std::string_view s)
{
    std::string out;
    for (char c : s)
        if (c != ' ' && c != ')')
            out.push_back(c);
    return out;
}

} // namespace

std::span<const ReferenceRow> load_reference_table()
{
    return rows;
}

const ReferenceRow& reference_row(std::string_view label)
{
    const auto key = squash(label);
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const ReferenceRow& r) { return squash(r.label) == key; });
    if (it == rows.end())
        throw InputError("no reference row '" + std::string(label) + "'");
    return *it;
}

} // namespace fieldnoise
