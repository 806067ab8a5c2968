// Writes the bundled synthetic datasets into the directory given as argv[1].
// Every file is regenerated from fixed parameters and seeds; nothing is shipped pre-built.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "fieldnoise/dataset.hpp"
#include "fieldnoise/error.hpp"
#include "fieldnoise/reference_table.hpp"
#include "fieldnoise/synthetic.hpp"

namespace fn = fieldnoise;
namespace syn = fieldnoise::synthetic;

namespace {

constexpr double noise_level = 0.05;

template <class Writer>
void write(const std::filesystem::path& path, Writer&& writer)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw fn::InputError("cannot write " + path.string());
    writer(out);
}

} // namespace

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::cerr << "usage: make_datasets <output-dir>\n";
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    try {
        std::filesystem::create_directories(dir);
        const auto temps = syn::standard_temperatures();

        const auto& ii = fn::reference_row("II");
        write(dir / "trap_II.csv", [&](std::ostream& o) {
            auto d = syn::temp_scaling_dataset(ii.s0_si(), ii.t0, ii.beta, temps, noise_level, 2);
            fn::write_noise_csv(o, d);
        });

        // Heating anomaly: a narrow activation band at 40 K on top of a flat floor,
        // measured alternately on two radial modes.
        const std::vector<double> modes{0.86e6, 1.23e6};
        write(dir / "anomaly.csv", [&](std::ostream& o) {
            fn::write_noise_csv(o, syn::arrhenius_dataset(4e-12, 1.2e-10, 40.0, temps, noise_level, 3, modes));
        });

        std::vector<double> delays;
        for (int k = 0; k <= 8; ++k)
            delays.push_back(0.125e-3 * k);
        write(dir / "sideband_4200.csv", [&](std::ostream& o) {
            fn::write_sideband_csv(o, syn::sideband_series(4200.0, 0.05, delays, 10000, 1e6, 4));
        });
    } catch (const std::exception& e) {
        std::cerr << "make_datasets: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
