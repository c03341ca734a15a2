// Writes synthetic corpora (manifest + binary features) for demos and benchmarks.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "creativity/io.hpp"
#include "creativity/output.hpp"
#include "creativity/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic corpus"};
    std::string kind = "random", out_dir;
    std::size_t n = 1000, dim = 16;
    std::uint64_t seed = 1;
    app.add_option("--kind", kind, "random | timemachine")->check(CLI::IsMember({"random", "timemachine"}));
    app.add_option("-n", n, "Artifact count (random only)");
    app.add_option("--dim", dim, "Feature dimension");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--out", out_dir, "Output directory")->required();
    CLI11_PARSE(app, argc, argv);

    try {
        const auto corpus = kind == "random" ? creativity::synthetic::random_corpus(n, dim, seed)
                                             : creativity::synthetic::time_machine_corpus(seed, dim);
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);
        creativity::io::write_file(dir / "manifest.csv", creativity::manifest_csv(corpus));
        creativity::io::write_file(dir / "visual.crft", creativity::encode_feature_binary(corpus.aspects().front()));
        std::cout << "wrote " << corpus.size() << " artifacts to " << out_dir << '\n';
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 0;
}
