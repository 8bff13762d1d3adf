// Regenerates the shipped synthetic benchmark.
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hardrank/synthetic.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Write the two-population synthetic benchmark", "make_synthetic"};
    std::string out = "data/synthetic";
    hardrank::SyntheticOptions opts;
    app.add_option("-o,--output", out, "Output directory");
    app.add_option("--seed", opts.seed, "Generator seed");
    app.add_option("--hard", opts.hard_queries, "Number of hard queries");
    app.add_option("--easy", opts.easy_queries, "Number of easy queries");
    CLI11_PARSE(app, argc, argv);
    try {
        auto bench = hardrank::make_synthetic_benchmark(opts);
        hardrank::write_synthetic_benchmark(bench, out);
        std::cout << "wrote " << bench.corpus.size() << " documents, " << bench.queries.size() << " queries to " << out
                  << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
