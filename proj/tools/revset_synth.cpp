// Writes a synthetic, topic-structured dataset directory that the revset CLI can load.

#include <iostream>

#include <CLI11.hpp>

#include "revset/corpus.hpp"
#include "revset/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic reviewer-assignment dataset"};
    revset::SyntheticOptions opt;
    std::string out;
    app.add_option("--out", out, "Output directory")->required();
    app.add_option("--reviewers", opt.reviewers)->capture_default_str();
    app.add_option("--min-pubs", opt.min_pubs)->capture_default_str();
    app.add_option("--max-pubs", opt.max_pubs)->capture_default_str();
    app.add_option("--manuscripts", opt.manuscripts)->capture_default_str();
    app.add_option("--topics", opt.topics)->capture_default_str();
    app.add_option("--vocabulary", opt.vocabulary)->capture_default_str();
    app.add_option("--reference-year", opt.reference_year)->capture_default_str();
    app.add_option("--seed", opt.seed)->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    if (opt.reviewers == 0 || opt.topics == 0 || opt.min_pubs == 0 || opt.min_pubs > opt.max_pubs) {
        std::cerr << "invalid sizes\n";
        return 1;
    }
    revset::write_corpus(revset::make_synthetic_corpus(opt), out);
    std::cout << "wrote " << out << '\n';
    return 0;
}
