// revset: reviewer expert search and reviewer-set assignment.
//
// Subcommands: validate-corpus, rank-experts, assign-set, evaluate, sweep.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 infeasible request.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revset/revset.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInfeasible = 3;

struct CorpusArgs {
    std::string dir;
    int reference_year = 0;
    std::optional<int> coi_window_years;
};

void add_corpus_options(CLI::App* cmd, CorpusArgs& args) {
    cmd->add_option("--corpus", args.dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("--reference-year", args.reference_year, "Last publication year taken into account")->required();
    cmd->add_option("--coi-window-years", args.coi_window_years,
                    "Only co-authorships from the last N years count as conflicts (default: all)");
}

std::optional<std::size_t> parse_cutoff(const std::string& text) {
    if (text == "all") return std::nullopt;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || v == 0) throw CLI::ValidationError("--k", "expected a positive integer or 'all'");
    return v;
}

revset::VectorKind parse_kind(const std::string& text, const char* flag) {
    auto k = revset::parse_vector_kind(text);
    if (!k) throw CLI::ValidationError(flag, "unknown vector kind '" + text + "'");
    return *k;
}

revset::VotingTechnique parse_vt(const std::string& text) {
    try {
        return revset::VotingTechnique::parse(text);
    } catch (const revset::DataError& e) {
        throw CLI::ValidationError("--vt", e.what());
    }
}

revset::ContentType parse_content(const std::string& text) {
    auto c = revset::parse_content_type(text);
    if (!c) throw CLI::ValidationError("--content", "expected full or research");
    return *c;
}

std::vector<const revset::ManuscriptRecord*> select_manuscripts(const revset::Corpus& corpus,
                                                                const std::vector<std::string>& ids) {
    std::vector<const revset::ManuscriptRecord*> out;
    if (ids.empty()) {
        for (const auto& m : corpus.manuscripts) out.push_back(&m);
    } else {
        for (const auto& id : ids) out.push_back(&corpus.manuscript(id));
    }
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw revset::DataError("cannot write " + path);
    return out;
}

revset::Corpus load(const CorpusArgs& args) {
    auto corpus = revset::load_corpus(fs::path(args.dir), args.reference_year);
    const auto& r = corpus.report;
    if (r.dropped_future_publications > 0) {
        std::cerr << "warning: dropped " << r.dropped_future_publications << " publications dated after "
                  << args.reference_year << '\n';
    }
    for (const auto& msg : r.rejected_reviewers) std::cerr << "warning: rejected reviewer " << msg << '\n';
    return corpus;
}

json corpus_config(const CorpusArgs& a) {
    return {{"corpus", a.dir},
            {"reference_year", a.reference_year},
            {"coi_window_years", a.coi_window_years ? json(*a.coi_window_years) : json(nullptr)}};
}

std::string error_name(const std::exception& e) {
    if (dynamic_cast<const revset::ThresholdTooStrict*>(&e)) return "ThresholdTooStrict";
    if (dynamic_cast<const revset::NoFeasibleSet*>(&e)) return "NoFeasibleSet";
    if (dynamic_cast<const revset::NoEligibleReviewers*>(&e)) return "NoEligibleReviewers";
    if (dynamic_cast<const revset::DegenerateAggregate*>(&e)) return "DegenerateAggregate";
    if (dynamic_cast<const revset::DataError*>(&e)) return "DataError";
    return "Error";
}

int report_error(const std::exception& e, int code) {
    std::cerr << json{{"error", error_name(e)}, {"message", e.what()}, {"exit_code", code}}.dump() << '\n';
    return code;
}

json set_record(const revset::ScoredReviewerSet& s) {
    json r = {{"reviewers", s.reviewer_ids}, {"feasible", s.feasible}, {"sc", s.sc}};
    if (s.feasible) {
        r["A"] = s.authority;
        r["S"] = s.seniority;
        r["I"] = s.interest;
        r["D"] = s.diversity;
        r["E"] = s.expertise;
        r["E1"] = s.e1;
        r["E2"] = s.e2;
        r["E3"] = s.e3;
        r["A1"] = s.a1;
        r["A2"] = s.a2;
        r["S1"] = s.s1;
        r["S2"] = s.s2;
    }
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reviewer expert search and reviewer-set assignment"};
    app.require_subcommand(1);
    app.set_version_flag("--version", revset::kToolVersion);

    // validate-corpus
    CorpusArgs validate_args;
    std::string validate_out;
    auto* validate = app.add_subcommand("validate-corpus", "Load a dataset, check every invariant, print counts");
    add_corpus_options(validate, validate_args);
    validate->add_option("--out", validate_out, "Also write the summary as JSON to this file");

    // rank-experts
    CorpusArgs rank_args;
    std::vector<std::string> rank_manuscripts;
    std::string rank_kind = "tfidf", rank_vt = "sum", rank_content = "full", rank_k = "all", rank_out;
    std::size_t rank_threads = 1;
    auto* rank = app.add_subcommand("rank-experts", "Rank conflict-free reviewers for manuscripts");
    add_corpus_options(rank, rank_args);
    rank->add_option("--manuscript", rank_manuscripts, "Manuscript id (repeatable; default: all)");
    rank->add_option("--kind", rank_kind, "tfidf|lda|dbow|dm|bert")->capture_default_str();
    rank->add_option("--vt", rank_vt, "Voting technique, e.g. sum, votes:0.5, sum_n:5")->capture_default_str();
    rank->add_option("--content", rank_content, "full|research")->capture_default_str();
    rank->add_option("--k", rank_k, "Keep the top N reviewers, or all")->capture_default_str();
    rank->add_option("--out", rank_out, "Output file (line-delimited JSON)")->required();
    rank->add_option("--threads", rank_threads, "Worker threads")->check(CLI::PositiveNumber);

    // assign-set
    CorpusArgs assign_args;
    std::vector<std::string> assign_manuscripts;
    std::string assign_kind = "tfidf", assign_vt = "sum", assign_content = "full", assign_k = "all", assign_out;
    std::string assign_relevance_kind = "tfidf";
    std::vector<double> assign_weights;
    revset::AssignmentConfig assign_cfg;
    bool assign_baselines = false;
    std::size_t assign_top = 1, assign_threads = 1;
    auto* assign = app.add_subcommand("assign-set", "Recommend the best reviewer set for manuscripts");
    add_corpus_options(assign, assign_args);
    assign->add_option("--manuscript", assign_manuscripts, "Manuscript id (repeatable; default: all)");
    assign->add_option("--kind", assign_kind, "Vector kind for the expert search")->capture_default_str();
    assign->add_option("--vt", assign_vt, "Voting technique for the expert search")->capture_default_str();
    assign->add_option("--content", assign_content, "Manuscript content for set scoring: full|research")
        ->capture_default_str();
    assign->add_option("--k", assign_k, "Candidates taken from the ranked list: N or all")->capture_default_str();
    assign->add_option("--t", assign_cfg.threshold, "Relevance threshold in [0, 1]")->capture_default_str();
    assign->add_option("--set-size", assign_cfg.set_size, "Reviewers per set")->capture_default_str();
    assign->add_option("--weights", assign_weights, "Expertise weights e1,e2,e3 (sum to 1)")->delimiter(',')->expected(3);
    assign->add_option("--alpha", assign_cfg.alpha, "Authority mix")->capture_default_str();
    assign->add_option("--sigma", assign_cfg.sigma, "Seniority mix")->capture_default_str();
    assign->add_option("--seed", assign_cfg.rng_seed, "Seed for the random baselines")->capture_default_str();
    assign->add_option("--relevance-kind", assign_relevance_kind, "Similarity for the threshold: tfidf|lda")
        ->capture_default_str();
    assign->add_flag("--baselines", assign_baselines, "Also score the B_t3, B_tr and B_r baselines");
    assign->add_option("--top", assign_top, "Emit the N best sets")->check(CLI::PositiveNumber)->capture_default_str();
    assign->add_option("--out", assign_out, "Output file (line-delimited JSON)")->required();
    assign->add_option("--threads", assign_threads, "Worker threads")->check(CLI::PositiveNumber);

    // evaluate
    std::string eval_run, eval_gt, eval_out;
    std::size_t eval_k = revset::kDefaultMetricCutoff;
    auto* evaluate = app.add_subcommand("evaluate", "P@k, MAP@k and nDCG@k of a rank-experts run");
    evaluate->add_option("--run", eval_run, "Output of rank-experts")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--ground-truth", eval_gt, "ground_truth.jsonl")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--out", eval_out, "Output table (tab-separated)")->required();
    evaluate->add_option("--cutoff", eval_k, "Metric cutoff")->check(CLI::PositiveNumber)->capture_default_str();

    // sweep
    CorpusArgs sweep_args;
    std::string sweep_grid, sweep_out;
    std::size_t sweep_threads = 1;
    auto* sweep = app.add_subcommand("sweep", "Run a grid of configurations");
    add_corpus_options(sweep, sweep_args);
    sweep->add_option("--grid", sweep_grid, "Grid file (JSON)")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", sweep_out, "Output directory")->required();
    sweep->add_option("--threads", sweep_threads, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }

    revset::RunManifest manifest;
    manifest.started_at = revset::utc_timestamp();

    try {
        if (*validate) {
            auto corpus = load(validate_args);
            std::size_t pubs_with_vectors[5] = {};
            for (const auto& [id, p] : corpus.pool.publications()) {
                for (const auto& [kind, v] : p.vectors) ++pubs_with_vectors[static_cast<int>(kind)];
            }
            json summary = {{"reference_year", corpus.reference_year},
                            {"publications", corpus.pool.publications().size()},
                            {"reviewers", corpus.pool.reviewers().size()},
                            {"manuscripts", corpus.manuscripts.size()},
                            {"dropped_future_publications", corpus.report.dropped_future_publications},
                            {"duplicate_publication_refs", corpus.report.duplicate_publication_refs},
                            {"rejected_reviewers", corpus.report.rejected_reviewers},
                            {"ground_truth_manuscripts",
                             corpus.ground_truth ? corpus.ground_truth->relevant.size() : std::size_t{0}}};
            for (auto kind : revset::kAllVectorKinds) {
                summary["publications_with_" + std::string(revset::to_string(kind))] =
                    pubs_with_vectors[static_cast<int>(kind)];
            }
            for (const auto& [key, value] : summary.items()) std::cout << key << ": " << value.dump() << '\n';
            if (!validate_out.empty()) {
                open_output(validate_out) << summary.dump(2) << '\n';
                manifest.command = "validate-corpus";
                manifest.config = corpus_config(validate_args);
                manifest.corpus_hash = revset::corpus_content_hash(validate_args.dir);
                manifest.finished_at = revset::utc_timestamp();
                manifest.write_beside(validate_out);
            }
            return 0;
        }

        if (*rank) {
            const auto kind = parse_kind(rank_kind, "--kind");
            const auto vt = parse_vt(rank_vt);
            const auto content = parse_content(rank_content);
            const auto cutoff = parse_cutoff(rank_k);
            auto corpus = load(rank_args);
            auto out = open_output(rank_out);
            for (const auto* m : select_manuscripts(corpus, rank_manuscripts)) {
                auto rl = revset::expert_search(*m, corpus.pool, kind, vt, content, cutoff,
                                                {rank_args.coi_window_years, rank_threads});
                for (std::size_t i = 0; i < rl.entries.size(); ++i) {
                    out << json{{"manuscript", m->id},
                                {"rank", i + 1},
                                {"reviewer", rl.entries[i].reviewer_id},
                                {"score", rl.entries[i].score}}
                               .dump()
                        << '\n';
                }
            }
            manifest.command = "rank-experts";
            manifest.config = corpus_config(rank_args);
            manifest.config.update({{"manuscripts", rank_manuscripts},
                                    {"kind", revset::to_string(kind)},
                                    {"vt", vt.name()},
                                    {"content", revset::to_string(content)},
                                    {"k", rank_k},
                                    {"negative_dense_cosines", "kept raw"}});
            manifest.corpus_hash = revset::corpus_content_hash(rank_args.dir);
            manifest.finished_at = revset::utc_timestamp();
            manifest.write_beside(rank_out);
            return 0;
        }

        if (*assign) {
            const auto kind = parse_kind(assign_kind, "--kind");
            const auto vt = parse_vt(assign_vt);
            const auto cutoff = parse_cutoff(assign_k);
            assign_cfg.content = parse_content(assign_content);
            assign_cfg.relevance_kind = parse_kind(assign_relevance_kind, "--relevance-kind");
            assign_cfg.coi_window_years = assign_args.coi_window_years;
            if (!assign_weights.empty()) {
                assign_cfg.expertise_weights = {assign_weights[0], assign_weights[1], assign_weights[2]};
            }
            try {
                assign_cfg.validate();
            } catch (const revset::DataError& e) {
                std::cerr << "usage error: " << e.what() << '\n' << assign->help();
                return kExitUsage;
            }
            auto corpus = load(assign_args);

            json config = corpus_config(assign_args);
            config.update({{"kind", revset::to_string(kind)},
                           {"vt", vt.name()},
                           {"k", assign_k},
                           {"content", revset::to_string(assign_cfg.content)},
                           {"t", assign_cfg.threshold},
                           {"set_size", assign_cfg.set_size},
                           {"weights", assign_cfg.expertise_weights},
                           {"alpha", assign_cfg.alpha},
                           {"sigma", assign_cfg.sigma},
                           {"seed", assign_cfg.rng_seed},
                           {"relevance_kind", revset::to_string(assign_cfg.relevance_kind)},
                           {"step1_content", "full"},
                           {"diversity_aggregate", "thresholded"},
                           {"quantile", "nearest-rank"}});

            std::ostringstream records;
            for (const auto* m : select_manuscripts(corpus, assign_manuscripts)) {
                auto rl = revset::expert_search(*m, corpus.pool, kind, vt, revset::ContentType::full, std::nullopt,
                                                {assign_args.coi_window_years, assign_threads});
                auto rl_top = rl.top(cutoff);
                auto profiles = revset::build_profiles(*m, rl_top, corpus.pool, assign_cfg);
                for (const auto& id : profiles.excluded) {
                    std::cerr << "warning: " << m->id << ": reviewer " << id << " has no relevant publications\n";
                }
                auto sets = revset::assign(profiles, *m, assign_cfg, corpus.pool, assign_top, assign_threads);
                for (std::size_t i = 0; i < sets.size(); ++i) {
                    json r = set_record(sets[i]);
                    r["manuscript"] = m->id;
                    r["result"] = i == 0 ? std::string("R0") : "rank " + std::to_string(i + 1);
                    r["config"] = config;
                    records << r.dump() << '\n';
                }
                if (assign_baselines) {
                    for (auto b : {revset::Baseline::top, revset::Baseline::random_top,
                                   revset::Baseline::random_committee}) {
                        json r;
                        try {
                            r = set_record(revset::baseline(b, *m, rl, profiles, corpus.pool, assign_cfg));
                        } catch (const revset::InfeasibleError& e) {
                            r = {{"error", e.what()}};
                        }
                        r["manuscript"] = m->id;
                        r["result"] = revset::to_string(b);
                        r["config"] = config;
                        records << r.dump() << '\n';
                    }
                }
            }
            open_output(assign_out) << records.str();
            manifest.command = "assign-set";
            manifest.config = config;
            manifest.config["manuscripts"] = assign_manuscripts;
            manifest.config["baselines"] = assign_baselines;
            manifest.config["top"] = assign_top;
            manifest.rng_seed = assign_cfg.rng_seed;
            manifest.corpus_hash = revset::corpus_content_hash(assign_args.dir);
            manifest.finished_at = revset::utc_timestamp();
            manifest.write_beside(assign_out);
            return 0;
        }

        if (*evaluate) {
            std::map<std::string, std::vector<std::pair<std::size_t, std::string>>> ranked;
            {
                std::ifstream in(eval_run);
                std::string line;
                std::size_t lineno = 0;
                while (std::getline(in, line)) {
                    ++lineno;
                    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                    try {
                        auto r = json::parse(line);
                        ranked[r.at("manuscript").get<std::string>()].emplace_back(r.at("rank").get<std::size_t>(),
                                                                                   r.at("reviewer").get<std::string>());
                    } catch (const json::exception& e) {
                        throw revset::DataError(eval_run + ":" + std::to_string(lineno) + ": " + e.what());
                    }
                }
            }
            std::map<std::string, std::vector<std::string>> rankings;
            for (auto& [mid, entries] : ranked) {
                std::sort(entries.begin(), entries.end());
                auto& ids = rankings[mid];
                for (auto& [r, id] : entries) ids.push_back(id);
            }
            std::ifstream gt_in(eval_gt);
            auto gt = revset::read_ground_truth(gt_in);
            auto report = revset::evaluate_rankings(rankings, gt.relevant, eval_k);
            for (const auto& s : report.skipped) std::cerr << "warning: skipped " << s << '\n';

            auto out = open_output(eval_out);
            out << "# run=" << eval_run << " ground_truth=" << eval_gt << " cutoff=" << eval_k << '\n';
            out << "# ndcg: " << revset::kNdcgVariant << '\n';
            out << "manuscript\tp_at_" << eval_k << "\tmap_at_" << eval_k << "\tndcg_at_" << eval_k << '\n';
            auto row = [&](const revset::ManuscriptMetrics& m) {
                out << m.manuscript_id << '\t' << revset::format_real(m.p_at_k) << '\t'
                    << revset::format_real(m.map_at_k) << '\t' << revset::format_real(m.ndcg_at_k) << '\n';
            };
            for (const auto& m : report.per_manuscript) row(m);
            row(report.macro);

            manifest.command = "evaluate";
            manifest.config = {{"run", eval_run}, {"ground_truth", eval_gt}, {"cutoff", eval_k}};
            manifest.finished_at = revset::utc_timestamp();
            manifest.write_beside(eval_out);
            return 0;
        }

        if (*sweep) {
            json grid_json;
            {
                std::ifstream in(sweep_grid);
                try {
                    grid_json = json::parse(in);
                } catch (const json::exception& e) {
                    throw revset::DataError(sweep_grid + ": " + e.what());
                }
            }
            auto grid = revset::SweepGrid::from_json(grid_json);
            if (sweep_args.coi_window_years) grid.base.coi_window_years = sweep_args.coi_window_years;
            auto corpus = load(sweep_args);
            auto rows = revset::sweep(corpus, grid, sweep_threads);
            fs::create_directories(sweep_out);
            {
                auto out = open_output((fs::path(sweep_out) / "sweep.tsv").string());
                revset::write_sweep_table(out, grid, rows);
            }
            manifest.command = "sweep";
            manifest.config = corpus_config(sweep_args);
            manifest.config["grid"] = grid_json;
            manifest.rng_seed = grid.base.rng_seed;
            manifest.corpus_hash = revset::corpus_content_hash(sweep_args.dir);
            manifest.finished_at = revset::utc_timestamp();
            manifest.write_beside(sweep_out);
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const revset::InfeasibleError& e) {
        return report_error(e, kExitInfeasible);
    } catch (const std::exception& e) {
        return report_error(e, kExitData);
    }
    return kExitUsage;
}
