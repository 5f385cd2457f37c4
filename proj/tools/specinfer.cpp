// specinfer: command-line driver.
//
// Exit status: 0 success, 1 fatal error, 2 partial results (some pairs or
// methods failed; outputs still written).

#include <fnmatch.h>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "specinfer/embedding_backend.hpp"
#include "specinfer/specinfer.hpp"

namespace fs = std::filesystem;
using namespace specinfer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

std::string env_or(const char* name, std::string fallback)
{
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

std::string default_cache_dir()
{
    if (const char* v = std::getenv("SPECINFER_CACHE_DIR"); v && *v) return v;
    if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/specinfer";
    return ".specinfer-cache";
}

struct NlpOptions {
    std::string backend = "lexicon";
    std::string embed_url{};
    double threshold = 0.35;
    std::string sentences = "first";
    std::string memop_cache{};
    std::string lexicon{};
    std::string noun_overrides{};
    std::string verb_table{};
    std::size_t batch = 64;

    void add_to(CLI::App& cmd, bool with_cache)
    {
        cmd.add_option("--backend", backend, "Similarity backend")
            ->check(CLI::IsMember({"lexicon", "embedding"}))
            ->capture_default_str();
        cmd.add_option("--embed-url", embed_url, "Embedding service URL (default $SPECINFER_EMBED_URL)");
        cmd.add_option("--threshold", threshold, "Minimum similarity for an operation")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        cmd.add_option("--sentences", sentences, "Description sentences to classify")
            ->check(CLI::IsMember({"first", "all"}))
            ->capture_default_str();
        cmd.add_option("--lexicon", lexicon, "POS frequency table (default: bundled)");
        cmd.add_option("--noun-overrides", noun_overrides, "Words forced to be nouns (default: bundled)");
        cmd.add_option("--verb-table", verb_table, "Verb to operation table (default: bundled)");
        cmd.add_option("--embed-batch", batch, "Texts per embedding request")->check(CLI::Range(1, 256));
        if (with_cache) cmd.add_option("--memop-cache", memop_cache, "Persistent score cache directory");
    }

    void validate(std::vector<std::string>& problems) const
    {
        for (const auto* p : {&lexicon, &noun_overrides, &verb_table}) {
            if (!p->empty() && !fs::is_regular_file(*p)) problems.push_back("file not found: " + *p);
        }
    }

    std::string resolved_url() const
    {
        return embed_url.empty() ? env_or("SPECINFER_EMBED_URL", "http://127.0.0.1:8876") : embed_url;
    }

    ClassifierConfig classifier() const
    {
        ClassifierConfig cfg;
        cfg.backend = backend == "embedding" ? BackendKind::embedding : BackendKind::lexicon;
        cfg.threshold = threshold;
        cfg.sentence_scope = sentences == "all" ? SentenceScope::all : SentenceScope::first;
        return cfg;
    }
};

// Lexicon and tables live for the whole process; backends keep pointers.
struct Resources {
    TagLexicon lexicon;
    VerbOpTable verbs;
    std::shared_ptr<SimilarityBackend> backend;
};

std::unique_ptr<Resources> load_resources(const NlpOptions& o)
{
    auto r = std::make_unique<Resources>();
    std::string table = o.lexicon.empty() ? std::string(bundled::kLexicon) : read_text_file(o.lexicon);
    std::string overrides =
        o.noun_overrides.empty() ? std::string(bundled::kNounOverrides) : read_text_file(o.noun_overrides);
    r->lexicon = TagLexicon::parse(table, overrides);
    r->verbs = o.verb_table.empty() ? VerbOpTable::bundled() : VerbOpTable::load(o.verb_table);

    if (o.backend == "embedding") {
        auto emb = std::make_shared<EmbeddingBackend>(o.resolved_url(), o.batch);
        auto h = emb->health();  // fatal when unreachable
        if (h.status != "ok") throw TransportError("embedding service reports status " + h.status);
        r->backend = emb;
    } else {
        r->backend = std::make_shared<LexiconBackend>(r->verbs, r->lexicon);
    }
    if (!o.memop_cache.empty()) r->backend = std::make_shared<PersistentScoreCache>(r->backend, o.memop_cache);
    return r;
}

std::vector<std::string> select_classes(const DocumentationModel& model, const std::string& glob)
{
    std::vector<std::string> out;
    for (const auto& c : model.class_names()) {
        if (glob.empty() || fnmatch(glob.c_str(), c.c_str(), 0) == 0) out.push_back(c);
    }
    return out;
}

void fail_if(const std::vector<std::string>& problems)
{
    if (problems.empty()) return;
    std::string msg = "invalid arguments:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
}

// ---------------------------------------------------------------------------

struct InferArgs {
    std::string docs;
    std::string class_glob;
    std::string out_dir = ".";
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    bool include_self_pairs = false;
    bool no_lazy = false;
    bool box_primitives = false;
    NlpOptions nlp;
};

int cmd_infer(InferArgs& a)
{
    std::vector<std::string> problems;
    if (!fs::is_regular_file(a.docs)) problems.push_back("documentation file not found: " + a.docs);
    if (a.jobs == 0) problems.push_back("--jobs must be at least 1");
    a.nlp.validate(problems);
    fail_if(problems);

    auto model = load_canonical(a.docs);
    auto classes = select_classes(model, a.class_glob);
    if (classes.empty()) throw LookupError("no class matches '" + a.class_glob + "'");
    auto res = load_resources(a.nlp);

    InferenceOptions opts;
    opts.include_self_pairs = a.include_self_pairs;
    opts.lazy = !a.no_lazy;
    opts.jobs = a.jobs;
    opts.type_options.box_primitives = a.box_primitives;
    InferenceContext ctx(model, res->lexicon, res->backend, a.nlp.classifier(), opts);
    auto result = infer_classes(ctx, classes);

    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    write_text_file((dir / "specs.json").string(), dump_json(specs_to_json(result.specs)));
    write_text_file((dir / "dataflow.json").string(), dump_json(dataflow_to_json(result.summaries)));
    write_text_file((dir / "stats.json").string(), dump_json(stats_to_json(result.stats)));

    std::cerr << "specinfer: " << classes.size() << " classes, " << result.stats.pairs_total << " pairs, "
              << result.specs.size() << " specs\n";
    for (const auto& e : result.errors) std::cerr << "error: " << e << "\n";
    return result.ok() ? kExitOk : kExitPartial;
}

struct IngestArgs {
    std::string dir;
    std::string out;
};

int cmd_ingest(const IngestArgs& a)
{
    auto r = ingest_javadoc_html(a.dir);
    for (const auto& m : r.messages) std::cerr << "warning: " << m << "\n";
    std::string text = dump_json(to_canonical_json(r.model));
    if (a.out.empty() || a.out == "-") {
        std::cout << text;
    } else {
        write_text_file(a.out, text);
    }
    std::cerr << "specinfer: " << r.model.class_names().size() << " classes, " << r.warnings << " warnings\n";
    return kExitOk;
}

struct GraphArgs {
    std::string docs;
    std::string class_name;
    bool box_primitives = false;
};

int cmd_graph(const GraphArgs& a)
{
    auto model = load_canonical(a.docs);
    TypeOptions topts;
    topts.box_primitives = a.box_primitives;
    auto g = build_graph(model, a.class_name, topts);
    std::cout << "class " << g.class_name() << "\n";
    for (const auto& n : g.nodes()) {
        std::cout << "  node " << n.method.signature() << " " << (n.index == kReturnIndex ? std::string("ret") : std::to_string(n.index))
                  << " : " << n.type.raw() << " \"" << n.name_label << "\"\n";
    }
    const auto& ms = g.methods();
    for (std::size_t i = 0; i < ms.size(); ++i) {
        for (std::size_t j = 0; j < ms.size(); ++j) {
            if (i == j) continue;
            auto edges = candidate_edges(g, i, j);
            if (edges.empty()) continue;
            std::cout << "  pair " << ms[i].id.signature() << " -> " << ms[j].id.signature() << "\n";
            for (const auto& e : edges) {
                std::cout << "    " << e.from.index << " -> "
                          << (e.to.index == kReturnIndex ? std::string("ret") : std::to_string(e.to.index)) << "\n";
            }
        }
    }
    return kExitOk;
}

int cmd_sentence(const std::string& text, const NlpOptions& nlp)
{
    auto res = load_resources(NlpOptions{.lexicon = nlp.lexicon, .noun_overrides = nlp.noun_overrides});
    RuleClauseAnalyzer analyzer(res->lexicon);
    for (const auto& s : split_sentences(text)) {
        auto a = analyzer.analyze(s);
        std::cout << to_string(a.structure) << ": " << s << "\n";
        for (const auto& c : a.clauses) {
            std::cout << "  " << (c.independent ? "independent" : "dependent  ") << " | " << c.text << "\n";
        }
    }
    return kExitOk;
}

int cmd_classify(const std::string& text, const NlpOptions& nlp)
{
    std::vector<std::string> problems;
    nlp.validate(problems);
    fail_if(problems);
    auto res = load_resources(nlp);
    auto cfg = nlp.classifier();
    RuleClauseAnalyzer analyzer(res->lexicon);
    MemoryOpSet all;
    for (const auto& clause : operative_clauses(cfg, analyzer, text)) {
        auto c = classify_sentence(*res->backend, cfg, clause);
        std::cout << clause << "\n";
        for (auto op : kAllOps) {
            std::cout << "  " << op_letter(op) << " " << std::fixed << std::setprecision(4) << c.score(op) << "\n";
        }
        std::cout << "  -> " << (c.op ? std::string(1, op_letter(*c.op)) : std::string("none")) << "\n";
        if (c.op) all.insert(*c.op);
    }
    std::cout << "ops: " << all.to_string() << "\n";
    return kExitOk;
}

struct EvalArgs {
    std::string pred;
    std::string truth;
    std::string mode = "exact";
};

int cmd_eval(const EvalArgs& a)
{
    std::vector<std::string> problems;
    for (const auto* p : {&a.pred, &a.truth}) {
        if (!fs::is_regular_file(*p)) problems.push_back("file not found: " + *p);
    }
    fail_if(problems);
    std::string pred = read_text_file(a.pred);
    std::string truth = read_text_file(a.truth);
    auto kind = nlohmann::json::parse(truth, nullptr, false);
    Metrics m;
    if (kind.is_object() && kind.contains("summaries")) {
        m = compare_dataflow(parse_dataflow(pred), parse_dataflow(truth));
    } else {
        m = compare_alias(parse_specs(pred), parse_specs(truth),
                          a.mode == "relaxed" ? MatchMode::relaxed : MatchMode::exact);
    }
    std::cout << dump_json(metrics_to_json(m));
    return kExitOk;
}

int cmd_cache_clear(const std::string& dir)
{
    std::size_t n = clear_score_cache(dir);
    std::cout << "removed " << n << " entries from " << dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Infer API alias and data-flow specifications from documentation"};
    app.require_subcommand(1);

    InferArgs infer;
    auto* c_infer = app.add_subcommand("infer", "Infer alias specs and data-flow summaries");
    c_infer->add_option("--docs", infer.docs, "Canonical documentation file")->required();
    c_infer->add_option("--class", infer.class_glob, "Only classes matching this glob");
    c_infer->add_option("-o,--out", infer.out_dir, "Output directory")->capture_default_str();
    c_infer->add_option("-j,--jobs", infer.jobs, "Worker threads")->capture_default_str();
    c_infer->add_flag("--include-self-pairs", infer.include_self_pairs, "Also consider (m, m) pairs");
    c_infer->add_flag("--no-lazy", infer.no_lazy, "Evaluate every stage for every pair (debug)");
    c_infer->add_flag("--box-primitives", infer.box_primitives, "Treat int and Integer etc. as consistent");
    infer.nlp.add_to(*c_infer, true);
    if (const char* v = std::getenv("SPECINFER_CACHE_DIR"); v && *v) infer.nlp.memop_cache = v;

    IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest-javadoc", "Convert Javadoc HTML pages to the canonical format");
    c_ingest->add_option("dir", ingest.dir, "Directory of class pages")->required();
    c_ingest->add_option("-o,--out", ingest.out, "Output file (default stdout)");

    GraphArgs graph;
    auto* c_graph = app.add_subcommand("graph", "Dump the API value graph of a class");
    c_graph->add_option("--docs", graph.docs, "Canonical documentation file")->required()->check(CLI::ExistingFile);
    c_graph->add_option("--class", graph.class_name, "Class name")->required();
    c_graph->add_flag("--box-primitives", graph.box_primitives, "Treat int and Integer etc. as consistent");

    std::string sentence_text;
    NlpOptions sentence_nlp;
    auto* c_sentence = app.add_subcommand("sentence", "Show sentence structure and clauses");
    c_sentence->add_option("--text", sentence_text, "Text to analyze")->required();
    c_sentence->add_option("--lexicon", sentence_nlp.lexicon, "POS frequency table")->check(CLI::ExistingFile);
    c_sentence->add_option("--noun-overrides", sentence_nlp.noun_overrides, "Noun override list")
        ->check(CLI::ExistingFile);

    std::string classify_text;
    NlpOptions classify_nlp;
    auto* c_classify = app.add_subcommand("classify", "Score a text against the four operation descriptors");
    c_classify->add_option("--text", classify_text, "Text to classify")->required();
    classify_nlp.add_to(*c_classify, true);

    EvalArgs eval;
    auto* c_eval = app.add_subcommand(
        "eval", "Compare predictions with ground truth. Accuracy is tp / (tp + fp + fn); undefined ratios are null");
    c_eval->add_option("--pred", eval.pred, "Predicted specs or dataflow file")->required();
    c_eval->add_option("--truth", eval.truth, "Ground-truth file of the same kind")->required();
    c_eval->add_option("--mode", eval.mode, "exact matches (class, store, load, pairs, target); relaxed ignores pairs")
        ->check(CLI::IsMember({"exact", "relaxed"}))
        ->capture_default_str();

    std::string cache_dir = default_cache_dir();
    auto* c_cache = app.add_subcommand("cache", "Manage the persistent score cache");
    c_cache->require_subcommand(1);
    auto* c_clear = c_cache->add_subcommand("clear", "Remove all cached scores");
    c_clear->add_option("--memop-cache", cache_dir, "Cache directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitFatal;
    }

    try {
        if (*c_infer) return cmd_infer(infer);
        if (*c_ingest) return cmd_ingest(ingest);
        if (*c_graph) return cmd_graph(graph);
        if (*c_sentence) return cmd_sentence(sentence_text, sentence_nlp);
        if (*c_classify) return cmd_classify(classify_text, classify_nlp);
        if (*c_eval) return cmd_eval(eval);
        if (*c_clear) return cmd_cache_clear(cache_dir);
    } catch (const std::exception& e) {
        std::cerr << "specinfer: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitFatal;
}
