#pragma once

// Memory operation abstraction: classify each simple clause of an API
// description as Insert, Delete, Read or Write by similarity against one
// descriptor sentence per operation, then aggregate by sentence structure.

#include <array>
#include <atomic>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specinfer/bundled_data.hpp"
#include "specinfer/error.hpp"
#include "specinfer/name_semantics.hpp"
#include "specinfer/once_cache.hpp"
#include "specinfer/sentence.hpp"

namespace specinfer {

// Declaration order is the arg-max tie-break order.
enum class MemoryOp : std::uint8_t { I = 0, D = 1, R = 2, W = 3 };

inline constexpr std::array<MemoryOp, 4> kAllOps{MemoryOp::I, MemoryOp::D, MemoryOp::R, MemoryOp::W};

inline char op_letter(MemoryOp op) { return "IDRW"[static_cast<int>(op)]; }

inline std::optional<MemoryOp> parse_op(std::string_view s)
{
    if (s == "I") return MemoryOp::I;
    if (s == "D") return MemoryOp::D;
    if (s == "R") return MemoryOp::R;
    if (s == "W") return MemoryOp::W;
    return std::nullopt;
}

class MemoryOpSet {
public:
    MemoryOpSet() = default;
    MemoryOpSet(std::initializer_list<MemoryOp> ops)
    {
        for (auto op : ops) insert(op);
    }

    void insert(MemoryOp op) { bits_ |= bit(op); }
    bool contains(MemoryOp op) const { return (bits_ & bit(op)) != 0; }
    bool empty() const { return bits_ == 0; }
    std::uint8_t bits() const { return bits_; }

    MemoryOpSet& operator|=(const MemoryOpSet& o)
    {
        bits_ |= o.bits_;
        return *this;
    }

    // Letters in the fixed order I, D, R, W.
    std::vector<std::string> letters() const
    {
        std::vector<std::string> out;
        for (auto op : kAllOps) {
            if (contains(op)) out.emplace_back(1, op_letter(op));
        }
        return out;
    }

    std::string to_string() const
    {
        std::string s = "{";
        for (auto& l : letters()) s += (s.size() > 1 ? "," : "") + l;
        return s + "}";
    }

    friend bool operator==(const MemoryOpSet&, const MemoryOpSet&) = default;

private:
    static std::uint8_t bit(MemoryOp op) { return static_cast<std::uint8_t>(1u << static_cast<int>(op)); }
    std::uint8_t bits_ = 0;
};

/// Store-side gate: inserts, or writes without deleting.
inline bool store_side(const MemoryOpSet& ops)
{
    return ops.contains(MemoryOp::I) || (ops.contains(MemoryOp::W) && !ops.contains(MemoryOp::D));
}

/// Load-side gate: reads.
inline bool load_side(const MemoryOpSet& ops) { return ops.contains(MemoryOp::R); }

struct OpDescriptorSet {
    std::array<std::string, 4> text;  // indexed by MemoryOp

    static OpDescriptorSet defaults()
    {
        OpDescriptorSet d;
        d.text[static_cast<int>(MemoryOp::R)] = "Gets value of something.";
        d.text[static_cast<int>(MemoryOp::W)] = "Sets value of something.";
        d.text[static_cast<int>(MemoryOp::I)] = "Inserts something into a collection.";
        d.text[static_cast<int>(MemoryOp::D)] = "Removes something from a collection.";
        return d;
    }

    const std::string& at(MemoryOp op) const { return text[static_cast<int>(op)]; }

    std::optional<MemoryOp> op_of(std::string_view descriptor) const
    {
        for (auto op : kAllOps) {
            if (at(op) == descriptor) return op;
        }
        return std::nullopt;
    }
};

enum class BackendKind { lexicon, embedding };
enum class SentenceScope { first, all };

struct ClassifierConfig {
    BackendKind backend = BackendKind::lexicon;
    double threshold = 0.35;
    SentenceScope sentence_scope = SentenceScope::first;
    OpDescriptorSet descriptors = OpDescriptorSet::defaults();

    void validate() const
    {
        if (!(threshold >= 0.0 && threshold <= 1.0)) {
            throw ValidationError("threshold must lie in [0, 1]");
        }
    }
};

/// Scores how well a sentence matches an operation descriptor, in [-1, 1].
/// Implementations must be deterministic and callable from several threads.
class SimilarityBackend {
public:
    virtual ~SimilarityBackend() = default;
    virtual double score(std::string_view sentence, std::string_view descriptor) = 0;
    // Identifies the scoring model; part of persistent cache keys.
    virtual std::string model_id() = 0;
    // Hint that these texts are about to be scored.
    virtual void prefetch(std::span<const std::string> /*texts*/) {}
};

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL)
{
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

inline double cosine(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw Error("cosine: dimension mismatch");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// ---------------------------------------------------------------------------
// Lexicon backend

/// Verb -> per-operation scores, one `<verb>\t<I>,<D>,<R>,<W>` record per line.
class VerbOpTable {
public:
    using Row = std::array<double, 4>;

    static VerbOpTable parse(std::string_view text)
    {
        VerbOpTable t;
        t.fingerprint_ = hex64(fnv1a64(text));
        std::size_t line_no = 0;
        while (!text.empty()) {
            auto nl = text.find('\n');
            std::string_view line = trim(text.substr(0, nl));
            text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
            ++line_no;
            if (line.empty() || line.front() == '#') continue;
            auto tab = line.find('\t');
            if (tab == std::string_view::npos) {
                throw ParseError("verb table line " + std::to_string(line_no) + ": missing tab");
            }
            Row row{};
            std::string_view rest = line.substr(tab + 1);
            for (std::size_t k = 0; k < 4; ++k) {
                auto comma = rest.find(',');
                std::string field(trim(rest.substr(0, comma)));
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
                char* end = nullptr;
                double v = std::strtod(field.c_str(), &end);
                if (field.empty() || end != field.c_str() + field.size() || v < 0.0 || v > 1.0) {
                    throw ParseError("verb table line " + std::to_string(line_no) + ": expected four reals in [0,1]");
                }
                row[k] = v;
                if (k < 3 && comma == std::string_view::npos) {
                    throw ParseError("verb table line " + std::to_string(line_no) + ": expected four reals in [0,1]");
                }
            }
            if (!trim(rest).empty()) {
                throw ParseError("verb table line " + std::to_string(line_no) + ": too many fields");
            }
            t.rows_[to_lower(trim(line.substr(0, tab)))] = row;
        }
        return t;
    }

    static VerbOpTable load(const std::string& path) { return parse(read_text_file(path)); }

    static const VerbOpTable& bundled()
    {
        static const VerbOpTable t = parse(bundled::kVerbOps);
        return t;
    }

    const Row* find(std::string_view verb) const
    {
        auto it = rows_.find(verb);
        return it == rows_.end() ? nullptr : &it->second;
    }

    /// Row for an inflected form ("removes" -> "remove").
    const Row* find_lemma(std::string_view word, std::string* lemma = nullptr) const
    {
        for (const auto& cand : lemma_candidates(word)) {
            if (const Row* r = find(cand)) {
                if (lemma) *lemma = cand;
                return r;
            }
        }
        return nullptr;
    }

    std::size_t size() const { return rows_.size(); }
    const std::string& fingerprint() const { return fingerprint_; }

private:
    std::map<std::string, Row, std::less<>> rows_;
    std::string fingerprint_;
};

/// Deterministic stand-in for an embedding model: the score of a clause for
/// an operation is the verb table's entry for the clause's main verb. The main
/// verb is the first word that the verb table knows (after stripping
/// inflection) or that the tag lexicon marks as a verb. Unknown verbs score 0.
class LexiconBackend final : public SimilarityBackend {
public:
    LexiconBackend(const VerbOpTable& table, const TagLexicon& lexicon,
                   OpDescriptorSet descriptors = OpDescriptorSet::defaults())
        : table_(&table), lexicon_(&lexicon), descriptors_(std::move(descriptors))
    {
    }

    std::optional<std::string> main_verb(std::string_view sentence) const
    {
        std::string_view rest = sentence;
        while (!rest.empty()) {
            auto sp = rest.find_first_of(" \t\n");
            std::string_view tok = rest.substr(0, sp);
            rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
            std::string word;
            for (char c : tok) {
                if (std::isalpha(static_cast<unsigned char>(c))) word.push_back(static_cast<char>(std::tolower(c)));
            }
            if (word.empty()) continue;
            std::string lemma;
            if (table_->find_lemma(word, &lemma)) return lemma;
            if (lexicon_->is_verb_candidate(word)) return word;
        }
        return std::nullopt;
    }

    double score(std::string_view sentence, std::string_view descriptor) override
    {
        auto op = descriptors_.op_of(descriptor);
        if (!op) return 0.0;
        auto verb = main_verb(sentence);
        if (!verb) return 0.0;
        const auto* row = table_->find_lemma(*verb);
        return row ? (*row)[static_cast<int>(*op)] : 0.0;
    }

    std::string model_id() override { return "lexicon:" + table_->fingerprint(); }

private:
    const VerbOpTable* table_;
    const TagLexicon* lexicon_;
    OpDescriptorSet descriptors_;
};

// ---------------------------------------------------------------------------
// Memoization

/// Scores each distinct (sentence, descriptor) pair at most once.
class MemoizedBackend final : public SimilarityBackend {
public:
    explicit MemoizedBackend(std::shared_ptr<SimilarityBackend> inner) : inner_(std::move(inner)) {}

    double score(std::string_view sentence, std::string_view descriptor) override
    {
        std::pair<std::string, std::string> key{std::string(sentence), std::string(descriptor)};
        return cache_.get_or_compute(key, [&] { return inner_->score(sentence, descriptor); });
    }

    std::string model_id() override { return inner_->model_id(); }
    void prefetch(std::span<const std::string> texts) override { inner_->prefetch(texts); }

    std::size_t hits() const { return cache_.hits(); }
    std::size_t misses() const { return cache_.misses(); }
    // Calls that reached the wrapped backend.
    std::size_t backend_calls() const { return cache_.misses(); }

private:
    std::shared_ptr<SimilarityBackend> inner_;
    OnceCache<std::pair<std::string, std::string>, double, PairHash> cache_;
};

inline std::shared_ptr<MemoizedBackend> memoized(std::shared_ptr<SimilarityBackend> backend)
{
    return std::make_shared<MemoizedBackend>(std::move(backend));
}

// ---------------------------------------------------------------------------
// Classification and aggregation

struct Classification {
    std::optional<MemoryOp> op;
    std::array<double, 4> scores{};  // indexed by MemoryOp

    double score(MemoryOp o) const { return scores[static_cast<int>(o)]; }
};

/// Arg-max over the four descriptors, first in I, D, R, W order on ties; no
/// operation when the best score is below the threshold.
inline Classification classify_sentence(SimilarityBackend& backend, const ClassifierConfig& cfg,
                                        std::string_view sentence)
{
    Classification c;
    std::optional<MemoryOp> best;
    for (auto op : kAllOps) {
        double s = backend.score(sentence, cfg.descriptors.at(op));
        c.scores[static_cast<int>(op)] = s;
        if (!best || s > c.score(*best)) best = op;
    }
    if (best && c.score(*best) >= cfg.threshold) c.op = best;
    return c;
}

/// Clauses of a description whose operations count, per the sentence scope
/// and structure: every clause of a compound sentence, the independent
/// clause(s) of a complex one.
inline std::vector<std::string> operative_clauses(const ClassifierConfig& cfg, const ClauseAnalyzer& analyzer,
                                                  std::string_view description)
{
    std::vector<std::string> out;
    auto sentences = split_sentences(description);
    if (cfg.sentence_scope == SentenceScope::first && sentences.size() > 1) sentences.resize(1);
    for (const auto& s : sentences) {
        for (auto& c : analyzer.analyze(s).independent_clauses()) {
            if (!c.empty()) out.push_back(std::move(c));
        }
    }
    return out;
}

inline MemoryOpSet abstract_description(SimilarityBackend& backend, const ClassifierConfig& cfg,
                                        const ClauseAnalyzer& analyzer, std::string_view description)
{
    MemoryOpSet ops;
    auto clauses = operative_clauses(cfg, analyzer, description);
    backend.prefetch(clauses);
    for (const auto& clause : clauses) {
        if (auto op = classify_sentence(backend, cfg, clause).op) ops.insert(*op);
    }
    return ops;
}

/// Per-run memory operation abstraction with memoization at three levels:
/// description -> ops, clause -> classification, (clause, descriptor) ->
/// score. Safe for concurrent use.
class MemopAbstractor {
public:
    MemopAbstractor(std::shared_ptr<SimilarityBackend> backend, ClassifierConfig cfg,
                    std::shared_ptr<const ClauseAnalyzer> analyzer)
        : backend_(memoized(std::move(backend))), cfg_(std::move(cfg)), analyzer_(std::move(analyzer))
    {
        cfg_.validate();
    }

    MemoryOpSet abstract(const std::string& description)
    {
        return descriptions_.get_or_compute(description, [&] {
            MemoryOpSet ops;
            auto clauses = operative_clauses(cfg_, *analyzer_, description);
            backend_->prefetch(clauses);
            for (const auto& clause : clauses) {
                if (auto op = classify(clause).op) ops.insert(*op);
            }
            return ops;
        });
    }

    Classification classify(const std::string& clause)
    {
        return clauses_.get_or_compute(clause, [&] { return classify_sentence(*backend_, cfg_, clause); });
    }

    const ClassifierConfig& config() const { return cfg_; }
    const ClauseAnalyzer& analyzer() const { return *analyzer_; }

    // Distinct clauses sent to the similarity backend.
    std::size_t items_scored() const { return clauses_.misses(); }
    // Score calls that reached the underlying backend.
    std::size_t backend_calls() const { return backend_->backend_calls(); }
    std::size_t descriptions_abstracted() const { return descriptions_.misses(); }

private:
    std::shared_ptr<MemoizedBackend> backend_;
    ClassifierConfig cfg_;
    std::shared_ptr<const ClauseAnalyzer> analyzer_;
    OnceCache<std::string, MemoryOpSet> descriptions_;
    OnceCache<std::string, Classification> clauses_;
};

}  // namespace specinfer
