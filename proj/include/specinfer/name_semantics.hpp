#pragma once

// Semantic units of identifier names: split names into sub-words and keep the
// ones a tag-frequency lexicon says are most often nouns.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specinfer/bundled_data.hpp"
#include "specinfer/doc_model.hpp"
#include "specinfer/error.hpp"
#include "specinfer/once_cache.hpp"
#include "specinfer/value_graph.hpp"

namespace specinfer {

inline std::string to_lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::string_view trim(std::string_view s)
{
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

/// Candidate base forms of an inflected word, most specific first. The word
/// itself is always the first entry.
inline std::vector<std::string> lemma_candidates(std::string_view word)
{
    std::string w(word);
    std::vector<std::string> out{w};
    auto ends = [&](std::string_view suf) { return w.size() > suf.size() + 1 && w.ends_with(suf); };
    auto strip = [&](std::size_t n) { return w.substr(0, w.size() - n); };
    if (ends("ies")) out.push_back(strip(3) + "y");
    if (ends("es")) out.push_back(strip(2));
    if (ends("s") && !ends("ss")) out.push_back(strip(1));
    if (ends("ied")) out.push_back(strip(3) + "y");
    if (ends("ed")) {
        out.push_back(strip(2));
        out.push_back(strip(1));
    }
    if (ends("ing")) {
        out.push_back(strip(3));
        out.push_back(strip(3) + "e");
    }
    return out;
}

class TagLexicon {
public:
    using TagCounts = std::vector<std::pair<std::string, long>>;

    TagLexicon() = default;

    /// Parses `<word>\t<TAG>:<count>(,<TAG>:<count>)*` records; blank lines and
    /// lines starting with '#' are ignored. `overrides` holds one forced noun
    /// per line.
    static TagLexicon parse(std::string_view table, std::string_view overrides = {})
    {
        TagLexicon lex;
        std::size_t line_no = 0;
        for_each_line(table, [&](std::string_view line) {
            ++line_no;
            if (line.empty() || line.front() == '#') return;
            auto tab = line.find('\t');
            if (tab == std::string_view::npos) {
                throw ParseError("lexicon line " + std::to_string(line_no) + ": missing tab");
            }
            std::string word = to_lower(trim(line.substr(0, tab)));
            if (word.empty()) throw ParseError("lexicon line " + std::to_string(line_no) + ": empty word");
            TagCounts counts;
            std::string_view rest = line.substr(tab + 1);
            while (!rest.empty()) {
                auto comma = rest.find(',');
                std::string_view item = trim(rest.substr(0, comma));
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
                auto colon = item.rfind(':');
                long count = 0;
                if (colon == std::string_view::npos || colon == 0) {
                    throw ParseError("lexicon line " + std::to_string(line_no) + ": bad tag entry");
                }
                std::string_view num = item.substr(colon + 1);
                auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), count);
                if (ec != std::errc{} || ptr != num.data() + num.size() || count <= 0) {
                    throw ParseError("lexicon line " + std::to_string(line_no) + ": count must be a positive integer");
                }
                counts.emplace_back(std::string(item.substr(0, colon)), count);
            }
            if (counts.empty()) throw ParseError("lexicon line " + std::to_string(line_no) + ": no tags");
            lex.entries_[word] = std::move(counts);
        });
        for_each_line(overrides, [&](std::string_view line) {
            if (line.empty() || line.front() == '#') return;
            lex.overrides_[to_lower(line)] = true;
        });
        return lex;
    }

    static TagLexicon load(const std::string& table_path, const std::string& overrides_path = {})
    {
        return parse(read_text_file(table_path), overrides_path.empty() ? std::string{} : read_text_file(overrides_path));
    }

    static const TagLexicon& bundled()
    {
        static const TagLexicon lex = parse(bundled::kLexicon, bundled::kNounOverrides);
        return lex;
    }

    std::size_t size() const { return entries_.size(); }

    const TagCounts* find_exact(std::string_view word) const
    {
        auto it = entries_.find(word);
        return it == entries_.end() ? nullptr : &it->second;
    }

    /// Exact entry, else the first lemma candidate that has one.
    const TagCounts* lookup(std::string_view word) const
    {
        for (const auto& cand : lemma_candidates(word)) {
            if (const auto* c = find_exact(cand)) return c;
        }
        return nullptr;
    }

    std::optional<bool> override_for(std::string_view word) const
    {
        auto it = overrides_.find(word);
        if (it == overrides_.end()) return std::nullopt;
        return it->second;
    }

    void set_override(std::string word, bool noun) { overrides_[to_lower(word)] = noun; }

    static long count_of(const TagCounts& counts, std::string_view tag)
    {
        long n = 0;
        for (const auto& [t, c] : counts) {
            if (t == tag) n += c;
        }
        return n;
    }

    /// A word is a noun when NOUN has the largest count (ties count as noun).
    /// Unknown words are nouns; overrides win over counts.
    bool is_noun(std::string_view word) const
    {
        std::string w = to_lower(word);
        if (auto forced = override_for(w)) return *forced;
        const auto* counts = lookup(w);
        if (!counts) return true;
        return has_max(*counts, "NOUN");
    }

    /// VERB has the largest count for the word. Unknown words are not verbs.
    bool is_verb_candidate(std::string_view word) const
    {
        const auto* counts = lookup(to_lower(word));
        return counts && has_max(*counts, "VERB");
    }

    bool has_tag(std::string_view word, std::string_view tag) const
    {
        const auto* counts = lookup(to_lower(word));
        return counts && count_of(*counts, tag) > 0;
    }

private:
    static bool has_max(const TagCounts& counts, std::string_view tag)
    {
        long target = count_of(counts, tag);
        if (target <= 0) return false;
        std::map<std::string_view, long> totals;
        for (const auto& [t, c] : counts) totals[t] += c;
        for (const auto& [t, c] : totals) {
            if (c > target) return false;
        }
        return true;
    }

    template <typename F>
    static void for_each_line(std::string_view text, F&& f)
    {
        while (!text.empty()) {
            auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            f(line);
            if (nl == std::string_view::npos) break;
            text.remove_prefix(nl + 1);
        }
    }

    std::map<std::string, TagCounts, std::less<>> entries_;
    std::map<std::string, bool, std::less<>> overrides_;
};

/// Splits an identifier into lowercase sub-words on underscores, other
/// non-alphanumerics and case boundaries. An uppercase run followed by a
/// lowercase letter leaves its last capital to the next word
/// ("URLConnection" -> url, connection). Digits stay with the preceding word.
inline std::vector<std::string> split_name(std::string_view name)
{
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(to_lower(cur));
        cur.clear();
    };
    auto is_upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
    auto is_lower = [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; };
    auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };

    for (std::size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (!is_upper(c) && !is_lower(c) && !is_digit(c)) {
            flush();
            continue;
        }
        if (is_upper(c) && !cur.empty()) {
            char prev = name[i - 1];
            bool next_lower = i + 1 < name.size() && is_lower(name[i + 1]);
            if (is_lower(prev) || is_digit(prev) || (is_upper(prev) && next_lower)) flush();
        }
        cur.push_back(c);
    }
    flush();
    return out;
}

struct SemanticUnitSet {
    std::set<std::string> units;

    bool empty() const { return units.empty(); }
    friend bool operator==(const SemanticUnitSet&, const SemanticUnitSet&) = default;
};

/// Equal unit sets, or at least one side without units.
inline bool unit_consistent(const SemanticUnitSet& a, const SemanticUnitSet& b)
{
    return a.empty() || b.empty() || a == b;
}

/// Memoized noun decisions over a lexicon. Each distinct word consults the
/// lexicon once; `tagging_invocations()` counts those consultations.
class NounTagger {
public:
    explicit NounTagger(const TagLexicon& lexicon) : lexicon_(&lexicon) {}

    bool is_noun(const std::string& word)
    {
        return words_.get_or_compute(word, [&] { return lexicon_->is_noun(word); });
    }

    SemanticUnitSet noun_units(std::string_view name)
    {
        SemanticUnitSet s;
        for (auto& w : split_name(name)) {
            if (is_noun(w)) s.units.insert(std::move(w));
        }
        return s;
    }

    std::size_t tagging_invocations() const { return words_.misses(); }
    const TagLexicon& lexicon() const { return *lexicon_; }

private:
    const TagLexicon* lexicon_;
    OnceCache<std::string, bool> words_;
};

/// Unmemoized form of NounTagger::noun_units.
inline SemanticUnitSet noun_units(const TagLexicon& lex, std::string_view name)
{
    SemanticUnitSet s;
    for (auto& w : split_name(name)) {
        if (lex.is_noun(w)) s.units.insert(std::move(w));
    }
    return s;
}

/// Semantic-unit constraint for one candidate edge. A parameter-to-parameter
/// edge needs consistent parameter names; a parameter-to-return edge needs the
/// load API's name to be consistent with either the parameter name or the
/// store API's name.
inline bool edge_unit_ok(NounTagger& tagger, const CandidateEdge& e, std::string_view store_name)
{
    SemanticUnitSet from = tagger.noun_units(e.from.name_label);
    SemanticUnitSet to = tagger.noun_units(e.to.name_label);
    if (e.kind == EdgeKind::param_param) return unit_consistent(from, to);
    return unit_consistent(from, to) || unit_consistent(tagger.noun_units(store_name), to);
}

}  // namespace specinfer
