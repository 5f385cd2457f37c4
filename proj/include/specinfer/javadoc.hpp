#pragma once

// Best-effort ingestion of Javadoc HTML (JDK 11+ "memberSummary" layout) into a
// DocumentationModel. Types linked with title="class in pkg" are qualified;
// unlinked names are kept verbatim. Rows that cannot be parsed are skipped
// and counted as warnings.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "specinfer/doc_model.hpp"
#include "specinfer/error.hpp"
#include "specinfer/name_semantics.hpp"

namespace specinfer {

struct JavadocIngest {
    DocumentationModel model;
    std::size_t warnings = 0;
    std::vector<std::string> messages;
};

namespace javadoc {

inline std::string decode_entities(std::string_view s)
{
    struct Entity {
        std::string_view name;
        std::string_view text;
    };
    static constexpr Entity kEntities[] = {{"&lt;", "<"},   {"&gt;", ">"},     {"&amp;", "&"},
                                           {"&quot;", "\""}, {"&#39;", "'"},   {"&apos;", "'"},
                                           {"&nbsp;", " "}, {"&#160;", " "},  {"&#8203;", ""}};
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        bool hit = false;
        if (s[i] == '&') {
            for (const auto& e : kEntities) {
                if (s.substr(i, e.name.size()) == e.name) {
                    out += e.text;
                    i += e.name.size();
                    hit = true;
                    break;
                }
            }
        }
        if (!hit) out += s[i++];
    }
    return out;
}

inline std::string collapse_ws(std::string_view s)
{
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
        } else {
            if (space) out += ' ';
            space = false;
            out += c;
        }
    }
    return out;
}

inline std::string strip_tags(std::string_view s)
{
    std::string out;
    bool in_tag = false;
    for (char c : s) {
        if (c == '<') {
            in_tag = true;
        } else if (c == '>' && in_tag) {
            in_tag = false;
        } else if (!in_tag) {
            out += c;
        }
    }
    return out;
}

/// Plain text of an HTML fragment.
inline std::string text_of(std::string_view html) { return collapse_ws(decode_entities(strip_tags(html))); }

/// Type text with linked names qualified by their package.
inline std::string type_text(std::string_view html)
{
    static const std::regex link(
        R"re(<a\b[^>]*\btitle="(?:class|interface|enum|annotation(?: interface)?|record) in ([\w.]+)"[^>]*>\s*([\w.$]+)\s*</a>)re");
    std::string qualified = std::regex_replace(std::string(html), link, "$1.$2");
    std::string text = text_of(qualified);
    // "Map.Entry< K, V >" -> "Map.Entry<K,V>"
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == ' ') {
            char prev = out.empty() ? ' ' : out.back();
            char next = i + 1 < text.size() ? text[i + 1] : ' ';
            if (prev == '<' || prev == ',' || next == '<' || next == '>' || next == ',' || next == '.') continue;
        }
        out += c;
    }
    return out;
}

/// Content between the first `open` at or after `from` and its `close`.
inline std::optional<std::string_view> between(std::string_view s, std::string_view open, std::string_view close,
                                               std::size_t from = 0, std::size_t* end_pos = nullptr)
{
    auto b = s.find(open, from);
    if (b == std::string_view::npos) return std::nullopt;
    b += open.size();
    auto e = s.find(close, b);
    if (e == std::string_view::npos) return std::nullopt;
    if (end_pos) *end_pos = e + close.size();
    return s.substr(b, e - b);
}

/// Inner HTML of the element whose start tag contains `marker`.
inline std::optional<std::string_view> element_with(std::string_view s, std::string_view marker,
                                                    std::string_view tag)
{
    auto m = s.find(marker);
    if (m == std::string_view::npos) return std::nullopt;
    auto gt = s.find('>', m);
    if (gt == std::string_view::npos) return std::nullopt;
    std::string close = "</" + std::string(tag) + ">";
    auto e = s.find(close, gt);
    if (e == std::string_view::npos) return std::nullopt;
    return s.substr(gt + 1, e - gt - 1);
}

// Splits on commas outside angle brackets.
inline std::vector<std::string> split_top_level(std::string_view s)
{
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '<') ++depth;
        if (c == '>') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(std::string(trim(cur)));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(std::string(trim(cur)));
    return out;
}

inline std::string strip_modifiers(std::string t)
{
    static constexpr std::string_view kMods[] = {"public", "protected", "private", "static", "abstract",
                                                 "final", "default", "synchronized", "native", "strictfp"};
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto m : kMods) {
            // type_text glues a following "<T>" onto the modifier.
            if (t.starts_with(m) && t.size() > m.size() && (t[m.size()] == ' ' || t[m.size()] == '<')) {
                t = std::string(trim(std::string_view(t).substr(m.size())));
                changed = true;
            }
        }
        // Leading method type parameters, e.g. "<T> T".
        if (!t.empty() && t.front() == '<') {
            int depth = 0;
            std::size_t k = 0;
            for (; k < t.size(); ++k) {
                if (t[k] == '<') ++depth;
                if (t[k] == '>' && --depth == 0) break;
            }
            if (k < t.size()) {
                t = std::string(trim(std::string_view(t).substr(k + 1)));
                changed = true;
            }
        }
    }
    return std::string(trim(t));
}

struct RowResult {
    std::optional<MethodDoc> method;
    std::string problem;
};

inline RowResult parse_row(std::string_view row, const std::string& class_name)
{
    RowResult r;
    auto first = element_with(row, "class=\"colFirst\"", "td");
    auto second = element_with(row, "class=\"colSecond\"", "th");
    if (!second) second = element_with(row, "class=\"colSecond\"", "td");
    if (!first || !second) {
        r.problem = "row without return type or signature cell";
        return r;
    }
    std::string ret = strip_modifiers(type_text(*first));
    auto name_html = element_with(*second, "class=\"memberNameLink\"", "span");
    std::string name = name_html ? text_of(*name_html) : std::string();
    if (ret.empty() || name.empty()) {
        r.problem = "row without return type or method name";
        return r;
    }
    std::string sig = type_text(*second);
    auto open = sig.find('(', sig.find(name));
    auto close = sig.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        r.problem = name + ": unbalanced parameter list";
        return r;
    }
    MethodDoc m;
    m.id.class_name = class_name;
    m.id.method_name = name;
    m.declared_in = class_name;
    for (const auto& p : split_top_level(std::string_view(sig).substr(open + 1, close - open - 1))) {
        auto sp = p.rfind(' ');
        if (sp == std::string::npos) {
            r.problem = name + ": parameter '" + p + "' has no name";
            return r;
        }
        std::string type(trim(std::string_view(p).substr(0, sp)));
        // Drop parameter annotations.
        while (!type.empty() && type.front() == '@') {
            auto s = type.find(' ');
            type = s == std::string::npos ? std::string() : std::string(trim(std::string_view(type).substr(s)));
        }
        if (type.empty()) {
            r.problem = name + ": parameter '" + p + "' has no type";
            return r;
        }
        m.id.param_types.emplace_back(type);
        m.param_names.push_back(p.substr(sp + 1));
    }
    m.return_type = TypeName(ret);
    if (auto last = element_with(row, "class=\"colLast\"", "td")) {
        m.deprecated = last->find("deprecatedLabel") != std::string_view::npos;
        if (auto block = element_with(*last, "class=\"block\"", "div")) m.description = text_of(*block);
    }
    r.method = std::move(m);
    return r;
}

struct PageResult {
    std::optional<ClassDoc> cls;
    std::vector<std::string> problems;
};

inline PageResult parse_page(std::string_view html, const std::string& file)
{
    PageResult out;
    static const std::regex title_re(R"re(class="title"[^>]*>\s*(Class|Interface|Enum)\s+([\w.$]+))re");
    std::cmatch tm;
    auto head_end = html.find("</h1>");
    if (head_end == std::string_view::npos) head_end = html.find("</h2>");
    std::string_view head = html.substr(0, head_end == std::string_view::npos ? html.size() : head_end + 5);
    if (!std::regex_search(head.data(), head.data() + head.size(), tm, title_re)) {
        out.problems.push_back(file + ": no class title, page skipped");
        return out;
    }
    const bool is_interface = tm[1].str() == "Interface";
    std::string simple = tm[2].str();
    std::string package;
    if (auto sub = element_with(head, "class=\"subTitle\"", "div")) {
        std::string t = text_of(*sub);
        if (t.starts_with("Package ")) t.erase(0, 8);
        package = std::string(trim(t));
    }
    ClassDoc cls;
    cls.name = package.empty() ? simple : package + "." + simple;

    // Declaration: "public class Stack<E> extends java.util.Vector<E> implements ..."
    if (auto pos = html.find("typeNameLabel"); pos != std::string_view::npos) {
        auto pre_start = html.rfind("<pre", pos);
        auto pre_end = html.find("</pre>", pos);
        if (pre_start != std::string_view::npos && pre_end != std::string_view::npos) {
            std::string decl = type_text(html.substr(pre_start, pre_end - pre_start));
            auto supers = [&](std::string_view kw) {
                std::vector<std::string> names;
                auto k = decl.find(kw);
                if (k == std::string::npos) return names;
                std::string_view rest = std::string_view(decl).substr(k + kw.size());
                if (auto impl = rest.find(" implements "); impl != std::string_view::npos) rest = rest.substr(0, impl);
                for (auto& n : split_top_level(rest)) names.push_back(TypeName::erase(n));
                return names;
            };
            for (auto& s : supers(" extends ")) cls.superclasses.push_back(s);
            for (auto& s : supers(" implements ")) cls.superclasses.push_back(s);
        }
    }
    if (cls.superclasses.empty() && !is_interface && cls.name != "java.lang.Object") {
        cls.superclasses.push_back("java.lang.Object");
    }

    // Method summary table.
    auto anchor = html.find("id=\"method.summary\"");
    if (anchor == std::string_view::npos) anchor = html.find("name=\"method.summary\"");
    if (anchor == std::string_view::npos) anchor = html.find(">Method Summary<");
    std::size_t tbl_end = 0;
    std::optional<std::string_view> table;
    if (anchor != std::string_view::npos) table = between(html, "<table", "</table>", anchor, &tbl_end);
    if (!table) {
        out.problems.push_back(file + ": " + cls.name + " has no method table, class skipped");
        return out;
    }
    std::size_t pos = 0;
    while (true) {
        std::size_t end = 0;
        auto row = between(*table, "<tr", "</tr>", pos, &end);
        if (!row) break;
        pos = end;
        // Header rows carry only <th scope="col"> cells.
        if (row->find("<td") == std::string_view::npos) continue;
        auto r = parse_row(*row, cls.name);
        if (r.method) {
            cls.methods.push_back(std::move(*r.method));
        } else {
            out.problems.push_back(file + ": " + cls.name + ": skipped method row (" + r.problem + ")");
        }
    }
    out.cls = std::move(cls);
    return out;
}

}  // namespace javadoc

/// Reads every class page below `dir` (sorted by path). Pages whose file name
/// contains '-' (package-summary, overview-tree, ...) are not class pages.
inline JavadocIngest ingest_javadoc_html(const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("cannot read directory " + dir.string());
    std::vector<fs::path> pages;
    for (fs::recursive_directory_iterator it(dir, ec), end; it != end; it.increment(ec)) {
        if (ec) throw IoError("cannot read directory " + dir.string() + ": " + ec.message());
        const auto& p = it->path();
        if (it->is_regular_file() && p.extension() == ".html" && p.filename().string().find('-') == std::string::npos) {
            pages.push_back(p);
        }
    }
    std::sort(pages.begin(), pages.end());

    JavadocIngest result;
    std::vector<ClassDoc> classes;
    for (const auto& p : pages) {
        auto page = javadoc::parse_page(read_text_file(p.string()), p.filename().string());
        for (auto& msg : page.problems) result.messages.push_back(std::move(msg));
        if (!page.cls) continue;
        bool dup = std::any_of(classes.begin(), classes.end(), [&](const ClassDoc& c) { return c.name == page.cls->name; });
        if (dup) {
            result.messages.push_back(p.filename().string() + ": duplicate class " + page.cls->name + ", page skipped");
            continue;
        }
        classes.push_back(std::move(*page.cls));
    }
    result.warnings = result.messages.size();
    result.model = DocumentationModel(std::move(classes));
    return result;
}

}  // namespace specinfer
