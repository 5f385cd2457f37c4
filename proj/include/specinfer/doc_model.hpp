#pragma once

// Documentation model: class hierarchy, type signatures, parameter/API names
// and API descriptions of a library, plus the canonical JSON file format.

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "specinfer/error.hpp"

namespace specinfer {

class TypeName {
public:
    TypeName() = default;

    explicit TypeName(std::string raw) : raw_(std::move(raw))
    {
        if (raw_.empty()) {
            throw ParseError("empty type name");
        }
        erased_ = erase(raw_);
    }

    // Drops every angle-bracket segment: "java.util.Map<K,V>[]" -> "java.util.Map[]".
    static std::string erase(std::string_view raw)
    {
        std::string out;
        int depth = 0;
        for (char c : raw) {
            if (c == '<') {
                ++depth;
            } else if (c == '>') {
                if (depth > 0) --depth;
            } else if (depth == 0) {
                out.push_back(c);
            }
        }
        auto first = out.find_first_not_of(' ');
        auto last = out.find_last_not_of(' ');
        return first == std::string::npos ? std::string{} : out.substr(first, last - first + 1);
    }

    const std::string& raw() const { return raw_; }
    const std::string& erased() const { return erased_; }
    bool is_void() const { return erased_ == "void"; }

    friend bool operator==(const TypeName&, const TypeName&) = default;

private:
    std::string raw_;
    std::string erased_;
};

struct MethodId {
    std::string class_name;
    std::string method_name;
    std::vector<TypeName> param_types;

    // "name(type,type)" using the raw parameter types.
    std::string signature() const
    {
        std::string s = method_name + "(";
        for (std::size_t i = 0; i < param_types.size(); ++i) {
            if (i) s += ",";
            s += param_types[i].raw();
        }
        return s + ")";
    }

    std::size_t arity() const { return param_types.size(); }

    friend bool operator==(const MethodId&, const MethodId&) = default;
};

struct MethodDoc {
    MethodId id;
    TypeName return_type;
    std::vector<std::string> param_names;
    std::string description;
    bool deprecated = false;
    std::string declared_in;

    std::size_t arity() const { return id.param_types.size(); }

    friend bool operator==(const MethodDoc&, const MethodDoc&) = default;
};

struct ClassDoc {
    std::string name;
    std::vector<std::string> superclasses;
    std::vector<MethodDoc> methods;

    friend bool operator==(const ClassDoc&, const ClassDoc&) = default;
};

/// Immutable after construction; concurrent readers need no locking.
class DocumentationModel {
public:
    DocumentationModel() = default;

    /// Validates and indexes the classes. Throws ParseError on structural
    /// problems (duplicate class, arity mismatch) and ValidationError when
    /// the hierarchy contains a cycle.
    explicit DocumentationModel(std::vector<ClassDoc> classes)
    {
        for (auto& cls : classes) {
            if (cls.name.empty()) {
                throw ParseError("class with empty name");
            }
            for (auto& m : cls.methods) {
                if (m.id.method_name.empty()) {
                    throw ParseError("class " + cls.name + ": method with empty name");
                }
                if (m.param_names.size() != m.id.param_types.size()) {
                    throw ParseError("class " + cls.name + ", method " + m.id.method_name +
                                     ": parameter names and types differ in length");
                }
                m.id.class_name = cls.name;
                if (m.declared_in.empty()) m.declared_in = cls.name;
            }
            std::string name = cls.name;
            if (!classes_.emplace(name, std::move(cls)).second) {
                throw ParseError("duplicate class " + name);
            }
        }
        check_acyclic();
    }

    bool empty() const { return classes_.empty(); }
    std::size_t size() const { return classes_.size(); }
    const std::map<std::string, ClassDoc, std::less<>>& classes() const { return classes_; }

    /// Class names in ascending order.
    std::vector<std::string> class_names() const
    {
        std::vector<std::string> out;
        out.reserve(classes_.size());
        for (const auto& [name, cls] : classes_) out.push_back(name);
        return out;
    }

    const ClassDoc* find(std::string_view name) const
    {
        auto it = classes_.find(name);
        return it == classes_.end() ? nullptr : &it->second;
    }

    const ClassDoc& at(std::string_view name) const
    {
        if (const auto* cls = find(name)) return *cls;
        throw LookupError("unknown class " + std::string(name));
    }

    /// Transitive superclasses of an (erased) class name in breadth-first
    /// order. Superclasses missing from the model are included as opaque
    /// names but not expanded further.
    std::vector<std::string> ancestors(std::string_view name) const
    {
        std::vector<std::string> out;
        std::unordered_set<std::string> seen{std::string(name)};
        std::deque<std::string> work{std::string(name)};
        while (!work.empty()) {
            std::string cur = std::move(work.front());
            work.pop_front();
            const ClassDoc* cls = find(cur);
            if (!cls) continue;
            for (const auto& super : cls->superclasses) {
                std::string erased = TypeName::erase(super);
                if (seen.insert(erased).second) {
                    out.push_back(erased);
                    work.push_back(erased);
                }
            }
        }
        return out;
    }

    bool is_subclass_of(std::string_view sub, std::string_view super) const
    {
        auto anc = ancestors(sub);
        return std::find(anc.begin(), anc.end(), super) != anc.end();
    }

    friend bool operator==(const DocumentationModel&, const DocumentationModel&) = default;

private:
    void check_acyclic() const
    {
        enum class Mark { fresh, active, done };
        std::map<std::string, Mark, std::less<>> marks;
        auto visit = [&](auto&& self, const std::string& name) -> void {
            auto& mark = marks[name];
            if (mark == Mark::done) return;
            if (mark == Mark::active) {
                throw ValidationError("class hierarchy cycle through " + name);
            }
            mark = Mark::active;
            if (const ClassDoc* cls = find(name)) {
                for (const auto& super : cls->superclasses) {
                    self(self, TypeName::erase(super));
                }
            }
            marks[name] = Mark::done;
        };
        for (const auto& [name, cls] : classes_) {
            visit(visit, name);
        }
    }

    std::map<std::string, ClassDoc, std::less<>> classes_;
};

// ---------------------------------------------------------------------------
// Type consistency

struct TypeOptions {
    // Treat primitives and their wrapper classes as the same type.
    bool box_primitives = false;
};

inline std::string_view boxed_name(std::string_view primitive)
{
    static const std::map<std::string_view, std::string_view> table{
        {"boolean", "java.lang.Boolean"}, {"byte", "java.lang.Byte"},
        {"char", "java.lang.Character"},  {"short", "java.lang.Short"},
        {"int", "java.lang.Integer"},     {"long", "java.lang.Long"},
        {"float", "java.lang.Float"},     {"double", "java.lang.Double"},
    };
    auto it = table.find(primitive);
    return it == table.end() ? primitive : it->second;
}

/// Two API values may alias when their types are equal (raw, then erased) or
/// one is a transitive superclass of the other. void aliases nothing.
inline bool type_consistent(const DocumentationModel& model, const TypeName& a, const TypeName& b,
                            const TypeOptions& opts = {})
{
    if (a.is_void() || b.is_void()) return false;
    if (a.raw() == b.raw()) return true;
    std::string ea = a.erased();
    std::string eb = b.erased();
    if (opts.box_primitives) {
        ea = std::string(boxed_name(ea));
        eb = std::string(boxed_name(eb));
    }
    if (ea == eb) return true;
    return model.is_subclass_of(ea, eb) || model.is_subclass_of(eb, ea);
}

/// Methods available on `class_name`: its own plus those inherited from
/// superclasses present in the model, re-keyed to `class_name`. Nearer
/// declarations shadow farther ones with the same signature; deprecated
/// methods are dropped.
inline std::vector<MethodDoc> resolve_universe(const DocumentationModel& model, std::string_view class_name)
{
    const ClassDoc& root = model.at(class_name);
    std::vector<const ClassDoc*> order{&root};
    for (const auto& anc : model.ancestors(class_name)) {
        if (const auto* cls = model.find(anc)) order.push_back(cls);
    }

    std::vector<MethodDoc> out;
    std::set<std::string> seen;
    for (const ClassDoc* cls : order) {
        for (const auto& m : cls->methods) {
            std::string sig = m.id.signature();
            if (!seen.insert(sig).second) continue;
            if (m.deprecated) continue;
            MethodDoc copy = m;
            copy.id.class_name = root.name;
            out.push_back(std::move(copy));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Canonical JSON format

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing \"" + key + "\"");
    }
    return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key, const std::string& where)
{
    const auto& v = require(obj, key, where);
    if (!v.is_string()) throw ParseError(where + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

}  // namespace detail

inline DocumentationModel parse_canonical(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw ParseError("documentation root must be an object");
    const auto& classes = detail::require(doc, "classes", "documentation");
    if (!classes.is_array()) throw ParseError("\"classes\" must be an array");

    std::vector<ClassDoc> out;
    for (const auto& c : classes) {
        if (!c.is_object()) throw ParseError("class entry must be an object");
        ClassDoc cls;
        cls.name = detail::require_string(c, "name", "class");
        std::string where = "class " + cls.name;
        const auto& supers = detail::require(c, "superclasses", where);
        if (!supers.is_array()) throw ParseError(where + ": \"superclasses\" must be an array");
        for (const auto& s : supers) {
            if (!s.is_string()) throw ParseError(where + ": superclass must be a string");
            cls.superclasses.push_back(s.get<std::string>());
        }
        const auto& methods = detail::require(c, "methods", where);
        if (!methods.is_array()) throw ParseError(where + ": \"methods\" must be an array");
        for (const auto& m : methods) {
            if (!m.is_object()) throw ParseError(where + ": method entry must be an object");
            MethodDoc md;
            md.id.class_name = cls.name;
            md.id.method_name = detail::require_string(m, "name", where);
            std::string mwhere = where + ", method " + md.id.method_name;
            try {
                md.return_type = TypeName(detail::require_string(m, "returnType", mwhere));
                const auto& dep = detail::require(m, "deprecated", mwhere);
                if (!dep.is_boolean()) throw ParseError(mwhere + ": \"deprecated\" must be a boolean");
                md.deprecated = dep.get<bool>();
                const auto& params = detail::require(m, "params", mwhere);
                if (!params.is_array()) throw ParseError(mwhere + ": \"params\" must be an array");
                for (const auto& p : params) {
                    if (!p.is_object()) throw ParseError(mwhere + ": parameter must be an object");
                    md.param_names.push_back(detail::require_string(p, "name", mwhere));
                    md.id.param_types.emplace_back(detail::require_string(p, "type", mwhere));
                }
                md.description = detail::require_string(m, "description", mwhere);
            } catch (const ParseError& e) {
                std::string msg = e.what();
                if (msg.rfind(mwhere, 0) == 0) throw;
                throw ParseError(mwhere + ": " + msg);
            }
            md.declared_in = cls.name;
            cls.methods.push_back(std::move(md));
        }
        out.push_back(std::move(cls));
    }
    return DocumentationModel(std::move(out));
}

inline nlohmann::ordered_json to_canonical_json(const DocumentationModel& model)
{
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (const auto& [name, cls] : model.classes()) {
        nlohmann::ordered_json c;
        c["name"] = cls.name;
        c["superclasses"] = cls.superclasses;
        nlohmann::ordered_json methods = nlohmann::ordered_json::array();
        for (const auto& m : cls.methods) {
            nlohmann::ordered_json jm;
            jm["name"] = m.id.method_name;
            jm["returnType"] = m.return_type.raw();
            jm["deprecated"] = m.deprecated;
            nlohmann::ordered_json params = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < m.arity(); ++i) {
                params.push_back({{"name", m.param_names[i]}, {"type", m.id.param_types[i].raw()}});
            }
            jm["params"] = std::move(params);
            jm["description"] = m.description;
            methods.push_back(std::move(jm));
        }
        c["methods"] = std::move(methods);
        classes.push_back(std::move(c));
    }
    nlohmann::ordered_json root;
    root["classes"] = std::move(classes);
    return root;
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

inline DocumentationModel parse_canonical_text(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed documentation JSON: ") + e.what());
    }
    return parse_canonical(doc);
}

inline DocumentationModel load_canonical(const std::string& path)
{
    return parse_canonical_text(read_text_file(path));
}

inline void save_canonical(const DocumentationModel& model, const std::string& path)
{
    write_text_file(path, to_canonical_json(model).dump(2) + "\n");
}

}  // namespace specinfer
