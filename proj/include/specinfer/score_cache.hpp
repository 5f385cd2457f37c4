#pragma once

// On-disk score cache shared across runs. One JSON file per entry, named by a
// content hash of (model id, sentence, descriptor); the file repeats the key
// so hash collisions read as misses.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>
#include <string>

#include <json.hpp>

#include "specinfer/error.hpp"
#include "specinfer/memop.hpp"

namespace specinfer {

class PersistentScoreCache final : public SimilarityBackend {
public:
    PersistentScoreCache(std::shared_ptr<SimilarityBackend> inner, std::filesystem::path dir)
        : inner_(std::move(inner)), dir_(std::move(dir))
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_)) {
            throw IoError("cannot create cache directory " + dir_.string());
        }
    }

    double score(std::string_view sentence, std::string_view descriptor) override
    {
        const std::string model = inner_->model_id();
        const auto path = entry_path(model, sentence, descriptor);
        if (auto cached = read_entry(path, model, sentence, descriptor)) {
            hits_.fetch_add(1, std::memory_order_relaxed);
            return *cached;
        }
        double s = inner_->score(sentence, descriptor);
        write_entry(path, model, sentence, descriptor, s);
        return s;
    }

    std::string model_id() override { return inner_->model_id(); }
    void prefetch(std::span<const std::string> texts) override { inner_->prefetch(texts); }

    std::size_t disk_hits() const { return hits_.load(std::memory_order_relaxed); }

    std::filesystem::path entry_path(const std::string& model, std::string_view sentence,
                                     std::string_view descriptor) const
    {
        std::uint64_t h = fnv1a64(model);
        h = fnv1a64(std::string_view("\x1f", 1), h);
        h = fnv1a64(sentence, h);
        h = fnv1a64(std::string_view("\x1f", 1), h);
        h = fnv1a64(descriptor, h);
        return dir_ / (hex64(h) + ".score.json");
    }

private:
    static std::optional<double> read_entry(const std::filesystem::path& path, const std::string& model,
                                            std::string_view sentence, std::string_view descriptor)
    {
        std::ifstream in(path);
        if (!in) return std::nullopt;
        try {
            auto j = nlohmann::json::parse(in);
            if (j.at("model") == model && j.at("sentence") == sentence && j.at("descriptor") == descriptor) {
                return j.at("score").get<double>();
            }
        } catch (const nlohmann::json::exception&) {
        }
        return std::nullopt;
    }

    static void write_entry(const std::filesystem::path& path, const std::string& model, std::string_view sentence,
                            std::string_view descriptor, double score)
    {
        nlohmann::ordered_json j;
        j["model"] = model;
        j["sentence"] = sentence;
        j["descriptor"] = descriptor;
        j["score"] = score;
        auto tmp = path;
        tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw IoError("cannot write cache entry " + tmp.string());
            out << j.dump() << "\n";
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        if (ec) throw IoError("cannot commit cache entry " + path.string());
    }

    std::shared_ptr<SimilarityBackend> inner_;
    std::filesystem::path dir_;
    std::atomic<std::size_t> hits_{0};
};

/// Removes every cache entry in `dir`; returns the number removed. A missing
/// directory counts as an empty cache.
inline std::size_t clear_score_cache(const std::filesystem::path& dir)
{
    std::error_code ec;
    if (!std::filesystem::exists(dir, ec)) return 0;
    if (!std::filesystem::is_directory(dir, ec)) throw IoError(dir.string() + " is not a directory");
    std::size_t removed = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.ends_with(".score.json")) {
            std::filesystem::remove(entry.path());
            ++removed;
        }
    }
    return removed;
}

}  // namespace specinfer
