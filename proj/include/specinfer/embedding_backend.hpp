#pragma once

// Similarity backend that embeds texts through the embedding service
// (POST /v1/embed, GET /health) and scores by cosine similarity of the
// returned vectors. Vectors are cached per text for the lifetime of the
// backend.

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "specinfer/error.hpp"
#include "specinfer/memop.hpp"

namespace specinfer {

struct EmbedHealth {
    std::string status;
    std::string model;
    int dim = 0;
};

class EmbeddingBackend final : public SimilarityBackend {
public:
    static constexpr std::size_t kMaxBatch = 256;
    static constexpr std::size_t kMaxTextLength = 2048;

    explicit EmbeddingBackend(std::string base_url, std::size_t batch_size = 64, int timeout_sec = 60)
        : base_url_(std::move(base_url)), batch_size_(std::clamp<std::size_t>(batch_size, 1, kMaxBatch)),
          timeout_sec_(timeout_sec)
    {
    }

    /// GET /health. Throws TransportError when unreachable or not ready.
    EmbedHealth health()
    {
        auto cli = client();
        auto res = cli.Get("/health");
        if (!res) throw TransportError("embedding service unreachable at " + base_url_);
        if (res->status != 200) {
            throw TransportError("embedding service not ready (HTTP " + std::to_string(res->status) + ")");
        }
        try {
            auto j = nlohmann::json::parse(res->body);
            EmbedHealth h{j.at("status").get<std::string>(), j.at("model").get<std::string>(), j.at("dim").get<int>()};
            return h;
        } catch (const nlohmann::json::exception& e) {
            throw TransportError(std::string("malformed /health response: ") + e.what());
        }
    }

    std::string model_id() override
    {
        std::lock_guard lock(mutex_);
        if (!model_) {
            auto h = health();
            model_ = h.model;
        }
        return "embed:" + *model_;
    }

    double score(std::string_view sentence, std::string_view descriptor) override
    {
        std::vector<std::string> texts{std::string(sentence.substr(0, kMaxTextLength)),
                                       std::string(descriptor.substr(0, kMaxTextLength))};
        fetch_missing(texts);
        std::lock_guard lock(mutex_);
        return cosine(vectors_.at(texts[0]), vectors_.at(texts[1]));
    }

    void prefetch(std::span<const std::string> texts) override
    {
        fetch_missing(std::vector<std::string>(texts.begin(), texts.end()));
    }

    std::size_t requests_sent() const
    {
        std::lock_guard lock(mutex_);
        return requests_;
    }

    /// POST /v1/embed for one batch; returns vectors in request order.
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts)
    {
        if (texts.empty()) return {};
        nlohmann::json req{{"texts", texts}, {"normalize", true}};
        auto cli = client();
        auto res = cli.Post("/v1/embed", req.dump(), "application/json");
        if (!res) throw TransportError("embedding service unreachable at " + base_url_);
        if (res->status != 200) {
            throw TransportError("embedding request failed (HTTP " + std::to_string(res->status) + "): " + res->body);
        }
        std::vector<std::vector<double>> out;
        try {
            auto j = nlohmann::json::parse(res->body);
            std::string model = j.at("model").get<std::string>();
            int dim = j.at("dim").get<int>();
            for (const auto& v : j.at("vectors")) {
                out.push_back(v.get<std::vector<double>>());
                if (static_cast<int>(out.back().size()) != dim) {
                    throw TransportError("embedding vector length differs from dim");
                }
            }
            std::lock_guard lock(mutex_);
            if (!model_) model_ = model;
            ++requests_;
        } catch (const nlohmann::json::exception& e) {
            throw TransportError(std::string("malformed /v1/embed response: ") + e.what());
        }
        if (out.size() != texts.size()) throw TransportError("embedding response has wrong vector count");
        return out;
    }

private:
    httplib::Client client() const
    {
        httplib::Client cli(base_url_);
        cli.set_connection_timeout(timeout_sec_, 0);
        cli.set_read_timeout(timeout_sec_, 0);
        return cli;
    }

    void fetch_missing(std::vector<std::string> texts)
    {
        std::vector<std::string> missing;
        {
            std::lock_guard lock(mutex_);
            for (auto& t : texts) {
                if (t.size() > kMaxTextLength) t.resize(kMaxTextLength);
                if (!vectors_.count(t) &&
                    std::find(missing.begin(), missing.end(), t) == missing.end()) {
                    missing.push_back(t);
                }
            }
        }
        for (std::size_t b = 0; b < missing.size(); b += batch_size_) {
            std::vector<std::string> batch(missing.begin() + static_cast<std::ptrdiff_t>(b),
                                           missing.begin() + static_cast<std::ptrdiff_t>(std::min(missing.size(), b + batch_size_)));
            auto vecs = embed(batch);
            std::lock_guard lock(mutex_);
            for (std::size_t i = 0; i < batch.size(); ++i) vectors_.emplace(batch[i], std::move(vecs[i]));
        }
    }

    std::string base_url_;
    std::size_t batch_size_;
    int timeout_sec_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::vector<double>> vectors_;
    std::optional<std::string> model_;
    std::size_t requests_ = 0;
};

}  // namespace specinfer
