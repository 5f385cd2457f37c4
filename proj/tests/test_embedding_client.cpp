#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "specinfer/embedding_backend.hpp"
#include "test_support.hpp"

using namespace specinfer;

namespace {

// Embeds a text as keyword indicators over four axes, so the four
// operation descriptors land on distinct directions.
std::vector<double> fake_vector(const std::string& text)
{
    auto has = [&](const char* w) { return text.find(w) != std::string::npos ? 1.0 : 0.0; };
    std::vector<double> v{has("Insert") + has("Add") + 0.1, has("Remove") + 0.1, has("Get") + 0.1, has("Set") + 0.1};
    double n = 0;
    for (double x : v) n += x * x;
    for (double& x : v) x /= std::sqrt(n);
    return v;
}

class FakeEmbedServer {
public:
    std::atomic<int> embed_requests{0};
    std::atomic<int> max_batch{0};
    std::atomic<bool> loading{false};
    std::atomic<bool> short_response{false};
    std::atomic<std::size_t> longest_text{0};

    FakeEmbedServer()
    {
        server_.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
            if (loading) {
                res.status = 503;
                return;
            }
            res.set_content(R"({"status":"ok","model":"fake-embed","dim":4})", "application/json");
        });
        server_.Post("/v1/embed", [this](const httplib::Request& req, httplib::Response& res) {
            if (loading) {
                res.status = 503;
                return;
            }
            auto j = nlohmann::json::parse(req.body, nullptr, false);
            if (j.is_discarded() || !j.contains("texts") || !j["texts"].is_array() || j.value("normalize", false) != true) {
                res.status = 400;
                return;
            }
            if (j["texts"].size() > 256) {
                res.status = 413;
                return;
            }
            ++embed_requests;
            int n = static_cast<int>(j["texts"].size());
            if (n > max_batch) max_batch = n;
            nlohmann::json out{{"model", "fake-embed"}, {"dim", 4}, {"vectors", nlohmann::json::array()}};
            for (const auto& t : j["texts"]) {
                auto s = t.get<std::string>();
                if (s.size() > longest_text) longest_text = s.size();
                out["vectors"].push_back(fake_vector(s));
            }
            if (short_response) out["vectors"].erase(0);
            res.set_content(out.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~FakeEmbedServer()
    {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST(EmbeddingClient, HealthAndModelId)
{
    FakeEmbedServer srv;
    EmbeddingBackend b(srv.url());
    auto h = b.health();
    EXPECT_EQ(h.status, "ok");
    EXPECT_EQ(h.model, "fake-embed");
    EXPECT_EQ(h.dim, 4);
    EXPECT_EQ(b.model_id(), "embed:fake-embed");
}

TEST(EmbeddingClient, ScoreIsCosineOfServiceVectors)
{
    FakeEmbedServer srv;
    EmbeddingBackend b(srv.url());
    std::string s = "Removes the object at the top of this stack";
    std::string d = "Removes something from a collection.";
    EXPECT_NEAR(b.score(s, d), cosine(fake_vector(s), fake_vector(d)), 1e-12);
    EXPECT_NEAR(b.score(d, d), 1.0, 1e-9);
    int after = srv.embed_requests;
    b.score(s, d);  // vectors cached
    EXPECT_EQ(srv.embed_requests.load(), after);
}

TEST(EmbeddingClient, BatchesPrefetch)
{
    FakeEmbedServer srv;
    EmbeddingBackend b(srv.url(), 2);
    std::vector<std::string> texts{"a", "b", "c", "d", "e", "a"};
    b.prefetch(texts);
    EXPECT_EQ(srv.embed_requests.load(), 3);
    EXPECT_EQ(srv.max_batch.load(), 2);
    EXPECT_EQ(b.requests_sent(), 3u);
}

TEST(EmbeddingClient, TruncatesLongTexts)
{
    FakeEmbedServer srv;
    EmbeddingBackend b(srv.url());
    std::string long_text(5000, 'x');
    b.score(long_text, "Gets value of something.");
    EXPECT_EQ(srv.longest_text.load(), EmbeddingBackend::kMaxTextLength);
    int after = srv.embed_requests;
    b.score(long_text, "Gets value of something.");
    EXPECT_EQ(srv.embed_requests.load(), after);
}

TEST(EmbeddingClient, ClassifiesThroughPipeline)
{
    FakeEmbedServer srv;
    auto b = std::make_shared<EmbeddingBackend>(srv.url());
    ClassifierConfig cfg;
    cfg.backend = BackendKind::embedding;
    MemopAbstractor a(b, cfg, std::make_shared<RuleClauseAnalyzer>(TagLexicon::bundled()));
    auto c = a.classify("Removes the object at the top of this stack.");
    ASSERT_TRUE(c.op.has_value());
    EXPECT_EQ(*c.op, MemoryOp::D);
    EXPECT_EQ(a.abstract("Gets the value and removes the entry.").letters(), (std::vector<std::string>{"D", "R"}));
}

TEST(EmbeddingClient, ServiceErrorsAreTransportErrors)
{
    FakeEmbedServer srv;
    srv.loading = true;
    EmbeddingBackend b(srv.url());
    EXPECT_THROW(b.health(), TransportError);
    EXPECT_THROW(b.score("x", "y"), TransportError);
    srv.loading = false;
    srv.short_response = true;
    EXPECT_THROW(b.score("x", "y"), TransportError);
}

TEST(EmbeddingClient, UnreachableServiceIsTransportError)
{
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    EmbeddingBackend b("http://127.0.0.1:" + std::to_string(port), 64, 1);
    EXPECT_THROW(b.health(), TransportError);
    EXPECT_THROW(b.embed({"x"}), TransportError);
}

TEST(EmbeddingClient, PairErrorsMakeInferencePartial)
{
    FakeEmbedServer srv;
    srv.loading = true;
    auto b = std::make_shared<EmbeddingBackend>(srv.url());
    InferenceContext ctx(testsupport::intent_stack(), TagLexicon::bundled(), b);
    auto r = infer_classes(ctx, {"android.content.Intent"});
    EXPECT_FALSE(r.ok());
    EXPECT_FALSE(r.errors.empty());
    // Type-pruned pairs still produce verdicts.
    EXPECT_GT(r.stats.pairs_pruned_type, 0u);
}
