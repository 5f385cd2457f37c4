#include <gtest/gtest.h>

#include <atomic>
#include <map>
#include <thread>

#include "test_support.hpp"

using namespace specinfer;

namespace {

// Scores from a fixed (clause-prefix, op) table; counts every call.
class ScriptedBackend : public SimilarityBackend {
public:
    std::map<std::string, std::array<double, 4>> table;  // clause -> I,D,R,W
    std::atomic<int> calls{0};

    double score(std::string_view sentence, std::string_view descriptor) override
    {
        ++calls;
        auto op = OpDescriptorSet::defaults().op_of(descriptor);
        auto it = table.find(std::string(sentence));
        if (!op || it == table.end()) return 0.0;
        return it->second[static_cast<int>(*op)];
    }
    std::string model_id() override { return "scripted"; }
};

std::shared_ptr<LexiconBackend> lexicon_backend()
{
    return std::make_shared<LexiconBackend>(VerbOpTable::bundled(), TagLexicon::bundled());
}

MemopAbstractor abstractor(std::shared_ptr<SimilarityBackend> b, ClassifierConfig cfg = {})
{
    return MemopAbstractor(std::move(b), cfg, std::make_shared<RuleClauseAnalyzer>(TagLexicon::bundled()));
}

}  // namespace

TEST(MemoryOpSet, LettersInFixedOrder)
{
    MemoryOpSet s{MemoryOp::W, MemoryOp::R, MemoryOp::I};
    EXPECT_EQ(s.letters(), (std::vector<std::string>{"I", "R", "W"}));
    EXPECT_TRUE(s.contains(MemoryOp::R));
    EXPECT_FALSE(s.contains(MemoryOp::D));
    EXPECT_TRUE(MemoryOpSet{}.empty());
    EXPECT_EQ(parse_op("D"), MemoryOp::D);
    EXPECT_EQ(parse_op("x"), std::nullopt);
}

TEST(MemoryOpSet, StoreAndLoadSides)
{
    EXPECT_TRUE(store_side({MemoryOp::I}));
    EXPECT_TRUE(store_side({MemoryOp::I, MemoryOp::D}));
    EXPECT_TRUE(store_side({MemoryOp::W}));
    EXPECT_FALSE(store_side({MemoryOp::W, MemoryOp::D}));
    EXPECT_FALSE(store_side({MemoryOp::R}));
    EXPECT_FALSE(store_side({}));
    EXPECT_TRUE(load_side({MemoryOp::R, MemoryOp::D}));
    EXPECT_FALSE(load_side({MemoryOp::W}));
}

TEST(Descriptors, ExactTexts)
{
    auto d = OpDescriptorSet::defaults();
    EXPECT_EQ(d.at(MemoryOp::R), "Gets value of something.");
    EXPECT_EQ(d.at(MemoryOp::W), "Sets value of something.");
    EXPECT_EQ(d.at(MemoryOp::I), "Inserts something into a collection.");
    EXPECT_EQ(d.at(MemoryOp::D), "Removes something from a collection.");
}

TEST(Cosine, SelfAndSymmetry)
{
    std::vector<double> a{0.3, -1.2, 4.0}, b{1.0, 0.5, -0.25};
    EXPECT_NEAR(cosine(a, a), 1.0, 1e-6);
    EXPECT_DOUBLE_EQ(cosine(a, b), cosine(b, a));
    EXPECT_THROW(cosine(a, std::vector<double>{1.0}), Error);
}

TEST(Classify, LexiconBackendVerbs)
{
    auto b = lexicon_backend();
    ClassifierConfig cfg;
    auto op = [&](const char* s) { return classify_sentence(*b, cfg, s).op; };
    EXPECT_EQ(op("Removes the object at the top of this stack"), MemoryOp::D);
    EXPECT_EQ(op("Inserts the element."), MemoryOp::I);
    EXPECT_EQ(op("Gets the value."), MemoryOp::R);
    EXPECT_EQ(op("Sets the flag."), MemoryOp::W);
    EXPECT_EQ(op("Normalize a MIME data type."), std::nullopt);
}

TEST(Classify, TieBreakFollowsIDRW)
{
    auto b = std::make_shared<ScriptedBackend>();
    b->table["all"] = {0.5, 0.5, 0.5, 0.5};
    b->table["dr"] = {0.1, 0.6, 0.6, 0.6};
    ClassifierConfig cfg;
    EXPECT_EQ(classify_sentence(*b, cfg, "all").op, MemoryOp::I);
    EXPECT_EQ(classify_sentence(*b, cfg, "dr").op, MemoryOp::D);
}

TEST(Classify, NeverBelowThreshold)
{
    auto b = std::make_shared<ScriptedBackend>();
    b->table["low"] = {0.2, 0.3, 0.34, 0.1};
    b->table["edge"] = {0.35, 0.0, 0.0, 0.0};
    ClassifierConfig cfg;
    EXPECT_EQ(classify_sentence(*b, cfg, "low").op, std::nullopt);
    EXPECT_EQ(classify_sentence(*b, cfg, "edge").op, MemoryOp::I);
    for (double t : {0.0, 0.2, 0.5, 0.9}) {
        cfg.threshold = t;
        for (const auto& [clause, _] : b->table) {
            auto c = classify_sentence(*b, cfg, clause);
            if (c.op) {
                EXPECT_GE(c.score(*c.op), t);
            }
        }
    }
}

TEST(Config, RejectsThresholdOutsideUnitInterval)
{
    ClassifierConfig cfg;
    cfg.threshold = 1.5;
    EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(Abstract, IntentStackDescriptions)
{
    auto a = abstractor(lexicon_backend());
    auto ops = [&](const char* d) { return a.abstract(d).to_string(); };
    EXPECT_EQ(ops("Add extended data to the intent."), MemoryOpSet{MemoryOp::I}.to_string());
    EXPECT_EQ(ops("Set an identifier for this Intent."), MemoryOpSet{MemoryOp::W}.to_string());
    EXPECT_EQ(ops("Retrieve the identifier for this Intent."), MemoryOpSet{MemoryOp::R}.to_string());
    EXPECT_EQ(ops("Normalize a MIME data type."), MemoryOpSet{}.to_string());
    EXPECT_EQ(ops("Pushes an item onto the top of this stack."), MemoryOpSet{MemoryOp::I}.to_string());
    EXPECT_EQ(ops("Looks at the object at the top of this stack without removing it from the stack."),
              MemoryOpSet{MemoryOp::R}.to_string());
    EXPECT_EQ(ops("Removes the object at the top of this stack and returns that object as the value of this "
                  "function."),
              (MemoryOpSet{MemoryOp::D, MemoryOp::R}.to_string()));
}

TEST(Abstract, ComplexSentenceUsesIndependentClause)
{
    auto a = abstractor(lexicon_backend());
    EXPECT_EQ(a.abstract("Returns the value if the key was added.").letters(), (std::vector<std::string>{"R"}));
}

TEST(Abstract, SentenceScope)
{
    const char* d = "Returns the size. Removes nothing else.";
    EXPECT_EQ(abstractor(lexicon_backend()).abstract(d).letters(), (std::vector<std::string>{"R"}));
    ClassifierConfig all;
    all.sentence_scope = SentenceScope::all;
    EXPECT_EQ(abstractor(lexicon_backend(), all).abstract(d).letters(), (std::vector<std::string>{"D", "R"}));
}

TEST(Abstract, EmptyDescriptionIsEmptyWithoutBackendCalls)
{
    auto b = std::make_shared<ScriptedBackend>();
    auto a = abstractor(b);
    EXPECT_TRUE(a.abstract("").empty());
    EXPECT_TRUE(a.abstract("   ").empty());
    EXPECT_EQ(b->calls.load(), 0);
}

TEST(Abstract, InvariantUnderCompoundClauseOrder)
{
    auto a = abstractor(lexicon_backend());
    EXPECT_EQ(a.abstract("Removes the entry and returns the old value.").letters(),
              a.abstract("Returns the old value and removes the entry.").letters());
    EXPECT_EQ(a.abstract("Adds the item and sets the flag.").letters(),
              a.abstract("Sets the flag and adds the item.").letters());
}

TEST(Abstract, ResultWithinOperationAlphabet)
{
    auto a = abstractor(lexicon_backend());
    for (const auto& [name, cls] : testsupport::intent_stack().classes()) {
        for (const auto& m : cls.methods) {
            for (const auto& l : a.abstract(m.description).letters()) {
                EXPECT_TRUE(l == "I" || l == "D" || l == "R" || l == "W");
            }
        }
    }
}

TEST(Memoization, SharedDescriptionScoredOncePerDescriptor)
{
    auto b = std::make_shared<ScriptedBackend>();
    auto a = abstractor(b);
    const std::string desc = "Returns the element at the given position.";
    for (int n = 0; n < 25; ++n) a.abstract(desc);
    EXPECT_EQ(b->calls.load(), 4);
    EXPECT_EQ(a.backend_calls(), 4u);
    EXPECT_EQ(a.items_scored(), 1u);
}

TEST(Memoization, ConcurrentCallersScoreOnce)
{
    auto b = std::make_shared<ScriptedBackend>();
    auto a = abstractor(b);
    std::vector<std::jthread> pool;
    for (int t = 0; t < 8; ++t) {
        pool.emplace_back([&] {
            for (int n = 0; n < 50; ++n) a.abstract("Gets the value. Sets the value.");
        });
    }
    pool.clear();
    EXPECT_EQ(b->calls.load(), 4);
}

TEST(Memoization, DeterministicAcrossRuns)
{
    auto one = abstractor(lexicon_backend());
    auto two = abstractor(lexicon_backend());
    for (const auto& [name, cls] : testsupport::intent_stack().classes()) {
        for (const auto& m : cls.methods) EXPECT_EQ(one.abstract(m.description), two.abstract(m.description));
    }
}

TEST(VerbTable, ParseAndErrors)
{
    auto t = VerbOpTable::parse("# c\nkeep\t0.1,0.2,0.3,0.4\n");
    ASSERT_NE(t.find("keep"), nullptr);
    EXPECT_DOUBLE_EQ((*t.find("keep"))[2], 0.3);
    EXPECT_NE(t.find_lemma("keeps"), nullptr);
    EXPECT_THROW(VerbOpTable::parse("x\t0.1,0.2,0.3\n"), ParseError);
    EXPECT_THROW(VerbOpTable::parse("x\t0.1,0.2,0.3,1.4\n"), ParseError);
    EXPECT_THROW(VerbOpTable::parse("x 0.1,0.2,0.3,0.4\n"), ParseError);
    EXPECT_NE(VerbOpTable::parse("a\t0,0,0,0\n").fingerprint(), VerbOpTable::parse("a\t0,0,0,1\n").fingerprint());
}
